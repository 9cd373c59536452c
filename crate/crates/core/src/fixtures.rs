//! Knowledge base and scenario fixtures shipped with the engine.

use crate::dsl::{parse_scenario, ScenarioFixture};

/// The five default arguments in DSL form.
pub const DEFAULT_KB_TEXT: &str = include_str!("../fixtures/default.kb");

/// Bundled scenario files as `(file name, text)`.
pub const BUNDLED_SCENARIOS: &[(&str, &str)] = &[
    (
        "01-safe-space-mental-health.scn",
        include_str!("../fixtures/scenarios/01-safe-space-mental-health.scn"),
    ),
    (
        "02-economics-study-help.scn",
        include_str!("../fixtures/scenarios/02-economics-study-help.scn"),
    ),
    (
        "03-running-partner.scn",
        include_str!("../fixtures/scenarios/03-running-partner.scn"),
    ),
    (
        "04-pandemic-policy-debate.scn",
        include_str!("../fixtures/scenarios/04-pandemic-policy-debate.scn"),
    ),
    (
        "05-exclusionary-roommate-search.scn",
        include_str!("../fixtures/scenarios/05-exclusionary-roommate-search.scn"),
    ),
    (
        "06-swimming-dress-code.scn",
        include_str!("../fixtures/scenarios/06-swimming-dress-code.scn"),
    ),
];

/// All bundled fixtures, parsed, in file order.
pub fn bundled_fixtures() -> Vec<ScenarioFixture> {
    BUNDLED_SCENARIOS
        .iter()
        .flat_map(|(_, text)| parse_scenario(text).expect("bundled fixtures parse"))
        .collect()
}
