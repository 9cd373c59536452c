//! Brute-force oracles and random generators shared by the integration
//! tests and the acceptance suite. Nothing here calls the production
//! solvers.
#![allow(dead_code)]

use std::collections::BTreeSet;

use curator::af::{ArgumentId, ArgumentationFramework};
use curator::domain::{CurationAction, RequestContext, Sphere};
use rand::seq::SliceRandom;
use rand::Rng;

pub type Ext = BTreeSet<String>;

/// All results of the 3^n labelling oracle for one framework.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OracleResult {
    pub grounded: Ext,
    pub complete: BTreeSet<Ext>,
    pub preferred: BTreeSet<Ext>,
    pub stable: BTreeSet<Ext>,
}

/// Every assignment of IN/OUT/UNDEC is checked against the labelling
/// conditions: IN iff all attackers OUT, OUT iff some attacker IN.
pub fn labelling_oracle(names: &[String], attacks: &[(usize, usize)]) -> OracleResult {
    let n = names.len();
    assert!(n <= 16);
    let mut attackers = vec![0u32; n];
    for &(a, t) in attacks {
        attackers[t] |= 1 << a;
    }
    let to_set = |mask: u32| -> Ext {
        (0..n).filter(|i| mask & (1 << i) != 0).map(|i| names[i].clone()).collect()
    };

    // digits: 0 = UNDEC, 1 = IN, 2 = OUT
    let mut digits = vec![0u8; n];
    let mut complete: Vec<(u32, u32)> = Vec::new();
    loop {
        let (mut inm, mut outm) = (0u32, 0u32);
        for (i, d) in digits.iter().enumerate() {
            match d {
                1 => inm |= 1 << i,
                2 => outm |= 1 << i,
                _ => {}
            }
        }
        let legal = (0..n).all(|i| {
            let all_out = attackers[i] & !outm == 0;
            let some_in = attackers[i] & inm != 0;
            match digits[i] {
                1 => all_out,
                2 => some_in,
                _ => !all_out && !some_in,
            }
        });
        if legal {
            complete.push((inm, outm));
        }
        // base-3 increment
        let mut i = 0;
        while i < n && digits[i] == 2 {
            digits[i] = 0;
            i += 1;
        }
        if i == n {
            break;
        }
        digits[i] += 1;
    }

    let full = if n == 32 { u32::MAX } else { (1u32 << n) - 1 };
    let grounded = complete
        .iter()
        .map(|&(i, _)| i)
        .find(|&g| complete.iter().all(|&(i, _)| i & g == g))
        .expect("a least complete extension exists");
    let preferred = complete
        .iter()
        .map(|&(i, _)| i)
        .filter(|&p| !complete.iter().any(|&(i, _)| i != p && i & p == p))
        .map(to_set)
        .collect();
    let stable = complete
        .iter()
        .filter(|&&(i, o)| i | o == full)
        .map(|&(i, _)| to_set(i))
        .collect();
    OracleResult {
        grounded: to_set(grounded),
        complete: complete.iter().map(|&(i, _)| to_set(i)).collect(),
        preferred,
        stable,
    }
}

#[derive(Debug, Clone)]
pub struct RandomAf {
    pub names: Vec<String>,
    pub attacks: Vec<(usize, usize)>,
}

impl RandomAf {
    pub fn framework(&self) -> ArgumentationFramework {
        let mut af = ArgumentationFramework::default();
        for n in &self.names {
            af.add_argument(ArgumentId::new(n.as_str()).unwrap());
        }
        for &(a, t) in &self.attacks {
            af.add_attack(
                ArgumentId::new(self.names[a].as_str()).unwrap(),
                ArgumentId::new(self.names[t].as_str()).unwrap(),
            )
            .unwrap();
        }
        af
    }

    pub fn oracle(&self) -> OracleResult {
        labelling_oracle(&self.names, &self.attacks)
    }
}

/// Each ordered pair, self-attacks included, is an attack with probability
/// `density`.
pub fn random_af<R: Rng>(rng: &mut R, n: usize, density: f64) -> RandomAf {
    let names = (0..n).map(|i| format!("a{i}")).collect();
    let mut attacks = Vec::new();
    for a in 0..n {
        for t in 0..n {
            if rng.gen_bool(density) {
                attacks.push((a, t));
            }
        }
    }
    RandomAf { names, attacks }
}

pub fn to_strings(exts: &BTreeSet<BTreeSet<ArgumentId>>) -> BTreeSet<Ext> {
    exts.iter()
        .map(|e| e.iter().map(|a| a.as_str().to_string()).collect())
        .collect()
}

// ---------------------------------------------------------------------------
// Decision oracle for the five default arguments, written out by hand.

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum OStance {
    Reject,
    MustLimit,
    MustNot,
    Caution,
    May,
}

struct OArg {
    name: &'static str,
    stance: OStance,
    rank: u8,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OracleDecision {
    pub action: CurationAction,
    pub contested: bool,
    pub prevailing: BTreeSet<String>,
}

fn conflict(a: OStance, b: OStance) -> bool {
    a != b && (a == OStance::Reject || b == OStance::Reject || a == OStance::MustNot || b == OStance::MustNot)
}

fn protectiveness(s: OStance) -> u8 {
    match s {
        OStance::Reject => 4,
        OStance::MustLimit => 3,
        OStance::MustNot => 2,
        OStance::Caution => 1,
        OStance::May => 0,
    }
}

fn to_action(s: OStance) -> CurationAction {
    match s {
        OStance::Reject => CurationAction::RejectRequest,
        OStance::MustLimit => CurationAction::LimitDiversity,
        OStance::MustNot => CurationAction::DoNotLimit,
        OStance::Caution => CurationAction::PermitLimitWithNudge,
        OStance::May => CurationAction::PermitLimit,
    }
}

/// Decision for the default knowledge base, computed from the flags alone:
/// applicable arguments, rank-filtered defeats and the least complete
/// labelling found by exhaustive search.
pub fn decision_oracle(sphere: Sphere, sensitive: bool, harm: bool, demographic: bool, skill: bool) -> OracleDecision {
    let mut args = Vec::new();
    if demographic || skill {
        args.push(OArg { name: "efficiency", stance: OStance::May, rank: 0 });
    }
    if sphere == Sphere::ProtectionSensitive || sensitive {
        args.push(OArg { name: "protection", stance: OStance::MustLimit, rank: 1 });
    }
    if sphere == Sphere::SharedResources {
        args.push(OArg { name: "inclusion", stance: OStance::MustNot, rank: 1 });
    }
    if sphere == Sphere::MaximumFreedom {
        args.push(OArg { name: "freedom-of-choice", stance: OStance::Caution, rank: 0 });
    }
    if harm {
        args.push(OArg { name: "no-harm", stance: OStance::Reject, rank: 2 });
    }
    if args.is_empty() {
        return OracleDecision {
            action: CurationAction::PermitLimit,
            contested: false,
            prevailing: BTreeSet::new(),
        };
    }

    let names: Vec<String> = args.iter().map(|a| a.name.to_string()).collect();
    let mut defeats = Vec::new();
    for (i, a) in args.iter().enumerate() {
        for (j, b) in args.iter().enumerate() {
            if i != j && conflict(a.stance, b.stance) && a.rank >= b.rank {
                defeats.push((i, j));
            }
        }
    }
    let grounded = labelling_oracle(&names, &defeats).grounded;
    let pick = |set: &dyn Fn(&OArg) -> bool| {
        args.iter()
            .filter(|a| set(a))
            .map(|a| a.stance)
            .max_by_key(|s| protectiveness(*s))
    };
    let accepted = pick(&|a| grounded.contains(a.name));
    match accepted {
        Some(s) => OracleDecision {
            action: to_action(s),
            contested: false,
            prevailing: grounded,
        },
        None => {
            // nothing accepted: every argument is undecided
            let s = pick(&|_| true).unwrap();
            OracleDecision {
                action: to_action(s),
                contested: true,
                prevailing: BTreeSet::new(),
            }
        }
    }
}

/// Context with exactly the given flags.
pub fn flag_context(sphere: Sphere, sensitive: bool, harm: bool, demographic: bool, skill: bool) -> RequestContext {
    RequestContext {
        request_text: "request".into(),
        sphere: Some(sphere),
        sensitive,
        harm,
        demographic_target: demographic,
        skill_specific: skill,
        ..Default::default()
    }
}

/// All 48 flag combinations in a fixed order.
pub fn all_flag_combinations() -> Vec<(Sphere, bool, bool, bool, bool)> {
    let mut out = Vec::new();
    for &sphere in Sphere::ALL {
        for bits in 0..16u8 {
            out.push((sphere, bits & 1 != 0, bits & 2 != 0, bits & 4 != 0, bits & 8 != 0));
        }
    }
    out
}

pub const TOPICS: &[&str] = &[
    "leisure", "sports", "art", "economy", "politics", "education", "religion", "health",
    "medicine", "psychology",
];

/// Random context: random topic tags, maybe an explicit sphere, random
/// flags and preference.
pub fn random_context<R: Rng>(rng: &mut R) -> RequestContext {
    let k = rng.gen_range(1..=3);
    let topic_tags = TOPICS.choose_multiple(rng, k).map(|t| t.to_string()).collect();
    let sphere = if rng.gen_bool(0.5) {
        Some(*Sphere::ALL.choose(rng).unwrap())
    } else {
        None
    };
    RequestContext {
        request_text: format!("request {}", rng.gen::<u32>()),
        topic_tags,
        sphere,
        demographic_target: rng.gen(),
        skill_specific: rng.gen(),
        sensitive: rng.gen(),
        harm: rng.gen(),
        diversity_preference: *curator::domain::DiversityPreference::ALL.choose(rng).unwrap(),
        situatedness: String::new(),
    }
}

// ---------------------------------------------------------------------------
// DSL file generator.

const VALUES: &[&str] = &[
    "inclusion", "tolerance", "freedom-of-choice", "efficiency", "autonomy", "well-being",
    "health", "dignity", "justice", "no-harm-principle",
];
const STANCES: &[&str] = &["must-limit", "must-not-limit", "may-limit", "may-limit-caution", "reject-request"];
const SPHERES: &[&str] = &["maximum-freedom", "shared-resources", "protection-sensitive"];
const BOOL_FIELDS: &[&str] = &["sensitive", "harm", "demographic_target", "skill_specific"];
const ACTIONS: &[&str] = &["limit-diversity", "do-not-limit", "permit-limit", "permit-limit-with-nudge", "reject-request"];
const PREFERENCES: &[&str] = &["similar", "different", "unspecified"];

fn random_atom<R: Rng>(rng: &mut R) -> String {
    let op = if rng.gen_bool(0.8) { "=" } else { "!=" };
    match rng.gen_range(0..3) {
        0 => format!("sphere {op} {}", SPHERES.choose(rng).unwrap()),
        1 => format!("preference {op} {}", PREFERENCES.choose(rng).unwrap()),
        _ => format!("{} {op} {}", BOOL_FIELDS.choose(rng).unwrap(), rng.gen::<bool>()),
    }
}

pub fn random_condition<R: Rng>(rng: &mut R, depth: u32) -> String {
    if depth == 0 || rng.gen_bool(0.4) {
        return random_atom(rng);
    }
    match rng.gen_range(0..4) {
        0 => format!("not ({})", random_condition(rng, depth - 1)),
        1 => format!("({})", random_condition(rng, depth - 1)),
        2 => format!("{} and {}", random_condition(rng, depth - 1), random_condition(rng, depth - 1)),
        _ => format!("{} or {}", random_condition(rng, depth - 1), random_condition(rng, depth - 1)),
    }
}

pub fn random_rule<R: Rng>(rng: &mut R, name: &str) -> String {
    let k = rng.gen_range(1..=3);
    let values: Vec<&str> = VALUES.choose_multiple(rng, k).copied().collect();
    format!(
        "argument {name} {{\n  promotes: {}\n  applies-if: {}\n  stance: {}\n}}\n",
        values.join(", "),
        random_condition(rng, 3),
        STANCES.choose(rng).unwrap()
    )
}

/// A syntactically and semantically valid knowledge-base file: optional
/// topic declarations followed by one to six rules, names possibly repeated
/// to exercise shadowing, comments sprinkled in.
pub fn random_kb_file<R: Rng>(rng: &mut R) -> String {
    let mut out = String::new();
    for i in 0..rng.gen_range(0..3) {
        out.push_str(&format!("topic extra-{i} -> {}\n", SPHERES.choose(rng).unwrap()));
    }
    for _ in 0..rng.gen_range(1..=6) {
        if rng.gen_bool(0.2) {
            out.push_str("# generated\n");
        }
        let name = format!("rule-{}", rng.gen_range(0..5));
        out.push_str(&random_rule(rng, &name));
        out.push('\n');
    }
    out
}

/// A valid scenario file with one to three fixtures.
pub fn random_scenario_file<R: Rng>(rng: &mut R) -> String {
    let mut out = String::new();
    for i in 0..rng.gen_range(1..=3) {
        out.push_str(&format!("scenario \"case {i}\" {{\n"));
        if rng.gen_bool(0.7) {
            out.push_str("  request_text: \"need \\\"help\\\"\"\n");
        }
        let k = rng.gen_range(1..=3);
        let tags: Vec<&str> = TOPICS.choose_multiple(rng, k).copied().collect();
        out.push_str(&format!("  topic_tags: {}\n", tags.join(", ")));
        if rng.gen_bool(0.3) {
            out.push_str(&format!("  sphere: {}\n", SPHERES.choose(rng).unwrap()));
        }
        for f in BOOL_FIELDS {
            if rng.gen_bool(0.3) {
                out.push_str(&format!("  {f}: {}\n", rng.gen::<bool>()));
            }
        }
        if rng.gen_bool(0.3) {
            out.push_str(&format!("  diversity_preference: {}\n", PREFERENCES.choose(rng).unwrap()));
        }
        out.push_str(&format!("  expect: {}\n", ACTIONS.choose(rng).unwrap()));
        if rng.gen_bool(0.3) {
            out.push_str("  note: \"generated\"\n");
        }
        out.push_str("}\n\n");
    }
    out
}

/// An invalidating edit of a valid knowledge-base file together with the
/// 1-based line the error must be reported on.
pub fn mutate_kb_file<R: Rng>(rng: &mut R, text: &str) -> (String, usize, &'static str) {
    let lines: Vec<&str> = text.lines().collect();
    let find = |prefix: &str| -> Vec<usize> {
        lines
            .iter()
            .enumerate()
            .filter(|(_, l)| l.trim_start().starts_with(prefix))
            .map(|(i, _)| i)
            .collect()
    };
    let replace = |idx: usize, new: String| -> String {
        let mut out: Vec<String> = lines.iter().map(|l| l.to_string()).collect();
        out[idx] = new;
        out.join("\n") + "\n"
    };
    loop {
        match rng.gen_range(0..5) {
            0 => {
                let idx = *find("stance:").choose(rng).unwrap();
                return (replace(idx, "  stance: perhaps".into()), idx + 1, "unknown-stance");
            }
            1 => {
                let idx = *find("promotes:").choose(rng).unwrap();
                return (replace(idx, "  promotes: kindness".into()), idx + 1, "unknown-value");
            }
            2 => {
                let idx = *find("applies-if:").choose(rng).unwrap();
                return (replace(idx, "  applies-if: mood = happy".into()), idx + 1, "unknown-field");
            }
            3 => {
                let idx = *find("applies-if:").choose(rng).unwrap();
                let broken = format!("{} and", lines[idx]);
                return (replace(idx, broken), idx + 1, "syntax-error");
            }
            _ => {
                let candidates = find("topic ");
                if let Some(&idx) = candidates.choose(rng) {
                    return (replace(idx, "topic extra -> nowhere".into()), idx + 1, "unknown-value");
                }
            }
        }
    }
}
