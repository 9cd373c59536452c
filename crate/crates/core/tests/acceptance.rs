//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any criterion fails.

mod common;

use std::collections::BTreeSet;
use std::path::Path;
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use common::{
    all_flag_combinations, decision_oracle, flag_context, mutate_kb_file, random_af,
    random_context, random_kb_file, random_rule, random_scenario_file, to_strings, Ext, RandomAf,
};
use curator::af::{complete_labellings, grounded, preferred, stable};
use curator::coach::{kb_append_text, kb_init, kb_load, kb_load_at};
use curator::domain::{CurationAction, RequestContext, Sphere};
use curator::dsl::{emit_kb, emit_scenarios, parse_kb, parse_scenario};
use curator::fixtures::{BUNDLED_SCENARIOS, DEFAULT_KB_TEXT};
use curator::rules::{decide, default_kb};
use curator::service::{replay_decisions, DecisionRecord};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

// Pinned tolerances and sample sizes.
const SAFE_SPACE_BUDGET: Duration = Duration::from_secs(1);
const SEMANTICS_BUDGET: Duration = Duration::from_secs(30);
const AF_INSTANCES: usize = 240;
const AF_MAX_ARGS: usize = 10;
const AF_MAX_DENSITY: f64 = 0.5;
const HARM_CONTEXTS: usize = 1000;
const FUZZ_FILES: usize = 500;
const REPLAY_DECISIONS: usize = 60;
const REPLAY_APPENDS: usize = 4;
const SEED: u64 = 0x5eed_c0de;

type Outcome = Result<String, String>;
type Criterion<'a> = (&'static str, Box<dyn Fn() -> Outcome + 'a>);

fn check(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn safe_space_golden() -> Outcome {
    let start = Instant::now();
    let ctx = RequestContext {
        request_text: "Looking for people who went through burnout to talk to".into(),
        topic_tags: ["psychology".to_string(), "health".to_string()].into(),
        sensitive: true,
        harm: false,
        ..Default::default()
    };
    let d = decide(ctx, &default_kb()).map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();
    check(d.action == CurationAction::LimitDiversity, || format!("action {}", d.action))?;
    check(!d.contested, || "contested".into())?;
    let prevailing: Vec<_> = d.prevailing.iter().map(|a| a.as_str()).collect();
    check(prevailing == ["protection"], || format!("prevailing {prevailing:?}"))?;
    check(elapsed < SAFE_SPACE_BUDGET, || format!("took {elapsed:?}"))?;
    Ok(format!("limit-diversity, prevailing {{protection}}, {elapsed:?}"))
}

/// Written out by hand from the five default arguments, independently of
/// both the engine and the oracle. The demographic and skill flags never change the outcome: efficiency is
/// outranked or agrees with whatever prevails.
fn frozen_expectation(sphere: Sphere, sensitive: bool, harm: bool) -> (CurationAction, bool) {
    use CurationAction::*;
    if harm {
        return (RejectRequest, false);
    }
    match sphere {
        Sphere::ProtectionSensitive => (LimitDiversity, false),
        Sphere::MaximumFreedom if sensitive => (LimitDiversity, false),
        Sphere::MaximumFreedom => (PermitLimitWithNudge, false),
        Sphere::SharedResources if sensitive => (LimitDiversity, true),
        Sphere::SharedResources => (DoNotLimit, false),
    }
}

fn truth_table() -> Outcome {
    let kb = default_kb();
    let rows = all_flag_combinations();
    check(rows.len() == 48, || format!("{} rows", rows.len()))?;
    for (sphere, sensitive, harm, dem, skill) in rows {
        let row = || format!("{sphere} sensitive={sensitive} harm={harm} demographic={dem} skill={skill}");
        let d = decide(flag_context(sphere, sensitive, harm, dem, skill), &kb).map_err(|e| e.to_string())?;
        let o = decision_oracle(sphere, sensitive, harm, dem, skill);
        let prevailing: BTreeSet<String> = d.prevailing.iter().map(|a| a.to_string()).collect();
        check((d.action, d.contested, &prevailing) == (o.action, o.contested, &o.prevailing), || {
            format!("{}: engine {} contested={} vs oracle {} contested={}", row(), d.action, d.contested, o.action, o.contested)
        })?;
        let frozen = frozen_expectation(sphere, sensitive, harm);
        check((d.action, d.contested) == frozen, || format!("{}: frozen table says {frozen:?}", row()))?;
    }
    Ok("48/48 contexts agree with oracle and frozen table".into())
}

fn instances() -> Vec<RandomAf> {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    (0..AF_INSTANCES)
        .map(|i| {
            let n = i % (AF_MAX_ARGS + 1);
            let density = rng.gen_range(0.0..=AF_MAX_DENSITY);
            random_af(&mut rng, n, density)
        })
        .collect()
}

fn semantics_oracle(instances: &[RandomAf]) -> Outcome {
    let start = Instant::now();
    for (i, r) in instances.iter().enumerate() {
        let af = r.framework();
        let o = r.oracle();
        let g: Ext = grounded(&af).in_set().iter().map(|a| a.to_string()).collect();
        let complete: BTreeSet<Ext> = complete_labellings(&af)
            .map_err(|e| e.to_string())?
            .iter()
            .map(|l| l.in_set().iter().map(|a| a.to_string()).collect())
            .collect();
        let pref = to_strings(&preferred(&af).map_err(|e| e.to_string())?);
        let stab = to_strings(&stable(&af).map_err(|e| e.to_string())?);
        check(g == o.grounded, || format!("instance {i}: grounded"))?;
        check(complete == o.complete, || format!("instance {i}: complete"))?;
        check(pref == o.preferred, || format!("instance {i}: preferred"))?;
        check(stab == o.stable, || format!("instance {i}: stable"))?;
    }
    let elapsed = start.elapsed();
    check(elapsed < SEMANTICS_BUDGET, || format!("took {elapsed:?}"))?;
    Ok(format!("{} frameworks, n <= {AF_MAX_ARGS}, 4 semantics, {elapsed:?}", instances.len()))
}

fn classical_identities(instances: &[RandomAf]) -> Outcome {
    for (i, r) in instances.iter().enumerate() {
        let af = r.framework();
        let g = grounded(&af).in_set();
        let complete = complete_labellings(&af).map_err(|e| e.to_string())?;
        let pref = preferred(&af).map_err(|e| e.to_string())?;
        let stab = stable(&af).map_err(|e| e.to_string())?;
        check(stab.is_subset(&pref), || format!("instance {i}: stable not within preferred"))?;
        check(complete.iter().all(|l| l.in_set().is_superset(&g)), || {
            format!("instance {i}: grounded not within a complete extension")
        })?;
        let mut all = vec![g.clone()];
        all.extend(complete.iter().map(|l| l.in_set()));
        all.extend(pref.iter().cloned());
        for e in &all {
            check(af.is_conflict_free(e).unwrap_or(false), || format!("instance {i}: {e:?} has a conflict"))?;
        }
    }
    Ok(format!("{} frameworks", instances.len()))
}

fn no_harm_dominance() -> Outcome {
    let kb = default_kb();
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 1);
    for i in 0..HARM_CONTEXTS {
        let mut ctx = random_context(&mut rng);
        ctx.harm = true;
        let d = decide(ctx, &kb).map_err(|e| format!("context {i}: {e}"))?;
        check(d.action == CurationAction::RejectRequest, || format!("context {i}: {}", d.action))?;
    }
    Ok(format!("{HARM_CONTEXTS}/{HARM_CONTEXTS} reject-request"))
}

fn dsl_round_trip() -> Outcome {
    let kb_round_trip = |text: &str| -> Result<(), String> {
        let kb = parse_kb(text).map_err(|e| format!("{e}\n{text}"))?;
        let again = parse_kb(&emit_kb(&kb)).map_err(|e| e.to_string())?;
        check(again.rules() == kb.rules() && again.topics() == kb.topics(), || format!("kb differs\n{text}"))
    };
    let scn_round_trip = |text: &str| -> Result<(), String> {
        let f = parse_scenario(text).map_err(|e| format!("{e}\n{text}"))?;
        let again = parse_scenario(&emit_scenarios(&f)).map_err(|e| e.to_string())?;
        check(again == f, || format!("scenario differs\n{text}"))
    };

    kb_round_trip(DEFAULT_KB_TEXT)?;
    for (_, text) in BUNDLED_SCENARIOS {
        scn_round_trip(text)?;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 2);
    let mut mutations = 0;
    for i in 0..FUZZ_FILES {
        if i % 2 == 0 {
            let text = random_kb_file(&mut rng);
            kb_round_trip(&text)?;
            let (bad, line, kind) = mutate_kb_file(&mut rng, &text);
            let e = parse_kb(&bad).err().ok_or_else(|| format!("mutation accepted\n{bad}"))?;
            check(e.span.line == line && e.kind.as_str() == kind, || {
                format!("expected {kind} at line {line}, got {e}\n{bad}")
            })?;
            mutations += 1;
        } else {
            scn_round_trip(&random_scenario_file(&mut rng))?;
        }
    }
    Ok(format!(
        "default KB + {} fixtures + {FUZZ_FILES} fuzz files; {mutations}/{mutations} mutations rejected at the expected span",
        BUNDLED_SCENARIOS.len()
    ))
}

fn replay_determinism() -> Outcome {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let log = dir.path().join("kb.log");
    let decisions = dir.path().join("decisions.jsonl");
    kb_init(&log, &default_kb(), "system").map_err(|e| e.to_string())?;

    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 3);
    let mut recorded: Vec<(u64, RequestContext, String)> = Vec::new();
    let mut lines = String::new();
    let per_version = REPLAY_DECISIONS / (REPLAY_APPENDS + 1);
    for round in 0..=REPLAY_APPENDS {
        if round > 0 {
            let name = format!("coached-{}", rng.gen_range(0..3));
            let rule = random_rule(&mut rng, &name);
            kb_append_text(&log, &rule, "reviewer").map_err(|e| e.to_string())?;
        }
        let kb = kb_load(&log).map_err(|e| e.to_string())?;
        for _ in 0..per_version {
            let ctx = random_context(&mut rng);
            let d = decide(ctx.clone(), &kb).map_err(|e| e.to_string())?;
            let rec = DecisionRecord {
                kb_version: kb.version(),
                context: ctx.clone(),
                decision_sha256: d.sha256(),
            };
            lines.push_str(&serde_json::to_string(&rec).unwrap());
            lines.push('\n');
            recorded.push((kb.version(), ctx, d.to_json()));
        }
    }
    std::fs::write(&decisions, lines).map_err(|e| e.to_string())?;

    for (i, (version, ctx, json)) in recorded.iter().enumerate() {
        let kb = kb_load_at(&log, *version).map_err(|e| e.to_string())?;
        let again = decide(ctx.clone(), &kb).map_err(|e| e.to_string())?.to_json();
        check(&again == json, || format!("decision {i} at version {version} differs"))?;
    }
    let report = replay_decisions(&decisions, &log).map_err(|e| e.to_string())?;
    check(report.checked == recorded.len() && report.mismatches.is_empty(), || {
        format!("{} mismatches of {}", report.mismatches.len(), report.checked)
    })?;
    let versions: BTreeSet<u64> = recorded.iter().map(|r| r.0).collect();
    Ok(format!(
        "{} decisions over versions {:?}, byte-identical and hash-equal",
        recorded.len(),
        versions
    ))
}

fn six_fixture_suite() -> Outcome {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures/scenarios");
    let out = Command::new(env!("CARGO_BIN_EXE_curator"))
        .args(["scenarios", "run", "--fixtures"])
        .arg(&dir)
        .env_remove("CURATOR_KB")
        .output()
        .map_err(|e| e.to_string())?;
    let stdout = String::from_utf8_lossy(&out.stdout);
    check(out.status.code() == Some(0), || format!("exit {:?}\n{stdout}", out.status.code()))?;
    check(stdout.contains("6/6 fixtures passed"), || stdout.to_string())?;
    Ok("6/6 via `curator scenarios run`, exit 0".into())
}

fn main() -> ExitCode {
    let instances = instances();
    let criteria: Vec<Criterion> = vec![
        ("safe-space-golden", Box::new(safe_space_golden)),
        ("five-argument-truth-table", Box::new(truth_table)),
        ("semantics-oracle", Box::new(|| semantics_oracle(&instances))),
        ("classical-identities", Box::new(|| classical_identities(&instances))),
        ("no-harm-dominance", Box::new(no_harm_dominance)),
        ("dsl-round-trip", Box::new(dsl_round_trip)),
        ("replay-determinism", Box::new(replay_determinism)),
        ("six-fixture-suite", Box::new(six_fixture_suite)),
    ];
    let mut failed = 0;
    for (name, run) in &criteria {
        match run() {
            Ok(detail) => println!("PASS {name}: {detail}"),
            Err(why) => {
                failed += 1;
                println!("FAIL {name}: {why}");
            }
        }
    }
    println!("acceptance: {}/{} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
