mod common;

use std::collections::BTreeSet;

use common::{all_flag_combinations, decision_oracle, flag_context, random_context, random_kb_file};
use curator::domain::{CurationAction, Instrument, RequestContext, Sphere};
use curator::dsl::parse_kb;
use curator::rules::{decide, default_kb, ArgumentRule, KnowledgeBase};
use curator::value::{EthicalValue, ValueRank};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn any_context() -> impl Strategy<Value = RequestContext> {
    any::<u64>().prop_map(|s| random_context(&mut ChaCha8Rng::seed_from_u64(s)))
}

fn any_kb() -> impl Strategy<Value = KnowledgeBase> {
    any::<u64>().prop_map(|s| parse_kb(&random_kb_file(&mut ChaCha8Rng::seed_from_u64(s))).unwrap())
}

/// Same rules with every promoted-value set replaced by one value of the
/// same effective rank.
fn rescaled(kb: &KnowledgeBase) -> KnowledgeBase {
    let mut out = KnowledgeBase::empty();
    for rule in kb.rules() {
        let v = match rule.promotes().iter().map(|v| v.rank()).max().unwrap() {
            ValueRank::Instrumental => EthicalValue::Tolerance,
            ValueRank::Fundamental => EthicalValue::Autonomy,
            ValueRank::Paramount => EthicalValue::NoHarmPrinciple,
        };
        out.add_rule(
            ArgumentRule::new(rule.name().clone(), rule.applies_if().clone(), rule.stance(), BTreeSet::from([v]))
                .unwrap(),
        );
    }
    out
}

#[test]
fn truth_table_matches_oracle() {
    let kb = default_kb();
    for (sphere, sensitive, harm, demographic, skill) in all_flag_combinations() {
        let d = decide(flag_context(sphere, sensitive, harm, demographic, skill), &kb).unwrap();
        let o = decision_oracle(sphere, sensitive, harm, demographic, skill);
        let got: BTreeSet<String> = d.prevailing.iter().map(|a| a.to_string()).collect();
        assert_eq!(
            (d.action, d.contested, got),
            (o.action, o.contested, o.prevailing),
            "{sphere} sensitive={sensitive} harm={harm} demographic={demographic} skill={skill}"
        );
    }
}

#[test]
fn protection_prevails_over_efficiency() {
    for (demographic, skill) in [(true, false), (false, true), (true, true)] {
        let d = decide(flag_context(Sphere::ProtectionSensitive, true, false, demographic, skill), &default_kb()).unwrap();
        assert_eq!(d.action, CurationAction::LimitDiversity);
        assert!(d.prevailing.iter().any(|a| a.as_str() == "protection"));
        assert!(!d.contested);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn no_harm_dominates(mut ctx in any_context()) {
        ctx.harm = true;
        let d = decide(ctx, &default_kb()).unwrap();
        prop_assert_eq!(d.action, CurationAction::RejectRequest);
        prop_assert!(!d.contested);
        prop_assert_eq!(d.instruments, vec![Instrument::BlockRequest, Instrument::ReportComplaint]);
    }

    #[test]
    fn prevailing_arguments_never_conflict(kb in any_kb(), ctx in any_context()) {
        let d = decide(ctx, &kb).unwrap();
        let stances: Vec<_> = d.prevailing.iter().map(|a| kb.rule(a).unwrap().stance()).collect();
        for a in &stances {
            for b in &stances {
                prop_assert!(!a.conflicts_with(*b));
            }
        }
        if !d.contested && !stances.is_empty() {
            let top = stances.iter().max_by_key(|s| s.protectiveness()).unwrap();
            prop_assert_eq!(top.action(), d.action);
        }
    }

    #[test]
    fn fallback_is_protective_and_flagged(kb in any_kb(), ctx in any_context()) {
        let d = decide(ctx, &kb).unwrap();
        if d.contested {
            prop_assert!(d.prevailing.is_empty());
            prop_assert!(d.instruments.contains(&Instrument::NudgeRevise));
            let top = d
                .labelling
                .iter()
                .map(|(a, _)| kb.rule(a).unwrap().stance())
                .max_by_key(|s| s.protectiveness())
                .unwrap();
            prop_assert_eq!(top.action(), d.action);
        }
    }

    #[test]
    fn only_effective_rank_matters(kb in any_kb(), ctx in any_context()) {
        let a = decide(ctx.clone(), &kb).unwrap();
        let b = decide(ctx, &rescaled(&kb)).unwrap();
        prop_assert_eq!(a.action, b.action);
        prop_assert_eq!(a.contested, b.contested);
        prop_assert_eq!(&a.labelling, &b.labelling);
        prop_assert_eq!(a.defeats(), b.defeats());
    }

    #[test]
    fn decisions_are_deterministic(ctx in any_context()) {
        let kb = default_kb();
        let a = decide(ctx.clone(), &kb).unwrap();
        let b = decide(ctx.clone(), &kb).unwrap();
        prop_assert_eq!(a.to_json(), b.to_json());
        let shouted = RequestContext {
            topic_tags: ctx.topic_tags.iter().map(|t| format!(" {} ", t.to_uppercase())).collect(),
            ..ctx
        };
        prop_assert_eq!(decide(shouted, &kb).unwrap().sha256(), a.sha256());
    }
}
