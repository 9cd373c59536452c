use std::collections::BTreeSet;

use serde::Serialize;

use super::{KnowledgeBase, Stance};
use crate::af::{grounded, ArgumentId, Label, Labelling, Semantics};
use crate::domain::{
    validate_context, CurationAction, DiversityPreference, DomainError, Instrument,
    RequestContext, Sphere,
};
use crate::value::{derive_defeat_graph, DomainArgument, EthicalValue, RemovedAttack, ValueRank};

/// One step of the decision trace.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "step", rename_all = "snake_case")]
pub enum TraceEntry {
    Context {
        sphere: Sphere,
        sensitive: bool,
        harm: bool,
        demographic_target: bool,
        skill_specific: bool,
        diversity_preference: DiversityPreference,
    },
    Applicable {
        argument: ArgumentId,
        stance: Stance,
        promotes: BTreeSet<EthicalValue>,
        rank: ValueRank,
        premises: Vec<String>,
    },
    RawAttack {
        attacker: ArgumentId,
        target: ArgumentId,
    },
    RemovedAttack(RemovedAttack),
    Semantics {
        semantics: Semantics,
        labelling: Labelling,
    },
    Mapping {
        rule: String,
        action: CurationAction,
    },
    Fallback {
        undecided: Vec<ArgumentId>,
        stance: Stance,
        action: CurationAction,
        note: String,
    },
    NoneApplicable {
        note: String,
    },
}

/// Outcome of one curation decision. Field order is the JSON field order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Decision {
    pub action: CurationAction,
    pub instruments: Vec<Instrument>,
    pub prevailing: BTreeSet<ArgumentId>,
    pub labelling: Labelling,
    pub contested: bool,
    pub trace: Vec<TraceEntry>,
}

impl Decision {
    /// Compact JSON; the canonical bytes used for hashing and transport.
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("decision serializes")
    }

    pub fn sha256(&self) -> String {
        use sha2::{Digest, Sha256};
        hex::encode(Sha256::digest(self.to_json().as_bytes()))
    }

    /// Defeat edges that survived value weighting, recovered from the trace.
    pub fn defeats(&self) -> BTreeSet<(ArgumentId, ArgumentId)> {
        let removed: BTreeSet<_> = self
            .trace
            .iter()
            .filter_map(|e| match e {
                TraceEntry::RemovedAttack(r) => Some((r.attacker.clone(), r.target.clone())),
                _ => None,
            })
            .collect();
        self.trace
            .iter()
            .filter_map(|e| match e {
                TraceEntry::RawAttack { attacker, target } => {
                    Some((attacker.clone(), target.clone()))
                }
                _ => None,
            })
            .filter(|edge| !removed.contains(edge))
            .collect()
    }
}

fn instruments_for(action: CurationAction) -> Vec<Instrument> {
    match action {
        CurationAction::RejectRequest => vec![Instrument::BlockRequest, Instrument::ReportComplaint],
        CurationAction::DoNotLimit => vec![Instrument::ScopeOptions],
        CurationAction::PermitLimitWithNudge => {
            vec![Instrument::NudgeRevise, Instrument::ScopeOptions]
        }
        CurationAction::LimitDiversity | CurationAction::PermitLimit => Vec::new(),
    }
}

/// One argument per rule whose condition holds in `ctx`, in rule order.
pub fn instantiate(kb: &KnowledgeBase, ctx: &RequestContext) -> Vec<DomainArgument> {
    kb.rules()
        .iter()
        .filter_map(|rule| {
            let premises = rule.applies_if().support(ctx)?;
            Some(
                DomainArgument::new(
                    rule.name().clone(),
                    rule.stance(),
                    rule.promotes().clone(),
                    premises,
                )
                .expect("rules carry non-empty promotes"),
            )
        })
        .collect()
}

/// Symmetric attacks between every two arguments with conflicting stances.
pub fn raw_attacks(args: &[DomainArgument]) -> BTreeSet<(ArgumentId, ArgumentId)> {
    let mut out = BTreeSet::new();
    for a in args {
        for b in args {
            if a.id() != b.id() && a.stance().conflicts_with(b.stance()) {
                out.insert((a.id().clone(), b.id().clone()));
            }
        }
    }
    out
}

/// Runs instantiate, raw attacks, value weighting, grounded semantics and
/// the action mapping.
pub fn decide(ctx: RequestContext, kb: &KnowledgeBase) -> Result<Decision, DomainError> {
    let ctx = validate_context(ctx, kb.sphere_map())?;
    let mut trace = vec![TraceEntry::Context {
        sphere: ctx.sphere.expect("validated context has a sphere"),
        sensitive: ctx.sensitive,
        harm: ctx.harm,
        demographic_target: ctx.demographic_target,
        skill_specific: ctx.skill_specific,
        diversity_preference: ctx.diversity_preference,
    }];

    let args = instantiate(kb, &ctx);
    if args.is_empty() {
        trace.push(TraceEntry::NoneApplicable {
            note: "no argument applicable; user preference respected".into(),
        });
        trace.push(TraceEntry::Mapping {
            rule: "no applicable argument -> permit-limit".into(),
            action: CurationAction::PermitLimit,
        });
        return Ok(Decision {
            action: CurationAction::PermitLimit,
            instruments: Vec::new(),
            prevailing: BTreeSet::new(),
            labelling: Labelling::default(),
            contested: false,
            trace,
        });
    }

    for a in &args {
        trace.push(TraceEntry::Applicable {
            argument: a.id().clone(),
            stance: a.stance(),
            promotes: a.promotes().clone(),
            rank: a.effective_rank(),
            premises: a.premises().to_vec(),
        });
    }
    let raw = raw_attacks(&args);
    trace.extend(raw.iter().map(|(a, t)| TraceEntry::RawAttack {
        attacker: a.clone(),
        target: t.clone(),
    }));
    let graph = derive_defeat_graph(&args, &raw).expect("raw attacks stay within the argument set");
    trace.extend(graph.removed.iter().cloned().map(TraceEntry::RemovedAttack));

    let labelling = grounded(&graph.framework);
    trace.push(TraceEntry::Semantics {
        semantics: Semantics::Grounded,
        labelling: labelling.clone(),
    });

    let with_label = |label: Label| -> Vec<&DomainArgument> {
        args.iter()
            .filter(|a| labelling.get(a.id()) == Some(label))
            .collect()
    };
    let accepted = with_label(Label::In);
    let undecided = with_label(Label::Undec);
    let prevailing: BTreeSet<ArgumentId> = accepted.iter().map(|a| a.id().clone()).collect();

    let strongest = |set: &[&DomainArgument]| set.iter().map(|a| a.stance()).max_by_key(|s| s.protectiveness());

    let (action, instruments, contested) = if let Some(stance) = strongest(&accepted) {
        let action = stance.action();
        trace.push(TraceEntry::Mapping {
            rule: format!("{stance} argument IN -> {action}"),
            action,
        });
        (action, instruments_for(action), false)
    } else if let Some(stance) = strongest(&undecided) {
        let action = stance.action();
        let mut instruments = instruments_for(action);
        if !instruments.contains(&Instrument::NudgeRevise) {
            instruments.push(Instrument::NudgeRevise);
        }
        trace.push(TraceEntry::Fallback {
            undecided: undecided.iter().map(|a| a.id().clone()).collect(),
            stance,
            action,
            note: "no argument accepted; most protective undecided stance applied, flagged for review"
                .into(),
        });
        trace.push(TraceEntry::Mapping {
            rule: format!("precautionary fallback: {stance} undecided -> {action}"),
            action,
        });
        (action, instruments, true)
    } else {
        unreachable!("grounded labelling with no IN argument has every argument UNDEC")
    };

    Ok(Decision {
        action,
        instruments,
        prevailing,
        labelling,
        contested,
        trace,
    })
}
