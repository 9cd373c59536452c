use std::collections::BTreeSet;
use std::fmt::Write as _;

use serde::Serialize;

use super::decide::{Decision, TraceEntry};
use super::Stance;
use crate::af::{ArgumentId, Labelling};
use crate::domain::CurationAction;
use crate::value::{EthicalValue, RemovedAttack, ValueRank};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ApplicableArgument {
    pub argument: ArgumentId,
    pub stance: Stance,
    pub rank: ValueRank,
    pub promotes: BTreeSet<EthicalValue>,
    pub premises: Vec<String>,
}

/// Human- and machine-readable account of a decision.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Explanation {
    pub action: CurationAction,
    pub contested: bool,
    pub applicable: Vec<ApplicableArgument>,
    pub defeats: Vec<(ArgumentId, ArgumentId)>,
    pub removed: Vec<RemovedAttack>,
    pub labelling: Labelling,
    pub mapping: String,
    pub fallback: Option<String>,
}

pub fn explain(decision: &Decision) -> Explanation {
    let mut applicable = Vec::new();
    let mut removed = Vec::new();
    let mut mapping = String::new();
    let mut fallback = None;
    for entry in &decision.trace {
        match entry {
            TraceEntry::Applicable {
                argument,
                stance,
                promotes,
                rank,
                premises,
            } => applicable.push(ApplicableArgument {
                argument: argument.clone(),
                stance: *stance,
                rank: *rank,
                promotes: promotes.clone(),
                premises: premises.clone(),
            }),
            TraceEntry::RemovedAttack(r) => removed.push(r.clone()),
            TraceEntry::Mapping { rule, .. } => mapping = rule.clone(),
            TraceEntry::Fallback {
                undecided,
                stance,
                action,
                note,
            } => {
                let names: Vec<_> = undecided.iter().map(ArgumentId::as_str).collect();
                fallback = Some(format!(
                    "undecided: {}; most protective stance {stance} -> {action}; {note}",
                    names.join(", ")
                ));
            }
            TraceEntry::Context { .. }
            | TraceEntry::RawAttack { .. }
            | TraceEntry::Semantics { .. }
            | TraceEntry::NoneApplicable { .. } => {}
        }
    }
    Explanation {
        action: decision.action,
        contested: decision.contested,
        applicable,
        defeats: decision.defeats().into_iter().collect(),
        removed,
        labelling: decision.labelling.clone(),
        mapping,
        fallback,
    }
}

impl Explanation {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("explanation serializes")
    }

    pub fn render_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(
            out,
            "decision: {}{}",
            self.action,
            if self.contested { " (contested)" } else { "" }
        );
        if self.applicable.is_empty() {
            out.push_str("no argument applicable; user preference respected\n");
        } else {
            out.push_str("applicable arguments:\n");
            for a in &self.applicable {
                let values: Vec<_> = a.promotes.iter().map(|v| v.as_str()).collect();
                let _ = writeln!(
                    out,
                    "  {} [{}; {}: {}]",
                    a.argument,
                    a.stance,
                    a.rank,
                    values.join(", ")
                );
                for p in &a.premises {
                    let _ = writeln!(out, "    because {p}");
                }
            }
            out.push_str("defeats:\n");
            if self.defeats.is_empty() {
                out.push_str("  (none)\n");
            }
            for (a, b) in &self.defeats {
                let _ = writeln!(out, "  {a} -> {b}");
            }
            if !self.removed.is_empty() {
                out.push_str("attacks removed by value weighting:\n");
                for r in &self.removed {
                    let _ = writeln!(
                        out,
                        "  {} -> {} ({} < {})",
                        r.attacker, r.target, r.attacker_rank, r.target_rank
                    );
                }
            }
            out.push_str("labelling (grounded):\n");
            for (arg, label) in self.labelling.iter() {
                let _ = writeln!(out, "  {arg}: {label}");
            }
        }
        if let Some(f) = &self.fallback {
            let _ = writeln!(out, "fallback: {f}");
        }
        let _ = writeln!(out, "mapping: {}", self.mapping);
        out
    }
}
