//! Knowledge-base persistence and coaching: preview the effect of a
//! counter-rule on a decision before committing it to the log.

mod log;

use std::collections::BTreeSet;

use serde::Serialize;
use thiserror::Error;

use crate::af::{ArgumentId, Label};
use crate::domain::{CurationAction, DomainError, RequestContext};
use crate::dsl::{parse_rule, DslError, SourceSpan};
use crate::rules::{decide, ArgumentRule, Decision, KnowledgeBase};

pub use log::{
    is_log, kb_append, kb_append_entry, kb_append_text, kb_init, kb_load, kb_load_at,
    load_kb_file, parse_log, read_log, LogEntry, LOG_HEADER,
};

#[derive(Debug, Error)]
pub enum CoachError {
    #[error("not a knowledge-base log: first line must be `kbversion 1`")]
    BadHeader,
    #[error("corrupt log entry at {span}: {message}")]
    CorruptEntry { span: SourceSpan, message: String },
    #[error("invalid entry: {0}")]
    Validation(String),
    #[error("version {requested} does not exist (latest is {latest})")]
    UnknownVersion { requested: u64, latest: u64 },
    #[error(transparent)]
    Parse(#[from] DslError),
    #[error(transparent)]
    Context(#[from] DomainError),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LabelChange {
    pub argument: ArgumentId,
    pub before: Option<Label>,
    pub after: Option<Label>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Change<T> {
    pub before: T,
    pub after: T,
}

/// Structural comparison of two decisions on the same context.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct DecisionDiff {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub action: Option<Change<CurationAction>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub contested: Option<Change<bool>>,
    pub labelling: Vec<LabelChange>,
    pub new_defeats: Vec<(ArgumentId, ArgumentId)>,
    pub removed_defeats: Vec<(ArgumentId, ArgumentId)>,
}

fn changed<T: PartialEq>(before: T, after: T) -> Option<Change<T>> {
    (before != after).then_some(Change { before, after })
}

impl DecisionDiff {
    pub fn between(before: &Decision, after: &Decision) -> Self {
        let args: BTreeSet<&ArgumentId> = before
            .labelling
            .iter()
            .chain(after.labelling.iter())
            .map(|(a, _)| a)
            .collect();
        let labelling = args
            .into_iter()
            .filter_map(|a| {
                let (b, c) = (before.labelling.get(a), after.labelling.get(a));
                (b != c).then(|| LabelChange {
                    argument: a.clone(),
                    before: b,
                    after: c,
                })
            })
            .collect();
        let (old, new) = (before.defeats(), after.defeats());
        Self {
            action: changed(before.action, after.action),
            contested: changed(before.contested, after.contested),
            labelling,
            new_defeats: new.difference(&old).cloned().collect(),
            removed_defeats: old.difference(&new).cloned().collect(),
        }
    }

    pub fn is_empty(&self) -> bool {
        *self == Self::default()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CoachingStep {
    pub before: Decision,
    pub proposed_rule: ArgumentRule,
    pub after: Decision,
    pub diff: DecisionDiff,
}

/// Decides `ctx` with and without the proposed rule. Nothing is persisted;
/// commit with [`kb_append`] or drop the step.
pub fn coach(
    ctx: RequestContext,
    kb: &KnowledgeBase,
    proposed_rule_text: &str,
) -> Result<CoachingStep, CoachError> {
    let rule = parse_rule(proposed_rule_text)?;
    coach_rule(ctx, kb, rule)
}

pub fn coach_rule(
    ctx: RequestContext,
    kb: &KnowledgeBase,
    rule: ArgumentRule,
) -> Result<CoachingStep, CoachError> {
    let before = decide(ctx.clone(), kb)?;
    let after = decide(ctx, &kb.with_rule(rule.clone()))?;
    let diff = DecisionDiff::between(&before, &after);
    Ok(CoachingStep {
        before,
        proposed_rule: rule,
        after,
        diff,
    })
}
