//! Text format for knowledge-base rules (`.kb`) and scenario fixtures
//! (`.scn`).
//!
//! ```text
//! # comment
//! argument protection {
//!   promotes: dignity, health, well-being
//!   applies-if: sphere = protection-sensitive or sensitive = true
//!   stance: must-limit
//! }
//!
//! topic mental-health -> health
//!
//! scenario "late-night-anxiety" {
//!   request_text: "Does anyone know how to deal with panic attacks?"
//!   topic_tags: psychology
//!   sensitive: true
//!   expect: limit-diversity
//!   note: "safe space"
//! }
//! ```
//!
//! Newlines end field entries; other whitespace is insignificant. The
//! emitters write a canonical form (two-space indent, one blank line between
//! blocks) and drop comments.

mod emit;
mod lexer;
mod parser;

use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::domain::{validate_context, CurationAction, RequestContext, SphereMap};
use crate::rules::{ArgumentRule, KbEntry, KnowledgeBase, TopicDecl};

pub use emit::{emit_entry, emit_kb, emit_rule, emit_scenarios};

/// 1-based position in the source text.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct SourceSpan {
    pub line: usize,
    pub column: usize,
}

impl fmt::Display for SourceSpan {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.column)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum DslErrorKind {
    #[serde(rename = "syntax-error")]
    Syntax,
    UnknownField,
    UnknownValue,
    UnknownStance,
    InvalidContext,
}

impl DslErrorKind {
    pub fn as_str(self) -> &'static str {
        match self {
            DslErrorKind::Syntax => "syntax-error",
            DslErrorKind::UnknownField => "unknown-field",
            DslErrorKind::UnknownValue => "unknown-value",
            DslErrorKind::UnknownStance => "unknown-stance",
            DslErrorKind::InvalidContext => "invalid-context",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error, Serialize)]
#[error("{span}: {}: {message}", kind.as_str())]
pub struct DslError {
    pub kind: DslErrorKind,
    pub message: String,
    pub span: SourceSpan,
}

impl DslError {
    pub(crate) fn new(kind: DslErrorKind, message: impl Into<String>, span: SourceSpan) -> Self {
        Self {
            kind,
            message: message.into(),
            span,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Spanned<T> {
    pub node: T,
    pub span: SourceSpan,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Block {
    Rule(ArgumentRule),
    Topic(TopicDecl),
    Scenario(ScenarioFixture),
}

/// One scenario: a request context and the action it must produce.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ScenarioFixture {
    pub name: String,
    pub context: RequestContext,
    pub expect: CurationAction,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

/// Parses any mix of blocks, keeping their positions.
pub fn parse_document(text: &str) -> Result<Vec<Spanned<Block>>, DslError> {
    parser::parse_blocks(text)
}

/// Rule and topic entries in file order.
pub fn parse_entries(text: &str) -> Result<Vec<Spanned<KbEntry>>, DslError> {
    parse_document(text)?
        .into_iter()
        .map(|b| match b.node {
            Block::Rule(r) => Ok(Spanned {
                node: KbEntry::Rule(r),
                span: b.span,
            }),
            Block::Topic(t) => Ok(Spanned {
                node: KbEntry::Topic(t),
                span: b.span,
            }),
            Block::Scenario(_) => Err(DslError::new(
                DslErrorKind::Syntax,
                "scenario blocks belong in a .scn file",
                b.span,
            )),
        })
        .collect()
}

pub fn parse_kb(text: &str) -> Result<KnowledgeBase, DslError> {
    let mut kb = KnowledgeBase::empty();
    for entry in parse_entries(text)? {
        kb.apply(entry.node)
            .map_err(|e| DslError::new(DslErrorKind::UnknownValue, e.to_string(), entry.span))?;
    }
    Ok(kb)
}

/// Exactly one `argument` block.
pub fn parse_rule(text: &str) -> Result<ArgumentRule, DslError> {
    let mut entries = parse_entries(text)?;
    let end = SourceSpan {
        line: text.lines().count().max(1),
        column: 1,
    };
    match (entries.pop(), entries.is_empty()) {
        (Some(Spanned { node: KbEntry::Rule(r), .. }), true) => Ok(r),
        (None, _) => Err(DslError::new(DslErrorKind::Syntax, "expected an `argument` block", end)),
        (Some(last), _) => Err(DslError::new(
            DslErrorKind::Syntax,
            "expected exactly one `argument` block",
            last.span,
        )),
    }
}

/// Fixtures in file order. Each context must validate against the default
/// sphere map, so fixtures relying on custom topics state their `sphere:`.
pub fn parse_scenario(text: &str) -> Result<Vec<ScenarioFixture>, DslError> {
    let map = SphereMap::default();
    parse_document(text)?
        .into_iter()
        .map(|block| match block.node {
            Block::Scenario(f) => {
                validate_context(f.context.clone(), &map).map_err(|e| {
                    DslError::new(DslErrorKind::InvalidContext, e.to_string(), block.span)
                })?;
                Ok(f)
            }
            Block::Rule(_) | Block::Topic(_) => Err(DslError::new(
                DslErrorKind::Syntax,
                "only scenario blocks are allowed in a .scn file",
                block.span,
            )),
        })
        .collect()
}
