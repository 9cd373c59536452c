//! Diversity curation engine for help-exchange platforms.
//!
//! Requests are described by a [`domain::RequestContext`]. Ethical argument
//! rules from a [`rules::KnowledgeBase`] are instantiated against it, their
//! conflicts are filtered by value rank into a defeat graph, and grounded
//! semantics decide which arguments prevail. The outcome is a
//! [`rules::Decision`]: a curation action, recommended instruments, and a
//! trace of every step.

pub mod af;
pub mod domain;
pub mod rules;
pub mod value;
pub mod dsl;
pub mod fixtures;
pub mod coach;
pub mod scenarios;
pub mod service;
