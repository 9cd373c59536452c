use std::fmt::Write as _;

use super::ScenarioFixture;
use crate::rules::{ArgumentRule, KbEntry, KnowledgeBase, TopicDecl, TopicTarget};

fn quote(s: &str) -> String {
    let mut out = String::with_capacity(s.len() + 2);
    out.push('"');
    for c in s.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            '\t' => out.push_str("\\t"),
            c => out.push(c),
        }
    }
    out.push('"');
    out
}

fn bare_or_quoted(s: &str) -> String {
    let bare = !s.is_empty() && s.chars().all(|c| c.is_alphanumeric() || c == '_' || c == '-');
    if bare {
        s.to_string()
    } else {
        quote(s)
    }
}

pub fn emit_rule(rule: &ArgumentRule) -> String {
    let values: Vec<_> = rule.promotes().iter().map(|v| v.as_str()).collect();
    format!(
        "argument {} {{\n  promotes: {}\n  applies-if: {}\n  stance: {}\n}}\n",
        rule.name(),
        values.join(", "),
        rule.applies_if(),
        rule.stance()
    )
}

fn emit_topic(decl: &TopicDecl) -> String {
    let target = match &decl.target {
        TopicTarget::Sphere(s) => s.as_str().to_string(),
        TopicTarget::Topic(t) => t.clone(),
    };
    format!("topic {} -> {}\n", decl.topic, target)
}

pub fn emit_entry(entry: &KbEntry) -> String {
    match entry {
        KbEntry::Rule(r) => emit_rule(r),
        KbEntry::Topic(t) => emit_topic(t),
    }
}

/// Topic declarations first, then rules in order.
pub fn emit_kb(kb: &KnowledgeBase) -> String {
    let blocks: Vec<String> = kb
        .topics()
        .iter()
        .map(emit_topic)
        .chain(kb.rules().iter().map(emit_rule))
        .collect();
    blocks.join("\n")
}

fn emit_fixture(f: &ScenarioFixture) -> String {
    let c = &f.context;
    let mut out = format!("scenario {} {{\n", quote(&f.name));
    if !c.request_text.is_empty() {
        let _ = writeln!(out, "  request_text: {}", quote(&c.request_text));
    }
    if !c.topic_tags.is_empty() {
        let tags: Vec<_> = c.topic_tags.iter().map(|t| bare_or_quoted(t)).collect();
        let _ = writeln!(out, "  topic_tags: {}", tags.join(", "));
    }
    if let Some(s) = c.sphere {
        let _ = writeln!(out, "  sphere: {s}");
    }
    for (name, value) in [
        ("demographic_target", c.demographic_target),
        ("skill_specific", c.skill_specific),
        ("sensitive", c.sensitive),
        ("harm", c.harm),
    ] {
        if value {
            let _ = writeln!(out, "  {name}: true");
        }
    }
    if c.diversity_preference != Default::default() {
        let _ = writeln!(out, "  diversity_preference: {}", c.diversity_preference);
    }
    if !c.situatedness.is_empty() {
        let _ = writeln!(out, "  situatedness: {}", quote(&c.situatedness));
    }
    let _ = writeln!(out, "  expect: {}", f.expect);
    if let Some(note) = &f.note {
        let _ = writeln!(out, "  note: {}", quote(note));
    }
    out.push_str("}\n");
    out
}

pub fn emit_scenarios(fixtures: &[ScenarioFixture]) -> String {
    fixtures
        .iter()
        .map(emit_fixture)
        .collect::<Vec<_>>()
        .join("\n")
}
