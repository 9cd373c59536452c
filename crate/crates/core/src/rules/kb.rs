use std::collections::BTreeSet;

use serde::Serialize;
use thiserror::Error;

use super::condition::{ConditionExpr, Field, Literal};
use super::Stance;
use crate::af::ArgumentId;
use crate::domain::{DomainError, Sphere, SphereMap};
use crate::value::EthicalValue;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum KbError {
    #[error("rule `{0}` promotes no values")]
    EmptyPromotes(String),
    #[error(transparent)]
    Topic(#[from] DomainError),
}

/// A named ethical argument: when it applies, what it says, and which
/// values ground it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ArgumentRule {
    name: ArgumentId,
    applies_if: ConditionExpr,
    stance: Stance,
    promotes: BTreeSet<EthicalValue>,
}

impl ArgumentRule {
    pub fn new(
        name: ArgumentId,
        applies_if: ConditionExpr,
        stance: Stance,
        promotes: impl IntoIterator<Item = EthicalValue>,
    ) -> Result<Self, KbError> {
        let promotes: BTreeSet<_> = promotes.into_iter().collect();
        if promotes.is_empty() {
            return Err(KbError::EmptyPromotes(name.to_string()));
        }
        Ok(Self {
            name,
            applies_if,
            stance,
            promotes,
        })
    }

    pub fn name(&self) -> &ArgumentId {
        &self.name
    }

    pub fn applies_if(&self) -> &ConditionExpr {
        &self.applies_if
    }

    pub fn stance(&self) -> Stance {
        self.stance
    }

    pub fn promotes(&self) -> &BTreeSet<EthicalValue> {
        &self.promotes
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum TopicTarget {
    Sphere(Sphere),
    /// Alias of an already mapped topic.
    Topic(String),
}

/// Extension of the topic-to-sphere map.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TopicDecl {
    pub topic: String,
    pub target: TopicTarget,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum KbEntry {
    Rule(ArgumentRule),
    Topic(TopicDecl),
}

/// Ordered rule set plus topic extensions. Every applied entry bumps the
/// version; a rule with an existing name replaces the earlier one in place.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KnowledgeBase {
    version: u64,
    rules: Vec<ArgumentRule>,
    topics: Vec<TopicDecl>,
    sphere_map: SphereMap,
}

impl Default for KnowledgeBase {
    fn default() -> Self {
        Self::empty()
    }
}

impl KnowledgeBase {
    pub fn empty() -> Self {
        Self {
            version: 0,
            rules: Vec::new(),
            topics: Vec::new(),
            sphere_map: SphereMap::default(),
        }
    }

    pub fn version(&self) -> u64 {
        self.version
    }

    pub fn rules(&self) -> &[ArgumentRule] {
        &self.rules
    }

    pub fn topics(&self) -> &[TopicDecl] {
        &self.topics
    }

    pub fn sphere_map(&self) -> &SphereMap {
        &self.sphere_map
    }

    pub fn rule(&self, name: &ArgumentId) -> Option<&ArgumentRule> {
        self.rules.iter().find(|r| r.name() == name)
    }

    pub fn add_rule(&mut self, rule: ArgumentRule) {
        match self.rules.iter_mut().find(|r| r.name == rule.name) {
            Some(slot) => *slot = rule,
            None => self.rules.push(rule),
        }
        self.version += 1;
    }

    pub fn add_topic(&mut self, decl: TopicDecl) -> Result<(), KbError> {
        match &decl.target {
            TopicTarget::Sphere(s) => self.sphere_map.insert(decl.topic.clone(), *s),
            TopicTarget::Topic(t) => {
                self.sphere_map.alias(decl.topic.clone(), t)?;
            }
        }
        self.topics.push(decl);
        self.version += 1;
        Ok(())
    }

    pub fn apply(&mut self, entry: KbEntry) -> Result<(), KbError> {
        match entry {
            KbEntry::Rule(r) => {
                self.add_rule(r);
                Ok(())
            }
            KbEntry::Topic(t) => self.add_topic(t),
        }
    }

    /// A copy with `rule` applied on top, for previews.
    pub fn with_rule(&self, rule: ArgumentRule) -> Self {
        let mut next = self.clone();
        next.add_rule(rule);
        next
    }
}

/// The five default arguments.
pub fn default_kb() -> KnowledgeBase {
    use EthicalValue::*;
    let flag = |f: Field| ConditionExpr::atom(f, Literal::Bool(true));
    let sphere = |s: Sphere| ConditionExpr::atom(Field::Sphere, Literal::Sphere(s));
    let rule = |name: &str, cond, stance, values: &[EthicalValue]| {
        ArgumentRule::new(
            ArgumentId::new(name).expect("valid name"),
            cond,
            stance,
            values.iter().copied(),
        )
        .expect("non-empty promotes")
    };

    let mut kb = KnowledgeBase::empty();
    for r in [
        rule(
            "efficiency",
            ConditionExpr::Or(vec![flag(Field::DemographicTarget), flag(Field::SkillSpecific)]),
            Stance::MayLimit,
            &[Efficiency],
        ),
        rule(
            "protection",
            ConditionExpr::Or(vec![sphere(Sphere::ProtectionSensitive), flag(Field::Sensitive)]),
            Stance::MustLimit,
            &[WellBeing, Health, Dignity],
        ),
        rule(
            "inclusion",
            sphere(Sphere::SharedResources),
            Stance::MustNotLimit,
            &[Inclusion, Justice],
        ),
        rule(
            "freedom-of-choice",
            sphere(Sphere::MaximumFreedom),
            Stance::MayLimitCaution,
            &[FreedomOfChoice],
        ),
        rule("no-harm", flag(Field::Harm), Stance::RejectRequest, &[NoHarmPrinciple]),
    ] {
        kb.add_rule(r);
    }
    kb
}
