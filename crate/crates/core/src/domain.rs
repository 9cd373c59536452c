//! Request-side world model: spheres, request contexts, curation actions
//! and instruments.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DomainError {
    #[error("request is empty: no request text and no topic tags")]
    EmptyRequest,
    #[error("cannot classify sphere: none of the tags {0:?} is mapped to a sphere")]
    Unclassifiable(Vec<String>),
    #[error("invalid topic tag `{0}`")]
    InvalidTag(String),
    #[error("unknown sphere `{0}`")]
    UnknownSphere(String),
    #[error("topic alias `{alias}` points at unmapped topic `{target}`")]
    UnknownAliasTarget { alias: String, target: String },
    #[error("unknown {kind} `{value}`")]
    UnknownName { kind: &'static str, value: String },
}

macro_rules! kebab_enum {
    ($(#[$meta:meta])* $name:ident, $kind:literal { $($variant:ident => $text:literal),+ $(,)? }) => {
        $(#[$meta])*
        #[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, ::serde::Serialize, ::serde::Deserialize)]
        pub enum $name {
            $(#[serde(rename = $text)] $variant),+
        }

        impl $name {
            pub const ALL: &'static [$name] = &[$($name::$variant),+];

            pub fn as_str(self) -> &'static str {
                match self { $($name::$variant => $text),+ }
            }
        }

        impl ::std::fmt::Display for $name {
            fn fmt(&self, f: &mut ::std::fmt::Formatter<'_>) -> ::std::fmt::Result {
                f.write_str(self.as_str())
            }
        }

        impl ::std::str::FromStr for $name {
            type Err = $crate::domain::DomainError;

            fn from_str(s: &str) -> Result<Self, Self::Err> {
                match s {
                    $($text => Ok($name::$variant),)+
                    other => Err($crate::domain::DomainError::UnknownName { kind: $kind, value: other.to_string() }),
                }
            }
        }
    };
}
pub(crate) use kebab_enum;

kebab_enum! {
    /// Contextual sphere of a request. Declaration order is the protective
    /// order used for tie-breaks: later variants are more protective.
    Sphere, "sphere" {
        MaximumFreedom => "maximum-freedom",
        SharedResources => "shared-resources",
        ProtectionSensitive => "protection-sensitive",
    }
}

kebab_enum! {
    DiversityPreference, "diversity preference" {
        Similar => "similar",
        Different => "different",
        Unspecified => "unspecified",
    }
}

// the enum comes from a macro, so `#[default]` is not available
#[allow(clippy::derivable_impls)]
impl Default for DiversityPreference {
    fn default() -> Self {
        DiversityPreference::Unspecified
    }
}

kebab_enum! {
    CurationAction, "curation action" {
        LimitDiversity => "limit-diversity",
        DoNotLimit => "do-not-limit",
        PermitLimit => "permit-limit",
        PermitLimitWithNudge => "permit-limit-with-nudge",
        RejectRequest => "reject-request",
    }
}

kebab_enum! {
    Instrument, "instrument" {
        NudgeRevise => "nudge-revise",
        ScopeOptions => "scope-options",
        BlockRequest => "block-request",
        ReportComplaint => "report-complaint",
    }
}

/// Topic token to sphere lookup, seeded with the default topics.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct SphereMap(BTreeMap<String, Sphere>);

impl Default for SphereMap {
    fn default() -> Self {
        use Sphere::*;
        let entries = [
            ("leisure", MaximumFreedom),
            ("sports", MaximumFreedom),
            ("art", MaximumFreedom),
            ("economy", SharedResources),
            ("politics", SharedResources),
            ("education", SharedResources),
            ("religion", ProtectionSensitive),
            ("health", ProtectionSensitive),
            ("medicine", ProtectionSensitive),
            ("psychology", ProtectionSensitive),
        ];
        Self(entries.into_iter().map(|(t, s)| (t.to_string(), s)).collect())
    }
}

impl SphereMap {
    pub fn empty() -> Self {
        Self(BTreeMap::new())
    }

    pub fn get(&self, topic: &str) -> Option<Sphere> {
        self.0.get(topic).copied()
    }

    pub fn insert(&mut self, topic: impl Into<String>, sphere: Sphere) {
        self.0.insert(topic.into(), sphere);
    }

    /// Maps `alias` to whatever sphere `target` currently resolves to.
    pub fn alias(&mut self, alias: impl Into<String>, target: &str) -> Result<Sphere, DomainError> {
        let alias = alias.into();
        let sphere = self.get(target).ok_or_else(|| DomainError::UnknownAliasTarget {
            alias: alias.clone(),
            target: target.to_string(),
        })?;
        self.0.insert(alias, sphere);
        Ok(sphere)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, Sphere)> {
        self.0.iter().map(|(t, s)| (t.as_str(), *s))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// Majority vote over mapped tags; ties go to the more protective sphere.
pub fn classify_sphere(topic_tags: &BTreeSet<String>, map: &SphereMap) -> Result<Sphere, DomainError> {
    let mut votes: BTreeMap<Sphere, usize> = BTreeMap::new();
    for tag in topic_tags {
        if let Some(sphere) = map.get(tag) {
            *votes.entry(sphere).or_default() += 1;
        }
    }
    // max_by_key keeps the last maximum; spheres iterate least to most protective
    votes
        .into_iter()
        .max_by_key(|(_, n)| *n)
        .map(|(s, _)| s)
        .ok_or_else(|| DomainError::Unclassifiable(topic_tags.iter().cloned().collect()))
}

/// Everything known about one help request.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RequestContext {
    #[serde(default)]
    pub request_text: String,
    #[serde(default)]
    pub topic_tags: BTreeSet<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sphere: Option<Sphere>,
    #[serde(default)]
    pub demographic_target: bool,
    #[serde(default)]
    pub skill_specific: bool,
    #[serde(default)]
    pub sensitive: bool,
    #[serde(default)]
    pub harm: bool,
    #[serde(default)]
    pub diversity_preference: DiversityPreference,
    #[serde(default)]
    pub situatedness: String,
}

impl RequestContext {
    /// The resolved sphere. Only meaningful after [`validate_context`].
    pub fn resolved_sphere(&self) -> Option<Sphere> {
        self.sphere
    }
}

fn normalize_tag(tag: &str) -> Result<String, DomainError> {
    let t = tag.trim().to_lowercase();
    let ok = !t.is_empty()
        && t.chars()
            .all(|c| c.is_alphanumeric() || c == '-' || c == '_');
    if ok {
        Ok(t)
    } else {
        Err(DomainError::InvalidTag(tag.to_string()))
    }
}

/// Normalizes tags and resolves the sphere when it was not given.
/// Idempotent.
pub fn validate_context(ctx: RequestContext, map: &SphereMap) -> Result<RequestContext, DomainError> {
    let topic_tags = ctx
        .topic_tags
        .iter()
        .map(|t| normalize_tag(t))
        .collect::<Result<BTreeSet<_>, _>>()?;
    if ctx.request_text.trim().is_empty() && topic_tags.is_empty() {
        return Err(DomainError::EmptyRequest);
    }
    let sphere = match ctx.sphere {
        Some(s) => s,
        None => classify_sphere(&topic_tags, map)?,
    };
    Ok(RequestContext {
        topic_tags,
        sphere: Some(sphere),
        ..ctx
    })
}
