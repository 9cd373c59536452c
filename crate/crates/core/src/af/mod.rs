//! Abstract argumentation frameworks and Dung semantics.
//!
//! A framework is a finite set of named arguments plus a directed attack
//! relation. Semantics are expressed as labellings (IN / OUT / UNDEC); an
//! extension is the IN-set of a labelling.

mod apx;
mod semantics;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use apx::{emit_apx, parse_apx};
pub use semantics::{
    characteristic, complete_labellings, extensions, grounded, preferred, stable,
    DEFAULT_ENUMERATION_CAP,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AfError {
    #[error("unknown argument `{0}`")]
    UnknownArgument(String),
    #[error("invalid argument name `{0}`: expected letters, digits, `-` or `_`")]
    InvalidName(String),
    #[error("framework has {size} arguments, enumeration cap is {cap}")]
    TooLarge { size: usize, cap: usize },
    #[error("line {line}: syntax error: {message}")]
    Syntax { line: usize, message: String },
    #[error("line {line}: attack references undeclared argument `{name}`")]
    UndeclaredArgument { line: usize, name: String },
}

pub type Result<T, E = AfError> = std::result::Result<T, E>;

/// Name of an argument. Non-empty, made of ASCII letters, digits, `-` and `_`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct ArgumentId(String);

impl ArgumentId {
    pub fn new(name: impl Into<String>) -> Result<Self> {
        let name = name.into();
        if is_valid_name(&name) {
            Ok(Self(name))
        } else {
            Err(AfError::InvalidName(name))
        }
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

pub(crate) fn is_valid_name(name: &str) -> bool {
    !name.is_empty()
        && name
            .chars()
            .all(|c| c.is_ascii_alphanumeric() || c == '-' || c == '_')
}

impl fmt::Display for ArgumentId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl FromStr for ArgumentId {
    type Err = AfError;

    fn from_str(s: &str) -> Result<Self> {
        Self::new(s)
    }
}

impl TryFrom<String> for ArgumentId {
    type Error = AfError;

    fn try_from(value: String) -> Result<Self> {
        Self::new(value)
    }
}

impl From<ArgumentId> for String {
    fn from(id: ArgumentId) -> Self {
        id.0
    }
}

impl AsRef<str> for ArgumentId {
    fn as_ref(&self) -> &str {
        &self.0
    }
}

/// Label of one argument in a labelling.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Label {
    #[serde(rename = "IN")]
    In,
    #[serde(rename = "OUT")]
    Out,
    #[serde(rename = "UNDEC")]
    Undec,
}

impl Label {
    pub const ALL: [Label; 3] = [Label::In, Label::Out, Label::Undec];

    pub fn as_str(self) -> &'static str {
        match self {
            Label::In => "IN",
            Label::Out => "OUT",
            Label::Undec => "UNDEC",
        }
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Total assignment of labels to the arguments of one framework.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Labelling(BTreeMap<ArgumentId, Label>);

impl Labelling {
    pub fn new(assignment: BTreeMap<ArgumentId, Label>) -> Self {
        Self(assignment)
    }

    pub fn get(&self, arg: &ArgumentId) -> Option<Label> {
        self.0.get(arg).copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&ArgumentId, Label)> {
        self.0.iter().map(|(a, l)| (a, *l))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Arguments carrying `label`, in sorted order.
    pub fn with_label(&self, label: Label) -> BTreeSet<ArgumentId> {
        self.0
            .iter()
            .filter(|(_, l)| **l == label)
            .map(|(a, _)| a.clone())
            .collect()
    }

    pub fn in_set(&self) -> BTreeSet<ArgumentId> {
        self.with_label(Label::In)
    }

    pub fn as_map(&self) -> &BTreeMap<ArgumentId, Label> {
        &self.0
    }

    /// Checks the completeness conditions against `af`: an argument is IN iff
    /// all its attackers are OUT, and OUT iff some attacker is IN.
    pub fn is_complete_for(&self, af: &ArgumentationFramework) -> bool {
        if self.0.len() != af.arguments.len() || !af.arguments.iter().all(|a| self.0.contains_key(a)) {
            return false;
        }
        af.arguments.iter().all(|a| {
            let attackers = af.attackers_unchecked(a);
            let all_out = attackers.iter().all(|b| self.0[*b] == Label::Out);
            let some_in = attackers.iter().any(|b| self.0[*b] == Label::In);
            match self.0[a] {
                Label::In => all_out,
                Label::Out => some_in,
                Label::Undec => !all_out && !some_in,
            }
        })
    }
}

impl FromIterator<(ArgumentId, Label)> for Labelling {
    fn from_iter<T: IntoIterator<Item = (ArgumentId, Label)>>(iter: T) -> Self {
        Self(iter.into_iter().collect())
    }
}

/// Which Dung semantics to compute.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Semantics {
    Grounded,
    Complete,
    Preferred,
    Stable,
}

impl Semantics {
    pub fn as_str(self) -> &'static str {
        match self {
            Semantics::Grounded => "grounded",
            Semantics::Complete => "complete",
            Semantics::Preferred => "preferred",
            Semantics::Stable => "stable",
        }
    }
}

impl fmt::Display for Semantics {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Semantics {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "grounded" => Ok(Semantics::Grounded),
            "complete" => Ok(Semantics::Complete),
            "preferred" => Ok(Semantics::Preferred),
            "stable" => Ok(Semantics::Stable),
            other => Err(format!("unknown semantics `{other}`")),
        }
    }
}

/// A Dung argumentation framework. Attack endpoints always belong to the
/// argument set; duplicate attacks collapse.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ArgumentationFramework {
    arguments: BTreeSet<ArgumentId>,
    attacks: BTreeSet<(ArgumentId, ArgumentId)>,
}

impl ArgumentationFramework {
    pub fn new(
        arguments: impl IntoIterator<Item = ArgumentId>,
        attacks: impl IntoIterator<Item = (ArgumentId, ArgumentId)>,
    ) -> Result<Self> {
        let mut af = Self {
            arguments: arguments.into_iter().collect(),
            attacks: BTreeSet::new(),
        };
        for (from, to) in attacks {
            af.add_attack(from, to)?;
        }
        Ok(af)
    }

    /// Convenience constructor from string names. Panics-free: invalid names
    /// come back as errors.
    pub fn from_names<'a>(
        arguments: impl IntoIterator<Item = &'a str>,
        attacks: impl IntoIterator<Item = (&'a str, &'a str)>,
    ) -> Result<Self> {
        let args = arguments
            .into_iter()
            .map(ArgumentId::new)
            .collect::<Result<Vec<_>>>()?;
        let atts = attacks
            .into_iter()
            .map(|(a, b)| Ok((ArgumentId::new(a)?, ArgumentId::new(b)?)))
            .collect::<Result<Vec<_>>>()?;
        Self::new(args, atts)
    }

    pub fn add_argument(&mut self, arg: ArgumentId) -> bool {
        self.arguments.insert(arg)
    }

    pub fn add_attack(&mut self, from: ArgumentId, to: ArgumentId) -> Result<()> {
        for end in [&from, &to] {
            if !self.arguments.contains(end) {
                return Err(AfError::UnknownArgument(end.to_string()));
            }
        }
        self.attacks.insert((from, to));
        Ok(())
    }

    pub fn arguments(&self) -> &BTreeSet<ArgumentId> {
        &self.arguments
    }

    pub fn attacks(&self) -> &BTreeSet<(ArgumentId, ArgumentId)> {
        &self.attacks
    }

    pub fn len(&self) -> usize {
        self.arguments.len()
    }

    pub fn is_empty(&self) -> bool {
        self.arguments.is_empty()
    }

    pub fn contains(&self, arg: &ArgumentId) -> bool {
        self.arguments.contains(arg)
    }

    fn check_member(&self, arg: &ArgumentId) -> Result<()> {
        if self.arguments.contains(arg) {
            Ok(())
        } else {
            Err(AfError::UnknownArgument(arg.to_string()))
        }
    }

    fn attackers_unchecked<'a>(&'a self, arg: &ArgumentId) -> Vec<&'a ArgumentId> {
        self.attacks
            .iter()
            .filter(|(_, t)| t == arg)
            .map(|(a, _)| a)
            .collect()
    }

    /// All `x` with `(x, arg)` in the attack relation.
    pub fn attackers(&self, arg: &ArgumentId) -> Result<BTreeSet<ArgumentId>> {
        self.check_member(arg)?;
        Ok(self.attackers_unchecked(arg).into_iter().cloned().collect())
    }

    pub fn is_conflict_free(&self, set: &BTreeSet<ArgumentId>) -> Result<bool> {
        for a in set {
            self.check_member(a)?;
        }
        Ok(!self
            .attacks
            .iter()
            .any(|(x, y)| set.contains(x) && set.contains(y)))
    }

    /// Conflict-free and every member defended by the set.
    pub fn is_admissible(&self, set: &BTreeSet<ArgumentId>) -> Result<bool> {
        if !self.is_conflict_free(set)? {
            return Ok(false);
        }
        let defended = characteristic(self, set)?;
        Ok(set.is_subset(&defended))
    }
}
