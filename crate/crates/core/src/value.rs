//! Value weighting: filter raw attacks into defeats by comparing the value
//! ranks the arguments promote.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::af::{AfError, ArgumentId, ArgumentationFramework};
use crate::rules::Stance;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ValueError {
    #[error("argument `{0}` promotes no values")]
    EmptyPromotes(String),
    #[error("unknown value `{0}`")]
    UnknownValue(String),
    #[error(transparent)]
    Framework(#[from] AfError),
}

/// Rank class of an ethical value. Classes are totally ordered; values
/// within one class are incomparable.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ValueRank {
    Instrumental = 0,
    Fundamental = 1,
    Paramount = 2,
}

impl ValueRank {
    pub fn ordinal(self) -> u8 {
        self as u8
    }

    pub fn as_str(self) -> &'static str {
        match self {
            ValueRank::Instrumental => "instrumental",
            ValueRank::Fundamental => "fundamental",
            ValueRank::Paramount => "paramount",
        }
    }
}

impl fmt::Display for ValueRank {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum EthicalValue {
    Inclusion,
    Tolerance,
    FreedomOfChoice,
    Efficiency,
    Autonomy,
    WellBeing,
    Health,
    Dignity,
    Justice,
    /// Engine-added pseudo-value that outranks every other value.
    NoHarmPrinciple,
}

impl EthicalValue {
    pub const ALL: [EthicalValue; 10] = [
        EthicalValue::Inclusion,
        EthicalValue::Tolerance,
        EthicalValue::FreedomOfChoice,
        EthicalValue::Efficiency,
        EthicalValue::Autonomy,
        EthicalValue::WellBeing,
        EthicalValue::Health,
        EthicalValue::Dignity,
        EthicalValue::Justice,
        EthicalValue::NoHarmPrinciple,
    ];

    pub fn rank(self) -> ValueRank {
        use EthicalValue::*;
        match self {
            Inclusion | Tolerance | FreedomOfChoice | Efficiency => ValueRank::Instrumental,
            Autonomy | WellBeing | Health | Dignity | Justice => ValueRank::Fundamental,
            NoHarmPrinciple => ValueRank::Paramount,
        }
    }

    pub fn as_str(self) -> &'static str {
        use EthicalValue::*;
        match self {
            Inclusion => "inclusion",
            Tolerance => "tolerance",
            FreedomOfChoice => "freedom-of-choice",
            Efficiency => "efficiency",
            Autonomy => "autonomy",
            WellBeing => "well-being",
            Health => "health",
            Dignity => "dignity",
            Justice => "justice",
            NoHarmPrinciple => "no-harm-principle",
        }
    }
}

impl fmt::Display for EthicalValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for EthicalValue {
    type Err = ValueError;

    fn from_str(s: &str) -> Result<Self, ValueError> {
        EthicalValue::ALL
            .into_iter()
            .find(|v| v.as_str() == s)
            .ok_or_else(|| ValueError::UnknownValue(s.to_string()))
    }
}

/// Highest rank class among `promotes`.
pub fn effective_rank(promotes: &BTreeSet<EthicalValue>) -> Option<ValueRank> {
    promotes.iter().map(|v| v.rank()).max()
}

/// An ethical argument instantiated against one request context.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DomainArgument {
    id: ArgumentId,
    stance: Stance,
    promotes: BTreeSet<EthicalValue>,
    premises: Vec<String>,
}

impl DomainArgument {
    pub fn new(
        id: ArgumentId,
        stance: Stance,
        promotes: BTreeSet<EthicalValue>,
        premises: Vec<String>,
    ) -> Result<Self, ValueError> {
        if promotes.is_empty() {
            return Err(ValueError::EmptyPromotes(id.to_string()));
        }
        Ok(Self {
            id,
            stance,
            promotes,
            premises,
        })
    }

    pub fn id(&self) -> &ArgumentId {
        &self.id
    }

    pub fn stance(&self) -> Stance {
        self.stance
    }

    pub fn promotes(&self) -> &BTreeSet<EthicalValue> {
        &self.promotes
    }

    /// Context facts that made the argument applicable.
    pub fn premises(&self) -> &[String] {
        &self.premises
    }

    pub fn effective_rank(&self) -> ValueRank {
        effective_rank(&self.promotes).expect("promotes is non-empty")
    }
}

/// An attack succeeds unless the attacker's rank is strictly below the
/// target's.
pub fn defeats(attacker: &DomainArgument, target: &DomainArgument) -> bool {
    attacker.effective_rank() >= target.effective_rank()
}

/// A raw attack dropped by value weighting.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct RemovedAttack {
    pub attacker: ArgumentId,
    pub target: ArgumentId,
    pub attacker_rank: ValueRank,
    pub target_rank: ValueRank,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DefeatGraph {
    pub framework: ArgumentationFramework,
    pub removed: Vec<RemovedAttack>,
}

pub fn derive_defeat_graph(
    args: &[DomainArgument],
    raw_attacks: &BTreeSet<(ArgumentId, ArgumentId)>,
) -> Result<DefeatGraph, ValueError> {
    let by_id: BTreeMap<&ArgumentId, &DomainArgument> = args.iter().map(|a| (a.id(), a)).collect();
    let mut framework = ArgumentationFramework::new(args.iter().map(|a| a.id().clone()), [])?;
    let mut removed = Vec::new();
    for (from, to) in raw_attacks {
        let lookup = |id: &ArgumentId| {
            by_id
                .get(id)
                .copied()
                .ok_or_else(|| ValueError::Framework(AfError::UnknownArgument(id.to_string())))
        };
        let (attacker, target) = (lookup(from)?, lookup(to)?);
        if defeats(attacker, target) {
            framework.add_attack(from.clone(), to.clone())?;
        } else {
            removed.push(RemovedAttack {
                attacker: from.clone(),
                target: to.clone(),
                attacker_rank: attacker.effective_rank(),
                target_rank: target.effective_rank(),
            });
        }
    }
    Ok(DefeatGraph { framework, removed })
}
