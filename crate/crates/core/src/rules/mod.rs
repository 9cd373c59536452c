//! Ethical argument rules: stances, applicability conditions, the knowledge
//! base, and the decision pipeline built on them.

mod condition;
mod decide;
mod explain;
mod kb;

use crate::domain::{kebab_enum, CurationAction};

pub use condition::{Atom, ConditionExpr, Field, Literal};
pub use decide::{decide, instantiate, raw_attacks, Decision, TraceEntry};
pub use explain::{explain, ApplicableArgument, Explanation};
pub use kb::{default_kb, ArgumentRule, KbEntry, KbError, KnowledgeBase, TopicDecl, TopicTarget};

kebab_enum! {
    /// What an argument says about limiting the respondent scope.
    Stance, "stance" {
        MustLimit => "must-limit",
        MustNotLimit => "must-not-limit",
        MayLimit => "may-limit",
        MayLimitCaution => "may-limit-caution",
        RejectRequest => "reject-request",
    }
}

impl Stance {
    /// Symmetric conflict table. Pro-limiting stances never conflict with
    /// each other; `reject-request` conflicts with every other stance.
    pub fn conflicts_with(self, other: Stance) -> bool {
        use Stance::*;
        if self == other {
            return false;
        }
        matches!(
            (self, other),
            (RejectRequest, _) | (_, RejectRequest) | (MustNotLimit, _) | (_, MustNotLimit)
        )
    }

    /// Higher is more protective. Used by the precautionary fallback.
    pub fn protectiveness(self) -> u8 {
        match self {
            Stance::RejectRequest => 4,
            Stance::MustLimit => 3,
            Stance::MustNotLimit => 2,
            Stance::MayLimitCaution => 1,
            Stance::MayLimit => 0,
        }
    }

    pub fn action(self) -> CurationAction {
        match self {
            Stance::RejectRequest => CurationAction::RejectRequest,
            Stance::MustLimit => CurationAction::LimitDiversity,
            Stance::MustNotLimit => CurationAction::DoNotLimit,
            Stance::MayLimitCaution => CurationAction::PermitLimitWithNudge,
            Stance::MayLimit => CurationAction::PermitLimit,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use Stance::*;

    #[test]
    fn conflict_table() {
        let pairs = [
            (MustLimit, MustNotLimit),
            (MayLimit, MustNotLimit),
            (MayLimitCaution, MustNotLimit),
        ];
        for (a, b) in pairs {
            assert!(a.conflicts_with(b) && b.conflicts_with(a));
        }
        for s in Stance::ALL {
            assert!(!s.conflicts_with(*s));
            if *s != RejectRequest {
                assert!(RejectRequest.conflicts_with(*s));
            }
        }
        for (a, b) in [(MustLimit, MayLimit), (MustLimit, MayLimitCaution), (MayLimit, MayLimitCaution)] {
            assert!(!a.conflicts_with(b) && !b.conflicts_with(a));
        }
    }

    #[test]
    fn protective_order() {
        let mut order = Stance::ALL.to_vec();
        order.sort_by_key(|s| std::cmp::Reverse(s.protectiveness()));
        assert_eq!(order, vec![RejectRequest, MustLimit, MustNotLimit, MayLimitCaution, MayLimit]);
    }
}
