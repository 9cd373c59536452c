use std::collections::BTreeSet;

use super::{AfError, ArgumentId, ArgumentationFramework, Label, Labelling, Result, Semantics};

/// Largest framework the enumerating semantics will accept by default.
pub const DEFAULT_ENUMERATION_CAP: usize = 24;

/// Index-based view of a framework used by the solvers.
struct Indexed<'a> {
    names: Vec<&'a ArgumentId>,
    attackers: Vec<Vec<usize>>,
    targets: Vec<Vec<usize>>,
}

impl<'a> Indexed<'a> {
    fn new(af: &'a ArgumentationFramework) -> Self {
        let names: Vec<_> = af.arguments().iter().collect();
        let index = |a: &ArgumentId| names.binary_search(&a).expect("attack endpoint in framework");
        let mut attackers = vec![Vec::new(); names.len()];
        let mut targets = vec![Vec::new(); names.len()];
        for (from, to) in af.attacks() {
            let (f, t) = (index(from), index(to));
            attackers[t].push(f);
            targets[f].push(t);
        }
        Self {
            names,
            attackers,
            targets,
        }
    }

    fn len(&self) -> usize {
        self.names.len()
    }

    fn defended_by(&self, set: &[bool]) -> Vec<bool> {
        (0..self.len())
            .map(|a| {
                self.attackers[a]
                    .iter()
                    .all(|&b| self.attackers[b].iter().any(|&c| set[c]))
            })
            .collect()
    }

    fn labelling(&self, labels: &[Label]) -> Labelling {
        self.names
            .iter()
            .zip(labels)
            .map(|(n, l)| ((*n).clone(), *l))
            .collect()
    }

    fn grounded_labels(&self) -> Vec<Label> {
        let mut in_set = vec![false; self.len()];
        loop {
            let next = self.defended_by(&in_set);
            if next == in_set {
                break;
            }
            in_set = next;
        }
        (0..self.len())
            .map(|a| {
                if in_set[a] {
                    Label::In
                } else if self.attackers[a].iter().any(|&b| in_set[b]) {
                    Label::Out
                } else {
                    Label::Undec
                }
            })
            .collect()
    }
}

/// Dung's characteristic function: the arguments whose every attacker is
/// attacked by some member of `set`.
pub fn characteristic(
    af: &ArgumentationFramework,
    set: &BTreeSet<ArgumentId>,
) -> Result<BTreeSet<ArgumentId>> {
    for a in set {
        if !af.contains(a) {
            return Err(AfError::UnknownArgument(a.to_string()));
        }
    }
    let idx = Indexed::new(af);
    let member: Vec<bool> = idx.names.iter().map(|n| set.contains(*n)).collect();
    Ok(idx
        .defended_by(&member)
        .into_iter()
        .zip(&idx.names)
        .filter(|(d, _)| *d)
        .map(|(_, n)| (*n).clone())
        .collect())
}

/// Grounded labelling: IN is the least fixpoint of [`characteristic`]
/// reached from the empty set, OUT is everything it attacks.
pub fn grounded(af: &ArgumentationFramework) -> Labelling {
    let idx = Indexed::new(af);
    idx.labelling(&idx.grounded_labels())
}

pub fn complete_labellings(af: &ArgumentationFramework) -> Result<Vec<Labelling>> {
    complete_labellings_with_cap(af, DEFAULT_ENUMERATION_CAP)
}

/// All complete labellings, sorted. The grounded labels are fixed up front
/// (every complete labelling agrees with grounded on its IN and OUT
/// arguments), then the remaining arguments are searched with local
/// consistency pruning.
pub fn complete_labellings_with_cap(
    af: &ArgumentationFramework,
    cap: usize,
) -> Result<Vec<Labelling>> {
    if af.len() > cap {
        return Err(AfError::TooLarge {
            size: af.len(),
            cap,
        });
    }
    let idx = Indexed::new(af);
    let grounded = idx.grounded_labels();
    let mut labels: Vec<Option<Label>> = grounded
        .iter()
        .map(|l| (*l != Label::Undec).then_some(*l))
        .collect();
    let open: Vec<usize> = (0..idx.len()).filter(|&a| labels[a].is_none()).collect();

    let mut found = Vec::new();
    search(&idx, &open, 0, &mut labels, &mut found);
    let mut out: Vec<Labelling> = found.iter().map(|l| idx.labelling(l)).collect();
    out.sort();
    out.dedup();
    Ok(out)
}

fn search(
    idx: &Indexed<'_>,
    open: &[usize],
    depth: usize,
    labels: &mut Vec<Option<Label>>,
    found: &mut Vec<Vec<Label>>,
) {
    let Some(&arg) = open.get(depth) else {
        found.push(labels.iter().map(|l| l.expect("all assigned")).collect());
        return;
    };
    for label in Label::ALL {
        labels[arg] = Some(label);
        let consistent = std::iter::once(arg)
            .chain(idx.targets[arg].iter().copied())
            .all(|a| locally_consistent(idx, labels, a));
        if consistent {
            search(idx, open, depth + 1, labels, found);
        }
    }
    labels[arg] = None;
}

/// Whether the completeness condition for `arg` can still hold given the
/// labels assigned so far.
fn locally_consistent(idx: &Indexed<'_>, labels: &[Option<Label>], arg: usize) -> bool {
    let Some(own) = labels[arg] else {
        return true;
    };
    let (mut any_in, mut any_undec, mut any_open) = (false, false, false);
    for &b in &idx.attackers[arg] {
        match labels[b] {
            Some(Label::In) => any_in = true,
            Some(Label::Undec) => any_undec = true,
            Some(Label::Out) => {}
            None => any_open = true,
        }
    }
    match own {
        Label::In => !any_in && !any_undec,
        Label::Out => any_in || any_open,
        Label::Undec => !any_in && (any_undec || any_open),
    }
}

pub fn preferred(af: &ArgumentationFramework) -> Result<BTreeSet<BTreeSet<ArgumentId>>> {
    let in_sets: Vec<_> = complete_labellings(af)?
        .iter()
        .map(Labelling::in_set)
        .collect();
    Ok(in_sets
        .iter()
        .filter(|s| !in_sets.iter().any(|t| s.is_subset(t) && s.len() < t.len()))
        .cloned()
        .collect())
}

pub fn stable(af: &ArgumentationFramework) -> Result<BTreeSet<BTreeSet<ArgumentId>>> {
    Ok(complete_labellings(af)?
        .iter()
        .filter(|l| l.iter().all(|(_, label)| label != Label::Undec))
        .map(Labelling::in_set)
        .collect())
}

/// Extensions (IN-sets) under the chosen semantics.
pub fn extensions(
    af: &ArgumentationFramework,
    semantics: Semantics,
) -> Result<BTreeSet<BTreeSet<ArgumentId>>> {
    match semantics {
        Semantics::Grounded => Ok(BTreeSet::from([grounded(af).in_set()])),
        Semantics::Complete => Ok(complete_labellings(af)?
            .iter()
            .map(Labelling::in_set)
            .collect()),
        Semantics::Preferred => preferred(af),
        Semantics::Stable => stable(af),
    }
}
