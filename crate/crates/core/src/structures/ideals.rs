use std::sync::Arc;

use super::{Map, Pomonoid, SPoset, Side};

/// A right ideal of `S` as a right S-poset, with its inclusion into `S_S`.
#[derive(Debug, Clone)]
pub struct RightIdeal {
    pub elements: Vec<usize>,
    /// `Some(a)` when the ideal equals `aS` (least such `a`).
    pub generator: Option<usize>,
    pub poset: SPoset,
    pub inclusion: Map,
}

/// Nonempty right ideals of `S` (subsets `I` with `IS ⊆ I`), or only the
/// principal ones `aS` without duplicates. Ordered by sorted element list.
pub fn right_ideals(monoid: &Arc<Pomonoid>, principal_only: bool) -> Vec<RightIdeal> {
    let n = monoid.size();
    let regular = SPoset::regular(monoid.clone(), Side::Right);
    let principal_of = |set: &[usize]| monoid.elements().find(|&a| monoid.right_principal(a) == set);

    let mut sets: Vec<Vec<usize>> = if principal_only {
        monoid.elements().map(|a| monoid.right_principal(a)).collect()
    } else {
        (1u64..(1 << n))
            .map(|mask| (0..n).filter(|&i| mask >> i & 1 == 1).collect::<Vec<_>>())
            .filter(|set| set.iter().all(|&a| monoid.elements().all(|s| set.contains(&monoid.mul(a, s)))))
            .collect()
    };
    sets.sort();
    sets.dedup();
    sets.into_iter()
        .map(|elements| {
            let (poset, inclusion) = regular.restrict(&elements).expect("right ideals are action-closed");
            RightIdeal { generator: principal_of(&elements), elements, poset, inclusion }
        })
        .collect()
}
