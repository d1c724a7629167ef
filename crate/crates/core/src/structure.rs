//! Free and projective left S-posets.
//!
//! A left S-poset is projective when it is a disjoint union of pairwise
//! incomparable copies of `Se` (`e` idempotent), and free when every copy is
//! `S` itself with `sx <= tx` iff `s <= t`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::structures::{Map, SPoset, Side};

/// An isomorphism `Se -> Sc` onto a component, `se ↦ s·c`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Generator {
    pub idempotent: usize,
    pub element: usize,
    /// Indexed by the elements of `Se` in increasing order; images are
    /// elements of the decomposed S-poset.
    pub iso: Map,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Decomposition {
    /// Sorted by least member.
    pub components: Vec<Vec<usize>>,
    pub generators: Vec<Option<Generator>>,
}

impl Decomposition {
    pub fn all_generated(&self) -> bool {
        self.generators.iter().all(Option::is_some)
    }
}

fn find(parent: &mut [usize], x: usize) -> usize {
    let mut r = x;
    while parent[r] != r {
        r = parent[r];
    }
    let mut y = x;
    while parent[y] != r {
        let next = parent[y];
        parent[y] = r;
        y = next;
    }
    r
}

fn components(a: &SPoset) -> Vec<Vec<usize>> {
    let n = a.size();
    let mut parent: Vec<usize> = (0..n).collect();
    let union = |x: usize, y: usize, parent: &mut Vec<usize>| {
        let (rx, ry) = (find(parent, x), find(parent, y));
        if rx != ry {
            parent[rx.max(ry)] = rx.min(ry);
        }
    };
    for (x, y) in a.order().pairs() {
        union(x, y, &mut parent);
    }
    for s in a.monoid().elements() {
        for x in 0..n {
            union(x, a.act(s, x), &mut parent);
        }
    }
    let mut groups: Vec<Vec<usize>> = Vec::new();
    let mut slot = vec![usize::MAX; n];
    for x in 0..n {
        let r = find(&mut parent, x);
        if slot[r] == usize::MAX {
            slot[r] = groups.len();
            groups.push(Vec::new());
        }
        groups[slot[r]].push(x);
    }
    groups
}

/// Tries `c` with `Sc` equal to the component and `e` among `idempotents`.
fn component_generator(a: &SPoset, component: &[usize], idempotents: &[usize]) -> Option<Generator> {
    let monoid = a.monoid();
    for &c in component {
        if a.generated_by(&[c]) != component {
            continue;
        }
        for &e in idempotents {
            if a.act(e, c) != c {
                continue;
            }
            let faithful = monoid.elements().all(|s| {
                monoid.elements().all(|t| {
                    let (se, te) = (monoid.mul(s, e), monoid.mul(t, e));
                    let (sc, tc) = (a.act(s, c), a.act(t, c));
                    (se == te) == (sc == tc) && monoid.leq(se, te) == a.leq(sc, tc)
                })
            });
            if faithful {
                let iso = Map::new(monoid.left_principal(e).into_iter().map(|m| a.act(m, c)).collect());
                return Some(Generator { idempotent: e, element: c, iso });
            }
        }
    }
    None
}

fn check_left(a: &SPoset) -> Result<()> {
    if a.side() != Side::Left {
        return Err(Error::WrongSide { expected: Side::Left, found: a.side() });
    }
    Ok(())
}

/// Splits a left S-poset into the classes generated by comparability and
/// `a ~ sa`, with an `Se` presentation for each class that has one.
pub fn decompose(a: &SPoset) -> Result<Decomposition> {
    check_left(a)?;
    let comps = components(a);
    let idempotents = a.monoid().idempotents().to_vec();
    let generators = comps.iter().map(|c| component_generator(a, c, &idempotents)).collect();
    Ok(Decomposition { components: comps, generators })
}

/// `Some(decomposition)` when the S-poset is projective.
pub fn is_projective(a: &SPoset) -> Result<Option<Decomposition>> {
    let d = decompose(a)?;
    Ok(d.all_generated().then_some(d))
}

/// `Some(basis size)` when the S-poset is free.
pub fn is_free(a: &SPoset) -> Result<Option<usize>> {
    check_left(a)?;
    let comps = components(a);
    let one = [a.monoid().one()];
    let free = comps.iter().all(|c| component_generator(a, c, &one).is_some());
    Ok(free.then_some(comps.len()))
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::relation::Relation;
    use crate::structures::{MorphismKind, Pomonoid};

    fn u2() -> Arc<Pomonoid> {
        Arc::new(Pomonoid::u2(Some(true)))
    }

    #[test]
    fn regular_is_free_of_rank_one() {
        let s = SPoset::regular(u2(), Side::Left);
        let d = decompose(&s).unwrap();
        assert_eq!(d.components, vec![vec![0, 1]]);
        assert_eq!(d.generators[0].as_ref().unwrap().element, 0);
        assert_eq!(is_free(&s).unwrap(), Some(1));
    }

    #[test]
    fn s_plus_se_is_projective_not_free() {
        let m = u2();
        let s = SPoset::regular(m.clone(), Side::Left);
        let se = SPoset::principal(m, Side::Left, 1);
        let a = SPoset::disjoint_union(&[s, se.clone()]).unwrap();
        let d = is_projective(&a).unwrap().unwrap();
        let idem: Vec<_> = d.generators.iter().map(|g| g.as_ref().unwrap().idempotent).collect();
        assert_eq!(idem, vec![0, 1]);
        assert_eq!(is_free(&a).unwrap(), None);
        assert!(is_projective(&se).unwrap().is_some());
        assert_eq!(is_free(&se).unwrap(), None);
    }

    #[test]
    fn generator_maps_are_isomorphisms() {
        let m = u2();
        let a = SPoset::disjoint_union(&[SPoset::regular(m.clone(), Side::Left), SPoset::principal(m.clone(), Side::Left, 1)]).unwrap();
        let d = decompose(&a).unwrap();
        for (comp, g) in d.components.iter().zip(&d.generators) {
            let g = g.as_ref().unwrap();
            let (sub, inc) = a.restrict(comp).unwrap();
            let back = Map::new(g.iso.images.iter().map(|&x| inc.images.iter().position(|&y| y == x).unwrap()).collect());
            let se = SPoset::principal(m.clone(), Side::Left, g.idempotent);
            assert_eq!(back.kind(&se, &sub).unwrap(), MorphismKind::Isomorphism);
        }
    }

    #[test]
    fn chain_over_trivial_monoid_is_not_projective() {
        let b = SPoset::with_trivial_action(Arc::new(Pomonoid::trivial()), Side::Left, Relation::from_pairs(2, [(0, 0), (0, 1), (1, 1)])).unwrap();
        let d = decompose(&b).unwrap();
        assert_eq!(d.components.len(), 1);
        assert!(d.generators[0].is_none());
        assert!(is_projective(&b).unwrap().is_none());
    }

    #[test]
    fn cross_order_pair_breaks_projectivity() {
        let m = u2();
        let a = SPoset::disjoint_union(&[SPoset::regular(m.clone(), Side::Left), SPoset::principal(m, Side::Left, 1)]).unwrap();
        // e.0 <= e.1 is compatible with the action
        let joined = a.with_order_pairs(&[(1, 2)]).unwrap();
        assert_eq!(decompose(&joined).unwrap().components.len(), 1);
        assert!(is_projective(&joined).unwrap().is_none());
    }

    #[test]
    fn free_of_rank_k() {
        let m = u2();
        for k in 1..=3 {
            let parts = vec![SPoset::regular(m.clone(), Side::Left); k];
            assert_eq!(is_free(&SPoset::disjoint_union(&parts).unwrap()).unwrap(), Some(k));
        }
    }
}
