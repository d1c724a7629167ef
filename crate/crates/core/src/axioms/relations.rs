//! The sets `R<=(s,t) = {(u,v) : su <= tv}` and `r<=(s,t) = {u : su <= tu}`,
//! their minimal generators under the right action, and dominating sets.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::structures::Pomonoid;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RelationSets {
    pub s: usize,
    pub t: usize,
    pub pairs: Vec<(usize, usize)>,
    pub pair_generators: Vec<(usize, usize)>,
    pub elements: Vec<usize>,
    pub element_generators: Vec<usize>,
}

/// One representative (least in list order) of each maximal class of a
/// quasi-order given by `below(i, j)`.
fn maximal_representatives(len: usize, below: impl Fn(usize, usize) -> bool) -> Vec<usize> {
    (0..len)
        .filter(|&i| {
            let maximal = (0..len).all(|j| !below(i, j) || below(j, i));
            let least = (0..i).all(|j| !(below(i, j) && below(j, i)));
            maximal && least
        })
        .collect()
}

pub fn r_leq_pairs(m: &Pomonoid, s: usize, t: usize) -> Vec<(usize, usize)> {
    m.elements()
        .flat_map(|u| m.elements().map(move |v| (u, v)))
        .filter(|&(u, v)| m.leq(m.mul(s, u), m.mul(t, v)))
        .collect()
}

pub fn r_leq_elements(m: &Pomonoid, s: usize, t: usize) -> Vec<usize> {
    m.elements().filter(|&u| m.leq(m.mul(s, u), m.mul(t, u))).collect()
}

/// Minimal generators of a set of pairs closed under `(u, v) ↦ (uh, vh)`.
pub fn pair_generators(m: &Pomonoid, set: &[(usize, usize)]) -> Vec<(usize, usize)> {
    let below = |i: usize, j: usize| {
        let ((x, y), (u, v)) = (set[i], set[j]);
        m.elements().any(|h| m.mul(u, h) == x && m.mul(v, h) == y)
    };
    maximal_representatives(set.len(), below).into_iter().map(|i| set[i]).collect()
}

/// Minimal generators of a set of elements closed under `u ↦ uh`.
pub fn element_generators(m: &Pomonoid, set: &[usize]) -> Vec<usize> {
    let below = |i: usize, j: usize| m.elements().any(|h| m.mul(set[j], h) == set[i]);
    maximal_representatives(set.len(), below).into_iter().map(|i| set[i]).collect()
}

pub fn relation_sets(m: &Pomonoid, s: usize, t: usize) -> Result<RelationSets> {
    for x in [s, t] {
        if x >= m.size() {
            return Err(Error::OutOfRange { what: "monoid element", index: x, size: m.size() });
        }
    }
    let pairs = r_leq_pairs(m, s, t);
    let elements = r_leq_elements(m, s, t);
    Ok(RelationSets {
        s,
        t,
        pair_generators: pair_generators(m, &pairs),
        element_generators: element_generators(m, &elements),
        pairs,
        elements,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum DominationKind {
    /// `(u, v)` dominates `(x, y)` in `R<=(s,t)` when `x <= uh` and `vh <= y` for some `h`.
    Pw { s: usize, t: usize },
    /// As `Pw` on `R<=(s,s)`.
    PWPw { s: usize },
    /// `(p, q)` dominates `(p', q')` among pairs `(su, tv)` with `su <= tv`
    /// when `p' <= pz` and `qz <= q'` for some `z`.
    W { s: usize, t: usize },
}

impl fmt::Display for DominationKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DominationKind::Pw { s, t } => write!(f, "Pw({s},{t})"),
            DominationKind::PWPw { s } => write!(f, "PWPw({s})"),
            DominationKind::W { s, t } => write!(f, "W({s},{t})"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DominatingSet {
    pub kind: DominationKind,
    /// The set to be dominated.
    pub candidates: Vec<(usize, usize)>,
    pub set: Vec<(usize, usize)>,
    pub empty: bool,
}

/// Whether `d` dominates `c` (both pairs of monoid elements).
pub fn dominates(m: &Pomonoid, d: (usize, usize), c: (usize, usize)) -> bool {
    m.elements().any(|h| m.leq(c.0, m.mul(d.0, h)) && m.leq(m.mul(d.1, h), c.1))
}

pub fn dominating_set(m: &Pomonoid, kind: DominationKind) -> Result<DominatingSet> {
    let check = |x: usize| {
        if x >= m.size() {
            Err(Error::OutOfRange { what: "monoid element", index: x, size: m.size() })
        } else {
            Ok(())
        }
    };
    let candidates = match kind {
        DominationKind::Pw { s, t } => {
            check(s)?;
            check(t)?;
            r_leq_pairs(m, s, t)
        }
        DominationKind::PWPw { s } => {
            check(s)?;
            r_leq_pairs(m, s, s)
        }
        DominationKind::W { s, t } => {
            check(s)?;
            check(t)?;
            let mut v: Vec<_> = r_leq_pairs(m, s, t).into_iter().map(|(u, v)| (m.mul(s, u), m.mul(t, v))).collect();
            v.sort_unstable();
            v.dedup();
            v
        }
    };
    let reps = maximal_representatives(candidates.len(), |i, j| dominates(m, candidates[j], candidates[i]));
    let set = reps.into_iter().map(|i| candidates[i]).collect();
    Ok(DominatingSet { kind, empty: candidates.is_empty(), candidates, set })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trivial_monoid() {
        let m = Pomonoid::trivial();
        let r = relation_sets(&m, 0, 0).unwrap();
        assert_eq!(r.pairs, vec![(0, 0)]);
        assert_eq!(r.pair_generators, vec![(0, 0)]);
        assert_eq!(dominating_set(&m, DominationKind::Pw { s: 0, t: 0 }).unwrap().set, vec![(0, 0)]);
    }

    #[test]
    fn u2_relation_sets() {
        let m = Pomonoid::u2(Some(true));
        let r = relation_sets(&m, 1, 0).unwrap();
        assert_eq!(r.pairs.len(), 4);
        assert_eq!(r.pair_generators, vec![(0, 0), (0, 1), (1, 0)]);
        assert_eq!(r.elements, vec![0, 1]);
        assert_eq!(r.element_generators, vec![0]);
    }

    #[test]
    fn domination_covers_candidates() {
        for m in [Pomonoid::u2(Some(true)), Pomonoid::u2(None), Pomonoid::cyclic_group(3), Pomonoid::trivial()] {
            for s in m.elements() {
                for t in m.elements() {
                    for kind in [DominationKind::Pw { s, t }, DominationKind::PWPw { s }, DominationKind::W { s, t }] {
                        let d = dominating_set(&m, kind).unwrap();
                        for &c in &d.candidates {
                            assert!(d.set.iter().any(|&x| dominates(&m, x, c)));
                        }
                        assert!(d.set.iter().all(|x| d.candidates.contains(x)));
                    }
                }
            }
        }
    }

    #[test]
    fn discrete_u2_pw_one_e() {
        // 1·u = e·v forces u = e
        let m = Pomonoid::u2(None);
        assert_eq!(r_leq_pairs(&m, 0, 1), vec![(1, 0), (1, 1)]);
    }
}
