//! e-good factorisations and the covering condition on idempotents.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::structures::Pomonoid;

/// `a = xy` is e-good through `x` when no `w, z` have `y = wz`, `e = xw` and
/// `Sw = Se`.
pub fn e_good_check(m: &Pomonoid, a: usize, x: usize, y: usize, e: usize) -> Result<bool> {
    if let Some(&bad) = [a, x, y, e].iter().find(|&&v| v >= m.size()) {
        return Err(Error::OutOfRange { what: "monoid element", index: bad, size: m.size() });
    }
    if m.mul(e, e) != e {
        return Err(Error::Precondition(format!("{} is not idempotent", m.name(e))));
    }
    if m.mul(x, y) != a {
        return Err(Error::Precondition(format!("{} != {}{}", m.name(a), m.name(x), m.name(y))));
    }
    Ok(is_good(m, x, y, e))
}

fn is_good(m: &Pomonoid, x: usize, y: usize, e: usize) -> bool {
    !m.elements().any(|w| m.mul(x, w) == e && m.l_related(w, e) && m.elements().any(|z| m.mul(w, z) == y))
}

/// Elements `x` through which `a` has an e-good factorisation.
pub fn good_through(m: &Pomonoid, a: usize, e: usize) -> Vec<usize> {
    m.elements()
        .filter(|&x| m.elements().any(|y| m.mul(x, y) == a && is_good(m, x, y, e)))
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StarEntry {
    pub idempotent: usize,
    /// `good[a]`: the elements through which `a` factorises e-goodly.
    pub good: Vec<Vec<usize>>,
    /// Smallest covering set, least lexicographically among those.
    pub cover: Option<Vec<usize>>,
    /// Elements with no e-good factorisation.
    pub uncovered: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StarReport {
    pub holds: bool,
    pub entries: Vec<StarEntry>,
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![]];
    }
    if n < k {
        return vec![];
    }
    let mut out = Vec::new();
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        out.push(idx.clone());
        let Some(i) = (0..k).rev().find(|&i| idx[i] < n - k + i) else {
            return out;
        };
        idx[i] += 1;
        for j in i + 1..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

/// For each idempotent `e != 1`, a smallest `f` such that every element has
/// an e-good factorisation through some member of `f`.
pub fn star_condition(m: &Pomonoid) -> StarReport {
    let mut entries = Vec::new();
    for &e in m.idempotents() {
        if e == m.one() {
            continue;
        }
        let good: Vec<Vec<usize>> = m.elements().map(|a| good_through(m, a, e)).collect();
        let uncovered: Vec<usize> = m.elements().filter(|&a| good[a].is_empty()).collect();
        let cover = if uncovered.is_empty() {
            (1..=m.size())
                .flat_map(|k| combinations(m.size(), k))
                .find(|f| good.iter().all(|g| g.iter().any(|x| f.contains(x))))
        } else {
            None
        };
        entries.push(StarEntry { idempotent: e, good, cover, uncovered });
    }
    StarReport { holds: entries.iter().all(|e| e.cover.is_some()), entries }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn u2_examples() {
        let m = Pomonoid::u2(Some(true));
        assert!(e_good_check(&m, 1, 1, 0, 1).unwrap());
        assert!(!e_good_check(&m, 1, 0, 1, 1).unwrap());
        assert!(e_good_check(&m, 1, 0, 0, 1).is_err());
        assert!(e_good_check(&m, 0, 0, 0, 5).is_err());
    }

    #[test]
    fn trivial_monoid_is_vacuous() {
        let r = star_condition(&Pomonoid::trivial());
        assert!(r.holds);
        assert!(r.entries.is_empty());
    }

    #[test]
    fn u2_star_table() {
        let m = Pomonoid::u2(Some(true));
        let r = star_condition(&m);
        assert_eq!(r.entries.len(), 1);
        let entry = &r.entries[0];
        // 1 = 1·1: w must satisfy 1·w = e, so w = e, and 1 = ez is impossible
        assert_eq!(entry.good[0], vec![0]);
        assert_eq!(entry.good[1], vec![1]);
        assert_eq!(entry.cover, Some(vec![0, 1]));
        assert!(r.holds);
    }

    #[test]
    fn combinations_are_lexicographic() {
        assert_eq!(combinations(3, 2), vec![vec![0, 1], vec![0, 2], vec![1, 2]]);
        assert_eq!(combinations(2, 3), Vec::<Vec<usize>>::new());
    }
}
