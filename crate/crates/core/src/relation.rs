//! Dense boolean relations on `0..n`.

use std::fmt;

/// A binary relation on `0..n` stored as a row-major boolean matrix.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Relation {
    n: usize,
    bits: Vec<bool>,
}

impl Relation {
    pub fn empty(n: usize) -> Self {
        Relation { n, bits: vec![false; n * n] }
    }

    pub fn identity(n: usize) -> Self {
        let mut r = Relation::empty(n);
        for i in 0..n {
            r.set(i, i);
        }
        r
    }

    /// Builds the relation from a full boolean matrix. Returns `None` when
    /// the matrix is not square.
    pub fn from_matrix(rows: &[Vec<bool>]) -> Option<Self> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return None;
        }
        Some(Relation { n, bits: rows.iter().flatten().copied().collect() })
    }

    pub fn from_pairs(n: usize, pairs: impl IntoIterator<Item = (usize, usize)>) -> Self {
        let mut r = Relation::empty(n);
        for (a, b) in pairs {
            r.set(a, b);
        }
        r
    }

    #[inline]
    pub fn size(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, a: usize, b: usize) -> bool {
        self.bits[a * self.n + b]
    }

    #[inline]
    pub fn set(&mut self, a: usize, b: usize) {
        self.bits[a * self.n + b] = true;
    }

    #[inline]
    pub fn unset(&mut self, a: usize, b: usize) {
        self.bits[a * self.n + b] = false;
    }

    /// Sets `(a, b)` and reports whether it was newly added.
    #[inline]
    pub fn insert(&mut self, a: usize, b: usize) -> bool {
        let cell = &mut self.bits[a * self.n + b];
        let fresh = !*cell;
        *cell = true;
        fresh
    }

    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.n).flat_map(move |a| (0..self.n).filter(move |&b| self.get(a, b)).map(move |b| (a, b)))
    }

    /// Pairs `(a, b)` with `a != b`.
    pub fn strict_pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.pairs().filter(|(a, b)| a != b)
    }

    pub fn to_matrix(&self) -> Vec<Vec<bool>> {
        self.bits.chunks(self.n.max(1)).take(self.n).map(|c| c.to_vec()).collect()
    }

    pub fn add_reflexive(&mut self) {
        for i in 0..self.n {
            self.set(i, i);
        }
    }

    /// Warshall transitive closure. Returns `true` if anything was added.
    pub fn close_transitive(&mut self) -> bool {
        let n = self.n;
        let mut changed = false;
        for k in 0..n {
            for i in 0..n {
                if !self.get(i, k) {
                    continue;
                }
                for j in 0..n {
                    if self.get(k, j) && self.insert(i, j) {
                        changed = true;
                    }
                }
            }
        }
        changed
    }

    pub fn reflexive_transitive_closure(&self) -> Self {
        let mut r = self.clone();
        r.add_reflexive();
        r.close_transitive();
        r
    }

    pub fn first_non_reflexive(&self) -> Option<usize> {
        (0..self.n).find(|&i| !self.get(i, i))
    }

    pub fn first_antisymmetry_violation(&self) -> Option<(usize, usize)> {
        self.strict_pairs().find(|&(a, b)| self.get(b, a))
    }

    pub fn first_transitivity_violation(&self) -> Option<(usize, usize, usize)> {
        let n = self.n;
        for a in 0..n {
            for b in 0..n {
                if !self.get(a, b) {
                    continue;
                }
                for c in 0..n {
                    if self.get(b, c) && !self.get(a, c) {
                        return Some((a, b, c));
                    }
                }
            }
        }
        None
    }

    pub fn is_partial_order(&self) -> bool {
        self.first_non_reflexive().is_none()
            && self.first_antisymmetry_violation().is_none()
            && self.first_transitivity_violation().is_none()
    }

    /// Equivalence classes of `R ∩ R⁻¹` for a preorder `R`, each sorted, the
    /// list ordered by least member. Also returns the class index of every point.
    pub fn symmetric_classes(&self) -> (Vec<Vec<usize>>, Vec<usize>) {
        let mut class_of = vec![usize::MAX; self.n];
        let mut classes: Vec<Vec<usize>> = Vec::new();
        for a in 0..self.n {
            if class_of[a] != usize::MAX {
                continue;
            }
            let id = classes.len();
            let members: Vec<usize> = (a..self.n)
                .filter(|&b| class_of[b] == usize::MAX && self.get(a, b) && self.get(b, a))
                .collect();
            for &m in &members {
                class_of[m] = id;
            }
            classes.push(members);
        }
        (classes, class_of)
    }

    /// Relation obtained by relabelling every point `i` to `perm[i]`.
    pub fn permuted(&self, perm: &[usize]) -> Self {
        let mut r = Relation::empty(self.n);
        for (a, b) in self.pairs() {
            r.set(perm[a], perm[b]);
        }
        r
    }
}

impl fmt::Debug for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.strict_pairs()).finish()
    }
}

/// All partial orders on `0..n`, in a fixed deterministic order.
pub fn all_partial_orders(n: usize) -> Vec<Relation> {
    let unordered: Vec<(usize, usize)> =
        (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b))).collect();
    let mut out = Vec::new();
    let mut choice = vec![0u8; unordered.len()];
    loop {
        let mut r = Relation::identity(n);
        for (&(a, b), &c) in unordered.iter().zip(&choice) {
            match c {
                1 => r.set(a, b),
                2 => r.set(b, a),
                _ => {}
            }
        }
        if r.first_transitivity_violation().is_none() {
            out.push(r);
        }
        // odometer
        let mut i = 0;
        loop {
            if i == choice.len() {
                return out;
            }
            choice[i] += 1;
            if choice[i] < 3 {
                break;
            }
            choice[i] = 0;
            i += 1;
        }
    }
}
