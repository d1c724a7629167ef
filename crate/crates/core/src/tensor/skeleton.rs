//! Ordered skeletons and the formulas they index.
//!
//! For a skeleton `(s_1, t_1, …, s_m, t_m)`:
//!
//! * `epsilon(x, x_2, …, x_m, x')` is `x s_1 <= x_2 t_1 ∧ … ∧ x_m s_m <= x' t_m`
//!   in a right S-poset;
//! * `theta(x, x_1, …, x_m, x')` is `x <= s_1 x_1 ∧ t_1 x_1 <= s_2 x_2 ∧ … ∧ t_m x_m <= x'`
//!   in a left S-poset;
//! * `delta_leq` / `gamma_leq` close those existentially over the inner
//!   variables;
//! * for a doubled skeleton `(S_1, S_2)`, `delta(x, x')` is
//!   `delta_leq_{S_1}(x, x') ∧ delta_leq_{S_2}(x', x)` and `gamma(x, x')` is
//!   `gamma_leq_{S_1}(x, x') ∧ gamma_leq_{S_2}(x', x)`.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::structures::{SPoset, Side};

/// An ordered skeleton, or a double ordered skeleton when `doubled` is set.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Skeleton {
    pub entries: Vec<usize>,
    pub doubled: Option<Vec<usize>>,
}

impl Skeleton {
    pub fn single(entries: Vec<usize>) -> Result<Self> {
        check_half(&entries)?;
        Ok(Skeleton { entries, doubled: None })
    }

    pub fn double(first: Vec<usize>, second: Vec<usize>) -> Result<Self> {
        check_half(&first)?;
        check_half(&second)?;
        Ok(Skeleton { entries: first, doubled: Some(second) })
    }

    /// All-identity skeleton of the given tossing lengths.
    pub fn ones(one: usize, m: usize, n: Option<usize>) -> Self {
        Skeleton { entries: vec![one; 2 * m], doubled: n.map(|n| vec![one; 2 * n]) }
    }

    pub fn is_doubled(&self) -> bool {
        self.doubled.is_some()
    }

    /// Total number of entries.
    pub fn len(&self) -> usize {
        self.entries.len() + self.doubled.as_ref().map_or(0, Vec::len)
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Tossing length `m` of the first half.
    pub fn first_len(&self) -> usize {
        self.entries.len() / 2
    }

    /// Tossing length `n` of the second half (0 when single).
    pub fn second_len(&self) -> usize {
        self.doubled.as_ref().map_or(0, |d| d.len() / 2)
    }

    pub fn first_rows(&self) -> Vec<(usize, usize)> {
        rows(&self.entries)
    }

    pub fn second_rows(&self) -> Vec<(usize, usize)> {
        self.doubled.as_deref().map(rows).unwrap_or_default()
    }

    /// Entries of both halves, flattened.
    pub fn flat(&self) -> Vec<usize> {
        let mut v = self.entries.clone();
        if let Some(d) = &self.doubled {
            v.extend_from_slice(d);
        }
        v
    }

    pub fn display<'a>(&'a self, names: &'a [String]) -> impl fmt::Display + 'a {
        SkeletonDisplay { sk: self, names }
    }
}

struct SkeletonDisplay<'a> {
    sk: &'a Skeleton,
    names: &'a [String],
}

impl fmt::Display for SkeletonDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |v: &[usize]| v.iter().map(|&i| self.names[i].as_str()).collect::<Vec<_>>().join(",");
        write!(f, "({}", join(&self.sk.entries))?;
        if let Some(d) = &self.sk.doubled {
            write!(f, " | {}", join(d))?;
        }
        f.write_str(")")
    }
}

fn check_half(entries: &[usize]) -> Result<()> {
    if entries.len() < 2 || !entries.len().is_multiple_of(2) {
        return Err(Error::Malformed(format!("skeleton half of length {} (need even, at least 2)", entries.len())));
    }
    Ok(())
}

fn rows(entries: &[usize]) -> Vec<(usize, usize)> {
    entries.chunks(2).map(|c| (c[0], c[1])).collect()
}

fn sequences(alphabet: usize, len: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for _ in 0..len {
        out = out.into_iter().flat_map(|v| (0..alphabet).map(move |x| {
            let mut w = v.clone();
            w.push(x);
            w
        })).collect();
    }
    out
}

/// Every skeleton over a monoid of the given size with total length at most
/// `max_len`: ordered by length, then lexicographically on the flattened
/// entries, then by the length of the first half.
pub fn enumerate_skeletons(monoid_size: usize, max_len: usize, doubled: bool) -> Vec<Skeleton> {
    let mut out = Vec::new();
    let min = if doubled { 4 } else { 2 };
    let mut len = min;
    while len <= max_len {
        for flat in sequences(monoid_size, len) {
            if doubled {
                for cut in (2..len).step_by(2) {
                    out.push(Skeleton { entries: flat[..cut].to_vec(), doubled: Some(flat[cut..].to_vec()) });
                }
            } else {
                out.push(Skeleton { entries: flat, doubled: None });
            }
        }
        len += 2;
    }
    out
}

/// The formulas indexed by skeletons.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SkeletonFormula {
    Epsilon,
    Theta,
    Delta,
    Gamma,
    DeltaLeq,
    GammaLeq,
}

impl SkeletonFormula {
    fn side(self) -> Side {
        match self {
            SkeletonFormula::Epsilon | SkeletonFormula::Delta | SkeletonFormula::DeltaLeq => Side::Right,
            _ => Side::Left,
        }
    }

    fn wants_doubled(self) -> bool {
        matches!(self, SkeletonFormula::Delta | SkeletonFormula::Gamma)
    }
}

/// Truth value of a formula, with the existential witnesses when it holds.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FormulaValue {
    pub holds: bool,
    pub witness: Option<Vec<usize>>,
}

impl FormulaValue {
    fn from_witness(w: Option<Vec<usize>>) -> Self {
        FormulaValue { holds: w.is_some(), witness: w }
    }
}

/// Evaluates a skeleton formula at `args`. Quantifier-free kinds take the
/// full variable tuple; the existential kinds take `(x, x')` and return the
/// inner variables as witness (for doubled kinds, first half then second).
pub fn eval_skeleton_formula(kind: SkeletonFormula, sk: &Skeleton, x: &SPoset, args: &[usize]) -> Result<FormulaValue> {
    if x.side() != kind.side() {
        return Err(Error::WrongSide { expected: kind.side(), found: x.side() });
    }
    if sk.is_doubled() != kind.wants_doubled() {
        return Err(Error::Precondition(format!(
            "{kind:?} needs a {} skeleton",
            if kind.wants_doubled() { "doubled" } else { "single" }
        )));
    }
    let m = sk.first_len();
    let expected = match kind {
        SkeletonFormula::Epsilon => m + 1,
        SkeletonFormula::Theta => m + 2,
        _ => 2,
    };
    if args.len() != expected {
        return Err(Error::Arity { expected, found: args.len() });
    }
    if let Some(&bad) = args.iter().find(|&&a| a >= x.size()) {
        return Err(Error::OutOfRange { what: "argument", index: bad, size: x.size() });
    }
    let rows = sk.first_rows();
    Ok(match kind {
        SkeletonFormula::Epsilon => {
            let holds = epsilon_holds(x, &rows, args);
            FormulaValue { holds, witness: None }
        }
        SkeletonFormula::Theta => {
            let holds = theta_holds(x, &rows, args);
            FormulaValue { holds, witness: None }
        }
        SkeletonFormula::DeltaLeq => FormulaValue::from_witness(right_chain(x, &rows, args[0], args[1])),
        SkeletonFormula::GammaLeq => FormulaValue::from_witness(left_chain(x, &rows, args[0], args[1])),
        SkeletonFormula::Delta => {
            let w = right_chain(x, &rows, args[0], args[1])
                .and_then(|mut w| right_chain(x, &sk.second_rows(), args[1], args[0]).map(|w2| {
                    w.extend(w2);
                    w
                }));
            FormulaValue::from_witness(w)
        }
        SkeletonFormula::Gamma => {
            let w = left_chain(x, &rows, args[0], args[1])
                .and_then(|mut w| left_chain(x, &sk.second_rows(), args[1], args[0]).map(|w2| {
                    w.extend(w2);
                    w
                }));
            FormulaValue::from_witness(w)
        }
    })
}

/// `epsilon` at `(x, x_2, …, x_m, x')`.
pub(crate) fn epsilon_holds(a: &SPoset, rows: &[(usize, usize)], vars: &[usize]) -> bool {
    rows.iter().enumerate().all(|(i, &(s, t))| a.leq(a.act(s, vars[i]), a.act(t, vars[i + 1])))
}

/// `theta` at `(x, x_1, …, x_m, x')`.
pub(crate) fn theta_holds(b: &SPoset, rows: &[(usize, usize)], vars: &[usize]) -> bool {
    let m = rows.len();
    if !b.leq(vars[0], b.act(rows[0].0, vars[1])) {
        return false;
    }
    for i in 1..m {
        if !b.leq(b.act(rows[i - 1].1, vars[i]), b.act(rows[i].0, vars[i + 1])) {
            return false;
        }
    }
    b.leq(b.act(rows[m - 1].1, vars[m]), vars[m + 1])
}

/// Layered search for `x_2, …, x_m` with `x s_1 <= x_2 t_1, …, x_m s_m <= x' t_m`.
/// Returns the witness built from least predecessors.
pub(crate) fn right_chain(a: &SPoset, rows: &[(usize, usize)], from: usize, to: usize) -> Option<Vec<usize>> {
    let m = rows.len();
    let n = a.size();
    // layer[k][z]: predecessor of z at position k+1 (position 1 is `from`)
    let mut reach = vec![false; n];
    reach[from] = true;
    let mut back: Vec<Vec<usize>> = Vec::with_capacity(m);
    for &(s, t) in &rows[..m - 1] {
        let mut next = vec![false; n];
        let mut pred = vec![usize::MAX; n];
        for y in (0..n).filter(|&y| reach[y]) {
            let ys = a.act(s, y);
            for z in 0..n {
                if !next[z] && a.leq(ys, a.act(t, z)) {
                    next[z] = true;
                    pred[z] = y;
                }
            }
        }
        back.push(pred);
        reach = next;
    }
    let (s, t) = rows[m - 1];
    let last = (0..n).find(|&y| reach[y] && a.leq(a.act(s, y), a.act(t, to)))?;
    let mut chain = vec![last];
    for pred in back.iter().rev() {
        let cur = *chain.last().unwrap();
        chain.push(pred[cur]);
    }
    // chain = [x_m, …, x_2, x]; drop x
    chain.pop();
    chain.reverse();
    Some(chain)
}

/// Layered search for `x_1, …, x_m` with `x <= s_1 x_1, t_1 x_1 <= s_2 x_2, …, t_m x_m <= x'`.
pub(crate) fn left_chain(b: &SPoset, rows: &[(usize, usize)], from: usize, to: usize) -> Option<Vec<usize>> {
    let m = rows.len();
    let n = b.size();
    let mut reach: Vec<bool> = (0..n).map(|z| b.leq(from, b.act(rows[0].0, z))).collect();
    let mut back: Vec<Vec<usize>> = Vec::with_capacity(m);
    for i in 1..m {
        let t = rows[i - 1].1;
        let s = rows[i].0;
        let mut next = vec![false; n];
        let mut pred = vec![usize::MAX; n];
        for y in (0..n).filter(|&y| reach[y]) {
            let ty = b.act(t, y);
            for z in 0..n {
                if !next[z] && b.leq(ty, b.act(s, z)) {
                    next[z] = true;
                    pred[z] = y;
                }
            }
        }
        back.push(pred);
        reach = next;
    }
    let t = rows[m - 1].1;
    let last = (0..n).find(|&y| reach[y] && b.leq(b.act(t, y), to))?;
    let mut chain = vec![last];
    for pred in back.iter().rev() {
        let cur = *chain.last().unwrap();
        chain.push(pred[cur]);
    }
    chain.reverse();
    Some(chain)
}
