//! Ordered tossings: certificates for `a ⊗ b <= a' ⊗ b'`.
//!
//! A tossing of length `m` with skeleton `(s_1, t_1, …, s_m, t_m)` consists of
//! `a_2, …, a_m ∈ A` and `b_1, …, b_m ∈ B` such that
//!
//! ```text
//!                     b   <= s_1 b_1
//! a   s_1 <= a_2 t_1      t_1 b_1 <= s_2 b_2
//!         …                       …
//! a_m s_m <= a'  t_m      t_m b_m <= b'
//! ```
//!
//! A double tossing adds a second sequence running from `(a', b')` back to `(a, b)`.

use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use super::skeleton::{epsilon_holds, left_chain, right_chain, theta_holds, Skeleton};
use super::{check_pair, TensorPoset};
use crate::error::{Error, Result};
use crate::structures::{SPoset, Side};

/// An ordered (or double ordered) tossing between two pairs of `A × B`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TossingCertificate {
    pub from: (usize, usize),
    pub to: (usize, usize),
    pub skeleton: Skeleton,
    /// `a_2, …, a_m`, then `c_2, …, c_n` when doubled.
    pub a_chain: Vec<usize>,
    /// `b_1, …, b_m`, then `d_1, …, d_n` when doubled.
    pub b_chain: Vec<usize>,
}

impl TossingCertificate {
    /// Tossing length of the forward part.
    pub fn len(&self) -> usize {
        self.skeleton.first_len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Forward rows as `(a_i, b_i)` with `a_1 = a`.
    pub fn forward_rows(&self) -> Vec<(usize, usize)> {
        let m = self.skeleton.first_len();
        let mut a = vec![self.from.0];
        a.extend_from_slice(&self.a_chain[..m - 1]);
        a.into_iter().zip(self.b_chain[..m].iter().copied()).collect()
    }

    /// Backward rows as `(c_j, d_j)` with `c_1 = a'`.
    pub fn backward_rows(&self) -> Vec<(usize, usize)> {
        let (m, n) = (self.skeleton.first_len(), self.skeleton.second_len());
        if n == 0 {
            return Vec::new();
        }
        let mut c = vec![self.to.0];
        c.extend_from_slice(&self.a_chain[m - 1..m - 1 + n - 1]);
        c.into_iter().zip(self.b_chain[m..m + n].iter().copied()).collect()
    }
}

#[derive(Debug, Clone, Copy)]
enum Step {
    Order,
    /// `(a s, b) -> (a, s b)`
    Forward { a: usize, s: usize, b: usize },
    /// `(a, s b) -> (a s, b)`
    Backward { a: usize, s: usize, b: usize },
}

/// Path in `A × B` from `p` to `q` using the fewest swap steps, as a list of
/// steps. `None` when `q` is not reachable.
fn shortest_path(t: &TensorPoset, p: usize, q: usize) -> Option<Vec<Step>> {
    let (a, b) = (&t.left_factor, &t.right_factor);
    let n = a.size() * b.size();
    let mut dist = vec![usize::MAX; n];
    let mut pred: Vec<Option<(usize, Step)>> = vec![None; n];
    let mut queue = VecDeque::new();
    dist[p] = 0;
    queue.push_back(p);
    while let Some(u) = queue.pop_front() {
        if u == q {
            break;
        }
        let (x, y) = t.unpair(u);
        let mut relax = |v: usize, w: usize, step: Step, queue: &mut VecDeque<usize>| {
            if v != u && dist[u] + w < dist[v] {
                dist[v] = dist[u] + w;
                pred[v] = Some((u, step));
                if w == 0 {
                    queue.push_front(v);
                } else {
                    queue.push_back(v);
                }
            }
        };
        for x2 in a.elements().filter(|&x2| a.leq(x, x2)) {
            for y2 in b.elements().filter(|&y2| b.leq(y, y2)) {
                relax(t.pair(x2, y2), 0, Step::Order, &mut queue);
            }
        }
        for s in a.monoid().elements() {
            for a0 in a.elements().filter(|&a0| a.act(s, a0) == x) {
                relax(t.pair(a0, b.act(s, y)), 1, Step::Forward { a: a0, s, b: y }, &mut queue);
            }
            for b0 in b.elements().filter(|&b0| b.act(s, b0) == y) {
                relax(t.pair(a.act(s, x), b0), 1, Step::Backward { a: x, s, b: b0 }, &mut queue);
            }
        }
    }
    if dist[q] == usize::MAX {
        return None;
    }
    let mut steps = Vec::new();
    let mut cur = q;
    while let Some((prev, step)) = pred[cur] {
        steps.push(step);
        cur = prev;
    }
    steps.reverse();
    Some(steps)
}

/// Rows `(s_i, t_i, a_{i+1}, b_i)` read off a path; `a_{m+1}` is dropped by the caller.
fn rows_of_path(t: &TensorPoset, steps: &[Step], start_b: usize) -> (Vec<usize>, Vec<usize>, Vec<usize>) {
    let one = t.monoid().one();
    let (a, _) = (&t.left_factor, &t.right_factor);
    let mut skeleton = Vec::new();
    let mut ends = Vec::new();
    let mut bs = Vec::new();
    for step in steps {
        match *step {
            Step::Order => {}
            Step::Forward { a: x, s, b: y } => {
                skeleton.extend([one, s]);
                ends.push(x);
                bs.push(y);
            }
            Step::Backward { a: x, s, b: y } => {
                skeleton.extend([s, one]);
                ends.push(a.act(s, x));
                bs.push(y);
            }
        }
    }
    if skeleton.is_empty() {
        return (vec![one, one], Vec::new(), vec![start_b]);
    }
    ends.pop();
    (skeleton, ends, bs)
}

/// An ordered tossing from `p` to `q`, present exactly when `p ⊗ <= q ⊗`.
/// Uses a path with the fewest swap steps; order steps are folded into the
/// neighbouring rows.
pub fn extract_tossing(t: &TensorPoset, p: (usize, usize), q: (usize, usize)) -> Result<Option<TossingCertificate>> {
    check_pair(t, p)?;
    check_pair(t, q)?;
    let Some(steps) = shortest_path(t, t.pair(p.0, p.1), t.pair(q.0, q.1)) else {
        return Ok(None);
    };
    let (entries, a_chain, b_chain) = rows_of_path(t, &steps, p.1);
    Ok(Some(TossingCertificate { from: p, to: q, skeleton: Skeleton { entries, doubled: None }, a_chain, b_chain }))
}

/// A double ordered tossing between `p` and `q`, present exactly when the two
/// pairs lie in one tensor class.
pub fn extract_double_tossing(t: &TensorPoset, p: (usize, usize), q: (usize, usize)) -> Result<Option<TossingCertificate>> {
    let (Some(fwd), Some(bwd)) = (extract_tossing(t, p, q)?, extract_tossing(t, q, p)?) else {
        return Ok(None);
    };
    let mut a_chain = fwd.a_chain;
    a_chain.extend(bwd.a_chain);
    let mut b_chain = fwd.b_chain;
    b_chain.extend(bwd.b_chain);
    Ok(Some(TossingCertificate {
        from: p,
        to: q,
        skeleton: Skeleton { entries: fwd.skeleton.entries, doubled: Some(bwd.skeleton.entries) },
        a_chain,
        b_chain,
    }))
}

fn check_half(entries: &[usize]) -> Result<usize> {
    if entries.len() < 2 || !entries.len().is_multiple_of(2) {
        return Err(Error::Malformed(format!("skeleton half of length {}", entries.len())));
    }
    Ok(entries.len() / 2)
}

/// Checks every row inequality of a certificate in `A` and `B`.
pub fn verify_tossing(a: &SPoset, b: &SPoset, cert: &TossingCertificate) -> Result<bool> {
    if a.side() != Side::Right {
        return Err(Error::WrongSide { expected: Side::Right, found: a.side() });
    }
    if b.side() != Side::Left {
        return Err(Error::WrongSide { expected: Side::Left, found: b.side() });
    }
    if !a.same_monoid(b) {
        return Err(Error::MonoidMismatch);
    }
    let m = check_half(&cert.skeleton.entries)?;
    let n = match &cert.skeleton.doubled {
        Some(d) => check_half(d)?,
        None => 0,
    };
    let a_len = m - 1 + n.saturating_sub(1);
    if cert.a_chain.len() != a_len {
        return Err(Error::Arity { expected: a_len, found: cert.a_chain.len() });
    }
    if cert.b_chain.len() != m + n {
        return Err(Error::Arity { expected: m + n, found: cert.b_chain.len() });
    }
    let size = a.monoid().size();
    if let Some(&bad) = cert.skeleton.flat().iter().find(|&&s| s >= size) {
        return Err(Error::OutOfRange { what: "skeleton entry", index: bad, size });
    }
    for &x in cert.a_chain.iter().chain([&cert.from.0, &cert.to.0]) {
        if x >= a.size() {
            return Err(Error::OutOfRange { what: "left factor element", index: x, size: a.size() });
        }
    }
    for &y in cert.b_chain.iter().chain([&cert.from.1, &cert.to.1]) {
        if y >= b.size() {
            return Err(Error::OutOfRange { what: "right factor element", index: y, size: b.size() });
        }
    }
    let half_holds = |rows: &[(usize, usize)], inner_a: &[usize], inner_b: &[usize], from: (usize, usize), to: (usize, usize)| {
        let mut av = vec![from.0];
        av.extend_from_slice(inner_a);
        av.push(to.0);
        let mut bv = vec![from.1];
        bv.extend_from_slice(inner_b);
        bv.push(to.1);
        epsilon_holds(a, rows, &av) && theta_holds(b, rows, &bv)
    };
    let forward = half_holds(&cert.skeleton.first_rows(), &cert.a_chain[..m - 1], &cert.b_chain[..m], cert.from, cert.to);
    let backward = n == 0
        || half_holds(&cert.skeleton.second_rows(), &cert.a_chain[m - 1..], &cert.b_chain[m..], cert.to, cert.from);
    Ok(forward && backward)
}

/// Whether a skeleton connects `p` and `q`: `delta(a, a')` in `A` and
/// `gamma(b, b')` in `B` for a doubled skeleton, or their `<=` forms for a
/// single one.
pub fn connected_by_skeleton(a: &SPoset, b: &SPoset, p: (usize, usize), q: (usize, usize), sk: &Skeleton) -> Result<bool> {
    if a.side() != Side::Right {
        return Err(Error::WrongSide { expected: Side::Right, found: a.side() });
    }
    if b.side() != Side::Left {
        return Err(Error::WrongSide { expected: Side::Left, found: b.side() });
    }
    for &(x, y) in [&p, &q] {
        if x >= a.size() || y >= b.size() {
            return Err(Error::OutOfRange { what: "pair", index: x.max(y), size: a.size().min(b.size()) });
        }
    }
    let rows = sk.first_rows();
    let mut ok = right_chain(a, &rows, p.0, q.0).is_some() && left_chain(b, &rows, p.1, q.1).is_some();
    if ok && sk.is_doubled() {
        let rows = sk.second_rows();
        ok = right_chain(a, &rows, q.0, p.0).is_some() && left_chain(b, &rows, q.1, p.1).is_some();
    }
    Ok(ok)
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::relation::Relation;
    use crate::structures::Pomonoid;
    use crate::tensor::{tensor_leq, tensor_product};

    fn theta_s() -> TensorPoset {
        let m = Arc::new(Pomonoid::u2(Some(true)));
        tensor_product(&SPoset::one_point(m.clone(), Side::Right), &SPoset::regular(m, Side::Left)).unwrap()
    }

    #[test]
    fn equal_pairs_give_the_unit_certificate() {
        let t = theta_s();
        let c = extract_tossing(&t, (0, 1), (0, 1)).unwrap().unwrap();
        assert_eq!(c.skeleton.entries, vec![0, 0]);
        assert_eq!(c.b_chain, vec![1]);
        assert!(c.a_chain.is_empty());
        assert!(verify_tossing(&t.left_factor, &t.right_factor, &c).unwrap());
    }

    #[test]
    fn theta_certificate_uses_e() {
        let t = theta_s();
        let c = extract_tossing(&t, (0, 0), (0, 1)).unwrap().unwrap();
        assert!(c.skeleton.entries.contains(&1));
        assert!(verify_tossing(&t.left_factor, &t.right_factor, &c).unwrap());
        assert!(connected_by_skeleton(&t.left_factor, &t.right_factor, (0, 0), (0, 1), &c.skeleton).unwrap());
        let d = extract_double_tossing(&t, (0, 0), (0, 1)).unwrap().unwrap();
        assert!(verify_tossing(&t.left_factor, &t.right_factor, &d).unwrap());
    }

    #[test]
    fn pure_order_path_has_unit_entries() {
        let m = Arc::new(Pomonoid::trivial());
        let ch = Relation::from_pairs(2, [(0, 0), (0, 1), (1, 1)]);
        let a = SPoset::with_trivial_action(m.clone(), Side::Right, ch.clone()).unwrap();
        let b = SPoset::with_trivial_action(m, Side::Left, ch).unwrap();
        let t = tensor_product(&a, &b).unwrap();
        let c = extract_tossing(&t, (0, 0), (1, 1)).unwrap().unwrap();
        assert!(c.skeleton.entries.iter().all(|&s| s == 0));
        assert!(verify_tossing(&a, &b, &c).unwrap());
        assert!(extract_tossing(&t, (1, 1), (0, 0)).unwrap().is_none());
    }

    #[test]
    fn mutated_certificate_is_rejected() {
        // S_S ⊗ S over discrete U2: (e, 1) <= (1, e) needs the swap through e
        let m = Arc::new(Pomonoid::u2(None));
        let a = SPoset::regular(m.clone(), Side::Right);
        let b = SPoset::regular(m, Side::Left);
        let t = tensor_product(&a, &b).unwrap();
        let c = extract_tossing(&t, (1, 0), (0, 1)).unwrap().unwrap();
        assert!(verify_tossing(&a, &b, &c).unwrap());
        let mut bad = c.clone();
        for y in &mut bad.b_chain {
            *y = 1 - *y;
        }
        assert!(!verify_tossing(&a, &b, &bad).unwrap());
        let mut short = c;
        short.b_chain.clear();
        assert!(matches!(verify_tossing(&a, &b, &short), Err(Error::Arity { .. })));
    }

    #[test]
    fn extraction_agrees_with_closure() {
        let monoids = [Pomonoid::trivial(), Pomonoid::u2(Some(true)), Pomonoid::u2(None), Pomonoid::cyclic_group(2)];
        for m in monoids {
            let m = Arc::new(m);
            let a = SPoset::disjoint_union(&[SPoset::regular(m.clone(), Side::Right), SPoset::one_point(m.clone(), Side::Right)]).unwrap();
            let b = SPoset::disjoint_union(&[SPoset::regular(m.clone(), Side::Left), SPoset::one_point(m.clone(), Side::Left)]).unwrap();
            let t = tensor_product(&a, &b).unwrap();
            for p in 0..a.size() * b.size() {
                for q in 0..a.size() * b.size() {
                    let (p, q) = (t.unpair(p), t.unpair(q));
                    let leq = tensor_leq(&t, p, q).unwrap();
                    let cert = extract_tossing(&t, p, q).unwrap();
                    assert_eq!(leq, cert.is_some());
                    if let Some(c) = cert {
                        assert!(verify_tossing(&a, &b, &c).unwrap());
                    }
                    let same = t.class(p.0, p.1) == t.class(q.0, q.1);
                    let d = extract_double_tossing(&t, p, q).unwrap();
                    assert_eq!(same, d.is_some());
                    if let Some(d) = d {
                        assert!(verify_tossing(&a, &b, &d).unwrap());
                        assert!(connected_by_skeleton(&a, &b, p, q, &d.skeleton).unwrap());
                    }
                }
            }
        }
    }
}
