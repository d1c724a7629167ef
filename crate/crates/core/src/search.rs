//! Enumeration of small pomonoids and S-posets up to isomorphism, the
//! implication audit over an enumerated family, and counterexample search
//! between classes.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::conditions::{check_condition, ConditionName};
use crate::error::{Error, Result};
use crate::flatness::{check_flat_bounded, check_ideal_flatness, FlatVariant};
use crate::relation::{all_partial_orders, Relation};
use crate::structure::{is_free, is_projective};
use crate::structures::{Pomonoid, RawSPoset, SPoset, Side};

pub const MONOID_CAP: usize = 4;
pub const SPOSET_CAP: usize = 4;

/// All permutations of `0..n` in lexicographic order.
pub fn permutations(n: usize) -> Vec<Vec<usize>> {
    fn go(prefix: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
        if prefix.len() == used.len() {
            out.push(prefix.clone());
            return;
        }
        for i in 0..used.len() {
            if !used[i] {
                used[i] = true;
                prefix.push(i);
                go(prefix, used, out);
                prefix.pop();
                used[i] = false;
            }
        }
    }
    let mut out = Vec::new();
    go(&mut Vec::with_capacity(n), &mut vec![false; n], &mut out);
    out
}

fn order_bits(leq: &Relation, perm: &[usize]) -> Vec<bool> {
    let n = leq.size();
    let mut bits = vec![false; n * n];
    for (a, b) in leq.pairs() {
        bits[perm[a] * n + perm[b]] = true;
    }
    bits
}

fn check_cap(requested: usize, cap: usize) -> Result<()> {
    if requested > cap {
        return Err(Error::OverCap { requested, cap });
    }
    Ok(())
}

fn relabel_table(mul: &[usize], n: usize, perm: &[usize]) -> Vec<usize> {
    let mut out = vec![0; n * n];
    for a in 0..n {
        for b in 0..n {
            out[perm[a] * n + perm[b]] = perm[mul[a * n + b]];
        }
    }
    out
}

fn associative(mul: &[usize], n: usize) -> bool {
    (0..n).all(|a| (0..n).all(|b| (0..n).all(|c| mul[mul[a * n + b] * n + c] == mul[a * n + mul[b * n + c]])))
}

fn compatible_monoid_order(mul: &[usize], n: usize, leq: &Relation) -> bool {
    leq.pairs().all(|(a, b)| (0..n).all(|c| leq.get(mul[c * n + a], mul[c * n + b]) && leq.get(mul[a * n + c], mul[b * n + c])))
}

/// Associative tables on `0..n` with identity `0`, in lexicographic order.
fn monoid_tables(n: usize) -> Vec<Vec<usize>> {
    let free: Vec<(usize, usize)> = (1..n).flat_map(|a| (1..n).map(move |b| (a, b))).collect();
    let mut base = vec![0; n * n];
    for a in 0..n {
        base[a] = a;
        base[a * n] = a;
    }
    let mut out = Vec::new();
    let mut digits = vec![0usize; free.len()];
    loop {
        let mut t = base.clone();
        for (&(a, b), &d) in free.iter().zip(&digits) {
            t[a * n + b] = d;
        }
        if associative(&t, n) {
            out.push(t);
        }
        let Some(i) = (0..digits.len()).rev().find(|&i| digits[i] + 1 < n) else {
            return out;
        };
        digits[i] += 1;
        for d in &mut digits[i + 1..] {
            *d = 0;
        }
    }
}

/// Pomonoids of order `n` up to isomorphism. The representative of each
/// class has the identity at `0` and the lexicographically least table, then
/// the least order among relabellings fixing that table.
pub fn enumerate_pomonoids(n: usize) -> Result<Vec<Pomonoid>> {
    check_cap(n, MONOID_CAP)?;
    if n == 0 {
        return Err(Error::EmptyCarrier);
    }
    let perms: Vec<Vec<usize>> = permutations(n).into_iter().filter(|p| p[0] == 0).collect();
    let orders = all_partial_orders(n);
    let mut out = Vec::new();
    for table in monoid_tables(n) {
        if perms.iter().any(|p| relabel_table(&table, n, p) < table) {
            continue;
        }
        let autos: Vec<&Vec<usize>> = perms.iter().filter(|p| relabel_table(&table, n, p) == table).collect();
        let mut seen = BTreeSet::new();
        for leq in &orders {
            if !compatible_monoid_order(&table, n, leq) {
                continue;
            }
            let canonical = autos.iter().map(|p| order_bits(leq, p)).min().expect("identity is an automorphism");
            if canonical == order_bits(leq, &(0..n).collect::<Vec<_>>()) && seen.insert(canonical) {
                out.push(Pomonoid::from_tables(table.clone(), 0, leq.clone())?);
            }
        }
    }
    Ok(out)
}

fn compose_ok(side: Side, f: &[usize], g: &[usize], fg: &[usize]) -> bool {
    // left: s(ta) = (st)a, i.e. f∘g; right: (as)t = a(st), i.e. g∘f
    (0..f.len()).all(|a| match side {
        Side::Left => f[g[a]] == fg[a],
        Side::Right => g[f[a]] == fg[a],
    })
}

/// Action tables (rows indexed by monoid element) satisfying the identity
/// and composition laws.
fn action_tables(monoid: &Pomonoid, m: usize, side: Side) -> Vec<Vec<Vec<usize>>> {
    let k = monoid.size();
    let all_maps: Vec<Vec<usize>> = {
        let mut v = Vec::new();
        let mut digits = vec![0usize; m];
        loop {
            v.push(digits.clone());
            let Some(i) = (0..m).rev().find(|&i| digits[i] + 1 < m) else { break };
            digits[i] += 1;
            for d in &mut digits[i + 1..] {
                *d = 0;
            }
        }
        v
    };
    let order: Vec<usize> = monoid.elements().filter(|&s| s != monoid.one()).collect();
    let mut rows: Vec<Option<Vec<usize>>> = vec![None; k];
    rows[monoid.one()] = Some((0..m).collect());
    let mut out = Vec::new();

    fn consistent(monoid: &Pomonoid, side: Side, rows: &[Option<Vec<usize>>]) -> bool {
        monoid.elements().all(|s| {
            monoid.elements().all(|t| match (&rows[s], &rows[t], &rows[monoid.mul(s, t)]) {
                (Some(f), Some(g), Some(fg)) => compose_ok(side, f, g, fg),
                _ => true,
            })
        })
    }

    fn go(
        monoid: &Pomonoid,
        side: Side,
        order: &[usize],
        idx: usize,
        all_maps: &[Vec<usize>],
        rows: &mut Vec<Option<Vec<usize>>>,
        out: &mut Vec<Vec<Vec<usize>>>,
    ) {
        if idx == order.len() {
            out.push(rows.iter().map(|r| r.clone().expect("all assigned")).collect());
            return;
        }
        for f in all_maps {
            rows[order[idx]] = Some(f.clone());
            if consistent(monoid, side, rows) {
                go(monoid, side, order, idx + 1, all_maps, rows, out);
            }
        }
        rows[order[idx]] = None;
    }

    go(monoid, side, &order, 0, &all_maps, &mut rows, &mut out);
    out
}

fn relabel_action(act: &[Vec<usize>], perm: &[usize]) -> Vec<Vec<usize>> {
    act.iter()
        .map(|row| {
            let mut r = vec![0; row.len()];
            for (a, &img) in row.iter().enumerate() {
                r[perm[a]] = perm[img];
            }
            r
        })
        .collect()
}

fn compatible_action_order(monoid: &Pomonoid, act: &[Vec<usize>], leq: &Relation) -> bool {
    let m = leq.size();
    let theta = leq.pairs().all(|(a, b)| act.iter().all(|row| leq.get(row[a], row[b])));
    let psi = monoid.order().pairs().all(|(u, v)| (0..m).all(|a| leq.get(act[u][a], act[v][a])));
    theta && psi
}

/// S-posets of size `m` on the given side up to isomorphism. Each class is
/// represented by its lexicographically least action table, then least
/// order; the list is sorted by that encoding.
pub fn enumerate_sposets(monoid: &Arc<Pomonoid>, m: usize, side: Side) -> Result<Vec<SPoset>> {
    check_cap(m, SPOSET_CAP)?;
    if m == 0 {
        return Err(Error::EmptyCarrier);
    }
    let perms = permutations(m);
    let orders = all_partial_orders(m);
    let identity: Vec<usize> = (0..m).collect();
    let canonical_actions: Vec<Vec<Vec<usize>>> = action_tables(monoid, m, side)
        .into_iter()
        .filter(|act| perms.iter().all(|p| relabel_action(act, p) >= *act))
        .collect();
    let found: Vec<Vec<(Vec<Vec<usize>>, Relation)>> = canonical_actions
        .par_iter()
        .map(|act| {
            let autos: Vec<&Vec<usize>> = perms.iter().filter(|p| relabel_action(act, p) == *act).collect();
            orders
                .iter()
                .filter(|leq| compatible_action_order(monoid, act, leq))
                .filter(|leq| {
                    let own = order_bits(leq, &identity);
                    autos.iter().all(|p| order_bits(leq, p) >= own)
                })
                .map(|leq| (act.clone(), leq.clone()))
                .collect()
        })
        .collect();
    let mut flat: Vec<(Vec<Vec<usize>>, Relation)> = found.into_iter().flatten().collect();
    flat.sort_by_cached_key(|(act, leq)| (act.clone(), order_bits(leq, &identity)));
    flat.into_iter()
        .map(|(act, leq)| SPoset::from_tables(monoid.clone(), side, act.concat(), leq))
        .collect()
}

/// Enumerated left S-posets of sizes `1..=max_size`, smallest first.
pub fn enumerate_left_family(monoid: &Arc<Pomonoid>, max_size: usize) -> Result<Vec<SPoset>> {
    let mut out = Vec::new();
    for m in 1..=max_size {
        out.extend(enumerate_sposets(monoid, m, Side::Left)?);
    }
    Ok(out)
}

/// Every class whose membership the audit and search can decide.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum ClassName {
    Fr,
    Pr,
    SF,
    P,
    E,
    EP,
    Pw,
    W,
    #[serde(rename = "U_literal")]
    ULiteral,
    #[serde(rename = "U_amended")]
    UAmended,
    PWP,
    PWPw,
    PWF,
    WF,
    PWPF,
    WPF,
    /// No flatness failure for doubled skeletons within the bound.
    #[serde(rename = "F_bounded")]
    FlatBounded,
    /// No po-flatness failure for single skeletons within the bound.
    #[serde(rename = "PF_bounded")]
    PoFlatBounded,
}

impl ClassName {
    pub const ALL: [ClassName; 18] = [
        ClassName::Fr,
        ClassName::Pr,
        ClassName::SF,
        ClassName::P,
        ClassName::E,
        ClassName::EP,
        ClassName::Pw,
        ClassName::W,
        ClassName::ULiteral,
        ClassName::UAmended,
        ClassName::PWP,
        ClassName::PWPw,
        ClassName::PWF,
        ClassName::WF,
        ClassName::PWPF,
        ClassName::WPF,
        ClassName::FlatBounded,
        ClassName::PoFlatBounded,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            ClassName::Fr => "Fr",
            ClassName::Pr => "Pr",
            ClassName::SF => "SF",
            ClassName::P => "P",
            ClassName::E => "E",
            ClassName::EP => "EP",
            ClassName::Pw => "Pw",
            ClassName::W => "W",
            ClassName::ULiteral => "U_literal",
            ClassName::UAmended => "U_amended",
            ClassName::PWP => "PWP",
            ClassName::PWPw => "PWPw",
            ClassName::PWF => "PWF",
            ClassName::WF => "WF",
            ClassName::PWPF => "PWPF",
            ClassName::WPF => "WPF",
            ClassName::FlatBounded => "F_bounded",
            ClassName::PoFlatBounded => "PF_bounded",
        }
    }

    fn condition(self) -> Option<ConditionName> {
        Some(match self {
            ClassName::SF => ConditionName::SF,
            ClassName::P => ConditionName::P,
            ClassName::E => ConditionName::E,
            ClassName::EP => ConditionName::EP,
            ClassName::Pw => ConditionName::Pw,
            ClassName::W => ConditionName::W,
            ClassName::ULiteral => ConditionName::ULiteral,
            ClassName::UAmended => ConditionName::UAmended,
            ClassName::PWP => ConditionName::PWP,
            ClassName::PWPw => ConditionName::PWPw,
            _ => return None,
        })
    }

    fn flat_variant(self) -> Option<FlatVariant> {
        Some(match self {
            ClassName::PWF => FlatVariant::PWF,
            ClassName::WF => FlatVariant::WF,
            ClassName::PWPF => FlatVariant::PWPF,
            ClassName::WPF => FlatVariant::WPF,
            _ => return None,
        })
    }
}

impl fmt::Display for ClassName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ClassName {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        ClassName::ALL
            .into_iter()
            .find(|c| c.as_str().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::UnknownClass(s.to_string()))
    }
}

/// Whether `b` lies in `class`. The bounded classes use skeletons of total
/// length at most `skeleton_bound`.
pub fn membership(b: &SPoset, class: ClassName, skeleton_bound: usize) -> Result<bool> {
    if let Some(c) = class.condition() {
        return Ok(check_condition(b, c)?.holds);
    }
    if let Some(v) = class.flat_variant() {
        return Ok(check_ideal_flatness(b, v)?.passes());
    }
    match class {
        ClassName::Fr => Ok(is_free(b)?.is_some()),
        ClassName::Pr => Ok(is_projective(b)?.is_some()),
        ClassName::FlatBounded => Ok(check_flat_bounded(b, false, skeleton_bound)?.passes()),
        ClassName::PoFlatBounded => Ok(check_flat_bounded(b, true, skeleton_bound)?.passes()),
        _ => unreachable!("every class is a condition, an ideal variant or handled here"),
    }
}

/// `premises` jointly imply `conclusion`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Arrow {
    pub premises: Vec<ClassName>,
    pub conclusion: ClassName,
}

impl Arrow {
    fn new(premises: &[ClassName], conclusion: ClassName) -> Self {
        Arrow { premises: premises.to_vec(), conclusion }
    }

    pub fn name(&self) -> String {
        let lhs: Vec<&str> = self.premises.iter().map(|c| c.as_str()).collect();
        format!("{} => {}", lhs.join(" & "), self.conclusion)
    }

    fn holds_on(&self, m: &BTreeMap<ClassName, bool>) -> bool {
        !self.premises.iter().all(|c| m[c]) || m[&self.conclusion]
    }

    fn strict_on(&self, m: &BTreeMap<ClassName, bool>) -> bool {
        m[&self.conclusion] && !self.premises.iter().all(|c| m[c])
    }
}

/// The implications checked by the audit. Arrows into the bounded classes
/// come only from classes known to imply flatness or po-flatness outright.
pub fn audit_arrows() -> Vec<Arrow> {
    use ClassName::*;
    let mut v = vec![
        Arrow::new(&[Fr], Pr),
        Arrow::new(&[Pr], SF),
        Arrow::new(&[SF], P),
        Arrow::new(&[SF], E),
        Arrow::new(&[P, E], SF),
        Arrow::new(&[P], PWP),
        Arrow::new(&[P], Pw),
        Arrow::new(&[Pw], PWPw),
        Arrow::new(&[PWP], PWPw),
        Arrow::new(&[P], EP),
        Arrow::new(&[E], EP),
        Arrow::new(&[Pw], WPF),
        Arrow::new(&[PWPw], PWPF),
        Arrow::new(&[WPF], PWPF),
        Arrow::new(&[WPF], WF),
        Arrow::new(&[PWPF], PWF),
        Arrow::new(&[WF], PWF),
        Arrow::new(&[WPF], W),
        Arrow::new(&[PWPF, W], WPF),
    ];
    for c in [Fr, Pr, SF, P, Pw] {
        v.push(Arrow::new(&[c], PoFlatBounded));
        v.push(Arrow::new(&[c], FlatBounded));
    }
    v
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AuditViolation {
    pub arrow: String,
    pub instance: RawSPoset,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AuditReport {
    pub monoid_size: usize,
    pub max_size: usize,
    pub skeleton_bound: usize,
    pub instances_checked: usize,
    pub violations: Vec<AuditViolation>,
    /// For each arrow, the first instance in the conclusion but not in the
    /// premises.
    pub strictness_witnesses: BTreeMap<String, RawSPoset>,
}

fn memberships(b: &SPoset, skeleton_bound: usize) -> Result<BTreeMap<ClassName, bool>> {
    ClassName::ALL.iter().map(|&c| Ok((c, membership(b, c, skeleton_bound)?))).collect()
}

/// Checks every arrow of [`audit_arrows`] on all left S-posets of size at
/// most `max_size`.
pub fn implication_audit(monoid: &Arc<Pomonoid>, max_size: usize, skeleton_bound: usize) -> Result<AuditReport> {
    let family = enumerate_left_family(monoid, max_size)?;
    let mut report = audit_family(&family, skeleton_bound)?;
    report.monoid_size = monoid.size();
    report.max_size = max_size;
    Ok(report)
}

/// Checks every arrow on the given left S-posets.
pub fn audit_family(family: &[SPoset], skeleton_bound: usize) -> Result<AuditReport> {
    let table: Vec<BTreeMap<ClassName, bool>> =
        family.par_iter().map(|b| memberships(b, skeleton_bound)).collect::<Result<_>>()?;
    let mut violations = Vec::new();
    let mut strictness_witnesses = BTreeMap::new();
    for arrow in audit_arrows() {
        for (b, m) in family.iter().zip(&table) {
            if !arrow.holds_on(m) {
                violations.push(AuditViolation { arrow: arrow.name(), instance: b.raw() });
            }
        }
        if let Some((b, _)) = family.iter().zip(&table).find(|(_, m)| arrow.strict_on(m)) {
            strictness_witnesses.insert(arrow.name(), b.raw());
        }
    }
    Ok(AuditReport {
        monoid_size: family.first().map_or(0, |b| b.monoid().size()),
        max_size: family.iter().map(SPoset::size).max().unwrap_or(0),
        skeleton_bound,
        instances_checked: family.len(),
        violations,
        strictness_witnesses,
    })
}

/// The first enumerated left S-poset of size at most `max_size` lying in
/// `weaker` but not in `stronger`.
pub fn counterexample_search(
    monoid: &Arc<Pomonoid>,
    max_size: usize,
    stronger: ClassName,
    weaker: ClassName,
    skeleton_bound: usize,
) -> Result<Option<SPoset>> {
    for m in 1..=max_size {
        let family = enumerate_sposets(monoid, m, Side::Left)?;
        let hit = family
            .par_iter()
            .enumerate()
            .map(|(i, b)| -> Result<Option<usize>> {
                let found = membership(b, weaker, skeleton_bound)? && !membership(b, stronger, skeleton_bound)?;
                Ok(found.then_some(i))
            })
            .find_map_first(|r| r.transpose());
        match hit {
            None => {}
            Some(Err(e)) => return Err(e),
            Some(Ok(i)) => return Ok(Some(family[i].clone())),
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::structures::isomorphic;

    fn arc(m: Pomonoid) -> Arc<Pomonoid> {
        Arc::new(m)
    }

    #[test]
    fn pomonoid_counts() {
        assert_eq!(enumerate_pomonoids(1).unwrap().len(), 1);
        let two = enumerate_pomonoids(2).unwrap();
        assert_eq!(two.len(), 4);
        let discrete = two.iter().filter(|m| m.order().strict_pairs().next().is_none()).count();
        assert_eq!(discrete, 2);
        assert!(matches!(enumerate_pomonoids(5), Err(Error::OverCap { requested: 5, cap: 4 })));
    }

    #[test]
    fn monoid_counts_of_order_three() {
        // seven monoids of order three up to isomorphism
        let three = enumerate_pomonoids(3).unwrap();
        let mut tables: Vec<&[usize]> = three.iter().map(|m| m.mul_table()).collect();
        tables.dedup();
        assert_eq!(tables.len(), 7);
    }

    #[test]
    fn sposet_counts() {
        let t1 = arc(Pomonoid::trivial());
        assert_eq!(enumerate_sposets(&t1, 2, Side::Left).unwrap().len(), 2);
        assert_eq!(enumerate_sposets(&t1, 3, Side::Left).unwrap().len(), 5);
        assert_eq!(enumerate_sposets(&t1, 4, Side::Left).unwrap().len(), 16);
        for m in enumerate_pomonoids(2).unwrap() {
            assert_eq!(enumerate_sposets(&arc(m), 1, Side::Right).unwrap().len(), 1);
        }
        assert!(enumerate_sposets(&t1, 5, Side::Left).is_err());
    }

    #[test]
    fn sposets_are_pairwise_non_isomorphic() {
        let u2 = arc(Pomonoid::u2(Some(true)));
        for side in [Side::Left, Side::Right] {
            for m in 1..=3 {
                let all = enumerate_sposets(&u2, m, side).unwrap();
                for (i, a) in all.iter().enumerate() {
                    assert!(a.validate().ok);
                    for b in &all[i + 1..] {
                        assert!(isomorphic(a, b).is_none());
                    }
                }
            }
        }
    }

    #[test]
    fn permutations_are_lexicographic() {
        assert_eq!(permutations(3), vec![vec![0, 1, 2], vec![0, 2, 1], vec![1, 0, 2], vec![1, 2, 0], vec![2, 0, 1], vec![2, 1, 0]]);
    }

    #[test]
    fn chain_separates_p_from_pw() {
        let t1 = arc(Pomonoid::trivial());
        let b = counterexample_search(&t1, 3, ClassName::P, ClassName::Pw, 4).unwrap().unwrap();
        assert_eq!(b.size(), 2);
        assert!(b.leq(0, 1) || b.leq(1, 0));
        assert!(counterexample_search(&t1, 3, ClassName::P, ClassName::P, 4).unwrap().is_none());
    }

    #[test]
    fn se_separates_free_from_projective() {
        let u2 = arc(Pomonoid::u2(Some(true)));
        let b = counterexample_search(&u2, 2, ClassName::Fr, ClassName::Pr, 4).unwrap().unwrap();
        assert_eq!(b.size(), 1);
    }

    #[test]
    fn class_names_parse() {
        for c in ClassName::ALL {
            assert_eq!(c.as_str().parse::<ClassName>().unwrap(), c);
        }
        assert!("Flat".parse::<ClassName>().is_err());
    }

    #[test]
    fn trivial_audit_is_clean() {
        let t1 = arc(Pomonoid::trivial());
        let r = implication_audit(&t1, 3, 4).unwrap();
        assert!(r.violations.is_empty(), "{:?}", r.violations);
        assert_eq!(r.instances_checked, 1 + 2 + 5);
        let w = &r.strictness_witnesses["P => Pw"];
        assert_eq!(w.leq.len(), 2);
    }
}
