//! Interpolation conditions on left S-posets.
//!
//! Each condition has the shape "for every premise tuple satisfying some
//! inequality there is a witness tuple satisfying others". Checking is
//! exhaustive; witnesses are the lexicographically least `(b'', u, u')`
//! (or `(b'', p, p')`).

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::structures::{SPoset, Side};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum ConditionName {
    P,
    E,
    SF,
    EP,
    Pw,
    W,
    #[serde(rename = "U_literal")]
    ULiteral,
    #[serde(rename = "U_amended")]
    UAmended,
    PWP,
    PWPw,
}

impl ConditionName {
    pub const ALL: [ConditionName; 10] = [
        ConditionName::P,
        ConditionName::E,
        ConditionName::SF,
        ConditionName::EP,
        ConditionName::Pw,
        ConditionName::W,
        ConditionName::ULiteral,
        ConditionName::UAmended,
        ConditionName::PWP,
        ConditionName::PWPw,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            ConditionName::P => "P",
            ConditionName::E => "E",
            ConditionName::SF => "SF",
            ConditionName::EP => "EP",
            ConditionName::Pw => "Pw",
            ConditionName::W => "W",
            ConditionName::ULiteral => "U_literal",
            ConditionName::UAmended => "U_amended",
            ConditionName::PWP => "PWP",
            ConditionName::PWPw => "PWPw",
        }
    }
}

impl fmt::Display for ConditionName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ConditionName {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        ConditionName::ALL
            .into_iter()
            .find(|c| c.as_str().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::UnknownClass(s.to_string()))
    }
}

/// A premise tuple together with the witness found for it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessEntry {
    pub condition: ConditionName,
    pub premise: Vec<usize>,
    pub witness: Vec<usize>,
}

/// A premise tuple with no witness.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Counterexample {
    pub condition: ConditionName,
    pub premise: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verdict {
    pub condition: ConditionName,
    pub holds: bool,
    pub counterexample: Option<Counterexample>,
    pub witness_table: Vec<WitnessEntry>,
}

/// Premise shapes; the premise tuple layout is given per variant.
fn premises(b: &SPoset, c: ConditionName) -> Vec<Vec<usize>> {
    let n = b.size();
    let monoid = b.monoid();
    let mut out = Vec::new();
    match c {
        // (b, s, s') with s b <= s' b
        ConditionName::E | ConditionName::EP => {
            for x in 0..n {
                for s in monoid.elements() {
                    for t in monoid.elements() {
                        if b.leq(b.act(s, x), b.act(t, x)) {
                            out.push(vec![x, s, t]);
                        }
                    }
                }
            }
        }
        // (b, b', s) with s b <= s b'
        ConditionName::PWP | ConditionName::PWPw => {
            for x in 0..n {
                for y in 0..n {
                    for s in monoid.elements() {
                        if b.leq(b.act(s, x), b.act(s, y)) {
                            out.push(vec![x, y, s]);
                        }
                    }
                }
            }
        }
        // (b, b', s, s') with the premise of the variant
        _ => {
            for x in 0..n {
                for y in 0..n {
                    for s in monoid.elements() {
                        for t in monoid.elements() {
                            let premise = match c {
                                ConditionName::ULiteral => b.act(s, x) == b.act(s, y),
                                ConditionName::UAmended => b.act(s, x) == b.act(t, y),
                                _ => b.leq(b.act(s, x), b.act(t, y)),
                            };
                            if premise {
                                out.push(vec![x, y, s, t]);
                            }
                        }
                    }
                }
            }
        }
    }
    out
}

/// Whether `witness` discharges `premise` for condition `c`.
pub fn witness_holds(b: &SPoset, c: ConditionName, premise: &[usize], witness: &[usize]) -> bool {
    let m = b.monoid();
    let act = |s, x| b.act(s, x);
    match c {
        ConditionName::P => {
            let [x, y, s, t] = premise[..] else { return false };
            let [z, u, v] = witness[..] else { return false };
            x == act(u, z) && y == act(v, z) && m.leq(m.mul(s, u), m.mul(t, v))
        }
        ConditionName::E => {
            let [x, s, t] = premise[..] else { return false };
            let [z, u] = witness[..] else { return false };
            x == act(u, z) && m.leq(m.mul(s, u), m.mul(t, u))
        }
        ConditionName::EP => {
            let [x, s, t] = premise[..] else { return false };
            let [z, u, v] = witness[..] else { return false };
            x == act(u, z) && x == act(v, z) && m.leq(m.mul(s, u), m.mul(t, v))
        }
        ConditionName::Pw => {
            let [x, y, s, t] = premise[..] else { return false };
            let [z, u, v] = witness[..] else { return false };
            m.leq(m.mul(s, u), m.mul(t, v)) && b.leq(x, act(u, z)) && b.leq(act(v, z), y)
        }
        ConditionName::W => {
            let [x, y, s, t] = premise[..] else { return false };
            let [z, p, q] = witness[..] else { return false };
            in_right_ideal(b, s, p)
                && in_right_ideal(b, t, q)
                && m.leq(p, q)
                && b.leq(act(s, x), act(p, z))
                && b.leq(act(q, z), act(t, y))
        }
        ConditionName::ULiteral | ConditionName::UAmended => {
            let [x, y, s, t] = premise[..] else { return false };
            let [z, p, q] = witness[..] else { return false };
            let sb = act(s, x);
            in_right_ideal(b, s, p)
                && in_right_ideal(b, t, q)
                && m.leq(p, q)
                && sb == act(p, z)
                && sb == act(q, z)
                && sb == act(t, y)
        }
        ConditionName::PWP => {
            let [x, y, s] = premise[..] else { return false };
            let [z, u, v] = witness[..] else { return false };
            x == act(u, z) && y == act(v, z) && m.leq(m.mul(s, u), m.mul(s, v))
        }
        ConditionName::PWPw => {
            let [x, y, s] = premise[..] else { return false };
            let [z, u, v] = witness[..] else { return false };
            b.leq(x, act(u, z)) && b.leq(act(v, z), y) && m.leq(m.mul(s, u), m.mul(s, v))
        }
        ConditionName::SF => false,
    }
}

fn in_right_ideal(b: &SPoset, s: usize, p: usize) -> bool {
    let m = b.monoid();
    m.elements().any(|h| m.mul(s, h) == p)
}

fn find_witness(b: &SPoset, c: ConditionName, premise: &[usize]) -> Option<Vec<usize>> {
    let monoid = b.monoid();
    let k = monoid.size();
    let width = if c == ConditionName::E { 2 } else { 3 };
    for z in b.elements() {
        for u in 0..k {
            if width == 2 {
                let w = vec![z, u];
                if witness_holds(b, c, premise, &w) {
                    return Some(w);
                }
                continue;
            }
            for v in 0..k {
                let w = vec![z, u, v];
                if witness_holds(b, c, premise, &w) {
                    return Some(w);
                }
            }
        }
    }
    None
}

fn check_simple(b: &SPoset, c: ConditionName) -> Verdict {
    let mut table = Vec::new();
    for premise in premises(b, c) {
        match find_witness(b, c, &premise) {
            Some(witness) => table.push(WitnessEntry { condition: c, premise, witness }),
            None => {
                return Verdict {
                    condition: c,
                    holds: false,
                    counterexample: Some(Counterexample { condition: c, premise }),
                    witness_table: table,
                }
            }
        }
    }
    Verdict { condition: c, holds: true, counterexample: None, witness_table: table }
}

/// Decides condition `c` for a left S-poset.
pub fn check_condition(b: &SPoset, c: ConditionName) -> Result<Verdict> {
    if b.side() != Side::Left {
        return Err(Error::WrongSide { expected: Side::Left, found: b.side() });
    }
    if c != ConditionName::SF {
        return Ok(check_simple(b, c));
    }
    let p = check_simple(b, ConditionName::P);
    let e = check_simple(b, ConditionName::E);
    let mut witness_table = p.witness_table;
    witness_table.extend(e.witness_table);
    Ok(Verdict {
        condition: c,
        holds: p.holds && e.holds,
        counterexample: p.counterexample.or(e.counterexample),
        witness_table,
    })
}

/// Truth value of every condition.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Signature(pub BTreeMap<ConditionName, bool>);

impl Signature {
    pub fn get(&self, c: ConditionName) -> bool {
        self.0[&c]
    }
}

pub fn condition_implications(b: &SPoset) -> Result<Signature> {
    let mut map = BTreeMap::new();
    for c in ConditionName::ALL {
        map.insert(c, check_condition(b, c)?.holds);
    }
    Ok(Signature(map))
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::relation::Relation;
    use crate::structures::Pomonoid;

    fn chain2() -> SPoset {
        SPoset::with_trivial_action(Arc::new(Pomonoid::trivial()), Side::Left, Relation::from_pairs(2, [(0, 0), (0, 1), (1, 1)])).unwrap()
    }

    #[test]
    fn trivial_monoid_gives_ep_everywhere() {
        let anti = SPoset::with_trivial_action(Arc::new(Pomonoid::trivial()), Side::Left, Relation::identity(3)).unwrap();
        for b in [chain2(), anti] {
            assert!(check_condition(&b, ConditionName::EP).unwrap().holds);
        }
    }

    #[test]
    fn chain_fails_p_but_satisfies_pw() {
        let b = chain2();
        let p = check_condition(&b, ConditionName::P).unwrap();
        assert!(!p.holds);
        assert_eq!(p.counterexample.unwrap().premise, vec![0, 1, 0, 0]);
        let pw = check_condition(&b, ConditionName::Pw).unwrap();
        assert!(pw.holds);
        assert!(pw.witness_table.iter().any(|w| w.premise == vec![0, 1, 0, 0] && w.witness == vec![0, 0, 0]));
        let sig = condition_implications(&b).unwrap();
        assert!(!sig.get(ConditionName::P) && sig.get(ConditionName::Pw) && sig.get(ConditionName::E));
    }

    #[test]
    fn regular_act_satisfies_the_main_conditions() {
        for m in [Pomonoid::u2(Some(true)), Pomonoid::u2(None), Pomonoid::cyclic_group(2), Pomonoid::trivial()] {
            let b = SPoset::regular(Arc::new(m), Side::Left);
            let sig = condition_implications(&b).unwrap();
            for c in [ConditionName::P, ConditionName::E, ConditionName::SF, ConditionName::EP, ConditionName::Pw, ConditionName::W, ConditionName::PWP, ConditionName::PWPw] {
                assert!(sig.get(c), "{c}");
            }
        }
    }

    #[test]
    fn witness_tables_recheck() {
        let m = Arc::new(Pomonoid::u2(Some(true)));
        let b = SPoset::disjoint_union(&[SPoset::regular(m.clone(), Side::Left), SPoset::one_point(m, Side::Left)]).unwrap();
        for c in ConditionName::ALL {
            let v = check_condition(&b, c).unwrap();
            assert_eq!(v.holds, v.counterexample.is_none());
            for w in &v.witness_table {
                assert!(witness_holds(&b, w.condition, &w.premise, &w.witness));
            }
        }
    }

    #[test]
    fn names_parse() {
        assert_eq!("U_amended".parse::<ConditionName>().unwrap(), ConditionName::UAmended);
        assert_eq!("pwpw".parse::<ConditionName>().unwrap(), ConditionName::PWPw);
        assert!("WP".parse::<ConditionName>().is_err());
        assert!(check_condition(&SPoset::regular(Arc::new(Pomonoid::trivial()), Side::Right), ConditionName::P).is_err());
    }
}
