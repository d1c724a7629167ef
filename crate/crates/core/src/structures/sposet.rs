use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::{default_carrier_names, Map, Pomonoid, Side, ValidationReport, Violation};
use crate::error::{Error, Result};
use crate::relation::Relation;

/// Unvalidated S-poset data. `act[s][a]` is `s·a` for a left S-poset and
/// `a·s` for a right one: rows are indexed by monoid element, columns by
/// carrier element, for both sides.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RawSPoset {
    pub side: Side,
    pub act: Vec<Vec<usize>>,
    pub leq: Vec<Vec<bool>>,
    #[serde(default)]
    pub names: Option<Vec<String>>,
}

/// A finite left or right S-poset.
#[derive(Debug, Clone)]
pub struct SPoset {
    monoid: Arc<Pomonoid>,
    side: Side,
    names: Vec<String>,
    act: Vec<usize>,
    leq: Relation,
}

impl PartialEq for SPoset {
    fn eq(&self, other: &Self) -> bool {
        self.side == other.side && self.act == other.act && self.leq == other.leq && *self.monoid == *other.monoid
    }
}

impl Eq for SPoset {}

fn check_shape(monoid: &Pomonoid, raw: &RawSPoset) -> Result<usize> {
    if raw.act.len() != monoid.size() {
        return Err(Error::Malformed(format!(
            "action table has {} rows, pomonoid has {} elements",
            raw.act.len(),
            monoid.size()
        )));
    }
    let n = raw.leq.len();
    if n == 0 {
        return Err(Error::EmptyCarrier);
    }
    if raw.leq.iter().any(|r| r.len() != n) {
        return Err(Error::Malformed(format!("order matrix is not {n}x{n}")));
    }
    if raw.act.iter().any(|r| r.len() != n) {
        return Err(Error::Malformed(format!("action rows must have {n} entries")));
    }
    if let Some(&bad) = raw.act.iter().flatten().find(|&&v| v >= n) {
        return Err(Error::OutOfRange { what: "action image", index: bad, size: n });
    }
    if let Some(names) = &raw.names {
        if names.len() != n {
            return Err(Error::Malformed(format!("{} names for {n} elements", names.len())));
        }
    }
    Ok(n)
}

fn composition_failure(monoid: &Pomonoid, side: Side, act: &[Vec<usize>], n: usize) -> Option<(usize, usize, usize)> {
    for s in monoid.elements() {
        for t in monoid.elements() {
            let st = monoid.mul(s, t);
            for a in 0..n {
                // left: s(ta) = (st)a; right: (as)t = a(st)
                let lhs = match side {
                    Side::Left => act[s][act[t][a]],
                    Side::Right => act[t][act[s][a]],
                };
                if lhs != act[st][a] {
                    return Some((s, t, a));
                }
            }
        }
    }
    None
}

/// Checks every instance of the S-poset axioms: the identity law, the
/// composition law `phi`, monotonicity `theta` of each translation and the
/// order compatibility `psi` of the action in the monoid argument. An action
/// table that composes only on the opposite side is reported as a
/// [`Error::SideMismatch`].
pub fn validate_sposet(monoid: &Pomonoid, raw: &RawSPoset) -> Result<ValidationReport> {
    let n = check_shape(monoid, raw)?;
    let leq = Relation::from_matrix(&raw.leq).expect("shape checked");
    let act = &raw.act;
    let one = monoid.one();

    let phi = composition_failure(monoid, raw.side, act, n);
    if phi.is_some() && composition_failure(monoid, raw.side.opposite(), act, n).is_none() {
        return Err(Error::SideMismatch { declared: raw.side, actual: raw.side.opposite() });
    }

    let mut v: Vec<Violation> = Vec::new();
    ValidationReport::push(&mut v, "reflexivity", leq.first_non_reflexive().map(|a| vec![a]));
    ValidationReport::push(&mut v, "antisymmetry", leq.first_antisymmetry_violation().map(|(a, b)| vec![a, b]));
    ValidationReport::push(
        &mut v,
        "transitivity",
        leq.first_transitivity_violation().map(|(a, b, c)| vec![a, b, c]),
    );
    ValidationReport::push(&mut v, "identity", (0..n).find(|&a| act[one][a] != a).map(|a| vec![a]));
    ValidationReport::push(&mut v, "phi", phi.map(|(s, t, a)| vec![s, t, a]));
    let theta = monoid.elements().find_map(|s| {
        leq.pairs().find(|&(a, b)| !leq.get(act[s][a], act[s][b])).map(|(a, b)| vec![s, a, b])
    });
    ValidationReport::push(&mut v, "theta", theta);
    let psi = monoid.order().pairs().find_map(|(u, w)| {
        (0..n).find(|&a| !leq.get(act[u][a], act[w][a])).map(|a| vec![u, w, a])
    });
    ValidationReport::push(&mut v, "psi", psi);
    Ok(ValidationReport::from_violations(v))
}

impl SPoset {
    pub fn new(monoid: Arc<Pomonoid>, raw: RawSPoset) -> Result<Self> {
        let report = validate_sposet(&monoid, &raw)?;
        if !report.ok {
            return Err(Error::Invalid(report));
        }
        let n = raw.leq.len();
        Ok(SPoset {
            side: raw.side,
            names: raw.names.unwrap_or_else(|| default_carrier_names(n)),
            act: raw.act.into_iter().flatten().collect(),
            leq: Relation::from_matrix(&raw.leq).expect("validated"),
            monoid,
        })
    }

    /// Builds without validation. Callers guarantee the axioms or validate
    /// afterwards (used for quotients and tensor constructions whose
    /// correctness is itself under test).
    pub(crate) fn from_parts(monoid: Arc<Pomonoid>, side: Side, act: Vec<usize>, leq: Relation, names: Vec<String>) -> Self {
        debug_assert_eq!(act.len(), monoid.size() * leq.size());
        SPoset { monoid, side, names, act, leq }
    }

    /// Builds and validates from a flat action table.
    pub fn from_tables(monoid: Arc<Pomonoid>, side: Side, act: Vec<usize>, leq: Relation) -> Result<Self> {
        let n = leq.size();
        let raw = RawSPoset {
            side,
            act: act.chunks(n.max(1)).map(|c| c.to_vec()).collect(),
            leq: leq.to_matrix(),
            names: None,
        };
        SPoset::new(monoid, raw)
    }

    /// `S` acting on itself by multiplication.
    pub fn regular(monoid: Arc<Pomonoid>, side: Side) -> Self {
        let n = monoid.size();
        let act = (0..n)
            .flat_map(|s| {
                let m = monoid.clone();
                (0..n).map(move |a| match side {
                    Side::Left => m.mul(s, a),
                    Side::Right => m.mul(a, s),
                })
            })
            .collect();
        let leq = monoid.order().clone();
        let names = monoid.names().to_vec();
        SPoset::from_parts(monoid, side, act, leq, names)
    }

    /// The one-element S-poset.
    pub fn one_point(monoid: Arc<Pomonoid>, side: Side) -> Self {
        let act = vec![0; monoid.size()];
        SPoset::from_parts(monoid, side, act, Relation::identity(1), vec!["θ".into()])
    }

    /// A poset with every monoid element acting as the identity.
    pub fn with_trivial_action(monoid: Arc<Pomonoid>, side: Side, leq: Relation) -> Result<Self> {
        let n = leq.size();
        let act = (0..monoid.size()).flat_map(|_| 0..n).collect();
        SPoset::from_tables(monoid, side, act, leq)
    }

    /// The left ideal `Se` (or right ideal `eS`) of the regular S-poset.
    pub fn principal(monoid: Arc<Pomonoid>, side: Side, e: usize) -> Self {
        let subset = match side {
            Side::Left => monoid.left_principal(e),
            Side::Right => monoid.right_principal(e),
        };
        SPoset::regular(monoid, side).restrict(&subset).expect("principal ideals are closed").0
    }

    /// Disjoint union with no order between the summands.
    pub fn disjoint_union(parts: &[SPoset]) -> Result<Self> {
        let first = parts.first().ok_or(Error::EmptyCarrier)?;
        let monoid = first.monoid.clone();
        let side = first.side;
        let total: usize = parts.iter().map(|p| p.size()).sum();
        let mut act = vec![0; monoid.size() * total];
        let mut leq = Relation::empty(total);
        let mut names = Vec::with_capacity(total);
        let mut offset = 0;
        for (k, p) in parts.iter().enumerate() {
            if *p.monoid != *monoid {
                return Err(Error::MonoidMismatch);
            }
            if p.side != side {
                return Err(Error::WrongSide { expected: side, found: p.side });
            }
            for s in monoid.elements() {
                for a in 0..p.size() {
                    act[s * total + offset + a] = offset + p.act(s, a);
                }
            }
            for (a, b) in p.leq.pairs() {
                leq.set(offset + a, offset + b);
            }
            names.extend(p.names.iter().map(|n| format!("{n}.{k}")));
            offset += p.size();
        }
        Ok(SPoset::from_parts(monoid, side, act, leq, names))
    }

    /// Sub-S-poset on an action-closed subset, with its inclusion map. The
    /// subset is returned sorted; element `i` of the result is `subset[i]`.
    pub fn restrict(&self, subset: &[usize]) -> Result<(SPoset, Map)> {
        let mut subset = subset.to_vec();
        subset.sort_unstable();
        subset.dedup();
        if subset.is_empty() {
            return Err(Error::EmptyCarrier);
        }
        let mut pos = vec![usize::MAX; self.size()];
        for (i, &a) in subset.iter().enumerate() {
            if a >= self.size() {
                return Err(Error::OutOfRange { what: "carrier", index: a, size: self.size() });
            }
            pos[a] = i;
        }
        let k = subset.len();
        let mut act = Vec::with_capacity(self.monoid.size() * k);
        for s in self.monoid.elements() {
            for &a in &subset {
                let img = pos[self.act(s, a)];
                if img == usize::MAX {
                    return Err(Error::Precondition(format!("subset not closed under the action of {}", self.monoid.name(s))));
                }
                act.push(img);
            }
        }
        let mut leq = Relation::empty(k);
        for (i, &a) in subset.iter().enumerate() {
            for (j, &b) in subset.iter().enumerate() {
                if self.leq(a, b) {
                    leq.set(i, j);
                }
            }
        }
        let names = subset.iter().map(|&a| self.names[a].clone()).collect();
        let sub = SPoset::from_parts(self.monoid.clone(), self.side, act, leq, names);
        Ok((sub, Map::new(subset)))
    }

    /// The action-closed subset generated by `gens`, sorted.
    pub fn generated_by(&self, gens: &[usize]) -> Vec<usize> {
        let mut v: Vec<usize> = gens.iter().flat_map(|&g| self.monoid.elements().map(move |s| (s, g))).map(|(s, g)| self.act(s, g)).collect();
        v.sort_unstable();
        v.dedup();
        v
    }

    pub fn raw(&self) -> RawSPoset {
        let n = self.size();
        RawSPoset {
            side: self.side,
            act: self.act.chunks(n).map(|c| c.to_vec()).collect(),
            leq: self.leq.to_matrix(),
            names: Some(self.names.clone()),
        }
    }

    /// Re-runs the axiom check on the stored tables.
    pub fn validate(&self) -> ValidationReport {
        validate_sposet(&self.monoid, &self.raw()).unwrap_or_else(|e| ValidationReport {
            ok: false,
            violations: vec![Violation { axiom: format!("structure: {e}"), witness: vec![] }],
        })
    }

    #[inline]
    pub fn size(&self) -> usize {
        self.leq.size()
    }

    #[inline]
    pub fn side(&self) -> Side {
        self.side
    }

    pub fn monoid(&self) -> &Arc<Pomonoid> {
        &self.monoid
    }

    /// `s·a` (left) or `a·s` (right).
    #[inline]
    pub fn act(&self, s: usize, a: usize) -> usize {
        self.act[s * self.size() + a]
    }

    #[inline]
    pub fn leq(&self, a: usize, b: usize) -> bool {
        self.leq.get(a, b)
    }

    pub fn order(&self) -> &Relation {
        &self.leq
    }

    pub fn act_table(&self) -> &[usize] {
        &self.act
    }

    pub fn elements(&self) -> std::ops::Range<usize> {
        0..self.size()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, a: usize) -> &str {
        &self.names[a]
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn same_monoid(&self, other: &SPoset) -> bool {
        Arc::ptr_eq(&self.monoid, &other.monoid) || *self.monoid == *other.monoid
    }

    pub fn with_names(mut self, names: Vec<String>) -> Result<Self> {
        if names.len() != self.size() {
            return Err(Error::Malformed(format!("{} names for {} elements", names.len(), self.size())));
        }
        self.names = names;
        Ok(self)
    }

    /// Same tables with additional order pairs, closed reflexively and
    /// transitively, then validated.
    pub fn with_order_pairs(&self, pairs: &[(usize, usize)]) -> Result<Self> {
        let mut leq = self.leq.clone();
        for &(a, b) in pairs {
            leq.set(a, b);
        }
        let leq = leq.reflexive_transitive_closure();
        let raw = RawSPoset { side: self.side, act: self.raw().act, leq: leq.to_matrix(), names: Some(self.names.clone()) };
        SPoset::new(self.monoid.clone(), raw)
    }
}
