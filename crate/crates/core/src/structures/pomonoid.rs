use std::hash::{Hash, Hasher};

use serde::{Deserialize, Serialize};

use super::{default_monoid_names, ValidationReport, Violation};
use crate::error::{Error, Result};
use crate::relation::Relation;

/// Unvalidated pomonoid data: `mul[a][b]` is the product `ab`, `leq[a][b]`
/// states `a <= b`. The order must already be a partial order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RawPomonoid {
    pub mul: Vec<Vec<usize>>,
    pub one: usize,
    pub leq: Vec<Vec<bool>>,
    #[serde(default)]
    pub names: Option<Vec<String>>,
}

/// A finite monoid with a partial order compatible with multiplication on
/// both sides.
#[derive(Debug, Clone)]
pub struct Pomonoid {
    names: Vec<String>,
    mul: Vec<usize>,
    one: usize,
    leq: Relation,
    idempotents: Vec<usize>,
}

// Names are presentation only.
impl PartialEq for Pomonoid {
    fn eq(&self, other: &Self) -> bool {
        self.one == other.one && self.mul == other.mul && self.leq == other.leq
    }
}

impl Eq for Pomonoid {}

impl Hash for Pomonoid {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.one.hash(state);
        self.mul.hash(state);
        self.leq.hash(state);
    }
}

fn check_shape(raw: &RawPomonoid) -> Result<usize> {
    let n = raw.mul.len();
    if n == 0 {
        return Err(Error::EmptyCarrier);
    }
    if raw.mul.iter().any(|row| row.len() != n) {
        return Err(Error::Malformed(format!("multiplication table is not {n}x{n}")));
    }
    if raw.leq.len() != n || raw.leq.iter().any(|row| row.len() != n) {
        return Err(Error::Malformed(format!("order matrix is not {n}x{n}")));
    }
    if raw.one >= n {
        return Err(Error::OutOfRange { what: "identity", index: raw.one, size: n });
    }
    if let Some(&bad) = raw.mul.iter().flatten().find(|&&v| v >= n) {
        return Err(Error::OutOfRange { what: "product", index: bad, size: n });
    }
    if let Some(names) = &raw.names {
        if names.len() != n {
            return Err(Error::Malformed(format!("{} names for {n} elements", names.len())));
        }
    }
    Ok(n)
}

/// Checks every axiom instance of a pomonoid exhaustively. A structural
/// problem (shape, indices) is an `Err`; axiom failures go in the report,
/// one minimal witness per violated axiom.
pub fn validate_pomonoid(raw: &RawPomonoid) -> Result<ValidationReport> {
    let n = check_shape(raw)?;
    let leq = Relation::from_matrix(&raw.leq).expect("shape checked");
    let m = |a: usize, b: usize| raw.mul[a][b];
    let triples = || (0..n).flat_map(move |a| (0..n).flat_map(move |b| (0..n).map(move |c| (a, b, c))));

    let mut v: Vec<Violation> = Vec::new();
    ValidationReport::push(&mut v, "reflexivity", leq.first_non_reflexive().map(|a| vec![a]));
    ValidationReport::push(&mut v, "antisymmetry", leq.first_antisymmetry_violation().map(|(a, b)| vec![a, b]));
    ValidationReport::push(
        &mut v,
        "transitivity",
        leq.first_transitivity_violation().map(|(a, b, c)| vec![a, b, c]),
    );
    ValidationReport::push(&mut v, "left_identity", (0..n).find(|&a| m(raw.one, a) != a).map(|a| vec![a]));
    ValidationReport::push(&mut v, "right_identity", (0..n).find(|&a| m(a, raw.one) != a).map(|a| vec![a]));
    ValidationReport::push(
        &mut v,
        "associativity",
        triples().find(|&(a, b, c)| m(m(a, b), c) != m(a, m(b, c))).map(|(a, b, c)| vec![a, b, c]),
    );
    // witness (a, b, c): a <= b but not ca <= cb (resp. ac <= bc)
    ValidationReport::push(
        &mut v,
        "left_compatibility",
        triples().find(|&(a, b, c)| leq.get(a, b) && !leq.get(m(c, a), m(c, b))).map(|(a, b, c)| vec![a, b, c]),
    );
    ValidationReport::push(
        &mut v,
        "right_compatibility",
        triples().find(|&(a, b, c)| leq.get(a, b) && !leq.get(m(a, c), m(b, c))).map(|(a, b, c)| vec![a, b, c]),
    );
    Ok(ValidationReport::from_violations(v))
}

impl Pomonoid {
    pub fn new(raw: RawPomonoid) -> Result<Self> {
        let report = validate_pomonoid(&raw)?;
        if !report.ok {
            return Err(Error::Invalid(report));
        }
        Ok(Self::from_valid(raw))
    }

    fn from_valid(raw: RawPomonoid) -> Self {
        let n = raw.mul.len();
        let leq = Relation::from_matrix(&raw.leq).expect("validated");
        let mul: Vec<usize> = raw.mul.into_iter().flatten().collect();
        let idempotents = (0..n).filter(|&a| mul[a * n + a] == a).collect();
        let names = raw.names.unwrap_or_else(|| default_monoid_names(n, raw.one));
        Pomonoid { names, mul, one: raw.one, leq, idempotents }
    }

    /// Builds from a flat table and order relation; used by enumeration, where
    /// candidates are validated separately.
    pub(crate) fn from_tables(mul: Vec<usize>, one: usize, leq: Relation) -> Result<Self> {
        let n = leq.size();
        Self::new(RawPomonoid {
            mul: mul.chunks(n).map(|c| c.to_vec()).collect(),
            one,
            leq: leq.to_matrix(),
            names: None,
        })
    }

    /// The one-element pomonoid.
    pub fn trivial() -> Self {
        Self::new(RawPomonoid { mul: vec![vec![0]], one: 0, leq: vec![vec![true]], names: None })
            .expect("trivial pomonoid is valid")
    }

    /// `{1, e}` with `e` idempotent and the given order between `e` and `1`:
    /// `Some(true)` for `e < 1`, `Some(false)` for `1 < e`, `None` for discrete.
    pub fn u2(e_below_one: Option<bool>) -> Self {
        let mut leq = vec![vec![true, false], vec![false, true]];
        match e_below_one {
            Some(true) => leq[1][0] = true,
            Some(false) => leq[0][1] = true,
            None => {}
        }
        Self::new(RawPomonoid {
            mul: vec![vec![0, 1], vec![1, 1]],
            one: 0,
            leq,
            names: Some(vec!["1".into(), "e".into()]),
        })
        .expect("U2 orders are compatible")
    }

    /// The cyclic group of order `n`, discretely ordered.
    pub fn cyclic_group(n: usize) -> Self {
        let mul = (0..n).map(|a| (0..n).map(|b| (a + b) % n).collect()).collect();
        let leq = (0..n).map(|a| (0..n).map(|b| a == b).collect()).collect();
        let names = (0..n).map(|i| if i == 0 { "1".to_string() } else { format!("g{i}") }).collect();
        Self::new(RawPomonoid { mul, one: 0, leq, names: Some(names) }).expect("cyclic group is valid")
    }

    #[inline]
    pub fn size(&self) -> usize {
        self.names.len()
    }

    #[inline]
    pub fn one(&self) -> usize {
        self.one
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.mul[a * self.size() + b]
    }

    #[inline]
    pub fn leq(&self, a: usize, b: usize) -> bool {
        self.leq.get(a, b)
    }

    pub fn order(&self) -> &Relation {
        &self.leq
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

    pub fn elements(&self) -> std::ops::Range<usize> {
        0..self.size()
    }

    /// E(S), ascending.
    pub fn idempotents(&self) -> &[usize] {
        &self.idempotents
    }

    pub fn mul_table(&self) -> &[usize] {
        &self.mul
    }

    /// `aS`, sorted.
    pub fn right_principal(&self, a: usize) -> Vec<usize> {
        let mut v: Vec<usize> = self.elements().map(|s| self.mul(a, s)).collect();
        v.sort_unstable();
        v.dedup();
        v
    }

    /// `Sa`, sorted.
    pub fn left_principal(&self, a: usize) -> Vec<usize> {
        let mut v: Vec<usize> = self.elements().map(|s| self.mul(s, a)).collect();
        v.sort_unstable();
        v.dedup();
        v
    }

    /// Green's L-relation: `Sa = Sb`.
    pub fn l_related(&self, a: usize, b: usize) -> bool {
        self.left_principal(a) == self.left_principal(b)
    }

    pub fn to_raw(&self) -> RawPomonoid {
        let n = self.size();
        RawPomonoid {
            mul: self.mul.chunks(n).map(|c| c.to_vec()).collect(),
            one: self.one,
            leq: self.leq.to_matrix(),
            names: Some(self.names.clone()),
        }
    }

    pub fn with_names(mut self, names: Vec<String>) -> Result<Self> {
        if names.len() != self.size() {
            return Err(Error::Malformed(format!("{} names for {} elements", names.len(), self.size())));
        }
        self.names = names;
        Ok(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn raw(mul: Vec<Vec<usize>>, leq_pairs: &[(usize, usize)]) -> RawPomonoid {
        let n = mul.len();
        let mut leq = vec![vec![false; n]; n];
        for i in 0..n {
            leq[i][i] = true;
        }
        for &(a, b) in leq_pairs {
            leq[a][b] = true;
        }
        RawPomonoid { mul, one: 0, leq, names: None }
    }

    #[test]
    fn trivial_monoid_is_valid() {
        let r = validate_pomonoid(&raw(vec![vec![0]], &[])).unwrap();
        assert!(r.ok);
    }

    #[test]
    fn u2_with_e_below_one_is_valid() {
        // hand check: e<=1 gives ee=e<=e1=e and ee<=1e on both sides
        let r = validate_pomonoid(&raw(vec![vec![0, 1], vec![1, 1]], &[(1, 0)])).unwrap();
        assert!(r.ok, "{r}");
    }

    #[test]
    fn z2_with_g_below_one_breaks_compatibility() {
        // g<=1 forces 1 = gg <= g1 = g
        let r = validate_pomonoid(&raw(vec![vec![0, 1], vec![1, 0]], &[(1, 0)])).unwrap();
        assert!(!r.ok);
        assert!(r.violated("left_compatibility"));
        assert!(r.violated("right_compatibility"));
        let w = &r.violations.iter().find(|v| v.axiom == "left_compatibility").unwrap().witness;
        assert_eq!(w, &vec![1, 0, 1]);
    }

    #[test]
    fn non_associative_table_is_reported() {
        // 0 identity; 1*1 = 2, 1*2 = 1, 2*1 = 2, 2*2 = 2
        let r = validate_pomonoid(&raw(vec![vec![0, 1, 2], vec![1, 2, 1], vec![2, 2, 2]], &[])).unwrap();
        assert!(r.violated("associativity"));
    }

    #[test]
    fn malformed_tables_are_structural_errors() {
        let bad = RawPomonoid { mul: vec![vec![0, 1]], one: 0, leq: vec![vec![true]], names: None };
        assert!(matches!(validate_pomonoid(&bad), Err(Error::Malformed(_))));
        let empty = RawPomonoid { mul: vec![], one: 0, leq: vec![], names: None };
        assert_eq!(validate_pomonoid(&empty), Err(Error::EmptyCarrier));
        let out = RawPomonoid { mul: vec![vec![0, 2], vec![1, 1]], one: 0, leq: vec![vec![true, false], vec![false, true]], names: None };
        assert!(matches!(validate_pomonoid(&out), Err(Error::OutOfRange { .. })));
    }

    #[test]
    fn idempotents_and_green_l() {
        let s = Pomonoid::u2(Some(true));
        assert_eq!(s.idempotents(), &[0, 1]);
        assert!(!s.l_related(0, 1));
        assert_eq!(s.right_principal(1), vec![1]);
        assert_eq!(Pomonoid::cyclic_group(3).idempotents(), &[0]);
    }
}
