//! Least order congruences and their quotients.
//!
//! Given an S-poset `B` and a relation `R` on its carrier, the quasi-order
//! `Q` is the least preorder containing `leq(B) ∪ R` that is stable under the
//! action. Its symmetric part is the congruence `≡_R`, and `Q` induces the
//! quotient order `⪯_R` on the classes.

use crate::error::{Error, Result};
use crate::relation::Relation;
use crate::structures::{enumerate_pomorphisms, Map, SPoset};

/// An S-poset factored by an order congruence.
#[derive(Debug, Clone)]
pub struct QuotientSPoset {
    pub base: SPoset,
    /// Classes sorted by least member; the least member is the representative.
    pub classes: Vec<Vec<usize>>,
    pub class_of: Vec<usize>,
    pub quotient: SPoset,
    pub projection: Map,
    pub preorder: Relation,
}

impl QuotientSPoset {
    pub fn representative(&self, class: usize) -> usize {
        self.classes[class][0]
    }
}

/// Fixed point of transitivity and action stability starting from
/// `leq(B) ∪ R`.
pub fn congruence_preorder(base: &SPoset, pairs: &[(usize, usize)]) -> Result<Relation> {
    let n = base.size();
    if let Some(&(a, b)) = pairs.iter().find(|&&(a, b)| a >= n || b >= n) {
        return Err(Error::OutOfRange { what: "relation pair", index: a.max(b), size: n });
    }
    let mut q = base.order().clone();
    for &(a, b) in pairs {
        q.set(a, b);
    }
    q.add_reflexive();
    loop {
        q.close_transitive();
        let mut changed = false;
        for (a, b) in q.pairs().collect::<Vec<_>>() {
            for s in base.monoid().elements() {
                changed |= q.insert(base.act(s, a), base.act(s, b));
            }
        }
        if !changed {
            return Ok(q);
        }
    }
}

/// Builds the quotient of `B` by the least order congruence containing `R`.
pub fn order_congruence(base: &SPoset, pairs: &[(usize, usize)]) -> Result<QuotientSPoset> {
    let preorder = congruence_preorder(base, pairs)?;
    Ok(quotient_by_preorder(base, preorder))
}

/// Quotient of `B` by an action-stable preorder `Q`, no closure applied.
pub(crate) fn quotient_by_preorder(base: &SPoset, preorder: Relation) -> QuotientSPoset {
    let (classes, class_of) = preorder.symmetric_classes();
    let k = classes.len();
    let monoid = base.monoid().clone();
    let mut act = Vec::with_capacity(monoid.size() * k);
    for s in monoid.elements() {
        for c in &classes {
            act.push(class_of[base.act(s, c[0])]);
        }
    }
    let mut leq = Relation::empty(k);
    for (i, ci) in classes.iter().enumerate() {
        for (j, cj) in classes.iter().enumerate() {
            if preorder.get(ci[0], cj[0]) {
                leq.set(i, j);
            }
        }
    }
    let names = classes.iter().map(|c| format!("[{}]", base.name(c[0]))).collect();
    let quotient = SPoset::from_parts(monoid, base.side(), act, leq, names);
    QuotientSPoset {
        base: base.clone(),
        projection: Map::new(class_of.clone()),
        classes,
        class_of,
        quotient,
        preorder,
    }
}

/// Checks the universal property of the quotient against one target `C`:
/// the projection is a pomorphism with `[a] <= [b]` for all `(a, b) ∈ R`, the
/// quotient is a valid S-poset, and every pomorphism `α: B -> C` with
/// `α(a) <= α(b)` on `R` factors as `projection ∘ β` for exactly one
/// pomorphism `β`.
pub fn check_universal_property(q: &QuotientSPoset, pairs: &[(usize, usize)], target: &SPoset) -> Result<bool> {
    let base = &q.base;
    if !q.quotient.validate().ok || !q.projection.is_pomorphism(base, &q.quotient) {
        return Ok(false);
    }
    if !pairs.iter().all(|&(a, b)| q.quotient.leq(q.projection.apply(a), q.projection.apply(b))) {
        return Ok(false);
    }
    let betas = enumerate_pomorphisms(&q.quotient, target)?;
    for alpha in enumerate_pomorphisms(base, target)? {
        if !pairs.iter().all(|&(a, b)| target.leq(alpha.apply(a), alpha.apply(b))) {
            continue;
        }
        let factorisations = betas.iter().filter(|beta| q.projection.then(beta) == alpha).count();
        if factorisations != 1 {
            return Ok(false);
        }
    }
    Ok(true)
}
