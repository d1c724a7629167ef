//! Tensor products `A ⊗ B` of a right S-poset `A` and a left S-poset `B`.
//!
//! `A ⊗ B` is the quotient of `A × B` by the least preorder `Q` containing the
//! product order and both directions of `(as, b) ~ (a, sb)`.

mod skeleton;
mod tossing;

use std::sync::Arc;

pub use skeleton::{enumerate_skeletons, eval_skeleton_formula, FormulaValue, Skeleton, SkeletonFormula};
pub use tossing::{connected_by_skeleton, extract_double_tossing, extract_tossing, verify_tossing, TossingCertificate};
pub(crate) use skeleton::left_chain;

use crate::error::{Error, Result};
use crate::relation::Relation;
use crate::structures::{Map, Pomonoid, SPoset, Side};

/// `A ⊗ B` with its pair preorder and class order.
#[derive(Debug, Clone)]
pub struct TensorPoset {
    pub left_factor: SPoset,
    pub right_factor: SPoset,
    /// Classes sorted by least pair index.
    pub classes: Vec<Vec<usize>>,
    pub class_of: Vec<usize>,
    pub leq: Relation,
    pub pair_preorder: Relation,
}

impl TensorPoset {
    /// Index of `(a, b)` in `A × B`.
    #[inline]
    pub fn pair(&self, a: usize, b: usize) -> usize {
        a * self.right_factor.size() + b
    }

    #[inline]
    pub fn unpair(&self, p: usize) -> (usize, usize) {
        (p / self.right_factor.size(), p % self.right_factor.size())
    }

    pub fn class(&self, a: usize, b: usize) -> usize {
        self.class_of[self.pair(a, b)]
    }

    pub fn num_classes(&self) -> usize {
        self.classes.len()
    }

    pub fn monoid(&self) -> &Arc<Pomonoid> {
        self.left_factor.monoid()
    }

    /// The class poset as a left S-poset over the trivial monoid.
    pub fn as_poset(&self) -> SPoset {
        let names = self
            .classes
            .iter()
            .map(|c| {
                let (a, b) = self.unpair(c[0]);
                format!("{}⊗{}", self.left_factor.name(a), self.right_factor.name(b))
            })
            .collect();
        SPoset::from_parts(Arc::new(Pomonoid::trivial()), Side::Left, (0..self.num_classes()).collect(), self.leq.clone(), names)
    }
}

/// Builds `A ⊗ B`.
pub fn tensor_product(a: &SPoset, b: &SPoset) -> Result<TensorPoset> {
    if a.side() != Side::Right {
        return Err(Error::WrongSide { expected: Side::Right, found: a.side() });
    }
    if b.side() != Side::Left {
        return Err(Error::WrongSide { expected: Side::Left, found: b.side() });
    }
    if !a.same_monoid(b) {
        return Err(Error::MonoidMismatch);
    }
    let (na, nb) = (a.size(), b.size());
    let mut q = Relation::empty(na * nb);
    for (x, x2) in a.order().pairs() {
        for (y, y2) in b.order().pairs() {
            q.set(x * nb + y, x2 * nb + y2);
        }
    }
    for x in 0..na {
        for s in a.monoid().elements() {
            for y in 0..nb {
                let p = a.act(s, x) * nb + y;
                let r = x * nb + b.act(s, y);
                q.set(p, r);
                q.set(r, p);
            }
        }
    }
    q.close_transitive();
    let (classes, class_of) = q.symmetric_classes();
    let k = classes.len();
    let mut leq = Relation::empty(k);
    for (i, ci) in classes.iter().enumerate() {
        for (j, cj) in classes.iter().enumerate() {
            if q.get(ci[0], cj[0]) {
                leq.set(i, j);
            }
        }
    }
    Ok(TensorPoset { left_factor: a.clone(), right_factor: b.clone(), classes, class_of, leq, pair_preorder: q })
}

/// `a ⊗ b <= a' ⊗ b'`.
pub fn tensor_leq(t: &TensorPoset, p: (usize, usize), q: (usize, usize)) -> Result<bool> {
    check_pair(t, p)?;
    check_pair(t, q)?;
    Ok(t.pair_preorder.get(t.pair(p.0, p.1), t.pair(q.0, q.1)))
}

pub(crate) fn check_pair(t: &TensorPoset, (a, b): (usize, usize)) -> Result<()> {
    if a >= t.left_factor.size() {
        return Err(Error::OutOfRange { what: "left factor element", index: a, size: t.left_factor.size() });
    }
    if b >= t.right_factor.size() {
        return Err(Error::OutOfRange { what: "right factor element", index: b, size: t.right_factor.size() });
    }
    Ok(())
}

/// `f ⊗ 1_B: A ⊗ B -> A' ⊗ B` on classes, for a pomorphism `f: A -> A'`.
pub fn induced_tensor_map(f: &Map, source: &TensorPoset, target: &TensorPoset) -> Result<Map> {
    if !source.right_factor.same_monoid(&target.right_factor) || source.right_factor.raw() != target.right_factor.raw() {
        return Err(Error::Precondition("tensor products have different left S-posets".into()));
    }
    if !f.is_pomorphism(&source.left_factor, &target.left_factor) {
        return Err(Error::NotPomorphism);
    }
    let images = source
        .classes
        .iter()
        .map(|class| {
            let (a, b) = source.unpair(class[0]);
            target.class(f.apply(a), b)
        })
        .collect();
    Ok(Map::new(images))
}

/// Whether a map of class posets reflects order (and so is injective).
pub fn is_order_embedding(map: &Map, source: &TensorPoset, target: &TensorPoset) -> bool {
    (0..source.num_classes()).all(|i| {
        (0..source.num_classes()).all(|j| source.leq.get(i, j) == target.leq.get(map.apply(i), map.apply(j)))
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::structures::{isomorphic, MorphismKind};

    fn u2() -> Arc<Pomonoid> {
        Arc::new(Pomonoid::u2(Some(true)))
    }

    fn chain2(m: Arc<Pomonoid>, side: Side) -> SPoset {
        SPoset::with_trivial_action(m, side, Relation::from_pairs(2, [(0, 0), (0, 1), (1, 1)])).unwrap()
    }

    #[test]
    fn theta_tensor_s_has_one_class() {
        let m = u2();
        let t = tensor_product(&SPoset::one_point(m.clone(), Side::Right), &SPoset::regular(m, Side::Left)).unwrap();
        assert_eq!(t.num_classes(), 1);
        assert!(tensor_leq(&t, (0, 0), (0, 1)).unwrap());
        assert!(tensor_leq(&t, (0, 1), (0, 0)).unwrap());
    }

    #[test]
    fn chains_over_trivial_monoid_give_product_order() {
        let m = Arc::new(Pomonoid::trivial());
        let t = tensor_product(&chain2(m.clone(), Side::Right), &chain2(m, Side::Left)).unwrap();
        assert_eq!(t.num_classes(), 4);
        assert!(tensor_leq(&t, (0, 0), (1, 1)).unwrap());
        assert!(!tensor_leq(&t, (1, 1), (0, 0)).unwrap());
        assert!(!tensor_leq(&t, (0, 1), (1, 0)).unwrap());
    }

    #[test]
    fn regular_tensor_collapses_to_b() {
        let m = u2();
        let b = SPoset::disjoint_union(&[SPoset::regular(m.clone(), Side::Left), SPoset::one_point(m.clone(), Side::Left)]).unwrap();
        let t = tensor_product(&SPoset::regular(m.clone(), Side::Right), &b).unwrap();
        let collapse = Map::new(t.classes.iter().map(|c| { let (s, x) = t.unpair(c[0]); b.act(s, x) }).collect());
        let plain_b = SPoset::from_parts(Arc::new(Pomonoid::trivial()), Side::Left, b.elements().collect(), b.order().clone(), b.names().to_vec());
        assert_eq!(collapse.kind(&t.as_poset(), &plain_b).unwrap(), MorphismKind::Isomorphism);
        assert!(isomorphic(&t.as_poset(), &plain_b).is_some());
    }

    #[test]
    fn side_errors() {
        let m = u2();
        let l = SPoset::regular(m.clone(), Side::Left);
        assert!(matches!(tensor_product(&l, &l), Err(Error::WrongSide { .. })));
        let other = SPoset::regular(Arc::new(Pomonoid::cyclic_group(2)), Side::Left);
        assert!(matches!(tensor_product(&SPoset::regular(m, Side::Right), &other), Err(Error::MonoidMismatch)));
    }

    #[test]
    fn induced_map_of_identity_and_inclusion() {
        let m = u2();
        let s_r = SPoset::regular(m.clone(), Side::Right);
        let b = SPoset::regular(m.clone(), Side::Left);
        let t = tensor_product(&s_r, &b).unwrap();
        let id = induced_tensor_map(&Map::identity(2), &t, &t).unwrap();
        assert_eq!(id, Map::identity(t.num_classes()));

        // eS ⊗ S -> S ⊗ S; eS ⊗ S ≅ Se = {e}, image is the class of e
        let (es, inc) = s_r.restrict(&[1]).unwrap();
        let te = tensor_product(&es, &b).unwrap();
        assert_eq!(te.num_classes(), 1);
        let g = induced_tensor_map(&inc, &te, &t).unwrap();
        let (s, x) = t.unpair(t.classes[g.apply(0)][0]);
        assert_eq!(b.act(s, x), 1);
        assert!(is_order_embedding(&g, &te, &t));
    }

    #[test]
    fn collapsing_map_over_trivial_monoid() {
        let m = Arc::new(Pomonoid::trivial());
        let a = chain2(m.clone(), Side::Right);
        let pt = SPoset::one_point(m.clone(), Side::Right);
        let b = chain2(m, Side::Left);
        let (ta, tp) = (tensor_product(&a, &b).unwrap(), tensor_product(&pt, &b).unwrap());
        let g = induced_tensor_map(&Map::new(vec![0, 0]), &ta, &tp).unwrap();
        assert_eq!(g.apply(ta.class(0, 0)), g.apply(ta.class(1, 0)));
        assert!(!g.is_injective());
        assert!(induced_tensor_map(&Map::new(vec![0]), &tp, &tp).is_ok());
        let bad = Map::new(vec![1, 0]);
        assert!(matches!(induced_tensor_map(&bad, &ta, &ta), Err(Error::NotPomorphism)));
    }
}
