//! Flatness of left S-posets.
//!
//! The ideal variants are decided exactly by tensoring the (principal) right
//! ideal inclusions `I -> S`. General flatness and po-flatness are checked
//! up to a skeleton length: for each skeleton the standard quotient `W'` of a
//! free right S-poset carries marked elements `[x], [x']`, and `B` is flat
//! for that skeleton when every `gamma(b, b')` forces `[x] ⊗ b = [x'] ⊗ b'`
//! already over the sub-poset `W = [x]S ∪ [x']S`.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;
use std::sync::{Arc, Mutex, OnceLock};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::congruence::{order_congruence, QuotientSPoset};
use crate::error::{Error, Result};
use crate::relation::Relation;
use crate::structures::{right_ideals, Map, Pomonoid, SPoset, Side};
use crate::tensor::{
    connected_by_skeleton, enumerate_skeletons, extract_double_tossing, extract_tossing, induced_tensor_map,
    left_chain, tensor_product, Skeleton, TossingCertificate,
};

/// Standard construction for one skeleton.
#[derive(Debug, Clone)]
pub struct StandardQuotient {
    pub skeleton: Skeleton,
    /// Free right S-poset on `m + n` (doubled) or `m + 1` (single) generators.
    pub free: SPoset,
    pub relations: Vec<(usize, usize)>,
    pub quotient: QuotientSPoset,
    /// Classes of `x·1` and `x'·1` in the quotient.
    pub marked: (usize, usize),
    /// `[x]S ∪ [x']S` and its inclusion into the quotient.
    pub sub: SPoset,
    pub inclusion: Map,
}

impl StandardQuotient {
    /// Marked elements as indices of `sub`.
    pub fn marked_in_sub(&self) -> (usize, usize) {
        let pos = |c| self.inclusion.images.iter().position(|&i| i == c).expect("marked classes generate sub");
        (pos(self.marked.0), pos(self.marked.1))
    }
}

/// Free right S-poset on `k` generators: `(g, s) <= (h, t)` iff `g = h` and `s <= t`.
pub fn free_right_sposet(monoid: &Arc<Pomonoid>, generators: &[String]) -> SPoset {
    let n = monoid.size();
    let k = generators.len();
    let idx = |g: usize, s: usize| g * n + s;
    let mut act = Vec::with_capacity(n * n * k);
    for u in monoid.elements() {
        for g in 0..k {
            for s in monoid.elements() {
                act.push(idx(g, monoid.mul(s, u)));
            }
        }
    }
    let mut leq = Relation::empty(n * k);
    for g in 0..k {
        for (s, t) in monoid.order().pairs() {
            leq.set(idx(g, s), idx(g, t));
        }
    }
    let names = generators
        .iter()
        .flat_map(|g| monoid.elements().map(move |s| format!("{g}{}", monoid.name(s))))
        .collect();
    SPoset::from_parts(monoid.clone(), Side::Right, act, leq, names)
}

type CacheKey = (Pomonoid, Skeleton);

fn cache() -> &'static Mutex<HashMap<CacheKey, Arc<StandardQuotient>>> {
    static CACHE: OnceLock<Mutex<HashMap<CacheKey, Arc<StandardQuotient>>>> = OnceLock::new();
    CACHE.get_or_init(Default::default)
}

/// Builds (or fetches) the standard quotient of a skeleton.
pub fn build_standard_quotient(monoid: &Arc<Pomonoid>, sk: &Skeleton) -> Result<Arc<StandardQuotient>> {
    if let Some(&bad) = sk.flat().iter().find(|&&s| s >= monoid.size()) {
        return Err(Error::OutOfRange { what: "skeleton entry", index: bad, size: monoid.size() });
    }
    let key = ((**monoid).clone(), sk.clone());
    if let Some(hit) = cache().lock().unwrap().get(&key) {
        return Ok(hit.clone());
    }
    let built = Arc::new(build_uncached(monoid, sk)?);
    cache().lock().unwrap().insert(key, built.clone());
    Ok(built)
}

fn build_uncached(monoid: &Arc<Pomonoid>, sk: &Skeleton) -> Result<StandardQuotient> {
    let (m, n) = (sk.first_len(), sk.second_len());
    let mut gens = vec!["x".to_string()];
    gens.extend((2..=m).map(|i| format!("x{i}_")));
    if sk.is_doubled() {
        gens.extend((2..=n).map(|j| format!("y{j}_")));
    }
    gens.push("x'".to_string());
    let last = gens.len() - 1;
    let free = free_right_sposet(monoid, &gens);
    let size = monoid.size();
    let idx = |g: usize, s: usize| g * size + s;

    let mut forward = vec![0];
    forward.extend(1..m);
    forward.push(last);
    let mut relations: Vec<(usize, usize)> = sk
        .first_rows()
        .iter()
        .enumerate()
        .map(|(i, &(s, t))| (idx(forward[i], s), idx(forward[i + 1], t)))
        .collect();
    if sk.is_doubled() {
        let mut back = vec![last];
        back.extend(m..m + n - 1);
        back.push(0);
        relations.extend(sk.second_rows().iter().enumerate().map(|(j, &(u, v))| (idx(back[j], u), idx(back[j + 1], v))));
    }
    let quotient = order_congruence(&free, &relations)?;
    let one = monoid.one();
    let marked = (quotient.class_of[idx(0, one)], quotient.class_of[idx(last, one)]);
    let gen_set = quotient.quotient.generated_by(&[marked.0, marked.1]);
    let (sub, inclusion) = quotient.quotient.restrict(&gen_set)?;
    Ok(StandardQuotient { skeleton: sk.clone(), free, relations, quotient, marked, sub, inclusion })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum FlatVariant {
    PWF,
    WF,
    PWPF,
    WPF,
}

impl FlatVariant {
    pub const ALL: [FlatVariant; 4] = [FlatVariant::PWF, FlatVariant::WF, FlatVariant::PWPF, FlatVariant::WPF];

    fn principal_only(self) -> bool {
        matches!(self, FlatVariant::PWF | FlatVariant::PWPF)
    }

    fn po(self) -> bool {
        matches!(self, FlatVariant::PWPF | FlatVariant::WPF)
    }
}

impl fmt::Display for FlatVariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

impl FromStr for FlatVariant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        FlatVariant::ALL
            .into_iter()
            .find(|v| v.to_string().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::UnknownClass(s.to_string()))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Holds {
    True,
    False,
    /// No failure among skeletons up to this total length.
    BoundedTrue(usize),
}

/// Where a flatness check broke down.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FlatFailure {
    /// The right ideal, as elements of `S`, for the ideal variants.
    pub ideal: Option<Vec<usize>>,
    pub skeleton: Option<Skeleton>,
    /// Two pairs, the first factor given in the larger right S-poset
    /// (`S` for ideals, the standard quotient otherwise), that are separated
    /// over the smaller one but not over the larger.
    pub pairs: ((usize, usize), (usize, usize)),
    /// Tossing over the larger right S-poset.
    pub certificate: Option<TossingCertificate>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FlatnessVerdict {
    pub holds: Holds,
    pub failing_instance: Option<FlatFailure>,
}

impl FlatnessVerdict {
    /// `true` unless a failure was found.
    pub fn passes(&self) -> bool {
        self.holds != Holds::False
    }
}

fn check_left(b: &SPoset) -> Result<()> {
    if b.side() != Side::Left {
        return Err(Error::WrongSide { expected: Side::Left, found: b.side() });
    }
    Ok(())
}

/// Decides one of the ideal flatness variants exactly.
pub fn check_ideal_flatness(b: &SPoset, variant: FlatVariant) -> Result<FlatnessVerdict> {
    check_left(b)?;
    let monoid = b.monoid();
    let s_r = SPoset::regular(monoid.clone(), Side::Right);
    let big = tensor_product(&s_r, b)?;
    for ideal in right_ideals(monoid, variant.principal_only()) {
        let small = tensor_product(&ideal.poset, b)?;
        let map = induced_tensor_map(&ideal.inclusion, &small, &big)?;
        let k = small.num_classes();
        let bad = (0..k).flat_map(|i| (0..k).map(move |j| (i, j))).find(|&(i, j)| {
            if variant.po() {
                small.leq.get(i, j) != big.leq.get(map.apply(i), map.apply(j))
            } else {
                i != j && map.apply(i) == map.apply(j)
            }
        });
        if let Some((i, j)) = bad {
            let lift = |c: usize| {
                let (a, y) = small.unpair(small.classes[c][0]);
                (ideal.inclusion.apply(a), y)
            };
            let (p, q) = (lift(i), lift(j));
            let certificate =
                if variant.po() { extract_tossing(&big, p, q)? } else { extract_double_tossing(&big, p, q)? };
            return Ok(FlatnessVerdict {
                holds: Holds::False,
                failing_instance: Some(FlatFailure { ideal: Some(ideal.elements), skeleton: None, pairs: (p, q), certificate }),
            });
        }
    }
    Ok(FlatnessVerdict { holds: Holds::True, failing_instance: None })
}

fn skeleton_failure(b: &SPoset, sk: &Skeleton, po: bool) -> Result<Option<FlatFailure>> {
    let sq = build_standard_quotient(b.monoid(), sk)?;
    let (wx, wx2) = sq.marked_in_sub();
    let small = tensor_product(&sq.sub, b)?;
    let rows1 = sk.first_rows();
    let rows2 = sk.second_rows();
    for y in b.elements() {
        for y2 in b.elements() {
            let gamma = left_chain(b, &rows1, y, y2).is_some() && (!sk.is_doubled() || left_chain(b, &rows2, y2, y).is_some());
            if !gamma {
                continue;
            }
            let (p, q) = (small.pair(wx, y), small.pair(wx2, y2));
            let connected = if po {
                small.pair_preorder.get(p, q)
            } else {
                small.class_of[p] == small.class_of[q]
            };
            if !connected {
                let big = tensor_product(&sq.quotient.quotient, b)?;
                let (bp, bq) = ((sq.marked.0, y), (sq.marked.1, y2));
                let certificate =
                    if po { extract_tossing(&big, bp, bq)? } else { extract_double_tossing(&big, bp, bq)? };
                return Ok(Some(FlatFailure { ideal: None, skeleton: Some(sk.clone()), pairs: (bp, bq), certificate }));
            }
        }
    }
    Ok(None)
}

/// Flatness (`po = false`, doubled skeletons) or po-flatness (`po = true`,
/// single skeletons) checked for every skeleton of total length at most
/// `max_len`. Failures are reported for the first skeleton in enumeration
/// order.
pub fn check_flat_bounded(b: &SPoset, po: bool, max_len: usize) -> Result<FlatnessVerdict> {
    check_left(b)?;
    let min = if po { 2 } else { 4 };
    if max_len < min {
        return Err(Error::Precondition(format!("skeleton bound must be at least {min}")));
    }
    let skeletons = enumerate_skeletons(b.monoid().size(), max_len, !po);
    let found = skeletons
        .par_iter()
        .map(|sk| skeleton_failure(b, sk, po))
        .find_map_first(|r| match r {
            Ok(None) => None,
            other => Some(other),
        });
    match found {
        None => Ok(FlatnessVerdict { holds: Holds::BoundedTrue(max_len), failing_instance: None }),
        Some(Err(e)) => Err(e),
        Some(Ok(failure)) => Ok(FlatnessVerdict { holds: Holds::False, failing_instance: failure }),
    }
}

/// Skeletons of length at most `bound` that connect the marked elements over
/// `[x]S ∪ [x']S` with some `b, b'` of the family for which the standard
/// quotient connects them. Sorted in enumeration order.
pub fn replacement_skeleton_search(monoid: &Arc<Pomonoid>, sk: &Skeleton, family: &[SPoset], bound: usize) -> Result<Vec<Skeleton>> {
    let sq = build_standard_quotient(monoid, sk)?;
    let (wx, wx2) = sq.marked_in_sub();
    let candidates = enumerate_skeletons(monoid.size(), bound, sk.is_doubled());
    let mut keep = vec![false; candidates.len()];
    let rows1 = sk.first_rows();
    let rows2 = sk.second_rows();
    for b in family {
        check_left(b)?;
        if !b.monoid().as_ref().eq(monoid) {
            return Err(Error::MonoidMismatch);
        }
        for y in b.elements() {
            for y2 in b.elements() {
                let gamma = left_chain(b, &rows1, y, y2).is_some() && (!sk.is_doubled() || left_chain(b, &rows2, y2, y).is_some());
                if !gamma {
                    continue;
                }
                for (i, c) in candidates.iter().enumerate() {
                    if !keep[i] && connected_by_skeleton(&sq.sub, b, (wx, y), (wx2, y2), c)? {
                        keep[i] = true;
                    }
                }
            }
        }
    }
    Ok(candidates.into_iter().zip(keep).filter_map(|(c, k)| k.then_some(c)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tensor::{eval_skeleton_formula, SkeletonFormula};

    fn u2() -> Arc<Pomonoid> {
        Arc::new(Pomonoid::u2(Some(true)))
    }

    fn chain2(m: Arc<Pomonoid>) -> SPoset {
        SPoset::with_trivial_action(m, Side::Left, Relation::from_pairs(2, [(0, 0), (0, 1), (1, 1)])).unwrap()
    }

    #[test]
    fn free_order_is_componentwise() {
        let m = u2();
        let f = free_right_sposet(&m, &["x".into(), "y".into()]);
        assert!(f.validate().ok);
        assert!(f.leq(1, 0));
        assert!(!f.leq(0, 2) && !f.leq(2, 0));
        assert_eq!(f.act(1, 2), 3);
    }

    #[test]
    fn trivial_monoid_doubled_unit_skeleton() {
        let m = Arc::new(Pomonoid::trivial());
        let sk = Skeleton::ones(0, 1, Some(1));
        let sq = build_standard_quotient(&m, &sk).unwrap();
        assert_eq!(sq.free.size(), 2);
        assert_eq!(sq.quotient.classes.len(), 1);
        let v = eval_skeleton_formula(SkeletonFormula::Delta, &sk, &sq.quotient.quotient, &[sq.marked.0, sq.marked.1]).unwrap();
        assert!(v.holds);
    }

    #[test]
    fn u2_single_unit_skeleton() {
        let m = u2();
        let sk = Skeleton::ones(0, 1, None);
        let sq = build_standard_quotient(&m, &sk).unwrap();
        assert_eq!(sq.free.size(), 4);
        assert!(sq.quotient.quotient.leq(sq.marked.0, sq.marked.1));
        assert!(sq.quotient.quotient.validate().ok);
    }

    #[test]
    fn standard_quotients_satisfy_delta() {
        let m = u2();
        for sk in enumerate_skeletons(2, 6, true) {
            let sq = build_standard_quotient(&m, &sk).unwrap();
            assert!(sq.quotient.quotient.validate().ok);
            let v = eval_skeleton_formula(SkeletonFormula::Delta, &sk, &sq.quotient.quotient, &[sq.marked.0, sq.marked.1]).unwrap();
            assert!(v.holds, "{sk:?}");
        }
        for sk in enumerate_skeletons(2, 4, false) {
            let sq = build_standard_quotient(&m, &sk).unwrap();
            let v = eval_skeleton_formula(SkeletonFormula::DeltaLeq, &sk, &sq.quotient.quotient, &[sq.marked.0, sq.marked.1]).unwrap();
            assert!(v.holds);
        }
    }

    #[test]
    fn regular_act_is_flat_in_every_sense() {
        for m in [u2(), Arc::new(Pomonoid::cyclic_group(2)), Arc::new(Pomonoid::u2(None))] {
            let s = SPoset::regular(m, Side::Left);
            for v in FlatVariant::ALL {
                assert_eq!(check_ideal_flatness(&s, v).unwrap().holds, Holds::True);
            }
            assert_eq!(check_flat_bounded(&s, false, 6).unwrap().holds, Holds::BoundedTrue(6));
            assert_eq!(check_flat_bounded(&s, true, 4).unwrap().holds, Holds::BoundedTrue(4));
        }
    }

    #[test]
    fn trivial_monoid_chain_is_flat() {
        let b = chain2(Arc::new(Pomonoid::trivial()));
        for v in FlatVariant::ALL {
            assert!(check_ideal_flatness(&b, v).unwrap().passes());
        }
        assert!(check_flat_bounded(&b, false, 8).unwrap().passes());
        assert!(check_flat_bounded(&b, true, 6).unwrap().passes());
    }

    #[test]
    fn replacement_search_edge_cases() {
        let t1 = Arc::new(Pomonoid::trivial());
        let sk = Skeleton::ones(0, 1, Some(1));
        let found = replacement_skeleton_search(&t1, &sk, &[chain2(t1.clone())], 6).unwrap();
        assert!(!found.is_empty());
        assert!(found.iter().all(|s| s.flat().iter().all(|&x| x == 0)));
        assert!(replacement_skeleton_search(&u2(), &Skeleton::ones(0, 1, Some(1)), &[], 4).unwrap().is_empty());
    }

    #[test]
    fn bound_precondition() {
        let s = SPoset::regular(u2(), Side::Left);
        assert!(check_flat_bounded(&s, false, 2).is_err());
    }
}
