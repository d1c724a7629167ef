use super::{Map, SPoset};

/// Cheap isomorphism invariants of an element: down-set size, up-set size,
/// orbit size and number of monoid elements fixing it.
fn signature(x: &SPoset, a: usize) -> (usize, usize, usize, usize) {
    let below = x.elements().filter(|&b| x.leq(b, a)).count();
    let above = x.elements().filter(|&b| x.leq(a, b)).count();
    let orbit = x.generated_by(&[a]).len();
    let fixed = x.monoid().elements().filter(|&s| x.act(s, a) == a).count();
    (below, above, orbit, fixed)
}

/// Searches for an isomorphism `A -> B`: a bijection preserving the action
/// whose order behaviour is `a <= a'` iff `f(a) <= f(a')`. Returns the
/// lexicographically least witness.
pub fn isomorphic(a: &SPoset, b: &SPoset) -> Option<Map> {
    if a.size() != b.size() || a.side() != b.side() || !a.same_monoid(b) {
        return None;
    }
    if a.order().pairs().count() != b.order().pairs().count() {
        return None;
    }
    let sig_a: Vec<_> = a.elements().map(|x| signature(a, x)).collect();
    let sig_b: Vec<_> = b.elements().map(|x| signature(b, x)).collect();
    let mut ms_a = sig_a.clone();
    let mut ms_b = sig_b.clone();
    ms_a.sort_unstable();
    ms_b.sort_unstable();
    if ms_a != ms_b {
        return None;
    }
    let mut images = vec![usize::MAX; a.size()];
    let mut used = vec![false; b.size()];
    if search(a, b, &sig_a, &sig_b, &mut images, &mut used) {
        Some(Map::new(images))
    } else {
        None
    }
}

fn search(
    a: &SPoset,
    b: &SPoset,
    sig_a: &[(usize, usize, usize, usize)],
    sig_b: &[(usize, usize, usize, usize)],
    images: &mut Vec<usize>,
    used: &mut Vec<bool>,
) -> bool {
    let Some(x) = images.iter().position(|&i| i == usize::MAX) else {
        return true;
    };
    for y in b.elements() {
        if used[y] || sig_a[x] != sig_b[y] {
            continue;
        }
        let (saved_images, saved_used) = (images.clone(), used.clone());
        if assign(a, b, x, y, images, used) && search(a, b, sig_a, sig_b, images, used) {
            return true;
        }
        *images = saved_images;
        *used = saved_used;
    }
    false
}

fn assign(a: &SPoset, b: &SPoset, x: usize, y: usize, images: &mut [usize], used: &mut [bool]) -> bool {
    let mut stack = vec![(x, y)];
    while let Some((x, y)) = stack.pop() {
        if images[x] != usize::MAX {
            if images[x] != y {
                return false;
            }
            continue;
        }
        if used[y] {
            return false;
        }
        images[x] = y;
        used[y] = true;
        for z in a.elements() {
            let iz = images[z];
            if iz == usize::MAX {
                continue;
            }
            if a.leq(x, z) != b.leq(y, iz) || a.leq(z, x) != b.leq(iz, y) {
                return false;
            }
        }
        for s in a.monoid().elements() {
            stack.push((a.act(s, x), b.act(s, y)));
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::relation::Relation;
    use crate::structures::{MorphismKind, Pomonoid, Side};

    #[test]
    fn reflexive_with_identity_witness_kind() {
        let s = SPoset::regular(Arc::new(Pomonoid::u2(Some(true))), Side::Left);
        let f = isomorphic(&s, &s).unwrap();
        assert_eq!(f.kind(&s, &s).unwrap(), MorphismKind::Isomorphism);
    }

    #[test]
    fn chain_and_antichain_differ() {
        let t1 = Arc::new(Pomonoid::trivial());
        let anti = SPoset::with_trivial_action(t1.clone(), Side::Left, Relation::identity(2)).unwrap();
        let ch = SPoset::with_trivial_action(t1, Side::Left, Relation::from_pairs(2, [(0, 0), (0, 1), (1, 1)])).unwrap();
        assert!(isomorphic(&anti, &ch).is_none());
    }

    #[test]
    fn sizes_differ() {
        let m = Arc::new(Pomonoid::u2(Some(true)));
        let s = SPoset::regular(m.clone(), Side::Left);
        let se = SPoset::principal(m, Side::Left, 1);
        assert!(isomorphic(&s, &se).is_none());
    }

    #[test]
    fn relabelled_copy_is_found() {
        let m = Arc::new(Pomonoid::u2(Some(true)));
        let s = SPoset::regular(m.clone(), Side::Left);
        let se = SPoset::principal(m, Side::Left, 1);
        let a = SPoset::disjoint_union(&[s.clone(), se.clone()]).unwrap();
        let b = SPoset::disjoint_union(&[se, s]).unwrap();
        let f = isomorphic(&a, &b).unwrap();
        assert_eq!(f.images, vec![1, 2, 0]);
        assert_eq!(f.kind(&a, &b).unwrap(), MorphismKind::Isomorphism);
    }
}
