use serde::{Deserialize, Serialize};

use super::SPoset;
use crate::error::{Error, Result};

/// A carrier map between two S-posets, `images[a]` being the image of `a`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Map {
    pub images: Vec<usize>,
}

/// Strongest property a map has, in increasing strength.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MorphismKind {
    NotPomorphism,
    Pomorphism,
    Embedding,
    Isomorphism,
}

impl Map {
    pub fn new(images: Vec<usize>) -> Self {
        Map { images }
    }

    pub fn identity(n: usize) -> Self {
        Map { images: (0..n).collect() }
    }

    #[inline]
    pub fn apply(&self, a: usize) -> usize {
        self.images[a]
    }

    /// `self` followed by `then`.
    pub fn then(&self, then: &Map) -> Map {
        Map { images: self.images.iter().map(|&a| then.apply(a)).collect() }
    }

    pub fn is_injective(&self) -> bool {
        let mut v = self.images.clone();
        v.sort_unstable();
        v.windows(2).all(|w| w[0] != w[1])
    }

    pub fn is_surjective_onto(&self, n: usize) -> bool {
        let mut hit = vec![false; n];
        for &a in &self.images {
            if a < n {
                hit[a] = true;
            }
        }
        hit.into_iter().all(|h| h)
    }

    /// Inverse of a bijection onto `0..len`.
    pub fn inverse(&self) -> Option<Map> {
        let n = self.images.len();
        if !self.is_surjective_onto(n) {
            return None;
        }
        let mut inv = vec![0; n];
        for (a, &b) in self.images.iter().enumerate() {
            inv[b] = a;
        }
        Some(Map { images: inv })
    }

    fn check_dims(&self, source: &SPoset, target: &SPoset) -> Result<()> {
        if self.images.len() != source.size() {
            return Err(Error::Malformed(format!(
                "map has {} images for a source of size {}",
                self.images.len(),
                source.size()
            )));
        }
        if let Some(&bad) = self.images.iter().find(|&&b| b >= target.size()) {
            return Err(Error::OutOfRange { what: "map image", index: bad, size: target.size() });
        }
        if !source.same_monoid(target) {
            return Err(Error::MonoidMismatch);
        }
        if source.side() != target.side() {
            return Err(Error::WrongSide { expected: source.side(), found: target.side() });
        }
        Ok(())
    }

    pub fn preserves_action(&self, source: &SPoset, target: &SPoset) -> bool {
        source.monoid().elements().all(|s| {
            source.elements().all(|a| self.apply(source.act(s, a)) == target.act(s, self.apply(a)))
        })
    }

    pub fn preserves_order(&self, source: &SPoset, target: &SPoset) -> bool {
        source.order().pairs().all(|(a, b)| target.leq(self.apply(a), self.apply(b)))
    }

    pub fn reflects_order(&self, source: &SPoset, target: &SPoset) -> bool {
        source
            .elements()
            .all(|a| source.elements().all(|b| !target.leq(self.apply(a), self.apply(b)) || source.leq(a, b)))
    }

    /// Classifies the map. An embedding preserves and reflects order (hence
    /// is injective); an isomorphism is a surjective embedding.
    pub fn kind(&self, source: &SPoset, target: &SPoset) -> Result<MorphismKind> {
        self.check_dims(source, target)?;
        if !self.preserves_action(source, target) || !self.preserves_order(source, target) {
            return Ok(MorphismKind::NotPomorphism);
        }
        if !self.reflects_order(source, target) {
            return Ok(MorphismKind::Pomorphism);
        }
        if self.is_surjective_onto(target.size()) {
            Ok(MorphismKind::Isomorphism)
        } else {
            Ok(MorphismKind::Embedding)
        }
    }

    pub fn is_pomorphism(&self, source: &SPoset, target: &SPoset) -> bool {
        matches!(self.kind(source, target), Ok(k) if k >= MorphismKind::Pomorphism)
    }
}

/// Every action- and order-preserving map `A -> B`, in lexicographic order of
/// image vectors.
pub fn enumerate_pomorphisms(a: &SPoset, b: &SPoset) -> Result<Vec<Map>> {
    if !a.same_monoid(b) {
        return Err(Error::MonoidMismatch);
    }
    if a.side() != b.side() {
        return Err(Error::WrongSide { expected: a.side(), found: b.side() });
    }
    let mut out = Vec::new();
    let mut images = vec![usize::MAX; a.size()];
    extend(a, b, 0, &mut images, &mut out);
    Ok(out)
}

fn extend(a: &SPoset, b: &SPoset, next: usize, images: &mut Vec<usize>, out: &mut Vec<Map>) {
    let Some(x) = (next..a.size()).find(|&x| images[x] == usize::MAX) else {
        out.push(Map::new(images.clone()));
        return;
    };
    for y in b.elements() {
        let saved = images.clone();
        if assign(a, b, x, y, images) {
            extend(a, b, x + 1, images, out);
        }
        *images = saved;
    }
}

/// Sets `x ↦ y`, propagating `s·x ↦ s·y` and checking order with every
/// assigned element. Returns `false` on conflict.
fn assign(a: &SPoset, b: &SPoset, x: usize, y: usize, images: &mut [usize]) -> bool {
    let mut stack = vec![(x, y)];
    while let Some((x, y)) = stack.pop() {
        if images[x] != usize::MAX {
            if images[x] != y {
                return false;
            }
            continue;
        }
        images[x] = y;
        for z in a.elements() {
            let iz = images[z];
            if iz == usize::MAX {
                continue;
            }
            if (a.leq(x, z) && !b.leq(y, iz)) || (a.leq(z, x) && !b.leq(iz, y)) {
                return false;
            }
        }
        for s in a.monoid().elements() {
            stack.push((a.act(s, x), b.act(s, y)));
        }
    }
    true
}
