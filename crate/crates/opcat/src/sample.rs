//! Seeded random generation of collections and collection maps.
//!
//! All sampling goes through [`Sampler`], which wraps a ChaCha8 stream
//! cipher generator: the seed fully determines every sample, so property
//! tests and reports are reproducible bit for bit.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::coll::{Collection, CollectionMap};
use crate::normal::{self, Presheaf};
use crate::operadic::OperadicCategory;

pub const DEFAULT_SEED: u64 = 0;
pub const DEFAULT_MAX: usize = 2;

pub struct Sampler {
    rng: ChaCha8Rng,
    max: usize,
}

impl Sampler {
    pub fn new(seed: u64, max: usize) -> Self {
        Self {
            rng: ChaCha8Rng::seed_from_u64(seed),
            max,
        }
    }

    pub fn max(&self) -> usize {
        self.max
    }

    /// A collection whose size at each object is uniform in `0..=max`.
    /// Element labels are `{tag}{object}x{position}`.
    pub fn collection(&mut self, oc: &OperadicCategory, tag: &str) -> Collection {
        let mut out = Collection::new();
        for c in 0..oc.cat().n_objects() {
            let size = self.rng.random_range(0..=self.max);
            for k in 0..size {
                out.insert(c, format!("{tag}{c}x{k}"));
            }
        }
        out
    }

    /// A fresh target collection together with a total map from `src` into
    /// it. The target is nonempty wherever `src` is, so the map always has
    /// somewhere to send each element.
    pub fn map_into(
        &mut self,
        oc: &OperadicCategory,
        src: &Collection,
        tag: &str,
    ) -> (Collection, CollectionMap) {
        let mut target = Collection::new();
        let mut map = CollectionMap::new();
        for c in 0..oc.cat().n_objects() {
            let lo = usize::from(!src.at(c).is_empty());
            let size = self.rng.random_range(lo..=self.max.max(lo));
            for k in 0..size {
                target.insert(c, format!("{tag}{c}x{k}"));
            }
            for e in src.at(c) {
                let pick = self.rng.random_range(0..size.max(1));
                map.insert(c, e.clone(), format!("{tag}{c}x{pick}"));
            }
        }
        (target, map)
    }

    /// A free presheaf on a sampled family of generators, at most `max`
    /// per object. Generator names are `{tag}{object}g{position}`.
    ///
    /// Generators are placed only at objects of positive cardinality, so
    /// that every arity arising in iterated tensors of samples is realized
    /// by some object of the category; when every object has cardinality
    /// zero there is no such constraint and all objects are eligible.
    pub fn presheaf(&mut self, oc: &OperadicCategory, tag: &str) -> Presheaf {
        let n = oc.cat().n_objects();
        let all_zero = (0..n).all(|c| oc.obj_card(c) == 0);
        let mut generators = Vec::new();
        for c in 0..n {
            if !all_zero && oc.obj_card(c) == 0 {
                continue;
            }
            let count = self.rng.random_range(0..=self.max);
            for k in 0..count {
                generators.push((c, format!("{tag}{c}g{k}")));
            }
        }
        normal::free_presheaf(oc, &generators)
            .expect("free presheaf construction needs complete category tables")
    }
}

impl Default for Sampler {
    fn default() -> Self {
        Self::new(DEFAULT_SEED, DEFAULT_MAX)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builders::finite_sets;

    #[test]
    fn same_seed_gives_identical_samples() {
        let oc = finite_sets(2);
        let a = Sampler::new(7, 2).collection(&oc, "t");
        let b = Sampler::new(7, 2).collection(&oc, "t");
        assert_eq!(a, b);
    }

    #[test]
    fn sampled_maps_are_total_into_their_targets() {
        let oc = finite_sets(2);
        let mut sampler = Sampler::new(3, 2);
        let src = sampler.collection(&oc, "s");
        let (target, map) = sampler.map_into(&oc, &src, "t");
        assert!(map.is_total(&src, &target));
    }

    #[test]
    fn sizes_stay_within_the_bound() {
        let oc = finite_sets(3);
        let mut sampler = Sampler::new(11, 1);
        for tag in ["a", "b", "c", "d"] {
            let coll = sampler.collection(&oc, tag);
            for (_, elems) in coll.supported() {
                assert!(elems.len() <= 1);
            }
        }
    }
}
