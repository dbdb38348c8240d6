//! Shared fixtures for the criterion benches.

use gslrel::sample::{ModelSpec, SampledSpace, Sampler};
use gslrel::{CanRel, Word};

pub fn sampler(model: ModelSpec, seed: u64) -> Sampler {
    Sampler::new(model, seed, 0)
}

/// A pair of composable relations over the given model.
pub fn composable_pair(model: ModelSpec, seed: u64) -> (CanRel, CanRel) {
    let mut s = sampler(model, seed);
    let x = s.space(2);
    let y = s.space(2);
    let z = s.space(2);
    (s.relation(&x, &y), s.relation(&y, &z))
}

/// A word of the given length over the model.
pub fn word(model: ModelSpec, len: usize, seed: u64) -> Word {
    let mut s = sampler(model, seed);
    s.word(len, 2).1
}

/// A sampled space, exposed for normal-form benches.
pub fn space(model: ModelSpec, seed: u64) -> SampledSpace {
    let mut s = sampler(model, seed);
    s.space(2)
}
