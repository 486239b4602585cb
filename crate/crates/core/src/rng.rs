//! Seeded random streams.
//!
//! Every random draw in the crate goes through [`make_rng`], which returns a
//! ChaCha8 stream keyed by a 64-bit seed. ChaCha8 is a fixed, published
//! counter-based generator, so a given seed produces the same stream on every
//! platform and every run. Uniform reals are built from the top 53 bits of a
//! `u64` draw and Gaussians use the ziggurat sampler of `rand_distr`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

pub type SolverRng = ChaCha8Rng;

pub fn make_rng(seed: u64) -> SolverRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Draw from U[lo, hi).
#[inline]
pub fn uniform(rng: &mut SolverRng, lo: f64, hi: f64) -> f64 {
    lo + (hi - lo) * rng.random::<f64>()
}

#[inline]
pub fn standard_normal(rng: &mut SolverRng) -> f64 {
    rng.sample(StandardNormal)
}
