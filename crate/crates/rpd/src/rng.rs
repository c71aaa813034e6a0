//! Seeded, portable random number generation.
//!
//! Every random choice in this crate flows through [`Rng`], the ChaCha
//! stream cipher with 8 rounds, seeded explicitly. Uniform and Gaussian
//! variates are derived from the raw 64-bit output stream by fixed
//! arithmetic (53-bit mantissa scaling, Box-Muller), so identical seeds
//! produce identical results on every platform.

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

/// The RNG used throughout the crate.
pub type Rng = ChaCha8Rng;

/// Creates the crate RNG from a 64-bit seed.
pub fn rng_from_seed(seed: u64) -> Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Derives an independent child seed from a master seed and a salt.
///
/// SplitMix64 finalizer applied to `master + GOLDEN * (salt + 1)`. Pure
/// integer arithmetic, so derivations are stable across platforms. Distinct
/// salts give decorrelated streams.
pub fn derive_seed(master: u64, salt: u64) -> u64 {
    let mut z = master.wrapping_add(0x9E37_79B9_7F4A_7C15u64.wrapping_mul(salt.wrapping_add(1)));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Uniform draw in `[0, 1)` built from the top 53 bits of one ChaCha word.
pub fn uniform_01(rng: &mut Rng) -> f64 {
    (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

/// Uniform integer in `[0, bound)` by rejection, bias-free.
pub fn uniform_below(rng: &mut Rng, bound: usize) -> usize {
    assert!(bound > 0, "uniform_below requires a positive bound");
    let bound = bound as u64;
    let zone = u64::MAX - (u64::MAX % bound);
    loop {
        let raw = rng.next_u64();
        if raw < zone {
            return (raw % bound) as usize;
        }
    }
}

/// One standard normal variate via the Box-Muller transform.
///
/// Consumes exactly two uniforms and discards the sine branch, which keeps
/// the function stateless.
pub fn standard_normal(rng: &mut Rng) -> f64 {
    let u1 = 1.0 - uniform_01(rng); // in (0, 1], so the log is finite
    let u2 = uniform_01(rng);
    (-2.0 * u1.ln()).sqrt() * (std::f64::consts::TAU * u2).cos()
}

/// Fills `out` with standard normal variates, consuming uniforms pairwise.
pub fn fill_standard_normal(rng: &mut Rng, out: &mut [f64]) {
    let mut i = 0;
    while i + 1 < out.len() {
        let u1 = 1.0 - uniform_01(rng);
        let u2 = uniform_01(rng);
        let r = (-2.0 * u1.ln()).sqrt();
        let theta = std::f64::consts::TAU * u2;
        out[i] = r * theta.cos();
        out[i + 1] = r * theta.sin();
        i += 2;
    }
    if i < out.len() {
        out[i] = standard_normal(rng);
    }
}

/// A uniformly random unit vector in `R^d` (normalized Gaussian).
pub fn unit_vector(rng: &mut Rng, d: usize) -> Vec<f64> {
    let mut v = vec![0.0; d];
    loop {
        fill_standard_normal(rng, &mut v);
        let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm > 1e-12 {
            for x in &mut v {
                *x /= norm;
            }
            return v;
        }
    }
}
