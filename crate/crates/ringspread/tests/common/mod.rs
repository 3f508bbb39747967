//! Shared corpus for the property and acceptance suites: seeded random
//! states with a Gaussian-decaying coefficient envelope over |m| <= 8 —
//! small enough for closed-form cross-checks, rich enough to break
//! symmetries.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use ringspread::CircleState;

pub const CORPUS_SEED: u64 = 0x5eed_c19c;

pub fn random_state(rng: &mut ChaCha8Rng) -> CircleState {
    let coeffs: Vec<Complex64> = (-8i64..=8)
        .map(|m| {
            let envelope = (-(m as f64) * (m as f64) / 8.0).exp();
            Complex64::new(
                rng.gen_range(-1.0..1.0) * envelope,
                rng.gen_range(-1.0..1.0) * envelope,
            )
        })
        .collect();
    CircleState::normalized(-8, coeffs, None).expect("random state is non-degenerate")
}

pub fn random_corpus(count: usize) -> Vec<CircleState> {
    let mut rng = ChaCha8Rng::seed_from_u64(CORPUS_SEED);
    (0..count).map(|_| random_state(&mut rng)).collect()
}

/// Seeded φ₀ samples in [-π, π).
pub fn random_phi0s(count: usize, seed: u64) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| rng.gen_range(-std::f64::consts::PI..std::f64::consts::PI))
        .collect()
}
