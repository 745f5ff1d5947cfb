//! Shared fixtures for the benchmarks.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thetagrad_core::numeric::Precision;
use thetagrad_core::{SiegelPoint, ThetaEvaluator};

pub const SEED: u64 = 20_240_601;

/// Seeded points with `Im τ ≥ 0.3`.
pub fn points(count: usize) -> Vec<SiegelPoint> {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    (0..count).map(|_| SiegelPoint::random(&mut rng, 0.3)).collect()
}

pub fn evaluator(eps: f64, precision: Precision) -> ThetaEvaluator {
    ThetaEvaluator::new(eps, precision).expect("valid evaluator settings")
}
