use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::scalar::Scalar;

/// Per-coordinate lower bound of random simplex probes.
pub const PROBE_FLOOR: f64 = 0.02;

/// `count` interior distributions on `n` outcomes with every entry at least
/// [`PROBE_FLOOR`], reproducible from `seed`.
pub fn simplex_probes<T: Scalar>(n: usize, count: usize, seed: u64) -> Vec<Vec<T>> {
    assert!(
        (n as f64) * PROBE_FLOOR < 1.0,
        "too many outcomes for the probe floor"
    );
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let free = 1.0 - n as f64 * PROBE_FLOOR;
    (0..count)
        .map(|_| {
            // uniform on the simplex via normalized exponentials
            let e: Vec<f64> = (0..n).map(|_| -rng.gen::<f64>().max(1e-300).ln()).collect();
            let s: f64 = e.iter().sum();
            let p: Vec<f64> = e.iter().map(|v| PROBE_FLOOR + free * v / s).collect();
            let total: f64 = p.iter().sum();
            p.iter().map(|v| T::lit(v / total)).collect()
        })
        .collect()
}

/// Random positive weights, log-uniform in `[0.05, 20]`.
pub fn random_weights<T: Scalar>(n: usize, count: usize, seed: u64) -> Vec<Vec<T>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (lo, hi) = (0.05f64.ln(), 20f64.ln());
    (0..count)
        .map(|_| (0..n).map(|_| T::lit(rng.gen_range(lo..hi).exp())).collect())
        .collect()
}
