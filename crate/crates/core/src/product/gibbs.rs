use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::model::{softmax, MrfModel};
use super::SampleMatrix;
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Schedule of a systematic-scan Gibbs run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GibbsConfig {
    pub samples: usize,
    pub seed: u64,
    /// Sweeps discarded before the first kept sample.
    pub burn_in: usize,
    /// Sweeps between kept samples (at least 1).
    pub thin: usize,
}

/// Systematic-scan Gibbs sampler over coordinates `1..k` in order, starting
/// from a uniformly random configuration. Deterministic given the seed.
pub fn gibbs_sample<T: Scalar>(model: &MrfModel<T>, theta: &[T], cfg: GibbsConfig) -> Result<SampleMatrix<T>> {
    if cfg.samples == 0 {
        return Err(Error::Parameter("sample count must be positive".into()));
    }
    if cfg.thin == 0 {
        return Err(Error::Parameter("thinning interval must be at least 1".into()));
    }
    model.check_theta(theta)?;
    for (t, &(lo, hi)) in theta.iter().zip(model.parameter_box()) {
        if *t < lo || *t > hi {
            return Err(Error::Parameter(format!(
                "parameter {t} outside its box [{lo}, {hi}]"
            )));
        }
    }
    let space = model.space().clone();
    let k = space.k();
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut x: Vec<usize> = (0..k).map(|i| rng.gen_range(0..space.factor_size(i))).collect();
    let sweep = |x: &mut Vec<usize>, rng: &mut ChaCha8Rng| {
        for i in 0..k {
            let probs = softmax(&model.conditional_logits(x, i, theta));
            let u = T::lit(rng.gen::<f64>());
            let mut acc = T::zero();
            let mut v = probs.len() - 1;
            for (j, &p) in probs.iter().enumerate() {
                acc = acc + p;
                if u < acc {
                    v = j;
                    break;
                }
            }
            x[i] = v;
        }
    };
    for _ in 0..cfg.burn_in {
        sweep(&mut x, &mut rng);
    }
    let mut rows = Vec::with_capacity(cfg.samples);
    while rows.len() < cfg.samples {
        for _ in 0..cfg.thin {
            sweep(&mut x, &mut rng);
        }
        rows.push(x.clone());
    }
    SampleMatrix::new(space, rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::product::ProductSpace;

    fn cfg(samples: usize, seed: u64) -> GibbsConfig {
        GibbsConfig {
            samples,
            seed,
            burn_in: 100,
            thin: 1,
        }
    }

    #[test]
    fn uniform_model_means_are_one_half() {
        let m = MrfModel::<f64>::uniform(ProductSpace::binary(4).unwrap()).unwrap();
        let n = 10_000;
        let s = gibbs_sample(&m, &[], cfg(n, 42)).unwrap();
        let band = 3.0 * (0.25f64 / n as f64).sqrt();
        for i in 0..4 {
            let mean = s.rows().iter().map(|r| r[i] as f64).sum::<f64>() / n as f64;
            assert!((mean - 0.5).abs() <= band, "coordinate {i}: {mean}");
        }
    }

    #[test]
    fn deterministic_given_seed() {
        let m = MrfModel::ising_grid(2, 2, [(-1.0, 1.0), (-1.0, 1.0)]).unwrap();
        let a = gibbs_sample(&m, &[0.4, 0.1], cfg(500, 7)).unwrap();
        let b = gibbs_sample(&m, &[0.4, 0.1], cfg(500, 7)).unwrap();
        assert_eq!(a, b);
        let c = gibbs_sample(&m, &[0.4, 0.1], cfg(500, 8)).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn zero_coupling_gives_independent_coordinates() {
        let m = MrfModel::ising(2, &[(0, 1)], [(-1.0, 1.0), (-1.0, 1.0)]).unwrap();
        let n = 10_000;
        let s = gibbs_sample(&m, &[0.0, 0.0], cfg(n, 3)).unwrap();
        let xs: Vec<(f64, f64)> = s.rows().iter().map(|r| (r[0] as f64, r[1] as f64)).collect();
        let (mx, my) = (
            xs.iter().map(|p| p.0).sum::<f64>() / n as f64,
            xs.iter().map(|p| p.1).sum::<f64>() / n as f64,
        );
        let cov = xs.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum::<f64>() / n as f64;
        let sd = (xs.iter().map(|p| (p.0 - mx).powi(2)).sum::<f64>() / n as f64).sqrt()
            * (xs.iter().map(|p| (p.1 - my).powi(2)).sum::<f64>() / n as f64).sqrt();
        assert!((cov / sd).abs() <= 3.0 / (n as f64).sqrt());
    }

    #[test]
    fn parameter_errors() {
        let m = MrfModel::ising(2, &[(0, 1)], [(-1.0, 1.0), (-1.0, 1.0)]).unwrap();
        assert!(matches!(gibbs_sample(&m, &[0.0, 0.0], cfg(0, 1)), Err(Error::Parameter(_))));
        assert!(gibbs_sample(&m, &[2.0, 0.0], cfg(10, 1)).is_err());
        let mut c = cfg(10, 1);
        c.thin = 0;
        assert!(gibbs_sample(&m, &[0.0, 0.0], c).is_err());
    }
}
