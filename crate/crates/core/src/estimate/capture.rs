use super::FrequencyTable;
use crate::error::{Error, Result};
use crate::scalar::Scalar;

const MLE_MAX_ITERATIONS: usize = 200;

/// Zero-truncated capture counts: `f_y` units caught exactly `y ≥ 1` times,
/// `c` catches in total.
#[derive(Debug, Clone, PartialEq)]
pub struct CaptureRecaptureData<T> {
    catches: T,
    counts: FrequencyTable<T>,
}

impl<T: Scalar> CaptureRecaptureData<T> {
    /// Checks `c = Σ_y y f_y` up to a relative `1e-9` and that no units are
    /// recorded at `y = 0`.
    pub fn new(catches: T, counts: FrequencyTable<T>) -> Result<Self> {
        if counts.get(0) > T::zero() {
            return Err(Error::Data("units with zero catches are unobservable".into()));
        }
        if counts.n_total() <= T::zero() {
            return Err(Error::Data("no units were caught".into()));
        }
        let sum = counts.sum_total();
        if !(catches.is_finite() && (catches - sum).abs() <= T::lit(1e-9) * sum.max(T::one())) {
            return Err(Error::Data(format!(
                "catch total {catches} does not equal Σ y f_y = {sum}"
            )));
        }
        Ok(Self { catches, counts })
    }

    pub fn from_counts(counts: FrequencyTable<T>) -> Result<Self> {
        Self::new(counts.sum_total(), counts)
    }

    pub fn catches(&self) -> T {
        self.catches
    }

    pub fn counts(&self) -> &FrequencyTable<T> {
        &self.counts
    }

    /// Number of distinct units caught.
    pub fn units(&self) -> T {
        self.counts.n_total()
    }
}

/// Poisson rate and population size `N̂ = n / (1 - e^{-θ})`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PopulationEstimate<T> {
    pub theta: T,
    /// `None` when `θ = 0`.
    pub population: Option<T>,
}

impl<T: Scalar> PopulationEstimate<T> {
    fn from_rate(theta: T, n: T) -> Self {
        let population = (theta > T::zero()).then(|| n / -(-theta).exp_m1());
        Self { theta, population }
    }
}

/// `θ̃ = (c - f_1)/n`.
pub fn capture_recapture_score_estimate<T: Scalar>(d: &CaptureRecaptureData<T>) -> Result<PopulationEstimate<T>> {
    let n = d.units();
    let theta = (d.catches - d.counts.get(1)) / n;
    if theta <= T::zero() {
        return Err(Error::Degenerate(
            "every unit was caught exactly once; the population size is unidentified".into(),
        ));
    }
    Ok(PopulationEstimate::from_rate(theta, n))
}

/// `θ̌ = 2 f_2 / f_1`.
pub fn zelterman_estimate<T: Scalar>(d: &CaptureRecaptureData<T>) -> Result<PopulationEstimate<T>> {
    let f1 = d.counts.get(1);
    if f1 <= T::zero() {
        return Err(Error::Data("no units caught exactly once".into()));
    }
    let theta = T::lit(2.0) * d.counts.get(2) / f1;
    Ok(PopulationEstimate::from_rate(theta, d.units()))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MleResult<T> {
    pub estimate: PopulationEstimate<T>,
    /// `g(θ̂) = nθ̂ - c (1 - e^{-θ̂})`.
    pub residual: T,
    pub iterations: usize,
}

/// Truncated-Poisson maximum likelihood: the positive root of the score
/// equation `g(θ) = nθ - c (1 - e^{-θ})`, equivalently `θ = (c - c e^{-θ})/n`,
/// found by Newton steps kept inside the bracket `(0, c/n + 1]`. Stops when
/// `|g| ≤ tol · n`.
pub fn truncated_poisson_mle<T: Scalar>(d: &CaptureRecaptureData<T>, tol: T) -> Result<MleResult<T>> {
    if !(tol > T::zero() && tol.is_finite()) {
        return Err(Error::Parameter(format!("tolerance must be positive, got {tol}")));
    }
    let n = d.units();
    let c = d.catches;
    let mean = c / n;
    if mean <= T::one() {
        return Err(Error::NoRoot(
            "mean catch count is 1; the likelihood increases towards θ = 0".into(),
        ));
    }
    let g = |t: T| n * t + c * (-t).exp_m1();
    let dg = |t: T| n - c * (-t).exp();
    let done = |theta: T, v: T, iterations: usize| MleResult {
        estimate: PopulationEstimate::from_rate(theta, n),
        residual: v,
        iterations,
    };
    let (mut lo, mut hi) = (T::zero(), mean + T::one());
    let mut theta = mean;
    for it in 0..MLE_MAX_ITERATIONS {
        let v = g(theta);
        if v.abs() <= tol * n {
            return Ok(done(theta, v, it));
        }
        // g is convex with g(0) = 0 and g'(0) = n - c < 0
        if v > T::zero() {
            hi = theta;
        } else {
            lo = theta;
        }
        let step = theta - v / dg(theta);
        theta = if step > lo && step < hi {
            step
        } else {
            T::lit(0.5) * (lo + hi)
        };
        if hi - lo <= T::epsilon() * hi {
            break;
        }
    }
    let v = g(theta);
    if v.abs() <= tol * n {
        return Ok(done(theta, v, MLE_MAX_ITERATIONS));
    }
    Err(Error::NoRoot(format!(
        "Newton iteration stalled at θ = {theta} with g = {v}; tolerance {tol} is below attainable precision"
    )))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    fn data(c: &[(u64, f64)]) -> CaptureRecaptureData<f64> {
        CaptureRecaptureData::from_counts(FrequencyTable::new(c.iter().copied()).unwrap()).unwrap()
    }

    #[test]
    fn validation() {
        let ft = FrequencyTable::new([(1, 3.0), (2, 1.0)]).unwrap();
        assert!(CaptureRecaptureData::new(5.0, ft.clone()).is_ok());
        assert!(matches!(CaptureRecaptureData::new(6.0, ft), Err(Error::Data(_))));
        let zero = FrequencyTable::new([(0, 1.0), (1, 3.0)]).unwrap();
        assert!(CaptureRecaptureData::from_counts(zero).is_err());
    }

    #[test]
    fn worked_example() {
        let d = data(&[(1, 40.0), (2, 18.0), (3, 8.0)]);
        let n = 66.0;
        let s = capture_recapture_score_estimate(&d).unwrap();
        assert_relative_eq!(s.theta, 60.0 / 66.0, epsilon = 1e-15);
        assert_relative_eq!(s.population.unwrap(), n / (1.0 - (-60.0f64 / 66.0).exp()), epsilon = 1e-12);
        let z = zelterman_estimate(&d).unwrap();
        assert_relative_eq!(z.theta, 0.9, epsilon = 1e-15);
        let m = truncated_poisson_mle(&d, 1e-12).unwrap();
        let t = m.estimate.theta;
        assert!((n * t - 100.0 * (1.0 - (-t).exp())).abs() <= 1e-10);
        assert_relative_eq!(t, m.estimate.theta);
    }

    #[test]
    fn degenerate_cases() {
        let ones = data(&[(1, 5.0)]);
        assert!(matches!(capture_recapture_score_estimate(&ones), Err(Error::Degenerate(_))));
        assert!(matches!(truncated_poisson_mle(&ones, 1e-12), Err(Error::NoRoot(_))));
        let z = zelterman_estimate(&ones).unwrap();
        assert_eq!(z.theta, 0.0);
        assert!(z.population.is_none());
        assert!(matches!(zelterman_estimate(&data(&[(2, 5.0)])), Err(Error::Data(_))));
    }

    #[test]
    fn mle_recovers_rate_from_expected_counts() {
        let theta0 = 1.2f64;
        let mut p = vec![0.0; 31];
        p[0] = (-theta0).exp();
        for y in 1..=30 {
            p[y] = p[y - 1] * theta0 / y as f64;
        }
        let d = data(&(1..=30).map(|y| (y as u64, 1000.0 * p[y])).collect::<Vec<_>>());
        let m = truncated_poisson_mle(&d, 1e-12).unwrap();
        assert!((m.estimate.theta - theta0).abs() < 1e-9, "{m:?}");
    }

    proptest! {
        #[test]
        fn mle_residual_small(f in proptest::collection::vec(0u32..40, 2..6)) {
            let counts: Vec<(u64, f64)> = f.iter().enumerate().map(|(i, &v)| (i as u64 + 1, v as f64)).collect();
            let ft = FrequencyTable::new(counts).unwrap();
            prop_assume!(ft.n_total() > 0.0 && ft.sum_total() > ft.n_total());
            let d = CaptureRecaptureData::from_counts(ft).unwrap();
            let m = truncated_poisson_mle(&d, 1e-12).unwrap();
            prop_assert!(m.residual.abs() <= 1e-12 * d.units());
            prop_assert!(m.estimate.theta > 0.0 && m.estimate.theta <= d.catches() / d.units() + 1.0);
        }
    }
}
