use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::product::{conditional_score_unchecked, Component, MrfModel, SampleMatrix};
use crate::scalar::{stable_sum, Scalar};

const MAX_CYCLES: usize = 500;

/// Outcome of [`fit_mrf`].
#[derive(Debug, Clone, PartialEq)]
pub struct FitResult<T> {
    pub theta: Vec<T>,
    /// Total empirical score at `theta`.
    pub objective: T,
    /// Completed coordinate cycles.
    pub iterations: usize,
    pub converged: bool,
    /// Objective improvement over the last cycle; at most the tolerance when converged.
    pub gap: T,
    /// `(θ, objective)` at the starting point and after every cycle.
    pub trace: Vec<(Vec<T>, T)>,
}

/// `Σ_r w_r Σ_i S_i(x_{r,i}, p_θ(· | x_r^{∖i}))` over distinct rows. Rows are
/// scored in parallel and summed in row order, so the result does not depend
/// on the thread count.
pub fn total_score<T: Scalar>(
    model: &MrfModel<T>,
    tally: &[(Vec<usize>, T)],
    theta: &[T],
    component: &Component<T>,
) -> T {
    let terms: Vec<T> = tally
        .par_iter()
        .map(|(x, w)| *w * conditional_score_unchecked(model, x, theta, component))
        .collect();
    stable_sum(terms)
}

fn check_box<T: Scalar>(parameter_box: &[(T, T)], dim: usize) -> Result<()> {
    if parameter_box.len() != dim {
        return Err(Error::Parameter(format!(
            "box has {} intervals for {dim} parameters",
            parameter_box.len()
        )));
    }
    for (j, &(lo, hi)) in parameter_box.iter().enumerate() {
        if !(lo.is_finite() && hi.is_finite()) || lo > hi {
            return Err(Error::Parameter(format!(
                "interval {j} of the box is [{lo}, {hi}]"
            )));
        }
    }
    if parameter_box.iter().all(|&(lo, hi)| lo == hi) {
        return Err(Error::Parameter("box has no free coordinate".into()));
    }
    Ok(())
}

/// Minimizes `φ` on `[lo, hi]` by golden section, returning the best point seen.
fn golden_section<T: Scalar>(mut lo: T, mut hi: T, mut phi: impl FnMut(T) -> T) -> (T, T) {
    let r = (T::lit(5.0).sqrt() - T::one()) / T::lit(2.0);
    let width_tol = T::epsilon().sqrt() * (T::one() + lo.abs().max(hi.abs()));
    let mut c = hi - r * (hi - lo);
    let mut d = lo + r * (hi - lo);
    let (mut fc, mut fd) = (phi(c), phi(d));
    while hi - lo > width_tol {
        if fc < fd {
            hi = d;
            d = c;
            fd = fc;
            c = hi - r * (hi - lo);
            fc = phi(c);
        } else {
            lo = c;
            c = d;
            fc = fd;
            d = lo + r * (hi - lo);
            fd = phi(d);
        }
    }
    let mut best = if fc < fd { (c, fc) } else { (d, fd) };
    for t in [lo, hi] {
        let f = phi(t);
        if f < best.1 {
            best = (t, f);
        }
    }
    best
}

/// Minimum total conditional score over an axis-aligned box, by cyclic
/// coordinate descent with golden-section line searches. Coordinates with a
/// zero-width interval stay pinned. A cycle only accepts strict improvements,
/// so the trace is non-increasing; iteration stops once a cycle improves the
/// objective by at most `tol`.
pub fn fit_mrf<T: Scalar>(
    model: &MrfModel<T>,
    data: &SampleMatrix<T>,
    component: &Component<T>,
    parameter_box: &[(T, T)],
    tol: T,
) -> Result<FitResult<T>> {
    check_box(parameter_box, model.parameter_dim())?;
    if !(tol >= T::zero() && tol.is_finite()) {
        return Err(Error::Parameter(format!("tolerance must be >= 0, got {tol}")));
    }
    if data.space() != model.space() {
        return Err(Error::Data("samples and model live on different product spaces".into()));
    }
    if matches!(component, Component::Brier) && !model.space().is_binary() {
        return Err(Error::Domain("ratio matching needs every coordinate to be binary".into()));
    }
    let tally = data.tally();
    if tally.is_empty() || stable_sum(tally.iter().map(|(_, w)| *w)) <= T::zero() {
        return Err(Error::Data("no samples to fit".into()));
    }

    let mut theta: Vec<T> = parameter_box.iter().map(|&(lo, hi)| T::zero().max(lo).min(hi)).collect();
    let mut objective = total_score(model, &tally, &theta, component);
    let mut trace = vec![(theta.clone(), objective)];
    let mut converged = false;
    let mut gap = T::infinity();
    let mut iterations = 0;
    while iterations < MAX_CYCLES {
        let start = objective;
        for (j, &(lo, hi)) in parameter_box.iter().enumerate() {
            if lo == hi {
                continue;
            }
            let mut probe = theta.clone();
            let (t, f) = golden_section(lo, hi, |t| {
                probe[j] = t;
                total_score(model, &tally, &probe, component)
            });
            if f < objective {
                theta[j] = t;
                objective = f;
            }
        }
        iterations += 1;
        trace.push((theta.clone(), objective));
        gap = start - objective;
        if gap <= tol {
            converged = true;
            break;
        }
    }
    Ok(FitResult {
        theta,
        objective,
        iterations,
        converged,
        gap,
        trace,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cycle_fit(component: Component<f64>) -> FitResult<f64> {
        let model = MrfModel::ising_cycle(4, [(-2.0, 2.0), (-2.0, 2.0)]).unwrap();
        let joint = model.joint(&[0.5, -0.2]).unwrap();
        let data = SampleMatrix::from_joint(model.space().clone(), &joint).unwrap();
        fit_mrf(&model, &data, &component, model.parameter_box(), 1e-15).unwrap()
    }

    #[test]
    fn recovers_parameters_from_exact_joint() {
        for component in [Component::Log, Component::Brier] {
            let fit = cycle_fit(component);
            assert!(fit.converged);
            assert!((fit.theta[0] - 0.5).abs() < 1e-4, "{:?}", fit.theta);
            assert!((fit.theta[1] + 0.2).abs() < 1e-4, "{:?}", fit.theta);
            assert!(fit.trace.windows(2).all(|w| w[1].1 <= w[0].1));
            assert!(fit.gap <= 1e-15);
        }
    }

    #[test]
    fn fitted_point_is_a_box_local_minimum() {
        let model = MrfModel::ising_cycle(4, [(-2.0, 2.0), (-2.0, 2.0)]).unwrap();
        let joint = model.joint(&[0.5, -0.2]).unwrap();
        let data = SampleMatrix::from_joint(model.space().clone(), &joint).unwrap();
        let tally = data.tally();
        let fit = fit_mrf(&model, &data, &Component::Log, model.parameter_box(), 1e-15).unwrap();
        for j in 0..2 {
            for s in [-1e-3, 1e-3] {
                let mut t = fit.theta.clone();
                t[j] += s;
                assert!(total_score(&model, &tally, &t, &Component::Log) >= fit.objective - 1e-12);
            }
        }
    }

    #[test]
    fn pinned_coordinate_stays_fixed() {
        let model = MrfModel::ising_cycle(4, [(-2.0, 2.0), (-2.0, 2.0)]).unwrap();
        let joint = model.joint(&[0.5, -0.2]).unwrap();
        let data = SampleMatrix::from_joint(model.space().clone(), &joint).unwrap();
        let fit = fit_mrf(&model, &data, &Component::Log, &[(-2.0f64, 2.0), (-0.2, -0.2)], 1e-15).unwrap();
        assert_eq!(fit.theta[1], -0.2);
        assert!((fit.theta[0] - 0.5).abs() < 1e-5);
    }

    #[test]
    fn symmetric_data_gives_zero_interaction() {
        let model = MrfModel::ising_cycle(4, [(-2.0f64, 2.0), (-2.0, 2.0)]).unwrap();
        let joint = model.joint(&[0.0, 0.0]).unwrap();
        let data = SampleMatrix::from_joint(model.space().clone(), &joint).unwrap();
        let fit = fit_mrf(&model, &data, &Component::Log, &[(-2.0, 2.0), (0.0, 0.0)], 1e-15).unwrap();
        assert!(fit.theta[0].abs() < 1e-6, "{:?}", fit.theta);
    }

    #[test]
    fn box_and_data_errors() {
        let model = MrfModel::ising_cycle(4, [(-2.0, 2.0), (-2.0, 2.0)]).unwrap();
        let data = SampleMatrix::new(model.space().clone(), vec![vec![0, 1, 0, 1]]).unwrap();
        for bad in [vec![(1.0, 0.0), (0.0, 1.0)], vec![(0.0, 0.0), (1.0, 1.0)], vec![(0.0, 1.0)]] {
            assert!(matches!(fit_mrf(&model, &data, &Component::Log, &bad, 1e-12), Err(Error::Parameter(_))));
        }
        let empty = SampleMatrix::new(model.space().clone(), vec![]).unwrap();
        assert!(matches!(
            fit_mrf(&model, &empty, &Component::Log, model.parameter_box(), 1e-12),
            Err(Error::Data(_))
        ));
    }
}
