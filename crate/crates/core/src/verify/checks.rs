use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::fd::{central_partial, fd_gradient, FD_GRADIENT_STEP, FD_STEP};
use super::probes::random_weights;
use super::{to_f64s, CheckReport, ViolationLog, Witness};
use crate::error::{Error, Result};
use crate::scalar::{stable_sum, Scalar};
use crate::scoring::{EntropyFunction, ScoringRule};
use crate::space::NeighborhoodSystem;

/// Largest outcome space accepted by the grid properness check.
pub const MAX_GRID_OUTCOMES: usize = 4;

const HOMOGENEITY_TOL: f64 = 1e-6;
const LOCALITY_TOL: f64 = 1e-12;
const SUPERGRADIENT_TOL: f64 = 1e-9;
const DERIVATIVE_TOL: f64 = 1e-5;
const SCALINGS: [f64; 4] = [1e-3, 0.5, 2.0, 1e3];

/// Interior points of the simplex on `n` outcomes whose coordinates are
/// positive multiples of `1/k`, in lexicographic order.
pub fn simplex_grid<T: Scalar>(n: usize, k: usize) -> Vec<Vec<T>> {
    fn rec(n: usize, left: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if n == 1 {
            if left >= 1 {
                cur.push(left);
                out.push(cur.clone());
                cur.pop();
            }
            return;
        }
        for c in 1..left {
            cur.push(c);
            rec(n - 1, left - c, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(n, k, &mut Vec::with_capacity(n), &mut out);
    let kf = T::from_usize_lossy(k);
    out.into_iter()
        .map(|c| c.into_iter().map(|v| T::from_usize_lossy(v) / kf).collect())
        .collect()
}

/// Brute-force properness: for every interior grid `p`, `S(p, q) ≥ S(p, p) - tolerance`
/// over every grid `q`. The violation recorded is `S(p, p) - S(p, q)`.
pub fn check_properness<T: Scalar>(
    rule: &ScoringRule<T>,
    grid_step: f64,
    tolerance: f64,
) -> Result<CheckReport> {
    let n = rule.space().size();
    if n > MAX_GRID_OUTCOMES {
        return Err(Error::Capacity {
            what: "properness grid outcome space",
            size: n,
            limit: MAX_GRID_OUTCOMES,
        });
    }
    if !(grid_step > 0.0 && grid_step < 1.0) {
        return Err(Error::Parameter(format!("grid step must lie in (0, 1), got {grid_step}")));
    }
    let k = (1.0 / grid_step).round() as usize;
    if ((k as f64) * grid_step - 1.0).abs() > 1e-9 {
        return Err(Error::Parameter(format!(
            "grid step {grid_step} does not divide 1"
        )));
    }
    let grid: Vec<Vec<T>> = simplex_grid(n, k);
    // scores[q][x] = S(x, q)
    let scores: Vec<Vec<T>> = grid.iter().map(|q| rule.scores(q)).collect();
    let expected = |p: &[T], sq: &[T]| stable_sum(p.iter().zip(sq).map(|(&a, &b)| a * b));
    let logs: Vec<ViolationLog> = grid
        .par_iter()
        .enumerate()
        .map(|(i, p)| {
            let h = expected(p, &scores[i]);
            let mut log = ViolationLog::new();
            for (q, sq) in grid.iter().zip(&scores) {
                let s = expected(p, sq);
                log.record((h - s).as_f64(), tolerance, || Witness {
                    input: to_f64s(p).into_iter().chain(to_f64s(q)).collect(),
                    observed: s.as_f64(),
                    expected: h.as_f64(),
                });
            }
            log
        })
        .collect();
    let log = logs
        .into_iter()
        .fold(ViolationLog::new(), |acc, l| acc.merge(l, tolerance));
    Ok(log.finish(format!("properness[{}]", rule.name()), tolerance))
}

fn rel(diff: f64, scale: f64) -> f64 {
    diff.abs() / scale.abs().max(1.0)
}

/// Scaling test `f(λα) = λ^h f(α)` for `λ ∈ {1e-3, 0.5, 2, 1e3}` and Euler's
/// identity `Σ_x α_x ∂f/∂α_x = h f(α)` by central differences, both within
/// `1e-6` relative, on `samples` random positive points of dimension `dim`.
pub fn check_homogeneity<T, F>(
    name: &str,
    f: F,
    dim: usize,
    order: i32,
    samples: usize,
    seed: u64,
) -> CheckReport
where
    T: Scalar,
    F: Fn(&[T]) -> T,
{
    let mut log = ViolationLog::new();
    let h = T::from_i32(order).expect("small integer");
    for a in random_weights::<T>(dim, samples, seed) {
        let fa = f(&a);
        for &lambda in &SCALINGS {
            let l = T::lit(lambda);
            let scaled: Vec<T> = a.iter().map(|&v| v * l).collect();
            let got = f(&scaled);
            let want = l.powi(order) * fa;
            log.record(rel((got - want).as_f64(), want.as_f64()), HOMOGENEITY_TOL, || Witness {
                input: to_f64s(&scaled),
                observed: got.as_f64(),
                expected: want.as_f64(),
            });
        }
        let grad = fd_gradient(&f, &a, FD_STEP);
        let terms: Vec<T> = a.iter().zip(&grad).map(|(&x, &g)| x * g).collect();
        let euler = stable_sum(terms.iter().copied());
        let scale = terms
            .iter()
            .fold(fa.abs(), |m, t| m.max(t.abs()))
            .as_f64();
        log.record(rel((euler - h * fa).as_f64(), scale), HOMOGENEITY_TOL, || Witness {
            input: to_f64s(&a),
            observed: euler.as_f64(),
            expected: (h * fa).as_f64(),
        });
    }
    log.finish(format!("homogeneity[{name}, order {order}]"), HOMOGENEITY_TOL)
}

/// Order-0 homogeneity of every score component `α ↦ S(x, α)`.
pub fn check_rule_homogeneity<T: Scalar>(rule: &ScoringRule<T>, samples: usize, seed: u64) -> CheckReport {
    let n = rule.space().size();
    let mut log = ViolationLog::new();
    for x in 0..n {
        let r = check_homogeneity(
            rule.name(),
            |a: &[T]| rule.score_raw(x, a),
            n,
            0,
            samples.div_ceil(n),
            seed.wrapping_add(x as u64),
        );
        let mut part = ViolationLog::new();
        part.max = r.max_violation;
        part.witnesses = r
            .witnesses
            .into_iter()
            .map(|w| (rel(w.observed - w.expected, w.expected), w))
            .collect();
        log = log.merge(part, HOMOGENEITY_TOL);
    }
    log.finish(format!("homogeneity[{}, order 0]", rule.name()), HOMOGENEITY_TOL)
}

/// Perturbs every weight outside `N_x` by random factors and checks that
/// `S(x, ·)` does not move (tolerance `1e-12` relative).
pub fn check_locality<T: Scalar>(
    rule: &ScoringRule<T>,
    ns: &NeighborhoodSystem,
    trials: usize,
    seed: u64,
) -> Result<CheckReport> {
    let n = rule.space().size();
    if ns.space().size() != n {
        return Err(Error::Domain(format!(
            "neighborhood system has {} outcomes, rule has {n}",
            ns.space().size()
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut log = ViolationLog::new();
    let bases = random_weights::<T>(n, trials, seed ^ 0x9e37_79b9_7f4a_7c15);
    for (t, a) in bases.into_iter().enumerate() {
        let x = t % n;
        let base = rule.score_raw(x, &a);
        let mut b = a.clone();
        for (y, v) in b.iter_mut().enumerate() {
            if !ns.neighborhood(x).contains(&y) {
                *v = *v * T::lit(rng.gen_range(-1.5f64..1.5).exp());
            }
        }
        let moved = rule.score_raw(x, &b);
        let mut input = vec![x as f64];
        input.extend(to_f64s(&b));
        log.record(
            (moved - base).abs().as_f64() / (1.0 + base.abs().as_f64()),
            LOCALITY_TOL,
            || Witness {
                input,
                observed: moved.as_f64(),
                expected: base.as_f64(),
            },
        );
    }
    Ok(log.finish(format!("locality[{}]", rule.name()), LOCALITY_TOL))
}

/// `Σ_x β_x S(x, α) ≥ H(β)` and `Σ_x α_x S(x, α) = H(α)`, within `1e-9` relative,
/// on random positive pairs `(α, β)`.
pub fn check_supergradient<T: Scalar>(
    h: &EntropyFunction<T>,
    rule: &ScoringRule<T>,
    samples: usize,
    seed: u64,
) -> CheckReport {
    let n = rule.space().size();
    let alphas = random_weights::<T>(n, samples, seed);
    let betas = random_weights::<T>(n, samples, seed.wrapping_add(0x5851_f42d));
    let mut log = ViolationLog::new();
    for (a, b) in alphas.iter().zip(&betas) {
        let s = rule.scores(a);
        let hb = h.value(b);
        let tangent = stable_sum(b.iter().zip(&s).map(|(&x, &y)| x * y));
        log.record(
            (hb - tangent).as_f64() / (1.0 + hb.abs().as_f64()),
            SUPERGRADIENT_TOL,
            || Witness {
                input: to_f64s(a).into_iter().chain(to_f64s(b)).collect(),
                observed: tangent.as_f64(),
                expected: hb.as_f64(),
            },
        );
        let ha = h.value(a);
        let euler = stable_sum(a.iter().zip(&s).map(|(&x, &y)| x * y));
        log.record(
            (euler - ha).abs().as_f64() / (1.0 + ha.abs().as_f64()),
            SUPERGRADIENT_TOL,
            || Witness {
                input: to_f64s(a),
                observed: euler.as_f64(),
                expected: ha.as_f64(),
            },
        );
    }
    log.finish(format!("supergradient[{}]", rule.name()), SUPERGRADIENT_TOL)
}

/// Symmetry `∂S(x, α)/∂α_y = ∂S(y, α)/∂α_x` by central differences, within `1e-5` relative.
pub fn check_mixed_partials<T: Scalar>(rule: &ScoringRule<T>, samples: usize, seed: u64) -> CheckReport {
    let n = rule.space().size();
    let mut log = ViolationLog::new();
    for a in random_weights::<T>(n, samples, seed) {
        let jac: Vec<Vec<T>> = (0..n)
            .map(|x| fd_gradient(|v: &[T]| rule.score_raw(x, v), &a, FD_STEP))
            .collect();
        for (x, row) in jac.iter().enumerate() {
            for (y, col) in jac.iter().enumerate().skip(x + 1) {
                let (dxy, dyx) = (row[y].as_f64(), col[x].as_f64());
                log.record(rel(dxy - dyx, dxy.abs().max(dyx.abs())), DERIVATIVE_TOL, || Witness {
                    input: to_f64s(&a),
                    observed: dxy,
                    expected: dyx,
                });
            }
        }
    }
    log.finish(format!("mixed-partials[{}]", rule.name()), DERIVATIVE_TOL)
}

/// Finite-difference gradient of `H` against the rule's scores, within `1e-5` relative.
pub fn check_entropy_gradient<T: Scalar>(
    h: &EntropyFunction<T>,
    rule: &ScoringRule<T>,
    samples: usize,
    seed: u64,
) -> CheckReport {
    let n = rule.space().size();
    let mut log = ViolationLog::new();
    for a in random_weights::<T>(n, samples, seed) {
        for x in 0..n {
            let fd = central_partial(|v: &[T]| h.value(v), &a, x, FD_GRADIENT_STEP).as_f64();
            let s = rule.score_raw(x, &a).as_f64();
            log.record(rel(fd - s, s), DERIVATIVE_TOL, || Witness {
                input: to_f64s(&a),
                observed: s,
                expected: fd,
            });
        }
    }
    log.finish(format!("entropy-gradient[{}]", rule.name()), DERIVATIVE_TOL)
}
