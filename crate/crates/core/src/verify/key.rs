use super::fd::FD_STEP;
use super::{to_f64s, CheckReport, ViolationLog, Witness};
use crate::scalar::{stable_sum, Scalar};
use crate::scoring::ScoringRule;

const KEY_TOL: f64 = 1e-5;

/// How a rule relates to the stationarity condition `Σ_x p_x ∂S(x,p)/∂p_y = -λ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum KeyClass {
    /// `λ = 0`: the key equation holds.
    Key,
    /// A common nonzero `λ` across all probes and coordinates.
    ProperWithLambda(f64),
    /// No common offset.
    Neither,
}

#[derive(Debug, Clone, PartialEq)]
pub struct KeyEquationReport {
    pub report: CheckReport,
    pub class: KeyClass,
    /// Estimated `λ(p)` per probe.
    pub lambdas: Vec<f64>,
    /// `Σ_x p_x ∂S(x,p)/∂p_y` per probe and coordinate.
    pub values: Vec<Vec<f64>>,
    /// Derivative sums along the simplex-preserving exchange directions
    /// `e_y - e_r` (`r` the largest coordinate of the probe), per probe and `y`.
    pub exchange: Vec<Vec<f64>>,
}

/// Central-difference evaluation of `Σ_x p_x ∂S(x, p)/∂p_y` at each probe.
///
/// The derivative of the evaluator is taken coordinatewise, so the common
/// offset `λ(p) = -mean_y Σ_x p_x ∂S(x,p)/∂p_y` is reported alongside the
/// exchange derivatives, which stay on the simplex and vanish for any proper
/// rule. The rule is classified as [`KeyClass::Key`] when every value is zero
/// within `1e-5` and as [`KeyClass::ProperWithLambda`] when all values agree
/// within `1e-5` across probes and coordinates.
pub fn check_key_equation<T: Scalar>(rule: &ScoringRule<T>, probes: &[Vec<T>]) -> KeyEquationReport {
    let n = rule.space().size();
    let mut values = Vec::with_capacity(probes.len());
    let mut scales = Vec::with_capacity(probes.len());
    for p in probes {
        let mut row = Vec::with_capacity(n);
        let mut scale_row = Vec::with_capacity(n);
        for y in 0..n {
            let h = T::lit(FD_STEP) * p[y];
            let mut up = p.clone();
            let mut dn = p.clone();
            up[y] = p[y] + h;
            dn[y] = p[y] - h;
            let step = up[y] - dn[y];
            let terms: Vec<T> = (0..n)
                .map(|x| p[x] * (rule.score_raw(x, &up) - rule.score_raw(x, &dn)) / step)
                .collect();
            scale_row.push(terms.iter().fold(1.0f64, |m, t| m.max(t.abs().as_f64())));
            row.push(stable_sum(terms).as_f64());
        }
        values.push(row);
        scales.push(scale_row);
    }

    let exchange: Vec<Vec<f64>> = probes
        .iter()
        .zip(&values)
        .map(|(p, row)| {
            let r = (0..n)
                .max_by(|&a, &b| p[a].partial_cmp(&p[b]).expect("finite probe"))
                .unwrap_or(0);
            row.iter().map(|v| v - row[r]).collect()
        })
        .collect();
    let lambdas: Vec<f64> = values
        .iter()
        .map(|row| -row.iter().sum::<f64>() / n as f64)
        .collect();
    let lambda_bar = if lambdas.is_empty() {
        0.0
    } else {
        lambdas.iter().sum::<f64>() / lambdas.len() as f64
    };

    let mut key_log = ViolationLog::new();
    let mut common_log = ViolationLog::new();
    for ((p, row), scale) in probes.iter().zip(&values).zip(&scales) {
        for (y, (&v, &s)) in row.iter().zip(scale).enumerate() {
            let mut input = to_f64s(p);
            input.push(y as f64);
            key_log.record(v.abs() / s, KEY_TOL, || Witness {
                input: input.clone(),
                observed: v,
                expected: 0.0,
            });
            common_log.record((v + lambda_bar).abs() / s, KEY_TOL, || Witness {
                input,
                observed: v,
                expected: -lambda_bar,
            });
        }
    }

    let key = key_log.clone().finish("", KEY_TOL);
    let (class, log) = if key.passed {
        (KeyClass::Key, key_log)
    } else {
        let common = common_log.clone().finish("", KEY_TOL);
        if common.passed {
            (KeyClass::ProperWithLambda(lambda_bar), common_log)
        } else {
            (KeyClass::Neither, common_log)
        }
    };
    KeyEquationReport {
        report: log.finish(format!("key-equation[{}]", rule.name()), KEY_TOL),
        class,
        lambdas,
        values,
        exchange,
    }
}
