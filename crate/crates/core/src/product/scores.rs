use std::sync::Arc;

use super::model::{softmax, MrfModel};
use super::ProductSpace;
use crate::error::{Error, Result};
use crate::scalar::{stable_sum, Scalar};
use crate::space::Distribution;

/// Largest number of binary coordinates the exhaustive discrepancy enumerates.
pub const MAX_EXHAUSTIVE_COORDINATES: usize = 12;

/// Per-coordinate score `(i, configuration, p(X_i = · | X^{∖i})) -> loss`.
/// The configuration carries both `x_i` and the conditioning values `ξ^{∖i}`.
pub type ComponentFn<T> = Arc<dyn Fn(usize, &[usize], &[T]) -> T + Send + Sync>;

/// Scoring rule applied to each full conditional.
#[derive(Clone)]
pub enum Component<T> {
    /// `-ln p(x_i | x^{∖i})`: pseudo-likelihood.
    Log,
    /// `(x_i - p(X_i = 1 | x^{∖i}))²` on binary coordinates: ratio matching.
    Brier,
    /// Arbitrary component rules, possibly varying with the conditioning values.
    Custom(ComponentFn<T>),
}

impl<T: Scalar> Component<T> {
    fn eval(&self, i: usize, config: &[usize], cond: &[T]) -> T {
        match self {
            Self::Log => -cond[config[i]].ln(),
            Self::Brier => {
                let d = T::from_usize_lossy(config[i]) - cond[1];
                d * d
            }
            Self::Custom(f) => f(i, config, cond),
        }
    }
}

impl<T> std::fmt::Debug for Component<T> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Self::Log => f.write_str("Log"),
            Self::Brier => f.write_str("Brier"),
            Self::Custom(_) => f.write_str("Custom"),
        }
    }
}

/// `Σ_i S_i(x_i, p(· | x^{∖i}))`.
pub fn conditional_score<T: Scalar>(
    model: &MrfModel<T>,
    config: &[usize],
    theta: &[T],
    component: &Component<T>,
) -> Result<T> {
    model.space().validate(config)?;
    model.check_theta(theta)?;
    if matches!(component, Component::Brier) && !model.space().is_binary() {
        return Err(Error::Domain(
            "ratio matching needs every coordinate to be binary".into(),
        ));
    }
    Ok(conditional_score_unchecked(model, config, theta, component))
}

pub(crate) fn conditional_score_unchecked<T: Scalar>(
    model: &MrfModel<T>,
    config: &[usize],
    theta: &[T],
    component: &Component<T>,
) -> T {
    stable_sum((0..model.space().k()).map(|i| {
        let cond = softmax(&model.conditional_logits(config, i, theta));
        component.eval(i, config, &cond)
    }))
}

/// Negative log pseudo-likelihood `-Σ_i ln p(x_i | x^{∖i})`.
pub fn pseudo_likelihood_score<T: Scalar>(model: &MrfModel<T>, config: &[usize], theta: &[T]) -> Result<T> {
    conditional_score(model, config, theta, &Component::Log)
}

/// Ratio matching score `Σ_i (x_i - p(X_i = 1 | x^{∖i}))²`.
pub fn ratio_matching_score<T: Scalar>(model: &MrfModel<T>, config: &[usize], theta: &[T]) -> Result<T> {
    conditional_score(model, config, theta, &Component::Brier)
}

/// `d(p, q) = Σ_i Σ_{ξ^{∖i}} p(ξ^{∖i}) (p(X_i=1 | ξ^{∖i}) - q(X_i=1 | ξ^{∖i}))²`
/// for joint distributions on `{0,1}^k`, by enumeration.
pub fn ratio_matching_discrepancy<T: Scalar>(
    space: &ProductSpace,
    p: &Distribution<T>,
    q: &Distribution<T>,
) -> Result<T> {
    if !space.is_binary() {
        return Err(Error::Domain("ratio matching needs binary coordinates".into()));
    }
    let k = space.k();
    if k > MAX_EXHAUSTIVE_COORDINATES {
        return Err(Error::Capacity {
            what: "ratio matching discrepancy coordinates",
            size: k,
            limit: MAX_EXHAUSTIVE_COORDINATES,
        });
    }
    let n = 1usize << k;
    if p.len() != n || q.len() != n {
        return Err(Error::Domain(format!(
            "joint tables must have {n} entries, got {} and {}",
            p.len(),
            q.len()
        )));
    }
    let (pv, qv) = (p.values(), q.values());
    let mut terms = Vec::with_capacity(k * n / 2);
    for i in 0..k {
        // coordinate i is bit (k-1-i) of the enumeration index
        let bit = 1usize << (k - 1 - i);
        for idx in (0..n).filter(|idx| idx & bit == 0) {
            let (p0, p1) = (pv[idx], pv[idx | bit]);
            let (q0, q1) = (qv[idx], qv[idx | bit]);
            let marg = p0 + p1;
            let d = p1 / marg - q1 / (q0 + q1);
            terms.push(marg * d * d);
        }
    }
    Ok(stable_sum(terms))
}
