use std::collections::BTreeSet;

use super::FrequencyTable;
use crate::error::{Error, Result};
use crate::scalar::{stable_sum, Scalar};
use crate::scoring::PowerFamily;

/// The power-family pair-rule estimating equation
/// `θ Σ_y f_y/(y+1)^{m-a} - Σ_y f_{y+1}/(y+1)^{m-a-1} = 0`
/// with the sums restricted to the kept edges `y - (y+1)`.
#[derive(Debug, Clone, PartialEq)]
pub struct WindowedPairEstimator<T> {
    table: FrequencyTable<T>,
    /// Left endpoints `y` of the kept edges.
    edges: BTreeSet<u64>,
}

impl<T: Scalar> WindowedPairEstimator<T> {
    pub fn table(&self) -> &FrequencyTable<T> {
        &self.table
    }

    pub fn edges(&self) -> &BTreeSet<u64> {
        &self.edges
    }

    /// `(Σ f_y/(y+1)^{m-a}, Σ f_{y+1}/(y+1)^{m-a-1})` over kept edges.
    pub fn sums(&self, a: T, m: T) -> Result<(T, T)> {
        PowerFamily::new(a, m)?;
        let e = m - a;
        let mut den = Vec::with_capacity(self.edges.len());
        let mut num = Vec::with_capacity(self.edges.len());
        for &y in &self.edges {
            let y1 = T::from_u64(y + 1).expect("value representable");
            den.push(self.table.get(y) / y1.powf(e));
            num.push(self.table.get(y + 1) / y1.powf(e - T::one()));
        }
        Ok((stable_sum(den), stable_sum(num)))
    }

    /// The explicit root of the estimating equation.
    pub fn estimate(&self, a: T, m: T) -> Result<T> {
        let (den, num) = self.sums(a, m)?;
        if den <= T::zero() {
            return Err(Error::Data(
                "no counts at the left end of any kept edge; the estimating equation has no root".into(),
            ));
        }
        Ok(num / den)
    }

    /// Left-hand side of the estimating equation at `theta`.
    pub fn residual(&self, theta: T, a: T, m: T) -> Result<T> {
        let (den, num) = self.sums(a, m)?;
        Ok(theta * den - num)
    }
}

/// Estimator over the full neighbour graph `0 - 1 - 2 - ...`, truncated one
/// past the largest observed value.
pub fn poisson_pair_estimate<T: Scalar>(ft: &FrequencyTable<T>, a: T, m: T) -> Result<T> {
    PowerFamily::new(a, m)?;
    if ft.n_total() <= T::zero() {
        return Err(Error::Data("empty frequency table".into()));
    }
    let max = ft.max_value().unwrap_or(0);
    let edges: Vec<(u64, u64)> = (0..=max).map(|y| (y, y + 1)).collect();
    truncate_pair_rule_window(ft, &edges)?.estimate(a, m)
}

/// Restricts the pair rule to `kept_edges`, each a consecutive pair `(y, y+1)`.
///
/// Keeping the edges with `y ≥ 1` and `m = a` gives `(c - f_1)/n`; keeping only
/// `1 - 2` gives `2 f_2 / f_1`.
pub fn truncate_pair_rule_window<T: Scalar>(
    ft: &FrequencyTable<T>,
    kept_edges: &[(u64, u64)],
) -> Result<WindowedPairEstimator<T>> {
    if kept_edges.is_empty() {
        return Err(Error::Data("at least one edge must be kept".into()));
    }
    let mut edges = BTreeSet::new();
    for &(u, v) in kept_edges {
        let (lo, hi) = if u < v { (u, v) } else { (v, u) };
        if hi != lo + 1 {
            return Err(Error::Data(format!(
                "edge ({u}, {v}) does not join consecutive integers"
            )));
        }
        edges.insert(lo);
    }
    Ok(WindowedPairEstimator {
        table: ft.clone(),
        edges,
    })
}
