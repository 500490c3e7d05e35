use std::collections::BTreeMap;

use super::ProductSpace;
use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::space::Distribution;

/// Observed configurations, each with a nonnegative weight (1 for ordinary
/// samples; fractional expected counts are allowed).
#[derive(Debug, Clone, PartialEq)]
pub struct SampleMatrix<T> {
    space: ProductSpace,
    rows: Vec<Vec<usize>>,
    weights: Vec<T>,
}

impl<T: Scalar> SampleMatrix<T> {
    pub fn new(space: ProductSpace, rows: Vec<Vec<usize>>) -> Result<Self> {
        let weights = vec![T::one(); rows.len()];
        Self::weighted(space, rows, weights)
    }

    pub fn weighted(space: ProductSpace, rows: Vec<Vec<usize>>, weights: Vec<T>) -> Result<Self> {
        if rows.len() != weights.len() {
            return Err(Error::Data(format!(
                "{} rows but {} weights",
                rows.len(),
                weights.len()
            )));
        }
        for (r, row) in rows.iter().enumerate() {
            space
                .validate(row)
                .map_err(|e| Error::Data(format!("row {}: {e}", r + 1)))?;
        }
        if let Some(w) = weights.iter().find(|w| !(w.is_finite() && **w >= T::zero())) {
            return Err(Error::Data(format!("sample weight {w} must be finite and >= 0")));
        }
        Ok(Self {
            space,
            rows,
            weights,
        })
    }

    /// Every configuration, weighted by its probability under `joint`.
    pub fn from_joint(space: ProductSpace, joint: &Distribution<T>) -> Result<Self> {
        let rows = space.configs()?;
        if rows.len() != joint.len() {
            return Err(Error::Domain(format!(
                "joint has {} entries, space has {} configurations",
                joint.len(),
                rows.len()
            )));
        }
        Self::weighted(space, rows, joint.values().to_vec())
    }

    pub fn space(&self) -> &ProductSpace {
        &self.space
    }

    pub fn rows(&self) -> &[Vec<usize>] {
        &self.rows
    }

    pub fn weights(&self) -> &[T] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    /// Distinct configurations with summed weights, in enumeration order.
    pub fn tally(&self) -> Vec<(Vec<usize>, T)> {
        let mut m: BTreeMap<usize, (Vec<usize>, T)> = BTreeMap::new();
        for (row, &w) in self.rows.iter().zip(&self.weights) {
            let e = m
                .entry(self.space.index_of(row))
                .or_insert_with(|| (row.clone(), T::zero()));
            e.1 = e.1 + w;
        }
        m.into_values().collect()
    }
}
