use std::ops::Deref;
use std::sync::Arc;

use super::{OutcomeSet, OutcomeSpace};
use crate::error::{Error, Result};
use crate::scalar::{stable_sum, Scalar};

/// A strictly positive weight vector over an outcome space (a point of the open cone).
#[derive(Debug, Clone, PartialEq)]
pub struct Weights<T> {
    space: Arc<OutcomeSpace>,
    values: Vec<T>,
}

impl<T: Scalar> Weights<T> {
    pub fn new(space: Arc<OutcomeSpace>, values: Vec<T>) -> Result<Self> {
        if values.len() != space.size() {
            return Err(Error::Domain(format!(
                "weight vector has {} entries, space has {} outcomes",
                values.len(),
                space.size()
            )));
        }
        if let Some((i, v)) = values
            .iter()
            .enumerate()
            .find(|(_, v)| !(v.is_finite() && **v > T::zero()))
        {
            return Err(Error::Domain(format!(
                "weight for outcome {:?} must be finite and > 0, got {v}",
                space.label(i)
            )));
        }
        Ok(Self { space, values })
    }

    pub fn uniform(space: Arc<OutcomeSpace>, value: T) -> Result<Self> {
        let n = space.size();
        Self::new(space, vec![value; n])
    }

    pub fn space(&self) -> &Arc<OutcomeSpace> {
        &self.space
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    pub fn get(&self, x: usize) -> T {
        self.values[x]
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn total(&self) -> T {
        stable_sum(self.values.iter().copied())
    }

    /// Sub-vector on `subset`, in index order.
    pub fn restrict(&self, subset: &OutcomeSet) -> Vec<T> {
        subset.iter().map(|&x| self.values[x]).collect()
    }

    pub fn scaled(&self, factor: T) -> Result<Self> {
        Self::new(
            self.space.clone(),
            self.values.iter().map(|&v| v * factor).collect(),
        )
    }

    pub fn into_values(self) -> Vec<T> {
        self.values
    }
}

/// A strictly positive probability distribution.
#[derive(Debug, Clone, PartialEq)]
pub struct Distribution<T> {
    weights: Weights<T>,
}

impl<T: Scalar> Distribution<T> {
    /// Accepts a positive vector summing to one within [`Scalar::normalization_tol`]
    /// and renormalizes it exactly.
    pub fn new(space: Arc<OutcomeSpace>, values: Vec<T>) -> Result<Self> {
        let w = Weights::new(space, values)?;
        let total = w.total();
        if (total - T::one()).abs() > T::normalization_tol() {
            return Err(Error::Domain(format!(
                "distribution must sum to 1, sums to {total}"
            )));
        }
        Ok(Self::renormalized(w))
    }

    pub fn uniform(space: Arc<OutcomeSpace>) -> Self {
        let n = space.size();
        let v = T::one() / T::from_usize_lossy(n);
        Self::renormalized(Weights {
            space,
            values: vec![v; n],
        })
    }

    fn renormalized(w: Weights<T>) -> Self {
        let total = w.total();
        let values = w.values.iter().map(|&v| v / total).collect();
        Self {
            weights: Weights {
                space: w.space,
                values,
            },
        }
    }

    pub fn as_weights(&self) -> &Weights<T> {
        &self.weights
    }

    pub fn into_weights(self) -> Weights<T> {
        self.weights
    }
}

impl<T> Deref for Distribution<T> {
    type Target = Weights<T>;

    fn deref(&self) -> &Weights<T> {
        &self.weights
    }
}

/// Divide a weight vector by its total. Idempotent on distributions.
pub fn normalize<T: Scalar>(w: &Weights<T>) -> Distribution<T> {
    Distribution::renormalized(w.clone())
}

/// The conditional distribution on `subset`: entries `w_x / sum_{y in subset} w_y`.
///
/// The result lives on the restricted space [`OutcomeSpace::restrict`] and is
/// invariant under rescaling of `w`.
pub fn conditional_on<T: Scalar>(w: &Weights<T>, subset: &OutcomeSet) -> Result<Distribution<T>> {
    let space = w.space().restrict(subset)?;
    Ok(Distribution::renormalized(Weights {
        space,
        values: w.restrict(subset),
    }))
}
