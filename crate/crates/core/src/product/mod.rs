//! Product sample spaces, Markov random field models specified by unnormalized
//! log weights, their full conditionals, and the conditional scores built on
//! them (pseudo-likelihood, ratio matching).

mod gibbs;
mod model;
mod samples;
mod scores;

pub use gibbs::{gibbs_sample, GibbsConfig};
pub use model::{full_conditional, LocalEnergyFn, LogWeightFn, MrfModel};
pub use samples::SampleMatrix;
pub(crate) use scores::conditional_score_unchecked;
pub use scores::{
    conditional_score, pseudo_likelihood_score, ratio_matching_discrepancy, ratio_matching_score,
    Component, ComponentFn, MAX_EXHAUSTIVE_COORDINATES,
};

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::space::OutcomeSpace;

/// `X = X_1 × ... × X_k`, enumerated lexicographically with the first
/// coordinate varying slowest.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProductSpace {
    factors: Vec<Arc<OutcomeSpace>>,
}

impl ProductSpace {
    pub fn new(factors: Vec<Arc<OutcomeSpace>>) -> Result<Self> {
        if factors.is_empty() {
            return Err(Error::Domain("a product space needs at least one factor".into()));
        }
        Ok(Self { factors })
    }

    /// `{0, 1}^k`.
    pub fn binary(k: usize) -> Result<Self> {
        let bit = OutcomeSpace::integers(0, 2)?;
        Self::new(vec![bit; k])
    }

    pub fn from_sizes(sizes: &[usize]) -> Result<Self> {
        Self::new(
            sizes
                .iter()
                .map(|&s| OutcomeSpace::integers(0, s))
                .collect::<Result<_>>()?,
        )
    }

    pub fn k(&self) -> usize {
        self.factors.len()
    }

    pub fn factor(&self, i: usize) -> &Arc<OutcomeSpace> {
        &self.factors[i]
    }

    pub fn factor_size(&self, i: usize) -> usize {
        self.factors[i].size()
    }

    pub fn is_binary(&self) -> bool {
        self.factors.iter().all(|f| f.size() == 2)
    }

    /// Number of configurations, or `None` on overflow.
    pub fn size(&self) -> Option<usize> {
        self.factors
            .iter()
            .try_fold(1usize, |acc, f| acc.checked_mul(f.size()))
    }

    pub fn validate(&self, config: &[usize]) -> Result<()> {
        if config.len() != self.k() {
            return Err(Error::Domain(format!(
                "configuration has {} coordinates, space has {}",
                config.len(),
                self.k()
            )));
        }
        for (i, (&v, f)) in config.iter().zip(&self.factors).enumerate() {
            if v >= f.size() {
                return Err(Error::Domain(format!(
                    "coordinate {} has value {v}, factor size is {}",
                    i + 1,
                    f.size()
                )));
            }
        }
        Ok(())
    }

    pub fn index_of(&self, config: &[usize]) -> usize {
        config
            .iter()
            .zip(&self.factors)
            .fold(0, |acc, (&v, f)| acc * f.size() + v)
    }

    pub fn config_at(&self, mut index: usize) -> Vec<usize> {
        let mut c = vec![0; self.k()];
        for (i, f) in self.factors.iter().enumerate().rev() {
            c[i] = index % f.size();
            index /= f.size();
        }
        c
    }

    /// All configurations in enumeration order.
    pub fn configs(&self) -> Result<Vec<Vec<usize>>> {
        let n = self
            .size()
            .ok_or(Error::Capacity {
                what: "product space enumeration",
                size: usize::MAX,
                limit: usize::MAX,
            })?;
        Ok((0..n).map(|i| self.config_at(i)).collect())
    }

    /// The product as a flat outcome space with labels `v1,v2,...,vk`.
    pub fn joint_space(&self) -> Result<Arc<OutcomeSpace>> {
        OutcomeSpace::new(self.configs()?.into_iter().map(|c| {
            c.iter()
                .zip(&self.factors)
                .map(|(&v, f)| f.label(v).to_string())
                .collect::<Vec<_>>()
                .join(",")
        }))
    }
}
