//! Proper local scoring rules on finite outcome spaces.
//!
//! The crate provides scoring rules and their entropies, locality structures
//! (neighbourhood systems and undirected graphs), numerical checks of
//! properness, homogeneity, locality and the key equation, Möbius
//! decomposition of entropies, Markov random fields with conditional scores,
//! and minimum-score estimators for Poisson counts and MRF parameters.
//!
//! Everything numeric is generic over [`Scalar`] (`f32` or `f64`); the aliases
//! below fix the precision.

pub mod error;
pub mod estimate;
pub mod product;
pub mod scalar;
pub mod scoring;
pub mod space;
pub mod verify;

pub use error::{Error, Result};
pub use scalar::Scalar;

pub type WeightsF64 = space::Weights<f64>;
pub type DistributionF64 = space::Distribution<f64>;
pub type ScoringRuleF64 = scoring::ScoringRule<f64>;
pub type EntropyFunctionF64 = scoring::EntropyFunction<f64>;
pub type MrfModelF64 = product::MrfModel<f64>;
pub type SampleMatrixF64 = product::SampleMatrix<f64>;
pub type FrequencyTableF64 = estimate::FrequencyTable<f64>;

pub type WeightsF32 = space::Weights<f32>;
pub type DistributionF32 = space::Distribution<f32>;
pub type ScoringRuleF32 = scoring::ScoringRule<f32>;
pub type EntropyFunctionF32 = scoring::EntropyFunction<f32>;
pub type MrfModelF32 = product::MrfModel<f32>;
pub type SampleMatrixF32 = product::SampleMatrix<f32>;
pub type FrequencyTableF32 = estimate::FrequencyTable<f32>;
