//! Scoring rules, their entropies and divergences, and the clique-additive
//! construction of local rules from 1-homogeneous clique entropies.

mod additive;
mod entropy;
mod pair;
mod registry;
mod rule;

pub use additive::{brier_on_cliques, clique_additive_rule};
pub use entropy::{CliqueEntropy, EntropyFunction, GradientFn, ValueFn};
pub use pair::{pair_entropies, pair_entropy, pair_rule, power_pair_rule, PowerFamily, SiteFunction};
pub use registry::RuleName;
pub use rule::{
    brier_score, divergence, entropy, expected_score, homogeneous_extension, log_score,
    spherical_score, ScoreFn, ScoringRule,
};
