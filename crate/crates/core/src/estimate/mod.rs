//! Minimum-score estimation: closed-form Poisson estimators from pair scoring
//! rules, capture–recapture rate estimates, and derivative-free fitting of
//! Markov random field parameters by total conditional score.

mod capture;
mod fit;
mod pair;
mod table;

pub use capture::{
    capture_recapture_score_estimate, truncated_poisson_mle, zelterman_estimate,
    CaptureRecaptureData, MleResult, PopulationEstimate,
};
pub use fit::{fit_mrf, total_score, FitResult};
pub use pair::{poisson_pair_estimate, truncate_pair_rule_window, WindowedPairEstimator};
pub use table::FrequencyTable;
