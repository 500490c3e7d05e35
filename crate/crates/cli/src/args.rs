use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use local_scores::scoring::RuleName;

#[derive(Debug, Parser)]
#[command(name = "local-scores", version, about = "Proper local scoring rules: estimation and verification")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Write the JSON report to this file instead of stdout.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Poisson rate from a power-family pair rule.
    EstimatePoisson(EstimatePoissonArgs),
    /// Score, Zelterman and truncated-Poisson estimates from capture counts.
    CaptureRecapture(CaptureRecaptureArgs),
    /// Fit MRF parameters by pseudo-likelihood or ratio matching.
    MrfFit(MrfFitArgs),
    /// Draw configurations from an MRF by Gibbs sampling.
    MrfSample(MrfSampleArgs),
    /// Run numerical checks on a registered scoring rule.
    VerifyRule(VerifyRuleArgs),
    /// Möbius decomposition of a rule's entropy over a graph.
    Decompose(DecomposeArgs),
}

#[derive(Debug, Args)]
pub struct EstimatePoissonArgs {
    /// Frequency table CSV with header `value,count`.
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long, allow_hyphen_values = true)]
    pub a: f64,
    #[arg(long, allow_hyphen_values = true)]
    pub m: f64,
    /// Kept edges as `y-z` pairs, e.g. `1-2,2-3`. Defaults to every edge up to
    /// one past the largest observed value.
    #[arg(long, value_delimiter = ',')]
    pub window: Option<Vec<String>>,
}

#[derive(Debug, Args)]
pub struct CaptureRecaptureArgs {
    /// Frequency table CSV of units caught `value ≥ 1` times.
    #[arg(long)]
    pub input: PathBuf,
    /// Total number of catches.
    #[arg(long)]
    pub catches: u64,
    /// Residual tolerance of the likelihood equation, relative to the number of units.
    #[arg(long, default_value_t = 1e-12)]
    pub tol: f64,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum ScoreArg {
    #[value(name = "pseudo-likelihood", alias = "pl")]
    PseudoLikelihood,
    #[value(name = "ratio-matching", alias = "rm")]
    RatioMatching,
}

#[derive(Debug, Args)]
pub struct MrfFitArgs {
    /// Model JSON.
    #[arg(long)]
    pub model: PathBuf,
    /// Sample CSV with header `x1,...,xk`.
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long, value_enum)]
    pub score: ScoreArg,
    /// Stop once a cycle improves the total score by at most this much.
    #[arg(long)]
    pub tol: f64,
}

#[derive(Debug, Args)]
pub struct MrfSampleArgs {
    #[arg(long)]
    pub model: PathBuf,
    /// Parameter vector, comma separated.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub theta: Vec<f64>,
    /// Number of kept configurations.
    #[arg(long)]
    pub samples: usize,
    #[arg(long)]
    pub seed: u64,
    /// Sweeps discarded before the first kept sample.
    #[arg(long)]
    pub burn_in: usize,
    /// Sweeps between kept samples.
    #[arg(long, default_value_t = 1)]
    pub thin: usize,
    /// Destination of the sample CSV.
    #[arg(long)]
    pub samples_out: PathBuf,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, ValueEnum)]
pub enum CheckName {
    Properness,
    Homogeneity,
    Locality,
    Supergradient,
    Key,
    MixedPartials,
    EntropyGradient,
    ConditionDisjoint,
}

#[derive(Debug, Args)]
pub struct VerifyRuleArgs {
    /// Registered rule: log, brier, spherical, brier-pair, coarse-brier, pair:power:a=<a>,m=<m>.
    #[arg(long)]
    pub rule: RuleName,
    #[arg(long, value_delimiter = ',', required = true, value_enum)]
    pub check: Vec<CheckName>,
    /// Number of outcomes, labelled 0..n-1.
    #[arg(long, default_value_t = 3, conflicts_with = "graph")]
    pub outcomes: usize,
    /// Edge list giving the outcomes and the locality graph.
    #[arg(long, alias = "edges")]
    pub graph: Option<PathBuf>,
    /// Step of the properness simplex grid.
    #[arg(long, default_value_t = 0.05)]
    pub grid: f64,
    /// Properness tolerance.
    #[arg(long, default_value_t = 1e-10)]
    pub tol: f64,
    /// Random probes per probe-based check.
    #[arg(long, default_value_t = 100)]
    pub probes: usize,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum AnchorArg {
    Zero,
    Ones,
}

#[derive(Debug, Args)]
pub struct DecomposeArgs {
    /// Edge list of the graph; its labels are the outcomes.
    #[arg(long, alias = "edges")]
    pub graph: PathBuf,
    #[arg(long)]
    pub rule: RuleName,
    #[arg(long, value_enum)]
    pub anchor: AnchorArg,
    #[arg(long, default_value_t = 50)]
    pub probes: usize,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
}
