use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use super::additive::clique_additive_rule;
use super::entropy::CliqueEntropy;
use super::pair::power_pair_rule;
use super::rule::ScoringRule;
use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::space::OutcomeSpace;

/// A scoring rule selected by registry name.
///
/// | name | rule |
/// |------|------|
/// | `log` | `-ln p_x` |
/// | `brier` | Brier, 0-homogeneous form |
/// | `spherical` | `-α_x / ‖α‖` |
/// | `brier-pair` | Brier entropies on consecutive pairs `{i, i+1}` |
/// | `coarse-brier` | three-outcome rule local on distributions only |
/// | `pair:power:a=<a>,m=<m>` | power-family pair rule on `{0, .., n-1}` |
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RuleName {
    Log,
    Brier,
    Spherical,
    BrierPair,
    CoarseBrier,
    PairPower { a: f64, m: f64 },
}

impl RuleName {
    /// Whether the rule is built by summing clique entropy gradients.
    pub fn is_clique_additive(&self) -> bool {
        matches!(
            self,
            Self::Brier | Self::Spherical | Self::BrierPair | Self::PairPower { .. }
        )
    }

    pub fn build<T: Scalar>(&self, space: Arc<OutcomeSpace>) -> Result<ScoringRule<T>> {
        match *self {
            Self::Log => Ok(ScoringRule::log(space)),
            Self::Brier => Ok(ScoringRule::brier(space)),
            Self::Spherical => Ok(ScoringRule::spherical(space)),
            Self::CoarseBrier => ScoringRule::coarse_brier(space),
            Self::BrierPair => {
                let entropies = (1..space.size())
                    .map(|i| CliqueEntropy::brier(vec![i - 1, i]))
                    .collect::<Result<Vec<_>>>()?;
                let (rule, _) = clique_additive_rule(space, entropies)?;
                Ok(rule.with_name("brier-pair"))
            }
            Self::PairPower { a, m } => Ok(power_pair_rule(space, T::lit(a), T::lit(m))?
                .with_name(self.to_string())),
        }
    }

    /// Every fixed-name rule plus one representative of the power family.
    pub fn registered() -> Vec<RuleName> {
        vec![
            Self::Log,
            Self::Brier,
            Self::Spherical,
            Self::BrierPair,
            Self::CoarseBrier,
            Self::PairPower { a: 2.0, m: 2.0 },
        ]
    }
}

impl fmt::Display for RuleName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Log => f.write_str("log"),
            Self::Brier => f.write_str("brier"),
            Self::Spherical => f.write_str("spherical"),
            Self::BrierPair => f.write_str("brier-pair"),
            Self::CoarseBrier => f.write_str("coarse-brier"),
            Self::PairPower { a, m } => write!(f, "pair:power:a={a},m={m}"),
        }
    }
}

impl FromStr for RuleName {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "log" => return Ok(Self::Log),
            "brier" => return Ok(Self::Brier),
            "spherical" => return Ok(Self::Spherical),
            "brier-pair" => return Ok(Self::BrierPair),
            "coarse-brier" => return Ok(Self::CoarseBrier),
            _ => {}
        }
        let params = s
            .strip_prefix("pair:power:")
            .ok_or_else(|| Error::Parameter(format!("unknown rule {s:?}")))?;
        let (mut a, mut m) = (None, None);
        for kv in params.split(',') {
            let (k, v) = kv
                .split_once('=')
                .ok_or_else(|| Error::Parameter(format!("expected key=value, got {kv:?}")))?;
            let v: f64 = v
                .trim()
                .parse()
                .map_err(|_| Error::Parameter(format!("{k}: not a number: {v:?}")))?;
            match k.trim() {
                "a" => a = Some(v),
                "m" => m = Some(v),
                other => return Err(Error::Parameter(format!("unknown pair parameter {other:?}"))),
            }
        }
        match (a, m) {
            (Some(a), Some(m)) => {
                super::pair::PowerFamily::new(a, m)?;
                Ok(Self::PairPower { a, m })
            }
            _ => Err(Error::Parameter(format!(
                "pair:power needs both a and m, got {params:?}"
            ))),
        }
    }
}
