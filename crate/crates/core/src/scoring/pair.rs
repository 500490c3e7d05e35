//! Pair scoring rules on an integer window `{0, .., y_max}` whose cliques are
//! the consecutive pairs `{y, y+1}`.

use std::fmt;
use std::sync::Arc;

use super::additive::clique_additive_rule;
use super::entropy::{CliqueEntropy, EntropyFunction};
use super::rule::ScoringRule;
use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::space::{OutcomeSpace, UndirectedGraph};

/// A concave function `G` on `(0, ∞)` with its derivative.
#[derive(Clone)]
pub struct SiteFunction<T> {
    value: Arc<dyn Fn(T) -> T + Send + Sync>,
    derivative: Arc<dyn Fn(T) -> T + Send + Sync>,
}

impl<T: Scalar> SiteFunction<T> {
    pub fn new<F, D>(value: F, derivative: D) -> Self
    where
        F: Fn(T) -> T + Send + Sync + 'static,
        D: Fn(T) -> T + Send + Sync + 'static,
    {
        Self {
            value: Arc::new(value),
            derivative: Arc::new(derivative),
        }
    }

    pub fn zero() -> Self {
        Self::new(|_| T::zero(), |_| T::zero())
    }

    pub fn value(&self, v: T) -> T {
        (self.value)(v)
    }

    pub fn derivative(&self, v: T) -> T {
        (self.derivative)(v)
    }
}

impl<T> fmt::Debug for SiteFunction<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("SiteFunction")
    }
}

/// `G_x(v) = -(x+1)^a v^m / (m(m-1))`, `m ∉ {0, 1}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PowerFamily<T> {
    pub a: T,
    pub m: T,
}

impl<T: Scalar> PowerFamily<T> {
    pub fn new(a: T, m: T) -> Result<Self> {
        if !(a.is_finite() && m.is_finite()) {
            return Err(Error::Parameter(format!("a={a}, m={m} must be finite")));
        }
        if m == T::zero() || m == T::one() {
            return Err(Error::Parameter(format!(
                "power family requires m not in {{0, 1}}, got m={m}"
            )));
        }
        Ok(Self { a, m })
    }

    pub fn site(&self, x: usize) -> SiteFunction<T> {
        let m = self.m;
        let c = (T::from_usize_lossy(x) + T::one()).powf(self.a);
        let denom = m * (m - T::one());
        SiteFunction::new(
            move |v: T| -c * v.powf(m) / denom,
            move |v: T| -c * v.powf(m - T::one()) / (m - T::one()),
        )
    }

    /// One site per consecutive pair of a window with `pairs` edges.
    pub fn sites(&self, pairs: usize) -> Vec<Option<SiteFunction<T>>> {
        (0..pairs).map(|x| Some(self.site(x))).collect()
    }
}

/// `H_y(α_y, α_{y+1}) = α_y G_y(α_{y+1} / α_y)` on the pair `{y, y+1}`.
pub fn pair_entropy<T: Scalar>(y: usize, g: SiteFunction<T>) -> CliqueEntropy<T> {
    let gv = g.clone();
    CliqueEntropy::new(
        vec![y, y + 1],
        Arc::new(move |a: &[T]| a[0] * gv.value(a[1] / a[0])),
        Arc::new(move |a: &[T], out: &mut [T]| {
            let v = a[1] / a[0];
            let d = g.derivative(v);
            out[0] = g.value(v) - v * d;
            out[1] = d;
        }),
        false,
    )
    .expect("a pair of distinct outcomes is a valid clique")
}

fn check_window<T>(space: &OutcomeSpace, sites: &[Option<SiteFunction<T>>]) -> Result<()> {
    if sites.len() + 1 != space.size() {
        return Err(Error::Domain(format!(
            "a window of {} outcomes has {} consecutive pairs, got {} site functions",
            space.size(),
            space.size() - 1,
            sites.len()
        )));
    }
    Ok(())
}

/// Pair rule evaluated from weight ratios:
///
/// `S(x, p) = G'_{x-1}(p_x/p_{x-1}) + G_x(p_{x+1}/p_x) - (p_{x+1}/p_x) G'_x(p_{x+1}/p_x)`,
///
/// where `sites[y]` is `G_y` for the pair `{y, y+1}` and `None` removes that
/// edge (equivalently `G_y ≡ 0`). Outcome index `y` stands for the integer `y`.
pub fn pair_rule<T: Scalar>(
    space: Arc<OutcomeSpace>,
    sites: Vec<Option<SiteFunction<T>>>,
) -> Result<ScoringRule<T>> {
    check_window(&space, &sites)?;
    let y_max = sites.len();
    let edges: Vec<(usize, usize)> = sites
        .iter()
        .enumerate()
        .filter(|(_, s)| s.is_some())
        .map(|(y, _)| (y, y + 1))
        .collect();
    let graph = UndirectedGraph::new(space.clone(), edges)?;
    let entropy = pair_entropy_function(&space, &sites)?;
    let sites = Arc::new(sites);
    Ok(ScoringRule::from_fn("pair", space, move |x, a: &[T]| {
        let mut s = T::zero();
        if x > 0 {
            if let Some(g) = &sites[x - 1] {
                s = s + g.derivative(a[x] / a[x - 1]);
            }
        }
        if x < y_max {
            if let Some(g) = &sites[x] {
                let v = a[x + 1] / a[x];
                s = s + g.value(v) - v * g.derivative(v);
            }
        }
        s
    })
    .homogeneous(true)
    .with_locality(graph.neighborhood_system())
    .with_entropy(entropy))
}

fn pair_entropy_function<T: Scalar>(
    space: &Arc<OutcomeSpace>,
    sites: &[Option<SiteFunction<T>>],
) -> Result<EntropyFunction<T>> {
    let entropies = pair_entropies(sites);
    let (_, h) = clique_additive_rule(space.clone(), entropies)?;
    Ok(h)
}

/// Clique entropies of the pair rule, one per active site.
pub fn pair_entropies<T: Scalar>(sites: &[Option<SiteFunction<T>>]) -> Vec<CliqueEntropy<T>> {
    sites
        .iter()
        .enumerate()
        .filter_map(|(y, s)| s.clone().map(|g| pair_entropy(y, g)))
        .collect()
}

/// The power-family pair rule on the window `{0, .., size-1}` with every edge present.
pub fn power_pair_rule<T: Scalar>(space: Arc<OutcomeSpace>, a: T, m: T) -> Result<ScoringRule<T>> {
    let fam = PowerFamily::new(a, m)?;
    let pairs = space.size() - 1;
    Ok(pair_rule(space, fam.sites(pairs))?.with_name(format!("pair:power:a={a},m={m}")))
}
