use std::fmt;
use std::sync::Arc;

use super::entropy::{EntropyFunction, ValueFn};
use crate::error::{Error, Result};
use crate::scalar::{stable_sum, Scalar};
use crate::space::{Distribution, NeighborhoodSystem, OutcomeSpace, UndirectedGraph, Weights};

/// Score evaluator: `(outcome index, weights) -> loss`. The weights slice has
/// one strictly positive entry per outcome of the rule's space.
pub type ScoreFn<T> = Arc<dyn Fn(usize, &[T]) -> T + Send + Sync>;

/// A scoring rule `S(x, α)` together with its declared metadata.
///
/// The evaluator is applied to the weights exactly as given; whether that
/// input is treated up to scale is recorded by [`ScoringRule::is_homogeneous`].
#[derive(Clone)]
pub struct ScoringRule<T> {
    name: String,
    space: Arc<OutcomeSpace>,
    evaluator: ScoreFn<T>,
    homogeneous: bool,
    locality: Option<NeighborhoodSystem>,
    differentiable: bool,
    regular_entropy: bool,
    entropy: Option<EntropyFunction<T>>,
}

impl<T: Scalar> ScoringRule<T> {
    pub fn new(name: impl Into<String>, space: Arc<OutcomeSpace>, evaluator: ScoreFn<T>) -> Self {
        Self {
            name: name.into(),
            space,
            evaluator,
            homogeneous: false,
            locality: None,
            differentiable: true,
            regular_entropy: false,
            entropy: None,
        }
    }

    pub fn from_fn<F>(name: impl Into<String>, space: Arc<OutcomeSpace>, f: F) -> Self
    where
        F: Fn(usize, &[T]) -> T + Send + Sync + 'static,
    {
        Self::new(name, space, Arc::new(f))
    }

    pub fn homogeneous(mut self, yes: bool) -> Self {
        self.homogeneous = yes;
        self
    }

    pub fn with_locality(mut self, ns: NeighborhoodSystem) -> Self {
        self.locality = Some(ns);
        self
    }

    pub fn differentiable(mut self, yes: bool) -> Self {
        self.differentiable = yes;
        self
    }

    /// Declares that `H(α) = Σ_x α_x S(x, α)` extends continuously to the closed cone.
    pub fn regular_entropy(mut self, yes: bool) -> Self {
        self.regular_entropy = yes;
        self
    }

    pub fn with_entropy(mut self, h: EntropyFunction<T>) -> Self {
        self.regular_entropy = h.is_regular();
        self.entropy = Some(h);
        self
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn space(&self) -> &Arc<OutcomeSpace> {
        &self.space
    }

    pub fn is_homogeneous(&self) -> bool {
        self.homogeneous
    }

    pub fn is_differentiable(&self) -> bool {
        self.differentiable
    }

    pub fn locality(&self) -> Option<&NeighborhoodSystem> {
        self.locality.as_ref()
    }

    pub fn evaluator(&self) -> &ScoreFn<T> {
        &self.evaluator
    }

    pub fn score(&self, x: usize, alpha: &Weights<T>) -> T {
        (self.evaluator)(x, alpha.values())
    }

    pub fn score_raw(&self, x: usize, alpha: &[T]) -> T {
        (self.evaluator)(x, alpha)
    }

    pub fn scores(&self, alpha: &[T]) -> Vec<T> {
        (0..alpha.len()).map(|x| (self.evaluator)(x, alpha)).collect()
    }

    /// The entropy function of a homogeneous rule. Uses the analytic entropy
    /// when one was attached, otherwise `H(α) = Σ_x α_x S(x, α)` with zero-weight
    /// outcomes skipped.
    pub fn entropy_function(&self) -> Result<EntropyFunction<T>> {
        if let Some(h) = &self.entropy {
            return Ok(h.clone());
        }
        if !self.homogeneous {
            return Err(Error::Precondition(format!(
                "rule {:?} is not 0-homogeneous; its entropy is only defined on distributions",
                self.name
            )));
        }
        let eval = self.evaluator.clone();
        let value: ValueFn<T> = Arc::new(move |a: &[T]| {
            stable_sum(
                a.iter()
                    .enumerate()
                    .filter(|(_, &v)| v > T::zero())
                    .map(|(x, &v)| v * eval(x, a)),
            )
        });
        Ok(EntropyFunction::new(self.space.size(), value, None, self.regular_entropy))
    }

    pub fn attached_entropy(&self) -> Option<&EntropyFunction<T>> {
        self.entropy.as_ref()
    }

    fn same_space(&self, w: &Weights<T>) -> Result<()> {
        if Arc::ptr_eq(&self.space, w.space()) || *self.space == **w.space() {
            Ok(())
        } else {
            Err(Error::Domain(format!(
                "weights over {:?} do not belong to the space of rule {:?}",
                w.space().labels(),
                self.name
            )))
        }
    }
}

impl<T> fmt::Debug for ScoringRule<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ScoringRule")
            .field("name", &self.name)
            .field("size", &self.space.size())
            .field("homogeneous", &self.homogeneous)
            .field("local", &self.locality.is_some())
            .field("differentiable", &self.differentiable)
            .finish_non_exhaustive()
    }
}

/// `-ln p_x`.
pub fn log_score<T: Scalar>(x: usize, p: &Distribution<T>) -> T {
    -p.get(x).ln()
}

/// Brier score in its 0-homogeneous form: the gradient of `-‖α‖²/α_+`.
/// At a distribution this is `‖p‖² - 2 p_x`.
pub fn brier_score<T: Scalar>(x: usize, w: &Weights<T>) -> T {
    brier_raw(x, w.values())
}

/// `-α_x / ‖α‖`.
pub fn spherical_score<T: Scalar>(x: usize, w: &Weights<T>) -> T {
    spherical_raw(x, w.values())
}

fn brier_raw<T: Scalar>(x: usize, a: &[T]) -> T {
    let total = stable_sum(a.iter().copied());
    let sq = stable_sum(a.iter().map(|&v| v * v));
    sq / (total * total) - T::lit(2.0) * a[x] / total
}

fn spherical_raw<T: Scalar>(x: usize, a: &[T]) -> T {
    -a[x] / stable_sum(a.iter().map(|&v| v * v)).sqrt()
}

impl<T: Scalar> ScoringRule<T> {
    /// Log score `-ln α_x`, meant to be evaluated at distributions. Local for
    /// the trivial neighborhood system; not homogeneous.
    pub fn log(space: Arc<OutcomeSpace>) -> Self {
        let ns = NeighborhoodSystem::trivial(space.clone());
        Self::from_fn("log", space, |x, a: &[T]| -a[x].ln()).with_locality(ns)
    }

    /// Brier score, 0-homogeneous, with its analytic entropy attached.
    pub fn brier(space: Arc<OutcomeSpace>) -> Self {
        let n = space.size();
        let ns = UndirectedGraph::complete(space.clone()).neighborhood_system();
        let h = EntropyFunction::new(
            n,
            Arc::new(super::entropy::brier_entropy::<T>),
            Some(Arc::new(super::entropy::brier_gradient::<T>)),
            true,
        );
        Self::from_fn("brier", space, brier_raw::<T>)
            .homogeneous(true)
            .with_locality(ns)
            .with_entropy(h)
    }

    /// Spherical score, 0-homogeneous, with entropy `-‖α‖` attached.
    pub fn spherical(space: Arc<OutcomeSpace>) -> Self {
        let n = space.size();
        let ns = UndirectedGraph::complete(space.clone()).neighborhood_system();
        let h = EntropyFunction::new(
            n,
            Arc::new(super::entropy::spherical_entropy::<T>),
            Some(Arc::new(super::entropy::spherical_gradient::<T>)),
            true,
        );
        Self::from_fn("spherical", space, spherical_raw::<T>)
            .homogeneous(true)
            .with_locality(ns)
            .with_entropy(h)
    }

    /// The three-outcome rule `S(1,p) = S(2,p) = (1 - p1 - p2)²`, `S(3,p) = (1 - p3)²`:
    /// proper and local for the graph `1 - 2, 3` on distributions, but its
    /// 0-homogeneous extension is not local.
    pub fn coarse_brier(space: Arc<OutcomeSpace>) -> Result<Self> {
        if space.size() != 3 {
            return Err(Error::Domain(format!(
                "the coarse Brier rule needs 3 outcomes, got {}",
                space.size()
            )));
        }
        let ns = UndirectedGraph::new(space.clone(), [(0, 1)])?.neighborhood_system();
        Ok(Self::from_fn("coarse-brier", space, |x, a: &[T]| {
            let r = if x == 2 {
                T::one() - a[2]
            } else {
                T::one() - a[0] - a[1]
            };
            r * r
        })
        .with_locality(ns)
        .regular_entropy(true))
    }
}

/// `S(x, α) := S(x, α / α_+)`. Agrees with `rule` on distributions; declared
/// homogeneous, with no locality claim.
pub fn homogeneous_extension<T: Scalar>(rule: &ScoringRule<T>) -> ScoringRule<T> {
    let eval = rule.evaluator.clone();
    let ext: ScoreFn<T> = Arc::new(move |x, a: &[T]| {
        let total = stable_sum(a.iter().copied());
        let p: Vec<T> = a.iter().map(|&v| v / total).collect();
        eval(x, &p)
    });
    ScoringRule {
        name: format!("ext({})", rule.name),
        space: rule.space.clone(),
        evaluator: ext,
        homogeneous: true,
        locality: None,
        differentiable: rule.differentiable,
        regular_entropy: rule.regular_entropy,
        entropy: rule.entropy.clone().filter(|_| rule.homogeneous),
    }
}

/// `S(p, q) = Σ_x p_x S(x, q)`.
pub fn expected_score<T: Scalar>(rule: &ScoringRule<T>, p: &Distribution<T>, q: &Weights<T>) -> Result<T> {
    rule.same_space(p)?;
    rule.same_space(q)?;
    Ok(expected_score_raw(rule, p.values(), q.values()))
}

fn expected_score_raw<T: Scalar>(rule: &ScoringRule<T>, p: &[T], q: &[T]) -> T {
    stable_sum(p.iter().enumerate().map(|(x, &px)| px * rule.score_raw(x, q)))
}

/// `H(p) = S(p, p)`.
pub fn entropy<T: Scalar>(rule: &ScoringRule<T>, p: &Distribution<T>) -> Result<T> {
    expected_score(rule, p, p)
}

/// `d(p, q) = S(p, q) - H(p)`; exactly zero when `q = p`.
pub fn divergence<T: Scalar>(rule: &ScoringRule<T>, p: &Distribution<T>, q: &Distribution<T>) -> Result<T> {
    Ok(expected_score(rule, p, q)? - entropy(rule, p)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn abc() -> Arc<OutcomeSpace> {
        OutcomeSpace::new(["a", "b", "c"]).unwrap()
    }

    #[test]
    fn builtin_scores_at_uniform() {
        let u = Distribution::<f64>::uniform(abc());
        for x in 0..3 {
            assert_relative_eq!(brier_score(x, &u), -1.0 / 3.0, epsilon = 1e-15);
            assert_relative_eq!(spherical_score(x, &u), -1.0 / 3f64.sqrt(), epsilon = 1e-15);
        }
        let ab = OutcomeSpace::new(["a", "b"]).unwrap();
        let p = Distribution::new(ab, vec![0.5, 0.5]).unwrap();
        assert_relative_eq!(log_score(0, &p), std::f64::consts::LN_2, epsilon = 1e-15);
    }

    #[test]
    fn brier_matches_simplex_form() {
        let p = Distribution::new(abc(), vec![0.2, 0.3, 0.5]).unwrap();
        let norm2 = 0.04 + 0.09 + 0.25;
        for x in 0..3 {
            assert_relative_eq!(brier_score(x, &p), norm2 - 2.0 * p.get(x), epsilon = 1e-15);
        }
    }

    #[test]
    fn extension_examples() {
        let s = abc();
        let brier = ScoringRule::<f64>::brier(s.clone());
        let ext = homogeneous_extension(&brier);
        let w = Weights::new(s.clone(), vec![2.0, 2.0, 2.0]).unwrap();
        assert!(ext.is_homogeneous());
        assert_relative_eq!(ext.score(0, &w), -1.0 / 3.0, epsilon = 1e-15);

        let ab = OutcomeSpace::new(["a", "b"]).unwrap();
        let log_ext = homogeneous_extension(&ScoringRule::<f64>::log(ab.clone()));
        let ln2 = std::f64::consts::LN_2;
        assert_relative_eq!(log_ext.score_raw(0, &[1.0, 1.0]), ln2, epsilon = 1e-15);
        assert_relative_eq!(log_ext.score_raw(0, &[5.0, 5.0]), ln2, epsilon = 1e-15);

        // The extended log score at outcome a depends on the other entries.
        let log_ext3 = homogeneous_extension(&ScoringRule::<f64>::log(s));
        let base = log_ext3.score_raw(0, &[1.0, 2.0, 3.0]);
        assert!((log_ext3.score_raw(0, &[1.0, 2.0, 4.0]) - base).abs() > 1e-3);
        assert!((log_ext3.score_raw(0, &[1.0, 5.0, 3.0]) - base).abs() > 1e-3);
    }

    #[test]
    fn expected_entropy_divergence() {
        let s = abc();
        let brier = ScoringRule::<f64>::brier(s.clone());
        let u = Distribution::uniform(s.clone());
        assert_relative_eq!(entropy(&brier, &u).unwrap(), -1.0 / 3.0, epsilon = 1e-15);
        for rule in [
            brier.clone(),
            ScoringRule::log(s.clone()),
            ScoringRule::spherical(s.clone()),
        ] {
            let p = Distribution::new(s.clone(), vec![0.1, 0.6, 0.3]).unwrap();
            assert_eq!(divergence(&rule, &p, &p).unwrap(), 0.0);
        }

        let ab = OutcomeSpace::new(["a", "b"]).unwrap();
        let rule = ScoringRule::<f64>::brier(ab.clone());
        let p = Distribution::new(ab.clone(), vec![0.6, 0.4]).unwrap();
        let q = Distribution::new(ab, vec![0.5, 0.5]).unwrap();
        // ‖p - q‖² by direct expansion
        let brute: f64 = p.values().iter().zip(q.values()).map(|(a, b)| (a - b) * (a - b)).sum();
        assert_relative_eq!(brute, 0.02, epsilon = 1e-15);
        assert_relative_eq!(divergence(&rule, &p, &q).unwrap(), brute, epsilon = 1e-15);
    }

    #[test]
    fn space_mismatch_is_domain_error() {
        let rule = ScoringRule::<f64>::brier(abc());
        let other = OutcomeSpace::new(["x", "y", "z"]).unwrap();
        let p = Distribution::uniform(other);
        assert!(matches!(entropy(&rule, &p), Err(Error::Domain(_))));
    }

    #[test]
    fn entropy_function_requires_homogeneity() {
        let s = abc();
        assert!(ScoringRule::<f64>::log(s.clone()).entropy_function().is_err());
        let h = homogeneous_extension(&ScoringRule::<f64>::log(s)).entropy_function().unwrap();
        // Σ α_x (-ln(α_x/α_+)) at α = (1,1,2)
        let expect = -(0.25f64.ln() + 0.25f64.ln() + 2.0 * 0.5f64.ln());
        assert_relative_eq!(h.value(&[1.0, 1.0, 2.0]), expect, epsilon = 1e-12);
    }
}
