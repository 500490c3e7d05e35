use std::collections::BTreeMap;

use super::{to_f64s, ViolationLog, Witness};
use crate::error::{Error, Result};
use crate::scalar::{stable_sum, Scalar};
use crate::scoring::{EntropyFunction, ValueFn};
use crate::space::{OutcomeSet, UndirectedGraph};

/// Largest space the decomposition enumerates subsets of.
pub const MAX_MOBIUS_OUTCOMES: usize = 12;
/// Largest space for which [`MobiusDecomposition::table`] materializes all terms.
pub const MAX_TABLE_OUTCOMES: usize = 8;

const RECONSTRUCTION_TOL: f64 = 1e-9;
const HOMOGENEITY_TOL: f64 = 1e-9;
const HOMOGENEITY_SCALINGS: [f64; 3] = [0.25, 2.0, 10.0];

/// Reference point `α*` the anchored evaluations `η_A` are taken at.
#[derive(Debug, Clone, PartialEq)]
pub enum Anchor<T> {
    /// `α* = 0`; requires a regular entropy. Terms are then 1-homogeneous.
    Zero,
    /// `α* = 1`.
    Ones,
    Custom(Vec<T>),
}

impl<T: Scalar> Anchor<T> {
    fn resolve(&self, n: usize) -> Result<Vec<T>> {
        match self {
            Self::Zero => Ok(vec![T::zero(); n]),
            Self::Ones => Ok(vec![T::one(); n]),
            Self::Custom(v) if v.len() == n => {
                if v.iter().all(|x| x.is_finite() && *x >= T::zero()) {
                    Ok(v.clone())
                } else {
                    Err(Error::Domain("anchor entries must be finite and nonnegative".into()))
                }
            }
            Self::Custom(v) => Err(Error::Domain(format!(
                "anchor has {} entries, space has {n}",
                v.len()
            ))),
        }
    }
}

/// One interaction term `h_B(α_B) = Σ_{A ⊆ B} (-1)^{|B∖A|} H(α_A, α*_{X∖A})`,
/// evaluated on demand from the entropy and the anchor.
#[derive(Clone)]
pub struct MobiusTerm<T> {
    subset: Vec<usize>,
    anchor: Vec<T>,
    h: ValueFn<T>,
}

impl<T: Scalar> MobiusTerm<T> {
    pub fn subset(&self) -> &[usize] {
        &self.subset
    }

    /// `alpha_b` holds the weights of the members of `B`, in index order.
    pub fn eval(&self, alpha_b: &[T]) -> T {
        assert_eq!(alpha_b.len(), self.subset.len(), "one weight per member of B");
        let k = self.subset.len();
        let mut point = self.anchor.clone();
        let mut terms = Vec::with_capacity(1 << k);
        for a in 0u32..(1 << k) {
            for (j, &x) in self.subset.iter().enumerate() {
                point[x] = if a & (1 << j) != 0 {
                    alpha_b[j]
                } else {
                    self.anchor[x]
                };
            }
            let v = (self.h)(&point);
            terms.push(if (k - a.count_ones() as usize).is_multiple_of(2) { v } else { -v });
        }
        stable_sum(terms)
    }
}

/// Möbius expansion of an entropy function over the subset lattice, with
/// diagnostics gathered on a probe set.
pub struct MobiusDecomposition<T> {
    pub anchor: Vec<T>,
    /// `max |h_B|` over probes and non-complete `B`.
    pub incomplete_residual: f64,
    /// `max |Σ_B h_B(α_B) - H(α)|` over probes.
    pub reconstruction_error: f64,
    /// `max |h_B(λα_B) - λ h_B(α_B)|` over nonzero terms; present when `α* = 0`.
    pub homogeneity_violation: Option<f64>,
    /// Subsets whose term exceeded the zero threshold on some probe.
    pub nonzero_terms: Vec<OutcomeSet>,
    /// Non-complete subsets with a nonzero term, worst first.
    pub witnesses: Vec<Witness>,
    h: ValueFn<T>,
    n: usize,
}

impl<T: Scalar> MobiusDecomposition<T> {
    pub fn term(&self, subset: &OutcomeSet) -> Result<MobiusTerm<T>> {
        if let Some(&x) = subset.iter().find(|&&x| x >= self.n) {
            return Err(Error::Domain(format!("outcome {x} outside space of size {}", self.n)));
        }
        Ok(MobiusTerm {
            subset: subset.iter().copied().collect(),
            anchor: self.anchor.clone(),
            h: self.h.clone(),
        })
    }

    /// Every `h_B(α_B)` at `alpha`, keyed by `B`.
    pub fn table(&self, alpha: &[T]) -> Result<BTreeMap<OutcomeSet, T>> {
        if self.n > MAX_TABLE_OUTCOMES {
            return Err(Error::Capacity {
                what: "Möbius table export",
                size: self.n,
                limit: MAX_TABLE_OUTCOMES,
            });
        }
        let terms = all_terms(self.h.as_ref(), &self.anchor, alpha);
        Ok(terms
            .into_iter()
            .enumerate()
            .map(|(mask, v)| (mask_set(mask as u32), v))
            .collect())
    }

    pub fn passed(&self) -> bool {
        self.incomplete_residual <= RECONSTRUCTION_TOL
            && self.reconstruction_error <= RECONSTRUCTION_TOL
            && self.homogeneity_violation.is_none_or(|v| v <= HOMOGENEITY_TOL)
    }
}

fn mask_set(mut m: u32) -> OutcomeSet {
    let mut s = OutcomeSet::new();
    while m != 0 {
        s.insert(m.trailing_zeros() as usize);
        m &= m - 1;
    }
    s
}

/// `η_A` for every `A`, then the subset-lattice Möbius transform in place.
fn all_terms<T: Scalar>(h: &(dyn Fn(&[T]) -> T + Send + Sync), anchor: &[T], alpha: &[T]) -> Vec<T> {
    let n = alpha.len();
    let size = 1usize << n;
    let mut point = anchor.to_vec();
    let mut eta = Vec::with_capacity(size);
    for a in 0..size {
        for x in 0..n {
            point[x] = if a & (1 << x) != 0 { alpha[x] } else { anchor[x] };
        }
        eta.push(h(&point));
    }
    for x in 0..n {
        let bit = 1 << x;
        for m in 0..size {
            if m & bit != 0 {
                eta[m] = eta[m] - eta[m ^ bit];
            }
        }
    }
    eta
}

/// Expands `H` as `Σ_{B ⊆ X} h_B(α_B)` around `anchor` and measures, over
/// `probes`, how far terms on non-complete sets of `graph` are from zero.
///
/// A zero anchor requires `H` declared regular; the terms are then also
/// checked for 1-homogeneity.
pub fn mobius_decompose<T: Scalar>(
    h: &EntropyFunction<T>,
    graph: &UndirectedGraph,
    anchor: &Anchor<T>,
    probes: &[Vec<T>],
) -> Result<MobiusDecomposition<T>> {
    let n = graph.size();
    if n > MAX_MOBIUS_OUTCOMES {
        return Err(Error::Capacity {
            what: "Möbius decomposition space",
            size: n,
            limit: MAX_MOBIUS_OUTCOMES,
        });
    }
    if h.dim() != n {
        return Err(Error::Domain(format!(
            "entropy has dimension {}, graph has {n} outcomes",
            h.dim()
        )));
    }
    let anchor = anchor.resolve(n)?;
    let zero_anchor = anchor.iter().all(|&v| v == T::zero());
    if anchor.iter().any(|&v| v == T::zero()) && !h.is_regular() {
        return Err(Error::Precondition(
            "a zero anchor entry needs an entropy declared regular".into(),
        ));
    }
    let complete: Vec<bool> = (0u32..(1 << n))
        .map(|m| graph.is_complete_set(&mask_set(m)))
        .collect();
    let value = h.value_fn();

    let mut incomplete = ViolationLog::new();
    let mut reconstruction: f64 = 0.0;
    let mut homog: f64 = 0.0;
    let mut nonzero = vec![false; 1 << n];
    for alpha in probes {
        if alpha.len() != n {
            return Err(Error::Domain(format!(
                "probe has {} entries, space has {n}",
                alpha.len()
            )));
        }
        let terms = all_terms(value.as_ref(), &anchor, alpha);
        let full = value(alpha);
        let total = stable_sum(terms.iter().copied());
        let scale = 1.0f64.max(full.abs().as_f64());
        reconstruction = reconstruction.max((total - full).abs().as_f64() / scale);
        for (m, t) in terms.iter().enumerate() {
            let tv = t.abs().as_f64();
            if tv > RECONSTRUCTION_TOL * scale {
                nonzero[m] = true;
            }
            if !complete[m] {
                let mut input = to_f64s(alpha);
                input.extend(mask_set(m as u32).into_iter().map(|x| x as f64));
                incomplete.record(tv, RECONSTRUCTION_TOL, || Witness {
                    input,
                    observed: t.as_f64(),
                    expected: 0.0,
                });
            }
        }
        if zero_anchor {
            for &lambda in &HOMOGENEITY_SCALINGS {
                let l = T::lit(lambda);
                let scaled: Vec<T> = alpha.iter().map(|&v| v * l).collect();
                let st = all_terms(value.as_ref(), &anchor, &scaled);
                for (a, b) in terms.iter().zip(&st) {
                    let want = *a * l;
                    let v = (*b - want).abs().as_f64() / 1.0f64.max(want.abs().as_f64());
                    homog = homog.max(v);
                }
            }
        }
    }
    let report = incomplete.finish("", RECONSTRUCTION_TOL);
    Ok(MobiusDecomposition {
        anchor,
        incomplete_residual: report.max_violation,
        reconstruction_error: reconstruction,
        homogeneity_violation: zero_anchor.then_some(homog),
        nonzero_terms: nonzero
            .iter()
            .enumerate()
            .filter(|(_, &z)| z)
            .map(|(m, _)| mask_set(m as u32))
            .collect(),
        witnesses: report.witnesses,
        h: value,
        n,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scoring::{brier_on_cliques, homogeneous_extension, ScoringRule};
    use crate::space::OutcomeSpace;
    use crate::verify::random_weights;

    #[test]
    fn constant_entropy_lives_on_the_empty_set() {
        let g = UndirectedGraph::edgeless(OutcomeSpace::integers(1, 4).unwrap());
        let h = EntropyFunction::from_fn(4, |_: &[f64]| 2.5);
        let d = mobius_decompose(&h, &g, &Anchor::Custom(vec![0.3, 1.0, 2.0, 0.7]), &random_weights(4, 5, 1)).unwrap();
        let t = d.table(&[1.0, 2.0, 3.0, 4.0]).unwrap();
        for (b, v) in t {
            assert_eq!(v, if b.is_empty() { 2.5 } else { 0.0 });
        }
        assert_eq!(d.nonzero_terms, vec![OutcomeSet::new()]);
        assert!(d.passed());
    }

    #[test]
    fn additive_brier_on_path_decomposes_on_cliques() {
        let s = OutcomeSpace::integers(1, 5).unwrap();
        let g = UndirectedGraph::path(s);
        let (_, h) = brier_on_cliques::<f64>(&g).unwrap();
        let d = mobius_decompose(&h, &g, &Anchor::Zero, &random_weights(5, 50, 2)).unwrap();
        assert!(d.incomplete_residual <= 1e-9, "{}", d.incomplete_residual);
        assert!(d.reconstruction_error <= 1e-9);
        assert!(d.homogeneity_violation.unwrap() <= 1e-9);
        assert!(d.nonzero_terms.iter().all(|b| g.is_complete_set(b)));
        assert!(d.passed());
    }

    #[test]
    fn closure_terms_match_fast_transform() {
        let s = OutcomeSpace::integers(1, 4).unwrap();
        let g = UndirectedGraph::path(s.clone());
        let h = ScoringRule::<f64>::spherical(s).entropy_function().unwrap();
        let d = mobius_decompose(&h, &g, &Anchor::Ones, &[]).unwrap();
        let alpha = [0.4, 1.3, 2.2, 0.9];
        for (b, v) in d.table(&alpha).unwrap() {
            let sub: Vec<f64> = b.iter().map(|&x| alpha[x]).collect();
            let direct = d.term(&b).unwrap().eval(&sub);
            assert!((direct - v).abs() < 1e-12, "{b:?}: {direct} vs {v}");
        }
    }

    #[test]
    fn counterexample_entropy_is_not_additive() {
        let s = OutcomeSpace::integers(1, 3).unwrap();
        let ext = homogeneous_extension(&ScoringRule::<f64>::coarse_brier(s.clone()).unwrap());
        let h = ext.entropy_function().unwrap();
        assert!(h.is_regular());
        let g = UndirectedGraph::new(s, [(0, 1)]).unwrap();
        let d = mobius_decompose(&h, &g, &Anchor::Zero, &random_weights(3, 20, 3)).unwrap();
        assert!(d.incomplete_residual > 1e-3);
        assert!(d.reconstruction_error <= 1e-9);
        assert!(!d.passed());
        let w = &d.witnesses[0];
        // non-complete subset reported after the probe coordinates
        assert!(w.input[3..].contains(&2.0));
    }

    #[test]
    fn zero_anchor_needs_regular_entropy() {
        let s = OutcomeSpace::integers(0, 3).unwrap();
        let rule = crate::scoring::power_pair_rule::<f64>(s.clone(), 2.0, 2.0).unwrap();
        let h = rule.entropy_function().unwrap();
        let g = UndirectedGraph::path(s);
        assert!(matches!(
            mobius_decompose(&h, &g, &Anchor::Zero, &[]),
            Err(Error::Precondition(_))
        ));
        let d = mobius_decompose(&h, &g, &Anchor::Ones, &random_weights(3, 10, 4)).unwrap();
        assert!(d.passed());
        assert!(d.homogeneity_violation.is_none());
    }

    #[test]
    fn capacity_limits() {
        let s = OutcomeSpace::integers(0, 13).unwrap();
        let g = UndirectedGraph::edgeless(s);
        let h = EntropyFunction::from_fn(13, |_: &[f64]| 0.0);
        assert!(matches!(
            mobius_decompose(&h, &g, &Anchor::Ones, &[]),
            Err(Error::Capacity { .. })
        ));
        let s9 = OutcomeSpace::integers(0, 9).unwrap();
        let h9 = EntropyFunction::from_fn(9, |_: &[f64]| 0.0);
        let d = mobius_decompose(&h9, &UndirectedGraph::edgeless(s9), &Anchor::Ones, &[]).unwrap();
        assert!(d.table(&[1.0; 9]).is_err());
    }

    #[test]
    fn complete_graph_has_no_incomplete_terms() {
        let s = OutcomeSpace::integers(1, 4).unwrap();
        let h = homogeneous_extension(&ScoringRule::<f64>::log(s.clone())).entropy_function().unwrap();
        let d = mobius_decompose(&h, &UndirectedGraph::complete(s), &Anchor::Ones, &random_weights(4, 10, 5)).unwrap();
        assert_eq!(d.incomplete_residual, 0.0);
        assert!(d.reconstruction_error <= 1e-9);
    }
}
