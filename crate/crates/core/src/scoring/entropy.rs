use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::scalar::{stable_sum, Scalar};

pub type ValueFn<T> = Arc<dyn Fn(&[T]) -> T + Send + Sync>;
pub type GradientFn<T> = Arc<dyn Fn(&[T], &mut [T]) + Send + Sync>;

/// A concave, 1-homogeneous function of the weights on one clique, with its
/// analytic gradient. The gradient is the clique's contribution to the score.
#[derive(Clone)]
pub struct CliqueEntropy<T> {
    clique: Vec<usize>,
    value: ValueFn<T>,
    gradient: GradientFn<T>,
    regular: bool,
}

impl<T: Scalar> CliqueEntropy<T> {
    /// `clique` lists outcome indices; the closures receive the restricted
    /// weights in that order. Duplicates and empty cliques are rejected.
    pub fn new(
        clique: Vec<usize>,
        value: ValueFn<T>,
        gradient: GradientFn<T>,
        regular: bool,
    ) -> Result<Self> {
        if clique.is_empty() {
            return Err(Error::Domain("clique must be nonempty".into()));
        }
        let mut sorted = clique.clone();
        sorted.sort_unstable();
        sorted.dedup();
        if sorted.len() != clique.len() {
            return Err(Error::Domain(format!("clique {clique:?} repeats an outcome")));
        }
        Ok(Self {
            clique,
            value,
            gradient,
            regular,
        })
    }

    /// `H_B(α_B) = -‖α_B‖² / α_{B,+}`, whose gradient is the Brier score.
    pub fn brier(clique: Vec<usize>) -> Result<Self> {
        Self::new(
            clique,
            Arc::new(brier_entropy::<T>),
            Arc::new(brier_gradient::<T>),
            true,
        )
    }

    /// `H_B(α_B) = -‖α_B‖`, whose gradient is the spherical score.
    pub fn spherical(clique: Vec<usize>) -> Result<Self> {
        Self::new(
            clique,
            Arc::new(spherical_entropy::<T>),
            Arc::new(spherical_gradient::<T>),
            true,
        )
    }

    pub fn clique(&self) -> &[usize] {
        &self.clique
    }

    pub fn is_regular(&self) -> bool {
        self.regular
    }

    pub fn value(&self, restricted: &[T]) -> T {
        (self.value)(restricted)
    }

    pub fn gradient(&self, restricted: &[T]) -> Vec<T> {
        let mut g = vec![T::zero(); restricted.len()];
        (self.gradient)(restricted, &mut g);
        g
    }

    pub(crate) fn gradient_into(&self, restricted: &[T], out: &mut [T]) {
        (self.gradient)(restricted, out)
    }
}

impl<T> fmt::Debug for CliqueEntropy<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CliqueEntropy")
            .field("clique", &self.clique)
            .field("regular", &self.regular)
            .finish_non_exhaustive()
    }
}

/// An entropy function `H` on the (closed) cone of weights over a whole space.
#[derive(Clone)]
pub struct EntropyFunction<T> {
    dim: usize,
    value: ValueFn<T>,
    gradient: Option<GradientFn<T>>,
    regular: bool,
}

impl<T: Scalar> EntropyFunction<T> {
    pub fn new(dim: usize, value: ValueFn<T>, gradient: Option<GradientFn<T>>, regular: bool) -> Self {
        Self {
            dim,
            value,
            gradient,
            regular,
        }
    }

    pub fn from_fn<F>(dim: usize, f: F) -> Self
    where
        F: Fn(&[T]) -> T + Send + Sync + 'static,
    {
        Self::new(dim, Arc::new(f), None, false)
    }

    /// Marks `H` as extendable by continuity to the closed cone, so that
    /// zero weights may be passed to [`EntropyFunction::value`].
    pub fn declare_regular(mut self, regular: bool) -> Self {
        self.regular = regular;
        self
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn is_regular(&self) -> bool {
        self.regular
    }

    pub fn has_gradient(&self) -> bool {
        self.gradient.is_some()
    }

    pub fn value(&self, alpha: &[T]) -> T {
        (self.value)(alpha)
    }

    pub fn gradient(&self, alpha: &[T]) -> Option<Vec<T>> {
        self.gradient.as_ref().map(|g| {
            let mut out = vec![T::zero(); alpha.len()];
            g(alpha, &mut out);
            out
        })
    }

    pub(crate) fn value_fn(&self) -> ValueFn<T> {
        self.value.clone()
    }
}

impl<T> fmt::Debug for EntropyFunction<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("EntropyFunction")
            .field("dim", &self.dim)
            .field("has_gradient", &self.gradient.is_some())
            .field("regular", &self.regular)
            .finish_non_exhaustive()
    }
}

fn sum_sq<T: Scalar>(a: &[T]) -> T {
    stable_sum(a.iter().map(|&v| v * v))
}

pub(crate) fn brier_entropy<T: Scalar>(a: &[T]) -> T {
    let total = stable_sum(a.iter().copied());
    if total == T::zero() {
        return T::zero();
    }
    -sum_sq(a) / total
}

pub(crate) fn brier_gradient<T: Scalar>(a: &[T], out: &mut [T]) {
    let total = stable_sum(a.iter().copied());
    let q = sum_sq(a) / (total * total);
    let two = T::lit(2.0);
    for (o, &v) in out.iter_mut().zip(a) {
        *o = q - two * v / total;
    }
}

pub(crate) fn spherical_entropy<T: Scalar>(a: &[T]) -> T {
    -sum_sq(a).sqrt()
}

pub(crate) fn spherical_gradient<T: Scalar>(a: &[T], out: &mut [T]) {
    let norm = sum_sq(a).sqrt();
    for (o, &v) in out.iter_mut().zip(a) {
        *o = -v / norm;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn fd_gradient(f: impl Fn(&[f64]) -> f64, a: &[f64]) -> Vec<f64> {
        (0..a.len())
            .map(|i| {
                let h = 1e-6 * a[i];
                let mut up = a.to_vec();
                let mut dn = a.to_vec();
                up[i] += h;
                dn[i] -= h;
                (f(&up) - f(&dn)) / (2.0 * h)
            })
            .collect()
    }

    fn check_entropy(e: &CliqueEntropy<f64>, a: &[f64], b: &[f64], t: f64, lambda: f64) {
        let v = e.value(a);
        let g = e.gradient(a);
        // 1-homogeneity
        let scaled: Vec<f64> = a.iter().map(|x| x * lambda).collect();
        assert!((e.value(&scaled) - lambda * v).abs() <= 1e-9 * (1.0 + (lambda * v).abs()));
        // Euler
        let euler: f64 = a.iter().zip(&g).map(|(x, y)| x * y).sum();
        assert!((euler - v).abs() <= 1e-8 * (1.0 + v.abs()));
        // concavity on a segment
        let mid: Vec<f64> = a.iter().zip(b).map(|(x, y)| t * y + (1.0 - t) * x).collect();
        assert!(e.value(&mid) >= t * e.value(b) + (1.0 - t) * v - 1e-10);
        // analytic gradient against central differences
        let fd = fd_gradient(|x| e.value(x), a);
        for (x, y) in g.iter().zip(&fd) {
            assert!((x - y).abs() <= 1e-6 * (1.0 + x.abs()));
        }
    }

    proptest! {
        #[test]
        fn builtin_entropies_are_homogeneous_concave_euler(
            a in proptest::collection::vec(0.02f64..5.0, 4),
            b in proptest::collection::vec(0.02f64..5.0, 4),
            t in 0.0f64..1.0,
            lambda in prop::sample::select(vec![1e-3, 0.5, 2.0, 1e3]),
        ) {
            check_entropy(&CliqueEntropy::brier(vec![0, 1, 2, 3]).unwrap(), &a, &b, t, lambda);
            check_entropy(&CliqueEntropy::spherical(vec![0, 1, 2, 3]).unwrap(), &a, &b, t, lambda);
        }
    }

    #[test]
    fn regular_entropies_vanish_at_the_origin() {
        let e = CliqueEntropy::<f64>::brier(vec![0, 1]).unwrap();
        assert_eq!(e.value(&[0.0, 0.0]), 0.0);
        assert!(e.value(&[0.0, 1e-300]).abs() <= 1e-300);
        let s = CliqueEntropy::<f64>::spherical(vec![0, 1]).unwrap();
        assert_eq!(s.value(&[0.0, 0.0]), 0.0);
    }

    #[test]
    fn rejects_malformed_cliques() {
        assert!(CliqueEntropy::<f64>::brier(vec![]).is_err());
        assert!(CliqueEntropy::<f64>::brier(vec![1, 1]).is_err());
    }
}
