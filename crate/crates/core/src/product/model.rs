use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use super::ProductSpace;
use crate::error::{Error, Result};
use crate::scalar::{stable_sum, Scalar};
use crate::space::{Distribution, Weights};

/// Unnormalized log weight `(configuration, θ) -> ln w`.
pub type LogWeightFn<T> = Arc<dyn Fn(&[usize], &[T]) -> T + Send + Sync>;
/// The part of the log weight that involves coordinate `i`: `(i, configuration, θ) -> energy`.
pub type LocalEnergyFn<T> = Arc<dyn Fn(usize, &[usize], &[T]) -> T + Send + Sync>;

/// A parametric family of distributions on a product space, known up to its
/// normalizing constant.
#[derive(Clone)]
pub struct MrfModel<T> {
    family: String,
    space: ProductSpace,
    neighbors: Vec<BTreeSet<usize>>,
    log_weight: LogWeightFn<T>,
    local_energy: Option<LocalEnergyFn<T>>,
    parameter_box: Vec<(T, T)>,
}

impl<T: Scalar> MrfModel<T> {
    /// `edges` are pairs of coordinate indices (0-based) of the interaction graph.
    pub fn new(
        family: impl Into<String>,
        space: ProductSpace,
        edges: &[(usize, usize)],
        log_weight: LogWeightFn<T>,
        parameter_box: Vec<(T, T)>,
    ) -> Result<Self> {
        let k = space.k();
        let mut neighbors = vec![BTreeSet::new(); k];
        for &(i, j) in edges {
            if i >= k || j >= k || i == j {
                return Err(Error::Domain(format!(
                    "interaction edge ({}, {}) invalid for {k} coordinates",
                    i + 1,
                    j + 1
                )));
            }
            neighbors[i].insert(j);
            neighbors[j].insert(i);
        }
        for &(lo, hi) in &parameter_box {
            if !(lo.is_finite() && hi.is_finite() && lo <= hi) {
                return Err(Error::Parameter(format!("invalid parameter interval [{lo}, {hi}]")));
            }
        }
        Ok(Self {
            family: family.into(),
            space,
            neighbors,
            log_weight,
            local_energy: None,
            parameter_box,
        })
    }

    /// Supplies the terms of the log weight involving one coordinate. Full
    /// conditionals then only read the neighbours of that coordinate.
    pub fn with_local_energy(mut self, f: LocalEnergyFn<T>) -> Self {
        self.local_energy = Some(f);
        self
    }

    /// Binary Ising model on `{0,1}^k`: `ln w(x) = β Σ_{(i,j) ∈ K} x_i x_j + h Σ_i x_i`,
    /// `θ = (β, h)`.
    pub fn ising(k: usize, edges: &[(usize, usize)], parameter_box: [(T, T); 2]) -> Result<Self> {
        let space = ProductSpace::binary(k)?;
        let edge_list: Arc<Vec<(usize, usize)>> = Arc::new(edges.to_vec());
        let el = edge_list.clone();
        let log_weight: LogWeightFn<T> = Arc::new(move |x: &[usize], th: &[T]| {
            let pairs = el.iter().filter(|&&(i, j)| x[i] == 1 && x[j] == 1).count();
            let ones = x.iter().filter(|&&v| v == 1).count();
            th[0] * T::from_usize_lossy(pairs) + th[1] * T::from_usize_lossy(ones)
        });
        let model = Self::new("ising", space, edges, log_weight, parameter_box.to_vec())?;
        let nb = Arc::new(model.neighbors.clone());
        Ok(model.with_local_energy(Arc::new(move |i, x: &[usize], th: &[T]| {
            if x[i] == 0 {
                return T::zero();
            }
            let on = nb[i].iter().filter(|&&j| x[j] == 1).count();
            th[0] * T::from_usize_lossy(on) + th[1]
        })))
    }

    /// Ising model on an `rows × cols` grid with 4-neighbour interactions.
    pub fn ising_grid(rows: usize, cols: usize, parameter_box: [(T, T); 2]) -> Result<Self> {
        let mut edges = Vec::new();
        for r in 0..rows {
            for c in 0..cols {
                let i = r * cols + c;
                if c + 1 < cols {
                    edges.push((i, i + 1));
                }
                if r + 1 < rows {
                    edges.push((i, i + cols));
                }
            }
        }
        Self::ising(rows * cols, &edges, parameter_box)
    }

    /// Ising model on the cycle `1 - 2 - ... - k - 1`.
    pub fn ising_cycle(k: usize, parameter_box: [(T, T); 2]) -> Result<Self> {
        let edges: Vec<_> = (0..k).map(|i| (i, (i + 1) % k)).collect();
        Self::ising(k, &edges, parameter_box)
    }

    /// `ln w ≡ 0`.
    pub fn uniform(space: ProductSpace) -> Result<Self> {
        Self::new("uniform", space, &[], Arc::new(|_: &[usize], _: &[T]| T::zero()), vec![])
    }

    /// Independent binary coordinates: `ln w(x) = Σ_i θ_i x_i`.
    pub fn independent(k: usize, parameter_box: Vec<(T, T)>) -> Result<Self> {
        if parameter_box.len() != k {
            return Err(Error::Parameter(format!(
                "independent model on {k} coordinates needs {k} parameter intervals"
            )));
        }
        let space = ProductSpace::binary(k)?;
        Ok(Self::new(
            "independent",
            space,
            &[],
            Arc::new(|x: &[usize], th: &[T]| {
                stable_sum(x.iter().zip(th).map(|(&v, &t)| if v == 1 { t } else { T::zero() }))
            }),
            parameter_box,
        )?
        .with_local_energy(Arc::new(|i, x: &[usize], th: &[T]| {
            if x[i] == 1 {
                th[i]
            } else {
                T::zero()
            }
        })))
    }

    /// A fixed joint distribution given as a table over the enumerated configurations.
    /// No parameters; the interaction graph is complete.
    pub fn from_joint(space: ProductSpace, joint: &Distribution<T>) -> Result<Self> {
        if space.size() != Some(joint.len()) {
            return Err(Error::Domain(format!(
                "joint table has {} entries, product space has {:?}",
                joint.len(),
                space.size()
            )));
        }
        let k = space.k();
        let edges: Vec<_> = (0..k).flat_map(|i| (i + 1..k).map(move |j| (i, j))).collect();
        let logs: Arc<Vec<T>> = Arc::new(joint.values().iter().map(|v| v.ln()).collect());
        let sp = space.clone();
        Self::new(
            "joint-table",
            space,
            &edges,
            Arc::new(move |x: &[usize], _: &[T]| logs[sp.index_of(x)]),
            vec![],
        )
    }

    pub fn family(&self) -> &str {
        &self.family
    }

    pub fn space(&self) -> &ProductSpace {
        &self.space
    }

    pub fn neighbors(&self, i: usize) -> &BTreeSet<usize> {
        &self.neighbors[i]
    }

    pub fn edges(&self) -> Vec<(usize, usize)> {
        self.neighbors
            .iter()
            .enumerate()
            .flat_map(|(i, n)| n.range(i + 1..).map(move |&j| (i, j)))
            .collect()
    }

    pub fn parameter_dim(&self) -> usize {
        self.parameter_box.len()
    }

    pub fn parameter_box(&self) -> &[(T, T)] {
        &self.parameter_box
    }

    pub fn log_weight(&self, config: &[usize], theta: &[T]) -> T {
        (self.log_weight)(config, theta)
    }

    pub(crate) fn check_theta(&self, theta: &[T]) -> Result<()> {
        if theta.len() != self.parameter_dim() {
            return Err(Error::Parameter(format!(
                "model {:?} has {} parameters, got {}",
                self.family,
                self.parameter_dim(),
                theta.len()
            )));
        }
        Ok(())
    }

    /// Exact joint distribution by enumeration.
    pub fn joint(&self, theta: &[T]) -> Result<Distribution<T>> {
        self.check_theta(theta)?;
        let configs = self.space.configs()?;
        let logs: Vec<T> = configs.iter().map(|c| self.log_weight(c, theta)).collect();
        let max = logs.iter().copied().fold(T::neg_infinity(), T::max);
        let w: Vec<T> = logs.iter().map(|&l| (l - max).exp()).collect();
        let total = stable_sum(w.iter().copied());
        Distribution::new(
            self.space.joint_space()?,
            w.into_iter().map(|v| v / total).collect(),
        )
    }

    /// Unnormalized log weights of coordinate `i` taking each of its values.
    pub(crate) fn conditional_logits(&self, config: &[usize], i: usize, theta: &[T]) -> Vec<T> {
        let mut x = config.to_vec();
        (0..self.space.factor_size(i))
            .map(|v| {
                x[i] = v;
                match &self.local_energy {
                    Some(f) => f(i, &x, theta),
                    None => self.log_weight(&x, theta),
                }
            })
            .collect()
    }
}

impl<T> fmt::Debug for MrfModel<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("MrfModel")
            .field("family", &self.family)
            .field("k", &self.space.k())
            .field("neighbors", &self.neighbors)
            .finish_non_exhaustive()
    }
}

pub(crate) fn softmax<T: Scalar>(logits: &[T]) -> Vec<T> {
    let max = logits.iter().copied().fold(T::neg_infinity(), T::max);
    let w: Vec<T> = logits.iter().map(|&l| (l - max).exp()).collect();
    let total = stable_sum(w.iter().copied());
    // keep entries strictly positive under extreme logits
    w.into_iter()
        .map(|v| (v / total).max(T::min_positive_value()))
        .collect()
}

/// `p(X_i = · | X^{∖i} = config^{∖i})` from unnormalized weights.
pub fn full_conditional<T: Scalar>(
    model: &MrfModel<T>,
    config: &[usize],
    i: usize,
    theta: &[T],
) -> Result<Distribution<T>> {
    model.space.validate(config)?;
    model.check_theta(theta)?;
    if i >= model.space.k() {
        return Err(Error::Domain(format!(
            "coordinate {} out of range for {} coordinates",
            i + 1,
            model.space.k()
        )));
    }
    let probs = softmax(&model.conditional_logits(config, i, theta));
    // The factor space owns the labels; entries are positive by construction.
    Ok(crate::space::normalize(&Weights::new(
        model.space.factor(i).clone(),
        probs,
    )?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    const BOX: [(f64, f64); 2] = [(-3.0, 3.0), (-3.0, 3.0)];

    #[test]
    fn independent_model_is_logistic() {
        let m = MrfModel::independent(3, vec![(-5.0, 5.0); 3]).unwrap();
        let th = [0.7, -1.2, 0.1];
        for other in [[0, 0], [1, 1], [0, 1]] {
            let c = full_conditional(&m, &[other[0], 0, other[1]], 1, &th).unwrap();
            assert_relative_eq!(c.get(1), 1.0 / (1.0 + (1.2f64).exp()), epsilon = 1e-15);
        }
    }

    #[test]
    fn uniform_model_has_uniform_conditionals() {
        let m = MrfModel::<f64>::uniform(ProductSpace::from_sizes(&[3, 2]).unwrap()).unwrap();
        let c = full_conditional(&m, &[2, 1], 0, &[]).unwrap();
        for &v in c.values() {
            assert_relative_eq!(v, 1.0 / 3.0, epsilon = 1e-15);
        }
    }

    #[test]
    fn two_node_ising_by_enumeration() {
        let beta = 0.8;
        let m = MrfModel::ising(2, &[(0, 1)], BOX).unwrap();
        let c = full_conditional(&m, &[0, 1], 0, &[beta, 0.0]).unwrap();
        let z = 1.0 + beta.exp();
        assert_relative_eq!(c.get(0), 1.0 / z, epsilon = 1e-15);
        assert_relative_eq!(c.get(1), beta.exp() / z, epsilon = 1e-15);
    }

    #[test]
    fn bad_inputs() {
        let m = MrfModel::ising(2, &[(0, 1)], BOX).unwrap();
        assert!(full_conditional(&m, &[0, 1], 2, &[0.1, 0.0]).is_err());
        assert!(full_conditional(&m, &[0, 2], 0, &[0.1, 0.0]).is_err());
        assert!(full_conditional(&m, &[0, 1], 0, &[0.1]).is_err());
        assert!(MrfModel::<f64>::ising(2, &[(0, 0)], BOX).is_err());
        assert!(MrfModel::<f64>::ising(2, &[(0, 1)], [(1.0, -1.0), (0.0, 0.0)]).is_err());
    }

    #[test]
    fn joint_matches_direct_normalization() {
        let m = MrfModel::ising_cycle(4, BOX).unwrap();
        let th = [0.5, -0.2];
        let j = m.joint(&th).unwrap();
        let configs = m.space().configs().unwrap();
        let w: Vec<f64> = configs.iter().map(|c| m.log_weight(c, &th).exp()).collect();
        let z: f64 = w.iter().sum();
        for (a, b) in j.values().iter().zip(&w) {
            assert_relative_eq!(*a, b / z, epsilon = 1e-15);
        }
    }

    fn arb_grid_case() -> impl Strategy<Value = (Vec<usize>, usize, f64, f64, f64)> {
        (
            proptest::collection::vec(0usize..2, 9),
            0usize..9,
            -2.0f64..2.0,
            -2.0f64..2.0,
            -50.0f64..50.0,
        )
    }

    proptest! {
        #[test]
        fn conditionals_normalized_and_shift_invariant((x, i, beta, h, shift) in arb_grid_case()) {
            let m = MrfModel::ising_grid(3, 3, BOX).unwrap();
            let c = full_conditional(&m, &x, i, &[beta, h]).unwrap();
            prop_assert!((c.values().iter().sum::<f64>() - 1.0).abs() <= 1e-12);

            // adding a constant to the log weight (generic path, no local energy)
            let lw = m.clone();
            let shifted = MrfModel::new(
                "shifted",
                m.space().clone(),
                &m.edges(),
                Arc::new(move |x: &[usize], th: &[f64]| lw.log_weight(x, th) + shift),
                m.parameter_box().to_vec(),
            ).unwrap();
            let d = full_conditional(&shifted, &x, i, &[beta, h]).unwrap();
            for (a, b) in c.values().iter().zip(d.values()) {
                prop_assert!((a - b).abs() <= 1e-12);
            }
        }

        #[test]
        fn non_neighbors_do_not_matter((x, i, beta, h, _s) in arb_grid_case()) {
            let m = MrfModel::ising_grid(3, 3, BOX).unwrap();
            let base = full_conditional(&m, &x, i, &[beta, h]).unwrap();
            for j in 0..9 {
                if j == i || m.neighbors(i).contains(&j) {
                    continue;
                }
                let mut y = x.clone();
                y[j] = 1 - y[j];
                let c = full_conditional(&m, &y, i, &[beta, h]).unwrap();
                prop_assert_eq!(c.values(), base.values());
            }
        }
    }
}
