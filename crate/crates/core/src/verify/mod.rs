//! Numerical certification of structural properties of concrete rules:
//! properness, homogeneity and Euler's identity, locality, the key equation
//! and its Lagrange constant, supergradient inequalities, and the Möbius
//! clique decomposition of an entropy function.

mod checks;
mod fd;
mod key;
mod mobius;
mod probes;

pub use checks::{
    check_entropy_gradient, check_homogeneity, check_locality, check_mixed_partials,
    check_properness, check_rule_homogeneity, check_supergradient, simplex_grid, MAX_GRID_OUTCOMES,
};
pub use fd::{central_partial, fd_gradient, FD_GRADIENT_STEP, FD_STEP};
pub use key::{check_key_equation, KeyClass, KeyEquationReport};
pub use mobius::{mobius_decompose, Anchor, MobiusDecomposition, MobiusTerm, MAX_MOBIUS_OUTCOMES, MAX_TABLE_OUTCOMES};
pub use probes::{random_weights, simplex_probes, PROBE_FLOOR};

/// Outcome of one numerical check.
#[derive(Debug, Clone, PartialEq)]
pub struct CheckReport {
    pub name: String,
    pub passed: bool,
    pub max_violation: f64,
    pub tolerance: f64,
    /// Worst offending inputs, largest violation first.
    pub witnesses: Vec<Witness>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Witness {
    pub input: Vec<f64>,
    pub observed: f64,
    pub expected: f64,
}

/// Largest number of witnesses a report keeps.
pub const MAX_WITNESSES: usize = 8;

/// Accumulates violations in probe order; ties keep the earlier witness.
#[derive(Debug, Clone)]
pub(crate) struct ViolationLog {
    max: f64,
    witnesses: Vec<(f64, Witness)>,
}

impl ViolationLog {
    pub(crate) fn new() -> Self {
        Self {
            max: 0.0,
            witnesses: Vec::new(),
        }
    }

    /// Records `violation`; only inputs above `tolerance` become witnesses.
    pub(crate) fn record(&mut self, violation: f64, tolerance: f64, w: impl FnOnce() -> Witness) {
        let v = if violation.is_nan() { f64::INFINITY } else { violation };
        if v > self.max {
            self.max = v;
        }
        if v > tolerance {
            let pos = self.witnesses.partition_point(|(u, _)| *u >= v);
            if pos < MAX_WITNESSES {
                self.witnesses.insert(pos, (v, w()));
                self.witnesses.truncate(MAX_WITNESSES);
            }
        }
    }

    pub(crate) fn merge(mut self, other: ViolationLog, tolerance: f64) -> Self {
        self.max = self.max.max(other.max);
        for (v, w) in other.witnesses {
            self.record(v, tolerance, || w);
        }
        self
    }

    pub(crate) fn finish(self, name: impl Into<String>, tolerance: f64) -> CheckReport {
        CheckReport {
            name: name.into(),
            passed: self.max <= tolerance,
            max_violation: self.max,
            tolerance,
            witnesses: self.witnesses.into_iter().map(|(_, w)| w).collect(),
        }
    }
}

pub(crate) fn to_f64s<T: crate::Scalar>(v: &[T]) -> Vec<f64> {
    v.iter().map(|x| x.as_f64()).collect()
}
