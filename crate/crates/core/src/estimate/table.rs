use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::scalar::{stable_sum, Scalar};

/// Frequencies `f_y` of nonnegative integer outcomes `y`. Counts may be
/// fractional (expected counts); file ingestion enforces integers.
#[derive(Debug, Clone, PartialEq)]
pub struct FrequencyTable<T> {
    counts: BTreeMap<u64, T>,
}

impl<T: Scalar> FrequencyTable<T> {
    pub fn new<I: IntoIterator<Item = (u64, T)>>(counts: I) -> Result<Self> {
        let mut map = BTreeMap::new();
        for (y, f) in counts {
            if !(f.is_finite() && f >= T::zero()) {
                return Err(Error::Data(format!("count for value {y} must be finite and >= 0, got {f}")));
            }
            let e = map.entry(y).or_insert_with(T::zero);
            *e = *e + f;
        }
        Ok(Self { counts: map })
    }

    /// `f_y`, zero when absent.
    pub fn get(&self, y: u64) -> T {
        self.counts.get(&y).copied().unwrap_or_else(T::zero)
    }

    pub fn iter(&self) -> impl Iterator<Item = (u64, T)> + '_ {
        self.counts.iter().map(|(&y, &f)| (y, f))
    }

    /// `n = Σ_y f_y`.
    pub fn n_total(&self) -> T {
        stable_sum(self.counts.values().copied())
    }

    /// `Σ_y y f_y`.
    pub fn sum_total(&self) -> T {
        stable_sum(self.iter().map(|(y, f)| T::from_u64(y).expect("value representable") * f))
    }

    /// Sample mean `Σ y f_y / Σ f_y`.
    pub fn mean(&self) -> Result<T> {
        let n = self.n_total();
        if n <= T::zero() {
            return Err(Error::Data("empty frequency table".into()));
        }
        Ok(self.sum_total() / n)
    }

    /// Largest value with a positive count.
    pub fn max_value(&self) -> Option<u64> {
        self.iter().filter(|(_, f)| *f > T::zero()).map(|(y, _)| y).last()
    }
}
