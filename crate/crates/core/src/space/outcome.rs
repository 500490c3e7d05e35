use std::collections::{BTreeSet, HashMap};
use std::sync::Arc;

use crate::error::{Error, Result};

/// A set of outcomes, referenced by index.
pub type OutcomeSet = BTreeSet<usize>;

/// A finite, ordered sample space with at least two outcomes.
///
/// Outcomes are addressed by their dense index `0..size`; labels are only
/// used at I/O boundaries.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OutcomeSpace {
    labels: Vec<String>,
    index: HashMap<String, usize>,
}

impl OutcomeSpace {
    pub fn new<I, S>(labels: I) -> Result<Arc<Self>>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let labels: Vec<String> = labels.into_iter().map(Into::into).collect();
        if labels.len() < 2 {
            return Err(Error::Domain(format!(
                "an outcome space needs at least 2 outcomes, got {}",
                labels.len()
            )));
        }
        let mut index = HashMap::with_capacity(labels.len());
        for (i, l) in labels.iter().enumerate() {
            if index.insert(l.clone(), i).is_some() {
                return Err(Error::Domain(format!("duplicate outcome label {l:?}")));
            }
        }
        Ok(Arc::new(Self { labels, index }))
    }

    /// Outcomes labelled by the consecutive integers `start, start+1, ..`.
    pub fn integers(start: i64, count: usize) -> Result<Arc<Self>> {
        Self::new((0..count).map(|i| (start + i as i64).to_string()))
    }

    /// The sub-space spanned by `subset`, in index order. Unlike [`OutcomeSpace::new`]
    /// this accepts a single outcome, so that conditioning on a singleton is defined.
    pub fn restrict(&self, subset: &OutcomeSet) -> Result<Arc<Self>> {
        if subset.is_empty() {
            return Err(Error::Domain("cannot restrict to an empty subset".into()));
        }
        let mut labels = Vec::with_capacity(subset.len());
        let mut index = HashMap::with_capacity(subset.len());
        for &x in subset {
            self.check_outcome(x)?;
            index.insert(self.labels[x].clone(), labels.len());
            labels.push(self.labels[x].clone());
        }
        Ok(Arc::new(Self { labels, index }))
    }

    pub fn size(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, x: usize) -> &str {
        &self.labels[x]
    }

    pub fn index_of(&self, label: &str) -> Result<usize> {
        self.index
            .get(label)
            .copied()
            .ok_or_else(|| Error::Domain(format!("unknown outcome {label:?}")))
    }

    pub(crate) fn check_outcome(&self, x: usize) -> Result<()> {
        if x < self.size() {
            Ok(())
        } else {
            Err(Error::Domain(format!(
                "outcome index {x} out of range for space of size {}",
                self.size()
            )))
        }
    }

    pub fn full_set(&self) -> OutcomeSet {
        (0..self.size()).collect()
    }
}
