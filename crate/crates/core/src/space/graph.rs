use std::sync::Arc;

use super::{OutcomeSet, OutcomeSpace};
use crate::error::{Error, Result};

/// A locality structure `N = {N_x}` with `x ∈ N_x` for every outcome.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NeighborhoodSystem {
    space: Arc<OutcomeSpace>,
    neighborhoods: Vec<OutcomeSet>,
}

impl NeighborhoodSystem {
    /// Builds the system; each `x` is added to its own neighborhood if missing.
    pub fn new(space: Arc<OutcomeSpace>, neighborhoods: Vec<OutcomeSet>) -> Result<Self> {
        if neighborhoods.len() != space.size() {
            return Err(Error::Domain(format!(
                "{} neighborhoods given for a space of {} outcomes",
                neighborhoods.len(),
                space.size()
            )));
        }
        let mut neighborhoods = neighborhoods;
        for (x, n) in neighborhoods.iter_mut().enumerate() {
            for &y in n.iter() {
                space.check_outcome(y)?;
            }
            n.insert(x);
        }
        Ok(Self {
            space,
            neighborhoods,
        })
    }

    /// `N_x = {x}` for all `x`.
    pub fn trivial(space: Arc<OutcomeSpace>) -> Self {
        let neighborhoods = (0..space.size()).map(|x| OutcomeSet::from([x])).collect();
        Self {
            space,
            neighborhoods,
        }
    }

    pub fn space(&self) -> &Arc<OutcomeSpace> {
        &self.space
    }

    pub fn neighborhood(&self, x: usize) -> &OutcomeSet {
        &self.neighborhoods[x]
    }

    pub fn neighborhoods(&self) -> &[OutcomeSet] {
        &self.neighborhoods
    }
}

/// Simple undirected graph on the outcomes of a space.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UndirectedGraph {
    space: Arc<OutcomeSpace>,
    adjacency: Vec<OutcomeSet>,
}

impl UndirectedGraph {
    pub fn new<I>(space: Arc<OutcomeSpace>, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut g = Self::edgeless(space);
        for (x, y) in edges {
            g.add_edge(x, y)?;
        }
        Ok(g)
    }

    pub fn edgeless(space: Arc<OutcomeSpace>) -> Self {
        let adjacency = vec![OutcomeSet::new(); space.size()];
        Self { space, adjacency }
    }

    pub fn complete(space: Arc<OutcomeSpace>) -> Self {
        let n = space.size();
        let adjacency = (0..n)
            .map(|x| (0..n).filter(|&y| y != x).collect())
            .collect();
        Self { space, adjacency }
    }

    /// Path `0 - 1 - ... - (n-1)` in index order.
    pub fn path(space: Arc<OutcomeSpace>) -> Self {
        let n = space.size();
        Self::new(space, (1..n).map(|i| (i - 1, i))).expect("path edges are valid")
    }

    pub fn add_edge(&mut self, x: usize, y: usize) -> Result<()> {
        self.space.check_outcome(x)?;
        self.space.check_outcome(y)?;
        if x == y {
            return Err(Error::Domain(format!(
                "self-loop on {:?} is not allowed",
                self.space.label(x)
            )));
        }
        self.adjacency[x].insert(y);
        self.adjacency[y].insert(x);
        Ok(())
    }

    pub fn space(&self) -> &Arc<OutcomeSpace> {
        &self.space
    }

    pub fn size(&self) -> usize {
        self.adjacency.len()
    }

    pub fn boundary(&self, x: usize) -> &OutcomeSet {
        &self.adjacency[x]
    }

    pub fn closed_neighborhood(&self, x: usize) -> OutcomeSet {
        let mut n = self.adjacency[x].clone();
        n.insert(x);
        n
    }

    pub fn is_adjacent(&self, x: usize, y: usize) -> bool {
        self.adjacency[x].contains(&y)
    }

    /// Edges `(x, y)` with `x < y`, in lexicographic order.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        self.adjacency
            .iter()
            .enumerate()
            .flat_map(|(x, n)| n.range(x + 1..).map(move |&y| (x, y)))
            .collect()
    }

    /// Every pair of distinct members is adjacent.
    pub fn is_complete_set(&self, set: &OutcomeSet) -> bool {
        set.iter()
            .all(|&x| set.range(x + 1..).all(|&y| self.is_adjacent(x, y)))
    }

    /// The system `N_x = {x} ∪ boundary(x)`.
    pub fn neighborhood_system(&self) -> NeighborhoodSystem {
        let neighborhoods = (0..self.size())
            .map(|x| self.closed_neighborhood(x))
            .collect();
        NeighborhoodSystem {
            space: self.space.clone(),
            neighborhoods,
        }
    }
}

/// `ρ(x) = { y : x ∈ N_z and y ∈ N_z for some z }`.
pub fn relatives(ns: &NeighborhoodSystem, x: usize) -> Result<OutcomeSet> {
    ns.space.check_outcome(x)?;
    Ok(ns
        .neighborhoods
        .iter()
        .filter(|n| n.contains(&x))
        .flat_map(|n| n.iter().copied())
        .collect())
}

/// Witness for the disjoint-relatives condition.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DisjointRelatives {
    pub y1: usize,
    pub y2: usize,
    pub rho1: OutcomeSet,
    pub rho2: OutcomeSet,
    /// An outcome outside `rho1 ∪ rho2`.
    pub outside: usize,
}

/// Exhaustive search for `y1, y2` with `ρ(y1) ∩ ρ(y2) = ∅` and `ρ(y1) ∪ ρ(y2) ≠ X`.
///
/// Pairs are scanned in lexicographic order, so the first witness found is returned.
pub fn check_condition_disjoint(ns: &NeighborhoodSystem) -> Option<DisjointRelatives> {
    let n = ns.space.size();
    let rho: Vec<OutcomeSet> = (0..n)
        .map(|x| relatives(ns, x).expect("index in range"))
        .collect();
    for y1 in 0..n {
        for y2 in y1 + 1..n {
            if !rho[y1].is_disjoint(&rho[y2]) {
                continue;
            }
            if let Some(outside) = (0..n).find(|z| !rho[y1].contains(z) && !rho[y2].contains(z)) {
                return Some(DisjointRelatives {
                    y1,
                    y2,
                    rho1: rho[y1].clone(),
                    rho2: rho[y2].clone(),
                    outside,
                });
            }
        }
    }
    None
}

/// Edge `x - y` iff `x ∈ N_y` and `y ∈ N_x`.
pub fn symmetric_core(ns: &NeighborhoodSystem) -> UndirectedGraph {
    let mut g = UndirectedGraph::edgeless(ns.space.clone());
    for (x, nx) in ns.neighborhoods.iter().enumerate() {
        for &y in nx.range(x + 1..) {
            if ns.neighborhoods[y].contains(&x) {
                g.add_edge(x, y).expect("valid edge");
            }
        }
    }
    g
}
