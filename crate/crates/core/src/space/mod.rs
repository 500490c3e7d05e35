//! Finite outcome spaces, positive weight vectors, neighborhood systems and
//! undirected graphs, plus the combinatorics the locality theory rests on.

mod cliques;
mod graph;
mod outcome;
mod weights;

pub use cliques::{enumerate_cliques, enumerate_complete_sets, MAX_CLIQUE_VERTICES};
pub use graph::{
    check_condition_disjoint, relatives, symmetric_core, DisjointRelatives, NeighborhoodSystem,
    UndirectedGraph,
};
pub use outcome::{OutcomeSet, OutcomeSpace};
pub use weights::{conditional_on, normalize, Distribution, Weights};
