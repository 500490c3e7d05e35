use std::sync::Arc;

use super::entropy::{CliqueEntropy, EntropyFunction, GradientFn, ValueFn};
use super::rule::{ScoreFn, ScoringRule};
use crate::error::{Error, Result};
use crate::scalar::{stable_sum, Scalar};
use crate::space::{OutcomeSpace, UndirectedGraph};

/// Builds the additive rule `S(x, α) = Σ_{B ∋ x} ∂H_B(α_B)/∂α_x` and its
/// entropy `H(α) = Σ_B H_B(α_B)`.
///
/// The rule is 0-homogeneous and local for the graph joining every pair of
/// outcomes that share a clique.
pub fn clique_additive_rule<T: Scalar>(
    space: Arc<OutcomeSpace>,
    entropies: Vec<CliqueEntropy<T>>,
) -> Result<(ScoringRule<T>, EntropyFunction<T>)> {
    let n = space.size();
    let mut graph = UndirectedGraph::edgeless(space.clone());
    // For each outcome, the (clique, position) pairs it takes part in.
    let mut membership: Vec<Vec<(usize, usize)>> = vec![Vec::new(); n];
    for (b, e) in entropies.iter().enumerate() {
        for (pos, &x) in e.clique().iter().enumerate() {
            if x >= n {
                return Err(Error::Domain(format!(
                    "clique {:?} references outcome {x} outside a space of size {n}",
                    e.clique()
                )));
            }
            membership[x].push((b, pos));
        }
        for (i, &x) in e.clique().iter().enumerate() {
            for &y in &e.clique()[i + 1..] {
                graph.add_edge(x, y)?;
            }
        }
    }
    let regular = entropies.iter().all(CliqueEntropy::is_regular);
    let entropies = Arc::new(entropies);
    let membership = Arc::new(membership);

    let es = entropies.clone();
    let score: ScoreFn<T> = Arc::new(move |x, a: &[T]| {
        stable_sum(membership[x].iter().map(|&(b, pos)| {
            let e = &es[b];
            let sub: Vec<T> = e.clique().iter().map(|&y| a[y]).collect();
            let mut g = vec![T::zero(); sub.len()];
            e.gradient_into(&sub, &mut g);
            g[pos]
        }))
    });

    let es = entropies.clone();
    let value: ValueFn<T> = Arc::new(move |a: &[T]| {
        stable_sum(es.iter().map(|e| {
            let sub: Vec<T> = e.clique().iter().map(|&y| a[y]).collect();
            e.value(&sub)
        }))
    });
    let es = entropies;
    let gradient: GradientFn<T> = Arc::new(move |a: &[T], out: &mut [T]| {
        out.iter_mut().for_each(|o| *o = T::zero());
        for e in es.iter() {
            let sub: Vec<T> = e.clique().iter().map(|&y| a[y]).collect();
            let g = e.gradient(&sub);
            for (&y, gy) in e.clique().iter().zip(g) {
                out[y] = out[y] + gy;
            }
        }
    });
    let h = EntropyFunction::new(n, value, Some(gradient), regular);
    let rule = ScoringRule::new("clique-additive", space, score)
        .homogeneous(true)
        .with_locality(graph.neighborhood_system())
        .with_entropy(h.clone());
    Ok((rule, h))
}

/// Brier clique entropies on every maximal clique of `graph`.
pub fn brier_on_cliques<T: Scalar>(graph: &UndirectedGraph) -> Result<(ScoringRule<T>, EntropyFunction<T>)> {
    let cliques = crate::space::enumerate_cliques(graph)?;
    let entropies = cliques
        .into_iter()
        .map(|c| CliqueEntropy::brier(c.into_iter().collect()))
        .collect::<Result<Vec<_>>>()?;
    clique_additive_rule(graph.space().clone(), entropies)
}
