use super::{OutcomeSet, UndirectedGraph};
use crate::error::{Error, Result};

/// Largest graph accepted by the exhaustive clique routines.
pub const MAX_CLIQUE_VERTICES: usize = 25;

type Mask = u32;

fn masks(g: &UndirectedGraph) -> Result<Vec<Mask>> {
    if g.size() > MAX_CLIQUE_VERTICES {
        return Err(Error::Capacity {
            what: "clique enumeration graph",
            size: g.size(),
            limit: MAX_CLIQUE_VERTICES,
        });
    }
    Ok((0..g.size())
        .map(|x| g.boundary(x).iter().fold(0, |m, &y| m | (1 << y)))
        .collect())
}

fn to_set(mut m: Mask) -> OutcomeSet {
    let mut s = OutcomeSet::new();
    while m != 0 {
        let b = m.trailing_zeros() as usize;
        s.insert(b);
        m &= m - 1;
    }
    s
}

fn bron_kerbosch(adj: &[Mask], r: Mask, mut p: Mask, mut x: Mask, out: &mut Vec<Mask>) {
    if p == 0 {
        if x == 0 {
            out.push(r);
        }
        return;
    }
    // Tomita pivot: vertex of P ∪ X with the most neighbours in P.
    let pivot = {
        let mut best = (0u32, 0usize);
        let mut cand = p | x;
        while cand != 0 {
            let u = cand.trailing_zeros() as usize;
            cand &= cand - 1;
            let c = (adj[u] & p).count_ones();
            if c >= best.0 {
                best = (c, u);
            }
        }
        best.1
    };
    let mut todo = p & !adj[pivot];
    while todo != 0 {
        let v = todo.trailing_zeros() as usize;
        todo &= todo - 1;
        let bit = 1 << v;
        bron_kerbosch(adj, r | bit, p & adj[v], x & adj[v], out);
        p &= !bit;
        x |= bit;
    }
}

/// All maximal cliques of `g`, each as a sorted set, listed in lexicographic order.
pub fn enumerate_cliques(g: &UndirectedGraph) -> Result<Vec<OutcomeSet>> {
    let adj = masks(g)?;
    let all: Mask = if g.size() == 32 {
        Mask::MAX
    } else {
        (1 << g.size()) - 1
    };
    let mut out = Vec::new();
    bron_kerbosch(&adj, 0, all, 0, &mut out);
    let mut sets: Vec<OutcomeSet> = out.into_iter().map(to_set).collect();
    sets.sort();
    Ok(sets)
}

/// Every complete subset of `g`, including the empty set and singletons,
/// ordered by size and then lexicographically.
pub fn enumerate_complete_sets(g: &UndirectedGraph) -> Result<Vec<OutcomeSet>> {
    let adj = masks(g)?;
    let n = g.size();
    let mut out: Vec<Mask> = vec![0];
    // Extend each set only by vertices above its maximum, so each set is produced once.
    fn grow(adj: &[Mask], set: Mask, cand: Mask, out: &mut Vec<Mask>) {
        let mut c = cand;
        while c != 0 {
            let v = c.trailing_zeros() as usize;
            c &= c - 1;
            let next = set | (1 << v);
            out.push(next);
            let higher = if v + 1 >= 32 { 0 } else { !((1 << (v + 1)) - 1) };
            grow(adj, next, cand & adj[v] & higher, out);
        }
    }
    let all: Mask = if n == 32 { Mask::MAX } else { (1 << n) - 1 };
    grow(&adj, 0, all, &mut out);
    let mut sets: Vec<OutcomeSet> = out.into_iter().map(to_set).collect();
    sets.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    Ok(sets)
}
