//! Dominator-criticality of predominated trees via the associated
//! hypergraph `𝒳_T`, whose edges are the black sets `X(S)` of all
//! substructures `S` of `T`.
//!
//! Unlike game hypergraphs, `𝒳_T` is deduplicated by vertex set: only
//! transversality matters here, and it depends on the set family alone.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{is_tree, Graph, Vertex};
use crate::hypergraph::{EdgeKey, Hypergraph};
use crate::tree::enumerate_substructures;

/// `𝒳_T`, keyed by the index (in enumeration order) of the first substructure
/// with each distinct black set.
pub fn associated_hypergraph(t: &Graph) -> Result<Hypergraph> {
    if !is_tree(t) {
        return Err(Error::class("the associated hypergraph needs a tree"));
    }
    let mut h = Hypergraph::new(t.n());
    let mut seen = BTreeSet::new();
    for (i, s) in enumerate_substructures(t)?.into_iter().enumerate() {
        if seen.insert(s.fixed_degree.clone()) {
            h.insert_edge(EdgeKey::single(i as u32), s.fixed_degree)?;
        }
    }
    Ok(h)
}

fn edge_masks(h: &Hypergraph) -> Result<Vec<u64>> {
    if h.n() > 64 {
        return Err(Error::Capacity {
            what: "transversal hypergraph vertex count",
            actual: h.n(),
            limit: 64,
        });
    }
    Ok(h.edges()
        .map(|(_, e)| e.iter().fold(0u64, |m, &v| m | 1 << v))
        .collect())
}

/// `y` meets every edge and each of its vertices is the only one of `y` in
/// some edge (so no proper subset is a transversal).
pub fn is_minimal_transversal(h: &Hypergraph, y: &[Vertex]) -> bool {
    let mut inside = vec![false; h.n()];
    for &v in y {
        if v >= h.n() {
            return false;
        }
        inside[v] = true;
    }
    let mut has_private = vec![false; h.n()];
    for (_, e) in h.edges() {
        let mut hits = e.iter().filter(|&&v| inside[v]);
        match (hits.next(), hits.next()) {
            (None, _) => return false,
            (Some(&v), None) => has_private[v] = true,
            _ => {}
        }
    }
    y.iter().all(|&v| has_private[v])
}

/// `(T, D)` is Dominator-critical iff `𝒳_T` has an edge and `D` is a minimal
/// transversal of it. `D` must be nonempty.
pub fn is_dominator_critical_tree(t: &Graph, d: &[Vertex]) -> Result<bool> {
    if d.is_empty() {
        return Err(Error::invalid(
            "Dominator-criticality requires a nonempty predominated set",
        ));
    }
    if let Some(&v) = d.iter().find(|&&v| v >= t.n()) {
        return Err(Error::invalid(format!("vertex {v} out of range")));
    }
    let x = associated_hypergraph(t)?;
    Ok(x.edge_count() > 0 && is_minimal_transversal(&x, d))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TransversalList {
    /// Sorted vertex sets, ordered by size, then lexicographically.
    pub transversals: Vec<Vec<Vertex>>,
    /// The enumeration stopped at the cap; the list is incomplete.
    pub truncated: bool,
}

/// All minimal transversals of `h`, up to `cap` of them.
///
/// Branching: pick an uncovered edge with the fewest candidate vertices, try
/// each of its candidates (highest edge-degree first) and return it to the
/// candidate pool after its branch; a vertex may join only if every chosen
/// vertex keeps a private edge. Each minimal transversal is produced once.
pub fn enumerate_minimal_transversals(h: &Hypergraph, cap: usize) -> Result<TransversalList> {
    let edges = edge_masks(h)?;
    let degree = h.degrees();
    let mut state = Mmcs {
        edges: &edges,
        degree: &degree,
        cap,
        found: Vec::new(),
        truncated: false,
    };
    let all = if h.n() == 64 { u64::MAX } else { (1u64 << h.n()) - 1 };
    let uncovered: Vec<u64> = edges.clone();
    state.recurse(0, all, &uncovered);
    let mut transversals: Vec<Vec<Vertex>> = state
        .found
        .iter()
        .map(|&m| (0..64).filter(|&v| m >> v & 1 == 1).collect())
        .collect();
    transversals.sort_by(|a: &Vec<Vertex>, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    Ok(TransversalList {
        transversals,
        truncated: state.truncated,
    })
}

struct Mmcs<'a> {
    edges: &'a [u64],
    degree: &'a [usize],
    cap: usize,
    found: Vec<u64>,
    truncated: bool,
}

impl Mmcs<'_> {
    fn recurse(&mut self, chosen: u64, mut cand: u64, uncovered: &[u64]) {
        if self.truncated {
            return;
        }
        if uncovered.is_empty() {
            if self.found.len() == self.cap {
                self.truncated = true;
            } else {
                self.found.push(chosen);
            }
            return;
        }
        let e = *uncovered
            .iter()
            .min_by_key(|&&e| (e & cand).count_ones())
            .expect("nonempty");
        let mut branch: Vec<usize> = (0..64).filter(|&v| (e & cand) >> v & 1 == 1).collect();
        branch.sort_by_key(|&v| (std::cmp::Reverse(self.degree[v]), v));
        cand &= !e;
        for v in branch {
            let next = chosen | 1 << v;
            if self.all_have_private(next) {
                let rest: Vec<u64> = uncovered.iter().copied().filter(|&f| f >> v & 1 == 0).collect();
                self.recurse(next, cand, &rest);
                if self.truncated {
                    return;
                }
            }
            cand |= 1 << v;
        }
    }

    fn all_have_private(&self, chosen: u64) -> bool {
        let mut private = 0u64;
        for &f in self.edges {
            let hit = f & chosen;
            if hit.count_ones() == 1 {
                private |= hit;
            }
        }
        private == chosen
    }
}
