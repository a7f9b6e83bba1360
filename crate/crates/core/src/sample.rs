//! Test corpora: non-isomorphic free trees, seeded random trees and subsets,
//! and canonical forms of (vertex-colored) trees for isomorphism dedup.

use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::graph::{is_forest, Graph, PredominatedGraph, Vertex};

/// Deterministic RNG used by every seeded sampler in the crate.
pub fn rng_from_seed(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Per-task RNG derived from `(seed, index)`, so batch results do not depend
/// on generation order.
pub fn derived_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// All non-isomorphic trees on `n` vertices, ordered by canonical form.
/// Built by attaching a leaf to every vertex of every tree on `n-1` vertices.
pub fn free_trees(n: usize) -> Vec<Graph> {
    if n == 0 {
        return Vec::new();
    }
    let mut level: BTreeMap<String, Graph> = BTreeMap::new();
    level.insert(tree_canonical_form(&Graph::empty(1)), Graph::empty(1));
    for size in 2..=n {
        let mut next = BTreeMap::new();
        for t in level.values() {
            let base: Vec<(Vertex, Vertex)> = t.edges().collect();
            for v in 0..t.n() {
                let mut edges = base.clone();
                edges.push((v, size - 1));
                let g = Graph::from_edges(size, edges).expect("leaf attachment is simple");
                next.entry(tree_canonical_form(&g)).or_insert(g);
            }
        }
        level = next;
    }
    level.into_values().collect()
}

/// Uniform random parent array: vertex `i > 0` attaches to a uniform earlier vertex.
pub fn random_tree(n: usize, rng: &mut impl Rng) -> Graph {
    let edges: Vec<(Vertex, Vertex)> = (1..n).map(|i| (rng.gen_range(0..i), i)).collect();
    Graph::from_edges(n, edges).expect("parent arrays give trees")
}

/// Random tree with vertex ids shuffled, so structure is not tied to id order.
pub fn random_tree_shuffled(n: usize, rng: &mut impl Rng) -> Graph {
    let mut perm: Vec<Vertex> = (0..n).collect();
    perm.shuffle(rng);
    let edges: Vec<(Vertex, Vertex)> = (1..n)
        .map(|i| (perm[rng.gen_range(0..i)], perm[i]))
        .collect();
    Graph::from_edges(n, edges).expect("parent arrays give trees")
}

/// Each vertex independently with probability 1/2, sorted.
pub fn random_subset(n: usize, rng: &mut impl Rng) -> Vec<Vertex> {
    (0..n).filter(|_| rng.gen_bool(0.5)).collect()
}

/// All subsets of `0..n` as sorted vectors, in bitmask order.
pub fn all_subsets(n: usize) -> impl Iterator<Item = Vec<Vertex>> {
    assert!(n < 64, "subset enumeration needs n < 64");
    (0u64..1 << n).map(move |m| (0..n).filter(|&v| m >> v & 1 == 1).collect())
}

/// Predominated trees over every non-isomorphic tree with `1..=max_n`
/// vertices: every `D` when `n <= all_d_up_to`, otherwise `samples` random
/// `D` per tree drawn from `derived_rng(seed, n)`.
pub fn predominated_tree_corpus(
    max_n: usize,
    all_d_up_to: usize,
    samples: usize,
    seed: u64,
) -> Vec<PredominatedGraph> {
    let mut out = Vec::new();
    for n in 1..=max_n {
        let mut rng = derived_rng(seed, n as u64);
        for t in free_trees(n) {
            let sets: Vec<Vec<Vertex>> = if n <= all_d_up_to {
                all_subsets(n).collect()
            } else {
                (0..samples).map(|_| random_subset(n, &mut rng)).collect()
            };
            for d in sets {
                out.push(PredominatedGraph::new(t.clone(), d).expect("subsets are in range"));
            }
        }
    }
    out
}

/// Canonical string of an unlabeled tree.
pub fn tree_canonical_form(t: &Graph) -> String {
    colored_tree_canonical_form(t, &vec![0; t.n()])
}

/// Canonical string of a tree whose vertices carry colors: equal strings iff
/// the trees are isomorphic by a color-preserving map. AHU encoding rooted at
/// the center (minimum over the two centers of a bicentral tree).
pub fn colored_tree_canonical_form(t: &Graph, colors: &[u32]) -> String {
    assert!(is_forest(t) && (t.n() <= 1 || t.edge_count() + 1 == t.n()));
    if t.n() == 0 {
        return String::new();
    }
    centers(t)
        .into_iter()
        .map(|c| encode(t, colors, c))
        .min()
        .expect("a tree has a center")
}

fn centers(t: &Graph) -> Vec<Vertex> {
    let n = t.n();
    if n <= 2 {
        return (0..n).collect();
    }
    let mut degree: Vec<usize> = (0..n).map(|v| t.degree(v)).collect();
    let mut layer: Vec<Vertex> = (0..n).filter(|&v| degree[v] == 1).collect();
    let mut remaining = n;
    while remaining > 2 {
        remaining -= layer.len();
        let mut next = Vec::new();
        for &v in &layer {
            degree[v] = 0;
            for &w in t.neighbors(v) {
                if degree[w] > 1 {
                    degree[w] -= 1;
                    if degree[w] == 1 {
                        next.push(w);
                    }
                }
            }
        }
        layer = next;
    }
    let mut c = layer;
    c.sort_unstable();
    c
}

fn encode(t: &Graph, colors: &[u32], root: Vertex) -> String {
    // iterative post-order so deep paths are fine
    let n = t.n();
    let mut parent = vec![usize::MAX; n];
    let mut order = vec![root];
    let mut seen = vec![false; n];
    seen[root] = true;
    let mut i = 0;
    while i < order.len() {
        let u = order[i];
        i += 1;
        for &w in t.neighbors(u) {
            if !seen[w] {
                seen[w] = true;
                parent[w] = u;
                order.push(w);
            }
        }
    }
    let mut code: Vec<String> = vec![String::new(); n];
    let mut child_codes: Vec<Vec<String>> = vec![Vec::new(); n];
    for &u in order.iter().rev() {
        let mut kids = std::mem::take(&mut child_codes[u]);
        kids.sort_unstable();
        code[u] = format!("{}({})", colors[u], kids.concat());
        if parent[u] != usize::MAX {
            let c = std::mem::take(&mut code[u]);
            child_codes[parent[u]].push(c);
        }
    }
    std::mem::take(&mut code[root])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::is_tree;

    #[test]
    fn free_tree_counts() {
        let counts: Vec<usize> = (1..=9).map(|n| free_trees(n).len()).collect();
        assert_eq!(counts, [1, 1, 1, 2, 3, 6, 11, 23, 47]);
        assert!(free_trees(7).iter().all(is_tree));
    }

    #[test]
    fn canonical_forms_detect_isomorphism() {
        let a = Graph::from_edges(4, [(0, 1), (1, 2), (2, 3)]).unwrap();
        let b = Graph::from_edges(4, [(2, 0), (0, 3), (3, 1)]).unwrap();
        let star = Graph::from_edges(4, [(0, 1), (0, 2), (0, 3)]).unwrap();
        assert_eq!(tree_canonical_form(&a), tree_canonical_form(&b));
        assert_ne!(tree_canonical_form(&a), tree_canonical_form(&star));
        assert_ne!(
            colored_tree_canonical_form(&a, &[0, 1, 0, 1]),
            colored_tree_canonical_form(&a, &[1, 0, 0, 1])
        );
    }

    #[test]
    fn seeded_samplers_are_deterministic() {
        let t1 = random_tree(30, &mut rng_from_seed(7));
        let t2 = random_tree(30, &mut rng_from_seed(7));
        assert_eq!(t1, t2);
        assert!(is_tree(&t1));
        assert!(is_tree(&random_tree_shuffled(30, &mut rng_from_seed(1))));
        let a = random_subset(20, &mut derived_rng(3, 1));
        let b = random_subset(20, &mut derived_rng(3, 1));
        assert_eq!(a, b);
        assert_eq!(all_subsets(3).count(), 8);
    }

    #[test]
    fn corpus_sizes() {
        // trees on 1..=4 vertices: 1, 1, 1, 2, with 2, 4, 8, 16 subsets each
        assert_eq!(predominated_tree_corpus(4, 4, 0, 0).len(), 2 + 4 + 8 + 32);
        assert_eq!(predominated_tree_corpus(4, 2, 3, 0).len(), 2 + 4 + 3 + 6);
        assert_eq!(predominated_tree_corpus(5, 3, 4, 9), predominated_tree_corpus(5, 3, 4, 9));
    }
}
