//! Search of small predominated cacti for MBD critical instances that are not
//! double-odd replacement cacti.
//!
//! Only atomic instances are examined (`D` independent, no isolated
//! predominated vertex). For those, a substructure `H` with `D = V∖X(H)`
//! must contain every edge and vertex, so the question becomes whether the
//! whole graph, with `X = V∖D`, is a member of 𝒞; [`matches_cactus_family`]
//! decides that from the graph alone, without a construction trace.

use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::game::Solver;
use crate::graph::{bipartition, blocks, is_cactus, Graph, IdMap, PredominatedGraph, Vertex};
use crate::sample::{random_tree_shuffled, rng_from_seed};
use crate::tree::Substructure;

use super::join::is_in_s;

/// Largest order enumerated exhaustively; larger searches are sampled.
pub const EXHAUSTIVE_LIMIT: usize = 7;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchReport {
    pub max_n: usize,
    pub exhaustive: bool,
    pub seed: u64,
    pub budget: u64,
    /// Cacti (graphs) generated.
    pub graphs_examined: u64,
    /// Atomic predominated instances checked by the game oracle.
    pub instances_checked: u64,
    pub critical_found: u64,
    pub matched: u64,
    /// Critical instances the matcher could not explain, in graph text format.
    pub unmatched: Vec<String>,
    pub budget_exhausted: bool,
}

/// Whether `g` with black set `black` is a member of 𝒞: a bipartite cactus
/// with `black` as one class, in which every cycle has exactly one white
/// vertex of degree above 2 and at most one such black vertex, and
/// contracting each cycle to an edge between those two vertices (any black
/// cycle vertex when there is no black one of high degree) yields a member of 𝒮.
pub fn matches_cactus_family(g: &Graph, black: &[bool]) -> bool {
    let n = g.n();
    if n == 0 || black.len() != n || !is_cactus(g) {
        return false;
    }
    let Some(side) = bipartition(g) else {
        return false;
    };
    let Some(first) = (0..n).find(|&v| black[v]) else {
        return false;
    };
    if (0..n).any(|v| black[v] != (side[v] == side[first])) {
        return false;
    }
    let mut keep = vec![true; n];
    let mut edges = Vec::new();
    for block in blocks(g) {
        if block.vertices.len() == 2 {
            edges.push(block.edges[0]);
            continue;
        }
        let high: Vec<Vertex> = block
            .vertices
            .iter()
            .copied()
            .filter(|&v| g.degree(v) > 2)
            .collect();
        let whites: Vec<Vertex> = high.iter().copied().filter(|&v| !black[v]).collect();
        let blacks: Vec<Vertex> = high.iter().copied().filter(|&v| black[v]).collect();
        if whites.len() != 1 || blacks.len() > 1 {
            return false;
        }
        let w = whites[0];
        let b = match blacks.first() {
            Some(&b) => b,
            None => *block
                .vertices
                .iter()
                .find(|&&v| black[v])
                .expect("an even cycle has black vertices"),
        };
        for &v in &block.vertices {
            if v != w && v != b {
                keep[v] = false;
            }
        }
        edges.push((b, w));
    }
    let map = IdMap::from_mask(&keep);
    let relabel = |v: Vertex| map.new_id(v).expect("kept vertex");
    let f = Substructure::new(
        0..map.len(),
        edges.into_iter().map(|(a, b)| (relabel(a), relabel(b))),
        (0..n).filter(|&v| keep[v] && black[v]).map(relabel),
    );
    is_in_s(&f)
}

/// Atomic: `D` independent and no predominated vertex isolated; `V∖D` nonempty.
fn is_atomic_candidate(g: &Graph, d: &[bool]) -> bool {
    (0..g.n()).any(|v| !d[v])
        && (0..g.n()).all(|v| {
            !d[v] || (g.degree(v) > 0 && g.neighbors(v).iter().all(|&w| !d[w]))
        })
}

struct Searcher<'a> {
    solver: &'a Solver,
    report: SearchReport,
}

impl Searcher<'_> {
    /// Returns false once the budget is spent.
    fn check(&mut self, g: &Graph, d: &[bool]) -> Result<bool> {
        if self.report.instances_checked >= self.report.budget {
            self.report.budget_exhausted = true;
            return Ok(false);
        }
        self.report.instances_checked += 1;
        let pg = PredominatedGraph::from_mask(g.clone(), d.to_vec());
        if self.solver.is_mbd_critical(&pg)? {
            self.report.critical_found += 1;
            let black: Vec<bool> = d.iter().map(|&x| !x).collect();
            if matches_cactus_family(g, &black) {
                self.report.matched += 1;
            } else {
                self.report.unmatched.push(pg.render());
            }
        }
        Ok(true)
    }

    fn all_atomic(&mut self, g: &Graph) -> Result<bool> {
        self.report.graphs_examined += 1;
        let n = g.n();
        for mask in 0u64..1 << n {
            let d: Vec<bool> = (0..n).map(|v| mask >> v & 1 == 1).collect();
            if is_atomic_candidate(g, &d) && !self.check(g, &d)? {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// Enumerates (for `max_n <=` [`EXHAUSTIVE_LIMIT`]) or samples predominated
/// cacti of order `1..=max_n`, checks each atomic instance for criticality
/// with the game oracle, and runs the membership matcher on critical ones.
/// Exhaustive mode covers every cactus up to isomorphism (labelings with
/// nonincreasing degree sequences) and every atomic `D`. `budget` caps the
/// number of oracle-checked instances; hitting it is reported, not an error.
pub fn search_cactus_counterexample(
    max_n: usize,
    budget: u64,
    seed: u64,
    solver: &Solver,
) -> Result<SearchReport> {
    let limit = solver.config().vertex_limit.min(crate::game::MAX_SOLVER_VERTICES);
    if max_n > limit {
        return Err(Error::Capacity {
            what: "cactus search order",
            actual: max_n,
            limit,
        });
    }
    let exhaustive = max_n <= EXHAUSTIVE_LIMIT;
    let mut s = Searcher {
        solver,
        report: SearchReport {
            max_n,
            exhaustive,
            seed,
            budget,
            graphs_examined: 0,
            instances_checked: 0,
            critical_found: 0,
            matched: 0,
            unmatched: Vec::new(),
            budget_exhausted: false,
        },
    };
    if exhaustive {
        'sizes: for n in 1..=max_n {
            for g in cacti_with_sorted_degrees(n) {
                if !s.all_atomic(&g)? {
                    break 'sizes;
                }
            }
        }
    } else if max_n > 0 {
        let mut rng = rng_from_seed(seed);
        loop {
            let n = rng.gen_range(1..=max_n);
            let g = random_cactus(n, &mut rng);
            s.report.graphs_examined += 1;
            let d = random_independent_set(&g, &mut rng);
            if is_atomic_candidate(&g, &d) && !s.check(&g, &d)? {
                break;
            }
        }
    }
    Ok(s.report)
}

/// Connected cacti on `n` labeled vertices with `deg(0) >= deg(1) >= ...`;
/// every cactus on `n` vertices is isomorphic to at least one of them.
fn cacti_with_sorted_degrees(n: usize) -> Vec<Graph> {
    let pairs: Vec<(Vertex, Vertex)> = (0..n)
        .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
        .collect();
    let max_edges = 3 * n.saturating_sub(1) / 2;
    let mut out = Vec::new();
    let mut degree = vec![0usize; n];
    for mask in 0u64..1 << pairs.len() {
        let m = mask.count_ones() as usize;
        if m + 1 < n || m > max_edges {
            continue;
        }
        degree.iter_mut().for_each(|d| *d = 0);
        for (i, &(u, v)) in pairs.iter().enumerate() {
            if mask >> i & 1 == 1 {
                degree[u] += 1;
                degree[v] += 1;
            }
        }
        if degree.windows(2).any(|w| w[0] < w[1]) {
            continue;
        }
        let edges = pairs
            .iter()
            .enumerate()
            .filter(|&(i, _)| mask >> i & 1 == 1)
            .map(|(_, &e)| e);
        let g = Graph::from_edges(n, edges).expect("pairs are simple");
        if is_cactus(&g) {
            out.push(g);
        }
    }
    out
}

/// A random tree plus random chords kept only while the graph stays a cactus.
fn random_cactus(n: usize, rng: &mut impl Rng) -> Graph {
    let mut g = random_tree_shuffled(n, rng);
    if n < 3 {
        return g;
    }
    for _ in 0..n {
        let u = rng.gen_range(0..n);
        let v = rng.gen_range(0..n);
        if u == v || g.has_edge(u, v) {
            continue;
        }
        let mut edges: Vec<(Vertex, Vertex)> = g.edges().collect();
        edges.push((u, v));
        let candidate = Graph::from_edges(n, edges).expect("new edge is simple");
        if is_cactus(&candidate) {
            g = candidate;
        }
    }
    g
}

fn random_independent_set(g: &Graph, rng: &mut impl Rng) -> Vec<bool> {
    let mut order: Vec<Vertex> = (0..g.n()).collect();
    order.shuffle(rng);
    let mut d = vec![false; g.n()];
    for v in order {
        if rng.gen_bool(0.5) && g.neighbors(v).iter().all(|&w| !d[w]) {
            d[v] = true;
        }
    }
    d
}
