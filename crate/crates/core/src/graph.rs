//! Simple undirected graphs, predominated graphs, and the reductions that
//! connect them to game hypergraphs.

use std::collections::VecDeque;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hypergraph::{EdgeKey, Hypergraph};

pub type Vertex = usize;

/// Simple undirected graph on the dense vertex set `0..n`.
///
/// Adjacency is stored in compressed form; every neighbor slice is strictly
/// increasing, so there are no parallel edges, and self-loops are rejected at
/// construction.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Graph {
    offsets: Vec<usize>,
    targets: Vec<Vertex>,
}

impl Graph {
    pub fn empty(n: usize) -> Self {
        Graph {
            offsets: vec![0; n + 1],
            targets: Vec::new(),
        }
    }

    /// Builds a graph from an edge list. Repeated edges collapse to one.
    pub fn from_edges<I>(n: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Vertex, Vertex)>,
    {
        let mut pairs = Vec::new();
        for (u, v) in edges {
            if u >= n || v >= n {
                return Err(Error::invalid(format!(
                    "edge {u}-{v} out of range for {n} vertices"
                )));
            }
            if u == v {
                return Err(Error::invalid(format!("self-loop at {u}")));
            }
            pairs.push((u, v));
        }
        let mut degree = vec![0usize; n + 1];
        for &(u, v) in &pairs {
            degree[u] += 1;
            degree[v] += 1;
        }
        let mut offsets = vec![0usize; n + 1];
        for v in 0..n {
            offsets[v + 1] = offsets[v] + degree[v];
        }
        let mut fill = offsets.clone();
        let mut targets = vec![0; offsets[n]];
        for &(u, v) in &pairs {
            targets[fill[u]] = v;
            fill[u] += 1;
            targets[fill[v]] = u;
            fill[v] += 1;
        }
        // sort and dedup each slice, then compact
        let mut compact_offsets = vec![0usize; n + 1];
        let mut write = 0;
        for v in 0..n {
            let slice = &mut targets[offsets[v]..offsets[v + 1]];
            slice.sort_unstable();
            let start = offsets[v];
            let end = offsets[v + 1];
            let mut last = None;
            for i in start..end {
                let t = targets[i];
                if last != Some(t) {
                    targets[write] = t;
                    write += 1;
                    last = Some(t);
                }
            }
            compact_offsets[v + 1] = write;
        }
        targets.truncate(write);
        Ok(Graph {
            offsets: compact_offsets,
            targets,
        })
    }

    pub fn path(n: usize) -> Self {
        Graph::from_edges(n, (1..n).map(|v| (v - 1, v))).expect("valid path")
    }

    pub fn cycle(n: usize) -> Self {
        assert!(n >= 3, "cycle needs at least three vertices");
        Graph::from_edges(n, (0..n).map(|v| (v, (v + 1) % n))).expect("valid cycle")
    }

    pub fn complete(n: usize) -> Self {
        let edges = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v)));
        Graph::from_edges(n, edges).expect("valid complete graph")
    }

    pub fn n(&self) -> usize {
        self.offsets.len() - 1
    }

    pub fn edge_count(&self) -> usize {
        self.targets.len() / 2
    }

    pub fn neighbors(&self, v: Vertex) -> &[Vertex] {
        &self.targets[self.offsets[v]..self.offsets[v + 1]]
    }

    pub fn degree(&self, v: Vertex) -> usize {
        self.offsets[v + 1] - self.offsets[v]
    }

    pub fn has_edge(&self, u: Vertex, v: Vertex) -> bool {
        u < self.n() && v < self.n() && self.neighbors(u).binary_search(&v).is_ok()
    }

    /// Edges as `(min, max)` pairs, sorted.
    pub fn edges(&self) -> impl Iterator<Item = (Vertex, Vertex)> + '_ {
        (0..self.n()).flat_map(move |u| {
            self.neighbors(u)
                .iter()
                .copied()
                .filter(move |&v| v > u)
                .map(move |v| (u, v))
        })
    }

    /// Closed neighborhood `N[v]`, sorted.
    pub fn closed_neighborhood(&self, v: Vertex) -> Vec<Vertex> {
        let mut out: Vec<Vertex> = self.neighbors(v).to_vec();
        let pos = out.partition_point(|&u| u < v);
        out.insert(pos, v);
        out
    }

    /// Subgraph induced by the vertices where `keep` is true, with ids compacted.
    pub fn induced(&self, keep: &[bool]) -> (Graph, IdMap) {
        let map = IdMap::from_mask(keep);
        let edges = self
            .edges()
            .filter(|&(u, v)| keep[u] && keep[v])
            .map(|(u, v)| (map.new_id(u).unwrap(), map.new_id(v).unwrap()));
        let g = Graph::from_edges(map.len(), edges).expect("induced subgraph is simple");
        (g, map)
    }

    /// Same vertex set with the given edges removed.
    pub fn without_edges(&self, drop: impl Fn(Vertex, Vertex) -> bool) -> Graph {
        let edges: Vec<_> = self.edges().filter(|&(u, v)| !drop(u, v)).collect();
        Graph::from_edges(self.n(), edges).expect("subgraph is simple")
    }

    /// Disjoint union; vertices of `other` are shifted by `self.n()`.
    pub fn disjoint_union(&self, other: &Graph) -> Graph {
        let shift = self.n();
        let edges = self
            .edges()
            .chain(other.edges().map(|(u, v)| (u + shift, v + shift)));
        Graph::from_edges(self.n() + other.n(), edges.collect::<Vec<_>>()).expect("union")
    }
}

/// Mapping from compacted (new) ids back to original (old) ids.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IdMap {
    new_to_old: Vec<Vertex>,
}

impl IdMap {
    pub fn identity(n: usize) -> Self {
        IdMap {
            new_to_old: (0..n).collect(),
        }
    }

    pub fn from_mask(keep: &[bool]) -> Self {
        IdMap {
            new_to_old: keep
                .iter()
                .enumerate()
                .filter_map(|(v, &k)| k.then_some(v))
                .collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.new_to_old.len()
    }

    pub fn is_empty(&self) -> bool {
        self.new_to_old.is_empty()
    }

    pub fn old_id(&self, new: Vertex) -> Vertex {
        self.new_to_old[new]
    }

    pub fn new_id(&self, old: Vertex) -> Option<Vertex> {
        self.new_to_old.binary_search(&old).ok()
    }

    pub fn new_to_old(&self) -> &[Vertex] {
        &self.new_to_old
    }

    /// Composition: first `self`, then `inner` applied to the result's ids.
    pub fn then(&self, inner: &IdMap) -> IdMap {
        IdMap {
            new_to_old: inner.new_to_old.iter().map(|&v| self.new_to_old[v]).collect(),
        }
    }
}

/// A graph together with its set `D` of predominated vertices.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PredominatedGraph {
    graph: Graph,
    predominated: Vec<bool>,
}

impl PredominatedGraph {
    pub fn new<I>(graph: Graph, predominated: I) -> Result<Self>
    where
        I: IntoIterator<Item = Vertex>,
    {
        let mut mask = vec![false; graph.n()];
        for v in predominated {
            if v >= graph.n() {
                return Err(Error::invalid(format!(
                    "predominated vertex {v} out of range for {} vertices",
                    graph.n()
                )));
            }
            mask[v] = true;
        }
        Ok(PredominatedGraph {
            graph,
            predominated: mask,
        })
    }

    pub fn from_mask(graph: Graph, predominated: Vec<bool>) -> Self {
        assert_eq!(graph.n(), predominated.len());
        PredominatedGraph {
            graph,
            predominated,
        }
    }

    pub fn unpredominated(graph: Graph) -> Self {
        let n = graph.n();
        PredominatedGraph::from_mask(graph, vec![false; n])
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn n(&self) -> usize {
        self.graph.n()
    }

    pub fn is_predominated(&self, v: Vertex) -> bool {
        self.predominated[v]
    }

    pub fn predominated_mask(&self) -> &[bool] {
        &self.predominated
    }

    /// The set `D`, sorted.
    pub fn predominated(&self) -> Vec<Vertex> {
        (0..self.n()).filter(|&v| self.predominated[v]).collect()
    }

    /// `V \ D`, sorted.
    pub fn undominated(&self) -> Vec<Vertex> {
        (0..self.n()).filter(|&v| !self.predominated[v]).collect()
    }

    pub fn with_predominated(&self, v: Vertex, value: bool) -> Self {
        let mut next = self.clone();
        next.predominated[v] = value;
        next
    }

    /// Canonical text rendering; `parse_graph(render())` returns `self`.
    pub fn render(&self) -> String {
        let mut out = String::new();
        writeln!(out, "n={}", self.n()).unwrap();
        for (u, v) in self.graph.edges() {
            writeln!(out, "e {u} {v}").unwrap();
        }
        out.push_str("D:");
        for v in self.predominated() {
            write!(out, " {v}").unwrap();
        }
        out.push('\n');
        out
    }
}

/// Parses the line-oriented graph format:
///
/// ```text
/// # comment
/// n=3
/// e 0 1
/// e 1 2
/// D: 1
/// ```
pub fn parse_graph(text: &str) -> Result<PredominatedGraph> {
    let mut n: Option<usize> = None;
    let mut edges: Vec<(Vertex, Vertex)> = Vec::new();
    let mut seen = std::collections::HashSet::new();
    let mut predominated: Option<Vec<Vertex>> = None;
    let mut last_line = 0;

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        last_line = line_no;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        if predominated.is_some() {
            return Err(Error::parse(line_no, "content after the final `D:` line"));
        }
        let Some(count) = n else {
            let value = line
                .strip_prefix("n=")
                .ok_or_else(|| Error::parse(line_no, "expected header `n=<count>`"))?;
            n = Some(parse_usize(value.trim(), line_no)?);
            continue;
        };
        if let Some(rest) = line.strip_prefix("D:") {
            let mut ids = Vec::new();
            for tok in rest.split_whitespace() {
                let v = parse_usize(tok, line_no)?;
                if v >= count {
                    return Err(Error::parse(line_no, format!("vertex {v} out of range")));
                }
                if ids.contains(&v) {
                    return Err(Error::parse(line_no, format!("vertex {v} listed twice")));
                }
                ids.push(v);
            }
            predominated = Some(ids);
            continue;
        }
        let mut toks = line.split_whitespace();
        if toks.next() != Some("e") {
            return Err(Error::parse(line_no, format!("malformed line `{line}`")));
        }
        let (Some(a), Some(b), None) = (toks.next(), toks.next(), toks.next()) else {
            return Err(Error::parse(line_no, "edge line needs exactly two endpoints"));
        };
        let u = parse_usize(a, line_no)?;
        let v = parse_usize(b, line_no)?;
        if u >= count || v >= count {
            return Err(Error::parse(
                line_no,
                format!("edge {u}-{v} out of range for n={count}"),
            ));
        }
        if u == v {
            return Err(Error::parse(line_no, format!("self-loop at {u}")));
        }
        if !seen.insert((u.min(v), u.max(v))) {
            return Err(Error::parse(line_no, format!("duplicate edge {u}-{v}")));
        }
        edges.push((u, v));
    }

    let n = n.ok_or_else(|| Error::parse(last_line.max(1), "missing header `n=<count>`"))?;
    let predominated =
        predominated.ok_or_else(|| Error::parse(last_line.max(1), "missing final `D:` line"))?;
    let graph = Graph::from_edges(n, edges)?;
    PredominatedGraph::new(graph, predominated)
}

fn parse_usize(tok: &str, line: usize) -> Result<usize> {
    tok.parse()
        .map_err(|_| Error::parse(line, format!("expected a non-negative integer, got `{tok}`")))
}

/// `N(G, D)`: one edge keyed by `v` with vertex set `N[v]` for every `v` not in `D`.
pub fn closed_neighborhood_hypergraph(pg: &PredominatedGraph) -> Hypergraph {
    let mut h = Hypergraph::new(pg.n());
    for v in pg.undominated() {
        h.insert_edge(EdgeKey::single(v as u32), pg.graph().closed_neighborhood(v))
            .expect("closed neighborhoods are valid edges");
    }
    h
}

/// Result of [`atomize`]: the reduced graph plus the map back to original ids.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Atomized {
    pub graph: PredominatedGraph,
    pub id_map: IdMap,
}

/// Removes every edge inside `D`, then every isolated predominated vertex.
pub fn atomize(pg: &PredominatedGraph) -> Atomized {
    let g = pg
        .graph()
        .without_edges(|u, v| pg.is_predominated(u) && pg.is_predominated(v));
    let keep: Vec<bool> = (0..g.n())
        .map(|v| !(pg.is_predominated(v) && g.degree(v) == 0))
        .collect();
    let (reduced, id_map) = g.induced(&keep);
    let mask = id_map
        .new_to_old()
        .iter()
        .map(|&old| pg.is_predominated(old))
        .collect();
    Atomized {
        graph: PredominatedGraph::from_mask(reduced, mask),
        id_map,
    }
}

/// Connected components, each sorted, ordered by smallest vertex.
pub fn components(g: &Graph) -> Vec<Vec<Vertex>> {
    let mut label = vec![usize::MAX; g.n()];
    let mut out = Vec::new();
    let mut queue = VecDeque::new();
    for s in 0..g.n() {
        if label[s] != usize::MAX {
            continue;
        }
        let id = out.len();
        let mut comp = vec![s];
        label[s] = id;
        queue.push_back(s);
        while let Some(u) = queue.pop_front() {
            for &v in g.neighbors(u) {
                if label[v] == usize::MAX {
                    label[v] = id;
                    comp.push(v);
                    queue.push_back(v);
                }
            }
        }
        comp.sort_unstable();
        out.push(comp);
    }
    out
}

/// Number of connected components, without materializing them.
pub fn component_count(g: &Graph) -> usize {
    // breadth-first, with the visit order itself as the queue
    let mut seen = vec![false; g.n()];
    let mut queue = Vec::with_capacity(g.n());
    let mut count = 0;
    for s in 0..g.n() {
        if seen[s] {
            continue;
        }
        count += 1;
        seen[s] = true;
        let mut head = queue.len();
        queue.push(s);
        while head < queue.len() {
            let u = queue[head];
            head += 1;
            for &v in g.neighbors(u) {
                if !seen[v] {
                    seen[v] = true;
                    queue.push(v);
                }
            }
        }
    }
    count
}

pub fn is_connected(g: &Graph) -> bool {
    component_count(g) <= 1
}

pub fn is_tree(g: &Graph) -> bool {
    g.n() > 0 && g.edge_count() + 1 == g.n() && is_connected(g)
}

pub fn is_forest(g: &Graph) -> bool {
    // every graph has at least n - c edges, with equality exactly for forests
    g.edge_count() < g.n().max(1) && g.edge_count() + component_count(g) == g.n()
}

/// Connected, and every edge lies on at most one cycle.
pub fn is_cactus(g: &Graph) -> bool {
    if g.n() == 0 || !is_connected(g) {
        return false;
    }
    // Every biconnected block must be a single edge or a simple cycle, which
    // holds iff each block has |E| <= |V|.
    blocks(g).iter().all(|b| b.edges.len() <= b.vertices.len())
}

/// A biconnected block: a bridge (two vertices, one edge) or a 2-connected piece.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Block {
    /// Sorted.
    pub vertices: Vec<Vertex>,
    pub edges: Vec<(Vertex, Vertex)>,
}

/// Biconnected components (Hopcroft–Tarjan, iterative).
pub fn blocks(g: &Graph) -> Vec<Block> {
    let n = g.n();
    let mut disc = vec![usize::MAX; n];
    let mut low = vec![0usize; n];
    let mut time = 0;
    let mut edge_stack: Vec<(Vertex, Vertex)> = Vec::new();
    let mut out = Vec::new();
    for root in 0..n {
        if disc[root] != usize::MAX {
            continue;
        }
        disc[root] = time;
        low[root] = time;
        time += 1;
        // (vertex, parent, next neighbor index)
        let mut stack: Vec<(Vertex, Vertex, usize)> = vec![(root, usize::MAX, 0)];
        while let Some(&mut (u, parent, ref mut idx)) = stack.last_mut() {
            if *idx < g.degree(u) {
                let v = g.neighbors(u)[*idx];
                *idx += 1;
                if v == parent {
                    continue;
                }
                if disc[v] == usize::MAX {
                    edge_stack.push((u, v));
                    disc[v] = time;
                    low[v] = time;
                    time += 1;
                    stack.push((v, u, 0));
                } else if disc[v] < disc[u] {
                    edge_stack.push((u, v));
                    low[u] = low[u].min(disc[v]);
                }
            } else {
                stack.pop();
                if let Some(&(p, _, _)) = stack.last() {
                    low[p] = low[p].min(low[u]);
                    if low[u] >= disc[p] {
                        let mut edges = Vec::new();
                        while let Some(e) = edge_stack.pop() {
                            edges.push(e);
                            if e == (p, u) {
                                break;
                            }
                        }
                        let mut vertices: Vec<Vertex> =
                            edges.iter().flat_map(|&(a, b)| [a, b]).collect();
                        vertices.sort_unstable();
                        vertices.dedup();
                        out.push(Block { vertices, edges });
                    }
                }
            }
        }
    }
    out
}

/// Two-coloring of a bipartite graph (`false`/`true` per vertex, the lowest
/// vertex of each component gets `false`); `None` if an odd cycle exists.
pub fn bipartition(g: &Graph) -> Option<Vec<bool>> {
    let mut side: Vec<Option<bool>> = vec![None; g.n()];
    let mut queue = VecDeque::new();
    for s in 0..g.n() {
        if side[s].is_some() {
            continue;
        }
        side[s] = Some(false);
        queue.push_back(s);
        while let Some(u) = queue.pop_front() {
            let su = side[u].unwrap();
            for &v in g.neighbors(u) {
                match side[v] {
                    None => {
                        side[v] = Some(!su);
                        queue.push_back(v);
                    }
                    Some(sv) if sv == su => return None,
                    Some(_) => {}
                }
            }
        }
    }
    Some(side.into_iter().map(|s| s.unwrap()).collect())
}
