//! Substructures of predominated trees and forests: detection, enumeration,
//! the black/white/gray coloring, the Staller-win characterization, and the
//! linear-time criticality recognizer.
//!
//! A substructure `F` of a host graph is a once-subdivided tree whose
//! original (black, fixed-degree) vertices `X(F)` keep their full host degree.
//! Locally: `F` is a tree, properly 2-colored into `X` and the rest, every
//! white vertex has degree exactly 2 in `F`, and every black vertex has the
//! same degree in `F` as in the host.

use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{is_forest, Graph, PredominatedGraph, Vertex};

/// Default vertex cap for full substructure enumeration.
pub const ENUMERATION_LIMIT: usize = 20;

const NONE: usize = usize::MAX;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Substructure {
    /// Sorted vertex ids.
    pub vertices: Vec<Vertex>,
    /// Sorted `(min, max)` pairs.
    pub edges: Vec<(Vertex, Vertex)>,
    /// Sorted black vertices `X(F)`.
    pub fixed_degree: Vec<Vertex>,
}

impl Substructure {
    pub fn new(
        vertices: impl IntoIterator<Item = Vertex>,
        edges: impl IntoIterator<Item = (Vertex, Vertex)>,
        fixed_degree: impl IntoIterator<Item = Vertex>,
    ) -> Self {
        let mut vertices: Vec<Vertex> = vertices.into_iter().collect();
        vertices.sort_unstable();
        vertices.dedup();
        let mut edges: Vec<(Vertex, Vertex)> = edges
            .into_iter()
            .map(|(u, v)| (u.min(v), u.max(v)))
            .collect();
        edges.sort_unstable();
        edges.dedup();
        let mut fixed_degree: Vec<Vertex> = fixed_degree.into_iter().collect();
        fixed_degree.sort_unstable();
        fixed_degree.dedup();
        Substructure {
            vertices,
            edges,
            fixed_degree,
        }
    }

    pub fn single(v: Vertex) -> Self {
        Substructure::new([v], [], [v])
    }

    /// The substructure spanned by `vertices` in a tree host: its edges are
    /// all host edges between them.
    pub fn induced_in(
        host: &Graph,
        vertices: impl IntoIterator<Item = Vertex>,
        fixed_degree: impl IntoIterator<Item = Vertex>,
    ) -> Self {
        let vertices: Vec<Vertex> = vertices.into_iter().collect();
        let mut inside = vec![false; host.n()];
        for &v in &vertices {
            inside[v] = true;
        }
        let edges: Vec<(Vertex, Vertex)> = vertices
            .iter()
            .flat_map(|&u| host.neighbors(u).iter().map(move |&w| (u, w)))
            .filter(|&(u, w)| u < w && inside[w])
            .collect();
        Substructure::new(vertices, edges, fixed_degree)
    }

    /// The substructure as a standalone graph; its vertex ids must be exactly `0..k`.
    pub fn to_graph(&self) -> Result<Graph> {
        if self.vertices.iter().enumerate().any(|(i, &v)| i != v) {
            return Err(Error::invalid("substructure vertex ids are not 0..k"));
        }
        Graph::from_edges(self.vertices.len(), self.edges.iter().copied())
    }

    pub fn white_vertices(&self) -> Vec<Vertex> {
        self.vertices
            .iter()
            .copied()
            .filter(|v| self.fixed_degree.binary_search(v).is_err())
            .collect()
    }

    pub fn is_black(&self, v: Vertex) -> bool {
        self.fixed_degree.binary_search(&v).is_ok()
    }

    /// Degree of `v` within the substructure.
    pub fn degree(&self, v: Vertex) -> usize {
        self.edges.iter().filter(|&&(a, b)| a == v || b == v).count()
    }

    /// The structural invariants, independent of any host: a tree (or single
    /// vertex), properly 2-colored into `X` and the rest, whites of degree 2.
    /// For a single vertex this requires it to be black.
    pub fn is_well_formed(&self) -> bool {
        let nv = self.vertices.len();
        if nv == 0 || self.edges.len() + 1 != nv {
            return false;
        }
        if self
            .fixed_degree
            .iter()
            .any(|v| self.vertices.binary_search(v).is_err())
        {
            return false;
        }
        let index = |v: Vertex| self.vertices.binary_search(&v).ok();
        let mut adj = vec![Vec::new(); nv];
        for &(a, b) in &self.edges {
            let (Some(i), Some(j)) = (index(a), index(b)) else {
                return false;
            };
            if a == b || self.is_black(a) == self.is_black(b) {
                return false;
            }
            adj[i].push(j);
            adj[j].push(i);
        }
        for (i, &v) in self.vertices.iter().enumerate() {
            if !self.is_black(v) && adj[i].len() != 2 {
                return false;
            }
        }
        // connected with n-1 edges ⇒ tree
        let mut seen = vec![false; nv];
        let mut stack = vec![0];
        seen[0] = true;
        let mut reached = 1;
        while let Some(i) = stack.pop() {
            for &j in &adj[i] {
                if !seen[j] {
                    seen[j] = true;
                    reached += 1;
                    stack.push(j);
                }
            }
        }
        reached == nv
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ColorPartition {
    pub black: Vec<Vertex>,
    pub white: Vec<Vertex>,
    pub gray: Vec<Vertex>,
}

impl ColorPartition {
    fn from_flags(black: &[bool], white: &[bool]) -> Self {
        let mut out = ColorPartition::default();
        for v in 0..black.len() {
            assert!(
                !(black[v] && white[v]),
                "vertex {v} colored both black and white"
            );
            if black[v] {
                out.black.push(v);
            } else if white[v] {
                out.white.push(v);
            } else {
                out.gray.push(v);
            }
        }
        out
    }
}

/// `f` is a substructure of `g`: its edges are edges of `g`, it is well
/// formed, and each black vertex has the same degree in `f` as in `g`.
pub fn is_substructure(g: &Graph, f: &Substructure) -> Result<bool> {
    let out_of_range = f
        .vertices
        .iter()
        .chain(f.fixed_degree.iter())
        .chain(f.edges.iter().flat_map(|(a, b)| [a, b]))
        .find(|&&v| v >= g.n());
    if let Some(v) = out_of_range {
        return Err(Error::invalid(format!(
            "substructure vertex {v} out of range for {} vertices",
            g.n()
        )));
    }
    if !f.is_well_formed() || f.edges.iter().any(|&(a, b)| !g.has_edge(a, b)) {
        return Ok(false);
    }
    Ok(f.fixed_degree.iter().all(|&x| f.degree(x) == g.degree(x)))
}

fn require_forest(g: &Graph) -> Result<()> {
    if is_forest(g) {
        Ok(())
    } else {
        Err(Error::class("input graph is not a forest"))
    }
}

/// Breadth-first rooting of every component at its lowest vertex.
struct Rooted {
    order: Vec<Vertex>,
    parent: Vec<usize>,
    roots: Vec<Vertex>,
}

impl Rooted {
    fn new(g: &Graph) -> Self {
        let n = g.n();
        let mut parent = vec![NONE; n];
        let mut seen = vec![false; n];
        let mut order = Vec::with_capacity(n);
        let mut roots = Vec::new();
        let mut queue = VecDeque::new();
        for r in 0..n {
            if seen[r] {
                continue;
            }
            seen[r] = true;
            roots.push(r);
            queue.push_back(r);
            while let Some(u) = queue.pop_front() {
                order.push(u);
                for &v in g.neighbors(u) {
                    if !seen[v] {
                        seen[v] = true;
                        parent[v] = u;
                        queue.push_back(v);
                    }
                }
            }
        }
        Rooted {
            order,
            parent,
            roots,
        }
    }

    /// Children in ascending id order.
    fn children<'g>(&'g self, g: &'g Graph, v: Vertex) -> impl Iterator<Item = Vertex> + 'g {
        let p = self.parent[v];
        g.neighbors(v).iter().copied().filter(move |&c| c != p)
    }
}

/// A substructure of the forest `t` none of whose black vertices lies in `d`.
pub fn find_substructure_avoiding(t: &Graph, d: &[Vertex]) -> Result<Option<Substructure>> {
    require_forest(t)?;
    let mut in_d = vec![false; t.n()];
    for &v in d {
        if v >= t.n() {
            return Err(Error::invalid(format!("vertex {v} out of range")));
        }
        in_d[v] = true;
    }
    let rooted = Rooted::new(t);
    // fb[v]: v can be black with everything below it completed.
    let mut fb = vec![false; t.n()];
    // has_fb_child[c]: some child g of c has fb[g].
    let mut has_fb_child = vec![false; t.n()];
    for &v in rooted.order.iter().rev() {
        fb[v] = !in_d[v] && rooted.children(t, v).all(|c| has_fb_child[c]);
        if fb[v] {
            let p = rooted.parent[v];
            if p != NONE {
                has_fb_child[p] = true;
            }
        }
    }
    let build = |tops: &[Vertex], white_top: Option<Vertex>| -> Substructure {
        let mut vertices = Vec::new();
        let mut black = Vec::new();
        let mut stack: Vec<Vertex> = tops.to_vec();
        if let Some(w) = white_top {
            vertices.push(w);
        }
        while let Some(v) = stack.pop() {
            vertices.push(v);
            black.push(v);
            for c in rooted.children(t, v) {
                vertices.push(c);
                let g = rooted
                    .children(t, c)
                    .find(|&g| fb[g])
                    .expect("fb guarantees a black grandchild");
                stack.push(g);
            }
        }
        Substructure::induced_in(t, vertices, black)
    };
    for &r in &rooted.roots {
        if fb[r] {
            return Ok(Some(build(&[r], None)));
        }
    }
    for &v in &rooted.order {
        let mut good = rooted.children(t, v).filter(|&g| fb[g]);
        if let (Some(a), Some(b)) = (good.next(), good.next()) {
            return Ok(Some(build(&[a, b], Some(v))));
        }
    }
    Ok(None)
}

/// Staller wins the domination game on a predominated forest iff it has a
/// substructure avoiding `D` with its black vertices.
pub fn staller_wins_tree(pg: &PredominatedGraph) -> Result<bool> {
    Ok(staller_witness_tree(pg)?.is_some())
}

pub fn staller_witness_tree(pg: &PredominatedGraph) -> Result<Option<Substructure>> {
    find_substructure_avoiding(pg.graph(), &pg.predominated())
}

/// All substructures of the forest `t`, sorted by vertex set (then edges and
/// black set). Fails with a capacity error above [`ENUMERATION_LIMIT`].
pub fn enumerate_substructures(t: &Graph) -> Result<Vec<Substructure>> {
    enumerate_substructures_with_limit(t, ENUMERATION_LIMIT)
}

pub fn enumerate_substructures_with_limit(t: &Graph, limit: usize) -> Result<Vec<Substructure>> {
    require_forest(t)?;
    let limit = limit.min(64);
    if t.n() > limit {
        return Err(Error::Capacity {
            what: "tree vertex count for enumeration",
            actual: t.n(),
            limit,
        });
    }
    let masks = substructure_masks(t);
    let mut black_any = 0u64;
    let mut white_any = 0u64;
    for &(vm, xm) in &masks {
        black_any |= xm;
        white_any |= vm & !xm;
    }
    assert_eq!(
        black_any & white_any,
        0,
        "substructures disagree on a vertex color"
    );
    let mut out: Vec<Substructure> = masks
        .into_iter()
        .map(|(vm, xm)| Substructure::induced_in(t, bits(vm), bits(xm)))
        .collect();
    out.sort();
    Ok(out)
}

/// `(vertex mask, black mask)` of every substructure, by top vertex.
fn substructure_masks(t: &Graph) -> Vec<(u64, u64)> {
    let rooted = Rooted::new(t);
    let mut frags: Vec<Vec<(u64, u64)>> = vec![Vec::new(); t.n()];
    for &v in rooted.order.iter().rev() {
        let mut acc = vec![(1u64 << v, 1u64 << v)];
        for c in rooted.children(t, v) {
            let options: Vec<(u64, u64)> = rooted
                .children(t, c)
                .flat_map(|g| frags[g].iter().map(move |&(vm, xm)| (vm | 1 << c, xm)))
                .collect();
            acc = product(&acc, &options);
            if acc.is_empty() {
                break;
            }
        }
        frags[v] = acc;
    }
    let mut out = Vec::new();
    for &r in &rooted.roots {
        out.extend_from_slice(&frags[r]);
    }
    for &v in &rooted.order {
        let kids: Vec<Vertex> = rooted.children(t, v).collect();
        for (i, &a) in kids.iter().enumerate() {
            for &b in &kids[i + 1..] {
                out.extend(
                    product(&frags[a], &frags[b])
                        .into_iter()
                        .map(|(vm, xm)| (vm | 1 << v, xm)),
                );
            }
        }
    }
    out
}

fn product(a: &[(u64, u64)], b: &[(u64, u64)]) -> Vec<(u64, u64)> {
    let mut out = Vec::with_capacity(a.len() * b.len());
    for &(va, xa) in a {
        for &(vb, xb) in b {
            out.push((va | vb, xa | xb));
        }
    }
    out
}

fn bits(mut m: u64) -> impl Iterator<Item = Vertex> {
    std::iter::from_fn(move || {
        if m == 0 {
            None
        } else {
            let v = m.trailing_zeros() as usize;
            m &= m - 1;
            Some(v)
        }
    })
}

/// Black/white/gray coloring of a forest: by enumeration up to
/// [`ENUMERATION_LIMIT`] vertices, by the rerooting DP above that.
pub fn color_vertices(t: &Graph) -> Result<ColorPartition> {
    if t.n() <= ENUMERATION_LIMIT {
        color_vertices_enumerated(t)
    } else {
        color_vertices_dp(t)
    }
}

pub fn color_vertices_enumerated(t: &Graph) -> Result<ColorPartition> {
    let subs = enumerate_substructures(t)?;
    let mut black = vec![false; t.n()];
    let mut white = vec![false; t.n()];
    for s in &subs {
        for &v in &s.vertices {
            if s.is_black(v) {
                black[v] = true;
            } else {
                white[v] = true;
            }
        }
    }
    Ok(ColorPartition::from_flags(&black, &white))
}

/// Linear-time coloring by rerooting.
///
/// For a directed edge into `v` from `p`, `B(v|p)` says `v` can be black in a
/// substructure confined to `v`'s side (all its other neighbors white and
/// completed), and `W(v|p)` says `v` can be a white vertex whose second
/// neighbor is a completed black vertex on its side. A vertex is black iff
/// `W(c|v)` holds for all neighbors `c`, and white iff `B(a|v)` holds for at
/// least two neighbors `a`.
pub fn color_vertices_dp(t: &Graph) -> Result<ColorPartition> {
    require_forest(t)?;
    let n = t.n();
    let rooted = Rooted::new(t);
    let parent = &rooted.parent;
    // Downward values: direction away from the parent.
    let mut b_down = vec![false; n];
    let mut w_down = vec![false; n];
    // Per vertex: children c with !w_down[c], children g with b_down[g].
    let mut bad_children = vec![0usize; n];
    let mut good_children = vec![0usize; n];
    for &v in rooted.order.iter().rev() {
        b_down[v] = bad_children[v] == 0;
        w_down[v] = good_children[v] > 0;
        let p = parent[v];
        if p != NONE {
            if !w_down[v] {
                bad_children[p] += 1;
            }
            if b_down[v] {
                good_children[p] += 1;
            }
        }
    }
    // Upward values for non-roots: b_up[v] = B(p|v), w_up[v] = W(p|v).
    let mut b_up = vec![false; n];
    let mut w_up = vec![false; n];
    for &v in &rooted.order {
        let p = parent[v];
        if p == NONE {
            continue;
        }
        let pp_has = parent[p] != NONE;
        let bad = bad_children[p] - usize::from(!w_down[v]) + usize::from(pp_has && !w_up[p]);
        b_up[v] = bad == 0;
        let good = good_children[p] - usize::from(b_down[v]) + usize::from(pp_has && b_up[p]);
        w_up[v] = good >= 1;
    }
    let mut black = vec![false; n];
    let mut white = vec![false; n];
    for v in 0..n {
        let has_parent = parent[v] != NONE;
        black[v] = bad_children[v] == 0 && (!has_parent || w_up[v]);
        white[v] = good_children[v] + usize::from(has_parent && b_up[v]) >= 2;
    }
    Ok(ColorPartition::from_flags(&black, &white))
}

/// Outcome of the linear-time criticality recognizer, naming the first
/// violated condition.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum TreeCriticality {
    Critical,
    /// Every vertex is predominated, so Dominator has already won.
    NoUndominated,
    /// The subgraph spanned by the closed neighborhoods of `X = V∖D` is disconnected.
    Disconnected,
    /// `X` is not a bipartition class of that subgraph: `vertex` has a
    /// neighbor there on the same side of `X`.
    XNotClass { vertex: Vertex },
    /// A vertex of the other class does not have degree 2 there.
    WhiteDegree { vertex: Vertex, degree: usize },
}

impl TreeCriticality {
    pub fn is_critical(&self) -> bool {
        *self == TreeCriticality::Critical
    }
}

/// Vertices of `T' = T[∪_{x∈X} N[x]]` for `X = V∖D`.
fn closed_cover(pg: &PredominatedGraph) -> Vec<bool> {
    let g = pg.graph();
    let mut inside = vec![false; g.n()];
    for x in 0..g.n() {
        if !pg.is_predominated(x) {
            inside[x] = true;
            for &y in g.neighbors(x) {
                inside[y] = true;
            }
        }
    }
    inside
}

/// Algorithm 1: with `X = V∖D` and `T'` the subgraph induced by the closed
/// neighborhoods of `X`, `(T, D)` is MBD critical iff `T'` is connected, `X`
/// is one of its bipartition classes, and every vertex of the other class has
/// degree 2 in `T'`. Linear time; forests are accepted.
pub fn mbd_critical_tree_report(pg: &PredominatedGraph) -> Result<TreeCriticality> {
    let g = pg.graph();
    require_forest(g)?;
    Ok(recognize(pg, &closed_cover(pg)))
}

fn recognize(pg: &PredominatedGraph, inside: &[bool]) -> TreeCriticality {
    // T' is a subforest of a forest, so it is connected iff it has one edge
    // fewer than vertices. Since every vertex of T' is in X or adjacent to X,
    // X is a bipartition class iff no edge of T' joins two vertices on the
    // same side of X. One pass over the vertices of T' checks everything.
    let g = pg.graph();
    let mut total = 0usize;
    let mut degree_sum = 0usize;
    let mut undominated = false;
    let mut not_class = None;
    let mut bad_degree = None;
    for v in 0..g.n() {
        if !inside[v] {
            continue;
        }
        let in_x = !pg.is_predominated(v);
        undominated |= in_x;
        total += 1;
        let mut degree = 0;
        for &w in g.neighbors(v) {
            if inside[w] {
                degree += 1;
                if not_class.is_none() && pg.is_predominated(w) != in_x {
                    not_class = Some(v);
                }
            }
        }
        degree_sum += degree;
        if !in_x && degree != 2 && bad_degree.is_none() {
            bad_degree = Some((v, degree));
        }
    }
    if !undominated {
        TreeCriticality::NoUndominated
    } else if degree_sum / 2 + 1 != total {
        TreeCriticality::Disconnected
    } else if let Some(vertex) = not_class {
        TreeCriticality::XNotClass { vertex }
    } else if let Some((vertex, degree)) = bad_degree {
        TreeCriticality::WhiteDegree { vertex, degree }
    } else {
        TreeCriticality::Critical
    }
}

pub fn is_mbd_critical_tree(pg: &PredominatedGraph) -> Result<bool> {
    Ok(mbd_critical_tree_report(pg)?.is_critical())
}

/// For a critical predominated forest, the substructure `T'` with `X(T') = V∖D`.
pub fn critical_tree_witness(pg: &PredominatedGraph) -> Result<Option<Substructure>> {
    require_forest(pg.graph())?;
    let inside = closed_cover(pg);
    if !recognize(pg, &inside).is_critical() {
        return Ok(None);
    }
    let vertices = (0..pg.n()).filter(|&v| inside[v]);
    Ok(Some(Substructure::induced_in(
        pg.graph(),
        vertices,
        pg.undominated(),
    )))
}

/// Critical, and `T'` is all of `T` (so `D` is independent and has no isolated vertex).
pub fn is_atomic_mbd_critical_tree(pg: &PredominatedGraph) -> Result<bool> {
    require_forest(pg.graph())?;
    let inside = closed_cover(pg);
    Ok(inside.iter().all(|&b| b) && recognize(pg, &inside).is_critical())
}
