//! Odd-path replacements (families 𝒞 and 𝒜) and the matchings `M(H, x)`.
//!
//! Plan grammar: `(((u v) l1 l2 ...) ...)`, one entry per step. A step
//! removes the edge `uv` of the base substructure and joins `u` to `v` by
//! paths of the given odd lengths. Internal path vertices get fresh ids by
//! step, then path, then position along the path from `u` to `v`.

use std::collections::BTreeSet;
use std::fmt;

use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use super::sexpr::{self, SExpr};
use crate::error::{Error, Result};
use crate::game::PairingCertificate;
use crate::graph::{bipartition, Graph, Vertex};
use crate::tree::Substructure;

use super::join::is_in_s;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Family {
    /// Double-odd replacements: exactly two paths per step.
    C,
    /// k-odd replacements: at least two paths per step.
    A,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReplacementStep {
    pub edge: (Vertex, Vertex),
    pub lengths: Vec<usize>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReplacementPlan {
    pub steps: Vec<ReplacementStep>,
}

impl ReplacementPlan {
    pub fn parse(text: &str) -> Result<ReplacementPlan> {
        let expr = sexpr::parse(text)?;
        let steps = expr
            .as_list("a list of steps")?
            .iter()
            .map(parse_step)
            .collect::<Result<Vec<_>>>()?;
        Ok(ReplacementPlan { steps })
    }

    /// Vertices added by the plan when applied.
    pub fn added_vertices(&self) -> usize {
        self.steps
            .iter()
            .filter(|s| !is_collapsed(&s.lengths))
            .flat_map(|s| s.lengths.iter().map(|&l| l.saturating_sub(1)))
            .sum()
    }
}

fn parse_step(e: &SExpr) -> Result<ReplacementStep> {
    let items = e.as_list("a step `((u v) l1 l2 ...)`")?;
    let Some((edge, lengths)) = items.split_first() else {
        return Err(Error::parse(e.line(), "empty step"));
    };
    let pair = edge.as_list("an edge `(u v)`")?;
    if pair.len() != 2 {
        return Err(Error::parse(edge.line(), "an edge needs exactly two endpoints"));
    }
    let lengths = lengths
        .iter()
        .map(|l| l.as_number("a path length").map(|x| x as usize))
        .collect::<Result<Vec<_>>>()?;
    Ok(ReplacementStep {
        edge: (
            pair[0].as_number("a vertex")? as usize,
            pair[1].as_number("a vertex")? as usize,
        ),
        lengths,
    })
}

impl fmt::Display for ReplacementPlan {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, s) in self.steps.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "(({} {})", s.edge.0, s.edge.1)?;
            for l in &s.lengths {
                write!(f, " {l}")?;
            }
            f.write_str(")")?;
        }
        f.write_str(")")
    }
}

fn is_collapsed(lengths: &[usize]) -> bool {
    lengths == [1, 1]
}

/// What one step did: each path listed as its full vertex sequence from the
/// step's first endpoint to its second. A collapsed `(1, 1)` step has no paths.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StepTrace {
    pub edge: (Vertex, Vertex),
    pub paths: Vec<Vec<Vertex>>,
}

impl StepTrace {
    fn is_collapsed(&self) -> bool {
        self.paths.is_empty()
    }

    fn internal_vertices(&self) -> impl Iterator<Item = Vertex> + '_ {
        self.paths
            .iter()
            .flat_map(|p| p[1..p.len() - 1].iter().copied())
    }
}

/// A generated member of 𝒞 or 𝒜 with the construction trace needed by the
/// certificate builders.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CactusBuild {
    pub family: Family,
    pub base: Substructure,
    pub plan: ReplacementPlan,
    pub graph: Graph,
    /// `X(H)`: the bipartition class containing `X(F)`, sorted.
    pub fixed_degree: Vec<Vertex>,
    pub trace: Vec<StepTrace>,
}

impl CactusBuild {
    pub fn is_black(&self, v: Vertex) -> bool {
        self.fixed_degree.binary_search(&v).is_ok()
    }

    /// `V(H) ∖ X(H)`, the predominated set making `H` critical.
    pub fn white_vertices(&self) -> Vec<Vertex> {
        (0..self.graph.n()).filter(|&v| !self.is_black(v)).collect()
    }

    /// Sidecar text: `X(H)` and the trace, one line each.
    pub fn sidecar(&self) -> String {
        use std::fmt::Write as _;
        let mut out = String::new();
        let list = |vs: &[Vertex]| {
            vs.iter()
                .map(|v| v.to_string())
                .collect::<Vec<_>>()
                .join(" ")
        };
        writeln!(out, "family {:?}", self.family).unwrap();
        writeln!(out, "plan {}", self.plan).unwrap();
        writeln!(out, "X: {}", list(&self.fixed_degree)).unwrap();
        writeln!(out, "base-vertices {}", self.base.vertices.len()).unwrap();
        for (i, t) in self.trace.iter().enumerate() {
            if t.is_collapsed() {
                writeln!(out, "step {i} ({} {}) collapsed", t.edge.0, t.edge.1).unwrap();
            }
            for p in &t.paths {
                writeln!(out, "step {i} ({} {}) path {}", t.edge.0, t.edge.1, list(p)).unwrap();
            }
        }
        out
    }
}

/// Applies a replacement plan to a member `f` of 𝒮 (ids `0..k`).
///
/// Each step must name an edge of `f` not replaced by an earlier step, with
/// odd lengths, exactly two of them for family 𝒞 and at least two for 𝒜, at
/// most one of length 1 — except that `(1, 1)` is accepted and leaves the edge
/// unchanged.
pub fn apply_replacements(
    f: &Substructure,
    plan: &ReplacementPlan,
    family: Family,
) -> Result<CactusBuild> {
    if !is_in_s(f) {
        return Err(Error::class("replacement base is not a member of the subdivided-tree family"));
    }
    let base_graph = f.to_graph()?;
    let mut edges: BTreeSet<(Vertex, Vertex)> = base_graph.edges().collect();
    let mut replaced: BTreeSet<(Vertex, Vertex)> = BTreeSet::new();
    let mut next = base_graph.n();
    let mut trace = Vec::with_capacity(plan.steps.len());
    for (i, step) in plan.steps.iter().enumerate() {
        let (u, v) = step.edge;
        let key = (u.min(v), u.max(v));
        let k = step.lengths.len();
        match family {
            Family::C if k != 2 => {
                return Err(Error::invalid(format!(
                    "step {i}: a double-odd replacement needs exactly 2 paths, found {k}"
                )))
            }
            Family::A if k < 2 => {
                return Err(Error::invalid(format!(
                    "step {i}: a k-odd replacement needs at least 2 paths, found {k}"
                )))
            }
            _ => {}
        }
        if let Some(&l) = step.lengths.iter().find(|&&l| l % 2 == 0) {
            return Err(Error::invalid(format!("step {i}: path length {l} is not odd")));
        }
        if u >= base_graph.n() || v >= base_graph.n() || !base_graph.has_edge(u, v) {
            return Err(Error::invalid(format!(
                "step {i}: ({u} {v}) is not an edge of the base substructure"
            )));
        }
        if replaced.contains(&key) {
            return Err(Error::invalid(format!("step {i}: edge ({u} {v}) was already replaced")));
        }
        if is_collapsed(&step.lengths) {
            trace.push(StepTrace {
                edge: step.edge,
                paths: Vec::new(),
            });
            continue;
        }
        if step.lengths.iter().filter(|&&l| l == 1).count() > 1 {
            return Err(Error::invalid(format!(
                "step {i}: more than one path of length 1 would duplicate the edge"
            )));
        }
        replaced.insert(key);
        edges.remove(&key);
        let mut paths = Vec::with_capacity(k);
        for &l in &step.lengths {
            let mut path = vec![u];
            path.extend(next..next + l - 1);
            next += l - 1;
            path.push(v);
            for w in path.windows(2) {
                edges.insert((w[0].min(w[1]), w[0].max(w[1])));
            }
            paths.push(path);
        }
        trace.push(StepTrace {
            edge: step.edge,
            paths,
        });
    }
    let graph = Graph::from_edges(next, edges)?;
    let side = bipartition(&graph).expect("odd-path replacements keep the graph bipartite");
    let class = side[f.fixed_degree[0]];
    debug_assert!(f.fixed_degree.iter().all(|&x| side[x] == class));
    let fixed_degree = (0..next).filter(|&v| side[v] == class).collect();
    Ok(CactusBuild {
        family,
        base: f.clone(),
        plan: plan.clone(),
        graph,
        fixed_degree,
        trace,
    })
}

/// A set of disjoint host edges.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Matching {
    pub pairs: Vec<(Vertex, Vertex)>,
}

impl Matching {
    fn from_partner(partner: &[Option<Vertex>]) -> Self {
        let pairs = partner
            .iter()
            .enumerate()
            .filter_map(|(v, p)| p.filter(|&w| v < w).map(|w| (v, w)))
            .collect();
        Matching { pairs }
    }

    /// Pairs are disjoint host edges and cover exactly `V(g) ∖ {x}`.
    pub fn covers_all_but(&self, g: &Graph, x: Vertex) -> bool {
        let mut covered = vec![false; g.n()];
        for &(a, b) in &self.pairs {
            if a >= g.n() || b >= g.n() || !g.has_edge(a, b) || covered[a] || covered[b] {
                return false;
            }
            covered[a] = true;
            covered[b] = true;
        }
        (0..g.n()).all(|v| covered[v] == (v != x))
    }

    pub fn to_pairing(&self) -> PairingCertificate {
        PairingCertificate::new(self.pairs.iter().copied())
    }
}

/// `M(H, x)`: a matching of `H` covering every vertex except the black vertex
/// `x`, built along the construction trace.
///
/// - `x` in the base tree: root the base at `x` and match each other black
///   vertex with its (white) parent, then extend through the steps.
/// - Extending through a step on edge `uv`: if `uv` is matched, either keep it
///   (when a length-1 path exists) or match the first path completely, and
///   match the internal vertices of the remaining paths consecutively; if
///   `uv` is unmatched, match every path's internal vertices consecutively.
/// - `x` created by step `s`: take the matching that misses the black endpoint
///   `a` of the step's edge just before step `s`, extend through step `s`, then
///   shift the pairs along `x`'s path from `a` to `x` so that `x` is missed
///   instead, and extend through the remaining steps.
pub fn matching_except(build: &CactusBuild, x: Vertex) -> Result<Matching> {
    if x >= build.graph.n() {
        return Err(Error::invalid(format!("vertex {x} out of range")));
    }
    if !build.is_black(x) {
        return Err(Error::invalid(format!("vertex {x} is not a fixed-degree vertex")));
    }
    let mut partner = vec![None; build.graph.n()];
    match_upto(build, build.trace.len(), x, &mut partner);
    Ok(Matching::from_partner(&partner))
}

fn birth_step(build: &CactusBuild, x: Vertex) -> Option<usize> {
    if x < build.base.vertices.len() {
        return None;
    }
    build
        .trace
        .iter()
        .position(|t| t.internal_vertices().any(|w| w == x))
}

fn match_upto(build: &CactusBuild, upto: usize, x: Vertex, partner: &mut [Option<Vertex>]) {
    let start = match birth_step(build, x) {
        None => {
            match_base(&build.base, x, partner);
            0
        }
        Some(s) => {
            debug_assert!(s < upto);
            let step = &build.trace[s];
            let (u, v) = step.edge;
            let a = if build.is_black(u) { u } else { v };
            match_upto(build, s, a, partner);
            extend(step, partner);
            let path = step
                .paths
                .iter()
                .find(|p| p.contains(&x))
                .expect("x lies on a path of its birth step");
            let mut oriented = path.clone();
            if oriented[0] != a {
                oriented.reverse();
            }
            let i = oriented.iter().position(|&w| w == x).unwrap();
            for w in &oriented[..=i] {
                partner[*w] = None;
            }
            for pair in oriented[..i].chunks(2) {
                partner[pair[0]] = Some(pair[1]);
                partner[pair[1]] = Some(pair[0]);
            }
            s + 1
        }
    };
    for step in &build.trace[start..upto] {
        extend(step, partner);
    }
}

fn match_base(base: &Substructure, x: Vertex, partner: &mut [Option<Vertex>]) {
    let n = base.vertices.len();
    let mut adj = vec![Vec::new(); n];
    for &(a, b) in &base.edges {
        adj[a].push(b);
        adj[b].push(a);
    }
    let mut seen = vec![false; n];
    seen[x] = true;
    let mut stack = vec![x];
    while let Some(u) = stack.pop() {
        for &w in &adj[u] {
            if !seen[w] {
                seen[w] = true;
                if base.is_black(w) {
                    partner[w] = Some(u);
                    partner[u] = Some(w);
                }
                stack.push(w);
            }
        }
    }
}

fn extend(step: &StepTrace, partner: &mut [Option<Vertex>]) {
    if step.is_collapsed() {
        return;
    }
    let (u, v) = step.edge;
    let matched = partner[u] == Some(v);
    let mut pair = |a: Vertex, b: Vertex| {
        partner[a] = Some(b);
        partner[b] = Some(a);
    };
    let direct = step.paths.iter().position(|p| p.len() == 2);
    let full = if matched && direct.is_none() { Some(0) } else { None };
    for (i, p) in step.paths.iter().enumerate() {
        if Some(i) == full {
            for w in p.chunks(2) {
                pair(w[0], w[1]);
            }
        } else {
            for w in p[1..p.len() - 1].chunks(2) {
                pair(w[0], w[1]);
            }
        }
    }
}

/// Random plan over the edges of `f`: each edge replaced with probability 1/2
/// (at least one edge if `f` has any), lengths drawn from {1, 3, 5} with at
/// most one 1 per step, 2 paths for 𝒞 and 2 or 3 for 𝒜.
pub fn random_plan(f: &Substructure, family: Family, rng: &mut impl Rng) -> ReplacementPlan {
    let mut chosen: Vec<(Vertex, Vertex)> =
        f.edges.iter().copied().filter(|_| rng.gen_bool(0.5)).collect();
    if chosen.is_empty() && !f.edges.is_empty() {
        chosen.push(*f.edges.choose(rng).unwrap());
    }
    chosen.shuffle(rng);
    let steps = chosen
        .into_iter()
        .map(|(a, b)| {
            let k = match family {
                Family::C => 2,
                Family::A => rng.gen_range(2..=3),
            };
            let mut lengths: Vec<usize> = Vec::with_capacity(k);
            for _ in 0..k {
                let ones = lengths.iter().filter(|&&l| l == 1).count();
                let options: &[usize] = if ones > 0 { &[3, 5] } else { &[1, 3, 5] };
                lengths.push(*options.choose(rng).unwrap());
            }
            let edge = if rng.gen_bool(0.5) { (a, b) } else { (b, a) };
            ReplacementStep { edge, lengths }
        })
        .collect();
    ReplacementPlan { steps }
}

/// A random member of `family` with at most `max_n` vertices: a random tree on
/// `2..=max_base_tree` vertices (a single vertex only when nothing larger
/// fits), subdivided once, then a random plan, resampled until the size fits.
pub fn random_member(
    family: Family,
    max_n: usize,
    max_base_tree: usize,
    rng: &mut impl Rng,
) -> CactusBuild {
    assert!(max_n >= 1, "every member has a vertex");
    // a tree on k >= 2 vertices subdivides to 2k - 1 vertices, and a random
    // plan replaces at least one edge, adding at least 2 more
    let largest = max_base_tree.min(max_n.saturating_sub(1) / 2);
    loop {
        let k = if largest >= 2 { rng.gen_range(2..=largest) } else { 1 };
        let t = crate::sample::random_tree(k, rng);
        let f = super::join::subdivide_once(&t).expect("random trees are trees");
        for _ in 0..16 {
            let plan = random_plan(&f, family, rng);
            if f.vertices.len() + plan.added_vertices() <= max_n {
                return apply_replacements(&f, &plan, family).expect("random plans are valid");
            }
        }
    }
}
