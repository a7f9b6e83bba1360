//! The recursive "+" joins: subdivided trees (family 𝒮) and the hypergraph
//! family ℒ.
//!
//! Join spec grammar: a leaf is `P1`, `H1` or `*` (the one-vertex base object
//! of the family); a join is `(A s1 B s2)` with `A`, `B` specs and `s1`, `s2`
//! selectors into the results of `A` and `B`.
//!
//! - For 𝒮, a selector is a local vertex id that must be black in its operand.
//!   The left operand keeps its ids, the right one is shifted by the left's
//!   vertex count, and the joining vertex `z` gets the next id.
//! - For ℒ, a selector is a local edge index in ascending key order. Leaf `i`
//!   (counting leaves left to right from 0) has the single edge keyed `i`; the
//!   two edges extended by join `j` (counting joins in post-order from 0) get
//!   their old key suffixed with `.j`.

use std::collections::BTreeMap;
use std::fmt;

use rand::Rng;

use super::sexpr::{self, SExpr};
use crate::error::{Error, Result};
use crate::graph::{is_tree, Graph, Vertex};
use crate::hypergraph::{EdgeKey, Hypergraph};
use crate::sample::colored_tree_canonical_form;
use crate::tree::Substructure;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum JoinSpec {
    Leaf,
    Join {
        left: Box<JoinSpec>,
        left_selector: usize,
        right: Box<JoinSpec>,
        right_selector: usize,
    },
}

impl JoinSpec {
    pub fn join(left: JoinSpec, left_selector: usize, right: JoinSpec, right_selector: usize) -> Self {
        JoinSpec::Join {
            left: Box::new(left),
            left_selector,
            right: Box::new(right),
            right_selector,
        }
    }

    pub fn joins(&self) -> usize {
        match self {
            JoinSpec::Leaf => 0,
            JoinSpec::Join { left, right, .. } => 1 + left.joins() + right.joins(),
        }
    }

    pub fn leaves(&self) -> usize {
        self.joins() + 1
    }

    pub fn parse(text: &str) -> Result<JoinSpec> {
        from_sexpr(&sexpr::parse(text)?)
    }
}

impl fmt::Display for JoinSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            JoinSpec::Leaf => f.write_str("*"),
            JoinSpec::Join {
                left,
                left_selector,
                right,
                right_selector,
            } => write!(f, "({left} {left_selector} {right} {right_selector})"),
        }
    }
}

impl std::str::FromStr for JoinSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        JoinSpec::parse(s)
    }
}

fn from_sexpr(e: &SExpr) -> Result<JoinSpec> {
    match e {
        SExpr::Atom { text, line } => match text.as_str() {
            "P1" | "H1" | "*" => Ok(JoinSpec::Leaf),
            _ => Err(Error::parse(*line, format!("unknown leaf `{text}`"))),
        },
        SExpr::List { items, line } => {
            if items.len() != 4 {
                return Err(Error::parse(
                    *line,
                    format!("a join needs 4 items `(A s1 B s2)`, found {}", items.len()),
                ));
            }
            Ok(JoinSpec::join(
                from_sexpr(&items[0])?,
                items[1].as_number("selector")? as usize,
                from_sexpr(&items[2])?,
                items[3].as_number("selector")? as usize,
            ))
        }
    }
}

/// `S(T)`: every edge subdivided once; the subdivision vertex of the `i`-th
/// edge in sorted order gets id `n + i`, and `X(S(T)) = V(T)`.
pub fn subdivide_once(t: &Graph) -> Result<Substructure> {
    if !is_tree(t) {
        return Err(Error::class("subdivide_once needs a tree"));
    }
    let n = t.n();
    let mut edges = Vec::new();
    for (i, (u, v)) in t.edges().enumerate() {
        edges.push((u, n + i));
        edges.push((v, n + i));
    }
    Ok(Substructure::new(0..n + t.edge_count(), edges, 0..n))
}

/// Membership in 𝒮 via the local rules: a single black vertex, or a tree
/// properly 2-colored by `X`, all whites of degree 2 and all leaves black.
pub fn is_in_s(f: &Substructure) -> bool {
    if !f.is_well_formed() {
        return false;
    }
    f.vertices
        .iter()
        .all(|&v| f.vertices.len() == 1 || f.degree(v) != 1 || f.is_black(v))
}

/// Unfolds a join spec into a member of 𝒮 with ids `0..k`.
pub fn build_s(spec: &JoinSpec) -> Result<Substructure> {
    match spec {
        JoinSpec::Leaf => Ok(Substructure::single(0)),
        JoinSpec::Join {
            left,
            left_selector,
            right,
            right_selector,
        } => {
            let a = build_s(left)?;
            let b = build_s(right)?;
            for (side, sel, s) in [("left", left_selector, &a), ("right", right_selector, &b)] {
                if !s.is_black(*sel) {
                    return Err(Error::invalid(format!(
                        "{side} selector {sel} is not a fixed-degree vertex of {}",
                        if side == "left" { left } else { right }
                    )));
                }
            }
            let na = a.vertices.len();
            let nb = b.vertices.len();
            let z = na + nb;
            let shift = |(u, v): (Vertex, Vertex)| (u + na, v + na);
            let edges = a
                .edges
                .iter()
                .copied()
                .chain(b.edges.iter().copied().map(shift))
                .chain([(*left_selector, z), (*right_selector + na, z)]);
            let black = a
                .fixed_degree
                .iter()
                .copied()
                .chain(b.fixed_degree.iter().map(|&x| x + na));
            Ok(Substructure::new(0..=z, edges, black))
        }
    }
}

/// Unfolds a join spec into a member of ℒ.
pub fn build_l(spec: &JoinSpec) -> Result<Hypergraph> {
    let mut leaf = 0;
    let mut join = 0;
    build_l_rec(spec, &mut leaf, &mut join)
}

fn build_l_rec(spec: &JoinSpec, leaf: &mut u32, join: &mut u32) -> Result<Hypergraph> {
    match spec {
        JoinSpec::Leaf => {
            let mut h = Hypergraph::new(1);
            h.insert_edge(EdgeKey::single(*leaf), [0])?;
            *leaf += 1;
            Ok(h)
        }
        JoinSpec::Join {
            left,
            left_selector,
            right,
            right_selector,
        } => {
            let a = build_l_rec(left, leaf, join)?;
            let b = build_l_rec(right, leaf, join)?;
            let j = *join;
            *join += 1;
            let pick = |h: &Hypergraph, sel: usize, side: &str| -> Result<EdgeKey> {
                h.keys().nth(sel).cloned().ok_or_else(|| {
                    Error::invalid(format!(
                        "{side} selector {sel} out of range: operand has {} edges",
                        h.edge_count()
                    ))
                })
            };
            let ka = pick(&a, *left_selector, "left")?;
            let kb = pick(&b, *right_selector, "right")?;
            let (na, nb) = (a.n(), b.n());
            let z = na + nb;
            let mut out = Hypergraph::new(z + 1);
            for (k, e) in a.edges() {
                if *k == ka {
                    out.insert_edge(k.suffixed(j), e.iter().copied().chain([z]))?;
                } else {
                    out.insert_edge(k.clone(), e.iter().copied())?;
                }
            }
            for (k, e) in b.edges() {
                let shifted = e.iter().map(|&v| v + na);
                if *k == kb {
                    out.insert_edge(k.suffixed(j), shifted.chain([z]))?;
                } else {
                    out.insert_edge(k.clone(), shifted)?;
                }
            }
            Ok(out)
        }
    }
}

/// Which family a random join spec's selectors must be valid for.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum JoinFamily {
    S,
    L,
}

/// A uniformly shaped random spec with exactly `joins` joins and valid selectors.
pub fn random_join_spec(joins: usize, family: JoinFamily, rng: &mut impl Rng) -> JoinSpec {
    if joins == 0 {
        return JoinSpec::Leaf;
    }
    let left_joins = rng.gen_range(0..joins);
    let left = random_join_spec(left_joins, family, rng);
    let right = random_join_spec(joins - 1 - left_joins, family, rng);
    let mut pick = |spec: &JoinSpec| -> usize {
        match family {
            JoinFamily::S => {
                let s = build_s(spec).expect("random specs are valid");
                s.fixed_degree[rng.gen_range(0..s.fixed_degree.len())]
            }
            // every member with j joins has j + 1 edges
            JoinFamily::L => rng.gen_range(0..spec.leaves()),
        }
    };
    let ls = pick(&left);
    let rs = pick(&right);
    JoinSpec::join(left, ls, right, rs)
}

/// Canonical form of a hypergraph whose vertex-edge incidence graph is a
/// tree (true for every member of ℒ); equal forms mean isomorphic hypergraphs.
pub fn incidence_tree_canonical_form(h: &Hypergraph) -> Option<String> {
    let n = h.n();
    let mut edges = Vec::new();
    for (i, (_, e)) in h.edges().enumerate() {
        for &v in e {
            edges.push((v, n + i));
        }
    }
    let g = Graph::from_edges(n + h.edge_count(), edges).ok()?;
    if !is_tree(&g) {
        return None;
    }
    let colors: Vec<u32> = (0..g.n()).map(|v| u32::from(v >= n)).collect();
    Some(colored_tree_canonical_form(&g, &colors))
}

/// One representative spec per isomorphism class of ℒ members with at most
/// `max_joins` joins, grouped by join count, then ordered by canonical form.
pub fn l_family_classes(max_joins: usize) -> Vec<(JoinSpec, Hypergraph)> {
    let mut levels: Vec<Vec<(JoinSpec, Hypergraph)>> = Vec::new();
    levels.push(vec![(JoinSpec::Leaf, build_l(&JoinSpec::Leaf).unwrap())]);
    for j in 1..=max_joins {
        let mut found: BTreeMap<String, (JoinSpec, Hypergraph)> = BTreeMap::new();
        for ja in 0..j {
            let jb = j - 1 - ja;
            for (sa, ha) in &levels[ja] {
                for (sb, hb) in &levels[jb] {
                    for ea in 0..ha.edge_count() {
                        for eb in 0..hb.edge_count() {
                            let spec = JoinSpec::join(sa.clone(), ea, sb.clone(), eb);
                            let h = build_l(&spec).expect("selectors are in range");
                            let form = incidence_tree_canonical_form(&h)
                                .expect("members of the family have tree incidence graphs");
                            found.entry(form).or_insert((spec, h));
                        }
                    }
                }
            }
        }
        levels.push(found.into_values().collect());
    }
    levels.into_iter().flatten().collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sample::rng_from_seed;

    #[test]
    fn subdivision_examples() {
        assert_eq!(subdivide_once(&Graph::empty(1)).unwrap(), Substructure::single(0));
        let s = subdivide_once(&Graph::path(2)).unwrap();
        assert_eq!(s.edges, [(0, 2), (1, 2)]);
        assert_eq!(s.fixed_degree, [0, 1]);
        assert!(is_in_s(&s));
        assert!(subdivide_once(&Graph::cycle(3)).is_err());
        // Fig. 1: a vertex of degree 3 with one leg extended: 6 vertices, 11 after subdividing
        let t = Graph::from_edges(6, [(0, 1), (0, 2), (0, 3), (3, 4), (4, 5)]).unwrap();
        let s = subdivide_once(&t).unwrap();
        assert_eq!(s.vertices.len(), 11);
        assert!(is_in_s(&s));
    }

    #[test]
    fn membership_rules() {
        let leaves_black = Substructure::new([0, 1, 2], [(0, 1), (1, 2)], [0, 2]);
        let center_black = Substructure::new([0, 1, 2], [(0, 1), (1, 2)], [1]);
        assert!(is_in_s(&leaves_black));
        assert!(!is_in_s(&center_black));
        assert!(is_in_s(&Substructure::single(4)));
    }

    #[test]
    fn spec_grammar_round_trip() {
        let spec = JoinSpec::parse("((P1 0 P1 0) 2 * 0)").unwrap();
        assert_eq!(spec.joins(), 2);
        assert_eq!(spec.to_string(), "((* 0 * 0) 2 * 0)");
        assert_eq!(JoinSpec::parse(&spec.to_string()).unwrap(), spec);
        assert!(matches!(JoinSpec::parse("(P1 0 P1)"), Err(Error::Parse { .. })));
        assert!(matches!(JoinSpec::parse("Q"), Err(Error::Parse { .. })));
    }

    #[test]
    fn build_s_examples() {
        assert_eq!(build_s(&JoinSpec::Leaf).unwrap(), Substructure::single(0));
        let p3 = build_s(&JoinSpec::parse("(P1 0 P1 0)").unwrap()).unwrap();
        assert_eq!(p3.edges, [(0, 2), (1, 2)]);
        assert_eq!(p3.fixed_degree, [0, 1]);
        let p5 = build_s(&JoinSpec::parse("((P1 0 P1 0) 1 P1 0)").unwrap()).unwrap();
        assert_eq!(p5.vertices.len(), 5);
        assert!(is_in_s(&p5));
        // vertex 2 of P3 is the white joining vertex
        assert!(build_s(&JoinSpec::parse("((P1 0 P1 0) 2 P1 0)").unwrap()).is_err());
    }

    #[test]
    fn build_l_examples() {
        let h1 = build_l(&JoinSpec::Leaf).unwrap();
        assert_eq!(h1.render(), "n=1\nh 0 0\n");
        let two = build_l(&JoinSpec::parse("(H1 0 H1 0)").unwrap()).unwrap();
        assert_eq!(two.render(), "n=3\nh 0.0 0 2\nh 1.0 1 2\n");
        let three = build_l(&JoinSpec::parse("((H1 0 H1 0) 0 H1 0)").unwrap()).unwrap();
        assert_eq!(three.n(), 5);
        assert_eq!(three.render(), "n=5\nh 0.0.1 0 2 4\nh 1.0 1 2\nh 2.1 3 4\n");
        assert!(build_l(&JoinSpec::parse("(H1 1 H1 0)").unwrap()).is_err());
    }

    #[test]
    fn random_specs_build() {
        let mut rng = rng_from_seed(11);
        for joins in 0..8 {
            let s = random_join_spec(joins, JoinFamily::S, &mut rng);
            assert!(is_in_s(&build_s(&s).unwrap()));
            let l = random_join_spec(joins, JoinFamily::L, &mut rng);
            let h = build_l(&l).unwrap();
            assert_eq!((h.n(), h.edge_count()), (2 * joins + 1, joins + 1));
        }
    }

    #[test]
    fn l_classes_dedup() {
        let classes = l_family_classes(2);
        let sizes: Vec<usize> = classes.iter().map(|(s, _)| s.joins()).collect();
        // one member each with 0 and 1 joins; with 2 joins the new vertex goes
        // into a shared-vertex edge either way, so a single class remains
        assert_eq!(sizes, [0, 1, 2]);
    }
}
