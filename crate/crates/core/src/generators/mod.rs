//! Constructive families and their certificates.
//!
//! - [`join`]: subdivided trees (𝒮) by subdivision or by recursive joins, and
//!   the hypergraph family ℒ.
//! - [`cactus`]: odd-path replacements (𝒞, 𝒜) with construction traces and the
//!   matchings `M(H, x)`.
//! - [`strategy`]: Staller's cut-vertex strategy and its verification.
//! - [`search`]: small-cactus search for critical instances outside 𝒞.

pub mod cactus;
pub mod join;
pub mod search;
mod sexpr;
pub mod strategy;

pub use cactus::{
    apply_replacements, matching_except, random_member, random_plan, CactusBuild, Family,
    Matching, ReplacementPlan, ReplacementStep, StepTrace,
};
pub use join::{
    build_l, build_s, incidence_tree_canonical_form, is_in_s, l_family_classes,
    random_join_spec, subdivide_once, JoinFamily, JoinSpec,
};
pub use strategy::{play_against_solver, verify_staller_strategy, StallerStrategy, StrategyCheck};

use crate::error::{Error, Result};
use crate::graph::{Graph, Vertex};

/// `h` (with fixed-degree set `x_set`) sits in `g` under `mapping`
/// (`mapping[i]` is the image of `h`-vertex `i`): every edge of `h` maps to an
/// edge of `g` and every mapped fixed-degree vertex keeps its degree.
pub fn check_substructure_in_graph(
    g: &Graph,
    h: &Graph,
    x_set: &[Vertex],
    mapping: &[Vertex],
) -> Result<bool> {
    if mapping.len() != h.n() {
        return Err(Error::invalid(format!(
            "mapping has {} entries for {} vertices",
            mapping.len(),
            h.n()
        )));
    }
    let mut used = vec![false; g.n()];
    for &m in mapping {
        if m >= g.n() {
            return Err(Error::invalid(format!("mapped vertex {m} out of range")));
        }
        if used[m] {
            return Err(Error::invalid(format!("mapping is not injective at {m}")));
        }
        used[m] = true;
    }
    if let Some(&x) = x_set.iter().find(|&&x| x >= h.n()) {
        return Err(Error::invalid(format!("fixed-degree vertex {x} out of range")));
    }
    let edges_ok = h.edges().all(|(u, v)| g.has_edge(mapping[u], mapping[v]));
    let degrees_ok = x_set.iter().all(|&x| g.degree(mapping[x]) == h.degree(x));
    Ok(edges_ok && degrees_ok)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn substructure_in_graph() {
        let p3 = Graph::path(3);
        assert!(check_substructure_in_graph(&p3, &p3, &[0, 2], &[0, 1, 2]).unwrap());
        assert!(!check_substructure_in_graph(&Graph::path(5), &p3, &[0, 2], &[0, 1, 2]).unwrap());
        assert!(check_substructure_in_graph(&Graph::path(5), &p3, &[0, 2], &[0, 1]).is_err());
        assert!(check_substructure_in_graph(&Graph::path(5), &p3, &[0, 2], &[0, 1, 1]).is_err());
        assert!(check_substructure_in_graph(&Graph::path(5), &p3, &[0, 2], &[0, 1, 9]).is_err());
    }
}
