//! The worked examples from the figures, loaded from the fixture files.

use std::path::PathBuf;

use mbd_core::dominator::is_dominator_critical_tree;
use mbd_core::game::validate_pairing;
use mbd_core::generators::{apply_replacements, matching_except, Family, ReplacementPlan};
use mbd_core::graph::{closed_neighborhood_hypergraph, parse_graph};
use mbd_core::tree::{
    color_vertices, critical_tree_witness, enumerate_substructures, is_atomic_mbd_critical_tree,
    is_mbd_critical_tree, TreeCriticality,
};
use mbd_core::{PairingCertificate, Player, PredominatedGraph, Solver, Substructure};

fn fixture(name: &str) -> PredominatedGraph {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../fixtures")
        .join(format!("{name}.graph"));
    let text = std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
    parse_graph(&text).unwrap()
}

#[test]
fn small_paths() {
    let solver = Solver::default();
    let p1 = solver.staller_wins_game(&fixture("p1")).unwrap();
    assert_eq!((p1.winner, p1.first_optimal_move), (Player::Maker, Some(0)));
    let p2 = solver.staller_wins_game(&fixture("p2")).unwrap();
    assert_eq!(p2.winner, Player::Breaker);
    let p3 = solver.staller_wins_game(&fixture("p3")).unwrap();
    assert_eq!((p3.winner, p3.first_optimal_move), (Player::Maker, Some(1)));
}

#[test]
fn fig2_coloring_and_substructures() {
    let t = fixture("fig2_tree");
    let c = color_vertices(t.graph()).unwrap();
    // figure labels {2,6,7,9,10,11,14}, {5,8,12,13}, {1,4}
    assert_eq!(c.black, [1, 4, 5, 7, 8, 9, 12]);
    assert_eq!(c.white, [3, 6, 10, 11]);
    assert_eq!(c.gray, [0, 2]);
    assert_eq!(enumerate_substructures(t.graph()).unwrap().len(), 4);
}

#[test]
fn fig3_bottom_is_atomic_critical() {
    let solver = Solver::default();
    let pg = fixture("fig3_bottom");
    assert!(is_mbd_critical_tree(&pg).unwrap());
    assert!(is_atomic_mbd_critical_tree(&pg).unwrap());
    assert!(solver.is_mbd_critical(&pg).unwrap());
    for v in pg.undominated() {
        assert!(!solver.staller_wins(&pg.with_predominated(v, true)).unwrap());
    }
    for v in pg.predominated() {
        let smaller = pg.with_predominated(v, false);
        assert!(!is_mbd_critical_tree(&smaller).unwrap());
        assert!(!solver.is_mbd_critical(&smaller).unwrap());
    }
}

#[test]
fn fig3_top_and_middle_are_critical_but_not_atomic() {
    let solver = Solver::default();
    for (name, x) in [("fig3_top", vec![0, 2, 4, 6, 8]), ("fig3_middle", vec![11, 12])] {
        let pg = fixture(name);
        assert_eq!(mbd_critical(&pg), TreeCriticality::Critical, "{name}");
        assert!(solver.is_mbd_critical(&pg).unwrap(), "{name}");
        assert!(!is_atomic_mbd_critical_tree(&pg).unwrap(), "{name}");
        let w: Substructure = critical_tree_witness(&pg).unwrap().unwrap();
        assert_eq!(w.fixed_degree, x, "{name}");
    }
}

fn mbd_critical(pg: &PredominatedGraph) -> TreeCriticality {
    mbd_core::tree::mbd_critical_tree_report(pg).unwrap()
}

fn fig3_bottom_base() -> Substructure {
    let pg = fixture("fig3_bottom");
    Substructure::induced_in(pg.graph(), 0..pg.n(), pg.undominated())
}

#[test]
fn h1_and_h2_are_generated_and_critical() {
    let solver = Solver::default();
    for (name, plan) in [("h1", "(((0 1) 3 3))"), ("h2", "(((1 2) 3 3) ((2 3) 1 3))")] {
        let h = apply_replacements(
            &fig3_bottom_base(),
            &ReplacementPlan::parse(plan).unwrap(),
            Family::C,
        )
        .unwrap();
        let pg = PredominatedGraph::new(h.graph.clone(), h.white_vertices()).unwrap();
        if name == "h2" {
            assert_eq!(pg, fixture("h2"));
        }
        assert!(solver.is_mbd_critical(&pg).unwrap(), "{name}");
        for &x in &h.fixed_degree {
            let m = matching_except(&h, x).unwrap();
            assert!(m.covers_all_but(&h.graph, x), "{name} x={x}");
            let hyper = closed_neighborhood_hypergraph(&pg.with_predominated(x, true));
            assert!(validate_pairing(&hyper, &m.to_pairing()), "{name} x={x}");
        }
    }
}

#[test]
fn fig5_matching_is_accepted() {
    // H1 with x = figure vertex 3; figure labels map to ids by subtracting 1
    let h = apply_replacements(
        &fig3_bottom_base(),
        &ReplacementPlan::parse("(((0 1) 3 3))").unwrap(),
        Family::C,
    )
    .unwrap();
    let pg = PredominatedGraph::new(h.graph.clone(), h.white_vertices()).unwrap();
    let pairs = [(3, 4), (5, 6), (7, 8), (1, 12), (0, 11), (9, 10)];
    let cert = PairingCertificate::new(pairs);
    assert!(validate_pairing(
        &closed_neighborhood_hypergraph(&pg.with_predominated(2, true)),
        &cert
    ));
}

#[test]
fn dominator_critical_examples() {
    let solver = Solver::default();
    for name in ["r_star", "fig6b"] {
        let pg = fixture(name);
        assert!(is_dominator_critical_tree(pg.graph(), &pg.predominated()).unwrap(), "{name}");
        assert!(solver.is_dominator_critical_game(&pg).unwrap(), "{name}");
    }
    // dropping the third leaf of R breaks it
    let r = fixture("r_star").with_predominated(9, false);
    assert!(!is_dominator_critical_tree(r.graph(), &r.predominated()).unwrap());
    assert!(!solver.is_dominator_critical_game(&r).unwrap());
}
