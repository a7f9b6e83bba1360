//! The acceptance criteria, one PASS/FAIL line each. The timing criterion
//! runs first, while nothing else is running in this process.

use std::io::Write as _;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::PathBuf;
use std::process::Command;
use std::time::{Duration, Instant};

use serde_json::{json, Value};

use mbd_cli::bench;
use mbd_core::dominator::is_dominator_critical_tree;
use mbd_core::game::validate_pairing;
use mbd_core::generators::{
    apply_replacements, l_family_classes, matching_except, play_against_solver, random_member,
    verify_staller_strategy, Family, ReplacementPlan, StallerStrategy,
};
use mbd_core::graph::{atomize, closed_neighborhood_hypergraph, parse_graph};
use mbd_core::hypergraph::strip_isolated;
use mbd_core::sample::{derived_rng, predominated_tree_corpus};
use mbd_core::tree::{
    is_atomic_mbd_critical_tree, is_mbd_critical_tree, mbd_critical_tree_report,
    staller_wins_tree,
};
use mbd_core::{PairingCertificate, PredominatedGraph, Solver, Substructure};

type Outcome = Result<String, String>;

/// Number, title, and check; the timing criterion has no check here
/// because it runs ahead of the others.
type Criterion = (u32, &'static str, Option<fn() -> Outcome>);

fn root() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../..")
}

fn fixture_path(name: &str) -> String {
    root().join("fixtures").join(name).to_string_lossy().into_owned()
}

fn fixture(name: &str) -> PredominatedGraph {
    let text = std::fs::read_to_string(fixture_path(&format!("{name}.graph"))).unwrap();
    parse_graph(&text).unwrap()
}

fn mbd(args: &[&str]) -> Value {
    let out = Command::new(env!("CARGO_BIN_EXE_mbd"))
        .args(args)
        .output()
        .expect("the binary runs");
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn ensure(ok: bool, what: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(what())
    }
}

fn within(start: Instant, limit: Duration) -> Result<String, String> {
    let t = start.elapsed();
    ensure(t <= limit, || format!("took {t:.2?}, limit {limit:?}"))?;
    Ok(format!("{t:.2?}"))
}

/// Fig. 2: coloring and the four substructures, through the CLI.
fn criterion_1() -> Outcome {
    let start = Instant::now();
    let v = mbd(&["color", &fixture_path("fig2_tree.graph")]);
    let p = &v["payload"];
    // figure labels {2,6,7,9,10,11,14}, {5,8,12,13}, {1,4} in 0-based ids
    ensure(p["black"] == json!([1, 4, 5, 7, 8, 9, 12]), || format!("black {}", p["black"]))?;
    ensure(p["white"] == json!([3, 6, 10, 11]), || format!("white {}", p["white"]))?;
    ensure(p["gray"] == json!([0, 2]), || format!("gray {}", p["gray"]))?;
    ensure(p["substructures"] == 4, || format!("{} substructures", p["substructures"]))?;
    within(start, Duration::from_secs(1))
}

/// Fig. 3 bottom: critical and atomic both ways; extensions and removals.
fn criterion_2() -> Outcome {
    let start = Instant::now();
    let solver = Solver::default();
    let pg = fixture("fig3_bottom");
    ensure(is_mbd_critical_tree(&pg).unwrap(), || "Algorithm 1 says not critical".into())?;
    ensure(is_atomic_mbd_critical_tree(&pg).unwrap(), || "Algorithm 1 says not atomic".into())?;
    ensure(solver.is_mbd_critical(&pg).unwrap(), || "oracle says not critical".into())?;
    ensure(atomize(&pg).graph == pg, || "oracle side: atomize changes the graph".into())?;
    for v in pg.undominated() {
        let bigger = pg.with_predominated(v, true);
        ensure(!solver.staller_wins(&bigger).unwrap(), || format!("adding {v}: Staller wins"))?;
    }
    for v in pg.predominated() {
        let smaller = pg.with_predominated(v, false);
        ensure(!is_mbd_critical_tree(&smaller).unwrap(), || format!("removing {v}: still critical"))?;
        ensure(!solver.is_mbd_critical(&smaller).unwrap(), || format!("removing {v}: oracle critical"))?;
    }
    within(start, Duration::from_secs(10))
}

/// Tree characterizations against the solver over the n ≤ 9 corpus.
fn criterion_3() -> Outcome {
    let start = Instant::now();
    let solver = Solver::default();
    let corpus = predominated_tree_corpus(9, 7, 50, 1);
    for pg in &corpus {
        let win = solver.staller_wins(pg).unwrap();
        ensure(staller_wins_tree(pg).unwrap() == win, || format!("win differs:\n{}", pg.render()))?;
        let critical = solver.is_mbd_critical(pg).unwrap();
        ensure(is_mbd_critical_tree(pg).unwrap() == critical, || {
            format!("criticality differs:\n{}", pg.render())
        })?;
    }
    Ok(format!("{} instances, {}", corpus.len(), within(start, Duration::from_secs(600))?))
}

/// Random members of 𝒞 and 𝒜: critical, atomic, certified both ways.
fn criterion_4() -> Outcome {
    let start = Instant::now();
    let solver = Solver::default();
    for (family, count, seed) in [(Family::C, 100, 100), (Family::A, 50, 200)] {
        for i in 0..count {
            let h = random_member(family, 16, 6, &mut derived_rng(seed, i));
            let pg = PredominatedGraph::new(h.graph.clone(), h.white_vertices()).unwrap();
            let context = || format!("{family:?} #{i} plan {}", h.plan);
            ensure(pg.n() <= 16, || format!("{}: {} vertices", context(), pg.n()))?;
            ensure(solver.is_mbd_critical(&pg).unwrap(), || format!("{}: not critical", context()))?;
            ensure(atomize(&pg).graph == pg, || format!("{}: not atomic", context()))?;
            for &x in &h.fixed_degree {
                let m = matching_except(&h, x).map_err(|e| format!("{}: {e}", context()))?;
                let hyper = closed_neighborhood_hypergraph(&pg.with_predominated(x, true));
                ensure(m.covers_all_but(&h.graph, x) && validate_pairing(&hyper, &m.to_pairing()), || {
                    format!("{}: matching for x={x} rejected", context())
                })?;
            }
            let strategy = StallerStrategy::from_build(&h);
            ensure(verify_staller_strategy(&strategy).is_winning(), || {
                format!("{}: strategy has a losing line", context())
            })?;
            ensure(play_against_solver(&strategy, &solver).unwrap().0, || {
                format!("{}: strategy lost to the solver", context())
            })?;
        }
    }
    within(start, Duration::from_secs(900))
}

/// H1 and the Fig. 5 matching.
fn criterion_5() -> Outcome {
    let start = Instant::now();
    let solver = Solver::default();
    let bottom = fixture("fig3_bottom");
    let base = Substructure::induced_in(bottom.graph(), 0..bottom.n(), bottom.undominated());
    let plan = ReplacementPlan::parse("(((0 1) 3 3))").unwrap();
    let h = apply_replacements(&base, &plan, Family::C).unwrap();
    let pg = fixture("h1");
    ensure(pg.n() == 13, || format!("H1 has {} vertices", pg.n()))?;
    let generated = PredominatedGraph::new(h.graph.clone(), h.white_vertices()).unwrap();
    ensure(generated == pg, || "generated H1 differs from the fixture".into())?;
    ensure(solver.is_mbd_critical(&pg).unwrap(), || "H1 is not critical".into())?;
    // figure vertex 3 is id 2
    let hyper = closed_neighborhood_hypergraph(&pg.with_predominated(2, true));
    let m = matching_except(&h, 2).map_err(|e| e.to_string())?;
    ensure(m.covers_all_but(&h.graph, 2), || "matching does not cover V∖{x}".into())?;
    ensure(validate_pairing(&hyper, &m.to_pairing()), || "computed pairing rejected".into())?;
    let fig5 = PairingCertificate::new([(3, 4), (5, 6), (7, 8), (1, 12), (0, 11), (9, 10)]);
    ensure(validate_pairing(&hyper, &fig5), || "Fig. 5 pairing rejected".into())?;
    within(start, Duration::from_secs(30))
}

/// Dominator-criticality: R and Fig. 6(b), and the corpus equivalence.
fn criterion_6() -> Outcome {
    let start = Instant::now();
    let solver = Solver::default();
    for name in ["r_star", "fig6b"] {
        let pg = fixture(name);
        ensure(is_dominator_critical_tree(pg.graph(), &pg.predominated()).unwrap(), || {
            format!("{name}: transversal check says no")
        })?;
        ensure(solver.is_dominator_critical_game(&pg).unwrap(), || {
            format!("{name}: game definition says no")
        })?;
    }
    let mut checked = 0;
    for pg in predominated_tree_corpus(9, 7, 50, 3) {
        let d = pg.predominated();
        if d.is_empty() {
            continue;
        }
        checked += 1;
        let by_tree = is_dominator_critical_tree(pg.graph(), &d).unwrap();
        ensure(by_tree == solver.is_dominator_critical_game(&pg).unwrap(), || {
            format!("disagreement:\n{}", pg.render())
        })?;
    }
    Ok(format!("{checked} instances, {}", within(start, Duration::from_secs(600))?))
}

/// Every ℒ member with at most 6 joins is critical without isolated vertices.
fn criterion_7() -> Outcome {
    let start = Instant::now();
    let solver = Solver::default();
    let classes = l_family_classes(6);
    for (spec, h) in &classes {
        ensure(h.n() <= 13, || format!("{spec}: {} vertices", h.n()))?;
        ensure(solver.is_critical(h).unwrap(), || format!("{spec}: not critical"))?;
        ensure(strip_isolated(h).0.n() == h.n(), || format!("{spec}: isolated vertex"))?;
    }
    Ok(format!("{} classes, {}", classes.len(), within(start, Duration::from_secs(300))?))
}

/// Linear scaling of the recognizer, and a million vertices within 5 s.
/// The machine may be shared, so a noisy run is retried up to two times.
fn criterion_8() -> Outcome {
    let sizes = bench::parse_sizes(bench::DEFAULT_SIZES).unwrap();
    let mut worst = Vec::new();
    let mut passed = false;
    for _ in 0..3 {
        let rows = bench::run(&sizes, 7, 0);
        let max = rows.iter().filter_map(|r| r.ratio).fold(0.0, f64::max);
        worst.push(format!("{max:.2}"));
        if max <= 2.5 {
            passed = true;
            break;
        }
    }
    ensure(passed, || format!("largest doubling ratio per run: {}", worst.join(", ")))?;
    let pg = bench::instance(1_000_000, 0);
    let start = Instant::now();
    let report = mbd_critical_tree_report(&pg).unwrap();
    let t = within(start, Duration::from_secs(5))?;
    ensure(report.is_critical(), || "the benchmark instance is not critical".into())?;
    Ok(format!("largest ratio {}, 10^6 vertices in {t}", worst.last().unwrap()))
}

/// The 13-vertex fixtures solve quickly with the recorded node counts.
fn criterion_9() -> Outcome {
    let mut parts = Vec::new();
    for name in ["fig2_tree", "fig6b", "h1", "r_star"] {
        ensure(fixture(name).n() == 13, || format!("{name} is not 13 vertices"))?;
        let start = Instant::now();
        let v = mbd(&["solve", &fixture_path(&format!("{name}.graph"))]);
        within(start, Duration::from_secs(10)).map_err(|e| format!("{name}: {e}"))?;
        let golden = root().join(format!("fixtures/golden/solve_{name}.json"));
        let golden: Value = serde_json::from_str(&std::fs::read_to_string(golden).unwrap()).unwrap();
        ensure(v["payload"] == golden["payload"], || {
            format!("{name}: {} vs golden {}", v["payload"], golden["payload"])
        })?;
        parts.push(format!("{name} {} nodes", v["payload"]["nodes_expanded"]));
    }
    Ok(parts.join(", "))
}

fn run(f: fn() -> Outcome) -> Outcome {
    catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|e| {
        let msg = e
            .downcast_ref::<String>()
            .cloned()
            .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
            .unwrap_or_default();
        Err(format!("panicked: {msg}"))
    })
}

#[test]
fn acceptance_criteria() {
    let timing = run(criterion_8);
    let criteria: [Criterion; 9] = [
        (1, "Fig. 2 coloring and four substructures", Some(criterion_1)),
        (2, "Fig. 3 bottom tree critical and atomic", Some(criterion_2)),
        (3, "tree characterizations match the oracle, n <= 9", Some(criterion_3)),
        (4, "random C and A members critical with certificates", Some(criterion_4)),
        (5, "H1 critical; Fig. 5 matching accepted", Some(criterion_5)),
        (6, "Dominator-criticality both ways", Some(criterion_6)),
        (7, "L members with <= 6 joins critical, no isolated vertices", Some(criterion_7)),
        (8, "recognizer scales linearly; 10^6 vertices <= 5 s", None),
        (9, "13-vertex fixtures solve with recorded node counts", Some(criterion_9)),
    ];
    // written to the stderr handle directly, which test output capture does
    // not intercept, so the report shows up in every run
    let mut report = std::io::stderr().lock();
    let mut failed = Vec::new();
    for (number, title, f) in criteria {
        let outcome = match f {
            Some(f) => run(f),
            None => timing.clone(),
        };
        match outcome {
            Ok(detail) => {
                writeln!(report, "criterion {number}: PASS - {title} ({detail})").unwrap();
            }
            Err(why) => {
                writeln!(report, "criterion {number}: FAIL - {title}: {why}").unwrap();
                failed.push(number);
            }
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
