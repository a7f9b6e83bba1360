//! End-to-end runs of the `mbd` binary: verdicts, exit codes, and golden
//! outputs. Set `MBD_UPDATE_GOLDENS=1` to rewrite the golden files.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn root() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../..")
}

fn fixture(name: &str) -> String {
    root().join("fixtures").join(name).to_string_lossy().into_owned()
}

fn mbd(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mbd"))
        .args(args)
        .current_dir(root())
        .output()
        .expect("the binary runs")
}

fn ok_json(args: &[&str]) -> Value {
    let out = mbd(args);
    assert!(
        out.status.success(),
        "{args:?}: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn exit_code(args: &[&str]) -> i32 {
    mbd(args).status.code().expect("exited normally")
}

/// Output with the wall time removed, as stored in the golden files.
fn stable(mut v: Value) -> Value {
    v.as_object_mut().unwrap().remove("elapsed_ms");
    v
}

fn check_golden(name: &str, value: Value) {
    let path = root().join("fixtures/golden").join(format!("{name}.json"));
    let text = serde_json::to_string_pretty(&stable(value)).unwrap() + "\n";
    if std::env::var_os("MBD_UPDATE_GOLDENS").is_some() {
        std::fs::create_dir_all(path.parent().unwrap()).unwrap();
        std::fs::write(&path, &text).unwrap();
        return;
    }
    let expected = std::fs::read_to_string(&path)
        .unwrap_or_else(|e| panic!("{}: {e} (run with MBD_UPDATE_GOLDENS=1)", path.display()));
    assert_eq!(text, expected, "golden {name} differs");
}

#[test]
fn solve_examples() {
    let p2 = ok_json(&["solve", &fixture("p2.graph")]);
    assert_eq!(p2["payload"]["winner"], "Dominator");
    let p1 = ok_json(&["solve", &fixture("p1.graph")]);
    assert_eq!(p1["payload"]["winner"], "Staller");
    assert_eq!(p1["payload"]["first_optimal_move"], 0);
    let p3 = ok_json(&["solve", &fixture("p3.graph")]);
    assert_eq!(p3["payload"]["winner"], "Staller");
    assert_eq!(p3["payload"]["first_optimal_move"], 1);
    let seeded = ok_json(&["solve", &fixture("p3.graph"), "--seed", "9", "--limit", "12"]);
    assert_eq!((seeded["seed"].as_u64(), seeded["limit"].as_u64()), (Some(9), Some(12)));
}

#[test]
fn solve_goldens() {
    for name in ["p1", "p2", "p3", "fig2_tree", "fig6b", "h1", "h2", "r_star", "fig3_bottom"] {
        check_golden(&format!("solve_{name}"), ok_json(&["solve", &fixture(&format!("{name}.graph"))]));
    }
}

#[test]
fn hypergraph_input() {
    let dir = std::env::temp_dir().join(format!("mbd-cli-hyper-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("two.hypergraph");
    std::fs::write(&path, "n=3\nh 0.0 0 2\nh 1.0 1 2\n").unwrap();
    let p = path.to_string_lossy();
    let v = ok_json(&["solve", "--hypergraph", &p]);
    assert_eq!(v["payload"]["winner"], "Maker");
    let c = ok_json(&["check-critical", "--oracle", "--hypergraph", &p]);
    assert_eq!(c["payload"]["critical"], true);
    assert_eq!(c["payload"]["atomic"], true);
}

#[test]
fn check_critical_methods_agree_on_forest_fixtures() {
    for name in ["p1", "p2", "p3", "fig2_tree", "fig6b", "fig3_bottom", "fig3_top", "fig3_middle", "r_star"] {
        let path = fixture(&format!("{name}.graph"));
        let fast = ok_json(&["check-critical", "--tree-fast", &path]);
        let oracle = ok_json(&["check-critical", "--oracle", &path]);
        assert_eq!(fast["payload"]["critical"], oracle["payload"]["critical"], "{name}");
        assert_eq!(fast["payload"]["atomic"], oracle["payload"]["atomic"], "{name}");
    }
    let bottom = ok_json(&["check-critical", "--tree-fast", &fixture("fig3_bottom.graph")]);
    assert_eq!(bottom["payload"]["critical"], true);
    check_golden("check_tree_fast_fig3_bottom", bottom);
    let top = ok_json(&["check-critical", "--tree-fast", &fixture("fig3_top.graph")]);
    assert_eq!(top["payload"]["witness"]["fixed_degree"], serde_json::json!([0, 2, 4, 6, 8]));
    let not = ok_json(&["check-critical", "--tree-fast", &fixture("fig2_tree.graph")]);
    assert_eq!(not["payload"]["report"]["status"], "x_not_class");
}

#[test]
fn dominator_checks() {
    let v = ok_json(&["check-critical", "--dominator", &fixture("fig6b.graph")]);
    assert_eq!(v["payload"]["dominator_critical"], true);
    check_golden("check_dominator_fig6b", v);
    let r = ok_json(&["dominator-critical", &fixture("r_star.graph"), "--transversals"]);
    assert_eq!(r["payload"]["dominator_critical"], true);
    let list = r["payload"]["minimal_transversals"]["transversals"].as_array().unwrap();
    assert!(list.contains(&serde_json::json!([3, 6, 9])));
    let capped = ok_json(&["dominator-critical", &fixture("r_star.graph"), "--transversals", "--cap", "2"]);
    assert_eq!(capped["payload"]["minimal_transversals"]["truncated"], true);
    let none = ok_json(&["dominator-critical", &fixture("p2.graph")]);
    assert_eq!(none["payload"]["dominator_critical"], false);
}

#[test]
fn color_examples() {
    let fig2 = ok_json(&["color", &fixture("fig2_tree.graph")]);
    assert_eq!(fig2["payload"]["black"], serde_json::json!([1, 4, 5, 7, 8, 9, 12]));
    assert_eq!(fig2["payload"]["white"], serde_json::json!([3, 6, 10, 11]));
    assert_eq!(fig2["payload"]["gray"], serde_json::json!([0, 2]));
    assert_eq!(fig2["payload"]["substructures"], 4);
    check_golden("color_fig2_tree", fig2);
    let p2 = ok_json(&["color", &fixture("p2.graph")]);
    assert_eq!(p2["payload"]["gray"], serde_json::json!([0, 1]));
    let p3 = ok_json(&["color", &fixture("p3.graph")]);
    assert_eq!(p3["payload"]["black"], serde_json::json!([0, 2]));
    assert_eq!(p3["payload"]["white"], serde_json::json!([1]));
}

fn temp_dir(tag: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("mbd-cli-{tag}-{}", std::process::id()));
    let _ = std::fs::remove_dir_all(&dir);
    dir
}

fn read(path: &Path) -> String {
    std::fs::read_to_string(path).unwrap()
}

#[test]
fn generate_h1_matches_the_golden_files() {
    let dir = temp_dir("h1");
    let out = dir.to_string_lossy().into_owned();
    let v = ok_json(&[
        "generate",
        "C",
        "--base",
        &fixture("fig3_bottom.graph"),
        "--plan",
        "(((0 1) 3 3))",
        "--out",
        &out,
    ]);
    assert_eq!(read(&dir.join("c0.graph")), read(Path::new(&fixture("h1.graph"))));
    assert_eq!(read(&dir.join("c0.sidecar")), read(Path::new(&fixture("h1.sidecar"))));
    check_golden("generate_h1", v);
}

#[test]
fn generate_families() {
    let l = ok_json(&["generate", "L", "--spec", "(H1 0 H1 0)"]);
    assert_eq!(l["payload"]["instances"][0]["vertices"], 3);
    let s = ok_json(&["generate", "S", "--count", "10", "--seed", "5"]);
    let members = s["payload"]["instances"].as_array().unwrap();
    assert_eq!(members.len(), 10);
    // every emitted S member is critical by the tree recognizer
    let dir = temp_dir("s");
    let out = dir.to_string_lossy().into_owned();
    ok_json(&["generate", "S", "--count", "10", "--seed", "5", "--out", &out]);
    for i in 0..10 {
        let path = dir.join(format!("s{i}.graph")).to_string_lossy().into_owned();
        let v = ok_json(&["check-critical", "--tree-fast", &path]);
        assert_eq!(v["payload"]["critical"], true, "s{i}");
        assert!(dir.join(format!("s{i}.sidecar")).exists());
    }
    let again = ok_json(&["generate", "S", "--count", "10", "--seed", "5"]);
    assert_eq!(stable(again), stable(s));
    for kind in ["C", "A"] {
        let v = ok_json(&["generate", kind, "--count", "5", "--seed", "1", "--max-n", "14"]);
        assert_eq!(v["payload"]["instances"].as_array().unwrap().len(), 5);
    }
    let a = ok_json(&["generate", "A", "--spec", "(P1 0 P1 0)", "--plan", "(((0 2) 3 3 1))"]);
    assert_eq!(a["payload"]["instances"][0]["vertices"], 7);
}

#[test]
fn exit_codes() {
    let dir = temp_dir("codes");
    std::fs::create_dir_all(&dir).unwrap();
    let bad = dir.join("bad.graph");
    std::fs::write(&bad, "n=3\ne 0 7\n").unwrap();
    let bad = bad.to_string_lossy().into_owned();
    assert_eq!(exit_code(&["solve", &bad]), 2);
    assert_eq!(exit_code(&["generate", "L", "--spec", "(H1 0 H1"]), 2);
    assert_eq!(exit_code(&["generate", "C", "--spec", "(P1 0 P1 0)", "--plan", "(((0 2) 3 4))"]), 2);
    assert_eq!(exit_code(&["solve", &fixture("fig3_top.graph"), "--limit", "10"]), 3);
    assert_eq!(exit_code(&["solve", &fixture("p3.graph"), "--limit", "65"]), 3);
    assert_eq!(exit_code(&["check-critical", "--tree-fast", &fixture("h1.graph")]), 4);
    assert_eq!(exit_code(&["color", &fixture("h2.graph")]), 4);
    assert_eq!(exit_code(&["search-cactus-counterexample", "--max-n", "40"]), 3);
    assert_eq!(exit_code(&["solve", "/nonexistent/file.graph"]), 1);
}

#[test]
fn bench_output() {
    let empty = ok_json(&["bench", "--sizes", ""]);
    assert_eq!(empty["payload"]["csv"], "n,vertices,instances,batch,samples,median_ms,min_ms,ratio\n");
    let one = ok_json(&["bench", "--sizes", "1000", "--repetitions", "3"]);
    let csv = one["payload"]["csv"].as_str().unwrap();
    assert_eq!(csv.lines().count(), 2);
    assert!(csv.lines().nth(1).unwrap().starts_with("1000,999,"));
    let two = ok_json(&["bench", "--sizes", "512,1024", "--repetitions", "3"]);
    assert!(two["payload"]["rows"][1]["ratio"].as_f64().unwrap() > 0.0);
    assert_eq!(exit_code(&["bench", "--sizes", "10,5"]), 2);
    let path = temp_dir("bench-csv");
    let out = path.to_string_lossy().into_owned();
    ok_json(&["bench", "--sizes", "64", "--out", &out]);
    assert!(read(&path).starts_with("n,vertices"));
}

#[test]
fn cactus_search() {
    let six = ok_json(&["search-cactus-counterexample", "--max-n", "6"]);
    assert_eq!(six["payload"]["result"], "none found");
    assert_eq!(six["payload"]["report"]["exhaustive"], true);
    check_golden("search_cactus_6", six);
    let zero = ok_json(&["search-cactus-counterexample", "--max-n", "0"]);
    assert_eq!(zero["payload"]["report"]["instances_checked"], 0);
    let args = ["search-cactus-counterexample", "--max-n", "10", "--budget", "60", "--seed", "4"];
    let a = ok_json(&args);
    assert_eq!(a["payload"]["report"]["exhaustive"], false);
    assert_eq!(stable(a), stable(ok_json(&args)));
}
