//! One function per subcommand. Each returns its payload, the digest of its
//! inputs, and a one-line summary for `--human`.

use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use rand::Rng;
use serde::Serialize;
use serde_json::{json, Value};

use mbd_core::dominator::{associated_hypergraph, enumerate_minimal_transversals, is_minimal_transversal};
use mbd_core::game::MAX_SOLVER_VERTICES;
use mbd_core::generators::search::{matches_cactus_family, search_cactus_counterexample};
use mbd_core::generators::{
    apply_replacements, build_l, build_s, is_in_s, matching_except, random_join_spec,
    random_member, verify_staller_strategy, CactusBuild, Family, JoinFamily, JoinSpec,
    ReplacementPlan, StallerStrategy,
};
use mbd_core::graph::{atomize, bipartition, parse_graph};
use mbd_core::hypergraph::{parse_hypergraph, strip_isolated};
use mbd_core::sample::derived_rng;
use mbd_core::tree::{
    color_vertices, critical_tree_witness, enumerate_substructures, is_atomic_mbd_critical_tree,
    mbd_critical_tree_report,
    ENUMERATION_LIMIT,
};
use mbd_core::{Hypergraph, Player, PredominatedGraph, Solver, SolverConfig, Substructure};

use crate::{bench, digest, Cli, CliError, Command, CommandResult, Kind};

type Outcome = Result<(Value, String, String), CliError>;

/// Runs a parsed command line. The human summary is returned separately.
pub fn run(cli: &Cli) -> Result<(CommandResult, String), CliError> {
    if cli.limit > MAX_SOLVER_VERTICES {
        return Err(CliError {
            code: 3,
            message: format!("--limit {} exceeds the solver maximum {MAX_SOLVER_VERTICES}", cli.limit),
        });
    }
    let solver = Solver::new(SolverConfig::with_limit(cli.limit));
    let start = Instant::now();
    let (name, outcome) = match &cli.command {
        Command::Solve { path, hypergraph } => ("solve", solve(path, *hypergraph, &solver)),
        Command::CheckCritical {
            path,
            method,
            hypergraph,
        } => (
            "check-critical",
            if method.tree_fast {
                check_tree_fast(path)
            } else if method.oracle {
                check_oracle(path, *hypergraph, &solver)
            } else {
                check_dominator(path)
            },
        ),
        Command::Color { path } => ("color", color(path)),
        Command::Generate {
            kind,
            spec,
            plan,
            base,
            count,
            max_n,
        } => (
            "generate",
            generate(cli, *kind, spec.as_deref(), plan.as_deref(), base.as_deref(), *count, *max_n),
        ),
        Command::DominatorCritical {
            path,
            transversals,
            cap,
        } => ("dominator-critical", dominator_critical(path, *transversals, *cap)),
        Command::Bench { sizes, repetitions } => ("bench", run_bench(cli, sizes, *repetitions)),
        Command::SearchCactusCounterexample { max_n, budget } => (
            "search-cactus-counterexample",
            search(*max_n, *budget, cli.seed, &solver),
        ),
    };
    let (payload, input_digest, summary) = outcome?;
    let result = CommandResult {
        command: name,
        input_digest,
        seed: cli.seed,
        limit: cli.limit,
        payload,
        elapsed_ms: start.elapsed().as_secs_f64() * 1e3,
    };
    Ok((result, summary))
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::other(format!("{}: {e}", path.display())))
}

fn read_graph(path: &Path) -> Result<(PredominatedGraph, String), CliError> {
    let text = read(path)?;
    let pg = parse_graph(&text)?;
    Ok((pg, digest(&[text.as_bytes()])))
}

fn read_hypergraph(path: &Path) -> Result<(Hypergraph, String), CliError> {
    let text = read(path)?;
    let h = parse_hypergraph(&text)?;
    Ok((h, digest(&[text.as_bytes()])))
}

fn to_value<T: Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("payload types serialize")
}

fn role(winner: Player, domination: bool) -> &'static str {
    match (winner, domination) {
        (p, true) => p.domination_role(),
        (Player::Maker, false) => "Maker",
        (Player::Breaker, false) => "Breaker",
    }
}

fn solve(path: &Path, hypergraph: bool, solver: &Solver) -> Outcome {
    let (verdict, d) = if hypergraph {
        let (h, d) = read_hypergraph(path)?;
        (solver.solve(&h)?, d)
    } else {
        let (pg, d) = read_graph(path)?;
        (solver.staller_wins_game(&pg)?, d)
    };
    let winner = role(verdict.winner, !hypergraph);
    let summary = match verdict.first_optimal_move {
        Some(m) => format!("{winner} wins; first optimal move {m}; {} nodes", verdict.nodes_expanded),
        None => format!("{winner} wins; {} nodes", verdict.nodes_expanded),
    };
    let payload = json!({
        "winner": winner,
        "first_optimal_move": verdict.first_optimal_move,
        "nodes_expanded": verdict.nodes_expanded,
    });
    Ok((payload, d, summary))
}

fn check_tree_fast(path: &Path) -> Outcome {
    let (pg, d) = read_graph(path)?;
    let report = mbd_critical_tree_report(&pg)?;
    let witness: Option<Substructure> = critical_tree_witness(&pg)?;
    let atomic = is_atomic_mbd_critical_tree(&pg)?;
    let summary = format!(
        "tree recognizer: {}",
        if report.is_critical() { "critical" } else { "not critical" }
    );
    let payload = json!({
        "method": "tree-fast",
        "critical": report.is_critical(),
        "atomic": atomic,
        "report": report,
        "witness": witness,
    });
    Ok((payload, d, summary))
}

fn check_oracle(path: &Path, hypergraph: bool, solver: &Solver) -> Outcome {
    if hypergraph {
        let (h, d) = read_hypergraph(path)?;
        let critical = solver.is_critical(&h)?;
        let atomic = critical && strip_isolated(&h).0.n() == h.n();
        let payload = json!({ "method": "oracle", "critical": critical, "atomic": atomic });
        return Ok((payload, d, format!("oracle: critical={critical} atomic={atomic}")));
    }
    let (pg, d) = read_graph(path)?;
    let staller_wins = solver.staller_wins(&pg)?;
    let critical = staller_wins && solver.is_mbd_critical(&pg)?;
    let atomic = critical && atomize(&pg).graph == pg;
    let payload = json!({
        "method": "oracle",
        "critical": critical,
        "atomic": atomic,
        "staller_wins": staller_wins,
    });
    Ok((payload, d, format!("oracle: critical={critical} atomic={atomic}")))
}

#[derive(Serialize)]
struct PrivateEdge {
    vertex: usize,
    edge: Vec<usize>,
}

fn check_dominator(path: &Path) -> Outcome {
    let (pg, d) = read_graph(path)?;
    let x = associated_hypergraph(pg.graph())?;
    let set = pg.predominated();
    let critical = !set.is_empty() && x.edge_count() > 0 && is_minimal_transversal(&x, &set);
    // evidence: for each vertex of D, an edge of 𝒳_T that D meets only there
    let private: Vec<PrivateEdge> = if critical {
        set.iter()
            .map(|&v| {
                let edge = x
                    .edges()
                    .map(|(_, e)| e)
                    .find(|e| e.iter().filter(|u| pg.is_predominated(**u)).eq([&v]))
                    .expect("minimal transversals have private edges")
                    .to_vec();
                PrivateEdge { vertex: v, edge }
            })
            .collect()
    } else {
        Vec::new()
    };
    let uncovered: Option<Vec<usize>> = x
        .edges()
        .map(|(_, e)| e)
        .find(|e| e.iter().all(|&u| !pg.is_predominated(u)))
        .map(<[usize]>::to_vec);
    let payload = json!({
        "method": "dominator",
        "dominator_critical": critical,
        "predominated": set,
        "substructure_black_sets": x.edges().map(|(_, e)| e.to_vec()).collect::<Vec<_>>(),
        "private_edges": private,
        "uncovered_edge": uncovered,
    });
    Ok((payload, d, format!("Dominator-critical: {critical}")))
}

fn color(path: &Path) -> Outcome {
    let (pg, d) = read_graph(path)?;
    let c = color_vertices(pg.graph())?;
    let count = if pg.n() <= ENUMERATION_LIMIT {
        Some(enumerate_substructures(pg.graph())?.len())
    } else {
        None
    };
    let summary = format!(
        "black {:?} white {:?} gray {:?}",
        c.black, c.white, c.gray
    );
    let payload = json!({
        "black": c.black,
        "white": c.white,
        "gray": c.gray,
        "substructures": count,
    });
    Ok((payload, d, summary))
}

fn dominator_critical(path: &Path, transversals: bool, cap: usize) -> Outcome {
    let (pg, d) = read_graph(path)?;
    let x = associated_hypergraph(pg.graph())?;
    let set = pg.predominated();
    let critical = !set.is_empty() && x.edge_count() > 0 && is_minimal_transversal(&x, &set);
    let list = if transversals {
        Some(enumerate_minimal_transversals(&x, cap)?)
    } else {
        None
    };
    let payload = json!({
        "dominator_critical": critical,
        "predominated": set,
        "substructures": x.edge_count(),
        "minimal_transversals": list,
    });
    Ok((payload, d, format!("Dominator-critical: {critical}")))
}

#[derive(Serialize)]
struct Instance {
    name: String,
    spec: Option<String>,
    plan: Option<String>,
    vertices: usize,
    fixed_degree: Option<Vec<usize>>,
    file: String,
    sidecar: String,
}

fn list(vs: &[usize]) -> String {
    vs.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(" ")
}

fn base_from_file(path: &Path) -> Result<(Substructure, String), CliError> {
    let text = read(path)?;
    let pg = parse_graph(&text)?;
    let g = pg.graph();
    let f = Substructure::new(0..pg.n(), g.edges(), pg.undominated());
    if !is_in_s(&f) {
        return Err(CliError::from(mbd_core::Error::InputClass(format!(
            "{}: the undominated vertices do not make the graph a subdivided tree",
            path.display()
        ))));
    }
    Ok((f, text))
}

/// Certificates a generated cactus must pass: the trace-free matcher (family
/// C only), a matching missing each fixed-degree vertex, and a winning Staller
/// strategy.
fn check_cactus(h: &CactusBuild) -> bool {
    let black: Vec<bool> = (0..h.graph.n()).map(|v| h.is_black(v)).collect();
    let shape_ok = match h.family {
        Family::C => matches_cactus_family(&h.graph, &black),
        Family::A => bipartition(&h.graph).is_some_and(|side| {
            let first = h.fixed_degree[0];
            (0..h.graph.n()).all(|v| black[v] == (side[v] == side[first]))
        }),
    };
    shape_ok
        && h.fixed_degree.iter().all(|&x| {
            matching_except(h, x).is_ok_and(|m| m.covers_all_but(&h.graph, x))
        })
        && verify_staller_strategy(&StallerStrategy::from_build(h)).is_winning()
}

fn cactus_instance(name: String, h: &CactusBuild, spec: Option<String>) -> Instance {
    let pg = PredominatedGraph::new(h.graph.clone(), h.white_vertices()).expect("whites are in range");
    Instance {
        name,
        spec,
        plan: Some(h.plan.to_string()),
        vertices: h.graph.n(),
        fixed_degree: Some(h.fixed_degree.clone()),
        file: pg.render(),
        sidecar: h.sidecar(),
    }
}

fn s_instance(name: String, spec: &JoinSpec) -> Result<Instance, CliError> {
    let s = build_s(spec)?;
    if !is_in_s(&s) {
        return Err(CliError::other(format!("{spec}: generated member failed the family check")));
    }
    let pg = PredominatedGraph::new(s.to_graph()?, s.white_vertices())?;
    Ok(Instance {
        name,
        spec: Some(spec.to_string()),
        plan: None,
        vertices: pg.n(),
        fixed_degree: Some(s.fixed_degree.clone()),
        file: pg.render(),
        sidecar: format!("family S\nspec {spec}\nX: {}\n", list(&s.fixed_degree)),
    })
}

fn l_instance(name: String, spec: &JoinSpec, solver: &Solver) -> Result<Instance, CliError> {
    let h = build_l(spec)?;
    let checked = if h.n() <= solver.config().vertex_limit {
        solver.is_critical(&h)? && strip_isolated(&h).0.n() == h.n()
    } else {
        true
    };
    if !checked {
        return Err(CliError::other(format!("{spec}: generated member is not critical")));
    }
    Ok(Instance {
        name,
        spec: Some(spec.to_string()),
        plan: None,
        vertices: h.n(),
        fixed_degree: None,
        file: h.render(),
        sidecar: format!("family L\nspec {spec}\n"),
    })
}

#[allow(clippy::too_many_arguments)]
fn generate(
    cli: &Cli,
    kind: Kind,
    spec: Option<&str>,
    plan: Option<&str>,
    base: Option<&Path>,
    count: usize,
    max_n: usize,
) -> Outcome {
    let solver = Solver::new(SolverConfig::with_limit(cli.limit));
    let prefix = match kind {
        Kind::S => "s",
        Kind::C => "c",
        Kind::A => "a",
        Kind::L => "l",
    };
    let mut base_text = String::new();
    let explicit = spec.is_some() || plan.is_some() || base.is_some();
    let mut instances = Vec::new();
    match kind {
        Kind::S | Kind::L => {
            if plan.is_some() || base.is_some() {
                return Err(CliError::invalid("--plan and --base apply to C and A only"));
            }
            if let Some(text) = spec {
                let spec = JoinSpec::parse(text)?;
                instances.push(match kind {
                    Kind::S => s_instance(format!("{prefix}0"), &spec)?,
                    _ => l_instance(format!("{prefix}0"), &spec, &solver)?,
                });
            } else {
                let max_joins = max_n.saturating_sub(1) / 2;
                for i in 0..count {
                    let mut rng = derived_rng(cli.seed, i as u64);
                    let joins = rng.gen_range(0..=max_joins);
                    let name = format!("{prefix}{i}");
                    instances.push(match kind {
                        Kind::S => s_instance(name, &random_join_spec(joins, JoinFamily::S, &mut rng))?,
                        _ => l_instance(name, &random_join_spec(joins, JoinFamily::L, &mut rng), &solver)?,
                    });
                }
            }
        }
        Kind::C | Kind::A => {
            let family = if kind == Kind::C { Family::C } else { Family::A };
            if explicit {
                let (f, spec_text) = match (spec, base) {
                    (Some(s), None) => (build_s(&JoinSpec::parse(s)?)?, Some(s.to_string())),
                    (None, Some(path)) => {
                        let (f, text) = base_from_file(path)?;
                        base_text = text;
                        (f, None)
                    }
                    _ => return Err(CliError::invalid("C and A need --spec or --base (with --plan)")),
                };
                let plan = ReplacementPlan::parse(plan.unwrap_or("()"))?;
                let h = apply_replacements(&f, &plan, family)?;
                if !check_cactus(&h) {
                    return Err(CliError::other("generated member failed its certificate checks"));
                }
                instances.push(cactus_instance(format!("{prefix}0"), &h, spec_text));
            } else {
                if max_n == 0 {
                    return Err(CliError::invalid("--max-n must be positive"));
                }
                for i in 0..count {
                    let h = random_member(family, max_n, 6, &mut derived_rng(cli.seed, i as u64));
                    if !check_cactus(&h) {
                        return Err(CliError::other(format!(
                            "member {i} (plan {}) failed its certificate checks",
                            h.plan
                        )));
                    }
                    instances.push(cactus_instance(format!("{prefix}{i}"), &h, None));
                }
            }
        }
    }
    if let Some(dir) = &cli.out {
        write_instances(dir, kind, &instances)?;
    }
    let d = digest(&[
        prefix.as_bytes(),
        spec.unwrap_or("").as_bytes(),
        plan.unwrap_or("").as_bytes(),
        base_text.as_bytes(),
        if explicit { b"" } else { b"random" },
        count.to_string().as_bytes(),
        max_n.to_string().as_bytes(),
    ]);
    let summary = format!("generated {} member(s) of {kind:?}", instances.len());
    Ok((json!({ "family": format!("{kind:?}"), "instances": instances }), d, summary))
}

fn write_instances(dir: &Path, kind: Kind, instances: &[Instance]) -> Result<(), CliError> {
    let io = |p: &PathBuf, e: std::io::Error| CliError::other(format!("{}: {e}", p.display()));
    fs::create_dir_all(dir).map_err(|e| io(&dir.to_path_buf(), e))?;
    let ext = if kind == Kind::L { "hypergraph" } else { "graph" };
    for inst in instances {
        let main = dir.join(format!("{}.{ext}", inst.name));
        fs::write(&main, &inst.file).map_err(|e| io(&main, e))?;
        let side = dir.join(format!("{}.sidecar", inst.name));
        fs::write(&side, &inst.sidecar).map_err(|e| io(&side, e))?;
    }
    Ok(())
}

fn run_bench(cli: &Cli, sizes: &str, repetitions: usize) -> Outcome {
    let sizes = bench::parse_sizes(sizes)?;
    let rows = bench::run(&sizes, repetitions, cli.seed);
    let csv = bench::to_csv(&rows);
    if let Some(path) = &cli.out {
        fs::write(path, &csv).map_err(|e| CliError::other(format!("{}: {e}", path.display())))?;
    }
    let max_ratio = rows.iter().filter_map(|r| r.ratio).fold(None, |m: Option<f64>, r| {
        Some(m.map_or(r, |m| m.max(r)))
    });
    let summary = format!("{} sizes; largest doubling ratio {max_ratio:?}", rows.len());
    let payload = json!({ "rows": rows, "max_ratio": max_ratio, "csv": csv });
    let size_text = sizes.iter().map(|s| s.to_string()).collect::<Vec<_>>().join(",");
    let d = digest(&[size_text.as_bytes(), repetitions.to_string().as_bytes()]);
    Ok((payload, d, summary))
}

fn search(max_n: usize, budget: u64, seed: u64, solver: &Solver) -> Outcome {
    let report = search_cactus_counterexample(max_n, budget, seed, solver)?;
    let result = if report.unmatched.is_empty() {
        "none found"
    } else {
        "unmatched critical instances found (not verified counterexamples)"
    };
    let summary = format!(
        "{result}: {} instances checked, {} critical, {} matched{}",
        report.instances_checked,
        report.critical_found,
        report.matched,
        if report.budget_exhausted { ", budget exhausted" } else { "" }
    );
    let d = digest(&[max_n.to_string().as_bytes(), budget.to_string().as_bytes()]);
    Ok((json!({ "result": result, "report": to_value(&report) }), d, summary))
}
