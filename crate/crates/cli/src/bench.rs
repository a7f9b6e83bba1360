//! Scaling benchmark for the linear-time criticality recognizer.
//!
//! Instances are once-subdivided random trees with the subdivision vertices
//! predominated. Small sizes cycle through several distinct trees, so that
//! branch predictors cannot learn one repeated input. These are critical, so the recognizer never exits early
//! and every run visits the whole tree. Vertices are numbered in
//! breadth-first order, so memory access is local and the timings track the
//! recognizer's work rather than cache misses from scattered labels.

use std::collections::VecDeque;
use std::fmt::Write as _;
use std::hint::black_box;
use std::time::{Duration, Instant};

use serde::Serialize;

use mbd_core::generators::subdivide_once;
use mbd_core::sample::{derived_rng, random_tree};
use mbd_core::tree::mbd_critical_tree_report;
use mbd_core::{Graph, PredominatedGraph};

use crate::CliError;

/// Powers of two from 2^10 to 2^20.
pub const DEFAULT_SIZES: &str =
    "1024,2048,4096,8192,16384,32768,65536,131072,262144,524288,1048576";

/// Each timed sample runs the recognizer often enough to last this long.
const MIN_SAMPLE: Duration = Duration::from_millis(10);

/// Each size uses enough distinct trees to cover at least this many vertices.
const MIN_POOL_VERTICES: usize = 1 << 16;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BenchRow {
    /// Requested vertex count.
    pub n: usize,
    /// Vertex count of each generated instance (odd, at most `n`).
    pub vertices: usize,
    /// Distinct random trees timed at this size.
    pub instances: usize,
    /// Recognizer runs per timed sample.
    pub batch: usize,
    pub samples: usize,
    pub median_ms: f64,
    /// Fastest sample, the one least disturbed by other load.
    pub min_ms: f64,
    /// `median_ms` over the previous row's.
    pub ratio: Option<f64>,
}

pub fn parse_sizes(text: &str) -> Result<Vec<usize>, CliError> {
    let sizes: Vec<usize> = text
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| {
            s.parse::<usize>()
                .map_err(|_| CliError::invalid(format!("size `{s}` is not a vertex count")))
        })
        .collect::<Result<_, _>>()?;
    if sizes.windows(2).any(|w| w[0] >= w[1]) {
        return Err(CliError::invalid("sizes must be strictly ascending"));
    }
    if sizes.contains(&0) {
        return Err(CliError::invalid("sizes must be positive"));
    }
    Ok(sizes)
}

/// The benchmark instance with about `n` vertices.
pub fn instance(n: usize, seed: u64) -> PredominatedGraph {
    pool_instance(n, seed, 0)
}

/// The `index`-th distinct instance with about `n` vertices.
fn pool_instance(n: usize, seed: u64, index: usize) -> PredominatedGraph {
    let stream = (n as u64) << 20 | index as u64;
    let t = random_tree(n.div_ceil(2), &mut derived_rng(seed, stream));
    let s = subdivide_once(&t).expect("random trees are trees");
    let g = s.to_graph().expect("members are simple graphs");
    let label = bfs_labels(&g);
    let edges = (0..g.n()).flat_map(|u| {
        let label = &label;
        g.neighbors(u)
            .iter()
            .filter(move |&&v| u < v)
            .map(move |&v| (label[u], label[v]))
    });
    let relabeled = Graph::from_edges(g.n(), edges).expect("relabeling keeps the graph simple");
    let d = s.white_vertices().into_iter().map(|v| label[v]);
    PredominatedGraph::new(relabeled, d).expect("white vertices are in range")
}

/// New label of each vertex of a tree, in breadth-first order from vertex 0.
fn bfs_labels(g: &Graph) -> Vec<usize> {
    let mut label = vec![usize::MAX; g.n()];
    let mut queue = VecDeque::from([0]);
    label[0] = 0;
    let mut next = 1;
    while let Some(u) = queue.pop_front() {
        for &v in g.neighbors(u) {
            if label[v] == usize::MAX {
                label[v] = next;
                next += 1;
                queue.push_back(v);
            }
        }
    }
    label
}

/// Runs the recognizer `batch` times, cycling through `pool`.
fn time_batch(pool: &[PredominatedGraph], batch: usize) -> Duration {
    let start = Instant::now();
    for pg in pool.iter().cycle().take(batch) {
        let report = mbd_critical_tree_report(black_box(pg)).expect("instances are trees");
        black_box(report);
    }
    start.elapsed()
}

/// Per-run time of the recognizer at each size.
pub fn run(sizes: &[usize], samples: usize, seed: u64) -> Vec<BenchRow> {
    let samples = samples.max(1);
    let mut rows: Vec<BenchRow> = Vec::with_capacity(sizes.len());
    for &n in sizes {
        let count = MIN_POOL_VERTICES.div_ceil(n);
        let pool: Vec<PredominatedGraph> = (0..count).map(|i| pool_instance(n, seed, i)).collect();
        // warm up, then size the batch so each sample is long enough to time
        let once = time_batch(&pool, count).max(Duration::from_nanos(1)) / count as u32;
        let runs = (MIN_SAMPLE.as_nanos() / once.as_nanos().max(1)).clamp(1, 1 << 24) as usize;
        let batch = runs.div_ceil(count) * count;
        let mut times: Vec<f64> = (0..samples)
            .map(|_| time_batch(&pool, batch).as_secs_f64() * 1e3 / batch as f64)
            .collect();
        times.sort_by(f64::total_cmp);
        let median_ms = times[times.len() / 2];
        let min_ms = times[0];
        let ratio = rows.last().map(|prev| median_ms / prev.median_ms);
        rows.push(BenchRow {
            n,
            vertices: pool[0].n(),
            instances: count,
            batch,
            samples,
            median_ms,
            min_ms,
            ratio,
        });
    }
    rows
}

pub fn to_csv(rows: &[BenchRow]) -> String {
    let mut out = String::from("n,vertices,instances,batch,samples,median_ms,min_ms,ratio\n");
    for r in rows {
        let ratio = r.ratio.map(|x| format!("{x:.3}")).unwrap_or_default();
        writeln!(
            out,
            "{},{},{},{},{},{:.6},{:.6},{}",
            r.n, r.vertices, r.instances, r.batch, r.samples, r.median_ms, r.min_ms, ratio
        )
        .unwrap();
    }
    out
}
