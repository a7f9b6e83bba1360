//! The `mbd` command-line front end.
//!
//! Every command prints one JSON [`CommandResult`] on stdout. Keys come out
//! in declaration order, so the output is stable apart from `elapsed_ms`.
//! Failures print a message on stderr and exit with a class-specific code:
//! 2 for unparsable or invalid input, 3 for capacity limits, 4 for an input
//! outside the class a command needs (for example a non-forest given to the
//! tree recognizer), and 1 for I/O and other failures.

pub mod bench;
pub mod commands;

use std::path::PathBuf;

use clap::{ArgGroup, Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use sha2::{Digest, Sha256};

pub use commands::run;

#[derive(Debug, Parser)]
#[command(name = "mbd", version, about = "Maker-Breaker domination games with predomination")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Seed for every random choice; echoed in the output.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,

    /// Largest board (vertex count) the exhaustive solver accepts, at most 64.
    #[arg(long, global = true, default_value_t = 28)]
    pub limit: usize,

    /// Also print a short human-readable summary on stderr.
    #[arg(long, global = true)]
    pub human: bool,

    /// Output location: a directory for `generate`, a CSV file for `bench`.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Solve the domination game (or the Maker-Breaker game with --hypergraph).
    Solve {
        path: PathBuf,
        /// Read a hypergraph instead of a predominated graph.
        #[arg(long)]
        hypergraph: bool,
    },
    /// Decide criticality with the tree recognizer, the game oracle, or the
    /// Dominator-side transversal characterization.
    CheckCritical {
        path: PathBuf,
        #[command(flatten)]
        method: Method,
        /// With --oracle: read a hypergraph and test Maker-Breaker criticality.
        #[arg(long)]
        hypergraph: bool,
    },
    /// Black/white/gray coloring of a forest.
    Color { path: PathBuf },
    /// Generate members of a family from a spec/plan, or seeded at random.
    Generate {
        #[arg(value_enum)]
        kind: Kind,
        /// Join spec: the member itself for S and L, the base tree for C and A.
        #[arg(long)]
        spec: Option<String>,
        /// Replacement plan for C and A.
        #[arg(long)]
        plan: Option<String>,
        /// Base for C and A: a predominated tree whose undominated vertices
        /// are the fixed-degree vertices of a subdivided tree.
        #[arg(long, conflicts_with = "spec")]
        base: Option<PathBuf>,
        /// Number of random members (random mode only).
        #[arg(long, default_value_t = 1)]
        count: usize,
        /// Largest vertex count of a random member.
        #[arg(long, default_value_t = 16)]
        max_n: usize,
    },
    /// Dominator-criticality of a predominated tree, optionally with the
    /// minimal transversals of its substructure hypergraph.
    DominatorCritical {
        path: PathBuf,
        /// Include the minimal transversals.
        #[arg(long)]
        transversals: bool,
        /// At most this many transversals are listed.
        #[arg(long, default_value_t = 1000)]
        cap: usize,
    },
    /// Time the linear-time tree recognizer on random instances.
    Bench {
        /// Comma-separated ascending vertex counts; empty for none.
        #[arg(long, default_value = bench::DEFAULT_SIZES)]
        sizes: String,
        /// Timed samples per size; the median is reported.
        #[arg(long, default_value_t = 7)]
        repetitions: usize,
    },
    /// Look for critical predominated cacti the family matcher cannot explain.
    SearchCactusCounterexample {
        #[arg(long)]
        max_n: usize,
        /// Maximum number of instances checked with the game oracle.
        #[arg(long, default_value_t = 100_000)]
        budget: u64,
    },
}

#[derive(Debug, Args)]
#[command(group(ArgGroup::new("method").required(true).args(["tree_fast", "oracle", "dominator"])))]
pub struct Method {
    /// Algorithm 1: linear-time recognition on forests.
    #[arg(long)]
    pub tree_fast: bool,
    /// The exhaustive game solver.
    #[arg(long)]
    pub oracle: bool,
    /// Dominator-criticality via minimal transversals (trees).
    #[arg(long)]
    pub dominator: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Kind {
    /// Subdivided trees.
    #[value(name = "S")]
    S,
    /// Double-odd replacement cacti.
    #[value(name = "C")]
    C,
    /// k-odd replacements.
    #[value(name = "A")]
    A,
    /// The recursive hypergraph family.
    #[value(name = "L")]
    L,
}

#[derive(Debug, Serialize)]
pub struct CommandResult {
    pub command: &'static str,
    /// SHA-256 of the command's inputs (file contents and spec arguments).
    pub input_digest: String,
    pub seed: u64,
    pub limit: usize,
    pub payload: serde_json::Value,
    pub elapsed_ms: f64,
}

/// A failure with its process exit code.
#[derive(Debug)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl CliError {
    pub fn other(message: impl Into<String>) -> Self {
        CliError {
            code: 1,
            message: message.into(),
        }
    }

    pub fn invalid(message: impl Into<String>) -> Self {
        CliError {
            code: 2,
            message: message.into(),
        }
    }
}

impl From<mbd_core::Error> for CliError {
    fn from(e: mbd_core::Error) -> Self {
        use mbd_core::Error;
        let code = match e {
            Error::Parse { .. } | Error::InvalidArgument(_) => 2,
            Error::Capacity { .. } => 3,
            Error::InputClass(_) => 4,
        };
        CliError {
            code,
            message: e.to_string(),
        }
    }
}

/// Digest over length-prefixed parts, so part boundaries are unambiguous.
pub fn digest(parts: &[&[u8]]) -> String {
    let mut h = Sha256::new();
    for p in parts {
        h.update((p.len() as u64).to_le_bytes());
        h.update(p);
    }
    hex::encode(h.finalize())
}
