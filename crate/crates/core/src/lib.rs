//! Maker-Breaker domination games with predomination.
//!
//! - [`graph`]: graphs, predominated graphs, parsing, and the reduction to
//!   the closed-neighborhood hypergraph.
//! - [`hypergraph`]: keyed hypergraphs.
//! - [`game`]: the exhaustive Maker-Breaker solver, criticality checks and
//!   pairing certificates.
//! - [`tree`]: substructures of trees, the coloring, the Staller-win
//!   characterization and the linear-time criticality recognizer.
//! - [`generators`]: the constructive families and their certificates.
//! - [`dominator`]: Dominator-criticality via minimal transversals.
//! - [`sample`]: seeded samplers and tree corpora for tests and benchmarks.

pub mod dominator;
pub mod error;
pub mod game;
pub mod generators;
pub mod graph;
pub mod hypergraph;
pub mod sample;
pub mod tree;

pub use error::{Error, Result};
pub use game::{GameState, PairingCertificate, Player, Solver, SolverConfig, Verdict};
pub use graph::{Graph, IdMap, PredominatedGraph, Vertex};
pub use hypergraph::{EdgeKey, Hypergraph};
pub use tree::{ColorPartition, Substructure};
