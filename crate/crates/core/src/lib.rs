//! Hard upper bounds on topology-only link prediction.
//!
//! Given a graph and a set of held-out edges, any predictor limited to
//! topology must score structurally indistinguishable candidate pairs
//! identically. Partitioning the non-edges into such equivalence cells
//! (global automorphism orbits, or canonical classes of endpoint-marked
//! k-hop neighborhoods) and counting held-out edges per cell yields
//! closed-form maxima for ROC and AUPR, and a certified upper bound for
//! average precision, that no classifier can beat.
//!
//! Modules:
//! - [`graph`]: graph representation, edge-list ingestion, non-edges,
//!   k-hop neighborhoods, induced subgraphs, permutations.
//! - [`canon`]: color refinement, exact canonical codes, automorphism
//!   generators, pair orbits.
//! - [`partition`]: non-edge cell partitions and positive/negative labeling.
//! - [`metrics`]: the bound formulas, average precision, curves, and
//!   negative downsampling.
//! - [`experiment`]: randomized edge-removal trials with a per-k stopping
//!   rule and confidence intervals.
//! - [`oracle`]: independent brute-force verifiers used by tests and audits.

pub mod canon;
pub mod error;
pub mod experiment;
pub mod graph;
pub mod metrics;
pub mod oracle;
pub mod partition;

pub use error::{Error, Result};
