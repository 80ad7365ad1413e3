//! Identifiability analysis for dynamical networks observed through a
//! subset of measured nodes.
//!
//! The graph side ([`graph`], [`paths`], [`identify`]) decides, per node,
//! whether the transfer functions to its out-neighbours are recoverable
//! from the measured transfer matrix. The algebraic side ([`ratfun`],
//! [`oracle`]) re-checks those verdicts on concrete network matrices in
//! exact arithmetic.

pub mod error;
pub mod exec;
pub mod graph;
pub mod identify;
pub mod oracle;
pub mod paths;
pub mod ratfun;

pub use error::{Error, Result};
pub use exec::Execution;
pub use graph::{parse_graph, DiGraph, NodeSet, Vertex};

/// Limits and execution strategy shared by the analysis entry points.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Config {
    /// Largest vertex count accepted by exhaustive procedures.
    pub max_exact_n: usize,
    /// Bound on the number of enumerated path sets.
    pub cap: usize,
    pub execution: Execution,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            max_exact_n: ratfun::DEFAULT_MAX_EXACT_N,
            cap: paths::DEFAULT_CAP,
            execution: Execution::default(),
        }
    }
}
