//! Exact arithmetic over the field of rational functions `Q(z)` and the
//! matrix operations built on it.

mod cycles;
mod function;
mod matrix;
mod poly;

pub use cycles::{det_via_cycle_families, WeightedDigraph};
pub use function::RationalFunction;
pub use matrix::{QMatrix, RatMatrix};
pub use poly::Polynomial;

pub use num_rational::BigRational;

/// Hard upper bound on polynomial degrees produced by matrix routines.
pub const DEGREE_CAP: usize = 64;

/// Largest order handled by exhaustive procedures.
pub const DEFAULT_MAX_EXACT_N: usize = 16;
