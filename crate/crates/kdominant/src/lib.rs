//! k-dominant skylines of finite point sets.
//!
//! A point `p` k-dominates a point `q` (with respect to minimization) when
//! `p` is less than or equal to `q` in at least `k` of the `d` coordinates
//! and strictly smaller in at least one of them. The k-dominant skyline of a
//! dataset is the set of points no other point k-dominates. For `k = d` this
//! is the classical skyline (the set of minimal points); for `k < d` the
//! relation is not transitive, mutual domination is possible, and the skyline
//! can be empty.
//!
//! The crate has three layers:
//!
//! * [`dominance`]: the predicates and skyline algorithms themselves, plus
//!   dominator histograms and dominance-cycle counting, for concrete
//!   datasets ([`data::Dataset`]).
//! * [`sampler`]: the random point models the analytical results describe
//!   (uniform hypercube, uniform simplex, categorical grids, a degenerate
//!   line model), driven by a splittable counter-based generator so every
//!   trial is reproducible independently of thread count.
//! * [`exact`] and [`asym`]: expected skyline sizes of those random models,
//!   as exact rational or high-precision values where a finite closed form
//!   exists, and as asymptotic predictors, threshold dimensions and error
//!   integrals where it does not. [`mc`] cross-validates the two against
//!   simulation.

pub mod asym;
pub mod data;
pub mod dominance;
pub mod exact;
pub mod mc;
pub mod sampler;
pub mod special;

mod bignum;

pub use data::Dataset;
pub use dominance::{
    count_dominant_cycles, dominates, dominator_histogram, k_dominant_skyline,
    k_dominant_skyline_exhaustive, k_dominates, skyline, CycleCount, DominatorHistogram,
};
pub use mc::{estimate, EstimateOptions, EstimateResult, Statistic};
pub use sampler::{Model, SamplerConfig};

use thiserror::Error;

/// Errors across the crate. Validation failures and resource refusals are
/// separate variants so callers can map them to different exit codes.
#[derive(Debug, Error)]
pub enum Error {
    #[error("k must be between 1 and {d}, got {k}")]
    KOutOfRange { k: usize, d: usize },

    #[error("expected {expected} coordinates, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("refusing to run: estimated work {needed} exceeds the limit {limit}")]
    WorkLimit { needed: u128, limit: u128 },

    #[error("not supported: {0}")]
    Unsupported(String),

    #[error("dataset error at line {line}: {message}")]
    Dataset { line: usize, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
