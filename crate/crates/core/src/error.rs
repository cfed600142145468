use thiserror::Error;

/// Errors reported by the solvers and their supporting operations.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An order-statistic rank outside `1..=n`.
    #[error("rank {k} out of range 1..={n}")]
    RankOutOfRange { k: usize, n: usize },

    /// An empty value list where at least one element is required.
    #[error("empty input")]
    EmptyInput,

    /// A drop count outside `0..=n-(p+1)`.
    #[error("drop count {k} out of range 0..={max}")]
    DropCountOutOfRange { k: usize, max: usize },

    /// Vector or matrix dimensions that do not match the dataset.
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    /// A non-finite number where a real value is required.
    #[error("non-finite value in {place}")]
    NonFinite { place: &'static str },

    /// Fewer observations than parameters allow.
    #[error("dataset has n={n} observations but needs at least {min} for p={p}")]
    TooFewObservations { n: usize, p: usize, min: usize },

    /// Violation of the standing shape assumption n/2 >= p.
    #[error("dataset shape violates n/2 >= p (n={n}, p={p})")]
    ShapeAssumption { n: usize, p: usize },

    /// The design matrix does not have full column rank.
    /// `columns` lists the offending (1-based) columns.
    #[error(
        "design matrix is rank deficient (rank {rank} < p={p}); dependent columns: {columns:?}"
    )]
    RankDeficient {
        rank: usize,
        p: usize,
        columns: Vec<usize>,
    },

    /// An observation index outside the dataset.
    #[error("observation index {index} out of range for n={n}")]
    IndexOutOfRange { index: usize, n: usize },

    /// An index list that is not strictly increasing.
    #[error("index set is not strictly increasing")]
    UnsortedIndexSet,

    /// A subset whose regressor rows do not span the parameter space.
    #[error("subset {subset:?} is degenerate: rows have rank {rank} < p={p}")]
    DegenerateSubset {
        subset: Vec<usize>,
        rank: usize,
        p: usize,
    },

    /// A minimax subproblem over fewer than p+1 observations.
    #[error("subset of size {size} is underdetermined; need at least {need} observations")]
    Underdetermined { size: usize, need: usize },

    /// Local-minimum classification requested for a degenerate candidate.
    #[error("classification unavailable: candidate fit is degenerate")]
    ClassificationUnavailable,

    /// A brute-force guard refusing an input that is too large.
    #[error("{what} refused: size {got} exceeds guard limit {limit}")]
    SizeGuard {
        what: &'static str,
        got: u128,
        limit: u128,
    },

    /// Exact integer arithmetic overflowed.
    #[error("arithmetic overflow computing {what}")]
    Overflow { what: &'static str },

    /// Random search found no admissible candidate.
    #[error("no admissible candidate found: all sampled subsets were degenerate")]
    NoCandidate,

    /// A guard refusing a problem dimension the solver is not meant for.
    #[error("dimension p={p} exceeds limit {limit}; pass force=true to override")]
    DimensionGuard { p: usize, limit: usize },

    /// Malformed CSV input.
    #[error("csv error at line {line}: {msg}")]
    Csv { line: usize, msg: String },

    /// Invalid configuration value.
    #[error("invalid configuration: {msg}")]
    InvalidConfig { msg: String },

    /// The LP solver failed to make progress; indicates an internal bug
    /// or pathological input, never expected on valid data.
    #[error("minimax subproblem solver failed: {msg}")]
    SolverFailure { msg: String },
}

pub type Result<T> = std::result::Result<T, Error>;
