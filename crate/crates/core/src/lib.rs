//! Least-median-of-squares regression through minimax subproblems.
//!
//! The LMS estimator minimizes the median of squared residuals, an
//! exceptionally outlier-resistant but highly multi-extremal objective.
//! Because the median of squares and the median of absolute values share
//! their minimizers, this crate works with absolute residuals throughout:
//! the objective is the h-th smallest absolute residual, h = floor(n/2)+1,
//! which is a minimum over observation subsets of maxima — a family of
//! small Chebyshev (l-infinity) fitting problems.
//!
//! Everything builds on that reduction:
//!
//! * [`chebyshev`] solves the minimax subproblems and constructs candidate
//!   vertices from (p+1)-subsets of observations.
//! * [`search`] enumerates and classifies local minima of the whole family
//!   of k-drop objectives (`f_k` = (n-k)-th smallest absolute residual),
//!   verifies the exact C(p+k, p) count, and hosts the greedy and exact
//!   depth-first solvers.
//! * [`bpb`] is a seeded random search over (p+1)-subsets with branch
//!   pruning.
//! * [`oracle`] holds deliberately slow brute-force references used by the
//!   test suites.
//! * [`csv`], [`synth`], and [`profile`] support the command-line tools:
//!   dataset ingestion, seeded instance generation, and exact
//!   piecewise-linear objective profiles for p = 1.
//!
//! All solvers are deterministic: ties break by smallest index, random
//! search is seeded, and reports serialize to identical bytes for
//! identical inputs.

pub mod bpb;
pub mod chebyshev;
pub mod combin;
pub mod csv;
pub mod dataset;
pub mod error;
mod linalg;
pub mod objective;
pub mod oracle;
pub mod profile;
pub mod report;
pub mod search;
pub mod synth;

pub use bpb::{bpb_solve, bpb_solve_fk, BpbConfig};
pub use chebyshev::{
    check_optimality, check_optimality_strict, equioscillation_point, solve_minimax,
    solve_minimax_fit, CandidateFit, LpSolution,
};
pub use combin::binomial;
pub use dataset::{Dataset, IndexSet, DEFAULT_TOLERANCE};
pub use error::{Error, Result};
pub use objective::{abs_residuals, kth_smallest, median_h, objective_fk, objective_lms};
pub use oracle::{brute_force_fk, brute_force_lms, brute_force_order_stat, grid_probe_local_min};
pub use profile::{profile_fk, profile_lms, ObjectiveProfile, ProfilePoint};
pub use report::{LocalMinimumRecord, SolverReport, TraceStep};
pub use search::{
    count_local_minima_theory, enumerate_all_local_minima, enumerate_local_minima,
    exhaustive_solve, exhaustive_solve_drops, exhaustive_solve_force, greedy_solve,
    greedy_solve_drops, is_local_min, verify_counting_identity, Enumeration, MinimaEnumeration,
};
pub use synth::{
    generate, is_general_position, random_general_position_instance, SynthConfig, SynthInstance,
};
