//! Solver output types shared by every algorithm.

use serde::{Deserialize, Serialize};

use crate::chebyshev::CandidateFit;
use crate::dataset::IndexSet;

/// One step of a solver's progress: the subset it worked on and the value
/// reached there.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TraceStep {
    pub subset: IndexSet,
    pub value: f64,
}

/// The outcome of a solver run. `optimizers` lists every tied optimum the
/// algorithm found, all sharing `value` within tolerance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolverReport {
    pub optimizers: Vec<CandidateFit>,
    pub value: f64,
    /// Number of minimax subproblems (or vertex constructions) solved.
    pub subproblems_solved: usize,
    /// Number of distinct candidate points examined.
    pub candidates_examined: usize,
    pub trace: Vec<TraceStep>,
}

impl SolverReport {
    /// The parameter vectors of all tied optimizers.
    pub fn thetas(&self) -> Vec<&[f64]> {
        self.optimizers.iter().map(|f| f.theta.as_slice()).collect()
    }
}

/// A classified local minimum of the k-drop objective.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LocalMinimumRecord {
    /// Drop count of the objective this point locally minimizes.
    pub k: usize,
    pub fit: CandidateFit,
    /// Objective value at the fit: the (n-k)-th smallest absolute residual.
    pub value: f64,
}
