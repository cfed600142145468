//! Search algorithms over observation subsets: exact enumeration and
//! classification of the local minima of the k-drop objectives, the greedy
//! constraint-relaxation heuristic, and the exact depth-first solver.
//!
//! Every local minimum of the k-drop objective is the equioscillation
//! vertex of some (p+1)-subset, and a vertex is a local minimum of exactly
//! the objective whose drop count matches its strict-insider count. For
//! data in general position the number of local minima with drop count k
//! is C(p+k, p), independent of n.

use std::collections::{BTreeMap, HashSet};

use crate::chebyshev::{
    check_optimality_strict, equioscillation_point, fit_from_support, solve_minimax_internal,
    CandidateFit,
};
use crate::combin::{binomial, Combinations};
use crate::dataset::{Dataset, IndexSet};
use crate::error::{Error, Result};
use crate::objective::objective_fk;
use crate::report::{LocalMinimumRecord, SolverReport, TraceStep};

/// The theoretical number of local minima of the k-drop objective:
/// C(p+k, p), in exact integer arithmetic.
pub fn count_local_minima_theory(p: usize, k: usize) -> Result<u128> {
    if p == 0 {
        return Err(Error::InvalidConfig {
            msg: "model dimension p must be at least 1".into(),
        });
    }
    binomial((p + k) as u64, p as u64)
}

/// Checks the exact counting identity linking the measured local-minima
/// counts to the subset census:
/// sum_j 2^(K-j) M_j = sum_j C(n, j) for j = 0..=K with K = n-(p+1).
/// `measured` must hold M_0..M_K.
pub fn verify_counting_identity(n: usize, p: usize, measured: &[usize]) -> Result<bool> {
    let Some(kmax) = n.checked_sub(p + 1) else {
        return Err(Error::InvalidConfig {
            msg: format!("counting identity needs n >= p+1, got n={n}, p={p}"),
        });
    };
    if measured.len() != kmax + 1 {
        return Err(Error::DimensionMismatch {
            expected: kmax + 1,
            got: measured.len(),
        });
    }
    let mut lhs: u128 = 0;
    let mut rhs: u128 = 0;
    for j in 0..=kmax {
        let pow = 1u128
            .checked_shl((kmax - j) as u32)
            .ok_or(Error::Overflow {
                what: "counting identity",
            })?;
        let term = pow
            .checked_mul(measured[j] as u128)
            .ok_or(Error::Overflow {
                what: "counting identity",
            })?;
        lhs = lhs.checked_add(term).ok_or(Error::Overflow {
            what: "counting identity",
        })?;
        rhs = rhs
            .checked_add(binomial(n as u64, j as u64)?)
            .ok_or(Error::Overflow {
                what: "counting identity",
            })?;
    }
    Ok(lhs == rhs)
}

/// Drop count for which a strict equioscillation vertex is a local minimum:
/// inferred from its strict-insider count. Errors for degenerate fits.
pub(crate) fn classify_drop_count(data: &Dataset, fit: &CandidateFit) -> Result<usize> {
    if fit.degenerate || !check_optimality_strict(data, fit) {
        return Err(Error::ClassificationUnavailable);
    }
    let tol = data.tolerance();
    let insiders = (0..data.n())
        .filter(|&i| !fit.active.contains(i))
        .filter(|&i| data.residual(i, &fit.theta).abs() < fit.rho - tol)
        .count();
    Ok(data.n() - data.p() - 1 - insiders)
}

/// Whether the candidate is a local minimum of the k-drop objective: the
/// observations outside its active set with residuals strictly inside the
/// level must number exactly n - k - (p+1).
pub fn is_local_min(data: &Dataset, fit: &CandidateFit, k: usize) -> Result<bool> {
    if k > data.max_drop_count() {
        return Err(Error::DropCountOutOfRange {
            k,
            max: data.max_drop_count(),
        });
    }
    Ok(classify_drop_count(data, fit)? == k)
}

/// All local minima of every admissible drop count, plus the subsets that
/// had to be skipped as degenerate.
#[derive(Debug, Clone)]
pub struct MinimaEnumeration {
    by_k: Vec<Vec<LocalMinimumRecord>>,
    pub degenerate_subsets: Vec<IndexSet>,
}

impl MinimaEnumeration {
    pub fn for_drop_count(&self, k: usize) -> &[LocalMinimumRecord] {
        &self.by_k[k]
    }

    /// Measured counts M_0..M_max in drop-count order.
    pub fn counts(&self) -> Vec<usize> {
        self.by_k.iter().map(|v| v.len()).collect()
    }

    pub fn max_drop_count(&self) -> usize {
        self.by_k.len() - 1
    }
}

/// Result of enumerating the local minima of one drop count.
#[derive(Debug, Clone)]
pub struct Enumeration {
    pub records: Vec<LocalMinimumRecord>,
    pub degenerate_subsets: Vec<IndexSet>,
}

enum SubsetOutcome {
    Minimum(usize, LocalMinimumRecord),
    Degenerate(IndexSet),
}

fn classify_subset(data: &Dataset, subset: Vec<usize>) -> SubsetOutcome {
    let idx = IndexSet::new(subset).expect("combinations are strictly increasing");
    let fit = match equioscillation_point(data, &idx) {
        Ok(f) => f,
        Err(_) => return SubsetOutcome::Degenerate(idx),
    };
    let k = match classify_drop_count(data, &fit) {
        Ok(k) => k,
        Err(_) => return SubsetOutcome::Degenerate(idx),
    };
    let value = match objective_fk(data, &fit.theta, k) {
        Ok(v) => v,
        Err(_) => return SubsetOutcome::Degenerate(idx),
    };
    SubsetOutcome::Minimum(k, LocalMinimumRecord { k, fit, value })
}

/// Enumerates every (p+1)-subset once and classifies its vertex, bucketing
/// local minima by drop count. `threads` > 1 distributes the subsets over
/// scoped worker threads; the result is identical for any thread count.
pub fn enumerate_all_local_minima(data: &Dataset, threads: usize) -> MinimaEnumeration {
    let n = data.n();
    let p = data.p();
    let kmax = data.max_drop_count();
    let mut by_k: Vec<Vec<LocalMinimumRecord>> = vec![Vec::new(); kmax + 1];
    let mut degenerate = Vec::new();

    let subsets: Vec<Vec<usize>> = Combinations::new(n, p + 1).collect();
    let threads = threads.max(1).min(subsets.len().max(1));

    let outcomes: Vec<SubsetOutcome> = if threads <= 1 {
        subsets
            .into_iter()
            .map(|s| classify_subset(data, s))
            .collect()
    } else {
        let chunk = subsets.len().div_ceil(threads);
        let mut parts: Vec<Vec<SubsetOutcome>> = Vec::new();
        std::thread::scope(|scope| {
            let handles: Vec<_> = subsets
                .chunks(chunk)
                .map(|slice| {
                    scope.spawn(move || {
                        slice
                            .iter()
                            .map(|s| classify_subset(data, s.clone()))
                            .collect::<Vec<_>>()
                    })
                })
                .collect();
            for h in handles {
                parts.push(h.join().expect("worker thread panicked"));
            }
        });
        parts.into_iter().flatten().collect()
    };

    for outcome in outcomes {
        match outcome {
            SubsetOutcome::Minimum(k, rec) => by_k[k].push(rec),
            SubsetOutcome::Degenerate(idx) => degenerate.push(idx),
        }
    }
    for bucket in by_k.iter_mut() {
        bucket.sort_by(|a, b| {
            a.value
                .total_cmp(&b.value)
                .then_with(|| a.fit.active.cmp(&b.fit.active))
        });
    }
    MinimaEnumeration {
        by_k,
        degenerate_subsets: degenerate,
    }
}

/// All local minima of the k-drop objective, sorted by value and then by
/// active set. Degenerate subsets are reported alongside, never as errors.
pub fn enumerate_local_minima(data: &Dataset, k: usize) -> Result<Enumeration> {
    if k > data.max_drop_count() {
        return Err(Error::DropCountOutOfRange {
            k,
            max: data.max_drop_count(),
        });
    }
    let all = enumerate_all_local_minima(data, 1);
    Ok(Enumeration {
        records: all.by_k[k].clone(),
        degenerate_subsets: all.degenerate_subsets,
    })
}

/// Greedy constraint relaxation: starting from the minimax fit over all
/// observations, repeatedly drop the active observation whose removal
/// lowers the subproblem value the most (ties to the smallest index),
/// until only h observations remain. Solves at most (n-h)(p+1)+1
/// subproblems and returns an upper bound on the exact optimum.
pub fn greedy_solve(data: &Dataset) -> Result<SolverReport> {
    greedy_solve_drops(data, data.lms_drop_count())
}

/// [`greedy_solve`] generalized to an arbitrary drop count: removes
/// `drops` observations and evaluates the k-drop objective at the result.
pub fn greedy_solve_drops(data: &Dataset, drops: usize) -> Result<SolverReport> {
    if drops > data.max_drop_count() {
        return Err(Error::DropCountOutOfRange {
            k: drops,
            max: data.max_drop_count(),
        });
    }
    let p = data.p();
    let steps = drops;
    let mut current = IndexSet::full(data.n());
    let mut sol = solve_minimax_internal(data, &current)?;
    let mut solved = 1usize;
    let mut trace = vec![TraceStep {
        subset: current.clone(),
        value: sol.rho,
    }];

    for _ in 0..steps {
        let active: Vec<usize> = sol.active.iter().take(p + 1).collect();
        let mut best: Option<(IndexSet, crate::chebyshev::MinimaxInternal)> = None;
        for &i in &active {
            let candidate = current.without(i);
            solved += 1;
            match solve_minimax_internal(data, &candidate) {
                Ok(s) => {
                    if best.as_ref().is_none_or(|(_, b)| s.rho < b.rho) {
                        best = Some((candidate, s));
                    }
                }
                Err(Error::DegenerateSubset { .. }) => {}
                Err(e) => return Err(e),
            }
        }
        match best {
            Some((set, s)) => {
                current = set;
                sol = s;
                trace.push(TraceStep {
                    subset: current.clone(),
                    value: sol.rho,
                });
            }
            // Every removal was degenerate; keep the current solution.
            None => break,
        }
    }

    let fit = fit_from_support(data, &sol)?;
    let value = objective_fk(data, &fit.theta, drops)?;
    Ok(SolverReport {
        optimizers: vec![fit],
        value,
        subproblems_solved: solved,
        candidates_examined: solved,
        trace,
    })
}

/// Exact solver: depth-first relaxation of active constraints from the
/// full-set minimax fit down to h observations, memoizing removed-index
/// sets so each subproblem is solved once. Returns the global optimum and
/// every tied optimizer.
pub fn exhaustive_solve(data: &Dataset) -> Result<SolverReport> {
    exhaustive_solve_drops(data, data.lms_drop_count(), false)
}

/// [`exhaustive_solve`] with an override for the dimension guard.
pub fn exhaustive_solve_force(data: &Dataset, force: bool) -> Result<SolverReport> {
    exhaustive_solve_drops(data, data.lms_drop_count(), force)
}

/// Exact minimization of the k-drop objective by the same depth-first
/// relaxation, descending `drops` levels.
pub fn exhaustive_solve_drops(data: &Dataset, drops: usize, force: bool) -> Result<SolverReport> {
    let p = data.p();
    if drops > data.max_drop_count() {
        return Err(Error::DropCountOutOfRange {
            k: drops,
            max: data.max_drop_count(),
        });
    }
    if p > 8 && !force {
        return Err(Error::DimensionGuard { p, limit: 8 });
    }
    if data.n() > 128 {
        return Err(Error::SizeGuard {
            what: "exhaustive_solve",
            got: data.n() as u128,
            limit: 128,
        });
    }

    let mut ctx = DfsContext {
        data,
        target: drops,
        visited: HashSet::new(),
        points: HashSet::new(),
        subproblems: 0,
        best: f64::INFINITY,
        winners: BTreeMap::new(),
        trace: Vec::new(),
    };
    ctx.descend(0u128, 0)?;

    if ctx.winners.is_empty() {
        return Err(Error::NoCandidate);
    }
    let optimizers: Vec<CandidateFit> = ctx.winners.into_values().collect();
    Ok(SolverReport {
        optimizers,
        value: ctx.best,
        subproblems_solved: ctx.subproblems,
        candidates_examined: ctx.points.len(),
        trace: ctx.trace,
    })
}

struct DfsContext<'a> {
    data: &'a Dataset,
    target: usize,
    /// Removed-index sets already expanded, as bitmasks.
    visited: HashSet<u128>,
    /// Distinct solution points, keyed by their tight active set.
    points: HashSet<Vec<usize>>,
    subproblems: usize,
    best: f64,
    winners: BTreeMap<Vec<usize>, CandidateFit>,
    trace: Vec<TraceStep>,
}

impl DfsContext<'_> {
    fn descend(&mut self, removed: u128, depth: usize) -> Result<()> {
        if !self.visited.insert(removed) {
            return Ok(());
        }
        let n = self.data.n();
        let members: Vec<usize> = (0..n).filter(|i| removed & (1u128 << i) == 0).collect();
        let current = IndexSet::new(members).expect("mask order is increasing");
        let sol = match solve_minimax_internal(self.data, &current) {
            Ok(s) => s,
            // Non-general data can make a subproblem degenerate; skip its
            // subtree rather than failing the whole search.
            Err(Error::DegenerateSubset { .. }) => return Ok(()),
            Err(e) => return Err(e),
        };
        self.subproblems += 1;
        self.points.insert(sol.active.as_slice().to_vec());

        if depth == self.target {
            let tol = self.data.tolerance();
            if sol.rho < self.best - tol {
                self.best = sol.rho;
                self.winners.clear();
                self.trace.push(TraceStep {
                    subset: current.clone(),
                    value: sol.rho,
                });
            }
            if (sol.rho - self.best).abs() <= tol {
                self.best = self.best.min(sol.rho);
                if let Ok(fit) = fit_from_support(self.data, &sol) {
                    self.winners.insert(fit.active.as_slice().to_vec(), fit);
                }
            }
            return Ok(());
        }

        let branch: Vec<usize> = sol.active.iter().take(self.data.p() + 1).collect();
        for i in branch {
            self.descend(removed | (1u128 << i), depth + 1)?;
        }
        Ok(())
    }
}
