//! Brute-force reference implementations, slow by design.
//!
//! These exist to cross-check the fast paths: the order statistic against
//! literal subset enumeration, the solvers against full vertex enumeration,
//! and local-minimum classification against grid probing. Size guards
//! refuse oversized inputs outright rather than degrading quietly.

use crate::chebyshev::equioscillation_point;
use crate::combin::{binomial, Combinations};
use crate::dataset::{Dataset, IndexSet};
use crate::error::{Error, Result};
use crate::objective::objective_fk;
use crate::report::{SolverReport, TraceStep};

/// Maximum list length accepted by [`brute_force_order_stat`].
pub const ORDER_STAT_GUARD: usize = 12;

/// Maximum number of (p+1)-subsets accepted by [`brute_force_lms`].
pub const LMS_GUARD: u128 = 1_000_000;

/// The k-th smallest element computed literally as the minimum over all
/// k-subsets of the subset maximum.
pub fn brute_force_order_stat(values: &[f64], k: usize) -> Result<f64> {
    if values.is_empty() {
        return Err(Error::EmptyInput);
    }
    if values.len() > ORDER_STAT_GUARD {
        return Err(Error::SizeGuard {
            what: "brute_force_order_stat",
            got: values.len() as u128,
            limit: ORDER_STAT_GUARD as u128,
        });
    }
    if k == 0 || k > values.len() {
        return Err(Error::RankOutOfRange { k, n: values.len() });
    }
    let mut best = f64::INFINITY;
    for subset in Combinations::new(values.len(), k) {
        let max = subset
            .iter()
            .map(|&i| values[i])
            .fold(f64::NEG_INFINITY, f64::max);
        best = best.min(max);
    }
    Ok(best)
}

/// Exact LMS optimum by full enumeration: the vertex of every full-rank
/// (p+1)-subset is built and evaluated under the median objective; all tied
/// best vertices are returned.
pub fn brute_force_lms(data: &Dataset) -> Result<SolverReport> {
    brute_force_fk(data, data.lms_drop_count())
}

/// [`brute_force_lms`] generalized to the k-drop objective.
pub fn brute_force_fk(data: &Dataset, k: usize) -> Result<SolverReport> {
    let n = data.n();
    let p = data.p();
    if k > data.max_drop_count() {
        return Err(Error::DropCountOutOfRange {
            k,
            max: data.max_drop_count(),
        });
    }
    let count = binomial(n as u64, (p + 1) as u64)?;
    if count > LMS_GUARD {
        return Err(Error::SizeGuard {
            what: "brute_force_lms",
            got: count,
            limit: LMS_GUARD,
        });
    }

    let tol = data.tolerance();
    let mut best = f64::INFINITY;
    let mut winners: Vec<(IndexSet, crate::chebyshev::CandidateFit)> = Vec::new();
    let mut examined = 0usize;
    let mut solved = 0usize;
    let mut trace = Vec::new();

    for subset in Combinations::new(n, p + 1) {
        let idx = IndexSet::new(subset).expect("combinations are strictly increasing");
        solved += 1;
        let fit = match equioscillation_point(data, &idx) {
            Ok(f) => f,
            Err(_) => continue,
        };
        examined += 1;
        let value = match objective_fk(data, &fit.theta, k) {
            Ok(v) => v,
            Err(_) => continue,
        };
        if value < best - tol {
            best = value;
            winners.clear();
            trace.push(TraceStep {
                subset: idx.clone(),
                value,
            });
        }
        if (value - best).abs() <= tol {
            best = best.min(value);
            if !winners.iter().any(|(s, _)| *s == fit.active) {
                winners.push((idx, fit));
            }
        }
    }
    if winners.is_empty() {
        return Err(Error::NoCandidate);
    }
    winners.sort_by(|a, b| a.0.cmp(&b.0));
    Ok(SolverReport {
        optimizers: winners.into_iter().map(|(_, f)| f).collect(),
        value: best,
        subproblems_solved: solved,
        candidates_examined: examined,
        trace,
    })
}

/// Numerically probes whether `theta` locally minimizes the k-drop
/// objective: evaluates the objective on a regular grid of the given radius
/// and checks no probed point does better. Only feasible for p <= 2.
pub fn grid_probe_local_min(
    data: &Dataset,
    theta: &[f64],
    k: usize,
    radius: f64,
    samples: usize,
) -> Result<bool> {
    if data.p() > 2 {
        return Err(Error::SizeGuard {
            what: "grid_probe_local_min",
            got: data.p() as u128,
            limit: 2,
        });
    }
    if !radius.is_finite() || radius <= 0.0 || samples < 2 {
        return Err(Error::InvalidConfig {
            msg: "grid probe needs radius > 0 and samples >= 2".into(),
        });
    }
    let here = objective_fk(data, theta, k)?;
    let tol = data.tolerance();
    let steps: Vec<f64> = (0..samples)
        .map(|s| -radius + 2.0 * radius * s as f64 / (samples - 1) as f64)
        .collect();
    if data.p() == 1 {
        for dx in &steps {
            let probe = [theta[0] + dx];
            if objective_fk(data, &probe, k)? < here - tol {
                return Ok(false);
            }
        }
    } else {
        for dx in &steps {
            for dy in &steps {
                let probe = [theta[0] + dx, theta[1] + dy];
                if objective_fk(data, &probe, k)? < here - tol {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}
