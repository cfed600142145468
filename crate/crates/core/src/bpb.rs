//! Branch-and-probability-bound random search over (p+1)-subsets.
//!
//! This is a pragmatic variant designed for this crate; only the outline —
//! random search over (p+1)-subsets with probabilistic branch pruning — is
//! inherited. The concrete scheme:
//!
//! * The subset space is partitioned into branches by smallest member.
//! * Each round gives every active branch an equal sampling quota; a branch
//!   small enough to fit its quota is enumerated outright and retired.
//! * After each round branches are ranked by the empirical
//!   `retention_quantile` of the objective values they produced, and only
//!   the best `branch_factor` survive.
//! * Sampling uses a ChaCha8 generator with one stream per branch, derived
//!   from the seed by branch index, so results are reproducible and
//!   independent of evaluation interleaving.
//!
//! Every candidate is an equioscillation vertex, so the returned value is
//! the median objective at a stationary point and always bounds the exact
//! optimum from above.

use std::collections::HashSet;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::chebyshev::{check_optimality_strict, equioscillation_point, CandidateFit};
use crate::combin::Combinations;
use crate::dataset::{Dataset, IndexSet};
use crate::error::{Error, Result};
use crate::objective::objective_fk;
use crate::report::{SolverReport, TraceStep};

/// Tuning knobs for [`bpb_solve`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BpbConfig {
    /// Seed for the portable generator.
    pub seed: u64,
    /// Total candidate-evaluation budget.
    pub iterations: usize,
    /// Number of branches retained after each pruning round.
    pub branch_factor: usize,
    /// Quantile of each branch's sampled values used as its pruning score.
    pub retention_quantile: f64,
}

impl Default for BpbConfig {
    fn default() -> Self {
        BpbConfig {
            seed: 0,
            iterations: 1000,
            branch_factor: 4,
            retention_quantile: 0.5,
        }
    }
}

impl BpbConfig {
    fn validate(&self) -> Result<()> {
        if self.iterations == 0 {
            return Err(Error::InvalidConfig {
                msg: "iterations must be at least 1".into(),
            });
        }
        if self.branch_factor == 0 {
            return Err(Error::InvalidConfig {
                msg: "branch_factor must be at least 1".into(),
            });
        }
        if !(self.retention_quantile > 0.0 && self.retention_quantile < 1.0) {
            return Err(Error::InvalidConfig {
                msg: "retention_quantile must lie strictly between 0 and 1".into(),
            });
        }
        Ok(())
    }
}

struct Branch {
    /// Smallest member of every subset in this branch.
    head: usize,
    rng: ChaCha8Rng,
    /// Objective values of the branch's valid candidates so far.
    values: Vec<f64>,
    /// Number of subsets in the branch.
    size: u128,
    exhausted: bool,
}

impl Branch {
    fn score(&self, quantile: f64) -> f64 {
        if self.values.is_empty() {
            return f64::INFINITY;
        }
        let mut sorted = self.values.clone();
        sorted.sort_by(f64::total_cmp);
        let rank = ((quantile * sorted.len() as f64).ceil() as usize).clamp(1, sorted.len());
        sorted[rank - 1]
    }
}

struct SearchState<'a> {
    data: &'a Dataset,
    drops: usize,
    evaluations: usize,
    distinct: HashSet<Vec<usize>>,
    best: Option<(f64, CandidateFit)>,
    trace: Vec<TraceStep>,
}

impl SearchState<'_> {
    /// Evaluates one subset; returns the objective value when the vertex is
    /// a usable candidate.
    fn evaluate(&mut self, members: Vec<usize>) -> Option<f64> {
        self.evaluations += 1;
        self.distinct.insert(members.clone());
        let idx = IndexSet::new(members).expect("members are sorted");
        let fit = equioscillation_point(self.data, &idx).ok()?;
        if fit.degenerate || !check_optimality_strict(self.data, &fit) {
            return None;
        }
        let value = objective_fk(self.data, &fit.theta, self.drops).ok()?;
        match &self.best {
            Some((incumbent, _)) if value >= *incumbent => {}
            _ => {
                self.best = Some((value, fit));
                self.trace.push(TraceStep { subset: idx, value });
            }
        }
        Some(value)
    }
}

/// Random search for the LMS optimum with branch pruning. Deterministic for
/// a fixed `(data, config)` pair; the returned value always bounds the
/// exact optimum from above.
pub fn bpb_solve(data: &Dataset, config: &BpbConfig) -> Result<SolverReport> {
    bpb_solve_fk(data, config, data.lms_drop_count())
}

/// [`bpb_solve`] generalized to the k-drop objective.
pub fn bpb_solve_fk(data: &Dataset, config: &BpbConfig, k: usize) -> Result<SolverReport> {
    config.validate()?;
    let n = data.n();
    let p = data.p();
    if k > data.max_drop_count() {
        return Err(Error::DropCountOutOfRange {
            k,
            max: data.max_drop_count(),
        });
    }
    let stride = p + 1;

    let mut branches: Vec<Branch> = (0..=n - stride)
        .map(|head| {
            let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
            rng.set_stream(head as u64);
            Branch {
                head,
                rng,
                values: Vec::new(),
                size: crate::combin::binomial((n - head - 1) as u64, p as u64).unwrap_or(u128::MAX),
                exhausted: false,
            }
        })
        .collect();
    let mut active: Vec<usize> = (0..branches.len()).collect();

    let mut state = SearchState {
        data,
        drops: k,
        evaluations: 0,
        distinct: HashSet::new(),
        best: None,
        trace: Vec::new(),
    };

    let mut remaining = config.iterations;
    while remaining > 0 && !active.is_empty() {
        let quota = (remaining / (2 * active.len())).max(1);
        for &b in &active {
            if remaining == 0 {
                break;
            }
            let branch = &mut branches[b];
            let take = quota.min(remaining);
            if branch.size <= take as u128 {
                // Small enough to enumerate outright.
                let tail = n - branch.head - 1;
                for combo in Combinations::new(tail, p) {
                    let mut members = Vec::with_capacity(stride);
                    members.push(branch.head);
                    members.extend(combo.iter().map(|c| branch.head + 1 + c));
                    if let Some(v) = state.evaluate(members) {
                        branch.values.push(v);
                    }
                    remaining = remaining.saturating_sub(1);
                }
                branch.exhausted = true;
            } else {
                for _ in 0..take {
                    let members = sample_subset(branch.head, n, p, &mut branch.rng);
                    if let Some(v) = state.evaluate(members) {
                        branch.values.push(v);
                    }
                    remaining -= 1;
                }
            }
        }
        // Retire exhausted branches, then prune by quantile score.
        active.retain(|&b| !branches[b].exhausted);
        if active.len() > config.branch_factor {
            let mut ranked: Vec<(f64, usize)> = active
                .iter()
                .map(|&b| (branches[b].score(config.retention_quantile), b))
                .collect();
            ranked.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
            active = ranked
                .into_iter()
                .take(config.branch_factor)
                .map(|(_, b)| b)
                .collect();
            active.sort_unstable();
        }
    }

    let (value, fit) = state.best.ok_or(Error::NoCandidate)?;
    Ok(SolverReport {
        optimizers: vec![fit],
        value,
        subproblems_solved: state.evaluations,
        candidates_examined: state.distinct.len(),
        trace: state.trace,
    })
}

/// Uniformly samples a (p+1)-subset whose smallest member is `head`:
/// a partial Fisher-Yates shuffle of the tail indices.
fn sample_subset(head: usize, n: usize, p: usize, rng: &mut ChaCha8Rng) -> Vec<usize> {
    let mut tail: Vec<usize> = (head + 1..n).collect();
    for t in 0..p {
        let pick = t + rng.random_range(0..tail.len() - t);
        tail.swap(t, pick);
    }
    let mut members = Vec::with_capacity(p + 1);
    members.push(head);
    members.extend_from_slice(&tail[..p]);
    members.sort_unstable();
    members
}

#[cfg(test)]
mod tests {
    use super::*;

    fn intercept_dataset(y: &[f64]) -> Dataset {
        Dataset::new(vec![vec![1.0]; y.len()], y.to_vec()).unwrap()
    }

    fn example_config() -> BpbConfig {
        BpbConfig {
            seed: 42,
            iterations: 64,
            branch_factor: 4,
            retention_quantile: 0.5,
        }
    }

    #[test]
    fn ample_budget_finds_the_exact_optimum() {
        let d = intercept_dataset(&[0.0, 1.0, 4.0, 5.0, 9.0]);
        let report = bpb_solve(&d, &example_config()).unwrap();
        assert!((report.value - 2.0).abs() < 1e-10);
    }

    #[test]
    fn single_iteration_yields_one_valid_candidate() {
        let d = intercept_dataset(&[0.0, 1.0, 4.0, 5.0, 9.0]);
        let config = BpbConfig {
            iterations: 1,
            ..example_config()
        };
        let report = bpb_solve(&d, &config).unwrap();
        assert_eq!(report.subproblems_solved, 1);
        assert!(report.value >= 2.0 - 1e-10);
        assert!(check_optimality_strict(&d, &report.optimizers[0]));
    }

    #[test]
    fn identical_config_reproduces_the_report() {
        let d = intercept_dataset(&[3.0, -1.0, 0.5, 7.0, 2.0, -4.0, 9.0]);
        let config = BpbConfig {
            seed: 7,
            iterations: 9,
            branch_factor: 2,
            retention_quantile: 0.25,
        };
        let a = bpb_solve(&d, &config).unwrap();
        let b = bpb_solve(&d, &config).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn trace_is_nonincreasing() {
        let d = intercept_dataset(&[3.0, -1.0, 0.5, 7.0, 2.0, -4.0, 9.0, 1.5]);
        let report = bpb_solve(&d, &example_config()).unwrap();
        for w in report.trace.windows(2) {
            assert!(w[1].value < w[0].value);
        }
    }

    #[test]
    fn all_degenerate_samples_report_no_candidate() {
        // Any pair touching a zero regressor row is either rank deficient
        // or puts all its multiplier weight on that row, so a one-shot
        // budget spent on the first branch always comes up empty. A larger
        // budget reaches the one acute pair {3, 4}.
        let d = Dataset::new(
            vec![vec![0.0], vec![0.0], vec![1.0], vec![1.0]],
            vec![1.0, 2.0, 3.0, 5.0],
        )
        .unwrap();
        for seed in 0..10 {
            let config = BpbConfig {
                seed,
                iterations: 1,
                ..BpbConfig::default()
            };
            assert!(matches!(bpb_solve(&d, &config), Err(Error::NoCandidate)));
        }
        let config = BpbConfig {
            seed: 0,
            iterations: 10,
            ..BpbConfig::default()
        };
        let report = bpb_solve(&d, &config).unwrap();
        assert!((report.optimizers[0].theta[0] - 4.0).abs() < 1e-10);
    }

    #[test]
    fn rejects_invalid_config() {
        let d = intercept_dataset(&[0.0, 1.0, 4.0]);
        for config in [
            BpbConfig {
                iterations: 0,
                ..example_config()
            },
            BpbConfig {
                branch_factor: 0,
                ..example_config()
            },
            BpbConfig {
                retention_quantile: 1.0,
                ..example_config()
            },
        ] {
            assert!(matches!(
                bpb_solve(&d, &config),
                Err(Error::InvalidConfig { .. })
            ));
        }
    }
}
