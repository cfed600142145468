//! Minimax (l-infinity) fitting over observation subsets.
//!
//! `solve_minimax` minimizes the largest absolute residual over a subset of
//! observations. The minimizer sits at a vertex where p+1 residuals share a
//! common magnitude with prescribed signs; `equioscillation_point` builds
//! that vertex directly from any full-rank (p+1)-subset, and
//! `check_optimality` verifies the stationarity certificate (nonnegative
//! multipliers summing to one that annihilate the signed regressor rows).
//!
//! The subproblem is the linear program
//!
//! ```text
//! min rho   s.t.   rho + x_i^T theta >= y_i,   rho - x_i^T theta >= -y_i
//! ```
//!
//! solved here by a dense revised simplex on its dual, which is in standard
//! form with one column per (observation, sign) pair. Bland's rule with
//! smallest-index tie-breaking makes the outcome deterministic.

use serde::{Deserialize, Serialize};

use crate::dataset::{Dataset, IndexSet};
use crate::error::{Error, Result};
use crate::linalg::{independent_subset, solve_square, Mat};

/// A candidate parameter point built from p+1 observations whose residuals
/// equioscillate: each active residual equals `rho` with sign `eps`, and the
/// multipliers `lambda` certify stationarity.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CandidateFit {
    /// Regression parameters at the vertex.
    pub theta: Vec<f64>,
    /// Common absolute residual level on the active set.
    pub rho: f64,
    /// The p+1 active observations.
    pub active: IndexSet,
    /// Residual signs on the active set, one of -1 or +1 each.
    pub eps: Vec<i8>,
    /// Nonnegative multipliers summing to one.
    pub lambda: Vec<f64>,
    /// Set when some multiplier vanishes within tolerance; degenerate
    /// candidates are excluded from local-minimum classification.
    pub degenerate: bool,
}

/// Solution of a minimax subproblem.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LpSolution {
    pub theta: Vec<f64>,
    pub rho: f64,
    /// Subset members whose residual magnitude is tight at `rho`.
    pub active: IndexSet,
    /// Simplex pivot count.
    pub iterations: usize,
}

/// Null-space coefficients of the p x (p+1) system formed by the subset's
/// regressor rows: t with sum_q t_q x_{s_q} = 0, scaled so the last member's
/// coefficient is 1 whenever it participates, otherwise by the largest
/// component. Errors when the rows span fewer than p dimensions.
fn subset_null_coeffs(data: &Dataset, s: &[usize]) -> Result<Vec<f64>> {
    let p = data.p();
    debug_assert_eq!(s.len(), p + 1);

    // Columns are the regressor rows of the subset.
    let mut m = Mat::zeros(p, p + 1);
    for (c, &obs) in s.iter().enumerate() {
        for (r, v) in data.row(obs).iter().enumerate() {
            m.set(r, c, *v);
        }
    }
    let eps = crate::linalg::pivot_eps(m.max_abs(), p + 1);

    // Forward elimination with partial pivoting, tracking pivot columns.
    let mut pivot_of_col = vec![usize::MAX; p + 1];
    let mut pivot_order = Vec::with_capacity(p);
    let mut row = 0;
    for col in 0..p + 1 {
        if row == p {
            break;
        }
        let mut piv = row;
        let mut best = m.at(row, col).abs();
        for r in row + 1..p {
            let v = m.at(r, col).abs();
            if v > best {
                best = v;
                piv = r;
            }
        }
        if best <= eps {
            continue;
        }
        if piv != row {
            for c in 0..p + 1 {
                let tmp = m.at(row, c);
                m.set(row, c, m.at(piv, c));
                m.set(piv, c, tmp);
            }
        }
        let d = m.at(row, col);
        for r in row + 1..p {
            let f = m.at(r, col) / d;
            if f == 0.0 {
                continue;
            }
            for c in col..p + 1 {
                let v = m.at(r, c) - f * m.at(row, c);
                m.set(r, c, v);
            }
        }
        pivot_of_col[col] = row;
        pivot_order.push(col);
        row += 1;
    }
    if pivot_order.len() < p {
        return Err(Error::DegenerateSubset {
            subset: s.iter().map(|i| i + 1).collect(),
            rank: pivot_order.len(),
            p,
        });
    }

    // Exactly one free column; set its coefficient to 1 and back-substitute.
    let free = (0..p + 1).find(|c| pivot_of_col[*c] == usize::MAX).unwrap();
    let mut t = vec![0.0; p + 1];
    t[free] = 1.0;
    for &col in pivot_order.iter().rev() {
        let r = pivot_of_col[col];
        let mut sum = 0.0;
        for c in col + 1..p + 1 {
            sum += m.at(r, c) * t[c];
        }
        t[col] = -sum / m.at(r, col);
    }

    // Prefer the convention that the last member carries coefficient 1.
    let scale = t.iter().fold(0.0_f64, |acc, v| acc.max(v.abs()));
    if t[p].abs() > 1e-12 * scale {
        let d = t[p];
        for v in t.iter_mut() {
            *v /= d;
        }
    }
    Ok(t)
}

/// Builds the equioscillation vertex of a full-rank (p+1)-subset: the unique
/// point where all p+1 residuals share magnitude `rho` with the signs that
/// satisfy the stationarity condition.
pub fn equioscillation_point(data: &Dataset, subset: &IndexSet) -> Result<CandidateFit> {
    subset.validate_for(data.n())?;
    let p = data.p();
    if subset.len() != p + 1 {
        return Err(Error::DimensionMismatch {
            expected: p + 1,
            got: subset.len(),
        });
    }
    let s = subset.as_slice();
    let t = subset_null_coeffs(data, s)?;

    let total: f64 = t.iter().map(|v| v.abs()).sum();
    let t_scale = t.iter().fold(0.0_f64, |acc, v| acc.max(v.abs()));
    let degenerate = t
        .iter()
        .any(|v| v.abs() <= data.tolerance() * t_scale.max(1.0));
    let lambda: Vec<f64> = t.iter().map(|v| v.abs() / total).collect();
    let mut eps: Vec<i8> = t.iter().map(|v| if *v < 0.0 { -1 } else { 1 }).collect();

    // Active hyperplane system: rho + eps_q x_{s_q}^T theta = eps_q y_{s_q}.
    let mut m = Mat::zeros(p + 1, p + 1);
    let mut rhs = vec![0.0; p + 1];
    for (q, &obs) in s.iter().enumerate() {
        let sign = eps[q] as f64;
        for (c, v) in data.row(obs).iter().enumerate() {
            m.set(q, c, sign * v);
        }
        m.set(q, p, 1.0);
        rhs[q] = sign * data.response(obs);
    }
    let sol = solve_square(m, rhs).ok_or_else(|| Error::DegenerateSubset {
        subset: s.iter().map(|i| i + 1).collect(),
        rank: p,
        p,
    })?;
    let theta = sol[..p].to_vec();
    let mut rho = sol[p];
    if rho < 0.0 {
        rho = -rho;
        for e in eps.iter_mut() {
            *e = -*e;
        }
    }

    Ok(CandidateFit {
        theta,
        rho,
        active: subset.clone(),
        eps,
        lambda,
        degenerate,
    })
}

/// Verifies the stationarity certificate of a candidate: multipliers are
/// nonnegative and sum to one, the signed regressor combination vanishes,
/// and every active residual sits at `rho` with its recorded sign. Malformed
/// candidates yield `false`, never a panic.
pub fn check_optimality(data: &Dataset, fit: &CandidateFit) -> bool {
    check_optimality_inner(data, fit, false)
}

/// Like [`check_optimality`] but additionally requires every multiplier to
/// exceed the tolerance, so the vertex is a genuine strict local minimum of
/// the subset maximum.
pub fn check_optimality_strict(data: &Dataset, fit: &CandidateFit) -> bool {
    check_optimality_inner(data, fit, true)
}

fn check_optimality_inner(data: &Dataset, fit: &CandidateFit, strict: bool) -> bool {
    let p = data.p();
    let tol = data.tolerance();
    let k = fit.active.len();
    if k != p + 1
        || fit.eps.len() != k
        || fit.lambda.len() != k
        || fit.theta.len() != p
        || fit.active.validate_for(data.n()).is_err()
    {
        return false;
    }
    if fit.eps.iter().any(|e| *e != 1 && *e != -1) {
        return false;
    }
    if !fit.rho.is_finite() || fit.rho < -tol {
        return false;
    }
    if fit.theta.iter().any(|v| !v.is_finite()) || fit.lambda.iter().any(|v| !v.is_finite()) {
        return false;
    }
    if fit.lambda.iter().any(|l| *l < -tol) {
        return false;
    }
    if strict && fit.lambda.iter().any(|l| *l <= tol) {
        return false;
    }
    let sum: f64 = fit.lambda.iter().sum();
    if (sum - 1.0).abs() > tol {
        return false;
    }
    // Stationarity: sum_q lambda_q eps_q x_q = 0.
    let mut comb = vec![0.0; p];
    for (q, obs) in fit.active.iter().enumerate() {
        let w = fit.lambda[q] * fit.eps[q] as f64;
        for (c, v) in data.row(obs).iter().enumerate() {
            comb[c] += w * v;
        }
    }
    if comb.iter().any(|v| v.abs() > tol) {
        return false;
    }
    // Active hyperplanes: eps_q (y_q - x_q^T theta) = rho.
    for (q, obs) in fit.active.iter().enumerate() {
        let r = data.residual(obs, &fit.theta);
        if (fit.eps[q] as f64 * r - fit.rho).abs() > tol {
            return false;
        }
    }
    true
}

/// One column of the dual program: an (observation position, sign) pair.
#[inline]
fn column_obs(i_members: &[usize], col: usize) -> usize {
    i_members[col / 2]
}

#[inline]
fn column_sign(col: usize) -> f64 {
    if col.is_multiple_of(2) {
        1.0
    } else {
        -1.0
    }
}

struct SimplexState {
    /// Basis column indices, one per row of the (p+1)-dimensional basis.
    basis: Vec<usize>,
    /// Explicit basis inverse, row-major (p+1) x (p+1).
    b_inv: Vec<f64>,
    iterations: usize,
}

/// Internal result of the dual simplex with enough information to recover
/// the stationarity certificate.
pub(crate) struct MinimaxInternal {
    pub theta: Vec<f64>,
    pub rho: f64,
    pub active: IndexSet,
    pub iterations: usize,
    /// (observation, sign, multiplier) per basis column.
    pub support: Vec<(usize, i8, f64)>,
}

const MAX_PIVOTS: usize = 100_000;

pub(crate) fn solve_minimax_internal(data: &Dataset, subset: &IndexSet) -> Result<MinimaxInternal> {
    subset.validate_for(data.n())?;
    let p = data.p();
    let m = p + 1;
    let members = subset.as_slice();
    let card = members.len();
    if card < m {
        return Err(Error::Underdetermined {
            size: card,
            need: m,
        });
    }

    // Initial basis from any full-rank (p+1)-subset of the members.
    let rows: Vec<&[f64]> = members.iter().map(|&i| data.row(i)).collect();
    let indep = independent_subset(&rows, p);
    if indep.len() < p {
        return Err(Error::DegenerateSubset {
            subset: subset.one_based(),
            rank: indep.len(),
            p,
        });
    }
    let mut start_positions = indep;
    let extra = (0..card)
        .find(|pos| !start_positions.contains(pos))
        .expect("card >= p+1 guarantees a spare position");
    start_positions.push(extra);
    start_positions.sort_unstable();

    let start_rows: Vec<usize> = start_positions.iter().map(|&pos| members[pos]).collect();
    let t = subset_null_coeffs(data, &start_rows)?;
    let basis: Vec<usize> = start_positions
        .iter()
        .zip(&t)
        .map(|(&pos, &tv)| 2 * pos + usize::from(tv < 0.0))
        .collect();

    // Column access helpers over the dual program.
    let col_vec = |col: usize, out: &mut [f64]| {
        let obs = column_obs(members, col);
        let s = column_sign(col);
        for (c, v) in data.row(obs).iter().enumerate() {
            out[c] = s * v;
        }
        out[p] = 1.0;
    };
    let col_cost = |col: usize| column_sign(col) * data.response(column_obs(members, col));

    // Invert the starting basis.
    let mut bmat = Mat::zeros(m, m);
    let mut tmp = vec![0.0; m];
    for (c, &col) in basis.iter().enumerate() {
        col_vec(col, &mut tmp);
        for r in 0..m {
            bmat.set(r, c, tmp[r]);
        }
    }
    let mut b_inv = vec![0.0; m * m];
    for c in 0..m {
        let mut e = vec![0.0; m];
        e[c] = 1.0;
        let x = solve_square(bmat.clone(), e).ok_or_else(|| Error::SolverFailure {
            msg: "starting basis is singular".into(),
        })?;
        for r in 0..m {
            b_inv[r * m + c] = x[r];
        }
    }

    let mut state = SimplexState {
        basis,
        b_inv,
        iterations: 0,
    };

    let x_scale = members
        .iter()
        .flat_map(|&i| data.row(i).iter())
        .fold(1.0_f64, |acc, v| acc.max(v.abs()));
    let y_scale = members
        .iter()
        .map(|&i| data.response(i).abs())
        .fold(1.0_f64, f64::max);
    let eps_rc = 1e-10 * y_scale * (m as f64);
    let eps_piv = 1e-11 * x_scale;

    let ncols = 2 * card;
    let mut a_e = vec![0.0; m];
    loop {
        if state.iterations > MAX_PIVOTS {
            return Err(Error::SolverFailure {
                msg: "pivot limit exceeded".into(),
            });
        }
        // Basic solution: b_inv applied to the unit right-hand side.
        let x_b: Vec<f64> = (0..m).map(|r| state.b_inv[r * m + (m - 1)]).collect();
        // Simplex multipliers: pi = g_B^T B^{-1}.
        let mut pi = vec![0.0; m];
        for r in 0..m {
            let g = col_cost(state.basis[r]);
            if g == 0.0 {
                continue;
            }
            for c in 0..m {
                pi[c] += g * state.b_inv[r * m + c];
            }
        }
        // Bland: entering column is the smallest index with positive
        // reduced cost.
        let mut entering = None;
        'scan: for col in 0..ncols {
            if state.basis.contains(&col) {
                continue;
            }
            let obs = column_obs(members, col);
            let s = column_sign(col);
            let mut dot = pi[p];
            for (c, v) in data.row(obs).iter().enumerate() {
                dot += pi[c] * (s * v);
            }
            let reduced = s * data.response(obs) - dot;
            if reduced > eps_rc {
                entering = Some(col);
                break 'scan;
            }
        }
        let Some(e) = entering else {
            // Optimal. Recover (theta, rho) by a fresh solve of
            // B^T pi = g_B for accuracy.
            let mut bt = Mat::zeros(m, m);
            let mut g_b = vec![0.0; m];
            for (r, &col) in state.basis.iter().enumerate() {
                col_vec(col, &mut tmp);
                for c in 0..m {
                    bt.set(c, r, tmp[c]);
                }
                g_b[r] = col_cost(col);
            }
            // bt currently holds B (columns written); transpose in place.
            let mut btt = Mat::zeros(m, m);
            for r in 0..m {
                for c in 0..m {
                    btt.set(r, c, bt.at(c, r));
                }
            }
            let refined = solve_square(btt, g_b).unwrap_or_else(|| pi.clone());
            let theta = refined[..p].to_vec();
            let rho = refined[p].max(0.0);

            // Tight members by tolerance, plus the basis observations,
            // whose constraints hold with equality at any optimal basis
            // (their reduced costs vanish).
            let tol = data.tolerance();
            let mut active: Vec<usize> = members
                .iter()
                .copied()
                .filter(|&i| ((data.residual(i, &theta)).abs() - rho).abs() <= tol)
                .collect();
            for &col in &state.basis {
                let obs = column_obs(members, col);
                if !active.contains(&obs) {
                    active.push(obs);
                }
            }
            active.sort_unstable();
            let x_b: Vec<f64> = (0..m).map(|r| state.b_inv[r * m + (m - 1)]).collect();
            let support: Vec<(usize, i8, f64)> = state
                .basis
                .iter()
                .zip(&x_b)
                .map(|(&col, &l)| {
                    (
                        column_obs(members, col),
                        if column_sign(col) > 0.0 { 1 } else { -1 },
                        l.max(0.0),
                    )
                })
                .collect();
            return Ok(MinimaxInternal {
                theta,
                rho,
                active: IndexSet::new(active).expect("sorted distinct members"),
                iterations: state.iterations,
                support,
            });
        };

        col_vec(e, &mut a_e);
        let w: Vec<f64> = (0..m)
            .map(|r| {
                let mut s = 0.0;
                for c in 0..m {
                    s += state.b_inv[r * m + c] * a_e[c];
                }
                s
            })
            .collect();
        // Ratio test; ties resolved by the smallest basic column index.
        let mut leave: Option<(usize, f64)> = None;
        for r in 0..m {
            if w[r] > eps_piv {
                let ratio = x_b[r] / w[r];
                match leave {
                    None => leave = Some((r, ratio)),
                    Some((br, brat)) => {
                        if ratio < brat - eps_piv
                            || ((ratio - brat).abs() <= eps_piv && state.basis[r] < state.basis[br])
                        {
                            leave = Some((r, ratio));
                        }
                    }
                }
            }
        }
        let Some((lr, _)) = leave else {
            return Err(Error::SolverFailure {
                msg: "dual program unbounded; primal infeasible".into(),
            });
        };

        // Pivot: replace basis[lr] by e and update the inverse.
        let piv = w[lr];
        for c in 0..m {
            state.b_inv[lr * m + c] /= piv;
        }
        for r in 0..m {
            if r == lr {
                continue;
            }
            let f = w[r];
            if f == 0.0 {
                continue;
            }
            for c in 0..m {
                state.b_inv[r * m + c] -= f * state.b_inv[lr * m + c];
            }
        }
        state.basis[lr] = e;
        state.iterations += 1;
    }
}

/// Solves the minimax subproblem over `subset`: the parameters minimizing
/// the largest absolute residual among its members. Deterministic for
/// identical input.
pub fn solve_minimax(data: &Dataset, subset: &IndexSet) -> Result<LpSolution> {
    let internal = solve_minimax_internal(data, subset)?;
    Ok(LpSolution {
        theta: internal.theta,
        rho: internal.rho,
        active: internal.active,
        iterations: internal.iterations,
    })
}

/// Solves the minimax subproblem and recasts the optimal vertex as a
/// [`CandidateFit`] carrying its stationarity certificate.
pub fn solve_minimax_fit(data: &Dataset, subset: &IndexSet) -> Result<(LpSolution, CandidateFit)> {
    let internal = solve_minimax_internal(data, subset)?;
    let fit = fit_from_support(data, &internal)?;
    let solution = LpSolution {
        theta: internal.theta,
        rho: internal.rho,
        active: internal.active,
        iterations: internal.iterations,
    };
    Ok((solution, fit))
}

pub(crate) fn fit_from_support(data: &Dataset, internal: &MinimaxInternal) -> Result<CandidateFit> {
    let mut support = internal.support.clone();
    support.sort_by_key(|(obs, _, _)| *obs);
    let duplicated = support.windows(2).any(|w| w[0].0 == w[1].0);
    if !duplicated {
        let tol = data.tolerance();
        let active = IndexSet::new(support.iter().map(|(o, _, _)| *o).collect())
            .expect("sorted distinct observations");
        let eps: Vec<i8> = support.iter().map(|(_, e, _)| *e).collect();
        let lambda: Vec<f64> = support.iter().map(|(_, _, l)| *l).collect();
        let degenerate = lambda.iter().any(|l| *l <= tol);
        return Ok(CandidateFit {
            theta: internal.theta.clone(),
            rho: internal.rho,
            active,
            eps,
            lambda,
            degenerate,
        });
    }
    // A doubled observation in the basis only happens at a zero-residual
    // vertex; rebuild the certificate from the tight set instead.
    let first: Vec<usize> = internal.active.iter().take(data.p() + 1).collect();
    equioscillation_point(data, &IndexSet::new(first)?)
}
