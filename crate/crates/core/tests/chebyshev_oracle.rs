//! Cross-checks of the minimax solver against independent references:
//! a textbook two-phase tableau simplex on the primal formulation with
//! split variables, a dense parameter grid, and random-point sampling.

use lms_core::{solve_minimax, Dataset, IndexSet};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Two-phase dense tableau simplex for `min c^T v` subject to `A v = b`,
/// `v >= 0`, `b >= 0`. Entering variable by Bland's rule. Returns the
/// optimum value and a minimizer. Test-only; shares no code with the
/// production solver.
fn tableau_simplex(a: &[Vec<f64>], b: &[f64], c: &[f64]) -> Option<(f64, Vec<f64>)> {
    const EPS: f64 = 1e-9;
    let m = a.len();
    let n = c.len();
    let total = n + m; // structurals + artificials
    let mut t: Vec<Vec<f64>> = Vec::with_capacity(m);
    for (i, row) in a.iter().enumerate() {
        assert!(b[i] >= 0.0, "rhs must be pre-normalized to nonnegative");
        let mut r = vec![0.0; total + 1];
        r[..n].copy_from_slice(row);
        r[n + i] = 1.0;
        r[total] = b[i];
        t.push(r);
    }
    let mut basis: Vec<usize> = (n..n + m).collect();

    // Phase-1 objective: minimize the artificial sum. Canonical reduced
    // costs start as -(column sums over constraint rows).
    let mut obj = vec![0.0; total + 1];
    for j in 0..total + 1 {
        let mut s = 0.0;
        for row in &t {
            s += row[j];
        }
        obj[j] = if j >= n && j < total { 1.0 - s } else { -s };
    }

    let pivot = |t: &mut Vec<Vec<f64>>,
                 obj: &mut Vec<f64>,
                 basis: &mut Vec<usize>,
                 r: usize,
                 col: usize| {
        let d = t[r][col];
        for v in t[r].iter_mut() {
            *v /= d;
        }
        for i in 0..t.len() {
            if i != r && t[i][col].abs() > 0.0 {
                let f = t[i][col];
                for j in 0..t[r].len() {
                    t[i][j] -= f * t[r][j];
                }
            }
        }
        if obj[col].abs() > 0.0 {
            let f = obj[col];
            for j in 0..t[r].len() {
                obj[j] -= f * t[r][j];
            }
        }
        basis[r] = col;
    };

    let run = |t: &mut Vec<Vec<f64>>,
               obj: &mut Vec<f64>,
               basis: &mut Vec<usize>,
               allowed: usize|
     -> bool {
        for _ in 0..100_000 {
            // Bland: smallest-index column with a negative reduced cost.
            let Some(col) = (0..allowed).find(|&j| !basis.contains(&j) && obj[j] < -EPS) else {
                return true;
            };
            let mut leave: Option<usize> = None;
            for i in 0..t.len() {
                if t[i][col] > EPS {
                    let better = match leave {
                        None => true,
                        Some(li) => {
                            let cur = t[i][total] / t[i][col];
                            let best = t[li][total] / t[li][col];
                            cur < best - EPS || ((cur - best).abs() <= EPS && basis[i] < basis[li])
                        }
                    };
                    if better {
                        leave = Some(i);
                    }
                }
            }
            let Some(r) = leave else {
                return false; // unbounded
            };
            pivot(t, obj, basis, r, col);
        }
        false
    };

    if !run(&mut t, &mut obj, &mut basis, total) {
        return None;
    }
    // Phase-1 optimum must be zero for a feasible program.
    if -obj[total] > 1e-7 {
        return None;
    }

    // Phase 2: rebuild reduced costs for the real objective; artificial
    // columns are barred from entering.
    obj = vec![0.0; total + 1];
    obj[..n].copy_from_slice(c);
    for (i, &bv) in basis.iter().enumerate() {
        if bv < n && c[bv] != 0.0 {
            let f = c[bv];
            for j in 0..total + 1 {
                obj[j] -= f * t[i][j];
            }
        }
    }
    if !run(&mut t, &mut obj, &mut basis, n) {
        return None;
    }

    let mut v = vec![0.0; n];
    for (i, &bv) in basis.iter().enumerate() {
        if bv < n {
            v[bv] = t[i][total];
        }
    }
    let value = c.iter().zip(&v).map(|(ci, vi)| ci * vi).sum();
    Some((value, v))
}

/// Solves the minimax problem over `subset` with the tableau oracle:
/// variables are theta split into positive and negative parts plus the
/// level, with surplus columns for the >= constraints.
fn oracle_minimax(data: &Dataset, subset: &IndexSet) -> (f64, Vec<f64>) {
    let p = data.p();
    let m = 2 * subset.len();
    let n_struct = 2 * p + 1 + m;
    let mut a = Vec::with_capacity(m);
    let mut b = Vec::with_capacity(m);
    let mut surplus = 0;
    for i in subset.iter() {
        for sign in [1.0f64, -1.0] {
            // rho + sign * x_i^T theta >= sign * y_i
            let mut row = vec![0.0; n_struct];
            for (c, v) in data.row(i).iter().enumerate() {
                row[c] = sign * v;
                row[p + c] = -sign * v;
            }
            row[2 * p] = 1.0;
            row[2 * p + 1 + surplus] = -1.0;
            surplus += 1;
            let mut rhs = sign * data.response(i);
            if rhs < 0.0 {
                for v in row.iter_mut() {
                    *v = -*v;
                }
                rhs = -rhs;
            }
            a.push(row);
            b.push(rhs);
        }
    }
    let mut c = vec![0.0; n_struct];
    c[2 * p] = 1.0;
    let (value, v) = tableau_simplex(&a, &b, &c).expect("oracle LP should solve");
    let theta: Vec<f64> = (0..p).map(|j| v[j] - v[p + j]).collect();
    (value, theta)
}

fn max_abs_residual(data: &Dataset, subset: &IndexSet, theta: &[f64]) -> f64 {
    subset
        .iter()
        .map(|i| data.residual(i, theta).abs())
        .fold(0.0, f64::max)
}

fn random_dataset(rng: &mut ChaCha8Rng, n: usize, p: usize) -> Dataset {
    loop {
        let rows: Vec<Vec<f64>> = (0..n)
            .map(|_| (0..p).map(|_| rng.random_range(-10.0..10.0)).collect())
            .collect();
        let y: Vec<f64> = (0..n).map(|_| rng.random_range(-10.0..10.0)).collect();
        if let Ok(d) = Dataset::new(rows, y) {
            return d;
        }
    }
}

#[test]
fn line_fit_matches_the_tableau_oracle_and_hand_solution() {
    let rows: Vec<Vec<f64>> = (1..=6).map(|t| vec![1.0, t as f64]).collect();
    let data = Dataset::new(rows, vec![0.0, 0.0, 0.0, 0.0, 0.0, 6.0]).unwrap();
    let full = IndexSet::full(6);

    let sol = solve_minimax(&data, &full).unwrap();
    let (oracle_value, oracle_theta) = oracle_minimax(&data, &full);

    assert!((sol.rho - oracle_value).abs() < 1e-8);
    assert!((sol.rho - 2.4).abs() < 1e-9);
    // The optimum is a strict vertex here, so parameters agree too.
    assert!((sol.theta[0] - oracle_theta[0]).abs() < 1e-7);
    assert!((sol.theta[1] - oracle_theta[1]).abs() < 1e-7);
    assert!((sol.theta[0] - -3.6).abs() < 1e-9);
    assert!((sol.theta[1] - 1.2).abs() < 1e-9);
}

#[test]
fn random_instances_match_the_tableau_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(101);
    for trial in 0..40 {
        let p = 1 + trial % 3;
        let n = (2 * p).max(p + 2) + trial % 5;
        let data = random_dataset(&mut rng, n, p);
        let full = IndexSet::full(n);
        let sol = solve_minimax(&data, &full).unwrap();
        let (oracle_value, oracle_theta) = oracle_minimax(&data, &full);
        assert!(
            (sol.rho - oracle_value).abs() < 1e-7,
            "trial {trial}: solver {} vs oracle {}",
            sol.rho,
            oracle_value
        );
        // Feasibility of both: each point attains its claimed level.
        assert!((max_abs_residual(&data, &full, &sol.theta) - sol.rho).abs() < 1e-7);
        assert!((max_abs_residual(&data, &full, &oracle_theta) - oracle_value).abs() < 1e-6);
        // A vertex optimum always pins at least p+1 constraints.
        assert!(sol.active.len() >= p + 1, "trial {trial}");
    }
}

#[test]
fn random_subsets_match_the_tableau_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(202);
    for trial in 0..40 {
        let p = 1 + trial % 2;
        let n = 6 + trial % 4;
        let data = random_dataset(&mut rng, n, p);
        // Random subset of size between p+1 and n.
        let size = rng.random_range(p + 1..=n);
        let mut members: Vec<usize> = (0..n).collect();
        for t in 0..size {
            let pick = t + rng.random_range(0..n - t);
            members.swap(t, pick);
        }
        let subset = IndexSet::from_unsorted(members[..size].to_vec()).unwrap();
        let sol = solve_minimax(&data, &subset).unwrap();
        let (oracle_value, _) = oracle_minimax(&data, &subset);
        assert!(
            (sol.rho - oracle_value).abs() < 1e-7,
            "trial {trial}: solver {} vs oracle {}",
            sol.rho,
            oracle_value
        );
    }
}

#[test]
fn solver_level_is_a_lower_bound_at_random_points() {
    let mut rng = ChaCha8Rng::seed_from_u64(303);
    for _ in 0..20 {
        let p = 1 + (rng.random_range(0..2usize));
        let n = 2 * p + 3;
        let data = random_dataset(&mut rng, n, p);
        let full = IndexSet::full(n);
        let sol = solve_minimax(&data, &full).unwrap();
        for _ in 0..200 {
            let theta: Vec<f64> = (0..p).map(|_| rng.random_range(-25.0..25.0)).collect();
            assert!(sol.rho <= max_abs_residual(&data, &full, &theta) + 1e-9);
        }
    }
}

#[test]
fn dense_grid_cannot_beat_the_solver() {
    let mut rng = ChaCha8Rng::seed_from_u64(404);
    for _ in 0..10 {
        let data = random_dataset(&mut rng, 7, 1);
        let full = IndexSet::full(7);
        let sol = solve_minimax(&data, &full).unwrap();
        let mut grid_best = f64::INFINITY;
        for s in 0..=4000 {
            let theta = [-20.0 + s as f64 * 0.01];
            grid_best = grid_best.min(max_abs_residual(&data, &full, &theta));
        }
        assert!(grid_best >= sol.rho - 1e-9);
        // The grid should also come close from above.
        let slope: f64 = (0..7).map(|i| data.row(i)[0].abs()).fold(0.0, f64::max);
        assert!(grid_best <= sol.rho + 0.01 * slope + 1e-9);
    }
}

#[test]
fn minimax_on_minimal_subsets_reproduces_the_vertex() {
    // On a (p+1)-subset with strictly positive multipliers, the LP optimum
    // is the equioscillation vertex itself.
    let mut rng = ChaCha8Rng::seed_from_u64(606);
    let mut checked = 0;
    while checked < 30 {
        let p = 2;
        let data = random_dataset(&mut rng, 8, p);
        let mut members: Vec<usize> = (0..8).collect();
        for t in 0..p + 1 {
            let pick = t + rng.random_range(0..8 - t);
            members.swap(t, pick);
        }
        let subset = IndexSet::from_unsorted(members[..p + 1].to_vec()).unwrap();
        let Ok(fit) = lms_core::equioscillation_point(&data, &subset) else {
            continue;
        };
        if fit.degenerate {
            continue;
        }
        let sol = solve_minimax(&data, &subset).unwrap();
        assert!((sol.rho - fit.rho).abs() < 1e-8);
        for (a, b) in sol.theta.iter().zip(&fit.theta) {
            assert!((a - b).abs() < 1e-7);
        }
        checked += 1;
    }
}

#[test]
fn subset_monotonicity_of_the_level() {
    let mut rng = ChaCha8Rng::seed_from_u64(505);
    for _ in 0..40 {
        let p = 1 + (rng.random_range(0..2usize));
        let n = 2 * p + 5;
        let data = random_dataset(&mut rng, n, p);
        // Random nested pair: J from a shuffle, I drops a random suffix of
        // J while staying solvable.
        let mut pool: Vec<usize> = (0..n).collect();
        for t in 0..n {
            let pick = t + rng.random_range(0..n - t);
            pool.swap(t, pick);
        }
        let j_size = rng.random_range(p + 2..=n);
        let i_size = rng.random_range(p + 1..j_size);
        let larger = IndexSet::from_unsorted(pool[..j_size].to_vec()).unwrap();
        let smaller = IndexSet::from_unsorted(pool[..i_size].to_vec()).unwrap();
        let (Ok(inner), Ok(outer)) = (
            solve_minimax(&data, &smaller),
            solve_minimax(&data, &larger),
        ) else {
            continue;
        };
        assert!(
            inner.rho <= outer.rho + 1e-9,
            "|I|={i_size} rho {} vs |J|={j_size} rho {}",
            inner.rho,
            outer.rho
        );
    }
}
