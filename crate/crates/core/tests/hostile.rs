//! Degenerate and adversarial datasets pushed through every solver. None
//! of these inputs are in general position, so exact counts do not apply;
//! what must hold is graceful error handling and the unconditional
//! invariants: values are finite nonnegative upper bounds of the objective
//! at their own optimizers, and full enumeration never loses to the
//! relaxation tree.

use lms_core::{
    bpb_solve, brute_force_lms, enumerate_all_local_minima, exhaustive_solve, greedy_solve,
    objective_lms, BpbConfig, Dataset,
};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn check_all_solvers(data: &Dataset) {
    let exact = exhaustive_solve(data);
    let brute = brute_force_lms(data);
    let greedy = greedy_solve(data);
    let bpb = bpb_solve(
        data,
        &BpbConfig {
            seed: 1,
            iterations: 30,
            ..BpbConfig::default()
        },
    );

    for report in [&exact, &brute, &greedy, &bpb].into_iter().flatten() {
        assert!(report.value.is_finite());
        assert!(report.value >= 0.0);
        assert!(!report.optimizers.is_empty());
        for fit in &report.optimizers {
            if let Ok(at) = objective_lms(data, &fit.theta) {
                assert!(at <= report.value + 1e-6 * (1.0 + report.value));
            }
        }
    }
    if let (Ok(exact), Ok(brute)) = (&exact, &brute) {
        assert!(brute.value <= exact.value + 1e-6 * (1.0 + exact.value));
    }
    // Enumeration never panics either; buckets and warnings just partition
    // the subsets.
    let all = enumerate_all_local_minima(data, 1);
    let classified: usize = all.counts().iter().sum();
    let total: u128 = lms_core::binomial(data.n() as u64, (data.p() + 1) as u64).unwrap();
    assert_eq!(
        classified as u128 + all.degenerate_subsets.len() as u128,
        total
    );
}

#[test]
fn duplicated_rows_and_tied_responses() {
    let d = Dataset::new(vec![vec![1.0]; 6], vec![2.0, 2.0, 2.0, 5.0, 5.0, 9.0]).unwrap();
    check_all_solvers(&d);
}

#[test]
fn exact_fit_data_has_a_zero_optimum() {
    let rows: Vec<Vec<f64>> = (1..=6).map(|t| vec![1.0, t as f64]).collect();
    let y: Vec<f64> = (1..=6).map(|t| 1.0 + 2.0 * t as f64).collect();
    let d = Dataset::new(rows, y).unwrap();
    check_all_solvers(&d);
    let exact = exhaustive_solve(&d).unwrap();
    assert!(exact.value.abs() < 1e-9);
}

#[test]
fn repeated_regressor_rows() {
    // Many coincident design rows make most subsets rank deficient.
    let rows = vec![
        vec![1.0, 1.0],
        vec![1.0, 1.0],
        vec![1.0, 1.0],
        vec![1.0, 2.0],
        vec![1.0, 2.0],
        vec![1.0, 3.0],
    ];
    let d = Dataset::new(rows, vec![0.0, 1.0, -1.0, 4.0, 2.0, 7.0]).unwrap();
    check_all_solvers(&d);
}

#[test]
fn extreme_magnitudes() {
    let d = Dataset::new(
        vec![vec![1e8], vec![-1e8], vec![1e-8], vec![2e8]],
        vec![1e8, 2e8, -3e8, 0.5],
    )
    .unwrap();
    check_all_solvers(&d);
}

#[test]
fn random_discretized_instances_never_panic() {
    // Coarse integer grids force ties and collinearity at random.
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    for trial in 0..60 {
        let p = 1 + trial % 2;
        let n = 2 * p + 1 + trial % 5;
        let rows: Vec<Vec<f64>> = (0..n)
            .map(|_| (0..p).map(|_| rng.random_range(-2..=2) as f64).collect())
            .collect();
        let y: Vec<f64> = (0..n).map(|_| rng.random_range(-3..=3) as f64).collect();
        let Ok(d) = Dataset::new(rows, y) else {
            continue;
        };
        check_all_solvers(&d);
    }
}
