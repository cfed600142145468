#![no_main]

use libfuzzer_sys::fuzz_target;
use lms_core::{brute_force_lms, exhaustive_solve, greedy_solve, objective_lms};

// Drives the solvers with whatever datasets the parser accepts. Solvers may
// reject degenerate data but must never panic, and the invariants asserted
// here hold with or without general position.
fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    let Ok(dataset) = lms_core::csv::parse_dataset(text) else {
        return;
    };
    if dataset.n() > 10 || dataset.p() > 3 {
        return;
    }

    let exact = exhaustive_solve(&dataset);
    let brute = brute_force_lms(&dataset);
    let greedy = greedy_solve(&dataset);

    for report in [&exact, &brute, &greedy].into_iter().flatten() {
        assert!(report.value.is_finite() && report.value >= 0.0);
        assert!(!report.optimizers.is_empty());
        for fit in &report.optimizers {
            // The reported value can never undercut the objective at its
            // own optimizer.
            if let Ok(at) = objective_lms(&dataset, &fit.theta) {
                let tol = 1e-6 * (1.0 + report.value.abs());
                assert!(at <= report.value + tol);
            }
        }
    }
    // Full vertex enumeration can only improve on the relaxation tree.
    if let (Ok(exact), Ok(brute)) = (&exact, &brute) {
        let tol = 1e-6 * (1.0 + exact.value.abs());
        assert!(brute.value <= exact.value + tol);
    }
});
