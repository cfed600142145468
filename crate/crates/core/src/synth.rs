//! Seeded synthetic instance generation and general-position checks.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::chebyshev::equioscillation_point;
use crate::combin::Combinations;
use crate::dataset::{Dataset, IndexSet};
use crate::error::{Error, Result};
use crate::linalg::row_rank;

/// Recipe for a synthetic regression instance.
///
/// Regressors are drawn i.i.d. uniform on [-10, 10]; responses follow the
/// linear model plus uniform noise on [-noise_scale, noise_scale]; a
/// `outlier_fraction` share of observations (rounded down) is shifted by
/// `outlier_shift` with a random sign.
#[derive(Debug, Clone)]
pub struct SynthConfig {
    pub n: usize,
    pub p: usize,
    /// Fraction of contaminated observations, below 1/2.
    pub outlier_fraction: f64,
    pub noise_scale: f64,
    pub outlier_shift: f64,
    /// Model coefficients; defaults to 1, 2, ..., p.
    pub coefficients: Option<Vec<f64>>,
}

impl SynthConfig {
    pub fn new(n: usize, p: usize) -> Self {
        SynthConfig {
            n,
            p,
            outlier_fraction: 0.0,
            noise_scale: 0.5,
            outlier_shift: 50.0,
            coefficients: None,
        }
    }
}

/// A generated instance along with its ground truth.
#[derive(Debug, Clone)]
pub struct SynthInstance {
    pub dataset: Dataset,
    pub coefficients: Vec<f64>,
    pub outliers: IndexSet,
}

/// Generates a synthetic instance; byte-for-byte deterministic in
/// `(config, seed)`.
pub fn generate(config: &SynthConfig, seed: u64) -> Result<SynthInstance> {
    let (n, p) = (config.n, config.p);
    if p == 0 {
        return Err(Error::InvalidConfig {
            msg: "model dimension p must be at least 1".into(),
        });
    }
    if n < 2 * p || n < p + 1 {
        return Err(Error::ShapeAssumption { n, p });
    }
    if !(0.0..0.5).contains(&config.outlier_fraction) {
        return Err(Error::InvalidConfig {
            msg: "outlier_fraction must lie in [0, 0.5)".into(),
        });
    }
    let scale_ok = |v: f64| v.is_finite() && v >= 0.0;
    if !scale_ok(config.noise_scale) || !scale_ok(config.outlier_shift) {
        return Err(Error::InvalidConfig {
            msg: "noise_scale and outlier_shift must be nonnegative".into(),
        });
    }
    let coefficients = match &config.coefficients {
        Some(c) => {
            if c.len() != p {
                return Err(Error::DimensionMismatch {
                    expected: p,
                    got: c.len(),
                });
            }
            c.clone()
        }
        None => (1..=p).map(|j| j as f64).collect(),
    };

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let x_rows: Vec<Vec<f64>> = (0..n)
        .map(|_| (0..p).map(|_| rng.random_range(-10.0..10.0)).collect())
        .collect();
    let mut y: Vec<f64> = x_rows
        .iter()
        .map(|row| {
            let clean: f64 = row.iter().zip(&coefficients).map(|(a, b)| a * b).sum();
            clean + rng.random_range(-config.noise_scale..=config.noise_scale)
        })
        .collect();

    let n_outliers = (config.outlier_fraction * n as f64).floor() as usize;
    let mut order: Vec<usize> = (0..n).collect();
    for t in 0..n_outliers {
        let pick = t + rng.random_range(0..n - t);
        order.swap(t, pick);
    }
    let mut outliers = order[..n_outliers].to_vec();
    outliers.sort_unstable();
    for &i in &outliers {
        let sign = if rng.random_range(0..2) == 0 {
            1.0
        } else {
            -1.0
        };
        y[i] += sign * config.outlier_shift;
    }

    Ok(SynthInstance {
        dataset: Dataset::new(x_rows, y)?,
        coefficients,
        outliers: IndexSet::new(outliers)?,
    })
}

/// Operational general-position test: every (p+1)-subset of regressor rows
/// has rank p, every vertex has strictly positive multipliers, and at every
/// vertex the non-active residual magnitudes are separated from each other
/// and from the level by a margin. Cost grows with C(n, p+1); intended for
/// the desk-scale instances used in verification.
pub fn is_general_position(data: &Dataset) -> bool {
    let n = data.n();
    let p = data.p();
    let margin = 1e3 * data.tolerance();
    for subset in Combinations::new(n, p + 1) {
        let rows: Vec<&[f64]> = subset.iter().map(|&i| data.row(i)).collect();
        if row_rank(&rows) < p {
            return false;
        }
        let idx = IndexSet::new(subset).expect("combinations are strictly increasing");
        let fit = match equioscillation_point(data, &idx) {
            Ok(f) => f,
            Err(_) => return false,
        };
        if fit.degenerate || fit.lambda.iter().any(|l| *l <= data.tolerance()) {
            return false;
        }
        let mut outside: Vec<f64> = (0..n)
            .filter(|i| !fit.active.contains(*i))
            .map(|i| data.residual(i, &fit.theta).abs())
            .collect();
        outside.sort_by(f64::total_cmp);
        if outside.windows(2).any(|w| w[1] - w[0] <= margin) {
            return false;
        }
        if outside.iter().any(|r| (r - fit.rho).abs() <= margin) {
            return false;
        }
    }
    true
}

/// Draws uniform random instances until one is in general position,
/// reporting the number of rejected draws. Attempt r uses stream r of the
/// seeded generator.
pub fn random_general_position_instance(n: usize, p: usize, seed: u64) -> Result<(Dataset, usize)> {
    const MAX_ATTEMPTS: u64 = 100;
    for attempt in 0..MAX_ATTEMPTS {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(attempt);
        let x_rows: Vec<Vec<f64>> = (0..n)
            .map(|_| (0..p).map(|_| rng.random_range(-10.0..10.0)).collect())
            .collect();
        let y: Vec<f64> = (0..n).map(|_| rng.random_range(-10.0..10.0)).collect();
        let Ok(data) = Dataset::new(x_rows, y) else {
            continue;
        };
        if is_general_position(&data) {
            return Ok((data, attempt as usize));
        }
    }
    Err(Error::SolverFailure {
        msg: format!("no general-position draw for n={n}, p={p} within {MAX_ATTEMPTS} attempts"),
    })
}
