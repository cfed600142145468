//! Exact piecewise-linear profile of the objective for single-parameter
//! models, suitable for plotting and for locating local minimizers.
//!
//! For p = 1 every absolute residual is piecewise linear in theta, so the
//! (n-k)-th order statistic is too. Its slope can only change where some
//! residual vanishes or where two residual magnitudes cross; collecting all
//! such points yields vertices covering every breakpoint, and the objective
//! is linear between consecutive vertices.

use serde::{Deserialize, Serialize};

use crate::dataset::Dataset;
use crate::error::{Error, Result};
use crate::objective::objective_fk;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProfilePoint {
    pub theta: f64,
    pub value: f64,
}

/// The objective evaluated at every potential breakpoint, in increasing
/// theta order. Linear interpolation between consecutive points reproduces
/// the objective exactly.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ObjectiveProfile {
    pub points: Vec<ProfilePoint>,
}

impl ObjectiveProfile {
    /// Vertices where the slope changes from negative to positive: the
    /// profile's strict local minimizers.
    pub fn local_minimizers(&self) -> Vec<ProfilePoint> {
        let pts = &self.points;
        let mut out = Vec::new();
        if pts.len() < 3 {
            return out;
        }
        let slope_scale = pts
            .windows(2)
            .map(|w| ((w[1].value - w[0].value) / (w[1].theta - w[0].theta)).abs())
            .fold(1.0_f64, f64::max);
        let eps = 1e-9 * slope_scale;
        for m in 1..pts.len() - 1 {
            let s_in = (pts[m].value - pts[m - 1].value) / (pts[m].theta - pts[m - 1].theta);
            let s_out = (pts[m + 1].value - pts[m].value) / (pts[m + 1].theta - pts[m].theta);
            if s_in < -eps && s_out > eps {
                out.push(pts[m]);
            }
        }
        out
    }
}

/// Builds the exact profile of the k-drop objective for a p = 1 dataset.
pub fn profile_fk(data: &Dataset, k: usize) -> Result<ObjectiveProfile> {
    if data.p() != 1 {
        return Err(Error::DimensionMismatch {
            expected: 1,
            got: data.p(),
        });
    }
    if k > data.max_drop_count() {
        return Err(Error::DropCountOutOfRange {
            k,
            max: data.max_drop_count(),
        });
    }
    let n = data.n();
    let xs: Vec<f64> = (0..n).map(|i| data.row(i)[0]).collect();
    let ys: Vec<f64> = (0..n).map(|i| data.response(i)).collect();
    let x_scale = xs.iter().fold(1.0_f64, |m, v| m.max(v.abs()));
    let eps = 1e-12 * x_scale;

    let mut breaks = Vec::new();
    for i in 0..n {
        // Residual i vanishes here.
        if xs[i].abs() > eps {
            breaks.push(ys[i] / xs[i]);
        }
        for j in i + 1..n {
            // |r_i| = |r_j| with equal signs.
            if (xs[i] - xs[j]).abs() > eps {
                breaks.push((ys[i] - ys[j]) / (xs[i] - xs[j]));
            }
            // |r_i| = |r_j| with opposite signs.
            if (xs[i] + xs[j]).abs() > eps {
                breaks.push((ys[i] + ys[j]) / (xs[i] + xs[j]));
            }
        }
    }
    breaks.sort_by(f64::total_cmp);
    let span = breaks.last().map_or(1.0, |hi| (hi - breaks[0]).max(1.0));
    let merge = 1e-12 * span;
    let mut thetas: Vec<f64> = Vec::with_capacity(breaks.len() + 2);
    for b in breaks {
        if thetas.last().is_none_or(|last| b - last > merge) {
            thetas.push(b);
        }
    }
    if thetas.is_empty() {
        thetas.push(0.0);
    }
    // Pad both ends so boundary slopes are visible.
    thetas.insert(0, thetas[0] - 0.05 * span);
    thetas.push(thetas[thetas.len() - 1] + 0.05 * span);

    let mut points = Vec::with_capacity(thetas.len());
    for theta in thetas {
        let value = objective_fk(data, &[theta], k)?;
        points.push(ProfilePoint { theta, value });
    }
    Ok(ObjectiveProfile { points })
}

/// Profile of the median objective, whose minimizers are the LMS estimates.
pub fn profile_lms(data: &Dataset) -> Result<ObjectiveProfile> {
    profile_fk(data, data.lms_drop_count())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn intercept_dataset(y: &[f64]) -> Dataset {
        Dataset::new(vec![vec![1.0]; y.len()], y.to_vec()).unwrap()
    }

    #[test]
    fn example_profile_has_the_three_known_minimizers() {
        let d = intercept_dataset(&[0.0, 1.0, 4.0, 5.0, 9.0]);
        let profile = profile_lms(&d).unwrap();
        let minima = profile.local_minimizers();
        assert_eq!(minima.len(), 3);
        let thetas: Vec<f64> = minima.iter().map(|m| m.theta).collect();
        assert!((thetas[0] - 2.0).abs() < 1e-9);
        assert!((thetas[1] - 3.0).abs() < 1e-9);
        assert!((thetas[2] - 6.5).abs() < 1e-9);
        assert!((minima[0].value - 2.0).abs() < 1e-9);
        assert!((minima[2].value - 2.5).abs() < 1e-9);
    }

    #[test]
    fn profile_interpolates_the_objective_exactly() {
        let d = intercept_dataset(&[0.0, 1.0, 4.0, 5.0, 9.0]);
        let profile = profile_lms(&d).unwrap();
        for w in profile.points.windows(2) {
            let mid = 0.5 * (w[0].theta + w[1].theta);
            let lin = 0.5 * (w[0].value + w[1].value);
            let actual = objective_fk(&d, &[mid], d.lms_drop_count()).unwrap();
            assert!(
                (lin - actual).abs() < 1e-9,
                "interpolation mismatch at {mid}: {lin} vs {actual}"
            );
        }
    }

    #[test]
    fn rejects_multiparameter_models() {
        let rows = vec![
            vec![1.0, 0.0],
            vec![0.0, 1.0],
            vec![1.0, 1.0],
            vec![1.0, 2.0],
        ];
        let d = Dataset::new(rows, vec![0.0; 4]).unwrap();
        assert!(matches!(
            profile_lms(&d),
            Err(Error::DimensionMismatch { .. })
        ));
    }
}
