//! Order statistics of residuals and the objective functions built on them.
//!
//! The median of absolute residuals is the h-th smallest residual with
//! h = floor(n/2) + 1; duplicates are counted with multiplicity. The
//! family extends to dropping the k largest residuals: `objective_fk`
//! evaluates the (n-k)-th smallest absolute residual, and k = floor((n-1)/2)
//! recovers the median objective minimized by LMS regression.

use crate::dataset::Dataset;
use crate::error::{Error, Result};

/// The k-th smallest element (1-based), duplicates counted repeatedly.
pub fn kth_smallest(values: &[f64], k: usize) -> Result<f64> {
    if values.is_empty() {
        return Err(Error::EmptyInput);
    }
    if k == 0 || k > values.len() {
        return Err(Error::RankOutOfRange { k, n: values.len() });
    }
    let mut buf = values.to_vec();
    let (_, kth, _) = buf.select_nth_unstable_by(k - 1, |a, b| a.total_cmp(b));
    Ok(*kth)
}

/// The h-th smallest element with h = floor(n/2) + 1.
///
/// For even n this is the upper of the two middle elements, not their
/// average; the whole crate uses this convention.
pub fn median_h(values: &[f64]) -> Result<f64> {
    kth_smallest(values, values.len() / 2 + 1)
}

/// Absolute residuals |y_i - x_i^T theta| for every observation.
pub fn abs_residuals(data: &Dataset, theta: &[f64]) -> Result<Vec<f64>> {
    if theta.len() != data.p() {
        return Err(Error::DimensionMismatch {
            expected: data.p(),
            got: theta.len(),
        });
    }
    if theta.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFinite { place: "theta" });
    }
    Ok((0..data.n())
        .map(|i| data.residual(i, theta).abs())
        .collect())
}

/// The (n-k)-th smallest absolute residual: the objective value after the
/// k largest residuals are discarded.
pub fn objective_fk(data: &Dataset, theta: &[f64], k: usize) -> Result<f64> {
    if k > data.max_drop_count() {
        return Err(Error::DropCountOutOfRange {
            k,
            max: data.max_drop_count(),
        });
    }
    let r = abs_residuals(data, theta)?;
    kth_smallest(&r, data.n() - k)
}

/// The LMS objective: the h-th smallest absolute residual. Squaring this
/// value gives the median of squared residuals, so both problems share
/// their minimizers.
pub fn objective_lms(data: &Dataset, theta: &[f64]) -> Result<f64> {
    let r = abs_residuals(data, theta)?;
    kth_smallest(&r, data.median_rank())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn intercept_dataset(y: &[f64]) -> Dataset {
        Dataset::new(vec![vec![1.0]; y.len()], y.to_vec()).unwrap()
    }

    #[test]
    fn kth_smallest_basic() {
        assert_eq!(kth_smallest(&[3.0, 1.0, 2.0], 2).unwrap(), 2.0);
        // Duplicates count repeatedly.
        assert_eq!(kth_smallest(&[5.0, 5.0, 1.0], 3).unwrap(), 5.0);
        assert_eq!(kth_smallest(&[5.0, 5.0, 1.0], 2).unwrap(), 5.0);
    }

    #[test]
    fn kth_smallest_rejects_bad_rank() {
        assert!(matches!(
            kth_smallest(&[1.0], 0),
            Err(Error::RankOutOfRange { .. })
        ));
        assert!(matches!(
            kth_smallest(&[1.0], 2),
            Err(Error::RankOutOfRange { .. })
        ));
        assert!(matches!(kth_smallest(&[], 1), Err(Error::EmptyInput)));
    }

    #[test]
    fn median_h_examples() {
        assert_eq!(median_h(&[0.0, 1.0, 4.0, 5.0, 9.0]).unwrap(), 4.0);
        // Even n: h = 3 picks the upper middle element.
        assert_eq!(median_h(&[1.0, 2.0, 3.0, 4.0]).unwrap(), 3.0);
        assert_eq!(median_h(&[7.0]).unwrap(), 7.0);
    }

    #[test]
    fn abs_residuals_intercept_model() {
        let d = intercept_dataset(&[0.0, 1.0, 4.0, 5.0, 9.0]);
        let r = abs_residuals(&d, &[2.0]).unwrap();
        assert_eq!(r, vec![2.0, 1.0, 2.0, 3.0, 7.0]);
    }

    #[test]
    fn abs_residuals_zero_theta_gives_abs_y() {
        let rows: Vec<Vec<f64>> = (1..=6).map(|t| vec![1.0, t as f64]).collect();
        let y = vec![-1.0, 2.0, -3.0, 4.0, -5.0, 6.0];
        let d = Dataset::new(rows, y.clone()).unwrap();
        let r = abs_residuals(&d, &[0.0, 0.0]).unwrap();
        let expected: Vec<f64> = y.iter().map(|v| v.abs()).collect();
        assert_eq!(r, expected);
    }

    #[test]
    fn abs_residuals_exact_fit_rows_are_zero() {
        let rows: Vec<Vec<f64>> = (1..=4).map(|t| vec![1.0, t as f64]).collect();
        // Rows 1..3 lie on y = 2 + 3 t, row 4 is off.
        let y = vec![5.0, 8.0, 11.0, 100.0];
        let d = Dataset::new(rows, y).unwrap();
        let r = abs_residuals(&d, &[2.0, 3.0]).unwrap();
        assert!(r[..3].iter().all(|v| *v == 0.0));
        assert_eq!(r[3], 86.0);
    }

    #[test]
    fn abs_residuals_rejects_dimension_mismatch() {
        let d = intercept_dataset(&[0.0, 1.0]);
        assert!(matches!(
            abs_residuals(&d, &[1.0, 2.0]),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn objective_fk_intercept_examples() {
        let d = intercept_dataset(&[0.0, 1.0, 4.0, 5.0, 9.0]);
        assert_eq!(objective_fk(&d, &[2.0], 2).unwrap(), 2.0);
        // k=0 is the maximum residual.
        assert_eq!(objective_fk(&d, &[2.0], 0).unwrap(), 7.0);
        assert_eq!(objective_fk(&d, &[6.5], 2).unwrap(), 2.5);
        // Largest admissible drop count is n-(p+1) = 3.
        assert_eq!(objective_fk(&d, &[2.0], 3).unwrap(), 2.0);
        assert!(matches!(
            objective_fk(&d, &[2.0], 4),
            Err(Error::DropCountOutOfRange { .. })
        ));
    }

    #[test]
    fn objective_lms_matches_median_residual() {
        let d = intercept_dataset(&[0.0, 1.0, 4.0, 5.0, 9.0]);
        assert_eq!(objective_lms(&d, &[2.0]).unwrap(), 2.0);
        let d3 = intercept_dataset(&[0.0, 10.0, 20.0]);
        assert_eq!(objective_lms(&d3, &[10.0]).unwrap(), 10.0);
    }

    #[test]
    fn objective_lms_equals_fk_at_lms_drop_count() {
        let d = intercept_dataset(&[0.0, 1.0, 4.0, 5.0, 9.0]);
        for theta in [-3.0, 0.0, 2.0, 4.5, 11.0] {
            assert_eq!(
                objective_lms(&d, &[theta]).unwrap(),
                objective_fk(&d, &[theta], d.lms_drop_count()).unwrap()
            );
        }
    }
}
