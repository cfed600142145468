//! The regression dataset and ordered observation-index sets.

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::linalg::{rank_with_pivot_columns, Mat};

/// Default absolute tolerance for every equality-within-tolerance check.
pub const DEFAULT_TOLERANCE: f64 = 1e-9;

/// An immutable regression instance: n observations of p regressors plus a
/// response. Construction enforces the standing assumptions — full column
/// rank, n >= p+1 and n/2 >= p — so every solver can rely on them.
#[derive(Debug, Clone)]
pub struct Dataset {
    x: Vec<f64>, // row-major n*p
    y: Vec<f64>,
    n: usize,
    p: usize,
    tol: f64,
}

impl Dataset {
    /// Builds a dataset from regressor rows and responses, validating all
    /// invariants. Rank deficiency is reported with the dependent columns
    /// named (1-based).
    pub fn new(x_rows: Vec<Vec<f64>>, y: Vec<f64>) -> Result<Self> {
        let n = x_rows.len();
        if n == 0 {
            return Err(Error::EmptyInput);
        }
        let p = x_rows[0].len();
        if p == 0 {
            return Err(Error::DimensionMismatch {
                expected: 1,
                got: 0,
            });
        }
        if y.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: y.len(),
            });
        }
        if n < p + 1 {
            return Err(Error::TooFewObservations { n, p, min: p + 1 });
        }
        if n < 2 * p {
            return Err(Error::ShapeAssumption { n, p });
        }
        let mut x = Vec::with_capacity(n * p);
        for row in &x_rows {
            if row.len() != p {
                return Err(Error::DimensionMismatch {
                    expected: p,
                    got: row.len(),
                });
            }
            for v in row {
                if !v.is_finite() {
                    return Err(Error::NonFinite { place: "regressor" });
                }
                x.push(*v);
            }
        }
        for v in &y {
            if !v.is_finite() {
                return Err(Error::NonFinite { place: "response" });
            }
        }

        let mut m = Mat::zeros(n, p);
        m.a.copy_from_slice(&x);
        let (rank, pivots) = rank_with_pivot_columns(m);
        if rank < p {
            let dependent: Vec<usize> = (0..p)
                .filter(|c| !pivots.contains(c))
                .map(|c| c + 1)
                .collect();
            return Err(Error::RankDeficient {
                rank,
                p,
                columns: dependent,
            });
        }

        Ok(Dataset {
            x,
            y,
            n,
            p,
            tol: DEFAULT_TOLERANCE,
        })
    }

    /// Replaces the absolute tolerance used for all within-tolerance checks.
    pub fn with_tolerance(mut self, tol: f64) -> Self {
        self.tol = tol;
        self
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn p(&self) -> usize {
        self.p
    }

    pub fn tolerance(&self) -> f64 {
        self.tol
    }

    /// The median rank h = floor(n/2) + 1.
    pub fn median_rank(&self) -> usize {
        self.n / 2 + 1
    }

    /// The drop count that turns the order-statistic objective into the
    /// median objective: n - h = floor((n-1)/2).
    pub fn lms_drop_count(&self) -> usize {
        self.n - self.median_rank()
    }

    /// Largest admissible drop count, n - (p+1).
    pub fn max_drop_count(&self) -> usize {
        self.n - self.p - 1
    }

    #[inline]
    pub fn row(&self, i: usize) -> &[f64] {
        &self.x[i * self.p..(i + 1) * self.p]
    }

    #[inline]
    pub fn response(&self, i: usize) -> f64 {
        self.y[i]
    }

    pub fn responses(&self) -> &[f64] {
        &self.y
    }

    pub fn x_rows(&self) -> Vec<Vec<f64>> {
        (0..self.n).map(|i| self.row(i).to_vec()).collect()
    }

    /// Signed residual y_i - x_i^T theta.
    #[inline]
    pub fn residual(&self, i: usize, theta: &[f64]) -> f64 {
        let mut dot = 0.0;
        for (a, b) in self.row(i).iter().zip(theta) {
            dot += a * b;
        }
        self.y[i] - dot
    }
}

/// A strictly increasing set of observation indices.
///
/// Indices are stored 0-based; every serialized or displayed form is
/// 1-based to match the usual statistical numbering of observations.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct IndexSet(Vec<usize>);

impl IndexSet {
    /// Builds an index set, requiring strictly increasing 0-based members.
    pub fn new(indices: Vec<usize>) -> Result<Self> {
        if indices.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::UnsortedIndexSet);
        }
        Ok(IndexSet(indices))
    }

    /// Builds an index set from members in any order, sorting and rejecting
    /// duplicates.
    pub fn from_unsorted(mut indices: Vec<usize>) -> Result<Self> {
        indices.sort_unstable();
        Self::new(indices)
    }

    /// The full set {0, .., n-1}.
    pub fn full(n: usize) -> Self {
        IndexSet((0..n).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, i: usize) -> bool {
        self.0.binary_search(&i).is_ok()
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().copied()
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    /// A copy with one member removed.
    pub fn without(&self, i: usize) -> Self {
        IndexSet(self.0.iter().copied().filter(|&j| j != i).collect())
    }

    /// Checks all members lie inside a dataset of n observations.
    pub fn validate_for(&self, n: usize) -> Result<()> {
        if let Some(&max) = self.0.last() {
            if max >= n {
                return Err(Error::IndexOutOfRange { index: max, n });
            }
        }
        Ok(())
    }

    /// Members as 1-based indices, the form used in all reports.
    pub fn one_based(&self) -> Vec<usize> {
        self.0.iter().map(|i| i + 1).collect()
    }
}

impl std::fmt::Display for IndexSet {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{{")?;
        for (pos, i) in self.0.iter().enumerate() {
            if pos > 0 {
                write!(f, ",")?;
            }
            write!(f, "{}", i + 1)?;
        }
        write!(f, "}}")
    }
}

impl Serialize for IndexSet {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.one_based().serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for IndexSet {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let one_based = Vec::<usize>::deserialize(deserializer)?;
        let mut zero_based = Vec::with_capacity(one_based.len());
        for i in one_based {
            if i == 0 {
                return Err(D::Error::custom("observation indices are 1-based"));
            }
            zero_based.push(i - 1);
        }
        IndexSet::new(zero_based).map_err(D::Error::custom)
    }
}
