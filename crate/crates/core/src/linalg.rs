//! Small dense linear algebra: Gaussian elimination with partial pivoting.
//!
//! Every system solved in this crate has at most p+1 unknowns, so a plain
//! row-major `Vec<f64>` matrix and O(m^3) elimination are all that is needed.

/// A dense row-major matrix.
#[derive(Debug, Clone)]
pub(crate) struct Mat {
    pub rows: usize,
    pub cols: usize,
    pub a: Vec<f64>,
}

impl Mat {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Mat {
            rows,
            cols,
            a: vec![0.0; rows * cols],
        }
    }

    #[inline]
    pub fn at(&self, r: usize, c: usize) -> f64 {
        self.a[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: f64) {
        self.a[r * self.cols + c] = v;
    }

    pub fn max_abs(&self) -> f64 {
        self.a.iter().fold(0.0_f64, |m, v| m.max(v.abs()))
    }
}

/// Pivot threshold scaled to the matrix magnitude.
pub(crate) fn pivot_eps(scale: f64, dim: usize) -> f64 {
    f64::EPSILON * (dim.max(1) as f64) * scale.max(1.0)
}

/// Solves `A x = b` for square `A` by Gaussian elimination with partial
/// pivoting. Returns `None` when a pivot falls below the scaled threshold.
pub(crate) fn solve_square(mut m: Mat, mut b: Vec<f64>) -> Option<Vec<f64>> {
    let n = m.rows;
    debug_assert_eq!(m.cols, n);
    debug_assert_eq!(b.len(), n);
    let eps = pivot_eps(m.max_abs(), n);

    for col in 0..n {
        // Partial pivoting: largest magnitude, first row on ties.
        let mut piv = col;
        let mut best = m.at(col, col).abs();
        for r in col + 1..n {
            let v = m.at(r, col).abs();
            if v > best {
                best = v;
                piv = r;
            }
        }
        if best <= eps {
            return None;
        }
        if piv != col {
            for c in 0..n {
                let tmp = m.at(col, c);
                m.set(col, c, m.at(piv, c));
                m.set(piv, c, tmp);
            }
            b.swap(col, piv);
        }
        let d = m.at(col, col);
        for r in col + 1..n {
            let f = m.at(r, col) / d;
            if f == 0.0 {
                continue;
            }
            for c in col..n {
                let v = m.at(r, c) - f * m.at(col, c);
                m.set(r, c, v);
            }
            b[r] -= f * b[col];
        }
    }

    let mut x = vec![0.0; n];
    for col in (0..n).rev() {
        let mut s = b[col];
        for c in col + 1..n {
            s -= m.at(col, c) * x[c];
        }
        x[col] = s / m.at(col, col);
    }
    Some(x)
}

/// Row-echelon rank of a dense matrix, together with the pivot column list.
/// Columns not in the pivot list are linear combinations of earlier ones.
pub(crate) fn rank_with_pivot_columns(mut m: Mat) -> (usize, Vec<usize>) {
    let eps = pivot_eps(m.max_abs(), m.rows.max(m.cols));
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..m.cols {
        if row == m.rows {
            break;
        }
        let mut piv = row;
        let mut best = m.at(row, col).abs();
        for r in row + 1..m.rows {
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
            for c in 0..m.cols {
                let tmp = m.at(row, c);
                m.set(row, c, m.at(piv, c));
                m.set(piv, c, tmp);
            }
        }
        let d = m.at(row, col);
        for r in row + 1..m.rows {
            let f = m.at(r, col) / d;
            if f == 0.0 {
                continue;
            }
            for c in col..m.cols {
                let v = m.at(r, c) - f * m.at(row, c);
                m.set(r, c, v);
            }
        }
        pivots.push(col);
        row += 1;
    }
    (pivots.len(), pivots)
}

/// Rank of the matrix whose rows are the given vectors.
pub(crate) fn row_rank(rows: &[&[f64]]) -> usize {
    if rows.is_empty() {
        return 0;
    }
    let cols = rows[0].len();
    let mut m = Mat::zeros(rows.len(), cols);
    for (r, row) in rows.iter().enumerate() {
        for (c, v) in row.iter().enumerate() {
            m.set(r, c, *v);
        }
    }
    rank_with_pivot_columns(m).0
}

/// Greedily selects `target` linearly independent vectors from `rows`,
/// scanning in order. Returns the positions selected; shorter than
/// `target` when the collection does not span enough dimensions.
pub(crate) fn independent_subset(rows: &[&[f64]], target: usize) -> Vec<usize> {
    if rows.is_empty() || target == 0 {
        return Vec::new();
    }
    let cols = rows[0].len();
    let scale = rows
        .iter()
        .flat_map(|r| r.iter())
        .fold(0.0_f64, |m, v| m.max(v.abs()));
    let eps = pivot_eps(scale, cols.max(rows.len()));

    // Maintain a reduced elimination basis of the chosen rows, each entry
    // normalized so its pivot column holds exactly 1.
    let mut basis: Vec<(usize, Vec<f64>)> = Vec::new();
    let mut chosen = Vec::new();
    for (pos, row) in rows.iter().enumerate() {
        if chosen.len() == target {
            break;
        }
        let mut v = row.to_vec();
        for (pc, b) in &basis {
            let f = v[*pc];
            if f != 0.0 {
                for c in 0..cols {
                    v[c] -= f * b[c];
                }
                v[*pc] = 0.0;
            }
        }
        let (pc, pv) = v
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.abs().partial_cmp(&b.1.abs()).unwrap())
            .map(|(i, x)| (i, *x))
            .unwrap_or((0, 0.0));
        if pv.abs() <= eps {
            continue;
        }
        for c in 0..cols {
            v[c] /= pv;
        }
        v[pc] = 1.0;
        for (_, b) in basis.iter_mut() {
            let f = b[pc];
            if f != 0.0 {
                for c in 0..cols {
                    b[c] -= f * v[c];
                }
                b[pc] = 0.0;
            }
        }
        basis.push((pc, v));
        chosen.push(pos);
    }
    chosen
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mat(rows: &[&[f64]]) -> Mat {
        let mut m = Mat::zeros(rows.len(), rows[0].len());
        for (r, row) in rows.iter().enumerate() {
            for (c, v) in row.iter().enumerate() {
                m.set(r, c, *v);
            }
        }
        m
    }

    #[test]
    fn solves_small_system() {
        let m = mat(&[&[2.0, 1.0], &[1.0, 3.0]]);
        let x = solve_square(m, vec![5.0, 10.0]).unwrap();
        assert!((x[0] - 1.0).abs() < 1e-12);
        assert!((x[1] - 3.0).abs() < 1e-12);
    }

    #[test]
    fn rejects_singular_system() {
        let m = mat(&[&[1.0, 2.0], &[2.0, 4.0]]);
        assert!(solve_square(m, vec![1.0, 2.0]).is_none());
    }

    #[test]
    fn rank_reports_dependent_columns() {
        // Third column = first + second.
        let m = mat(&[&[1.0, 0.0, 1.0], &[0.0, 1.0, 1.0], &[1.0, 1.0, 2.0]]);
        let (rank, pivots) = rank_with_pivot_columns(m);
        assert_eq!(rank, 2);
        assert_eq!(pivots, vec![0, 1]);
    }

    #[test]
    fn independent_subset_skips_duplicates() {
        let r1 = [1.0, 0.0];
        let r2 = [2.0, 0.0];
        let r3 = [0.0, 1.0];
        let rows: Vec<&[f64]> = vec![&r1, &r2, &r3];
        assert_eq!(independent_subset(&rows, 2), vec![0, 2]);
    }
}
