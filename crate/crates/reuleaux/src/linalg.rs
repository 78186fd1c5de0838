//! Small dense linear algebra: 2x2 blocks, Gaussian elimination, rank.
//!
//! Problem sizes here are tiny (n <= a few hundred), so plain partial-pivot
//! elimination is all that is needed.

use crate::error::{Error, Result};
use crate::geom::Point2;

/// A 2x2 real matrix, row major.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Mat2 {
    pub m: [[f64; 2]; 2],
}

impl Mat2 {
    pub const ZERO: Mat2 = Mat2 { m: [[0.0, 0.0], [0.0, 0.0]] };

    pub fn new(a: f64, b: f64, c: f64, d: f64) -> Self {
        Mat2 { m: [[a, b], [c, d]] }
    }

    pub fn identity() -> Self {
        Mat2::new(1.0, 0.0, 0.0, 1.0)
    }

    /// Outer product a b^T.
    pub fn outer(a: Point2, b: Point2) -> Self {
        Mat2::new(a.x() * b.x(), a.x() * b.y(), a.y() * b.x(), a.y() * b.y())
    }

    pub fn transpose(&self) -> Self {
        Mat2::new(self.m[0][0], self.m[1][0], self.m[0][1], self.m[1][1])
    }

    pub fn apply(&self, v: Point2) -> Point2 {
        Point2::new(
            self.m[0][0] * v.x() + self.m[0][1] * v.y(),
            self.m[1][0] * v.x() + self.m[1][1] * v.y(),
        )
    }

    pub fn scale(&self, s: f64) -> Self {
        Mat2::new(self.m[0][0] * s, self.m[0][1] * s, self.m[1][0] * s, self.m[1][1] * s)
    }

    pub fn add(&self, other: Mat2) -> Self {
        Mat2::new(
            self.m[0][0] + other.m[0][0],
            self.m[0][1] + other.m[0][1],
            self.m[1][0] + other.m[1][0],
            self.m[1][1] + other.m[1][1],
        )
    }

    pub fn sub(&self, other: Mat2) -> Self {
        self.add(other.scale(-1.0))
    }

    pub fn max_abs(&self) -> f64 {
        self.m
            .iter()
            .flatten()
            .fold(0.0f64, |acc, &x| acc.max(x.abs()))
    }
}

impl std::ops::Add for Mat2 {
    type Output = Mat2;
    fn add(self, rhs: Mat2) -> Mat2 {
        Mat2::add(&self, rhs)
    }
}

impl std::ops::Sub for Mat2 {
    type Output = Mat2;
    fn sub(self, rhs: Mat2) -> Mat2 {
        Mat2::sub(&self, rhs)
    }
}

impl std::ops::Mul<f64> for Mat2 {
    type Output = Mat2;
    fn mul(self, rhs: f64) -> Mat2 {
        self.scale(rhs)
    }
}

/// Solve the dense system `a x = b` by Gaussian elimination with partial
/// pivoting. `a` is row major, square.
pub fn solve_dense(a: &[Vec<f64>], b: &[f64]) -> Result<Vec<f64>> {
    let n = b.len();
    debug_assert!(a.len() == n && a.iter().all(|r| r.len() == n));
    let mut m: Vec<Vec<f64>> = a.to_vec();
    let mut rhs = b.to_vec();
    for col in 0..n {
        let (pivot_row, pivot) = (col..n)
            .map(|r| (r, m[r][col].abs()))
            .max_by(|x, y| x.1.total_cmp(&y.1))
            .unwrap();
        if pivot < 1e-12 {
            return Err(Error::RankDeficient);
        }
        m.swap(col, pivot_row);
        rhs.swap(col, pivot_row);
        for r in (col + 1)..n {
            let f = m[r][col] / m[col][col];
            if f == 0.0 {
                continue;
            }
            for c in col..n {
                m[r][c] -= f * m[col][c];
            }
            rhs[r] -= f * rhs[col];
        }
    }
    let mut x = vec![0.0; n];
    for row in (0..n).rev() {
        let mut s = rhs[row];
        for c in (row + 1)..n {
            s -= m[row][c] * x[c];
        }
        x[row] = s / m[row][row];
    }
    Ok(x)
}

/// Numerical rank of a rectangular matrix by row elimination with partial
/// pivoting; rows with max entry below `tol` after elimination do not count.
pub fn matrix_rank(rows: &[Vec<f64>], tol: f64) -> usize {
    if rows.is_empty() {
        return 0;
    }
    let ncols = rows[0].len();
    let mut m: Vec<Vec<f64>> = rows.to_vec();
    let nrows = m.len();
    let mut rank = 0;
    let mut row = 0;
    for col in 0..ncols {
        if row >= nrows {
            break;
        }
        let (pivot_row, pivot) = (row..nrows)
            .map(|r| (r, m[r][col].abs()))
            .max_by(|x, y| x.1.total_cmp(&y.1))
            .unwrap();
        if pivot <= tol {
            continue;
        }
        m.swap(row, pivot_row);
        for r in (row + 1)..nrows {
            let f = m[r][col] / m[row][col];
            if f == 0.0 {
                continue;
            }
            for c in col..ncols {
                m[r][c] -= f * m[row][c];
            }
        }
        rank += 1;
        row += 1;
    }
    rank
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn solve_small_system() {
        let a = vec![vec![2.0, 1.0], vec![1.0, 3.0]];
        let x = solve_dense(&a, &[5.0, 10.0]).unwrap();
        assert!((x[0] - 1.0).abs() < 1e-12);
        assert!((x[1] - 3.0).abs() < 1e-12);
    }

    #[test]
    fn singular_detected() {
        let a = vec![vec![1.0, 2.0], vec![2.0, 4.0]];
        assert!(solve_dense(&a, &[1.0, 2.0]).is_err());
    }

    #[test]
    fn rank_of_rectangular() {
        let rows = vec![
            vec![1.0, 0.0, 1.0],
            vec![0.0, 1.0, 1.0],
            vec![1.0, 1.0, 2.0],
        ];
        assert_eq!(matrix_rank(&rows, 1e-10), 2);
    }

    #[test]
    fn outer_product() {
        let m = Mat2::outer(Point2::new(1.0, 2.0), Point2::new(3.0, 4.0));
        assert_eq!(m.m, [[3.0, 4.0], [6.0, 8.0]]);
        let t = m.transpose();
        assert_eq!(t.m, [[3.0, 6.0], [4.0, 8.0]]);
    }
}
