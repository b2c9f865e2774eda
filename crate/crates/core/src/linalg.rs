//! Dense matrices with exact elimination: solve, determinant and rank.
//!
//! Pivoting picks the first nonzero entry of a column. Over the rationals no
//! other strategy is needed; over floats the results are only as good as the
//! input conditioning allows.

use std::fmt;

use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LinalgError {
    #[error("matrix is singular")]
    SingularMatrix,
    #[error("matrix is not square ({rows}x{cols})")]
    NonSquare { rows: usize, cols: usize },
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
}

/// Row-major dense matrix.
#[derive(Clone, PartialEq)]
pub struct Matrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

impl<T: Scalar> Matrix<T> {
    pub fn new(rows: usize, cols: usize, data: Vec<T>) -> Result<Self, LinalgError> {
        if data.len() != rows * cols {
            return Err(LinalgError::DimensionMismatch(format!("{} entries for a {rows}x{cols} matrix", data.len())));
        }
        Ok(Self { rows, cols, data })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![T::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = T::one();
        }
        m
    }

    /// Builds a matrix from row vectors. All rows must share one length.
    pub fn from_rows(rows: &[Vec<T>]) -> Result<Self, LinalgError> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return Err(LinalgError::DimensionMismatch("ragged rows".into()));
        }
        Ok(Self { rows: rows.len(), cols, data: rows.concat() })
    }

    pub fn from_columns(columns: &[Vec<T>]) -> Result<Self, LinalgError> {
        Ok(Self::from_rows(columns)?.transpose())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &T {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, value: T) {
        self.data[r * self.cols + c] = value;
    }

    pub fn row(&self, r: usize) -> &[T] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn column(&self, c: usize) -> Vec<T> {
        (0..self.rows).map(|r| self.get(r, c).clone()).collect()
    }

    pub fn entries(&self) -> &[T] {
        &self.data
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(T::is_zero)
    }

    pub fn transpose(&self) -> Self {
        let mut data = Vec::with_capacity(self.data.len());
        for c in 0..self.cols {
            for r in 0..self.rows {
                data.push(self.get(r, c).clone());
            }
        }
        Self { rows: self.cols, cols: self.rows, data }
    }

    pub fn mul(&self, other: &Self) -> Result<Self, LinalgError> {
        if self.cols != other.rows {
            return Err(LinalgError::DimensionMismatch(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    let idx = i * other.cols + j;
                    out.data[idx] = out.data[idx].clone() + a.clone() * b.clone();
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[T]) -> Result<Vec<T>, LinalgError> {
        if v.len() != self.cols {
            return Err(LinalgError::DimensionMismatch(format!(
                "vector of length {} for {} columns",
                v.len(),
                self.cols
            )));
        }
        Ok((0..self.rows)
            .map(|r| self.row(r).iter().zip(v).fold(T::zero(), |acc, (a, b)| acc + a.clone() * b.clone()))
            .collect())
    }

    pub fn scale(&self, factor: &T) -> Self {
        Self { rows: self.rows, cols: self.cols, data: self.data.iter().map(|x| x.clone() * factor.clone()).collect() }
    }

    pub fn neg(&self) -> Self {
        self.scale(&-T::one())
    }

    /// Solves `self · X = rhs` by Gauss-Jordan elimination.
    pub fn solve(&self, rhs: &Self) -> Result<Self, LinalgError> {
        if !self.is_square() {
            return Err(LinalgError::NonSquare { rows: self.rows, cols: self.cols });
        }
        if rhs.rows != self.rows {
            return Err(LinalgError::DimensionMismatch(format!(
                "right-hand side has {} rows, expected {}",
                rhs.rows, self.rows
            )));
        }
        let n = self.rows;
        let k = rhs.cols;
        let width = n + k;
        let mut aug: Vec<Vec<T>> = (0..n)
            .map(|r| {
                let mut row = self.row(r).to_vec();
                row.extend_from_slice(rhs.row(r));
                row
            })
            .collect();

        for col in 0..n {
            let pivot = (col..n).find(|&r| !aug[r][col].is_zero()).ok_or(LinalgError::SingularMatrix)?;
            aug.swap(col, pivot);
            let inv = T::one() / aug[col][col].clone();
            for j in col..width {
                aug[col][j] = aug[col][j].clone() * inv.clone();
            }
            for r in 0..n {
                if r == col || aug[r][col].is_zero() {
                    continue;
                }
                let factor = aug[r][col].clone();
                for j in col..width {
                    let delta = factor.clone() * aug[col][j].clone();
                    aug[r][j] = aug[r][j].clone() - delta;
                }
            }
        }
        let data = aug.into_iter().flat_map(|row| row.into_iter().skip(n)).collect();
        Ok(Self { rows: n, cols: k, data })
    }

    pub fn inverse(&self) -> Result<Self, LinalgError> {
        self.solve(&Self::identity(self.rows))
    }

    /// Determinant by fraction-free (Bareiss) elimination.
    ///
    /// Rows are first scaled to integer entries when the scalar type supports
    /// it, so every intermediate value is a minor of the scaled matrix.
    pub fn determinant(&self) -> Result<T, LinalgError> {
        if !self.is_square() {
            return Err(LinalgError::NonSquare { rows: self.rows, cols: self.cols });
        }
        let n = self.rows;
        if n == 0 {
            return Ok(T::one());
        }
        let mut scaling = T::one();
        let mut m: Vec<Vec<T>> = (0..n)
            .map(|r| {
                let row = self.row(r);
                let f = T::clearing_factor(row);
                scaling = scaling.clone() * f.clone();
                row.iter().map(|x| x.clone() * f.clone()).collect()
            })
            .collect();

        if let Some(det) = T::integral_determinant(&m) {
            return Ok(det / scaling);
        }
        let mut sign_flip = false;
        let mut prev = T::one();
        for k in 0..n - 1 {
            if m[k][k].is_zero() {
                match (k + 1..n).find(|&r| !m[r][k].is_zero()) {
                    Some(r) => {
                        m.swap(k, r);
                        sign_flip = !sign_flip;
                    }
                    None => return Ok(T::zero()),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let num = m[i][j].clone() * m[k][k].clone() - m[i][k].clone() * m[k][j].clone();
                    m[i][j] = T::exact_div(&num, &prev);
                }
                m[i][k] = T::zero();
            }
            prev = m[k][k].clone();
        }
        let det = m[n - 1][n - 1].clone() / scaling;
        Ok(if sign_flip { -det } else { det })
    }

    /// Determinant by Laplace expansion along the first row.
    ///
    /// Exponential cost; kept as an independent cross-check for small matrices.
    pub fn determinant_by_cofactors(&self) -> Result<T, LinalgError> {
        if !self.is_square() {
            return Err(LinalgError::NonSquare { rows: self.rows, cols: self.cols });
        }
        let cols: Vec<usize> = (0..self.cols).collect();
        Ok(self.cofactor_expand(0, &cols))
    }

    fn cofactor_expand(&self, row: usize, cols: &[usize]) -> T {
        match cols.len() {
            0 => T::one(),
            1 => self.get(row, cols[0]).clone(),
            _ => {
                let mut acc = T::zero();
                for (pos, &c) in cols.iter().enumerate() {
                    let entry = self.get(row, c);
                    if entry.is_zero() {
                        continue;
                    }
                    let rest: Vec<usize> = cols.iter().copied().filter(|&x| x != c).collect();
                    let term = entry.clone() * self.cofactor_expand(row + 1, &rest);
                    acc = if pos % 2 == 0 { acc + term } else { acc - term };
                }
                acc
            }
        }
    }

    /// Rank by row echelon reduction.
    pub fn rank(&self) -> usize {
        let mut m: Vec<Vec<T>> = (0..self.rows).map(|r| self.row(r).to_vec()).collect();
        let mut rank = 0;
        for col in 0..self.cols {
            if rank == self.rows {
                break;
            }
            let Some(pivot) = (rank..self.rows).find(|&r| !m[r][col].is_zero()) else {
                continue;
            };
            m.swap(rank, pivot);
            for r in rank + 1..self.rows {
                if m[r][col].is_zero() {
                    continue;
                }
                let factor = m[r][col].clone() / m[rank][col].clone();
                for j in col..self.cols {
                    let delta = factor.clone() * m[rank][j].clone();
                    m[r][j] = m[r][j].clone() - delta;
                }
            }
            rank += 1;
        }
        rank
    }
}

impl<T: Scalar> fmt::Debug for Matrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{} [", self.rows, self.cols)?;
        for r in 0..self.rows {
            let cells: Vec<String> = self.row(r).iter().map(|x| x.to_string()).collect();
            writeln!(f, "  [{}]", cells.join(", "))?;
        }
        write!(f, "]")
    }
}

/// Small helpers on coordinate vectors.
pub mod vector {
    use crate::scalar::Scalar;

    pub fn add<T: Scalar>(a: &[T], b: &[T]) -> Vec<T> {
        a.iter().zip(b).map(|(x, y)| x.clone() + y.clone()).collect()
    }

    pub fn sub<T: Scalar>(a: &[T], b: &[T]) -> Vec<T> {
        a.iter().zip(b).map(|(x, y)| x.clone() - y.clone()).collect()
    }

    pub fn scale<T: Scalar>(a: &[T], s: &T) -> Vec<T> {
        a.iter().map(|x| x.clone() * s.clone()).collect()
    }

    pub fn dot<T: Scalar>(a: &[T], b: &[T]) -> T {
        a.iter().zip(b).fold(T::zero(), |acc, (x, y)| acc + x.clone() * y.clone())
    }

    pub fn is_zero<T: Scalar>(a: &[T]) -> bool {
        a.iter().all(T::is_zero)
    }

    /// Returns `Some(t)` with `a = t·b` when `b ≠ 0` and `a` is a multiple of `b`.
    pub fn multiple_of<T: Scalar>(a: &[T], b: &[T]) -> Option<T> {
        if a.len() != b.len() {
            return None;
        }
        let k = b.iter().position(|x| !x.is_zero())?;
        let t = a[k].clone() / b[k].clone();
        a.iter().zip(b).all(|(x, y)| *x == t.clone() * y.clone()).then_some(t)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{q, qi};
    use crate::{QMatrix, Rational};

    fn m(rows: &[&[i64]]) -> QMatrix {
        QMatrix::from_rows(&rows.iter().map(|r| r.iter().map(|&x| qi(x)).collect()).collect::<Vec<_>>()).unwrap()
    }

    #[test]
    fn identity_solve_returns_rhs() {
        let rhs = m(&[&[1, 2], &[3, 4], &[5, 6]]);
        assert_eq!(QMatrix::identity(3).solve(&rhs).unwrap(), rhs);
    }

    #[test]
    fn hand_eliminated_system() {
        let x = m(&[&[1, 1], &[1, -1]]).solve(&m(&[&[2], &[0]])).unwrap();
        assert_eq!(x, m(&[&[1], &[1]]));
    }

    #[test]
    fn rank_deficient_solve_fails() {
        let err = m(&[&[1, 1], &[2, 2]]).solve(&m(&[&[1], &[5]])).unwrap_err();
        assert_eq!(err, LinalgError::SingularMatrix);
    }

    #[test]
    fn determinant_basics() {
        assert_eq!(QMatrix::identity(4).determinant().unwrap(), qi(1));
        assert_eq!(m(&[&[1, 2, 3], &[4, 5, 6], &[1, 2, 3]]).determinant().unwrap(), qi(0));
        assert!(matches!(QMatrix::zeros(2, 3).determinant(), Err(LinalgError::NonSquare { rows: 2, cols: 3 })));
        // needs a row swap: [[0,1],[1,0]] has determinant -1
        assert_eq!(m(&[&[0, 1], &[1, 0]]).determinant().unwrap(), qi(-1));
    }

    #[test]
    fn determinant_with_fractions() {
        let a = QMatrix::from_rows(&[vec![q(1, 2), q(1, 3)], vec![q(1, 5), q(-1, 7)]]).unwrap();
        let expected = q(1, 2) * q(-1, 7) - q(1, 3) * q(1, 5);
        assert_eq!(a.determinant().unwrap(), expected);
        assert_eq!(a.determinant_by_cofactors().unwrap(), expected);
    }

    #[test]
    fn rank_examples() {
        assert_eq!(QMatrix::zeros(3, 3).rank(), 0);
        // echelon construction: two independent columns in R^4
        let a = m(&[&[1, 0], &[0, 1], &[3, 5], &[-2, 7]]);
        assert_eq!(a.rank(), 2);
        assert_eq!(m(&[&[1, 2, 3], &[2, 4, 6]]).rank(), 1);
    }

    #[test]
    fn float_kernel_runs() {
        let a = Matrix::<f64>::from_rows(&[vec![2.0, 1.0], vec![1.0, 3.0]]).unwrap();
        let x = a.solve(&Matrix::from_rows(&[vec![3.0], vec![5.0]]).unwrap()).unwrap();
        assert!((x.get(0, 0) - 0.8).abs() < 1e-12);
        assert!((a.determinant().unwrap() - 5.0).abs() < 1e-12);
    }

    #[test]
    fn multiple_of_detects_parallel_vectors() {
        let b: Vec<Rational> = vec![qi(1), qi(-2), qi(0)];
        assert_eq!(vector::multiple_of(&[qi(3), qi(-6), qi(0)], &b), Some(qi(3)));
        assert_eq!(vector::multiple_of(&[qi(3), qi(-6), qi(1)], &b), None);
        assert_eq!(vector::multiple_of(&[qi(0), qi(0), qi(0)], &b), Some(qi(0)));
        assert_eq!(vector::multiple_of(&b, &[qi(0), qi(0), qi(0)]), None);
    }
}
