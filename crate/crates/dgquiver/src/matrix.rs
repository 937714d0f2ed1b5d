//! Dense matrices over an exact field.
//!
//! Row-major storage, Gauss-Jordan elimination with exact pivoting.  Sizes in
//! this crate stay at desk scale (a few hundred rows at most), so no effort
//! is spent on asymptotics or sparsity.

use std::fmt;

use crate::error::{Error, Result};
use crate::scalar::{FieldKind, Scalar};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Matrix {
    field: FieldKind,
    rows: usize,
    cols: usize,
    entries: Vec<Scalar>,
}

impl Matrix {
    pub fn zero(field: FieldKind, rows: usize, cols: usize) -> Self {
        Matrix {
            field,
            rows,
            cols,
            entries: vec![Scalar::zero(field); rows * cols],
        }
    }

    pub fn identity(field: FieldKind, n: usize) -> Self {
        let mut m = Matrix::zero(field, n, n);
        for i in 0..n {
            m.set(i, i, Scalar::one(field));
        }
        m
    }

    pub fn from_rows(field: FieldKind, rows: Vec<Vec<Scalar>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        Matrix {
            field,
            rows: r,
            cols: c,
            entries: rows.into_iter().flatten().collect(),
        }
    }

    /// Small-integer constructor, mostly for tests and built-in algebras.
    pub fn from_i64_rows(field: FieldKind, rows: &[&[i64]]) -> Self {
        Matrix::from_rows(
            field,
            rows.iter()
                .map(|r| r.iter().map(|&v| Scalar::from_i64(field, v)).collect())
                .collect(),
        )
    }

    pub fn from_fn(
        field: FieldKind,
        rows: usize,
        cols: usize,
        f: impl Fn(usize, usize) -> Scalar,
    ) -> Self {
        let mut entries = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                entries.push(f(i, j));
            }
        }
        Matrix {
            field,
            rows,
            cols,
            entries,
        }
    }

    pub fn field(&self) -> FieldKind {
        self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn at(&self, i: usize, j: usize) -> &Scalar {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Scalar) {
        self.entries[i * self.cols + j] = v;
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Scalar::is_zero)
    }

    pub fn column(&self, j: usize) -> Vec<Scalar> {
        (0..self.rows).map(|i| self.at(i, j).clone()).collect()
    }

    pub fn row(&self, i: usize) -> Vec<Scalar> {
        (0..self.cols).map(|j| self.at(i, j).clone()).collect()
    }

    pub fn transpose(&self) -> Matrix {
        Matrix::from_fn(self.field, self.cols, self.rows, |i, j| {
            self.at(j, i).clone()
        })
    }

    pub fn scale(&self, c: &Scalar) -> Matrix {
        Matrix::from_fn(self.field, self.rows, self.cols, |i, j| {
            self.at(i, j).mul(c)
        })
    }

    pub fn add(&self, other: &Matrix) -> Matrix {
        assert_eq!(
            (self.rows, self.cols),
            (other.rows, other.cols),
            "shape mismatch in add"
        );
        Matrix::from_fn(self.field, self.rows, self.cols, |i, j| {
            self.at(i, j).add(other.at(i, j))
        })
    }

    pub fn sub(&self, other: &Matrix) -> Matrix {
        self.add(&other.scale(&Scalar::one(self.field).neg()))
    }

    pub fn mul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows, "shape mismatch in mul");
        let mut out = Matrix::zero(self.field, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.at(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.at(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    let v = out.at(i, j).add(&a.mul(b));
                    out.set(i, j, v);
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[Scalar]) -> Vec<Scalar> {
        assert_eq!(self.cols, v.len(), "shape mismatch in mul_vec");
        (0..self.rows)
            .map(|i| {
                let mut acc = Scalar::zero(self.field);
                for j in 0..self.cols {
                    let a = self.at(i, j);
                    if !a.is_zero() && !v[j].is_zero() {
                        acc = acc.add(&a.mul(&v[j]));
                    }
                }
                acc
            })
            .collect()
    }

    /// Horizontal concatenation `[A | B]`.
    pub fn hstack(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.rows, other.rows, "shape mismatch in hstack");
        Matrix::from_fn(self.field, self.rows, self.cols + other.cols, |i, j| {
            if j < self.cols {
                self.at(i, j).clone()
            } else {
                other.at(i, j - self.cols).clone()
            }
        })
    }

    /// Vertical concatenation.
    pub fn vstack(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.cols, "shape mismatch in vstack");
        Matrix::from_fn(self.field, self.rows + other.rows, self.cols, |i, j| {
            if i < self.rows {
                self.at(i, j).clone()
            } else {
                other.at(i - self.rows, j).clone()
            }
        })
    }

    /// Reduced row echelon form together with the pivot column list.
    pub fn rref(&self) -> (Matrix, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut row = 0usize;
        for col in 0..m.cols {
            if row == m.rows {
                break;
            }
            let Some(p) = (row..m.rows).find(|&r| !m.at(r, col).is_zero()) else {
                continue;
            };
            if p != row {
                for j in 0..m.cols {
                    let a = m.at(row, j).clone();
                    let b = m.at(p, j).clone();
                    m.set(row, j, b);
                    m.set(p, j, a);
                }
            }
            let inv = m.at(row, col).inv().expect("pivot is nonzero");
            for j in col..m.cols {
                let v = m.at(row, j).mul(&inv);
                m.set(row, j, v);
            }
            for r in 0..m.rows {
                if r == row || m.at(r, col).is_zero() {
                    continue;
                }
                let factor = m.at(r, col).clone();
                for j in col..m.cols {
                    let v = m.at(r, j).sub(&factor.mul(m.at(row, j)));
                    m.set(r, j, v);
                }
            }
            pivots.push(col);
            row += 1;
        }
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Columns spanning the exact kernel.  `self * col = 0` for every column;
    /// the number of columns is `cols - rank`.
    pub fn kernel_basis(&self) -> Matrix {
        let (r, pivots) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let mut out = Matrix::zero(self.field, self.cols, free.len());
        for (k, &fc) in free.iter().enumerate() {
            out.set(fc, k, Scalar::one(self.field));
            for (prow, &pc) in pivots.iter().enumerate() {
                out.set(pc, k, r.at(prow, fc).neg());
            }
        }
        out
    }

    /// One solution of `self * x = b`, if any.
    pub fn solve(&self, b: &[Scalar]) -> Result<Option<Vec<Scalar>>> {
        if b.len() != self.rows {
            return Err(Error::DimensionMismatch(format!(
                "solve: matrix has {} rows, vector has {} entries",
                self.rows,
                b.len()
            )));
        }
        let rhs = Matrix::from_fn(self.field, self.rows, 1, |i, _| b[i].clone());
        let aug = self.hstack(&rhs);
        let (r, pivots) = aug.rref();
        if pivots.contains(&self.cols) {
            return Ok(None); // pivot in the constant column: inconsistent
        }
        let mut x = vec![Scalar::zero(self.field); self.cols];
        for (prow, &pc) in pivots.iter().enumerate() {
            x[pc] = r.at(prow, self.cols).clone();
        }
        Ok(Some(x))
    }

    /// Kronecker (tensor) product: block `a_ij * B`.
    pub fn kronecker(&self, other: &Matrix) -> Matrix {
        Matrix::from_fn(
            self.field,
            self.rows * other.rows,
            self.cols * other.cols,
            |i, j| {
                let (bi, ii) = (i / other.rows, i % other.rows);
                let (bj, jj) = (j / other.cols, j % other.cols);
                self.at(bi, bj).mul(other.at(ii, jj))
            },
        )
    }

    /// Block diagonal `diag(A, B)`.
    pub fn direct_sum(&self, other: &Matrix) -> Matrix {
        let mut out = Matrix::zero(self.field, self.rows + other.rows, self.cols + other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(i, j, self.at(i, j).clone());
            }
        }
        for i in 0..other.rows {
            for j in 0..other.cols {
                out.set(self.rows + i, self.cols + j, other.at(i, j).clone());
            }
        }
        out
    }

    /// Is `v` in the column span?
    pub fn contains_in_column_span(&self, v: &[Scalar]) -> bool {
        matches!(self.solve(v), Ok(Some(_)))
    }

    /// A matrix whose columns are a basis of the column span of `self`
    /// (the pivot columns of the original matrix).
    pub fn column_span_basis(&self) -> Matrix {
        let (_, pivots) = self.rref();
        Matrix::from_fn(self.field, self.rows, pivots.len(), |i, k| {
            self.at(i, pivots[k]).clone()
        })
    }

    /// Square and invertible?
    pub fn is_invertible(&self) -> bool {
        self.rows == self.cols && self.rank() == self.rows
    }

    pub fn inverse(&self) -> Option<Matrix> {
        if self.rows != self.cols {
            return None;
        }
        let aug = self.hstack(&Matrix::identity(self.field, self.rows));
        let (r, pivots) = aug.rref();
        if pivots.len() != self.rows || pivots.iter().enumerate().any(|(i, &p)| p != i) {
            return None;
        }
        Some(Matrix::from_fn(self.field, self.rows, self.cols, |i, j| {
            r.at(i, self.cols + j).clone()
        }))
    }
}

impl fmt::Display for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols)
                .map(|j| self.at(i, j).to_coeff_string())
                .collect();
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q() -> FieldKind {
        FieldKind::Rational
    }

    #[test]
    fn rref_identity_and_zero() {
        let (r, p) = Matrix::identity(q(), 3).rref();
        assert_eq!(r, Matrix::identity(q(), 3));
        assert_eq!(p, vec![0, 1, 2]);

        let (r, p) = Matrix::zero(q(), 2, 4).rref();
        assert!(r.is_zero());
        assert!(p.is_empty());
    }

    #[test]
    fn rref_rank_one_example() {
        // Hand row-reduction: subtract twice row 0 from row 1.
        let m = Matrix::from_i64_rows(q(), &[&[1, 2], &[2, 4]]);
        let (r, p) = m.rref();
        assert_eq!(r, Matrix::from_i64_rows(q(), &[&[1, 2], &[0, 0]]));
        assert_eq!(p, vec![0]);
    }

    #[test]
    fn kernel_examples() {
        assert_eq!(Matrix::identity(q(), 3).kernel_basis().cols(), 0);

        let z = Matrix::zero(q(), 3, 3);
        assert_eq!(z.kernel_basis(), Matrix::identity(q(), 3));

        // Hand computation: kernel of [[1,2],[2,4]] is spanned by (-2, 1).
        let m = Matrix::from_i64_rows(q(), &[&[1, 2], &[2, 4]]);
        let k = m.kernel_basis();
        assert_eq!(k.cols(), 1);
        let ratio = k.at(0, 0).div(k.at(1, 0)).unwrap();
        assert_eq!(ratio, Scalar::from_i64(q(), -2));
        assert!(m.mul(&k).is_zero());
    }

    #[test]
    fn solve_examples() {
        let id = Matrix::identity(q(), 2);
        let b = vec![Scalar::from_i64(q(), 5), Scalar::from_i64(q(), -7)];
        assert_eq!(id.solve(&b).unwrap().unwrap(), b);

        let z = Matrix::zero(q(), 2, 2);
        assert!(z.solve(&b).unwrap().is_none());

        // Scalar division: 2x = 3 over the rationals.
        let m = Matrix::from_i64_rows(q(), &[&[2]]);
        let x = m.solve(&[Scalar::from_i64(q(), 3)]).unwrap().unwrap();
        assert_eq!(x[0].to_coeff_string(), "3/2");

        assert!(m.solve(&b).is_err());
    }

    #[test]
    fn kronecker_and_direct_sum() {
        let a = Matrix::from_i64_rows(q(), &[&[3]]);
        let b = Matrix::from_i64_rows(q(), &[&[1, 2], &[3, 4]]);
        assert_eq!(a.kronecker(&b), b.scale(&Scalar::from_i64(q(), 3)));

        let sum = Matrix::identity(q(), 2).direct_sum(&Matrix::identity(q(), 3));
        assert_eq!(sum, Matrix::identity(q(), 5));

        // Hand computation: e_12 (x) I_2 has the identity in the upper-right block.
        let e12 = Matrix::from_i64_rows(q(), &[&[0, 1], &[0, 0]]);
        let k = e12.kronecker(&Matrix::identity(q(), 2));
        let expected = Matrix::from_i64_rows(
            q(),
            &[&[0, 0, 1, 0], &[0, 0, 0, 1], &[0, 0, 0, 0], &[0, 0, 0, 0]],
        );
        assert_eq!(k, expected);
    }

    #[test]
    fn inverse_round_trip() {
        let m = Matrix::from_i64_rows(q(), &[&[2, 1], &[1, 1]]);
        let inv = m.inverse().unwrap();
        assert_eq!(m.mul(&inv), Matrix::identity(q(), 2));
        assert!(Matrix::from_i64_rows(q(), &[&[1, 2], &[2, 4]])
            .inverse()
            .is_none());
    }

    #[test]
    fn prime_field_cross_check() {
        let f7 = FieldKind::Prime(7);
        let m = Matrix::from_i64_rows(f7, &[&[1, 2, 3], &[4, 5, 6], &[7, 8, 9]]);
        // Same matrix over Q has rank 2; mod 7 the rank is also 2.
        assert_eq!(m.rank(), 2);
        let k = m.kernel_basis();
        assert!(m.mul(&k).is_zero());
        assert_eq!(k.cols() + m.rank(), m.cols());
    }
}
