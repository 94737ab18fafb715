//! Dense complex matrices between spinor-type spaces.

use std::ops::{Add, Mul, Neg, Sub};

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::{GaussianRational, Scalar, ScalarMode};

/// Row-major dense matrix over a [`Scalar`] field.
#[derive(Clone, Debug, PartialEq)]
pub struct Matrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

pub type ExactMatrix = Matrix<GaussianRational>;
pub type FloatMatrix = Matrix<Complex64>;

impl<T: Scalar> Matrix<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![T::zero(); rows * cols],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim, dim);
        for i in 0..dim {
            m.set(i, i, T::one());
        }
        m
    }

    pub fn from_row_major(rows: usize, cols: usize, data: Vec<T>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::ShapeMismatch(format!(
                "{} entries for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        Ok(Self { rows, cols, data })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn entries(&self) -> &[T] {
        &self.data
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> &T {
        &self.data[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: T) {
        self.data[r * self.cols + c] = v;
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Scalar::is_zero)
    }

    pub fn scale(&self, s: &T) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|v| s.clone() * v.clone()).collect(),
        }
    }

    /// Conjugate transpose with respect to the standard Hermitian product on blade bases.
    pub fn adjoint(&self) -> Self {
        let mut out = Self::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                out.set(c, r, self.get(r, c).conj());
            }
        }
        out
    }

    pub fn try_mul(&self, rhs: &Self) -> Result<Self> {
        if self.cols != rhs.rows {
            return Err(Error::ShapeMismatch(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        let mut out = Self::zeros(self.rows, rhs.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(r, k);
                if a.is_zero() {
                    continue;
                }
                for c in 0..rhs.cols {
                    let b = rhs.get(k, c);
                    if b.is_zero() {
                        continue;
                    }
                    let idx = r * out.cols + c;
                    out.data[idx] = out.data[idx].clone() + a.clone() * b.clone();
                }
            }
        }
        Ok(out)
    }

    pub fn try_add(&self, rhs: &Self) -> Result<Self> {
        self.zip(rhs, |a, b| a + b)
    }

    pub fn try_sub(&self, rhs: &Self) -> Result<Self> {
        self.zip(rhs, |a, b| a - b)
    }

    fn zip(&self, rhs: &Self, f: impl Fn(T, T) -> T) -> Result<Self> {
        if self.shape() != rhs.shape() {
            return Err(Error::ShapeMismatch(format!(
                "{:?} vs {:?}",
                self.shape(),
                rhs.shape()
            )));
        }
        Ok(Self {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| f(a.clone(), b.clone()))
                .collect(),
        })
    }

    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> Self {
        let mut out = Self::zeros(rows.len(), cols.len());
        for (i, &r) in rows.iter().enumerate() {
            for (j, &c) in cols.iter().enumerate() {
                out.set(i, j, self.get(r, c).clone());
            }
        }
        out
    }

    /// Copy `block` into `self` with its top-left corner at `(row, col)`.
    pub fn set_block(&mut self, row: usize, col: usize, block: &Self) {
        assert!(row + block.rows <= self.rows && col + block.cols <= self.cols);
        for r in 0..block.rows {
            for c in 0..block.cols {
                self.set(row + r, col + c, block.get(r, c).clone());
            }
        }
    }

    pub fn block(&self, row: usize, col: usize, rows: usize, cols: usize) -> Self {
        let r: Vec<usize> = (row..row + rows).collect();
        let c: Vec<usize> = (col..col + cols).collect();
        self.submatrix(&r, &c)
    }

    /// Matrix-vector product.
    pub fn apply(&self, v: &[T]) -> Vec<T> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|r| {
                let mut acc = T::zero();
                for (c, vc) in v.iter().enumerate() {
                    acc = acc + self.get(r, c).clone() * vc.clone();
                }
                acc
            })
            .collect()
    }

    pub fn mode(&self) -> ScalarMode {
        T::MODE
    }
}

impl ExactMatrix {
    pub fn to_float(&self) -> FloatMatrix {
        FloatMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(GaussianRational::to_complex).collect(),
        }
    }
}

impl FloatMatrix {
    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn to_nalgebra(&self) -> DMatrix<Complex64> {
        DMatrix::from_row_slice(self.rows, self.cols, &self.data)
    }

    /// Singular values in descending order.
    pub fn singular_values(&self) -> Vec<f64> {
        if self.rows == 0 || self.cols == 0 {
            return Vec::new();
        }
        let mut sv: Vec<f64> = self
            .to_nalgebra()
            .singular_values()
            .iter()
            .copied()
            .collect();
        sv.sort_by(|a, b| b.total_cmp(a));
        sv
    }

    /// Numerical rank: singular values above `rtol` times the largest.
    pub fn rank(&self, rtol: f64) -> usize {
        let sv = self.singular_values();
        let Some(&top) = sv.first() else { return 0 };
        if top == 0.0 {
            return 0;
        }
        sv.iter().filter(|&&s| s > rtol * top).count()
    }
}

macro_rules! forward_binop {
    ($tr:ident, $method:ident, $inner:ident) => {
        impl<T: Scalar> $tr for &Matrix<T> {
            type Output = Matrix<T>;
            fn $method(self, rhs: Self) -> Matrix<T> {
                self.$inner(rhs).expect("matrix shape mismatch")
            }
        }
    };
}

forward_binop!(Mul, mul, try_mul);
forward_binop!(Add, add, try_add);
forward_binop!(Sub, sub, try_sub);

impl<T: Scalar> Neg for &Matrix<T> {
    type Output = Matrix<T>;
    fn neg(self) -> Matrix<T> {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|v| -v.clone()).collect(),
        }
    }
}

/// Report encoding of an exact matrix.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExactMatrixJson {
    pub rows: usize,
    pub cols: usize,
    /// Row-major `[re_num, re_den, im_num, im_den]` quadruples.
    pub entries: Vec<[i64; 4]>,
}

impl From<&ExactMatrix> for ExactMatrixJson {
    fn from(m: &ExactMatrix) -> Self {
        Self {
            rows: m.rows,
            cols: m.cols,
            entries: m.data.iter().map(GaussianRational::to_quad).collect(),
        }
    }
}

impl TryFrom<&ExactMatrixJson> for ExactMatrix {
    type Error = Error;

    fn try_from(j: &ExactMatrixJson) -> Result<Self> {
        let data = j
            .entries
            .iter()
            .map(|q| {
                GaussianRational::from_quad(*q)
                    .ok_or_else(|| Error::Format(format!("zero denominator in {q:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::from_row_major(j.rows, j.cols, data)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(re: i64, im: i64) -> GaussianRational {
        GaussianRational::from_ints(re, im)
    }

    #[test]
    fn product_and_adjoint() {
        let a = ExactMatrix::from_row_major(2, 2, vec![g(1, 0), g(0, 1), g(0, 0), g(2, -1)]).unwrap();
        let b = ExactMatrix::from_row_major(2, 1, vec![g(1, 1), g(3, 0)]).unwrap();
        let ab = &a * &b;
        assert_eq!(ab.entries(), &[g(1, 4), g(6, -3)]);
        // (AB)* = B*A*
        assert_eq!(ab.adjoint(), &b.adjoint() * &a.adjoint());
    }

    #[test]
    fn shape_mismatch_is_an_error() {
        let a = ExactMatrix::zeros(2, 3);
        assert!(a.try_mul(&a).is_err());
        assert!(a.try_add(&ExactMatrix::zeros(3, 2)).is_err());
    }

    #[test]
    fn rank_of_projector() {
        let mut m = FloatMatrix::zeros(3, 3);
        m.set(0, 0, Complex64::new(1.0, 0.0));
        m.set(1, 1, Complex64::new(0.0, 2.0));
        assert_eq!(m.rank(1e-10), 2);
        assert_eq!(FloatMatrix::zeros(2, 2).rank(1e-10), 0);
    }

    #[test]
    fn json_round_trip() {
        let a = ExactMatrix::from_row_major(1, 3, vec![g(0, -1), g(1, 0), g(0, 0)]).unwrap();
        let j = ExactMatrixJson::from(&a);
        assert_eq!(j.entries[0], [0, 1, -1, 1]);
        assert_eq!(ExactMatrix::try_from(&j).unwrap(), a);
    }
}
