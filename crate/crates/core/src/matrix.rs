//! Small dense complex matrices.
//!
//! Representations stay below a few hundred rows, so everything is stored
//! dense and row-major. Arithmetic operators panic on shape mismatch, the
//! same way `nalgebra` does; [`commutator`] is the checked entry point.

use std::ops::{Add, Index, IndexMut, Mul, Sub};

use num_complex::Complex;

use crate::error::{GhaError, Result};
use crate::scalar::Real;

#[derive(Debug, Clone, PartialEq)]
pub struct Matrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<Complex<T>>,
}

impl<T: Real> Matrix<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![Complex::new(T::zero(), T::zero()); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Complex::new(T::one(), T::zero());
        }
        m
    }

    pub fn from_real_diagonal(diag: &[T]) -> Self {
        let mut m = Self::zeros(diag.len(), diag.len());
        for (i, &d) in diag.iter().enumerate() {
            m[(i, i)] = Complex::new(d, T::zero());
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Complex<T>) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
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

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn scale(&self, s: Complex<T>) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&x| x * s).collect(),
        }
    }

    /// Entrywise map of the diagonal, zeros elsewhere.
    pub fn map_diagonal(&self, mut f: impl FnMut(usize, Complex<T>) -> Result<Complex<T>>) -> Result<Self> {
        let n = self.rows.min(self.cols);
        let mut out = Self::zeros(self.rows, self.cols);
        for i in 0..n {
            out[(i, i)] = f(i, self[(i, i)])?;
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[Complex<T>]) -> Vec<Complex<T>> {
        assert_eq!(self.cols, v.len(), "matrix-vector shape mismatch");
        (0..self.rows)
            .map(|i| {
                let row = &self.data[i * self.cols..(i + 1) * self.cols];
                row.iter()
                    .zip(v)
                    .fold(Complex::new(T::zero(), T::zero()), |acc, (&a, &b)| acc + a * b)
            })
            .collect()
    }

    pub fn pow(&self, k: usize) -> Self {
        assert!(self.is_square(), "power of a non-square matrix");
        let mut out = Self::identity(self.rows);
        for _ in 0..k {
            out = &out * self;
        }
        out
    }

    /// Largest entry modulus.
    pub fn max_abs(&self) -> T {
        self.data.iter().fold(T::zero(), |m, x| m.max(x.norm()))
    }

    /// Largest entry modulus over the leading `k x k` block.
    pub fn max_abs_leading(&self, k: usize) -> T {
        let k_r = k.min(self.rows);
        let k_c = k.min(self.cols);
        let mut m = T::zero();
        for i in 0..k_r {
            for j in 0..k_c {
                m = m.max(self[(i, j)].norm());
            }
        }
        m
    }

    /// Exact structural zero test.
    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.re == T::zero() && x.im == T::zero())
    }

    pub fn is_hermitian(&self, tol: T) -> bool {
        self.is_square() && (self - &self.adjoint()).max_abs() <= tol
    }

    pub fn diagonal(&self) -> Vec<Complex<T>> {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).collect()
    }
}

impl<T> Index<(usize, usize)> for Matrix<T> {
    type Output = Complex<T>;

    fn index(&self, (i, j): (usize, usize)) -> &Complex<T> {
        assert!(i < self.rows && j < self.cols, "index ({i}, {j}) out of bounds");
        &self.data[i * self.cols + j]
    }
}

impl<T> IndexMut<(usize, usize)> for Matrix<T> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex<T> {
        assert!(i < self.rows && j < self.cols, "index ({i}, {j}) out of bounds");
        &mut self.data[i * self.cols + j]
    }
}

impl<T: Real> Add for &Matrix<T> {
    type Output = Matrix<T>;

    fn add(self, rhs: &Matrix<T>) -> Matrix<T> {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols), "shape mismatch in add");
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(&a, &b)| a + b).collect(),
        }
    }
}

impl<T: Real> Sub for &Matrix<T> {
    type Output = Matrix<T>;

    fn sub(self, rhs: &Matrix<T>) -> Matrix<T> {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols), "shape mismatch in sub");
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(&a, &b)| a - b).collect(),
        }
    }
}

impl<T: Real> Mul for &Matrix<T> {
    type Output = Matrix<T>;

    fn mul(self, rhs: &Matrix<T>) -> Matrix<T> {
        assert_eq!(self.cols, rhs.rows, "shape mismatch in mul");
        let zero = Complex::new(T::zero(), T::zero());
        let mut out = Matrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.data[i * self.cols + k];
                if a == zero {
                    continue;
                }
                for j in 0..rhs.cols {
                    out.data[i * rhs.cols + j] = out.data[i * rhs.cols + j] + a * rhs.data[k * rhs.cols + j];
                }
            }
        }
        out
    }
}

/// `XY - YX`.
pub fn commutator<T: Real>(x: &Matrix<T>, y: &Matrix<T>) -> Result<Matrix<T>> {
    if !x.is_square() || (x.rows, x.cols) != (y.rows, y.cols) {
        return Err(GhaError::ShapeMismatch(format!(
            "commutator of {}x{} and {}x{}",
            x.rows, x.cols, y.rows, y.cols
        )));
    }
    Ok(&(x * y) - &(y * x))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex<f64> {
        Complex::new(re, im)
    }

    #[test]
    fn identity_commutes() {
        let y = Matrix::from_fn(3, 3, |i, j| c(i as f64, j as f64 * 0.5));
        let z = commutator(&Matrix::identity(3), &y).unwrap();
        assert!(z.is_zero());
    }

    #[test]
    fn shape_mismatch() {
        let a = Matrix::<f64>::zeros(2, 2);
        let b = Matrix::<f64>::zeros(3, 3);
        assert!(matches!(commutator(&a, &b), Err(GhaError::ShapeMismatch(_))));
        let r = Matrix::<f64>::zeros(2, 3);
        assert!(commutator(&r, &r).is_err());
    }

    #[test]
    fn adjoint_and_product() {
        let a = Matrix::from_fn(2, 2, |i, j| c((i + 2 * j) as f64, 1.0));
        let b = a.adjoint();
        assert_eq!(b[(0, 1)], c(1.0, -1.0));
        let p = &a * &Matrix::identity(2);
        assert_eq!(p, a);
        let v = a.mul_vec(&[c(1.0, 0.0), c(0.0, 0.0)]);
        assert_eq!(v, vec![a[(0, 0)], a[(1, 0)]]);
        assert!((&a * &b).is_hermitian(1e-15));
    }

    #[test]
    fn leading_block() {
        let mut m = Matrix::<f64>::zeros(3, 3);
        m[(2, 2)] = c(5.0, 0.0);
        m[(0, 1)] = c(0.0, -2.0);
        assert_eq!(m.max_abs(), 5.0);
        assert_eq!(m.max_abs_leading(2), 2.0);
    }
}
