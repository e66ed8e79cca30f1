//! Dense square matrices over `f64` or `Complex64`, sized for oracle work.

use std::fmt::{self, Write as _};
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;

/// Scalar field used by [`Matrix`].
pub trait Scalar:
    Copy
    + PartialEq
    + fmt::Debug
    + Send
    + Sync
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
    + 'static
{
    fn zero() -> Self;
    fn one() -> Self;
    fn from_real(x: f64) -> Self;
    fn modulus(self) -> f64;
    fn conj(self) -> Self;
    /// Formats the value for text dumps (17 significant digits).
    fn write_text(self, out: &mut String);
}

impl Scalar for f64 {
    fn zero() -> Self {
        0.0
    }
    fn one() -> Self {
        1.0
    }
    fn from_real(x: f64) -> Self {
        x
    }
    fn modulus(self) -> f64 {
        self.abs()
    }
    fn conj(self) -> Self {
        self
    }
    fn write_text(self, out: &mut String) {
        let _ = write!(out, "{}", fmt_real(self));
    }
}

impl Scalar for Complex64 {
    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn one() -> Self {
        Complex64::new(1.0, 0.0)
    }
    fn from_real(x: f64) -> Self {
        Complex64::new(x, 0.0)
    }
    fn modulus(self) -> f64 {
        self.norm()
    }
    fn conj(self) -> Self {
        Complex64::conj(&self)
    }
    fn write_text(self, out: &mut String) {
        let _ = write!(out, "{} {}", fmt_real(self.re), fmt_real(self.im));
    }
}

/// Fixed 17-significant-digit formatting used by every text output.
pub fn fmt_real(x: f64) -> String {
    let x = if x == 0.0 { 0.0 } else { x };
    format!("{x:.16e}")
}

#[derive(Clone, Debug, PartialEq)]
pub struct Matrix<T> {
    dim: usize,
    data: Vec<T>,
}

pub type RealMatrix = Matrix<f64>;
pub type ComplexMatrix = Matrix<Complex64>;

impl<T: Scalar> Matrix<T> {
    pub fn zeros(dim: usize) -> Self {
        Self {
            dim,
            data: vec![T::zero(); dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m.data[i * dim + i] = T::one();
        }
        m
    }

    pub fn from_fn(dim: usize, f: impl Fn(usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(dim * dim);
        for i in 0..dim {
            for j in 0..dim {
                data.push(f(i, j));
            }
        }
        Self { dim, data }
    }

    /// Builds a matrix whose column `j` is `cols[j]`.
    pub fn from_columns(cols: &[Vec<T>]) -> Self {
        let dim = cols.len();
        Self::from_fn(dim, |i, j| cols[j][i])
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, i: usize, j: usize) -> T {
        self.data[i * self.dim + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: T) {
        self.data[i * self.dim + j] = v;
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.dim..(i + 1) * self.dim]
    }

    pub fn column(&self, j: usize) -> Vec<T> {
        (0..self.dim).map(|i| self.get(i, j)).collect()
    }

    pub fn matmul(&self, rhs: &Self) -> Self {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch");
        let n = self.dim;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self.data[i * n + k];
                if a == T::zero() {
                    continue;
                }
                let row = &rhs.data[k * n..(k + 1) * n];
                let dst = &mut out.data[i * n..(i + 1) * n];
                for (d, &b) in dst.iter_mut().zip(row) {
                    *d = *d + a * b;
                }
            }
        }
        out
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.dim, |i, j| self.get(j, i).conj())
    }

    pub fn apply(&self, v: &[T]) -> Vec<T> {
        assert_eq!(v.len(), self.dim);
        (0..self.dim)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .fold(T::zero(), |acc, (&a, &b)| acc + a * b)
            })
            .collect()
    }

    pub fn scale(&self, s: T) -> Self {
        Self {
            dim: self.dim,
            data: self.data.iter().map(|&x| x * s).collect(),
        }
    }

    pub fn add(&self, rhs: &Self) -> Self {
        assert_eq!(self.dim, rhs.dim);
        Self {
            dim: self.dim,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(&a, &b)| a + b)
                .collect(),
        }
    }

    pub fn max_abs_diff(&self, rhs: &Self) -> f64 {
        assert_eq!(self.dim, rhs.dim);
        self.data
            .iter()
            .zip(&rhs.data)
            .map(|(&a, &b)| (a - b).modulus())
            .fold(0.0, f64::max)
    }

    /// `max |(A^dagger A - I)_{ij}|`
    pub fn unitarity_residual(&self) -> f64 {
        self.adjoint()
            .matmul(self)
            .max_abs_diff(&Self::identity(self.dim))
    }

    /// Block diagonal `self (+) rhs`.
    pub fn direct_sum(&self, rhs: &Self) -> Self {
        let n = self.dim + rhs.dim;
        let mut out = Self::zeros(n);
        for i in 0..self.dim {
            for j in 0..self.dim {
                out.set(i, j, self.get(i, j));
            }
        }
        for i in 0..rhs.dim {
            for j in 0..rhs.dim {
                out.set(self.dim + i, self.dim + j, rhs.get(i, j));
            }
        }
        out
    }

    /// `self (+) I` padded up to dimension `dim`.
    pub fn pad_identity(&self, dim: usize) -> Self {
        assert!(dim >= self.dim);
        self.direct_sum(&Self::identity(dim - self.dim))
    }

    /// `I_{copies} (x) self`: `copies` diagonal copies.
    pub fn repeat_diagonal(&self, copies: usize) -> Self {
        let n = self.dim * copies;
        let mut out = Self::zeros(n);
        for c in 0..copies {
            let o = c * self.dim;
            for i in 0..self.dim {
                for j in 0..self.dim {
                    out.set(o + i, o + j, self.get(i, j));
                }
            }
        }
        out
    }

    /// The `size x size` block starting at `(offset, offset)`.
    pub fn principal_block(&self, offset: usize, size: usize) -> Self {
        Self::from_fn(size, |i, j| self.get(offset + i, offset + j))
    }

    /// Text dump: one row per line, entries space separated, 17 significant digits.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for i in 0..self.dim {
            for (j, &v) in self.row(i).iter().enumerate() {
                if j > 0 {
                    out.push(' ');
                }
                v.write_text(&mut out);
            }
            out.push('\n');
        }
        out
    }
}

impl RealMatrix {
    pub fn to_complex(&self) -> ComplexMatrix {
        ComplexMatrix {
            dim: self.dim,
            data: self.data.iter().map(|&x| Complex64::new(x, 0.0)).collect(),
        }
    }

    /// True when every entry is 0 or 1 with exactly one 1 per row and column.
    pub fn is_permutation(&self) -> bool {
        let n = self.dim;
        let binary = self.data.iter().all(|&x| x == 0.0 || x == 1.0);
        binary
            && (0..n).all(|i| self.row(i).iter().sum::<f64>() == 1.0)
            && (0..n).all(|j| (0..n).map(|i| self.get(i, j)).sum::<f64>() == 1.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_is_unitary_and_permutation() {
        let i = RealMatrix::identity(4);
        assert_eq!(i.unitarity_residual(), 0.0);
        assert!(i.is_permutation());
        assert_eq!(i.matmul(&i), i);
    }

    #[test]
    fn direct_sum_and_repeat() {
        let a = RealMatrix::from_fn(2, |i, j| (i * 2 + j) as f64);
        let d = a.direct_sum(&RealMatrix::identity(2));
        assert_eq!(d.get(1, 1), 3.0);
        assert_eq!(d.get(3, 3), 1.0);
        assert_eq!(d.get(0, 3), 0.0);
        let r = a.repeat_diagonal(2);
        assert_eq!(r.get(2, 3), 1.0);
        assert_eq!(r.get(0, 2), 0.0);
    }

    #[test]
    fn text_dump_uses_seventeen_digits() {
        let m = RealMatrix::from_fn(1, |_, _| 1.0 / 3.0);
        assert_eq!(m.to_text(), "3.3333333333333331e-1\n");
    }
}
