//! Dense complex matrices sized for this crate's workloads.
//!
//! Storage is column-major `Vec<Complex64>`; products route through
//! `matrixmultiply::zgemm`, which carries the bulk of the simulator's flops
//! (sensing-matrix assembly and residual correlations). Factorizations live
//! in [`lstsq`]; anything smaller (Cholesky for ZF, SVD fallback) bridges to
//! nalgebra on the fly.

mod lstsq;

pub use lstsq::{min_norm_lstsq, LsSolution};

use matrixmultiply::{zgemm, CGemmOption};
use num_complex::Complex64;

pub const C_ZERO: Complex64 = Complex64::new(0.0, 0.0);
pub const C_ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Column-major complex matrix.
#[derive(Clone, PartialEq)]
pub struct CMat {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

impl std::fmt::Debug for CMat {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "CMat({}x{})", self.rows, self.cols)
    }
}

impl CMat {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        CMat {
            rows,
            cols,
            data: vec![C_ZERO; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = CMat::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = C_ONE;
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for j in 0..cols {
            for i in 0..rows {
                data.push(f(i, j));
            }
        }
        CMat { rows, cols, data }
    }

    /// Build from a column-major slice (length must equal `rows * cols`).
    pub fn from_column_slice(rows: usize, cols: usize, data: &[Complex64]) -> Self {
        assert_eq!(data.len(), rows * cols, "column slice length mismatch");
        CMat {
            rows,
            cols,
            data: data.to_vec(),
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn data(&self) -> &[Complex64] {
        &self.data
    }

    /// Split the backing storage at a flat offset; lets a factorization
    /// borrow one column immutably while mutating a later one.
    pub(crate) fn data_split_mut(
        &mut self,
        at: usize,
    ) -> (&mut [Complex64], &mut [Complex64]) {
        self.data.split_at_mut(at)
    }

    pub fn col(&self, j: usize) -> &[Complex64] {
        debug_assert!(j < self.cols);
        &self.data[j * self.rows..(j + 1) * self.rows]
    }

    pub fn col_mut(&mut self, j: usize) -> &mut [Complex64] {
        debug_assert!(j < self.cols);
        let r = self.rows;
        &mut self.data[j * r..(j + 1) * r]
    }

    pub fn set_col(&mut self, j: usize, v: &[Complex64]) {
        self.col_mut(j).copy_from_slice(v);
    }

    /// Gather a subset of columns into a fresh matrix (order preserved).
    pub fn take_cols(&self, idx: &[usize]) -> CMat {
        let mut out = CMat::zeros(self.rows, idx.len());
        for (dst, &j) in idx.iter().enumerate() {
            out.set_col(dst, self.col(j));
        }
        out
    }

    /// Entry-wise conjugate.
    pub fn conj(&self) -> CMat {
        CMat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|z| z.conj()).collect(),
        }
    }

    /// `self * other`.
    pub fn mul(&self, other: &CMat) -> CMat {
        assert_eq!(self.cols, other.rows, "mul dimension mismatch");
        let mut out = CMat::zeros(self.rows, other.cols);
        if self.rows == 0 || other.cols == 0 || self.cols == 0 {
            return out;
        }
        unsafe {
            zgemm(
                CGemmOption::Standard,
                CGemmOption::Standard,
                self.rows,
                self.cols,
                other.cols,
                [1.0, 0.0],
                self.data.as_ptr() as *const [f64; 2],
                1,
                self.rows as isize,
                other.data.as_ptr() as *const [f64; 2],
                1,
                other.rows as isize,
                [0.0, 0.0],
                out.data.as_mut_ptr() as *mut [f64; 2],
                1,
                out.rows as isize,
            );
        }
        out
    }

    /// `self^T * other` without materializing the transpose.
    ///
    /// The usual caller holds a pre-conjugated copy, making this `A^H B`.
    pub fn t_mul(&self, other: &CMat) -> CMat {
        assert_eq!(self.rows, other.rows, "t_mul dimension mismatch");
        let mut out = CMat::zeros(self.cols, other.cols);
        if self.cols == 0 || other.cols == 0 || self.rows == 0 {
            return out;
        }
        unsafe {
            zgemm(
                CGemmOption::Standard,
                CGemmOption::Standard,
                self.cols,
                self.rows,
                other.cols,
                [1.0, 0.0],
                self.data.as_ptr() as *const [f64; 2],
                self.rows as isize,
                1,
                other.data.as_ptr() as *const [f64; 2],
                1,
                other.rows as isize,
                [0.0, 0.0],
                out.data.as_mut_ptr() as *mut [f64; 2],
                1,
                out.rows as isize,
            );
        }
        out
    }

    /// `self^H * other` (conjugates a copy of `self` first; prefer caching
    /// the conjugate and calling [`CMat::t_mul`] in hot loops).
    pub fn herm_mul(&self, other: &CMat) -> CMat {
        self.conj().t_mul(other)
    }

    /// `self * other^H`.
    pub fn mul_herm(&self, other: &CMat) -> CMat {
        let oc = other.conj();
        assert_eq!(self.cols, oc.cols, "mul_herm dimension mismatch");
        let mut out = CMat::zeros(self.rows, oc.rows);
        if self.rows == 0 || oc.rows == 0 || self.cols == 0 {
            return out;
        }
        unsafe {
            zgemm(
                CGemmOption::Standard,
                CGemmOption::Standard,
                self.rows,
                self.cols,
                oc.rows,
                [1.0, 0.0],
                self.data.as_ptr() as *const [f64; 2],
                1,
                self.rows as isize,
                oc.data.as_ptr() as *const [f64; 2],
                oc.rows as isize,
                1,
                [0.0, 0.0],
                out.data.as_mut_ptr() as *mut [f64; 2],
                1,
                out.rows as isize,
            );
        }
        out
    }

    pub fn scale(&mut self, a: Complex64) {
        for z in &mut self.data {
            *z *= a;
        }
    }

    pub fn sub(&self, other: &CMat) -> CMat {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        CMat {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }

    pub fn frob_norm_sq(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum()
    }

    pub fn frob_norm(&self) -> f64 {
        self.frob_norm_sq().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }
}

impl std::ops::Index<(usize, usize)> for CMat {
    type Output = Complex64;
    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[j * self.rows + i]
    }
}

impl std::ops::IndexMut<(usize, usize)> for CMat {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[j * self.rows + i]
    }
}

/// `sum_i conj(a[i]) * b[i]`.
pub fn dot_conj(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    debug_assert_eq!(a.len(), b.len());
    let mut s = C_ZERO;
    for (x, y) in a.iter().zip(b) {
        s += x.conj() * y;
    }
    s
}

/// `y -= alpha * x`.
pub fn axpy_neg(y: &mut [Complex64], alpha: Complex64, x: &[Complex64]) {
    debug_assert_eq!(y.len(), x.len());
    for (yi, xi) in y.iter_mut().zip(x) {
        *yi -= alpha * xi;
    }
}

pub fn norm_sq(v: &[Complex64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::prelude::*;
    use rand_chacha::ChaCha8Rng;

    fn randmat(r: usize, c: usize, rng: &mut impl Rng) -> CMat {
        CMat::from_fn(r, c, |_, _| {
            Complex64::new(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5)
        })
    }

    fn naive_mul(a: &CMat, b: &CMat) -> CMat {
        let mut out = CMat::zeros(a.rows(), b.cols());
        for j in 0..b.cols() {
            for i in 0..a.rows() {
                let mut s = C_ZERO;
                for k in 0..a.cols() {
                    s += a[(i, k)] * b[(k, j)];
                }
                out[(i, j)] = s;
            }
        }
        out
    }

    #[test]
    fn mul_matches_naive() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for &(m, k, n) in &[(3usize, 4usize, 5usize), (1, 1, 1), (7, 2, 9)] {
            let a = randmat(m, k, &mut rng);
            let b = randmat(k, n, &mut rng);
            let c = a.mul(&b);
            let d = naive_mul(&a, &b);
            assert!(c.sub(&d).max_abs() < 1e-12);
        }
    }

    #[test]
    fn herm_mul_matches_naive() {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        let a = randmat(6, 4, &mut rng);
        let b = randmat(6, 3, &mut rng);
        let c = a.herm_mul(&b);
        for j in 0..3 {
            for i in 0..4 {
                let s = dot_conj(a.col(i), b.col(j));
                assert!((c[(i, j)] - s).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn mul_herm_matches_naive() {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        let a = randmat(5, 4, &mut rng);
        let b = randmat(6, 4, &mut rng);
        let c = a.mul_herm(&b);
        for j in 0..6 {
            for i in 0..5 {
                let mut s = C_ZERO;
                for k in 0..4 {
                    s += a[(i, k)] * b[(j, k)].conj();
                }
                assert!((c[(i, j)] - s).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn take_cols_gathers() {
        let mut rng = ChaCha8Rng::seed_from_u64(14);
        let a = randmat(4, 6, &mut rng);
        let sub = a.take_cols(&[5, 0, 2]);
        assert_eq!(sub.cols(), 3);
        assert_eq!(sub.col(0), a.col(5));
        assert_eq!(sub.col(1), a.col(0));
        assert_eq!(sub.col(2), a.col(2));
    }
}
