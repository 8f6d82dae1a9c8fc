//! Minimum-norm least squares with rank detection.
//!
//! The fast path is a complex Householder QR; a diagonal of `R` falling below
//! `RANK_RTOL` times the largest diagonal (or an under-determined shape)
//! reroutes the solve through an SVD pseudo-inverse, which also yields the
//! minimum-norm solution for rank-deficient systems.

use super::{dot_conj, CMat, C_ZERO};
use nalgebra::{Complex, DMatrix};
use num_complex::Complex64;

/// Relative tolerance for rank decisions, measured against the largest
/// singular value (SVD path) or largest `|R_jj|` (QR trigger).
pub const RANK_RTOL: f64 = 1e-10;

#[derive(Debug, Clone)]
pub struct LsSolution {
    /// `cols(a) x cols(b)` coefficient matrix.
    pub x: CMat,
    /// Numerical rank used by the solve.
    pub rank: usize,
    /// True when the system was rank-deficient and the SVD pseudo-inverse
    /// produced a minimum-norm solution.
    pub degenerate: bool,
}

/// Solve `min ||b - a x||_F` column-wise, returning the minimum-norm `x`.
pub fn min_norm_lstsq(a: &CMat, b: &CMat) -> LsSolution {
    assert_eq!(a.rows(), b.rows(), "lstsq dimension mismatch");
    if a.cols() == 0 {
        return LsSolution {
            x: CMat::zeros(0, b.cols()),
            rank: 0,
            degenerate: false,
        };
    }
    if a.rows() >= a.cols() {
        if let Some(sol) = qr_lstsq(a, b) {
            return sol;
        }
    }
    svd_lstsq(a, b)
}

/// Apply the reflector stored in rows `j..m` of `v` to the slice `y` (same
/// row range): `y -= tau * (v^H y) * v`.
fn apply_reflector(v: &[Complex64], tau: f64, y: &mut [Complex64]) {
    let w = dot_conj(v, y) * tau;
    for (yi, vi) in y.iter_mut().zip(v) {
        *yi -= w * vi;
    }
}

/// Householder QR solve; `None` when a rank deficiency is detected.
fn qr_lstsq(a: &CMat, b: &CMat) -> Option<LsSolution> {
    let (m, n) = (a.rows(), a.cols());
    let mut h = a.clone(); // v_j in rows j..m of column j; R strictly above diag
    let mut c = b.clone(); // becomes Q^H b
    let mut alphas = vec![C_ZERO; n]; // R diagonal
    let mut taus = vec![0.0f64; n];

    for j in 0..n {
        {
            let col = h.col_mut(j);
            let x0 = col[j];
            let xnorm_sq: f64 = col[j..].iter().map(|z| z.norm_sqr()).sum();
            if xnorm_sq == 0.0 {
                alphas[j] = C_ZERO;
                taus[j] = 0.0;
                continue;
            }
            let xnorm = xnorm_sq.sqrt();
            let phase = if x0.norm() == 0.0 {
                Complex64::new(1.0, 0.0)
            } else {
                x0 / x0.norm()
            };
            let alpha = -phase * xnorm;
            col[j] = x0 - alpha;
            let vsq: f64 = col[j..].iter().map(|z| z.norm_sqr()).sum();
            alphas[j] = alpha;
            taus[j] = 2.0 / vsq;
        }
        let tau = taus[j];
        if tau == 0.0 {
            continue;
        }
        // Later columns of h: split the storage so v (col j) and the target
        // column can be borrowed simultaneously.
        for k in j + 1..n {
            let (lo, hi) = h.data_split_mut(k * m);
            let v = &lo[j * m + j..(j + 1) * m];
            apply_reflector(v, tau, &mut hi[j..m]);
        }
        for k in 0..c.cols() {
            let v = &h.col(j)[j..];
            apply_reflector(v, tau, &mut c.col_mut(k)[j..]);
        }
    }

    let dmax = alphas.iter().map(|a| a.norm()).fold(0.0, f64::max);
    if dmax == 0.0 || alphas.iter().any(|a| a.norm() <= RANK_RTOL * dmax) {
        return None;
    }

    // Back substitution: R x = (Q^H b)[0..n].
    let mut x = CMat::zeros(n, b.cols());
    for rhs in 0..b.cols() {
        let mut sol = vec![C_ZERO; n];
        {
            let cc = c.col(rhs);
            for i in (0..n).rev() {
                let mut s = cc[i];
                for k in i + 1..n {
                    s -= h[(i, k)] * sol[k];
                }
                sol[i] = s / alphas[i];
            }
        }
        x.set_col(rhs, &sol);
    }
    Some(LsSolution {
        x,
        rank: n,
        degenerate: false,
    })
}

/// SVD pseudo-inverse solve (minimum-norm for any shape/rank).
fn svd_lstsq(a: &CMat, b: &CMat) -> LsSolution {
    let (m, n) = (a.rows(), a.cols());
    let na = DMatrix::<Complex<f64>>::from_column_slice(m, n, a.data());
    let nb = DMatrix::<Complex<f64>>::from_column_slice(m, b.cols(), b.data());
    let svd = na.svd(true, true);
    let u = svd.u.as_ref().expect("svd with u");
    let vt = svd.v_t.as_ref().expect("svd with v_t");
    let smax = svd.singular_values.iter().cloned().fold(0.0, f64::max);
    let thresh = RANK_RTOL * smax;
    let mut rank = 0usize;

    // x = V Σ⁺ U^H b
    let utb = u.adjoint() * &nb;
    let k = svd.singular_values.len();
    let mut scaled = DMatrix::<Complex<f64>>::zeros(k, b.cols());
    for i in 0..k {
        let s = svd.singular_values[i];
        if s > thresh && s > 0.0 {
            rank += 1;
            for j in 0..b.cols() {
                scaled[(i, j)] = utb[(i, j)] / Complex::new(s, 0.0);
            }
        }
    }
    let xn = vt.adjoint() * scaled;
    let mut x = CMat::zeros(n, b.cols());
    for j in 0..b.cols() {
        for i in 0..n {
            x[(i, j)] = Complex64::new(xn[(i, j)].re, xn[(i, j)].im);
        }
    }
    LsSolution {
        x,
        rank,
        degenerate: rank < n.min(m),
    }
}
