//! Dieudonné determinant `D : GL(n,ℍ) → ℝ₊`.
//!
//! Row reduction to upper-triangular form with left row operations
//! `row_r ← row_r − (a_rk a_kk⁻¹) row_k`, which are left multiplications by
//! unipotent matrices and leave `D` unchanged. Row swaps are invisible to
//! `D` since it lands in `ℝ₊`. The result is then `Π |u_kk|`, the block rule
//! `D([[q, H], [0, B]]) = |q| · D(B)` applied recursively.

use crate::error::{Error, Result};
use crate::qlinalg::QMatrix;
use crate::quat::Quaternion;

/// Pivots below `DEFAULT_DET_TOL · max|a_ij|` count as zero.
pub const DEFAULT_DET_TOL: f64 = 1e-10;

pub fn dieudonne_det(a: &QMatrix) -> Result<f64> {
    dieudonne_det_with_tol(a, DEFAULT_DET_TOL)
}

/// `tol` is relative to the largest entry magnitude of `a`. Singular input
/// returns `0.0`.
pub fn dieudonne_det_with_tol(a: &QMatrix, tol: f64) -> Result<f64> {
    let n = a.require_square()?;
    if !(tol >= 0.0) {
        return Err(Error::Precondition(format!("tolerance {tol} must be >= 0")));
    }
    let scale = a.max_abs();
    if scale == 0.0 {
        return Ok(0.0);
    }
    let threshold = tol * scale;
    let mut work = a.clone();
    let mut det = 1.0;
    for k in 0..n {
        // partial pivoting, lowest row index wins ties
        let mut p = k;
        let mut best = work[(k, k)].norm();
        for r in k + 1..n {
            let v = work[(r, k)].norm();
            if v > best {
                best = v;
                p = r;
            }
        }
        if best == 0.0 || best < threshold {
            return Ok(0.0);
        }
        work.swap_rows(k, p);
        let pivot = work[(k, k)];
        det *= best;
        let inv = pivot.inverse().expect("non-zero pivot");
        for r in k + 1..n {
            let m = work[(r, k)] * inv;
            if m == Quaternion::ZERO {
                continue;
            }
            work[(r, k)] = Quaternion::ZERO;
            for c in k + 1..n {
                let t = m * work[(k, c)];
                work[(r, c)] -= t;
            }
        }
    }
    Ok(det)
}
