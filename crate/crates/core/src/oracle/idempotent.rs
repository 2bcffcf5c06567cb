//! The index idempotent of an approximate inverse pair.
//!
//! From `a` and an approximate inverse `b` (so that `1 - ab` and `1 - ba`
//! are small or of finite rank), the block matrix
//!
//! `p = [ 2ab - (ab)^2    a(2 - ba)(1 - ba) ]`
//! `    [ (1 - ba) b      (1 - ba)^2        ]`
//!
//! is an idempotent whose class difference against `diag(1, 0)` encodes the
//! index of `a`; concretely `trace(p) - k_block` with `k_block` the size of
//! the first block. `a` may be rectangular (domain and codomain truncated to
//! different windows) and must be for the trace to see a nonzero index:
//! square sections always balance `tr(ab) = tr(ba)`.

use crate::error::{Error, Result};
use crate::linalg::{self, CMat};
use ndarray::Array2;
use num_complex::Complex64;

/// Idempotency defect tolerated before the trace is read off.
pub const IDEMPOTENT_TOL: f64 = 1e-8;

/// Build the index idempotent of the pair (a, b); `a` is rows-by-cols,
/// `b` must be cols-by-rows. The result has size (rows + cols)^2.
pub fn index_idempotent(a: &CMat, b: &CMat) -> Result<CMat> {
    let (rows, cols) = a.dim();
    if b.dim() != (cols, rows) {
        return Err(Error::SizeMismatch {
            a_rows: rows,
            a_cols: cols,
            b_rows: b.dim().0,
            b_cols: b.dim().1,
        });
    }
    let ab = linalg::matmul(a, b);
    let ba = linalg::matmul(b, a);
    let id_r = linalg::identity(rows);
    let id_c = linalg::identity(cols);

    // 2ab - (ab)^2
    let mut tl = linalg::matmul(&ab, &ab);
    tl.zip_mut_with(&ab, |t, v| *t = 2.0 * v - *t);
    // (1 - ba)
    let mut one_minus_ba = ba.clone();
    one_minus_ba.zip_mut_with(&id_c, |t, v| *t = v - *t);
    // (2 - ba)
    let mut two_minus_ba = ba;
    two_minus_ba.zip_mut_with(&id_c, |t, v| *t = 2.0 * v - *t);
    let tr = linalg::matmul(&linalg::matmul(a, &two_minus_ba), &one_minus_ba);
    let bl = linalg::matmul(&one_minus_ba, b);
    let br = linalg::matmul(&one_minus_ba, &one_minus_ba);
    let _ = id_r;

    let n = rows + cols;
    let mut p = Array2::zeros((n, n));
    for i in 0..rows {
        for j in 0..rows {
            p[(i, j)] = tl[(i, j)];
        }
        for j in 0..cols {
            p[(i, rows + j)] = tr[(i, j)];
        }
    }
    for i in 0..cols {
        for j in 0..rows {
            p[(rows + i, j)] = bl[(i, j)];
        }
        for j in 0..cols {
            p[(rows + i, rows + j)] = br[(i, j)];
        }
    }
    Ok(p)
}

/// `trace(p) - k_block` after verifying `p` is an idempotent to within
/// `IDEMPOTENT_TOL` in Frobenius norm. For finite-rank-defect pairs this is
/// an integer equal to the index of `a`.
pub fn idempotent_defect_trace(p: &CMat, k_block: usize) -> Result<f64> {
    let (r, c) = p.dim();
    if r != c {
        return Err(Error::SizeMismatch {
            a_rows: r,
            a_cols: c,
            b_rows: r,
            b_cols: c,
        });
    }
    let p2 = linalg::matmul(p, p);
    let mut defect = p2;
    defect.zip_mut_with(p, |d, v| *d -= v);
    let norm = linalg::frobenius_norm(&defect);
    if norm >= IDEMPOTENT_TOL {
        return Err(Error::NotIdempotent {
            defect: norm,
            tol: IDEMPOTENT_TOL,
        });
    }
    Ok(linalg::trace(p).re - k_block as f64)
}

/// Finite section of the unilateral shift `e_i -> e_{i+1}` on modes
/// `0..=top_mode`, with the codomain window extended so no image is cut:
/// the matrix is `(top_mode + 1 + power)` by `(top_mode + 1)`.
pub fn shift_section(top_mode: usize, power: usize) -> CMat {
    let cols = top_mode + 1;
    let rows = cols + power;
    let mut m = Array2::zeros((rows, cols));
    for i in 0..cols {
        m[(i + power, i)] = Complex64::new(1.0, 0.0);
    }
    m
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_inverse_gives_the_block_identity() {
        let a = Array2::from_shape_vec(
            (2, 2),
            vec![
                Complex64::new(2.0, 1.0),
                Complex64::new(0.0, 0.5),
                Complex64::new(-1.0, 0.0),
                Complex64::new(1.0, -1.0),
            ],
        )
        .unwrap();
        let b = linalg::inverse(&a).unwrap();
        let p = index_idempotent(&a, &b).unwrap();
        let mut expect: CMat = Array2::zeros((4, 4));
        expect[(0, 0)] = Complex64::new(1.0, 0.0);
        expect[(1, 1)] = Complex64::new(1.0, 0.0);
        assert!(linalg::max_abs_diff(&p, &expect) < 1e-12);
        let t = idempotent_defect_trace(&p, 2).unwrap();
        assert_eq!(t, 0.0);
    }

    #[test]
    fn shift_pair_reads_off_index_minus_one() {
        let a = shift_section(12, 1);
        let b = linalg::conj_transpose(&a);
        let p = index_idempotent(&a, &b).unwrap();
        // idempotent to rounding
        let p2 = linalg::matmul(&p, &p);
        assert!(linalg::max_abs_diff(&p2, &p) < 1e-10);
        let t = idempotent_defect_trace(&p, a.nrows()).unwrap();
        assert!((t - (-1.0)).abs() < 1e-10, "defect trace {t}");
    }

    #[test]
    fn squared_shift_reads_off_index_minus_two() {
        let a = shift_section(12, 2);
        let b = linalg::conj_transpose(&a);
        let p = index_idempotent(&a, &b).unwrap();
        let t = idempotent_defect_trace(&p, a.nrows()).unwrap();
        assert!((t - (-2.0)).abs() < 1e-10, "defect trace {t}");
    }

    #[test]
    fn construction_is_idempotent_for_any_pair() {
        // the block formula is an algebraic idempotent whatever b is; only
        // the trace depends on the shapes
        let a = Array2::from_shape_fn((3, 3), |(i, j)| {
            Complex64::new((i * 3 + j) as f64 * 0.3 - 1.0, (i as f64) - (j as f64) * 0.7)
        });
        let mut b = linalg::inverse(&a).unwrap();
        b[(0, 0)] += Complex64::new(0.3, 0.0);
        let p = index_idempotent(&a, &b).unwrap();
        let t = idempotent_defect_trace(&p, 3).unwrap();
        assert!(t.abs() < 1e-10, "square pair must have defect 0, got {t}");
    }

    #[test]
    fn far_from_idempotent_is_rejected() {
        // the gate protects the trace readout when p arrives from elsewhere
        let p = Array2::from_shape_fn((4, 4), |(i, j)| {
            Complex64::new(0.3 * (i as f64 + 1.0), 0.2 * (j as f64) - 0.5)
        });
        assert!(matches!(
            idempotent_defect_trace(&p, 2),
            Err(Error::NotIdempotent { .. })
        ));
    }

    #[test]
    fn shape_mismatch_is_rejected() {
        let a = shift_section(6, 1);
        let b = linalg::conj_transpose(&shift_section(5, 1));
        assert!(matches!(
            index_idempotent(&a, &b),
            Err(Error::SizeMismatch { .. })
        ));
    }
}
