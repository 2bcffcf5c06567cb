//! Fredholm indices of lattice operators by finite sections.
//!
//! A square truncation can never show an index: its two kernel counts are
//! read off the same singular values. What works is the band-exact
//! rectangular section: columns over the window of radius R, rows padded by
//! the operator's bandwidth G, so every column's image is captured in full.
//! A vector in the kernel of that section is annihilated by the genuine
//! operator, and kernel vectors of these operators decay, so the counts
//!
//! `ker  = dim ker (rows R+G x cols R of A)`
//! `coker = dim ker (rows R+G x cols R of A*)`
//!
//! converge to the true dimensions and `ker - coker` to the index. The
//! counts come from the SVD with a relative tolerance, protected by an
//! explicit spectral-gap requirement and a two-radius stabilization check;
//! the failure modes (`NoSpectralGap`, `Unstable`) are part of the contract.

use super::assemble::{assemble_rect, AdjointLattice, LatticeOperator, DENSE_DIM_CAP};
use super::window::TruncationWindow;
use crate::error::{Error, Result};
use faer::Mat;
use num_complex::Complex64;
use serde::Serialize;

/// Default relative kernel tolerance (times the largest singular value).
pub const ORACLE_DEFAULT_TOL: f64 = 1e-6;
/// Required ratio between the smallest kept and largest discarded singular
/// value.
pub const SPECTRAL_GAP_FACTOR: f64 = 1e3;

/// Per-radius audit record of one singular-value sweep.
#[derive(Debug, Clone, Serialize)]
pub struct SweepRecord {
    pub radius: usize,
    /// Requested (column) window dimension `k (2R+1)^d`.
    pub dim: usize,
    /// Padded row dimension of the rectangular sections.
    pub rows: usize,
    pub s_max: f64,
    /// The five smallest singular values of the domain-side section,
    /// ascending.
    pub smallest: Vec<f64>,
    pub ker: usize,
    pub coker: usize,
    pub gap_ker: f64,
    pub gap_coker: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct IndexComputation {
    pub index: i64,
    pub records: Vec<SweepRecord>,
}

struct KernelCount {
    count: usize,
    gap: f64,
    largest_zero: f64,
    smallest_nonzero: f64,
}

/// Count trailing singular values below `tol * s_max`; `gap` is the ratio
/// across the cut (infinite when the zero cluster is exactly zero or empty).
fn kernel_count(svals: &[f64], tol: f64) -> KernelCount {
    let n = svals.len();
    let s_max = svals.first().copied().unwrap_or(0.0);
    if s_max <= 0.0 {
        return KernelCount {
            count: n,
            gap: f64::INFINITY,
            largest_zero: 0.0,
            smallest_nonzero: 0.0,
        };
    }
    let threshold = tol * s_max;
    let mut count = 0;
    while count < n && svals[n - 1 - count] < threshold {
        count += 1;
    }
    if count == 0 || count == n {
        return KernelCount {
            count,
            gap: f64::INFINITY,
            largest_zero: if count == 0 { 0.0 } else { svals[0] },
            smallest_nonzero: if count == 0 { svals[n - 1] } else { 0.0 },
        };
    }
    let largest_zero = svals[n - count];
    let smallest_nonzero = svals[n - count - 1];
    let gap = if largest_zero == 0.0 {
        f64::INFINITY
    } else {
        smallest_nonzero / largest_zero
    };
    KernelCount {
        count,
        gap,
        largest_zero,
        smallest_nonzero,
    }
}

fn singular_values(m: &Mat<Complex64>) -> Result<Vec<f64>> {
    m.singular_values()
        .map_err(|e| Error::Backend(format!("SVD failed: {e:?}")))
}

fn check_cap(window: TruncationWindow, k: usize, allow_large: bool) -> Result<()> {
    let dim = window.matrix_dim(k);
    if dim > DENSE_DIM_CAP && !allow_large {
        return Err(Error::WindowTooLarge {
            dim,
            cap: DENSE_DIM_CAP,
        });
    }
    Ok(())
}

fn sweep_at_radius(
    op: &dyn LatticeOperator,
    radius: usize,
    tol: f64,
    allow_large: bool,
    strict_gap: bool,
) -> Result<SweepRecord> {
    let col_window = TruncationWindow::new(radius, op.dim());
    check_cap(col_window, op.k(), allow_large)?;
    let row_window = TruncationWindow::new(radius + op.bandwidth(), op.dim());

    let direct = assemble_rect(op, row_window, col_window)?;
    let sv_direct = singular_values(&direct)?;
    drop(direct);
    let adjoint_op = AdjointLattice { inner: op };
    let adjoint = assemble_rect(&adjoint_op, row_window, col_window)?;
    let sv_adjoint = singular_values(&adjoint)?;
    drop(adjoint);

    let ker = kernel_count(&sv_direct, tol);
    let coker = kernel_count(&sv_adjoint, tol);
    if strict_gap {
        for (side, kc) in [("domain", &ker), ("adjoint", &coker)] {
            if kc.gap < SPECTRAL_GAP_FACTOR {
                return Err(Error::NoSpectralGap {
                    radius,
                    side,
                    largest_zero: kc.largest_zero,
                    smallest_nonzero: kc.smallest_nonzero,
                    ratio: kc.gap,
                    required: SPECTRAL_GAP_FACTOR,
                });
            }
        }
    }
    let smallest: Vec<f64> = sv_direct.iter().rev().take(5).copied().collect();
    Ok(SweepRecord {
        radius,
        dim: col_window.matrix_dim(op.k()),
        rows: row_window.matrix_dim(op.k()),
        s_max: sv_direct.first().copied().unwrap_or(0.0),
        smallest,
        ker: ker.count,
        coker: coker.count,
        gap_ker: ker.gap,
        gap_coker: coker.gap,
    })
}

/// Stabilized numerical Fredholm index over an increasing list of radii
/// (at least two). The last two radii must agree on `ker - coker`.
pub fn numerical_index(
    op: &dyn LatticeOperator,
    radii: &[usize],
    tol: f64,
    allow_large: bool,
) -> Result<IndexComputation> {
    if radii.len() < 2 {
        return Err(Error::Validation(
            "the index sweep needs at least two radii".into(),
        ));
    }
    if !radii.windows(2).all(|w| w[0] < w[1]) {
        return Err(Error::Validation("radii must be strictly increasing".into()));
    }
    if tol <= 0.0 {
        return Err(Error::Validation("tolerance must be positive".into()));
    }
    let mut records = Vec::with_capacity(radii.len());
    for &r in radii {
        records.push(sweep_at_radius(op, r, tol, allow_large, true)?);
    }
    let last = &records[records.len() - 1];
    let prev = &records[records.len() - 2];
    let index_last = last.ker as i64 - last.coker as i64;
    let index_prev = prev.ker as i64 - prev.coker as i64;
    if index_last != index_prev {
        return Err(Error::Unstable {
            prev: index_prev,
            radius_prev: prev.radius,
            last: index_last,
            radius_last: last.radius,
        });
    }
    Ok(IndexComputation {
        index: index_last,
        records,
    })
}

/// Raw sweep for plotting and audit: no gap enforcement, no stabilization
/// requirement.
pub fn singular_sweep(
    op: &dyn LatticeOperator,
    radii: &[usize],
    tol: f64,
    allow_large: bool,
) -> Result<Vec<SweepRecord>> {
    radii
        .iter()
        .map(|&r| sweep_at_radius(op, r, tol, allow_large, false))
        .collect()
}

/// Invertibility margin: the smallest singular value over both rectangular
/// sections at the largest radius. An operator is accepted as invertible
/// when this stays above the caller's tolerance.
pub fn invertibility_margin(
    op: &dyn LatticeOperator,
    radii: &[usize],
    allow_large: bool,
) -> Result<f64> {
    let Some(&radius) = radii.last() else {
        return Err(Error::Validation("need at least one radius".into()));
    };
    let col_window = TruncationWindow::new(radius, op.dim());
    check_cap(col_window, op.k(), allow_large)?;
    let row_window = TruncationWindow::new(radius + op.bandwidth(), op.dim());
    let mut margin = f64::INFINITY;
    let direct = assemble_rect(op, row_window, col_window)?;
    margin = margin.min(singular_values(&direct)?.last().copied().unwrap_or(0.0));
    drop(direct);
    let adjoint_op = AdjointLattice { inner: op };
    let adjoint = assemble_rect(&adjoint_op, row_window, col_window)?;
    margin = margin.min(singular_values(&adjoint)?.last().copied().unwrap_or(0.0));
    Ok(margin)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::quantize::LoopSymbolQuantizer;
    use crate::samples;
    use crate::winding::LoopSample;
    use crate::linalg;
    use num_complex::Complex64;

    fn power_loop(n: usize, power: i64) -> LoopSample {
        LoopSample::from_fn(n, |theta| {
            linalg::scalar(Complex64::new(0.0, power as f64 * theta).exp())
        })
        .unwrap()
    }

    #[test]
    fn toeplitz_calibration_has_index_minus_one() {
        let (ones, z) = samples::toeplitz_calibration_loops(64);
        let q = LoopSymbolQuantizer::new(&ones, &z).unwrap();
        let result = numerical_index(&q, &[32, 64], ORACLE_DEFAULT_TOL, false).unwrap();
        assert_eq!(result.index, -1);
        for rec in &result.records {
            assert_eq!((rec.ker, rec.coker), (0, 1));
            assert!(rec.gap_coker >= SPECTRAL_GAP_FACTOR);
        }
    }

    #[test]
    fn bilateral_shift_is_invertible_with_index_zero() {
        let z = power_loop(64, 1);
        let q = LoopSymbolQuantizer::new(&z, &z).unwrap();
        let result = numerical_index(&q, &[16, 32], ORACLE_DEFAULT_TOL, false).unwrap();
        assert_eq!(result.index, 0);
        let margin = invertibility_margin(&q, &[16, 32], false).unwrap();
        assert!((margin - 1.0).abs() < 1e-10, "margin {margin}");
    }

    #[test]
    fn composite_shift_symbol_matches_the_winding_difference() {
        // z^2 at tau = -1, z^{-1} at tau = +1: index 2 - (-1) = 3
        let minus = power_loop(64, 2);
        let plus = power_loop(64, -1);
        let q = LoopSymbolQuantizer::new(&minus, &plus).unwrap();
        let result = numerical_index(&q, &[16, 32], ORACLE_DEFAULT_TOL, false).unwrap();
        assert_eq!(result.index, 3);
    }

    #[test]
    fn adjoint_negates_the_index_exactly() {
        let (ones, z) = samples::toeplitz_calibration_loops(64);
        let q = LoopSymbolQuantizer::new(&ones, &z).unwrap();
        let direct = numerical_index(&q, &[16, 32], ORACLE_DEFAULT_TOL, false).unwrap();
        let adj = AdjointLattice { inner: &q };
        let adjoint = numerical_index(&adj, &[16, 32], ORACLE_DEFAULT_TOL, false).unwrap();
        assert_eq!(direct.index, -adjoint.index);
    }

    #[test]
    fn radii_preconditions_are_enforced() {
        let (ones, z) = samples::toeplitz_calibration_loops(64);
        let q = LoopSymbolQuantizer::new(&ones, &z).unwrap();
        assert!(matches!(
            numerical_index(&q, &[32], ORACLE_DEFAULT_TOL, false),
            Err(Error::Validation(_))
        ));
        assert!(matches!(
            numerical_index(&q, &[32, 32], ORACLE_DEFAULT_TOL, false),
            Err(Error::Validation(_))
        ));
    }

    #[test]
    fn kernel_count_gap_logic() {
        let kc = kernel_count(&[1.0, 0.9, 1e-9, 1e-12], 1e-6);
        assert_eq!(kc.count, 2);
        assert!(kc.gap > 1e8);
        let kc = kernel_count(&[1.0, 1e-4, 1e-7], 1e-6);
        // 1e-7 below threshold, 1e-4 above: ratio 1e3 exactly at the limit
        assert_eq!(kc.count, 1);
        assert!((kc.gap - 1e3).abs() / 1e3 < 1e-9);
        let kc = kernel_count(&[1.0, 0.5], 1e-6);
        assert_eq!(kc.count, 0);
        assert_eq!(kc.gap, f64::INFINITY);
    }
}
