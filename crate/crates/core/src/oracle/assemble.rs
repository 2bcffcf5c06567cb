//! Dense assembly of lattice operators over truncation windows.
//!
//! Everything the oracle measures is assembled through one trait: an operator
//! on the boundary Fourier lattice with finite bandwidth, given blockwise by
//! the offset between row and column sites. Boundary operators of
//! differential type and direct symbol quantizations both fit this shape.

use super::window::{TruncationWindow, WindowDim};
use crate::error::{Error, Result};
use crate::linalg::{self, CMat};
use crate::symbol::{BoundaryOperatorSpec, PeriodicFunction};
use faer::Mat;
use num_complex::Complex64;
use std::collections::HashMap;

/// Hard cap on requested dense window dimensions; override explicitly for
/// larger runs.
pub const DENSE_DIM_CAP: usize = 6000;

/// A bounded operator on `l^2` of the boundary Fourier lattice, banded with
/// respect to the site offset, with k-by-k blocks.
pub trait LatticeOperator: Sync {
    fn k(&self) -> usize;

    fn dim(&self) -> WindowDim;

    /// All blocks with offset |delta| exceeding this (componentwise) vanish
    /// or are negligible at working precision.
    fn bandwidth(&self) -> usize;

    /// Block at row site `col + delta`, column site `col`; None when absent.
    fn block(&self, delta: (i64, i64), col: (i64, i64)) -> Option<CMat>;

    fn describe(&self) -> String;
}

/// Conjugate transpose of a lattice operator, expressed blockwise so the
/// adjoint can be assembled directly on any window:
/// `block_{A*}(delta, col) = block_A(-delta, col + delta)^H`.
pub struct AdjointLattice<'a> {
    pub inner: &'a dyn LatticeOperator,
}

impl LatticeOperator for AdjointLattice<'_> {
    fn k(&self) -> usize {
        self.inner.k()
    }

    fn dim(&self) -> WindowDim {
        self.inner.dim()
    }

    fn bandwidth(&self) -> usize {
        self.inner.bandwidth()
    }

    fn block(&self, delta: (i64, i64), col: (i64, i64)) -> Option<CMat> {
        let row = (col.0 + delta.0, col.1 + delta.1);
        self.inner
            .block((-delta.0, -delta.1), row)
            .map(|b| linalg::conj_transpose(&b))
    }

    fn describe(&self) -> String {
        format!("adjoint of {}", self.inner.describe())
    }
}

/// A dense finite section, with the window and provenance retained for
/// audit records.
#[derive(Debug)]
pub struct TruncatedOperator {
    pub window: TruncationWindow,
    pub k: usize,
    pub matrix: Mat<Complex64>,
    pub provenance: String,
}

impl TruncatedOperator {
    pub fn dim(&self) -> usize {
        self.window.matrix_dim(self.k)
    }
}

/// Assemble the rectangular section with rows over `row_window` and columns
/// over `col_window`. No cap is applied here; callers cap the requested
/// (column) window.
pub fn assemble_rect(
    op: &dyn LatticeOperator,
    row_window: TruncationWindow,
    col_window: TruncationWindow,
) -> Result<Mat<Complex64>> {
    if row_window.dim != op.dim() || col_window.dim != op.dim() {
        return Err(Error::DimensionMismatch {
            operator: format!("{:?}", op.dim()),
            window: format!("{:?} / {:?}", row_window.dim, col_window.dim),
        });
    }
    let k = op.k();
    let rows = row_window.matrix_dim(k);
    let cols = col_window.matrix_dim(k);
    let mut matrix = Mat::<Complex64>::zeros(rows, cols);
    let band = op.bandwidth() as i64;
    let deltas: Vec<(i64, i64)> = match op.dim() {
        WindowDim::One => (-band..=band).map(|p| (p, 0)).collect(),
        WindowDim::Two => {
            let mut v = Vec::new();
            for p in -band..=band {
                for q in -band..=band {
                    v.push((p, q));
                }
            }
            v
        }
    };
    for (ci, col_site) in col_window.sites().into_iter().enumerate() {
        for &delta in &deltas {
            let row_site = (col_site.0 + delta.0, col_site.1 + delta.1);
            let Some(ri) = row_window.index_of(row_site) else {
                continue;
            };
            let Some(block) = op.block(delta, col_site) else {
                continue;
            };
            for r in 0..k {
                for c in 0..k {
                    matrix[(ri * k + r, ci * k + c)] = block[(r, c)];
                }
            }
        }
    }
    // finite-entry invariant
    for ci in 0..cols {
        for ri in 0..rows {
            let v = matrix[(ri, ci)];
            if !v.re.is_finite() || !v.im.is_finite() {
                return Err(Error::Backend(format!(
                    "non-finite entry at ({ri}, {ci}) while assembling {}",
                    op.describe()
                )));
            }
        }
    }
    Ok(matrix)
}

/// Assemble the square finite section over one window, enforcing the dense
/// cap unless overridden.
pub fn assemble(
    op: &dyn LatticeOperator,
    window: TruncationWindow,
    allow_large: bool,
) -> Result<TruncatedOperator> {
    let dim = window.matrix_dim(op.k());
    if dim > DENSE_DIM_CAP && !allow_large {
        return Err(Error::WindowTooLarge {
            dim,
            cap: DENSE_DIM_CAP,
        });
    }
    let matrix = assemble_rect(op, window, window)?;
    Ok(TruncatedOperator {
        window,
        k: op.k(),
        matrix,
        provenance: op.describe(),
    })
}

/// Boundary operator of differential type as a lattice operator: in the
/// Fourier basis the block at offset delta for column site (m, n) is
/// `sum_terms coeff_hat(delta) m^j n^alpha (1 + m^2 + n^2)^{-N/2}`.
pub struct DifferentialAssembler {
    k: usize,
    dim: WindowDim,
    order: usize,
    bandwidth: usize,
    terms: Vec<(usize, usize, HashMap<(i64, i64), CMat>)>,
    description: String,
}

impl DifferentialAssembler {
    pub fn new(op: &BoundaryOperatorSpec) -> Self {
        let mut bandwidth = 0usize;
        let mut terms = Vec::new();
        for (j, alpha, coeff) in op.terms() {
            let (bp, bq) = coeff.band();
            bandwidth = bandwidth.max(bp.max(bq) as usize);
            let modes: HashMap<(i64, i64), CMat> = coeff
                .modes()
                .map(|(&(p, q), m)| ((p, q), m.clone()))
                .collect();
            terms.push((j, alpha, modes));
        }
        DifferentialAssembler {
            k: op.k(),
            dim: WindowDim::from_base(op.base()),
            order: op.order(),
            bandwidth,
            terms,
            description: op.describe(),
        }
    }
}

impl LatticeOperator for DifferentialAssembler {
    fn k(&self) -> usize {
        self.k
    }

    fn dim(&self) -> WindowDim {
        self.dim
    }

    fn bandwidth(&self) -> usize {
        self.bandwidth
    }

    fn block(&self, delta: (i64, i64), col: (i64, i64)) -> Option<CMat> {
        let (m, n) = col;
        let lambda = (1.0 + (m * m + n * n) as f64).powf(-(self.order as f64) / 2.0);
        let mut out: Option<CMat> = None;
        for (j, alpha, modes) in &self.terms {
            let Some(coeff) = modes.get(&delta) else {
                continue;
            };
            let weight = (m as f64).powi(*j as i32) * (n as f64).powi(*alpha as i32) * lambda;
            if weight == 0.0 {
                continue;
            }
            let w = Complex64::new(weight, 0.0);
            match &mut out {
                Some(acc) => acc.zip_mut_with(coeff, |a, b| *a += w * b),
                None => {
                    let mut m = coeff.clone();
                    m.mapv_inplace(|v| v * w);
                    out = Some(m);
                }
            }
        }
        out
    }

    fn describe(&self) -> String {
        self.description.clone()
    }
}

/// Spec-facing wrapper: square finite section of a boundary operator.
pub fn assemble_boundary_matrix(
    op: &BoundaryOperatorSpec,
    window: TruncationWindow,
    allow_large: bool,
) -> Result<TruncatedOperator> {
    assemble(&DifferentialAssembler::new(op), window, allow_large)
}

/// Multiplication operator by a single periodic function, as a lattice
/// operator (order-zero convolution); used in tests and calibrations.
pub struct ConvolutionAssembler {
    k: usize,
    dim: WindowDim,
    bandwidth: usize,
    modes: HashMap<(i64, i64), CMat>,
    description: String,
}

impl ConvolutionAssembler {
    pub fn new(f: &PeriodicFunction, dim: WindowDim) -> Self {
        let (bp, bq) = f.band();
        ConvolutionAssembler {
            k: f.k(),
            dim,
            bandwidth: bp.max(bq) as usize,
            modes: f.modes().map(|(&(p, q), m)| ((p, q), m.clone())).collect(),
            description: "convolution by a periodic function".into(),
        }
    }
}

impl LatticeOperator for ConvolutionAssembler {
    fn k(&self) -> usize {
        self.k
    }

    fn dim(&self) -> WindowDim {
        self.dim
    }

    fn bandwidth(&self) -> usize {
        self.bandwidth
    }

    fn block(&self, delta: (i64, i64), _col: (i64, i64)) -> Option<CMat> {
        self.modes.get(&delta).cloned()
    }

    fn describe(&self) -> String {
        self.description.clone()
    }
}
