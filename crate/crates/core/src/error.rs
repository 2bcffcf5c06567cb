//! Crate-wide error type.
//!
//! Numerical failures are first-class outcomes here: a truncation without a
//! spectral gap or a winding that does not close is a result the caller must
//! see, not a panic. Every variant carries the quantities that triggered it.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("singular sample at {context}: smallest singular value {sigma:.3e} <= {tol:.3e}")]
    SingularSample {
        context: String,
        sigma: f64,
        tol: f64,
    },

    #[error("determinant phase jump of {delta:.4} rad between samples {index} and {next}: refine the loop sampling", next = index + 1)]
    PhaseJump { index: usize, delta: f64 },

    #[error("winding phase does not close: accumulated {accumulated:.8} rad is {residual:.3e} away from {nearest} turns")]
    NonClosure {
        accumulated: f64,
        nearest: i64,
        residual: f64,
    },

    #[error("matrix size mismatch: {left} vs {right}")]
    MatrixSizeMismatch { left: usize, right: usize },

    #[error("grid under-resolves the symbol along {axis}: top-third derivative energy fraction {ratio:.3e} > {tol:.1e}; refine the grid")]
    AliasedGrid {
        axis: &'static str,
        ratio: f64,
        tol: f64,
    },

    #[error("integral {value:.6} is {residual:.3e} away from the nearest integer (tolerance {tol}); quadrature is suspect")]
    NonIntegerResult {
        value: f64,
        residual: f64,
        tol: f64,
    },

    #[error("lattice dimension mismatch: operator is {operator}, window is {window}")]
    DimensionMismatch { operator: String, window: String },

    #[error("symbol is numerically singular: {0}")]
    SingularSymbol(String),

    #[error("no spectral gap at radius {radius} ({side} kernel): largest zero {largest_zero:.3e} vs smallest nonzero {smallest_nonzero:.3e} (ratio {ratio:.2e} < {required:.1e})")]
    NoSpectralGap {
        radius: usize,
        side: &'static str,
        largest_zero: f64,
        smallest_nonzero: f64,
        ratio: f64,
        required: f64,
    },

    #[error("index did not stabilize: {prev} at radius {radius_prev} vs {last} at radius {radius_last}")]
    Unstable {
        prev: i64,
        radius_prev: usize,
        last: i64,
        radius_last: usize,
    },

    #[error("block size mismatch: a is {a_rows}x{a_cols}, b is {b_rows}x{b_cols}")]
    SizeMismatch {
        a_rows: usize,
        a_cols: usize,
        b_rows: usize,
        b_cols: usize,
    },

    #[error("matrix is not an idempotent: ||p^2 - p|| = {defect:.3e} > {tol:.1e}")]
    NotIdempotent { defect: f64, tol: f64 },

    #[error("symbol fails the uniform ellipticity test: margin {margin:.3e} <= {tol:.1e}")]
    NotElliptic { margin: f64, tol: f64 },

    #[error("truncation window of dimension {dim} exceeds the dense cap {cap}; rerun with the large-window override")]
    WindowTooLarge { dim: usize, cap: usize },

    #[error("schema error: {0}")]
    Schema(String),

    #[error("invalid input: {0}")]
    Validation(String),

    #[error("linear algebra backend failure: {0}")]
    Backend(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Process exit class: 2 for input/validation problems, 3 for numerical
    /// failures.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Schema(_)
            | Error::Validation(_)
            | Error::NotElliptic { .. }
            | Error::MatrixSizeMismatch { .. }
            | Error::DimensionMismatch { .. }
            | Error::SizeMismatch { .. }
            | Error::WindowTooLarge { .. }
            | Error::Io(_) => 2,
            _ => 3,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
