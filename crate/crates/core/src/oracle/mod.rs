//! Analytic ground truth by the finite-section method.
//!
//! Boundary operators and quantized symbols are compressed to growing
//! Fourier-lattice windows; kernel and cokernel dimensions are detected from
//! singular values with an explicit spectral-gap contract, and indices must
//! stabilize across the last two radii before they are believed. The square
//! assemblies are the inspectable artifacts; the index itself is measured on
//! band-exact rectangular sections (see `index`).

mod assemble;
mod idempotent;
mod index;
mod quantize;
mod window;

pub use assemble::{
    assemble, assemble_boundary_matrix, assemble_rect, AdjointLattice, ConvolutionAssembler,
    DifferentialAssembler, LatticeOperator, TruncatedOperator, DENSE_DIM_CAP,
};
pub use idempotent::{
    idempotent_defect_trace, index_idempotent, shift_section, IDEMPOTENT_TOL,
};
pub use index::{
    invertibility_margin, numerical_index, singular_sweep, IndexComputation, SweepRecord,
    ORACLE_DEFAULT_TOL, SPECTRAL_GAP_FACTOR,
};
pub use quantize::{
    quantize_grid_symbol, quantize_loop_symbol, GridSymbolQuantizer, LoopSymbolQuantizer,
    COEFFICIENT_TAIL_TOL,
};
pub use window::{TruncationWindow, WindowDim};
