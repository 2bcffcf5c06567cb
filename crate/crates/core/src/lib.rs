//! Boundary index pairs of semi-periodic elliptic operators on a cylinder.
//!
//! An elliptic operator with periodic coefficient limits at the two ends of
//! the cylinder `R x B` (B a point or a circle) leaves one boundary operator
//! on `S^1 x B` at each end. The pair of their Fredholm indices is the value
//! of the K-theory boundary map on the operator's symbol class, and this
//! crate computes it twice:
//!
//! * topologically, by winding numbers (point base) or numerical integration
//!   of the odd Chern 3-form (circle base);
//! * analytically, by finite-section truncation on Fourier-lattice windows
//!   with SVD kernel detection.
//!
//! The two routes cross-validate each other; orientation and ordering
//! conventions are frozen once against the truncation oracle (see
//! `winding`, `chern` and the `calibrate` subcommand of the CLI).

pub mod chern;
pub mod error;
pub mod fft;
pub mod linalg;
pub mod oracle;
pub mod pipeline;
pub mod samples;
pub mod symbol;
pub mod winding;

pub use error::{Error, Result};
