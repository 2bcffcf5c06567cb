//! Semi-periodic operator specifications and their boundary data.
//!
//! An operator here is a matrix differential expression
//! `L = sum_{j+alpha <= N} a_{j,alpha}(t,x) D_t^j D_x^alpha` on the cylinder
//! `R x B` (B a point or a circle), composed with the order reduction
//! `(1 - Laplacian)^{-N/2}`, whose coefficients approach 2*pi-periodic limits
//! as t -> -inf and t -> +inf. Only those two periodic limits are stored: the
//! index data extracted downstream (boundary symbols, boundary operators on
//! `S^1 x B`) depends on nothing else.

mod boundary;
mod ellipticity;
mod io;
mod periodic;
mod spec;

pub use boundary::{boundary_operator, boundary_symbol, BoundaryOperatorSpec, BoundarySymbol};
pub use ellipticity::{
    check_total_fredholm, check_uniform_ellipticity, FredholmCheckConfig, SymbolGrid,
    ELLIPTICITY_TOL,
};
pub use io::{parse_operator_spec, spec_hash, spec_to_json};
pub use periodic::{PeriodicFunction, SemiPeriodicCoefficient};
pub use spec::{evaluate_principal_symbol, BaseManifold, CospherePoint, OperatorSpec};

/// Which periodic limit of the cylinder: `Minus` is t -> -inf, `Plus` is
/// t -> +inf.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Minus,
    Plus,
}

impl Side {
    pub fn flip(self) -> Side {
        match self {
            Side::Minus => Side::Plus,
            Side::Plus => Side::Minus,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Side::Minus => "minus",
            Side::Plus => "plus",
        }
    }
}
