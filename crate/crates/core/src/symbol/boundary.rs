//! Boundary symbols and boundary operators on `S^1 x B`.
//!
//! At each end of the cylinder the operator leaves behind a zero-order
//! operator on the compact manifold `S^1 x B`:
//!
//! `sum a_{j,alpha}(theta, x) D_theta^j D_x^alpha (1 + D_theta^2 + D_x^2)^{-N/2}`
//!
//! whose principal symbol is the corresponding restriction of the extended
//! principal symbol. The Fredholm indices of the two boundary operators are
//! the value of the K-theory index map on the operator's symbol class.

use super::periodic::PeriodicFunction;
use super::spec::{accumulate_symbol, BaseManifold, CospherePoint, OperatorSpec};
use super::Side;
use crate::linalg::CMat;

/// Restriction of the extended principal symbol to one boundary, realized as
/// the trigonometric polynomial `sum_{j+alpha=N} a_{j,alpha}(theta,x) tau^j xi^alpha`.
#[derive(Debug, Clone)]
pub struct BoundarySymbol {
    side: Side,
    base: BaseManifold,
    k: usize,
    order: usize,
    terms: Vec<(usize, usize, PeriodicFunction)>,
}

impl BoundarySymbol {
    pub fn side(&self) -> Side {
        self.side
    }

    pub fn base(&self) -> BaseManifold {
        self.base
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn eval(&self, pt: &CospherePoint) -> CMat {
        accumulate_symbol(self.k, self.terms.iter().map(|(j, a, c)| (*j, *a, c)), pt)
    }

    /// Evaluate over a point base at the fiber sign `tau = +/-1`.
    pub fn eval_point_fiber(&self, theta: f64, tau_positive: bool) -> CMat {
        self.eval(&CospherePoint::point_fiber(theta, tau_positive))
    }

    /// Largest Fourier band of the coefficients, used to size truncation
    /// paddings downstream.
    pub fn coefficient_band(&self) -> (i64, i64) {
        let mut bp = 0;
        let mut bq = 0;
        for (_, _, c) in &self.terms {
            let (p, q) = c.band();
            bp = bp.max(p);
            bq = bq.max(q);
        }
        (bp, bq)
    }
}

/// The boundary operator attached to one end: periodic coefficients composed
/// with Fourier multipliers on the boundary lattice.
///
/// `full_order` keeps every term of the spec; the top-order-only assembly
/// differs from it by a compact perturbation and must produce the same index.
#[derive(Debug, Clone)]
pub struct BoundaryOperatorSpec {
    side: Side,
    base: BaseManifold,
    k: usize,
    order: usize,
    full_order: bool,
    terms: Vec<(usize, usize, PeriodicFunction)>,
}

impl BoundaryOperatorSpec {
    pub fn side(&self) -> Side {
        self.side
    }

    pub fn base(&self) -> BaseManifold {
        self.base
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn is_full_order(&self) -> bool {
        self.full_order
    }

    pub fn terms(&self) -> impl Iterator<Item = (usize, usize, &PeriodicFunction)> {
        self.terms.iter().map(|(j, a, c)| (*j, *a, c))
    }

    /// True when the top-order part is identically absent; such an operator
    /// has vanishing principal symbol and cannot be elliptic.
    pub fn top_order_empty(&self) -> bool {
        !self
            .terms
            .iter()
            .any(|(j, a, c)| j + a == self.order && !c.is_zero())
    }

    /// Largest coefficient Fourier band over all retained terms.
    pub fn coefficient_band(&self) -> (i64, i64) {
        let mut bp = 0;
        let mut bq = 0;
        for (_, _, c) in &self.terms {
            let (p, q) = c.band();
            bp = bp.max(p);
            bq = bq.max(q);
        }
        (bp, bq)
    }

    pub fn describe(&self) -> String {
        format!(
            "boundary operator ({}, base {:?}, k={}, N={}, {} terms, {})",
            self.side.label(),
            self.base,
            self.k,
            self.order,
            self.terms.len(),
            if self.full_order { "full order" } else { "top order" },
        )
    }
}

/// Extract the boundary symbol of one side; its values agree with
/// `evaluate_principal_symbol` exactly (same accumulation).
pub fn boundary_symbol(spec: &OperatorSpec, side: Side) -> BoundarySymbol {
    let terms = spec
        .top_order_terms()
        .map(|((j, a), c)| (*j, *a, c.side(side).clone()))
        .collect();
    BoundarySymbol {
        side,
        base: spec.base(),
        k: spec.k(),
        order: spec.order(),
        terms,
    }
}

/// Build the boundary operator of one side. With `full_order = false` only the
/// top-order terms are kept, as in the displayed form of the operator; with
/// `full_order = true` the lower-order terms ride along as compact
/// perturbations.
pub fn boundary_operator(spec: &OperatorSpec, side: Side, full_order: bool) -> BoundaryOperatorSpec {
    let order = spec.order();
    let terms = spec
        .terms()
        .filter(|((j, a), _)| full_order || j + a == order)
        .map(|((j, a), c)| (*j, *a, c.side(side).clone()))
        .filter(|(_, _, c)| !c.is_zero())
        .collect();
    BoundaryOperatorSpec {
        side,
        base: spec.base(),
        k: spec.k(),
        order,
        full_order,
        terms,
    }
}
