//! Uniform ellipticity and the total Fredholm criterion.
//!
//! Ellipticity is tested on the two boundary fibers of the compactified
//! cosphere bundle; with only the periodic limits stored, those fibers carry
//! all of the symbol data there is. The invertibility margin is the smallest
//! singular value of the principal symbol over the sweep, which is scale
//! stable for matrix symbols where |det| is not.

use super::boundary::boundary_operator;
use super::spec::{evaluate_principal_symbol, BaseManifold, CospherePoint, OperatorSpec};
use super::Side;
use crate::error::{Error, Result};
use crate::linalg;
use crate::oracle::{self, DifferentialAssembler};
use rayon::prelude::*;
use std::f64::consts::PI;

/// Margins at or below this are reported as non-elliptic.
pub const ELLIPTICITY_TOL: f64 = 1e-8;

/// Resolution triple for symbol sweeps: base angles (theta, x) and the
/// cosphere fiber. Over a point base the fiber degenerates to the two signs
/// of tau and `n_fiber` is ignored.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SymbolGrid {
    pub n_theta: usize,
    pub n_x: usize,
    pub n_fiber: usize,
}

impl Default for SymbolGrid {
    fn default() -> Self {
        SymbolGrid {
            n_theta: 64,
            n_x: 64,
            n_fiber: 64,
        }
    }
}

impl SymbolGrid {
    pub fn uniform(n: usize) -> Self {
        SymbolGrid {
            n_theta: n,
            n_x: n,
            n_fiber: n,
        }
    }

    fn validate(&self, base: BaseManifold) -> Result<()> {
        if self.n_theta < 8 {
            return Err(Error::Validation(format!(
                "need at least 8 theta samples, got {}",
                self.n_theta
            )));
        }
        if base == BaseManifold::Circle {
            if self.n_x < 8 {
                return Err(Error::Validation(format!(
                    "need at least 8 x samples, got {}",
                    self.n_x
                )));
            }
            if self.n_fiber < 16 {
                return Err(Error::Validation(format!(
                    "need at least 16 fiber samples, got {}",
                    self.n_fiber
                )));
            }
        }
        Ok(())
    }

    fn fiber_points(&self, base: BaseManifold) -> Vec<(f64, f64)> {
        match base {
            BaseManifold::Point => vec![(1.0, 0.0), (-1.0, 0.0)],
            BaseManifold::Circle => (0..self.n_fiber)
                .map(|l| {
                    let psi = 2.0 * PI * l as f64 / self.n_fiber as f64;
                    (psi.cos(), psi.sin())
                })
                .collect(),
        }
    }

    fn x_points(&self, base: BaseManifold) -> Vec<f64> {
        match base {
            BaseManifold::Point => vec![0.0],
            BaseManifold::Circle => (0..self.n_x)
                .map(|j| 2.0 * PI * j as f64 / self.n_x as f64)
                .collect(),
        }
    }
}

/// Sweep the principal symbol over both boundary fibers and report
/// `(margin > tol, margin)` where the margin is the smallest singular value
/// seen. A vanishing margin is reported as is.
pub fn check_uniform_ellipticity(spec: &OperatorSpec, grid: SymbolGrid) -> Result<(bool, f64)> {
    grid.validate(spec.base())?;
    let fibers = grid.fiber_points(spec.base());
    let xs = grid.x_points(spec.base());
    let margin = (0..grid.n_theta)
        .into_par_iter()
        .map(|i| {
            let theta = 2.0 * PI * i as f64 / grid.n_theta as f64;
            let mut local = f64::INFINITY;
            for side in [Side::Minus, Side::Plus] {
                for &x in &xs {
                    for &(tau, xi) in &fibers {
                        let pt = CospherePoint { theta, x, tau, xi };
                        let value = evaluate_principal_symbol(spec, side, &pt);
                        local = local.min(linalg::smallest_singular_value(&value));
                    }
                }
            }
            local
        })
        .reduce(|| f64::INFINITY, f64::min);
    Ok((margin > ELLIPTICITY_TOL, margin))
}

/// Truncation sweep configuration for the boundary-operator invertibility
/// test backing the total Fredholm criterion.
#[derive(Debug, Clone)]
pub struct FredholmCheckConfig {
    pub radii: Vec<usize>,
    pub invertibility_tol: f64,
    pub allow_large: bool,
}

impl FredholmCheckConfig {
    pub fn default_for(base: BaseManifold) -> Self {
        FredholmCheckConfig {
            radii: match base {
                BaseManifold::Point => vec![32, 64],
                BaseManifold::Circle => vec![8, 12],
            },
            invertibility_tol: 1e-6,
            allow_large: false,
        }
    }
}

/// Total Fredholm criterion: the symbol must be uniformly elliptic and both
/// boundary operators (full order, at the trivial twist) must be invertible,
/// tested through the finite-section singular-value sweep. Non-elliptic specs
/// short-circuit to `false` without touching the oracle. Twisted boundary
/// operators are unitarily conjugate to these and add nothing to the test.
pub fn check_total_fredholm(
    spec: &OperatorSpec,
    grid: SymbolGrid,
    config: &FredholmCheckConfig,
) -> Result<bool> {
    let (elliptic, _) = check_uniform_ellipticity(spec, grid)?;
    if !elliptic {
        return Ok(false);
    }
    for side in [Side::Minus, Side::Plus] {
        let op = boundary_operator(spec, side, true);
        let assembler = DifferentialAssembler::new(&op);
        let margin =
            oracle::invertibility_margin(&assembler, &config.radii, config.allow_large)?;
        if margin <= config.invertibility_tol {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symbol::periodic::{PeriodicFunction, SemiPeriodicCoefficient};
    use num_complex::Complex64;

    fn one() -> Complex64 {
        Complex64::new(1.0, 0.0)
    }

    fn scalar_spec(base: BaseManifold, terms: Vec<((usize, usize), Complex64)>) -> OperatorSpec {
        let order = terms.iter().map(|((j, a), _)| j + a).max().unwrap_or(0);
        OperatorSpec::new(
            base,
            1,
            order,
            terms
                .into_iter()
                .map(|((j, a), z)| {
                    (
                        (j, a),
                        SemiPeriodicCoefficient::symmetric(PeriodicFunction::constant_scalar(z)),
                    )
                })
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn tau_over_point_base_is_elliptic() {
        let spec = scalar_spec(BaseManifold::Point, vec![((1, 0), one())]);
        let (elliptic, margin) = check_uniform_ellipticity(&spec, SymbolGrid::default()).unwrap();
        assert!(elliptic);
        assert!((margin - 1.0).abs() < 1e-12);
    }

    #[test]
    fn tau_over_circle_base_vanishes_on_the_fiber() {
        let spec = scalar_spec(BaseManifold::Circle, vec![((1, 0), one())]);
        let (elliptic, margin) = check_uniform_ellipticity(&spec, SymbolGrid::default()).unwrap();
        assert!(!elliptic);
        assert!(margin < 1e-12, "margin {margin}");
    }

    #[test]
    fn cauchy_riemann_symbol_has_unit_margin() {
        // tau + i xi never vanishes on the unit fiber: |tau + i xi| = 1
        let spec = scalar_spec(
            BaseManifold::Circle,
            vec![((1, 0), one()), ((0, 1), Complex64::new(0.0, 1.0))],
        );
        let (elliptic, margin) = check_uniform_ellipticity(&spec, SymbolGrid::default()).unwrap();
        assert!(elliptic);
        assert!((margin - 1.0).abs() < 1e-12, "margin {margin}");
    }

    #[test]
    fn degenerate_top_order_is_non_elliptic() {
        let spec = OperatorSpec::new(
            BaseManifold::Point,
            1,
            1,
            vec![(
                (0, 0),
                SemiPeriodicCoefficient::symmetric(PeriodicFunction::constant_scalar(one())),
            )],
        )
        .unwrap();
        assert!(!spec.top_order_present());
        let (elliptic, margin) = check_uniform_ellipticity(&spec, SymbolGrid::default()).unwrap();
        assert!(!elliptic);
        assert_eq!(margin, 0.0);
    }

    #[test]
    fn coarse_grids_are_rejected() {
        let spec = scalar_spec(BaseManifold::Circle, vec![((1, 0), one())]);
        let grid = SymbolGrid {
            n_theta: 4,
            n_x: 64,
            n_fiber: 64,
        };
        assert!(check_uniform_ellipticity(&spec, grid).is_err());
    }
}
