//! Operator specifications and principal-symbol evaluation.

use super::periodic::{PeriodicFunction, SemiPeriodicCoefficient};
use super::Side;
use crate::error::{Error, Result};
use crate::linalg::{self, CMat};
use num_complex::Complex64;
use std::collections::BTreeMap;

/// The compact fiber of the cylinder. Over a point the cosphere fiber
/// degenerates to the two signs of tau; over a circle it is a full circle
/// parametrized by (tau, xi) = (cos psi, sin psi).
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BaseManifold {
    Point,
    Circle,
}

const COSPHERE_TOL: f64 = 1e-12;

/// A point of the cosphere bundle over the boundary torus: angles (theta, x)
/// and a unit covector (tau, xi). For a point base x and xi are fixed at 0.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CospherePoint {
    pub theta: f64,
    pub x: f64,
    pub tau: f64,
    pub xi: f64,
}

impl CospherePoint {
    pub fn new(theta: f64, x: f64, tau: f64, xi: f64) -> Result<Self> {
        let r = tau * tau + xi * xi;
        if (r - 1.0).abs() > COSPHERE_TOL {
            return Err(Error::Validation(format!(
                "cosphere covector not unit length: tau^2 + xi^2 = {r:.15}"
            )));
        }
        Ok(CospherePoint { theta, x, tau, xi })
    }

    /// Fiber point over a point base: tau is +1 or -1, xi = 0.
    pub fn point_fiber(theta: f64, tau_positive: bool) -> Self {
        CospherePoint {
            theta,
            x: 0.0,
            tau: if tau_positive { 1.0 } else { -1.0 },
            xi: 0.0,
        }
    }

    /// Fiber angle parametrization over a circle base.
    pub fn circle(theta: f64, x: f64, psi: f64) -> Self {
        CospherePoint {
            theta,
            x,
            tau: psi.cos(),
            xi: psi.sin(),
        }
    }
}

/// A semi-periodic differential operator `L Lambda^N` given through the
/// periodic limits of its coefficients, indexed by derivative orders (j in t,
/// alpha along the fiber).
///
/// Degenerate specs whose top-order sum is empty are allowed (the order
/// reduction alone, for instance, has principal symbol zero); they simply can
/// never pass the ellipticity check.
#[derive(Debug, Clone, PartialEq)]
pub struct OperatorSpec {
    base: BaseManifold,
    k: usize,
    order: usize,
    terms: BTreeMap<(usize, usize), SemiPeriodicCoefficient>,
}

impl OperatorSpec {
    pub fn new(
        base: BaseManifold,
        k: usize,
        order: usize,
        terms: Vec<((usize, usize), SemiPeriodicCoefficient)>,
    ) -> Result<Self> {
        if k == 0 {
            return Err(Error::Validation("matrix size k must be positive".into()));
        }
        let mut map = BTreeMap::new();
        for ((j, alpha), coeff) in terms {
            if coeff.k() != k {
                return Err(Error::MatrixSizeMismatch {
                    left: coeff.k(),
                    right: k,
                });
            }
            if j + alpha > order {
                return Err(Error::Validation(format!(
                    "term (j={j}, alpha={alpha}) exceeds declared order {order}"
                )));
            }
            if base == BaseManifold::Point {
                if alpha != 0 {
                    return Err(Error::Validation(format!(
                        "point base admits no fiber derivatives, got alpha={alpha}"
                    )));
                }
                for side in [Side::Minus, Side::Plus] {
                    if !coeff.side(side).q_support_is_zero() {
                        return Err(Error::Validation(
                            "point base requires q = 0 in every coefficient mode".into(),
                        ));
                    }
                }
            }
            if map.insert((j, alpha), coeff).is_some() {
                return Err(Error::Validation(format!(
                    "duplicate term (j={j}, alpha={alpha})"
                )));
            }
        }
        Ok(OperatorSpec {
            base,
            k,
            order,
            terms: map,
        })
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

    pub fn terms(&self) -> impl Iterator<Item = (&(usize, usize), &SemiPeriodicCoefficient)> {
        self.terms.iter()
    }

    pub fn top_order_terms(&self) -> impl Iterator<Item = (&(usize, usize), &SemiPeriodicCoefficient)> {
        let order = self.order;
        self.terms.iter().filter(move |((j, a), _)| j + a == order)
    }

    /// Whether any top-order coefficient is present; without one the declared
    /// order is nominal and the principal symbol vanishes identically.
    pub fn top_order_present(&self) -> bool {
        self.top_order_terms().any(|(_, c)| {
            !c.side(Side::Minus).is_zero() || !c.side(Side::Plus).is_zero()
        })
    }

    /// The spec whose coefficient family is the pointwise conjugate transpose
    /// of this one, term by term.
    pub fn conj_transpose_family(&self) -> Self {
        let terms = self
            .terms
            .iter()
            .map(|(key, c)| (*key, c.conj_transpose()))
            .collect();
        OperatorSpec {
            base: self.base,
            k: self.k,
            order: self.order,
            terms,
        }
    }

    /// Exchange the two periodic limits in every coefficient.
    pub fn swap_sides(&self) -> Self {
        let terms = self
            .terms
            .iter()
            .map(|(key, c)| (*key, c.swap_sides()))
            .collect();
        OperatorSpec {
            base: self.base,
            k: self.k,
            order: self.order,
            terms,
        }
    }

    /// Termwise sum of two specs of the same shape.
    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.base != other.base || self.k != other.k || self.order != other.order {
            return Err(Error::Validation(
                "can only add specs with matching base, size and order".into(),
            ));
        }
        let mut terms = self.terms.clone();
        for (key, c) in &other.terms {
            match terms.get_mut(key) {
                Some(existing) => {
                    let merged = SemiPeriodicCoefficient::new(
                        existing.side(Side::Minus).add(c.side(Side::Minus))?,
                        existing.side(Side::Plus).add(c.side(Side::Plus))?,
                    )?;
                    *existing = merged;
                }
                None => {
                    terms.insert(*key, c.clone());
                }
            }
        }
        Ok(OperatorSpec {
            base: self.base,
            k: self.k,
            order: self.order,
            terms,
        })
    }

    /// Insert or replace one term (builder-style).
    pub fn with_term(mut self, j: usize, alpha: usize, coeff: SemiPeriodicCoefficient) -> Result<Self> {
        if coeff.k() != self.k {
            return Err(Error::MatrixSizeMismatch {
                left: coeff.k(),
                right: self.k,
            });
        }
        if j + alpha > self.order {
            return Err(Error::Validation(format!(
                "term (j={j}, alpha={alpha}) exceeds declared order {}",
                self.order
            )));
        }
        self.terms.insert((j, alpha), coeff);
        Ok(self)
    }

    /// Pointwise product of two order-zero (multiplier type) specs: the single
    /// coefficient of each side is multiplied.
    pub fn pointwise_product(&self, other: &Self) -> Result<Self> {
        if self.order != 0 || other.order != 0 {
            return Err(Error::Validation(
                "pointwise products are defined for order-zero specs only".into(),
            ));
        }
        if self.base != other.base || self.k != other.k {
            return Err(Error::Validation(
                "pointwise product needs matching base and size".into(),
            ));
        }
        let zero = PeriodicFunction::zero(self.k);
        let side_fn = |side: Side| -> Result<PeriodicFunction> {
            let a = self
                .terms
                .get(&(0, 0))
                .map(|c| c.side(side).clone())
                .unwrap_or_else(|| zero.clone());
            let b = other
                .terms
                .get(&(0, 0))
                .map(|c| c.side(side).clone())
                .unwrap_or_else(|| zero.clone());
            a.product(&b)
        };
        let coeff = SemiPeriodicCoefficient::new(side_fn(Side::Minus)?, side_fn(Side::Plus)?)?;
        OperatorSpec::new(self.base, self.k, 0, vec![((0, 0), coeff)])
    }
}

/// Shared accumulation `sum a_{j,alpha}(theta, x) tau^j xi^alpha` over a term
/// list; both the principal symbol and the boundary symbols evaluate through
/// this one routine so their values agree bit for bit.
pub(super) fn accumulate_symbol<'a>(
    k: usize,
    terms: impl Iterator<Item = (usize, usize, &'a PeriodicFunction)>,
    pt: &CospherePoint,
) -> CMat {
    let mut out = linalg::zeros(k);
    for (j, alpha, coeff) in terms {
        let weight = pt.tau.powi(j as i32) * pt.xi.powi(alpha as i32);
        if weight == 0.0 {
            continue;
        }
        let value = coeff.eval(pt.theta, pt.x);
        let w = Complex64::new(weight, 0.0);
        out.zip_mut_with(&value, |o, v| *o += w * v);
    }
    out
}

/// Value of the extended principal symbol at a boundary cosphere point: only
/// the top-order terms of the chosen periodic limit contribute.
pub fn evaluate_principal_symbol(spec: &OperatorSpec, side: Side, pt: &CospherePoint) -> CMat {
    accumulate_symbol(
        spec.k(),
        spec.top_order_terms()
            .map(|((j, a), c)| (*j, *a, c.side(side))),
        pt,
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    fn one() -> Complex64 {
        Complex64::new(1.0, 0.0)
    }

    /// D_t Lambda over a point base: symbol tau.
    pub(crate) fn dt_spec_point() -> OperatorSpec {
        OperatorSpec::new(
            BaseManifold::Point,
            1,
            1,
            vec![(
                (1, 0),
                SemiPeriodicCoefficient::symmetric(PeriodicFunction::constant_scalar(one())),
            )],
        )
        .unwrap()
    }

    #[test]
    fn dt_symbol_is_tau() {
        let spec = dt_spec_point();
        for (theta, tau_pos) in [(0.0, true), (1.3, false), (2.0, true)] {
            let pt = CospherePoint::point_fiber(theta, tau_pos);
            let v = evaluate_principal_symbol(&spec, Side::Plus, &pt);
            assert!((v[(0, 0)] - Complex64::new(pt.tau, 0.0)).norm() < 1e-15);
        }
    }

    #[test]
    fn order_zero_constant_symbol() {
        let c = Complex64::new(2.0, -1.0);
        let spec = OperatorSpec::new(
            BaseManifold::Circle,
            1,
            0,
            vec![(
                (0, 0),
                SemiPeriodicCoefficient::symmetric(PeriodicFunction::constant_scalar(c)),
            )],
        )
        .unwrap();
        let pt = CospherePoint::circle(0.4, 1.0, 0.9);
        let v = evaluate_principal_symbol(&spec, Side::Minus, &pt);
        assert!((v[(0, 0)] - c).norm() < 1e-15);
    }

    #[test]
    fn vector_field_symbol_adds_fiber_part() {
        // D_t + c(x) D_x with c(x) = e^{ix}: symbol tau + e^{ix} xi
        let spec = OperatorSpec::new(
            BaseManifold::Circle,
            1,
            1,
            vec![
                (
                    (1, 0),
                    SemiPeriodicCoefficient::symmetric(PeriodicFunction::constant_scalar(one())),
                ),
                (
                    (0, 1),
                    SemiPeriodicCoefficient::symmetric(PeriodicFunction::scalar_mode(
                        1, 0, 1, one(),
                    )),
                ),
            ],
        )
        .unwrap();
        let pt = CospherePoint::circle(0.3, 0.8, 1.1);
        let v = evaluate_principal_symbol(&spec, Side::Plus, &pt);
        let expect = Complex64::new(pt.tau, 0.0)
            + Complex64::new(0.0, pt.x).exp() * Complex64::new(pt.xi, 0.0);
        assert!((v[(0, 0)] - expect).norm() < 1e-14);
    }

    #[test]
    fn lower_order_terms_do_not_touch_the_symbol() {
        let spec = dt_spec_point();
        let perturbed = spec
            .clone()
            .with_term(
                0,
                0,
                SemiPeriodicCoefficient::symmetric(PeriodicFunction::scalar_mode(
                    1,
                    2,
                    0,
                    Complex64::new(17.0, -3.0),
                )),
            )
            .unwrap();
        for i in 0..32 {
            let pt = CospherePoint::point_fiber(0.2 * i as f64, i % 2 == 0);
            let a = evaluate_principal_symbol(&spec, Side::Minus, &pt);
            let b = evaluate_principal_symbol(&perturbed, Side::Minus, &pt);
            // bit-for-bit: lower order must not even perturb rounding
            assert_eq!(a[(0, 0)], b[(0, 0)]);
        }
    }

    #[test]
    fn symbol_is_linear_in_the_spec() {
        let s1 = dt_spec_point();
        let s2 = OperatorSpec::new(
            BaseManifold::Point,
            1,
            1,
            vec![(
                (1, 0),
                SemiPeriodicCoefficient::symmetric(PeriodicFunction::scalar_mode(
                    1,
                    1,
                    0,
                    Complex64::new(0.0, 0.5),
                )),
            )],
        )
        .unwrap();
        let sum = s1.add(&s2).unwrap();
        let pt = CospherePoint::point_fiber(0.7, true);
        let v1 = evaluate_principal_symbol(&s1, Side::Plus, &pt);
        let v2 = evaluate_principal_symbol(&s2, Side::Plus, &pt);
        let vs = evaluate_principal_symbol(&sum, Side::Plus, &pt);
        assert!((vs[(0, 0)] - (v1[(0, 0)] + v2[(0, 0)])).norm() < 1e-15);
    }

    #[test]
    fn point_base_rejects_fiber_content() {
        let err = OperatorSpec::new(
            BaseManifold::Point,
            1,
            1,
            vec![(
                (0, 1),
                SemiPeriodicCoefficient::symmetric(PeriodicFunction::constant_scalar(one())),
            )],
        );
        assert!(err.is_err());
        let err = OperatorSpec::new(
            BaseManifold::Point,
            1,
            0,
            vec![(
                (0, 0),
                SemiPeriodicCoefficient::symmetric(PeriodicFunction::scalar_mode(1, 0, 1, one())),
            )],
        );
        assert!(err.is_err());
    }

    #[test]
    fn cosphere_point_enforces_unit_covector() {
        assert!(CospherePoint::new(0.0, 0.0, 0.6, 0.8).is_ok());
        assert!(CospherePoint::new(0.0, 0.0, 0.6, 0.81).is_err());
    }
}
