//! Reference symbols used by the calibration runs and the test suites.
//!
//! The two load-bearing constructions:
//!
//! * the Toeplitz calibration pair over a point base (symbol 1 on the
//!   tau = -1 copy, e^{i theta} on the tau = +1 copy), whose truncation index
//!   -1 freezes the winding orientation convention;
//! * the degree-one SU(2) suspension symbol on T^2 x S^1, which freezes the
//!   odd-Chern orientation sign against the truncation oracle.
//!
//! Both are smooth with unit invertibility margin, so every validity check
//! downstream sees them comfortably.

use crate::linalg::{self, CMat};
use crate::symbol::{BaseManifold, OperatorSpec, PeriodicFunction, SemiPeriodicCoefficient};
use crate::winding::LoopSample;
use crate::{chern::SymbolGrid3, error::Result};
use ndarray::Array2;
use num_complex::Complex64;
use rand::Rng;
use std::f64::consts::PI;

/// Wrap an angle to the principal value in (-pi, pi].
fn principal_angle(t: f64) -> f64 {
    t.sin().atan2(t.cos())
}

/// C-infinity transition: 0 at v <= 0, 1 at v >= 1, flat at both ends.
/// The exponent 1.5 keeps the spectral tail of the suspension symbols below
/// the aliasing bar at 48 samples per axis with two orders of headroom.
fn smooth_step(v: f64) -> f64 {
    fn bump(v: f64) -> f64 {
        if v > 0.0 {
            (-1.5 / v).exp()
        } else {
            0.0
        }
    }
    let a = bump(v);
    let b = bump(1.0 - v);
    a / (a + b)
}

/// Radius of the ball on which the suspension symbols differ from the
/// identity; must stay below pi so the symbol is constant across the seams.
const SUSPENSION_RADIUS: f64 = 3.1;

fn suspension_quaternion(u: [f64; 3]) -> [f64; 4] {
    let r = (u[0] * u[0] + u[1] * u[1] + u[2] * u[2]).sqrt();
    let chi = if r >= SUSPENSION_RADIUS {
        0.0
    } else {
        PI * (1.0 - smooth_step(r / SUSPENSION_RADIUS))
    };
    let q0 = chi.cos();
    if r < 1e-14 {
        return [q0, 0.0, 0.0, 0.0];
    }
    let s = chi.sin() / r;
    [q0, s * u[0], s * u[1], s * u[2]]
}

fn su2_from_quaternion(q: [f64; 4]) -> CMat {
    // q0 I + i (q1 s1 + q2 s2 + q3 s3), Pauli basis
    let mut m = linalg::zeros(2);
    m[(0, 0)] = Complex64::new(q[0], q[3]);
    m[(0, 1)] = Complex64::new(q[2], q[1]);
    m[(1, 0)] = Complex64::new(-q[2], q[1]);
    m[(1, 1)] = Complex64::new(q[0], -q[3]);
    m
}

/// Value of the degree-one SU(2) suspension symbol at one point of
/// T^2 x S^1: the identity outside a ball, sweeping the whole of SU(2) with
/// degree one inside it. Unitary everywhere.
pub fn su2_suspension_value(theta: f64, x: f64, psi: f64) -> CMat {
    let u = [
        principal_angle(theta),
        principal_angle(x),
        principal_angle(psi),
    ];
    su2_from_quaternion(suspension_quaternion(u))
}

/// The suspension symbol sampled on a grid.
pub fn su2_suspension_grid(n: (usize, usize, usize)) -> Result<SymbolGrid3> {
    SymbolGrid3::from_fn(n, 2, su2_suspension_value)
}

/// The Toeplitz calibration loops over a point base: constant 1 on the
/// tau = -1 fiber, e^{i theta} on the tau = +1 fiber.
pub fn toeplitz_calibration_loops(n: usize) -> (LoopSample, LoopSample) {
    let ones = LoopSample::constant(n, linalg::identity(1)).expect("n >= 16");
    let z = LoopSample::from_fn(n, |theta| linalg::scalar(Complex64::new(0.0, theta).exp()))
        .expect("n >= 16");
    (ones, z)
}

/// Degree-one unit normal field on T^2 (south pole at the origin of the
/// fundamental square, north pole outside a ball).
pub fn degree_one_normal_field(theta: f64, x: f64) -> [f64; 3] {
    let u = [principal_angle(theta), principal_angle(x)];
    let rho = (u[0] * u[0] + u[1] * u[1]).sqrt();
    let eta = if rho >= SUSPENSION_RADIUS {
        0.0
    } else {
        PI * (1.0 - smooth_step(rho / SUSPENSION_RADIUS))
    };
    if rho < 1e-14 {
        return [0.0, 0.0, eta.cos()];
    }
    let s = eta.sin() / rho;
    [s * u[0], s * u[1], eta.cos()]
}

/// The traceless coupling `i n(theta, x) . sigma` with n the degree-one
/// field: squares to -I, so `tau I + xi (i n . sigma)` is unitary on the
/// cosphere fiber.
pub fn dirac_coupling_value(theta: f64, x: f64) -> CMat {
    let n = degree_one_normal_field(theta, x);
    let mut m = linalg::zeros(2);
    m[(0, 0)] = Complex64::new(0.0, n[2]);
    m[(0, 1)] = Complex64::new(n[1], n[0]);
    m[(1, 0)] = Complex64::new(-n[1], n[0]);
    m[(1, 1)] = Complex64::new(0.0, -n[2]);
    m
}

/// First-order 2x2 spec over a circle base whose plus boundary symbol is the
/// Dirac-type `tau I + xi i n.sigma` (a nonzero even index) while the minus
/// side is the scalar Cauchy-Riemann symbol `(tau + i xi) I` (index zero).
/// Coefficients of the coupling are recovered from samples on `grid_n`^2.
pub fn dirac_type_spec(grid_n: usize) -> Result<OperatorSpec> {
    let coupling = ndarray::Array4::from_shape_fn((grid_n, grid_n, 2, 2), |(it, ix, r, c)| {
        let theta = 2.0 * PI * it as f64 / grid_n as f64;
        let x = 2.0 * PI * ix as f64 / grid_n as f64;
        dirac_coupling_value(theta, x)[(r, c)]
    });
    let coupling = PeriodicFunction::from_samples(&coupling, 1e-10);
    let eye = PeriodicFunction::identity(2);
    let i_eye = {
        let mut m = linalg::identity(2);
        m.mapv_inplace(|v| v * Complex64::new(0.0, 1.0));
        PeriodicFunction::constant(m)
    };
    OperatorSpec::new(
        BaseManifold::Circle,
        2,
        1,
        vec![
            ((1, 0), SemiPeriodicCoefficient::symmetric(eye)),
            ((0, 1), SemiPeriodicCoefficient::new(i_eye, coupling)?),
        ],
    )
}

/// Random real trigonometric polynomial on T^3 with the given degree bound
/// and amplitude; coefficients decay with the mode order.
fn random_trig_poly(
    rng: &mut impl Rng,
    degree: i64,
    amplitude: f64,
) -> impl Fn(f64, f64, f64) -> f64 {
    let mut modes = Vec::new();
    for p in -degree..=degree {
        for q in -degree..=degree {
            for l in -degree..=degree {
                if (p, q, l) < (0, 0, 0) {
                    continue; // conjugate pair handled by the cosine form
                }
                let decay = 1.0 + (p * p + q * q + l * l) as f64;
                let a: f64 = rng.gen_range(-1.0..1.0) * amplitude / decay;
                let b: f64 = rng.gen_range(-1.0..1.0) * amplitude / decay;
                modes.push((p as f64, q as f64, l as f64, a, b));
            }
        }
    }
    move |theta: f64, x: f64, psi: f64| {
        modes
            .iter()
            .map(|(p, q, l, a, b)| {
                let phase = p * theta + q * x + l * psi;
                a * phase.cos() + b * phase.sin()
            })
            .sum()
    }
}

/// Random smooth invertible scalar symbol `exp(g + i h)` with g, h low-degree
/// trigonometric polynomials; never vanishes, margin `exp(-max |g|)` at worst.
pub fn random_smooth_scalar(rng: &mut impl Rng, n: (usize, usize, usize)) -> SymbolGrid3 {
    let g = random_trig_poly(rng, 2, 0.3);
    let h = random_trig_poly(rng, 2, 0.6);
    SymbolGrid3::from_fn(n, 1, move |theta, x, psi| {
        linalg::scalar(Complex64::new(g(theta, x, psi), h(theta, x, psi)).exp())
    })
    .expect("resolutions are valid")
}

/// Random smooth 2x2 unitary symbol `exp(i H)` with H a low-degree Hermitian
/// trigonometric polynomial; contractible, so its odd Chern integral is 0.
pub fn random_smooth_unitary2(rng: &mut impl Rng, n: (usize, usize, usize)) -> SymbolGrid3 {
    let h0 = random_trig_poly(rng, 1, 0.5);
    let h1 = random_trig_poly(rng, 1, 0.5);
    let h2 = random_trig_poly(rng, 1, 0.5);
    let h3 = random_trig_poly(rng, 1, 0.5);
    SymbolGrid3::from_fn(n, 2, move |theta, x, psi| {
        // exp(i (h0 I + v . sigma)) in closed form
        let v = [h1(theta, x, psi), h2(theta, x, psi), h3(theta, x, psi)];
        let r = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
        let phase = Complex64::new(0.0, h0(theta, x, psi)).exp();
        let (cos_r, sinc_r) = if r < 1e-14 {
            (1.0, 1.0)
        } else {
            (r.cos(), r.sin() / r)
        };
        let mut m = linalg::zeros(2);
        m[(0, 0)] = phase * Complex64::new(cos_r, sinc_r * v[2]);
        m[(0, 1)] = phase * Complex64::new(sinc_r * v[1], sinc_r * v[0]);
        m[(1, 0)] = phase * Complex64::new(-sinc_r * v[1], sinc_r * v[0]);
        m[(1, 1)] = phase * Complex64::new(cos_r, -sinc_r * v[2]);
        m
    })
    .expect("resolutions are valid")
}

/// Random loop `z^w exp(p(theta))` with prescribed winding `w` of the
/// determinant (k = 1).
pub fn random_scalar_loop(rng: &mut impl Rng, n: usize, w: i64) -> LoopSample {
    let a: f64 = rng.gen_range(-0.5..0.5);
    let b: f64 = rng.gen_range(-0.5..0.5);
    let c: f64 = rng.gen_range(-0.5..0.5);
    LoopSample::from_fn(n, move |theta| {
        let p = Complex64::new(a * theta.cos(), b * theta.sin() + c * (2.0 * theta).cos());
        linalg::scalar(Complex64::new(0.0, w as f64 * theta).exp() * p.exp())
    })
    .expect("n >= 16")
}

/// A unitary 2x2 matrix from four random angles, for conjugation tests.
pub fn random_unitary2(rng: &mut impl Rng) -> CMat {
    let alpha: f64 = rng.gen_range(0.0..2.0 * PI);
    let beta: f64 = rng.gen_range(0.0..2.0 * PI);
    let gamma: f64 = rng.gen_range(0.0..2.0 * PI);
    let delta: f64 = rng.gen_range(0.0..2.0 * PI);
    let c = (alpha.cos(), alpha.sin());
    let mut m = Array2::zeros((2, 2));
    m[(0, 0)] = Complex64::new(0.0, beta).exp() * c.0;
    m[(0, 1)] = Complex64::new(0.0, gamma).exp() * c.1;
    m[(1, 0)] = -Complex64::new(0.0, delta - gamma).exp() * c.1;
    m[(1, 1)] = Complex64::new(0.0, delta - beta).exp() * c.0;
    m
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suspension_is_unitary_everywhere() {
        for (theta, x, psi) in [
            (0.0, 0.0, 0.0),
            (0.3, -1.2, 2.0),
            (3.1, 3.1, 3.1),
            (1.0, 0.0, -2.5),
        ] {
            let m = su2_suspension_value(theta, x, psi);
            let mh = linalg::conj_transpose(&m);
            let prod = linalg::matmul(&m, &mh);
            assert!(linalg::max_abs_diff(&prod, &linalg::identity(2)) < 1e-12);
        }
    }

    #[test]
    fn suspension_is_identity_outside_the_ball() {
        let m = su2_suspension_value(3.0, 3.0, 3.0);
        assert!(linalg::max_abs_diff(&m, &linalg::identity(2)) < 1e-14);
        // and hits the antipode at the center
        let c = su2_suspension_value(0.0, 0.0, 0.0);
        let mut neg = linalg::identity(2);
        neg.mapv_inplace(|v| -v);
        assert!(linalg::max_abs_diff(&c, &neg) < 1e-14);
    }

    #[test]
    fn dirac_coupling_squares_to_minus_identity() {
        for (theta, x) in [(0.1, 0.2), (2.0, -1.0), (3.0, 3.0)] {
            let c = dirac_coupling_value(theta, x);
            let sq = linalg::matmul(&c, &c);
            let mut neg = linalg::identity(2);
            neg.mapv_inplace(|v| -v);
            assert!(linalg::max_abs_diff(&sq, &neg) < 1e-12);
        }
    }

    #[test]
    fn dirac_spec_reproduces_the_coupling() {
        let spec = dirac_type_spec(64).unwrap();
        let bs = crate::symbol::boundary_symbol(&spec, crate::symbol::Side::Plus);
        for (theta, x, psi) in [(0.3, 0.9, 0.7), (2.2, -0.4, 1.9)] {
            let pt = crate::symbol::CospherePoint::circle(theta, x, psi);
            let got = bs.eval(&pt);
            let mut expect = linalg::identity(2);
            expect.mapv_inplace(|v| v * Complex64::new(psi.cos(), 0.0));
            let c = dirac_coupling_value(theta, x);
            expect.zip_mut_with(&c, |e, v| *e += Complex64::new(psi.sin(), 0.0) * v);
            // bounded by the coefficient tail dropped at recovery
            assert!(
                linalg::max_abs_diff(&got, &expect) < 1e-6,
                "mismatch at ({theta}, {x}, {psi}): {:.2e}",
                linalg::max_abs_diff(&got, &expect)
            );
        }
    }

    #[test]
    fn random_unitary2_is_unitary() {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        for _ in 0..8 {
            let u = random_unitary2(&mut rng);
            let prod = linalg::matmul(&u, &linalg::conj_transpose(&u));
            assert!(linalg::max_abs_diff(&prod, &linalg::identity(2)) < 1e-12);
        }
    }
}
