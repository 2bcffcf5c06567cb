//! Topological index over a circle base: numerical integration of the odd
//! Chern 3-form.
//!
//! For an invertible symbol `a` on the cosphere bundle of the 2-torus
//! (coordinates theta, x and fiber angle psi) the index is
//!
//! `F(a) = s * (-1/(24 pi^2)) * integral tr((a^{-1} da)^3)`
//!
//! with the 3-form coefficient antisymmetrized over the three axes. The
//! derivatives are spectral (Fourier) per axis and the quadrature is the
//! periodic trapezoid rule, so the raw integral converges spectrally for
//! smooth grids. The orientation sign `s` is frozen once against the
//! finite-section oracle on the degree-one calibration symbol; the oracle,
//! not the constant, is the arbiter of conventions.

use crate::error::{Error, Result};
use crate::fft;
use crate::linalg::{self, CMat};
use crate::symbol::{BaseManifold, BoundarySymbol, CospherePoint};
use ndarray::{Array, Array3, Ix5};
use num_complex::Complex64;
use rayon::prelude::*;
use std::f64::consts::PI;

pub type Array5 = Array<Complex64, Ix5>;

/// Samples must be invertible at least to this margin.
pub const GRID_INVERTIBILITY_TOL: f64 = 1e-8;
/// Top-third spectral derivative energy fraction allowed per axis.
pub const SMOOTHNESS_ENERGY_TOL: f64 = 1e-6;
/// Residual allowed between the raw integral and the nearest integer.
pub const FEDOSOV_RESIDUAL_TOL: f64 = 0.05;

/// Orientation of `d theta ^ d x ^ d psi` relative to the analytic index,
/// fixed by the calibration run: with this sign the degree-one suspension
/// symbol integrates to the same integer the truncation oracle computes.
pub const CHERN_ORIENTATION: f64 = 1.0;

/// A matrix symbol sampled on the uniform grid of T^2 x S^1, with
/// `(tau, xi) = (cos psi, sin psi)` parametrizing the cosphere fiber.
/// Storage layout is `[theta][x][psi][row][col]`.
#[derive(Debug, Clone)]
pub struct SymbolGrid3 {
    k: usize,
    n: (usize, usize, usize),
    values: Array5,
}

impl SymbolGrid3 {
    pub fn from_fn(
        n: (usize, usize, usize),
        k: usize,
        f: impl Fn(f64, f64, f64) -> CMat + Sync,
    ) -> Result<Self> {
        let (n0, n1, n2) = n;
        if n0 < 16 || n1 < 16 || n2 < 16 {
            return Err(Error::Validation(format!(
                "symbol grid resolutions must be at least 16, got {n0}x{n1}x{n2}"
            )));
        }
        let block = n1 * n2 * k * k;
        let mut raw = vec![Complex64::new(0.0, 0.0); n0 * block];
        raw.par_chunks_mut(block).enumerate().for_each(|(i0, chunk)| {
            let theta = 2.0 * PI * i0 as f64 / n0 as f64;
            for i1 in 0..n1 {
                let x = 2.0 * PI * i1 as f64 / n1 as f64;
                for i2 in 0..n2 {
                    let psi = 2.0 * PI * i2 as f64 / n2 as f64;
                    let m = f(theta, x, psi);
                    debug_assert_eq!(m.nrows(), k);
                    for r in 0..k {
                        for c in 0..k {
                            chunk[((i1 * n2) + i2) * k * k + r * k + c] = m[(r, c)];
                        }
                    }
                }
            }
        });
        let values = Array::from_shape_vec((n0, n1, n2, k, k), raw)
            .expect("shape bookkeeping is exact");
        Ok(SymbolGrid3 { k, n, values })
    }

    /// Sample a boundary symbol over a circle base.
    pub fn from_boundary_symbol(symbol: &BoundarySymbol, n: (usize, usize, usize)) -> Result<Self> {
        if symbol.base() != BaseManifold::Circle {
            return Err(Error::Validation(
                "3-d symbol grids require a circle base".into(),
            ));
        }
        Self::from_fn(n, symbol.k(), |theta, x, psi| {
            symbol.eval(&CospherePoint::circle(theta, x, psi))
        })
    }

    pub fn from_values(n: (usize, usize, usize), k: usize, values: Array5) -> Result<Self> {
        if values.dim() != (n.0, n.1, n.2, k, k) {
            return Err(Error::Validation("symbol grid shape mismatch".into()));
        }
        if n.0 < 16 || n.1 < 16 || n.2 < 16 {
            return Err(Error::Validation(format!(
                "symbol grid resolutions must be at least 16, got {}x{}x{}",
                n.0, n.1, n.2
            )));
        }
        Ok(SymbolGrid3 { k, n, values })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn resolutions(&self) -> (usize, usize, usize) {
        self.n
    }

    pub fn values(&self) -> &Array5 {
        &self.values
    }

    pub fn value(&self, i0: usize, i1: usize, i2: usize) -> CMat {
        let k = self.k;
        ndarray::Array2::from_shape_fn((k, k), |(r, c)| self.values[(i0, i1, i2, r, c)])
    }

    /// Smallest singular value over the whole grid.
    pub fn margin(&self) -> f64 {
        let (n0, _, _) = self.n;
        (0..n0)
            .into_par_iter()
            .map(|i0| {
                let mut local = f64::INFINITY;
                for i1 in 0..self.n.1 {
                    for i2 in 0..self.n.2 {
                        local = local.min(linalg::smallest_singular_value(&self.value(i0, i1, i2)));
                    }
                }
                local
            })
            .reduce(|| f64::INFINITY, f64::min)
    }

    /// Check invertibility at every sample and the aliasing diagnostic along
    /// each axis.
    pub fn validate(&self) -> Result<()> {
        let margin = self.margin();
        if margin <= GRID_INVERTIBILITY_TOL {
            return Err(Error::SingularSample {
                context: "symbol grid".into(),
                sigma: margin,
                tol: GRID_INVERTIBILITY_TOL,
            });
        }
        for (axis, name) in [(0usize, "theta"), (1, "x"), (2, "psi")] {
            let (top, total) = self.derivative_energy_split(axis);
            if total > 0.0 {
                let ratio = top / total;
                if ratio > SMOOTHNESS_ENERGY_TOL {
                    return Err(Error::AliasedGrid {
                        axis: name,
                        ratio,
                        tol: SMOOTHNESS_ENERGY_TOL,
                    });
                }
            }
        }
        Ok(())
    }

    fn derivative_energy_split(&self, axis: usize) -> (f64, f64) {
        let (n0, n1, n2) = self.n;
        let k = self.k;
        let len = [n0, n1, n2][axis];
        let mut top = 0.0;
        let mut total = 0.0;
        let mut line = vec![Complex64::new(0.0, 0.0); len];
        let (b0, b1) = match axis {
            0 => (n1, n2),
            1 => (n0, n2),
            _ => (n0, n1),
        };
        for r in 0..k {
            for c in 0..k {
                for j0 in 0..b0 {
                    for j1 in 0..b1 {
                        for (i, v) in line.iter_mut().enumerate() {
                            let idx = match axis {
                                0 => (i, j0, j1, r, c),
                                1 => (j0, i, j1, r, c),
                                _ => (j0, j1, i, r, c),
                            };
                            *v = self.values[idx];
                        }
                        let (t, tt) = fft::derivative_energy_split(&line);
                        top += t;
                        total += tt;
                    }
                }
            }
        }
        (top, total)
    }

    fn derivative_along(&self, axis: usize) -> Array5 {
        let (n0, n1, n2) = self.n;
        let k = self.k;
        let len = [n0, n1, n2][axis];
        let mut out = self.values.clone();
        let (b0, b1) = match axis {
            0 => (n1, n2),
            1 => (n0, n2),
            _ => (n0, n1),
        };
        let mut line = vec![Complex64::new(0.0, 0.0); len];
        for r in 0..k {
            for c in 0..k {
                for j0 in 0..b0 {
                    for j1 in 0..b1 {
                        for (i, v) in line.iter_mut().enumerate() {
                            let idx = match axis {
                                0 => (i, j0, j1, r, c),
                                1 => (j0, i, j1, r, c),
                                _ => (j0, j1, i, r, c),
                            };
                            *v = self.values[idx];
                        }
                        fft::spectral_derivative_line(&mut line);
                        for (i, v) in line.iter().enumerate() {
                            let idx = match axis {
                                0 => (i, j0, j1, r, c),
                                1 => (j0, i, j1, r, c),
                                _ => (j0, j1, i, r, c),
                            };
                            out[idx] = *v;
                        }
                    }
                }
            }
        }
        out
    }

    /// Pointwise product grid `self * other`.
    pub fn pointwise_product(&self, other: &Self) -> Result<Self> {
        if self.n != other.n || self.k != other.k {
            return Err(Error::Validation(
                "pointwise product needs matching grids".into(),
            ));
        }
        let k = self.k;
        let mut values = Array::zeros((self.n.0, self.n.1, self.n.2, k, k));
        for i0 in 0..self.n.0 {
            for i1 in 0..self.n.1 {
                for i2 in 0..self.n.2 {
                    for r in 0..k {
                        for c in 0..k {
                            let mut acc = Complex64::new(0.0, 0.0);
                            for m in 0..k {
                                acc += self.values[(i0, i1, i2, r, m)]
                                    * other.values[(i0, i1, i2, m, c)];
                            }
                            values[(i0, i1, i2, r, c)] = acc;
                        }
                    }
                }
            }
        }
        Self::from_values(self.n, k, values)
    }

    /// Pointwise inverse grid; errors on singular samples.
    pub fn pointwise_inverse(&self) -> Result<Self> {
        let k = self.k;
        let mut values = Array::zeros((self.n.0, self.n.1, self.n.2, k, k));
        for i0 in 0..self.n.0 {
            for i1 in 0..self.n.1 {
                for i2 in 0..self.n.2 {
                    let v = self.value(i0, i1, i2);
                    let inv = linalg::inverse(&v).ok_or_else(|| Error::SingularSample {
                        context: format!("grid point ({i0}, {i1}, {i2})"),
                        sigma: linalg::smallest_singular_value(&v),
                        tol: GRID_INVERTIBILITY_TOL,
                    })?;
                    for r in 0..k {
                        for c in 0..k {
                            values[(i0, i1, i2, r, c)] = inv[(r, c)];
                        }
                    }
                }
            }
        }
        Self::from_values(self.n, k, values)
    }
}

/// tr(w1 w2 w3) at one grid point, left-grouped products.
fn trace_triple(
    w1: &Array5,
    w2: &Array5,
    w3: &Array5,
    p: (usize, usize, usize),
    k: usize,
) -> Complex64 {
    let mut acc = Complex64::new(0.0, 0.0);
    for i in 0..k {
        for j in 0..k {
            for l in 0..k {
                acc += w1[(p.0, p.1, p.2, i, j)] * w2[(p.0, p.1, p.2, j, l)]
                    * w3[(p.0, p.1, p.2, l, i)];
            }
        }
    }
    acc
}

/// The discretized 3-form coefficient
/// `sum_{perm} sgn(perm) tr(w_{perm(theta)} w_{perm(x)} w_{perm(psi)})`
/// with `w_axis = a^{-1} (d a / d axis)` from spectral differentiation.
///
/// For scalar symbols the permutation pairs cancel term by term in floating
/// point, so the returned array is exactly zero.
pub fn odd_chern_integrand(grid: &SymbolGrid3) -> Result<Array3<Complex64>> {
    grid.validate()?;
    let (n0, n1, n2) = grid.resolutions();
    let k = grid.k();
    let derivs = [
        grid.derivative_along(0),
        grid.derivative_along(1),
        grid.derivative_along(2),
    ];
    // omega per axis: a^{-1} * da
    let mut omegas: Vec<Array5> = Vec::with_capacity(3);
    for axis in 0..3 {
        let mut w: Array5 = Array::zeros((n0, n1, n2, k, k));
        for i0 in 0..n0 {
            for i1 in 0..n1 {
                for i2 in 0..n2 {
                    let a = grid.value(i0, i1, i2);
                    let inv = linalg::inverse(&a).ok_or_else(|| Error::SingularSample {
                        context: format!("grid point ({i0}, {i1}, {i2})"),
                        sigma: linalg::smallest_singular_value(&a),
                        tol: GRID_INVERTIBILITY_TOL,
                    })?;
                    for r in 0..k {
                        for c in 0..k {
                            let mut acc = Complex64::new(0.0, 0.0);
                            for m in 0..k {
                                acc += inv[(r, m)] * derivs[axis][(i0, i1, i2, m, c)];
                            }
                            w[(i0, i1, i2, r, c)] = acc;
                        }
                    }
                }
            }
        }
        omegas.push(w);
    }
    const PERMS: [([usize; 3], f64); 6] = [
        ([0, 1, 2], 1.0),
        ([1, 0, 2], -1.0),
        ([1, 2, 0], 1.0),
        ([0, 2, 1], -1.0),
        ([2, 0, 1], 1.0),
        ([2, 1, 0], -1.0),
    ];
    let mut integrand = Array3::zeros((n0, n1, n2));
    for i0 in 0..n0 {
        for i1 in 0..n1 {
            for i2 in 0..n2 {
                let p = (i0, i1, i2);
                let mut acc = Complex64::new(0.0, 0.0);
                for (perm, sign) in PERMS {
                    let t = trace_triple(&omegas[perm[0]], &omegas[perm[1]], &omegas[perm[2]], p, k);
                    acc += Complex64::new(sign, 0.0) * t;
                }
                integrand[p] = acc;
            }
        }
    }
    Ok(integrand)
}

/// The normalized odd Chern integral
/// `s * (-1/(24 pi^2)) * integral tr((a^{-1} da)^3)`, trapezoid quadrature.
/// Real by homotopy invariance; the imaginary residue is discarded.
pub fn odd_chern_integral(grid: &SymbolGrid3) -> Result<f64> {
    let integrand = odd_chern_integrand(grid)?;
    let reals: Vec<f64> = integrand.iter().map(|z| z.re).collect();
    let sum = fft::pairwise_sum(&reals);
    let (n0, n1, n2) = grid.resolutions();
    let cell = (2.0 * PI / n0 as f64) * (2.0 * PI / n1 as f64) * (2.0 * PI / n2 as f64);
    Ok(CHERN_ORIENTATION * (-1.0 / (24.0 * PI * PI)) * sum * cell)
}

/// Round the odd Chern integral to the nearest integer; a residual above
/// `FEDOSOV_RESIDUAL_TOL` means the quadrature cannot be trusted.
pub fn fedosov_index(grid: &SymbolGrid3) -> Result<i64> {
    let value = odd_chern_integral(grid)?;
    let nearest = value.round() as i64;
    let residual = (value - nearest as f64).abs();
    if residual > FEDOSOV_RESIDUAL_TOL {
        return Err(Error::NonIntegerResult {
            value,
            residual,
            tol: FEDOSOV_RESIDUAL_TOL,
        });
    }
    Ok(nearest)
}
