//! Matrix-valued 2*pi-periodic functions stored by their Fourier modes.

use crate::error::{Error, Result};
use crate::fft;
use crate::linalg::{self, CMat};
use ndarray::Array2;
use num_complex::Complex64;
use std::collections::BTreeMap;

/// A trigonometric polynomial `a(theta, x) = sum â(p,q) e^{i(p theta + q x)}`
/// with k-by-k complex matrix coefficients and finitely many modes.
///
/// The second frequency `q` is only meaningful over a circle fiber; operator
/// specs over a point force `q = 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct PeriodicFunction {
    k: usize,
    coeffs: BTreeMap<(i64, i64), CMat>,
}

impl PeriodicFunction {
    pub fn zero(k: usize) -> Self {
        PeriodicFunction {
            k,
            coeffs: BTreeMap::new(),
        }
    }

    /// Constant function with the given matrix value.
    pub fn constant(value: CMat) -> Self {
        assert_eq!(value.nrows(), value.ncols());
        let k = value.nrows();
        Self::zero(k).with_mode(0, 0, value)
    }

    pub fn constant_scalar(z: Complex64) -> Self {
        Self::constant(linalg::scalar(z))
    }

    pub fn identity(k: usize) -> Self {
        Self::constant(linalg::identity(k))
    }

    /// Single scalar Fourier mode `z * e^{i(p theta + q x)}` times the identity.
    pub fn scalar_mode(k: usize, p: i64, q: i64, z: Complex64) -> Self {
        let mut m = linalg::identity(k);
        m.mapv_inplace(|v| v * z);
        Self::zero(k).with_mode(p, q, m)
    }

    /// Builder: set the coefficient of mode (p, q). Zero matrices are dropped.
    pub fn with_mode(mut self, p: i64, q: i64, value: CMat) -> Self {
        assert_eq!(value.nrows(), self.k);
        assert_eq!(value.ncols(), self.k);
        if linalg::max_abs(&value) > 0.0 {
            self.coeffs.insert((p, q), value);
        }
        self
    }

    /// Recover a trigonometric polynomial from samples on a uniform
    /// `n_theta x n_x` grid, discarding modes below `rel_tol` times the largest
    /// coefficient norm. Sampling is assumed faithful (smooth data, grid past
    /// the Nyquist limit of the features that matter).
    pub fn from_samples(samples: &ndarray::Array4<Complex64>, rel_tol: f64) -> Self {
        let (n_theta, n_x, k, k2) = samples.dim();
        assert_eq!(k, k2);
        // 2-d FFT entrywise
        let mut hat = samples.clone();
        for ix in 0..n_x {
            for r in 0..k {
                for c in 0..k {
                    let mut line: Vec<Complex64> =
                        (0..n_theta).map(|it| hat[(it, ix, r, c)]).collect();
                    fft::fft_in_place(&mut line, false);
                    for (it, v) in line.into_iter().enumerate() {
                        hat[(it, ix, r, c)] = v / n_theta as f64;
                    }
                }
            }
        }
        for it in 0..n_theta {
            for r in 0..k {
                for c in 0..k {
                    let mut line: Vec<Complex64> = (0..n_x).map(|ix| hat[(it, ix, r, c)]).collect();
                    fft::fft_in_place(&mut line, false);
                    for (ix, v) in line.into_iter().enumerate() {
                        hat[(it, ix, r, c)] = v / n_x as f64;
                    }
                }
            }
        }
        let mut max_norm = 0.0f64;
        let mut mats: Vec<((i64, i64), CMat)> = Vec::new();
        for it in 0..n_theta {
            for ix in 0..n_x {
                let m = Array2::from_shape_fn((k, k), |(r, c)| hat[(it, ix, r, c)]);
                let norm = linalg::max_abs(&m);
                max_norm = max_norm.max(norm);
                if norm > 0.0 {
                    let p = fft::freq_of_index(it, n_theta);
                    let q = fft::freq_of_index(ix, n_x);
                    mats.push(((p, q), m));
                }
            }
        }
        let mut out = Self::zero(k);
        for ((p, q), m) in mats {
            if linalg::max_abs(&m) > rel_tol * max_norm {
                out.coeffs.insert((p, q), m);
            }
        }
        out
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn modes(&self) -> impl Iterator<Item = (&(i64, i64), &CMat)> {
        self.coeffs.iter()
    }

    pub fn coefficient(&self, p: i64, q: i64) -> Option<&CMat> {
        self.coeffs.get(&(p, q))
    }

    /// Largest |p| and |q| among stored modes.
    pub fn band(&self) -> (i64, i64) {
        let mut bp = 0;
        let mut bq = 0;
        for (p, q) in self.coeffs.keys() {
            bp = bp.max(p.abs());
            bq = bq.max(q.abs());
        }
        (bp, bq)
    }

    /// True when every mode has q = 0 (required over a point base).
    pub fn q_support_is_zero(&self) -> bool {
        self.coeffs.keys().all(|(_, q)| *q == 0)
    }

    pub fn eval(&self, theta: f64, x: f64) -> CMat {
        let mut out = linalg::zeros(self.k);
        for ((p, q), m) in &self.coeffs {
            let phase = Complex64::new(0.0, *p as f64 * theta + *q as f64 * x).exp();
            out.zip_mut_with(m, |o, v| *o += phase * v);
        }
        out
    }

    /// Coefficients of the pointwise conjugate transpose:
    /// `b̂(p,q) = â(-p,-q)^H`.
    pub fn conj_transpose(&self) -> Self {
        let mut out = Self::zero(self.k);
        for ((p, q), m) in &self.coeffs {
            out.coeffs.insert((-p, -q), linalg::conj_transpose(m));
        }
        out
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.k != other.k {
            return Err(Error::MatrixSizeMismatch {
                left: self.k,
                right: other.k,
            });
        }
        let mut out = self.clone();
        for ((p, q), m) in &other.coeffs {
            match out.coeffs.get_mut(&(*p, *q)) {
                Some(existing) => {
                    existing.zip_mut_with(m, |a, b| *a += b);
                    if linalg::max_abs(existing) == 0.0 {
                        out.coeffs.remove(&(*p, *q));
                    }
                }
                None => {
                    out.coeffs.insert((*p, *q), m.clone());
                }
            }
        }
        Ok(out)
    }

    pub fn scale(&self, z: Complex64) -> Self {
        let mut out = self.clone();
        for m in out.coeffs.values_mut() {
            m.mapv_inplace(|v| v * z);
        }
        out
    }

    /// Pointwise matrix product; the mode map is the convolution
    /// `ĉ(p,q) = sum â(p1,q1) b̂(p-p1, q-q1)` with matrix products in that
    /// order.
    pub fn product(&self, other: &Self) -> Result<Self> {
        if self.k != other.k {
            return Err(Error::MatrixSizeMismatch {
                left: self.k,
                right: other.k,
            });
        }
        let mut out = Self::zero(self.k);
        for ((p1, q1), m1) in &self.coeffs {
            for ((p2, q2), m2) in &other.coeffs {
                let key = (p1 + p2, q1 + q2);
                let prod = linalg::matmul(m1, m2);
                match out.coeffs.get_mut(&key) {
                    Some(existing) => existing.zip_mut_with(&prod, |a, b| *a += b),
                    None => {
                        out.coeffs.insert(key, prod);
                    }
                }
            }
        }
        out.coeffs.retain(|_, m| linalg::max_abs(m) > 0.0);
        Ok(out)
    }
}

/// The pair of periodic limits of one semi-periodic coefficient. The decaying
/// interior part of the coefficient never enters the boundary data and is not
/// stored.
#[derive(Debug, Clone, PartialEq)]
pub struct SemiPeriodicCoefficient {
    minus: PeriodicFunction,
    plus: PeriodicFunction,
}

impl SemiPeriodicCoefficient {
    pub fn new(minus: PeriodicFunction, plus: PeriodicFunction) -> Result<Self> {
        if minus.k() != plus.k() {
            return Err(Error::MatrixSizeMismatch {
                left: minus.k(),
                right: plus.k(),
            });
        }
        Ok(SemiPeriodicCoefficient { minus, plus })
    }

    /// Both limits equal to the same periodic function.
    pub fn symmetric(f: PeriodicFunction) -> Self {
        SemiPeriodicCoefficient {
            minus: f.clone(),
            plus: f,
        }
    }

    pub fn k(&self) -> usize {
        self.minus.k()
    }

    pub fn side(&self, side: super::Side) -> &PeriodicFunction {
        match side {
            super::Side::Minus => &self.minus,
            super::Side::Plus => &self.plus,
        }
    }

    pub fn swap_sides(&self) -> Self {
        SemiPeriodicCoefficient {
            minus: self.plus.clone(),
            plus: self.minus.clone(),
        }
    }

    pub fn conj_transpose(&self) -> Self {
        SemiPeriodicCoefficient {
            minus: self.minus.conj_transpose(),
            plus: self.plus.conj_transpose(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn eval_is_periodic_on_sample_grid() {
        let f = PeriodicFunction::scalar_mode(1, 2, -1, Complex64::new(0.3, 0.7))
            .add(&PeriodicFunction::constant_scalar(Complex64::new(1.0, 0.0)))
            .unwrap();
        for i in 0..8 {
            let theta = 2.0 * PI * i as f64 / 8.0;
            for j in 0..8 {
                let x = 2.0 * PI * j as f64 / 8.0;
                let a = f.eval(theta, x);
                let b = f.eval(theta + 2.0 * PI, x);
                let c = f.eval(theta, x - 2.0 * PI);
                assert!(linalg::max_abs_diff(&a, &b) < 1e-12);
                assert!(linalg::max_abs_diff(&a, &c) < 1e-12);
            }
        }
    }

    #[test]
    fn product_matches_pointwise() {
        let f = PeriodicFunction::scalar_mode(1, 1, 0, Complex64::new(1.0, 0.0));
        let g = PeriodicFunction::scalar_mode(1, -1, 2, Complex64::new(0.0, 1.0))
            .add(&PeriodicFunction::constant_scalar(Complex64::new(2.0, 0.0)))
            .unwrap();
        let fg = f.product(&g).unwrap();
        let theta = 0.9;
        let x = 1.7;
        let direct = linalg::matmul(&f.eval(theta, x), &g.eval(theta, x));
        assert!(linalg::max_abs_diff(&fg.eval(theta, x), &direct) < 1e-12);
    }

    #[test]
    fn conj_transpose_matches_pointwise() {
        let m = Array2::from_shape_vec(
            (2, 2),
            vec![
                Complex64::new(1.0, 2.0),
                Complex64::new(0.0, -1.0),
                Complex64::new(0.5, 0.0),
                Complex64::new(-1.0, 1.0),
            ],
        )
        .unwrap();
        let f = PeriodicFunction::zero(2).with_mode(3, -1, m);
        let g = f.conj_transpose();
        let theta = 0.3;
        let x = -0.8;
        let expect = linalg::conj_transpose(&f.eval(theta, x));
        assert!(linalg::max_abs_diff(&g.eval(theta, x), &expect) < 1e-12);
    }

    #[test]
    fn from_samples_recovers_modes() {
        let truth = PeriodicFunction::scalar_mode(1, 2, 1, Complex64::new(0.8, -0.2))
            .add(&PeriodicFunction::scalar_mode(
                1,
                0,
                -3,
                Complex64::new(0.1, 0.4),
            ))
            .unwrap();
        let n = 16;
        let samples = ndarray::Array4::from_shape_fn((n, n, 1, 1), |(it, ix, _, _)| {
            let theta = 2.0 * PI * it as f64 / n as f64;
            let x = 2.0 * PI * ix as f64 / n as f64;
            truth.eval(theta, x)[(0, 0)]
        });
        let back = PeriodicFunction::from_samples(&samples, 1e-12);
        let theta = 0.77;
        let x = 2.2;
        assert!(linalg::max_abs_diff(&back.eval(theta, x), &truth.eval(theta, x)) < 1e-12);
        assert_eq!(back.band(), (2, 3));
    }
}
