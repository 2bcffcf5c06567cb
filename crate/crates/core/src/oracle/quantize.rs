//! Direct zero-order quantization of boundary symbols on the Fourier lattice.
//!
//! The matrix block between column site `(m, n)` and row site `(m', n')` is
//! the base-variable Fourier coefficient at frequency `(m' - m, n' - n)` of
//! `(theta, x) -> a(theta, x, tau(m,n), xi(m,n))`, where `(tau, xi)(m, n)` is
//! the unit vector along `(m, n)`; the origin takes `(1, 0)` (any choice
//! there differs by a rank <= k perturbation and cannot move an index). In
//! one dimension tau is the sign of m, with sign(0) taken positive.
//!
//! This gives arbitrary smooth elliptic symbols an analytic index, not only
//! the differential-type ones.

use super::assemble::{assemble, LatticeOperator, TruncatedOperator};
use super::window::{TruncationWindow, WindowDim};
use crate::chern::{SymbolGrid3, GRID_INVERTIBILITY_TOL};
use crate::error::{Error, Result};
use crate::fft;
use crate::linalg::{self, CMat};
use crate::winding::{LoopSample, LOOP_INVERTIBILITY_TOL};
use ndarray::Array2;
use num_complex::Complex64;
use std::collections::HashMap;
use std::sync::RwLock;

/// Relative threshold below which Fourier tails are treated as zero when
/// sizing the bandwidth.
pub const COEFFICIENT_TAIL_TOL: f64 = 1e-12;

/// Quantization of a symbol over a point base, given by its two fiber loops.
pub struct LoopSymbolQuantizer {
    k: usize,
    bandwidth: usize,
    minus: HashMap<i64, CMat>,
    plus: HashMap<i64, CMat>,
}

impl LoopSymbolQuantizer {
    pub fn new(fiber_minus: &LoopSample, fiber_plus: &LoopSample) -> Result<Self> {
        if fiber_minus.k() != fiber_plus.k() {
            return Err(Error::MatrixSizeMismatch {
                left: fiber_minus.k(),
                right: fiber_plus.k(),
            });
        }
        for (name, l) in [("tau=-1", fiber_minus), ("tau=+1", fiber_plus)] {
            let margin = l
                .values()
                .iter()
                .map(linalg::smallest_singular_value)
                .fold(f64::INFINITY, f64::min);
            if margin <= LOOP_INVERTIBILITY_TOL {
                return Err(Error::SingularSymbol(format!(
                    "fiber loop {name} has margin {margin:.3e}"
                )));
            }
        }
        let k = fiber_minus.k();
        let minus = loop_coefficients(fiber_minus);
        let plus = loop_coefficients(fiber_plus);
        let max_norm = minus
            .values()
            .chain(plus.values())
            .map(linalg::max_abs)
            .fold(0.0, f64::max);
        let mut bandwidth = 0usize;
        let mut keep = |table: &HashMap<i64, CMat>| {
            let mut kept = HashMap::new();
            for (&p, m) in table {
                if linalg::max_abs(m) > COEFFICIENT_TAIL_TOL * max_norm {
                    bandwidth = bandwidth.max(p.unsigned_abs() as usize);
                    kept.insert(p, m.clone());
                }
            }
            kept
        };
        let minus = keep(&minus);
        let plus = keep(&plus);
        Ok(LoopSymbolQuantizer {
            k,
            bandwidth,
            minus,
            plus,
        })
    }
}

fn loop_coefficients(l: &LoopSample) -> HashMap<i64, CMat> {
    let n = l.len();
    let k = l.k();
    let mut out: HashMap<i64, CMat> = HashMap::new();
    for r in 0..k {
        for c in 0..k {
            let line: Vec<Complex64> = l.values().iter().map(|m| m[(r, c)]).collect();
            let coeffs = fft::fourier_coefficients(&line);
            for (i, v) in coeffs.into_iter().enumerate() {
                let p = fft::freq_of_index(i, n);
                out.entry(p)
                    .or_insert_with(|| Array2::zeros((k, k)))[(r, c)] = v;
            }
        }
    }
    out
}

impl LatticeOperator for LoopSymbolQuantizer {
    fn k(&self) -> usize {
        self.k
    }

    fn dim(&self) -> WindowDim {
        WindowDim::One
    }

    fn bandwidth(&self) -> usize {
        self.bandwidth
    }

    fn block(&self, delta: (i64, i64), col: (i64, i64)) -> Option<CMat> {
        if delta.1 != 0 {
            return None;
        }
        // sign(0) := +1
        let table = if col.0 >= 0 { &self.plus } else { &self.minus };
        table.get(&delta.0).cloned()
    }

    fn describe(&self) -> String {
        format!("quantized fiber-loop symbol (k={}, band {})", self.k, self.bandwidth)
    }
}

/// Quantization of a smooth symbol grid on `T^2 x S^1`. The fiber dependence
/// is trigonometrically interpolated from the grid (exact for smooth, well
/// resolved symbols), so every lattice direction gets its own convolution
/// table, cached per primitive direction vector.
pub struct GridSymbolQuantizer {
    k: usize,
    n: (usize, usize, usize),
    bandwidth: usize,
    /// 3-d Fourier coefficients, bins `[p][q][l][r][c]`.
    hat: crate::chern::Array5,
    /// (p, q) bins worth synthesizing (above the tail threshold).
    support: Vec<(usize, usize)>,
    tables: RwLock<HashMap<(i64, i64), std::sync::Arc<HashMap<(i64, i64), CMat>>>>,
}

impl GridSymbolQuantizer {
    pub fn new(grid: &SymbolGrid3) -> Result<Self> {
        let margin = grid.margin();
        if margin <= GRID_INVERTIBILITY_TOL {
            return Err(Error::SingularSymbol(format!(
                "symbol grid margin {margin:.3e}"
            )));
        }
        let (n0, n1, n2) = grid.resolutions();
        let k = grid.k();
        let mut hat = grid.values().clone();
        // FFT along each of the three grid axes, entrywise, normalized
        for (axis, len) in [(0usize, n0), (1, n1), (2, n2)] {
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
                                *v = hat[idx];
                            }
                            fft::fft_in_place(&mut line, false);
                            for (i, v) in line.iter().enumerate() {
                                let idx = match axis {
                                    0 => (i, j0, j1, r, c),
                                    1 => (j0, i, j1, r, c),
                                    _ => (j0, j1, i, r, c),
                                };
                                hat[idx] = *v / len as f64;
                            }
                        }
                    }
                }
            }
        }
        // base-frequency support above the tail threshold, over all fiber bins
        let mut peak = 0.0f64;
        for v in hat.iter() {
            peak = peak.max(v.norm());
        }
        let mut support = Vec::new();
        let mut bandwidth = 0usize;
        for ip in 0..n0 {
            for iq in 0..n1 {
                let mut mass = 0.0f64;
                for il in 0..n2 {
                    for r in 0..k {
                        for c in 0..k {
                            mass = mass.max(hat[(ip, iq, il, r, c)].norm());
                        }
                    }
                }
                if mass > COEFFICIENT_TAIL_TOL * peak {
                    let p = fft::freq_of_index(ip, n0);
                    let q = fft::freq_of_index(iq, n1);
                    bandwidth = bandwidth.max(p.unsigned_abs().max(q.unsigned_abs()) as usize);
                    support.push((ip, iq));
                }
            }
        }
        Ok(GridSymbolQuantizer {
            k,
            n: (n0, n1, n2),
            bandwidth,
            hat,
            support,
            tables: RwLock::new(HashMap::new()),
        })
    }

    fn primitive_direction(site: (i64, i64)) -> (i64, i64) {
        if site == (0, 0) {
            return (1, 0);
        }
        let g = gcd(site.0.unsigned_abs(), site.1.unsigned_abs()) as i64;
        (site.0 / g, site.1 / g)
    }

    fn table_for(&self, dir: (i64, i64)) -> std::sync::Arc<HashMap<(i64, i64), CMat>> {
        if let Some(t) = self.tables.read().expect("lock poisoned").get(&dir) {
            return t.clone();
        }
        let psi = (dir.1 as f64).atan2(dir.0 as f64);
        let (n0, n1, n2) = self.n;
        let k = self.k;
        let mut table: HashMap<(i64, i64), CMat> = HashMap::with_capacity(self.support.len());
        for &(ip, iq) in &self.support {
            let p = fft::freq_of_index(ip, n0);
            let q = fft::freq_of_index(iq, n1);
            let mut m = Array2::zeros((k, k));
            for il in 0..n2 {
                let l = fft::freq_of_index(il, n2) as f64;
                let phase = Complex64::new(0.0, l * psi).exp();
                for r in 0..k {
                    for c in 0..k {
                        m[(r, c)] += phase * self.hat[(ip, iq, il, r, c)];
                    }
                }
            }
            table.insert((p, q), m);
        }
        let arc = std::sync::Arc::new(table);
        self.tables
            .write()
            .expect("lock poisoned")
            .insert(dir, arc.clone());
        arc
    }
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a.max(1)
    } else {
        gcd(b, a % b)
    }
}

impl LatticeOperator for GridSymbolQuantizer {
    fn k(&self) -> usize {
        self.k
    }

    fn dim(&self) -> WindowDim {
        WindowDim::Two
    }

    fn bandwidth(&self) -> usize {
        self.bandwidth
    }

    fn block(&self, delta: (i64, i64), col: (i64, i64)) -> Option<CMat> {
        let table = self.table_for(Self::primitive_direction(col));
        table.get(&delta).cloned()
    }

    fn describe(&self) -> String {
        format!(
            "quantized symbol grid (k={}, {}x{}x{}, band {})",
            self.k, self.n.0, self.n.1, self.n.2, self.bandwidth
        )
    }
}

/// Spec-facing wrapper: square finite section of a quantized fiber-loop
/// symbol (point base).
pub fn quantize_loop_symbol(
    fiber_minus: &LoopSample,
    fiber_plus: &LoopSample,
    window: TruncationWindow,
    allow_large: bool,
) -> Result<TruncatedOperator> {
    let q = LoopSymbolQuantizer::new(fiber_minus, fiber_plus)?;
    assemble(&q, window, allow_large)
}

/// Spec-facing wrapper: square finite section of a quantized symbol grid
/// (circle base).
pub fn quantize_grid_symbol(
    grid: &SymbolGrid3,
    window: TruncationWindow,
    allow_large: bool,
) -> Result<TruncatedOperator> {
    let q = GridSymbolQuantizer::new(grid)?;
    assemble(&q, window, allow_large)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::samples;

    #[test]
    fn toeplitz_calibration_matrix_shape() {
        let (ones, z) = samples::toeplitz_calibration_loops(64);
        let w = TruncationWindow::new(5, WindowDim::One);
        let t = quantize_loop_symbol(&ones, &z, w, false).unwrap();
        // identity on negative sites, shift on nonnegative sites
        for (ci, site) in w.sites().into_iter().enumerate() {
            for (ri, rsite) in w.sites().into_iter().enumerate() {
                let expect = if site.0 < 0 {
                    if rsite == site {
                        1.0
                    } else {
                        0.0
                    }
                } else if rsite.0 == site.0 + 1 {
                    1.0
                } else {
                    0.0
                };
                let got = t.matrix[(ri, ci)];
                assert!(
                    (got - Complex64::new(expect, 0.0)).norm() < 1e-12,
                    "entry ({ri}, {ci}) = {got}"
                );
            }
        }
    }

    #[test]
    fn base_independent_symbol_quantizes_to_a_diagonal_multiplier() {
        // a(theta, x, psi) = 2 + cos psi: depends on the fiber only
        let g = SymbolGrid3::from_fn((16, 16, 32), 1, |_, _, psi| {
            linalg::scalar(Complex64::new(2.0 + psi.cos(), 0.0))
        })
        .unwrap();
        let w = TruncationWindow::new(3, WindowDim::Two);
        let t = quantize_grid_symbol(&g, w, false).unwrap();
        for (ci, site) in w.sites().into_iter().enumerate() {
            let dir = if site == (0, 0) {
                (1.0, 0.0)
            } else {
                let r = ((site.0 * site.0 + site.1 * site.1) as f64).sqrt();
                (site.0 as f64 / r, site.1 as f64 / r)
            };
            let expect = 2.0 + dir.0;
            for (ri, _) in w.sites().into_iter().enumerate() {
                let got = t.matrix[(ri, ci)];
                let want = if ri == ci { expect } else { 0.0 };
                assert!(
                    (got - Complex64::new(want, 0.0)).norm() < 1e-10,
                    "entry ({ri}, {ci}) = {got}, want {want}"
                );
            }
        }
    }

    #[test]
    fn fiber_independent_symbol_quantizes_to_a_convolution() {
        // a(theta, x) = 3 + e^{i theta} + 0.5 e^{-2 i x}: pure convolution
        let g = SymbolGrid3::from_fn((16, 16, 16), 1, |theta, x, _| {
            linalg::scalar(
                Complex64::new(3.0, 0.0)
                    + Complex64::new(0.0, theta).exp()
                    + Complex64::new(0.5, 0.0) * Complex64::new(0.0, -2.0 * x).exp(),
            )
        })
        .unwrap();
        let w = TruncationWindow::new(3, WindowDim::Two);
        let t = quantize_grid_symbol(&g, w, false).unwrap();
        for (ci, site) in w.sites().into_iter().enumerate() {
            for (ri, rsite) in w.sites().into_iter().enumerate() {
                let delta = (rsite.0 - site.0, rsite.1 - site.1);
                let want = match delta {
                    (0, 0) => Complex64::new(3.0, 0.0),
                    (1, 0) => Complex64::new(1.0, 0.0),
                    (0, -2) => Complex64::new(0.5, 0.0),
                    _ => Complex64::new(0.0, 0.0),
                };
                let got = t.matrix[(ri, ci)];
                assert!((got - want).norm() < 1e-10, "delta {delta:?}: {got}");
            }
        }
    }

    #[test]
    fn singular_symbol_is_refused() {
        let g = SymbolGrid3::from_fn((16, 16, 16), 1, |theta, _, _| {
            linalg::scalar(Complex64::new(theta.cos(), 0.0))
        })
        .unwrap();
        let w = TruncationWindow::new(2, WindowDim::Two);
        assert!(matches!(
            quantize_grid_symbol(&g, w, false),
            Err(Error::SingularSymbol(_))
        ));
    }
}
