//! Periodic spectral utilities on uniform grids.
//!
//! Everything here works on samples f_j = f(2*pi*j/n) of 2*pi-periodic data:
//! Fourier coefficients, spectral differentiation (exact below the Nyquist
//! limit), trigonometric evaluation at off-grid angles, and the aliasing
//! diagnostic used by the 3-d symbol grids. The Nyquist derivative mode of an
//! even-length grid is zeroed, as usual.

use num_complex::Complex64;
use rustfft::FftPlanner;
use std::cell::RefCell;

thread_local! {
    static PLANNER: RefCell<FftPlanner<f64>> = RefCell::new(FftPlanner::new());
}

pub fn fft_in_place(data: &mut [Complex64], inverse: bool) {
    PLANNER.with(|p| {
        let mut planner = p.borrow_mut();
        let fft = if inverse {
            planner.plan_fft_inverse(data.len())
        } else {
            planner.plan_fft_forward(data.len())
        };
        fft.process(data);
    });
}

/// Integer frequency carried by FFT bin `i` of an `n`-point transform.
pub fn freq_of_index(i: usize, n: usize) -> i64 {
    if 2 * i <= n {
        i as i64
    } else {
        i as i64 - n as i64
    }
}

/// FFT bin holding integer frequency `freq`, or None beyond Nyquist.
pub fn index_of_freq(freq: i64, n: usize) -> Option<usize> {
    let half = n as i64 / 2;
    if freq > half || freq < -half {
        return None;
    }
    Some(freq.rem_euclid(n as i64) as usize)
}

/// Fourier coefficients c_kappa with f_j = sum_kappa c_kappa e^{i kappa theta_j};
/// returned in FFT bin order (use `freq_of_index`).
pub fn fourier_coefficients(samples: &[Complex64]) -> Vec<Complex64> {
    let n = samples.len();
    let mut data = samples.to_vec();
    fft_in_place(&mut data, false);
    let scale = 1.0 / n as f64;
    for v in &mut data {
        *v *= scale;
    }
    data
}

/// In-place spectral derivative of one periodic line.
pub fn spectral_derivative_line(samples: &mut [Complex64]) {
    let n = samples.len();
    fft_in_place(samples, false);
    let scale = 1.0 / n as f64;
    for (i, v) in samples.iter_mut().enumerate() {
        let kappa = freq_of_index(i, n);
        // even n: the +/-n/2 bin has no well-defined derivative; drop it
        if n % 2 == 0 && 2 * i == n {
            *v = Complex64::new(0.0, 0.0);
        } else {
            *v *= Complex64::new(0.0, kappa as f64) * scale;
        }
    }
    fft_in_place(samples, true);
}

/// Evaluate a Fourier series (coefficients in FFT bin order) at angle `t`.
pub fn eval_fourier_series(coeffs: &[Complex64], t: f64) -> Complex64 {
    let n = coeffs.len();
    let mut acc = Complex64::new(0.0, 0.0);
    for (i, c) in coeffs.iter().enumerate() {
        let kappa = freq_of_index(i, n) as f64;
        acc += c * Complex64::new(0.0, kappa * t).exp();
    }
    acc
}

/// (top-third, total) spectral derivative energy of one line: |kappa c_kappa|^2
/// summed over the top third of |kappa| versus over everything.
pub fn derivative_energy_split(samples: &[Complex64]) -> (f64, f64) {
    let n = samples.len();
    let coeffs = fourier_coefficients(samples);
    let mut top = 0.0;
    let mut total = 0.0;
    for (i, c) in coeffs.iter().enumerate() {
        let kappa = freq_of_index(i, n);
        let e = (kappa * kappa) as f64 * c.norm_sqr();
        total += e;
        if kappa.abs() * 3 > n as i64 {
            top += e;
        }
    }
    (top, total)
}

/// Deterministic pairwise sum; accuracy of a tree reduction, order fixed.
pub fn pairwise_sum(values: &[f64]) -> f64 {
    match values.len() {
        0 => 0.0,
        1 => values[0],
        2 => values[0] + values[1],
        n => {
            let mid = n / 2;
            pairwise_sum(&values[..mid]) + pairwise_sum(&values[mid..])
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn coefficients_recover_single_mode() {
        let n = 32;
        let samples: Vec<Complex64> = (0..n)
            .map(|j| {
                let t = 2.0 * PI * j as f64 / n as f64;
                Complex64::new(0.0, 3.0 * t).exp() * 2.5
            })
            .collect();
        let coeffs = fourier_coefficients(&samples);
        let idx = index_of_freq(3, n).unwrap();
        assert!((coeffs[idx] - Complex64::new(2.5, 0.0)).norm() < 1e-12);
        let off = index_of_freq(-2, n).unwrap();
        assert!(coeffs[off].norm() < 1e-12);
    }

    #[test]
    fn derivative_is_exact_on_trig_polynomials() {
        let n = 64;
        let mut samples: Vec<Complex64> = (0..n)
            .map(|j| {
                let t = 2.0 * PI * j as f64 / n as f64;
                Complex64::new((2.0 * t).cos(), (5.0 * t).sin())
            })
            .collect();
        spectral_derivative_line(&mut samples);
        for (j, v) in samples.iter().enumerate() {
            let t = 2.0 * PI * j as f64 / n as f64;
            let expect = Complex64::new(-2.0 * (2.0 * t).sin(), 5.0 * (5.0 * t).cos());
            assert!((v - expect).norm() < 1e-10);
        }
    }

    #[test]
    fn eval_interpolates_off_grid() {
        let n = 32;
        let f = |t: f64| Complex64::new(0.0, 1.0) * Complex64::new(0.0, 2.0 * t).exp()
            + Complex64::new(0.4, 0.0) * Complex64::new(0.0, -1.0 * t).exp();
        let samples: Vec<Complex64> = (0..n)
            .map(|j| f(2.0 * PI * j as f64 / n as f64))
            .collect();
        let coeffs = fourier_coefficients(&samples);
        let t = 0.37;
        assert!((eval_fourier_series(&coeffs, t) - f(t)).norm() < 1e-12);
    }

    #[test]
    fn pairwise_sum_matches_naive() {
        let v: Vec<f64> = (0..1001).map(|i| (i as f64).sin()).collect();
        let naive: f64 = v.iter().sum();
        assert!((pairwise_sum(&v) - naive).abs() < 1e-9);
    }
}
