//! Winding numbers of invertible matrix loops and the index formula for
//! boundary operators over a point base.
//!
//! The winding number is computed by unwrapping the argument of the
//! determinant along the sampled loop. Closure of the accumulated phase is an
//! exact integer test, which doubles as the error detector: a loop that was
//! sampled too coarsely either trips the adjacent-increment bound or fails to
//! close.
//!
//! Orientation convention, fixed project-wide by the Toeplitz calibration:
//! the index of a boundary operator over a point base is
//! `winding(symbol at tau = -1) - winding(symbol at tau = +1)`,
//! so the operator with symbol 1 on the tau = -1 copy and e^{i theta} on the
//! tau = +1 copy has index -1, matching its finite-section truncation.

use crate::error::{Error, Result};
use crate::linalg::{self, CMat};
use std::f64::consts::PI;

/// Samples must be invertible at least to this margin.
pub const LOOP_INVERTIBILITY_TOL: f64 = 1e-10;
/// Adjacent determinant phase increments must stay below this.
pub const PHASE_JUMP_LIMIT: f64 = PI / 2.0;
/// The accumulated phase must land within this fraction of a full turn of an
/// integer multiple.
pub const CLOSURE_TOL_TURNS: f64 = 1e-6;

/// An invertible matrix loop sampled uniformly: value `i` is taken at
/// `theta = 2 pi i / n`, with n at least 16.
#[derive(Debug, Clone)]
pub struct LoopSample {
    values: Vec<CMat>,
}

impl LoopSample {
    pub fn from_values(values: Vec<CMat>) -> Result<Self> {
        if values.len() < 16 {
            return Err(Error::Validation(format!(
                "a loop needs at least 16 samples, got {}",
                values.len()
            )));
        }
        let k = values[0].nrows();
        for (i, v) in values.iter().enumerate() {
            if v.nrows() != k || v.ncols() != k {
                return Err(Error::Validation(format!(
                    "loop sample {i} is {}x{}, expected {k}x{k}",
                    v.nrows(),
                    v.ncols()
                )));
            }
        }
        Ok(LoopSample { values })
    }

    pub fn from_fn(n: usize, f: impl Fn(f64) -> CMat) -> Result<Self> {
        Self::from_values(
            (0..n)
                .map(|i| f(2.0 * PI * i as f64 / n as f64))
                .collect(),
        )
    }

    /// Constant loop at a fixed matrix.
    pub fn constant(n: usize, value: CMat) -> Result<Self> {
        Self::from_values(vec![value; n])
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn k(&self) -> usize {
        self.values[0].nrows()
    }

    pub fn values(&self) -> &[CMat] {
        &self.values
    }

    /// Pointwise product loop (same length and size required).
    pub fn product(&self, other: &Self) -> Result<Self> {
        if self.len() != other.len() {
            return Err(Error::MatrixSizeMismatch {
                left: self.len(),
                right: other.len(),
            });
        }
        if self.k() != other.k() {
            return Err(Error::MatrixSizeMismatch {
                left: self.k(),
                right: other.k(),
            });
        }
        Self::from_values(
            self.values
                .iter()
                .zip(&other.values)
                .map(|(a, b)| linalg::matmul(a, b))
                .collect(),
        )
    }

    /// Pointwise inverse loop; errors on a singular sample.
    pub fn inverse(&self) -> Result<Self> {
        let values = self
            .values
            .iter()
            .enumerate()
            .map(|(i, v)| {
                linalg::inverse(v).ok_or_else(|| Error::SingularSample {
                    context: format!("loop sample {i}"),
                    sigma: linalg::smallest_singular_value(v),
                    tol: LOOP_INVERTIBILITY_TOL,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Self::from_values(values)
    }
}

/// Total unwrapped argument of `det` around the loop, in turns.
///
/// Errors: `SingularSample` when a sample is not safely invertible,
/// `PhaseJump` when adjacent phases move by pi/2 or more (sampling too
/// coarse), `NonClosure` when the accumulated phase is not an integer number
/// of turns.
pub fn winding_number(loop_sample: &LoopSample) -> Result<i64> {
    let n = loop_sample.len();
    let mut dets = Vec::with_capacity(n);
    for (i, v) in loop_sample.values().iter().enumerate() {
        let sigma = linalg::smallest_singular_value(v);
        if sigma <= LOOP_INVERTIBILITY_TOL {
            return Err(Error::SingularSample {
                context: format!("loop sample {i}"),
                sigma,
                tol: LOOP_INVERTIBILITY_TOL,
            });
        }
        dets.push(linalg::det(v));
    }
    let mut accumulated = 0.0_f64;
    for i in 0..n {
        let a = dets[i];
        let b = dets[(i + 1) % n];
        // phase increment in (-pi, pi]
        let delta = (b / a).arg();
        if delta.abs() >= PHASE_JUMP_LIMIT {
            return Err(Error::PhaseJump { index: i, delta });
        }
        accumulated += delta;
    }
    let turns = accumulated / (2.0 * PI);
    let nearest = turns.round() as i64;
    let residual = (turns - nearest as f64).abs();
    // The wrapped increments of a closed cycle telescope to an integer number
    // of turns in exact arithmetic; this guard only trips on floating-point
    // accumulation (enormous loops, degenerate determinant scales).
    if residual > CLOSURE_TOL_TURNS {
        return Err(Error::NonClosure {
            accumulated,
            nearest,
            residual,
        });
    }
    Ok(nearest)
}

/// Index of a boundary operator over a point base from its two fiber loops:
/// winding at the tau = -1 copy minus winding at the tau = +1 copy (see the
/// module-level orientation convention).
pub fn noether_index(fiber_minus: &LoopSample, fiber_plus: &LoopSample) -> Result<i64> {
    if fiber_minus.k() != fiber_plus.k() {
        return Err(Error::MatrixSizeMismatch {
            left: fiber_minus.k(),
            right: fiber_plus.k(),
        });
    }
    Ok(winding_number(fiber_minus)? - winding_number(fiber_plus)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;

    fn power_loop(n: usize, power: i64) -> LoopSample {
        LoopSample::from_fn(n, |theta| {
            linalg::scalar(Complex64::new(0.0, power as f64 * theta).exp())
        })
        .unwrap()
    }

    #[test]
    fn monomial_degrees() {
        for p in -5..=5 {
            assert_eq!(winding_number(&power_loop(64, p)).unwrap(), p);
        }
    }

    #[test]
    fn constant_matrix_loop_has_degree_zero() {
        let m = ndarray::Array2::from_shape_vec(
            (2, 2),
            vec![
                Complex64::new(2.0, 1.0),
                Complex64::new(0.0, 0.0),
                Complex64::new(1.0, 0.0),
                Complex64::new(0.0, -3.0),
            ],
        )
        .unwrap();
        let l = LoopSample::constant(32, m).unwrap();
        assert_eq!(winding_number(&l).unwrap(), 0);
    }

    #[test]
    fn opposite_diagonal_degrees_cancel() {
        let l = LoopSample::from_fn(64, |theta| {
            let z = Complex64::new(0.0, theta).exp();
            let mut m = linalg::zeros(2);
            m[(0, 0)] = z;
            m[(1, 1)] = z.conj();
            m
        })
        .unwrap();
        assert_eq!(winding_number(&l).unwrap(), 0);
    }

    #[test]
    fn singular_sample_is_reported() {
        let mut values: Vec<CMat> = (0..32)
            .map(|i| {
                linalg::scalar(Complex64::new(0.0, 2.0 * PI * i as f64 / 32.0).exp())
            })
            .collect();
        values[7] = linalg::scalar(Complex64::new(0.0, 0.0));
        let l = LoopSample::from_values(values).unwrap();
        assert!(matches!(
            winding_number(&l),
            Err(Error::SingularSample { .. })
        ));
    }

    #[test]
    fn coarse_sampling_trips_the_phase_bound() {
        // degree 20 at 64 samples: increments of 20*2pi/64 > pi/2
        let l = power_loop(64, 20);
        assert!(matches!(winding_number(&l), Err(Error::PhaseJump { .. })));
    }

    #[test]
    fn noether_calibration_values() {
        let ones = LoopSample::constant(64, linalg::identity(1)).unwrap();
        let z = power_loop(64, 1);
        assert_eq!(noether_index(&ones, &z).unwrap(), -1);
        assert_eq!(noether_index(&z, &z).unwrap(), 0);
        let z2 = power_loop(64, 2);
        let zbar = power_loop(64, -1);
        assert_eq!(noether_index(&z2, &zbar).unwrap(), 3);
    }

    #[test]
    fn size_mismatch_is_reported() {
        let a = LoopSample::constant(32, linalg::identity(1)).unwrap();
        let b = LoopSample::constant(32, linalg::identity(2)).unwrap();
        assert!(matches!(
            noether_index(&a, &b),
            Err(Error::MatrixSizeMismatch { .. })
        ));
    }
}
