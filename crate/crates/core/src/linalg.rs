//! Small dense complex-matrix helpers.
//!
//! Symbols are k-by-k with k typically 1 or 2, so the hot paths (determinant,
//! smallest singular value, inverse) get closed forms; anything larger falls
//! back to LU with partial pivoting or a one-sided Jacobi sweep. Large
//! truncation matrices live in the oracle module and use faer instead.

use ndarray::Array2;
use num_complex::Complex64;

pub type CMat = Array2<Complex64>;

pub fn identity(k: usize) -> CMat {
    Array2::from_shape_fn((k, k), |(i, j)| {
        if i == j {
            Complex64::new(1.0, 0.0)
        } else {
            Complex64::new(0.0, 0.0)
        }
    })
}

pub fn zeros(k: usize) -> CMat {
    Array2::zeros((k, k))
}

pub fn scalar(v: Complex64) -> CMat {
    Array2::from_elem((1, 1), v)
}

pub fn matmul(a: &CMat, b: &CMat) -> CMat {
    let (m, l) = a.dim();
    let (l2, n) = b.dim();
    assert_eq!(l, l2, "inner dimensions must agree");
    let mut out = Array2::zeros((m, n));
    for i in 0..m {
        for kk in 0..l {
            let aik = a[(i, kk)];
            if aik == Complex64::new(0.0, 0.0) {
                continue;
            }
            for j in 0..n {
                out[(i, j)] += aik * b[(kk, j)];
            }
        }
    }
    out
}

pub fn conj_transpose(a: &CMat) -> CMat {
    let (m, n) = a.dim();
    Array2::from_shape_fn((n, m), |(i, j)| a[(j, i)].conj())
}

pub fn frobenius_norm(a: &CMat) -> f64 {
    a.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

pub fn max_abs(a: &CMat) -> f64 {
    a.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

pub fn max_abs_diff(a: &CMat, b: &CMat) -> f64 {
    assert_eq!(a.dim(), b.dim());
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

pub fn trace(a: &CMat) -> Complex64 {
    let k = a.nrows().min(a.ncols());
    (0..k).map(|i| a[(i, i)]).sum()
}

/// Determinant by LU with partial pivoting. Exact closed forms for k <= 2.
pub fn det(a: &CMat) -> Complex64 {
    let k = a.nrows();
    assert_eq!(k, a.ncols(), "determinant needs a square matrix");
    match k {
        0 => Complex64::new(1.0, 0.0),
        1 => a[(0, 0)],
        2 => a[(0, 0)] * a[(1, 1)] - a[(0, 1)] * a[(1, 0)],
        _ => {
            let mut lu = a.clone();
            let mut sign = Complex64::new(1.0, 0.0);
            for col in 0..k {
                let mut pivot = col;
                let mut best = lu[(col, col)].norm();
                for row in col + 1..k {
                    let v = lu[(row, col)].norm();
                    if v > best {
                        best = v;
                        pivot = row;
                    }
                }
                if best == 0.0 {
                    return Complex64::new(0.0, 0.0);
                }
                if pivot != col {
                    for j in 0..k {
                        let tmp = lu[(col, j)];
                        lu[(col, j)] = lu[(pivot, j)];
                        lu[(pivot, j)] = tmp;
                    }
                    sign = -sign;
                }
                let d = lu[(col, col)];
                for row in col + 1..k {
                    let f = lu[(row, col)] / d;
                    lu[(row, col)] = f;
                    for j in col + 1..k {
                        let sub = f * lu[(col, j)];
                        lu[(row, j)] -= sub;
                    }
                }
            }
            let mut out = sign;
            for i in 0..k {
                out *= lu[(i, i)];
            }
            out
        }
    }
}

/// Inverse; returns None when the pivot collapses.
pub fn inverse(a: &CMat) -> Option<CMat> {
    let k = a.nrows();
    assert_eq!(k, a.ncols());
    match k {
        1 => {
            let d = a[(0, 0)];
            if d.norm() == 0.0 {
                return None;
            }
            Some(scalar(d.inv()))
        }
        2 => {
            let d = det(a);
            if d.norm() == 0.0 {
                return None;
            }
            let inv_d = d.inv();
            let mut out = Array2::zeros((2, 2));
            out[(0, 0)] = a[(1, 1)] * inv_d;
            out[(0, 1)] = -a[(0, 1)] * inv_d;
            out[(1, 0)] = -a[(1, 0)] * inv_d;
            out[(1, 1)] = a[(0, 0)] * inv_d;
            Some(out)
        }
        _ => {
            // Gauss-Jordan with partial pivoting on [A | I].
            let mut lhs = a.clone();
            let mut rhs = identity(k);
            for col in 0..k {
                let mut pivot = col;
                let mut best = lhs[(col, col)].norm();
                for row in col + 1..k {
                    let v = lhs[(row, col)].norm();
                    if v > best {
                        best = v;
                        pivot = row;
                    }
                }
                if best == 0.0 {
                    return None;
                }
                if pivot != col {
                    for j in 0..k {
                        lhs.swap((col, j), (pivot, j));
                        rhs.swap((col, j), (pivot, j));
                    }
                }
                let d = lhs[(col, col)].inv();
                for j in 0..k {
                    lhs[(col, j)] *= d;
                    rhs[(col, j)] *= d;
                }
                for row in 0..k {
                    if row == col {
                        continue;
                    }
                    let f = lhs[(row, col)];
                    if f.norm() == 0.0 {
                        continue;
                    }
                    for j in 0..k {
                        let l = f * lhs[(col, j)];
                        let r = f * rhs[(col, j)];
                        lhs[(row, j)] -= l;
                        rhs[(row, j)] -= r;
                    }
                }
            }
            Some(rhs)
        }
    }
}

/// Smallest singular value. Closed form through the Gram matrix for k <= 2,
/// cyclic one-sided Jacobi for larger k.
pub fn smallest_singular_value(a: &CMat) -> f64 {
    let k = a.nrows();
    assert_eq!(k, a.ncols());
    match k {
        0 => 0.0,
        1 => a[(0, 0)].norm(),
        2 => {
            let g00 = a[(0, 0)].norm_sqr() + a[(1, 0)].norm_sqr();
            let g11 = a[(0, 1)].norm_sqr() + a[(1, 1)].norm_sqr();
            let g01 = a[(0, 0)].conj() * a[(0, 1)] + a[(1, 0)].conj() * a[(1, 1)];
            let t = g00 + g11;
            let disc = ((g00 - g11) * (g00 - g11) + 4.0 * g01.norm_sqr()).sqrt();
            // lambda_min via the stable quotient form
            let lam_max = 0.5 * (t + disc);
            let det_g = g00 * g11 - g01.norm_sqr();
            let lam_min = if lam_max > 0.0 { (det_g / lam_max).max(0.0) } else { 0.0 };
            lam_min.sqrt()
        }
        _ => *singular_values_jacobi(a).last().unwrap(),
    }
}

/// All singular values (descending) by one-sided (Hestenes) Jacobi on the
/// columns. Intended for small k only.
pub fn singular_values_jacobi(a: &CMat) -> Vec<f64> {
    let k = a.nrows();
    let mut u = a.clone();
    for _sweep in 0..60 {
        let mut off = 0.0f64;
        for p in 0..k {
            for q in p + 1..k {
                let mut alpha = 0.0;
                let mut beta = 0.0;
                let mut gamma = Complex64::new(0.0, 0.0);
                for i in 0..k {
                    alpha += u[(i, p)].norm_sqr();
                    beta += u[(i, q)].norm_sqr();
                    gamma += u[(i, p)].conj() * u[(i, q)];
                }
                let g = gamma.norm();
                if g <= 1e-30 * (alpha * beta).sqrt().max(1e-300) {
                    continue;
                }
                off = off.max(g / (alpha * beta).sqrt().max(1e-300));
                // rotate columns p, q so they come out orthogonal: with
                // zeta = (alpha - beta)/(2|gamma|) the smaller-angle root of
                // t^2 - 2 zeta t - 1 = 0 gives tan(theta)
                let zeta = (alpha - beta) / (2.0 * g);
                let t = if zeta == 0.0 {
                    1.0
                } else {
                    -zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                let phase = gamma / g;
                for i in 0..k {
                    let up = u[(i, p)];
                    let uq = u[(i, q)];
                    u[(i, p)] = c * up - s * phase.conj() * uq;
                    u[(i, q)] = s * phase * up + c * uq;
                }
            }
        }
        if off < 1e-28 {
            break;
        }
    }
    let mut sv: Vec<f64> = (0..k)
        .map(|j| (0..k).map(|i| u[(i, j)].norm_sqr()).sum::<f64>().sqrt())
        .collect();
    sv.sort_by(|x, y| y.partial_cmp(x).unwrap());
    sv
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn det_closed_forms_match_lu() {
        let a = Array2::from_shape_vec(
            (3, 3),
            vec![
                c(1.0, 0.5),
                c(0.0, 2.0),
                c(-1.0, 0.0),
                c(2.0, 0.0),
                c(1.0, -1.0),
                c(0.0, 0.0),
                c(0.5, 0.5),
                c(3.0, 0.0),
                c(1.0, 1.0),
            ],
        )
        .unwrap();
        // cofactor expansion along the first row
        let m00 = c(1.0, -1.0) * c(1.0, 1.0) - c(0.0, 0.0) * c(3.0, 0.0);
        let m01 = c(2.0, 0.0) * c(1.0, 1.0) - c(0.0, 0.0) * c(0.5, 0.5);
        let m02 = c(2.0, 0.0) * c(3.0, 0.0) - c(1.0, -1.0) * c(0.5, 0.5);
        let expect = c(1.0, 0.5) * m00 - c(0.0, 2.0) * m01 + c(-1.0, 0.0) * m02;
        assert!((det(&a) - expect).norm() < 1e-12);
    }

    #[test]
    fn inverse_roundtrip() {
        let a = Array2::from_shape_vec(
            (2, 2),
            vec![c(1.0, 1.0), c(0.5, 0.0), c(0.0, -1.0), c(2.0, 0.0)],
        )
        .unwrap();
        let inv = inverse(&a).unwrap();
        let prod = matmul(&a, &inv);
        assert!(max_abs_diff(&prod, &identity(2)) < 1e-13);
    }

    #[test]
    fn smallest_singular_value_matches_jacobi() {
        let a = Array2::from_shape_vec(
            (2, 2),
            vec![c(3.0, 0.0), c(1.0, 2.0), c(0.0, 0.5), c(0.2, 0.0)],
        )
        .unwrap();
        let closed = smallest_singular_value(&a);
        let jac = *singular_values_jacobi(&a).last().unwrap();
        assert!((closed - jac).abs() < 1e-10, "{closed} vs {jac}");
    }

    #[test]
    fn unitary_has_unit_singular_values() {
        let inv_sqrt2 = 1.0 / 2.0f64.sqrt();
        let a = Array2::from_shape_vec(
            (2, 2),
            vec![
                c(inv_sqrt2, 0.0),
                c(0.0, inv_sqrt2),
                c(0.0, inv_sqrt2),
                c(inv_sqrt2, 0.0),
            ],
        )
        .unwrap();
        assert!((smallest_singular_value(&a) - 1.0).abs() < 1e-12);
    }
}
