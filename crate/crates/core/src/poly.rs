//! Real-coefficient polynomials: evaluation and roots.
//!
//! Coefficients are stored highest degree first, `c[0] λⁿ + … + c[n]`.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};

/// Horner evaluation of the polynomial and its derivative.
pub fn eval_with_derivative(c: &[f64], z: Complex64) -> (Complex64, Complex64) {
    let mut p = Complex64::new(0.0, 0.0);
    let mut dp = Complex64::new(0.0, 0.0);
    for &ci in c {
        dp = dp * z + p;
        p = p * z + ci;
    }
    (p, dp)
}

pub fn eval(c: &[f64], z: Complex64) -> Complex64 {
    c.iter()
        .fold(Complex64::new(0.0, 0.0), |acc, &ci| acc * z + ci)
}

/// `Σ |cᵢ| |z|^(n−i)`, the natural magnitude against which `|p(z)|` is judged.
pub fn eval_scale(c: &[f64], z: Complex64) -> f64 {
    let r = z.norm();
    c.iter().fold(0.0, |acc, &ci| acc * r + ci.abs())
}

/// `|p(z)|` relative to [`eval_scale`].
pub fn relative_residual(c: &[f64], z: Complex64) -> f64 {
    let s = eval_scale(c, z);
    if s == 0.0 {
        0.0
    } else {
        eval(c, z).norm() / s
    }
}

/// All complex roots, with multiplicity.
///
/// Companion-matrix eigenvalues (after Parlett–Reinsch balancing) polished by
/// Newton's method on the original coefficients. The output is closed under
/// conjugation and sorted by `(Re, Im)`.
pub fn roots(c: &[f64]) -> Result<Vec<Complex64>> {
    let first = c.iter().position(|&x| x != 0.0).ok_or(Error::ZeroPolynomial)?;
    let c = &c[first..];
    let zeros_at_origin = c.iter().rev().take_while(|&&x| x == 0.0).count();
    let c = &c[..c.len() - zeros_at_origin];
    let n = c.len() - 1;

    let mut out = vec![Complex64::new(0.0, 0.0); zeros_at_origin];
    if n == 0 {
        return Ok(out);
    }

    let mut comp = DMatrix::<f64>::zeros(n, n);
    for j in 0..n {
        comp[(0, j)] = -c[j + 1] / c[0];
    }
    for i in 1..n {
        comp[(i, i - 1)] = 1.0;
    }
    nalgebra::linalg::balancing::balance_parlett_reinsch(&mut comp);
    let eig = comp.complex_eigenvalues();

    let upper: Vec<Complex64> = eig.iter().copied().filter(|z| z.im > 0.0).collect();
    let lower = eig.iter().filter(|z| z.im < 0.0).count();
    if upper.len() == lower {
        for z in eig.iter().filter(|z| z.im == 0.0) {
            let r = polish(c, Complex64::new(z.re, 0.0));
            out.push(Complex64::new(r.re, 0.0));
        }
        for &z in &upper {
            let r = polish(c, z);
            // a pair that Newton pulls onto the real axis stays a pair
            let r = if r.im <= 0.0 { z } else { r };
            out.push(r);
            out.push(r.conj());
        }
    } else {
        out.extend(eig.iter().map(|&z| polish(c, z)));
    }
    out.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
    Ok(out)
}

/// A few Newton steps, keeping the best iterate by residual.
fn polish(c: &[f64], z0: Complex64) -> Complex64 {
    let mut best = z0;
    let mut best_res = eval(c, z0).norm();
    let mut z = z0;
    for _ in 0..8 {
        let (p, dp) = eval_with_derivative(c, z);
        if dp.norm() == 0.0 || !p.is_finite() {
            break;
        }
        z -= p / dp;
        let r = eval(c, z).norm();
        if !(r < best_res) {
            break;
        }
        best = z;
        best_res = r;
        if r == 0.0 {
            break;
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;

    fn from_roots(rs: &[f64]) -> Vec<f64> {
        let mut c = vec![1.0];
        for &r in rs {
            let mut next = vec![0.0; c.len() + 1];
            for (i, &ci) in c.iter().enumerate() {
                next[i] += ci;
                next[i + 1] -= r * ci;
            }
            c = next;
        }
        c
    }

    #[test]
    fn real_roots_recovered() {
        let c = from_roots(&[-3.0, 0.5, 2.0, 7.0]);
        let r = roots(&c).unwrap();
        let want = [-3.0, 0.5, 2.0, 7.0];
        for (z, w) in r.iter().zip(want) {
            assert!((z.re - w).abs() < 1e-12 && z.im == 0.0, "{z}");
        }
    }

    #[test]
    fn complex_pair_and_origin() {
        // λ (λ² + 3)(4λ + 1)
        let c = [4.0, 1.0, 12.0, 3.0, 0.0];
        let r = roots(&c).unwrap();
        assert_eq!(r.len(), 4);
        assert!(r.contains(&Complex64::new(0.0, 0.0)));
        let s3 = 3f64.sqrt();
        assert!(r.iter().any(|z| (z - Complex64::new(0.0, s3)).norm() < 1e-14));
        assert!(r.iter().any(|z| (z - Complex64::new(0.0, -s3)).norm() < 1e-14));
        assert!(r.iter().any(|z| (z.re + 0.25).abs() < 1e-15));
    }

    #[test]
    fn zero_polynomial_is_error() {
        assert_eq!(roots(&[0.0, 0.0]), Err(Error::ZeroPolynomial));
        assert!(roots(&[0.0, 5.0]).unwrap().is_empty());
    }

    #[test]
    fn derivative_matches() {
        let c = [2.0, -1.0, 0.5, 3.0];
        let z = Complex64::new(0.3, -1.1);
        let (_, d) = eval_with_derivative(&c, z);
        let want = 6.0 * z * z - 2.0 * z + 0.5;
        assert!((d - want).norm() < 1e-14);
    }
}
