//! Invariant battery, in the forms that actually hold: `D = Le·D_ε`,
//! `det·(Θi−1)(k₂−k₃) = D`, and the proven signs of `p` and `q`.

use flamefront::hurwitz::{delta0, delta0_derivative, limit_quartic, p7_coeffs, squared_form, Rational};
use flamefront::spectral::{
    appendix_b_check, boundary_matrix, branch_data, dispersion, dispersion_eps, dispersion_scale,
    expected_signs,
    lambda_star,
};
use flamefront::ModelParams;
use num_complex::Complex64 as C;
use num_traits::{Signed, Zero};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use serde::Serialize;

#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub name: &'static str,
    pub pass: bool,
    /// Worst residual, or the observed bound; `None` for exact checks.
    pub residual: Option<f64>,
    pub tolerance: Option<f64>,
    pub detail: String,
}

/// Passes when the worst residual is below `tolerance`.
fn check(name: &'static str, residual: f64, tolerance: f64, detail: String) -> Check {
    Check { name, pass: residual < tolerance, residual: Some(residual), tolerance: Some(tolerance), detail }
}

fn exact(name: &'static str, pass: bool, detail: String) -> Check {
    Check { name, pass, residual: None, tolerance: None, detail }
}

fn random_lambda(rng: &mut StdRng) -> C {
    C::new(rng.random_range(-3.0..3.0), rng.random_range(-3.0..3.0))
}

fn dispersion_forms() -> flamefront::Result<Check> {
    let mut worst = 0.0f64;
    for i in 0..10 {
        let m = 2.5 + 9.5 * i as f64 / 9.0;
        for j in 0..10 {
            let e = 1e-4 * (0.4f64 / 1e-4).powf(j as f64 / 9.0);
            let p = ModelParams::new(m, e)?;
            for k in 0..20 {
                let l = C::from_polar(0.3 + 0.15 * k as f64, 0.3 + 2.6 * k as f64 / 19.0);
                let d = dispersion(l, &p)?;
                let de = dispersion_eps(l, m, e)?;
                let scale = d.norm().max(p.a() * p.lewis());
                worst = worst.max((d - p.lewis() * de).norm() / scale);
            }
        }
    }
    Ok(check("dispersion-forms", worst, 1e-11, "D = Le·D_ε on a 10×10×20 (m, ε, λ) grid".into()))
}

fn determinant() -> flamefront::Result<Check> {
    let mut rng = StdRng::seed_from_u64(3);
    let mut worst = 0.0f64;
    for (m, e) in [(3.0, 0.2), (5.0, 0.05), (9.0, 0.001)] {
        let p = ModelParams::new(m, e)?;
        for _ in 0..200 {
            let l = random_lambda(&mut rng);
            let b = branch_data(l, &p)?;
            let lhs = boundary_matrix(l, &p)?.determinant() * (p.theta_i() - 1.0) * (b.k[1] - b.k[2]);
            let d = dispersion(l, &p)?;
            worst = worst.max((lhs - d).norm() / dispersion_scale(l, &p)?);
        }
    }
    Ok(check("determinant-identity", worst, 1e-10, "det·(Θi−1)(k₂−k₃) = D, 600 random λ".into()))
}

fn squared() -> flamefront::Result<Check> {
    let mut rng = StdRng::seed_from_u64(4);
    let mut worst = 0.0f64;
    for _ in 0..100 {
        let l = random_lambda(&mut rng);
        let m = rng.random_range(2.1..12.0);
        let e = rng.random_range(1e-4..0.49);
        worst = worst.max(squared_form(l, m, e)?.identity_residual(l, m, e));
    }
    Ok(check("squared-form", worst, 1e-9, "squaring chain vs P₇, 100 random (λ, m, ε)".into()))
}

fn quartic() -> flamefront::Result<Check> {
    let six = Rational::from_integer(6.into());
    let q = limit_quartic(&six)?;
    let p = p7_coeffs(&six, &Rational::zero())?;
    let reduces = p.a[..3].iter().all(|a| a.is_zero()) && p.a[3..] == q[..];
    // −6272(4λ+1)(λ−12)(λ²+3)
    let want = [-25088i64, 294784, 0, 884352, 225792].map(|w| Rational::from_integer(w.into()));
    let ok = reduces && q == want;
    Ok(exact("p7-limit-quartic", ok, "P₇(·; 6, 0) = −6272(4λ+1)(λ−12)(λ²+3)".into()))
}

fn delta0_anchor() -> Check {
    let six = Rational::from_integer(6.into());
    let ok = delta0(&six).is_zero() && delta0_derivative(&six).is_positive();
    exact("delta0-anchor", ok, format!("Δ₀(6) = {}, Δ₀'(6) = {}", delta0(&six), delta0_derivative(&six)))
}

fn sign_scan() -> Check {
    let mut bad = 0usize;
    let mut n = 0usize;
    for k in 1..=1000 {
        let t = (k as f64 - 0.5) / 1000.0;
        if let Some(want) = expected_signs(t) {
            n += 1;
            let s = appendix_b_check(t);
            if (s.q_sign, s.p_sign) != want {
                bad += 1;
            }
        }
    }
    exact(
        "pq-signs",
        bad == 0,
        format!("q > 0, p < 0 on (0, 1/2); q < 0, p < 0 on (Θ̄i, 1); {bad} of {n} grid points violate"),
    )
}

fn lambda_star_check() -> flamefront::Result<Check> {
    let mut min_rel = f64::INFINITY;
    for i in 0..20 {
        for j in 0..20 {
            let p = ModelParams::from_lewis(0.68 + 0.27 * i as f64 / 19.0, 1.5 + 98.5 * j as f64 / 19.0)?;
            for l in lambda_star(&p)? {
                min_rel = min_rel.min(dispersion(l, &p)?.norm() / (p.a() * p.lewis()));
            }
        }
    }
    // a lower bound: passes when |D(λ*)| stays away from zero
    Ok(Check {
        name: "lambda-star",
        pass: min_rel > 1e-3,
        residual: Some(min_rel),
        tolerance: Some(1e-3),
        detail: "min |D(λ*)|/(A·Le) on a 20×20 (Θi, Le) grid".into(),
    })
}

pub fn battery() -> flamefront::Result<Vec<Check>> {
    Ok(vec![
        dispersion_forms()?,
        determinant()?,
        squared()?,
        quartic()?,
        delta0_anchor(),
        sign_scan(),
        lambda_star_check()?,
    ])
}
