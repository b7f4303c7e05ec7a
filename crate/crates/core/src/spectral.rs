//! Spectrum of the operator linearised around the traveling wave.
//!
//! For a perturbation `(u, v)` of `(Θ, Φ)` in front-fixed coordinates the
//! eigenvalue problem reads
//!
//! ```text
//! λu = u'' + u' + A v χ(ξ<0),     λv = ε v'' + v' − A v χ(ξ<0),
//! [u] = [v] = 0,   [u'] = −u(0)/(1−Θi),   [v'] = Le·u(0)/(1−Θi).
//! ```
//!
//! The spectrum consists of the ray `(−∞, −1/4]`, the filled parabola `𝒫`,
//! and the zeros of the dispersion relation `D(λ)`. All square roots are
//! principal, so every formula is analytic off the ray.

use nalgebra::{Matrix4, Vector4};
use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::{ModelParams, Side};

type C = Complex64;

const ONE: C = C::new(1.0, 0.0);

/// Principal square root. Points on the negative real axis take the value
/// from the upper half plane, `√(−x) = +i√x`, also for a signed `−0` imaginary
/// part.
pub fn principal_sqrt(z: C) -> C {
    let z = if z.im == 0.0 { C::new(z.re, 0.0) } else { z };
    z.sqrt()
}

/// True if `λ` lies on the closed ray `(−∞, −1/4]`.
pub fn on_cut(lambda: C) -> bool {
    lambda.im == 0.0 && lambda.re <= -0.25
}

fn check_cut(lambda: C) -> Result<()> {
    if on_cut(lambda) || !lambda.is_finite() {
        Err(Error::OnBranchCut(lambda))
    } else {
        Ok(())
    }
}

/// `H₁, H₂, H₃` and the six characteristic roots at a given `λ`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BranchData {
    pub h1: C,
    pub h2: C,
    pub h3: C,
    /// `k₁ … k₆` (0-based in the array).
    pub k: [C; 6],
}

impl BranchData {
    /// Largest of the defining-relation residuals
    /// (`k₁+k₂=−1`, `k₃+k₄=k₅+k₆=−Le`, `k₁k₂=−λ`), each relative.
    pub fn consistency_residual(&self, lambda: C, le: f64) -> f64 {
        let k = &self.k;
        let rel = |x: C, s: f64| x.norm() / s.max(1.0);
        [
            rel(k[0] + k[1] + 1.0, 1.0),
            rel(k[2] + k[3] + le, le),
            rel(k[4] + k[5] + le, le),
            rel(k[0] * k[1] + lambda, lambda.norm()),
        ]
        .into_iter()
        .fold(0.0, f64::max)
    }
}

/// Characteristic roots of the half-line problems. Requires `ε > 0`.
pub fn branch_data(lambda: C, params: &ModelParams) -> Result<BranchData> {
    if params.is_limit() {
        return Err(Error::RequiresFiniteLewis("branch_data"));
    }
    let le = params.lewis();
    let a = params.a();
    let h1 = principal_sqrt(1.0 + 4.0 * lambda);
    let h2 = principal_sqrt(le * le + 4.0 * le * (a + lambda));
    let h3 = principal_sqrt(le * le + 4.0 * le * lambda);
    Ok(BranchData {
        h1,
        h2,
        h3,
        k: [
            (h1 - 1.0) / 2.0,
            (-h1 - 1.0) / 2.0,
            (h2 - le) / 2.0,
            (-h2 - le) / 2.0,
            (h3 - le) / 2.0,
            (-h3 - le) / 2.0,
        ],
    })
}

/// Dispersion relation in Lewis-number form,
/// `D(λ) = (k₆−k₃)(k₃−k₂)[1 − (1−Θi)H₁] + A·Le`.
///
/// Its zeros are the isolated eigenvalues; `D = Le · D_ε` with
/// [`dispersion_eps`].
pub fn dispersion(lambda: C, params: &ModelParams) -> Result<C> {
    check_cut(lambda)?;
    let b = branch_data(lambda, params)?;
    Ok(dispersion_from(&b, params))
}

fn dispersion_from(b: &BranchData, params: &ModelParams) -> C {
    let k = &b.k;
    (k[5] - k[2]) * (k[2] - k[1]) * (ONE - (1.0 - params.theta_i()) * b.h1)
        + params.a() * params.lewis()
}

/// Magnitude scale for `|D(λ)|`: the sum of the moduli of its two terms.
pub fn dispersion_scale(lambda: C, params: &ModelParams) -> Result<f64> {
    check_cut(lambda)?;
    let b = branch_data(lambda, params)?;
    let k = &b.k;
    let first = (k[5] - k[2]) * (k[2] - k[1]) * (ONE - (1.0 - params.theta_i()) * b.h1);
    Ok(first.norm() + params.a() * params.lewis())
}

/// Dispersion relation in `ε` form,
///
/// ```text
/// D_ε(λ; m) = −¼ (r₁+r₂) ((r₁−1)/ε + 1 + r₃) (1 − r₃/(1+m)) + m + εm²,
/// r₁ = √(1+4ε(m+εm²+λ)),  r₂ = √(1+4ελ),  r₃ = √(1+4λ).
/// ```
///
/// `(r₁−1)/ε` is evaluated as `4(m+εm²+λ)/(r₁+1)`, which is exact and stays
/// accurate as `ε → 0`; at `ε = 0` the value is [`limit_dispersion`].
pub fn dispersion_eps(lambda: C, m: f64, epsilon: f64) -> Result<C> {
    check_cut(lambda)?;
    if !(m > 2.0) || !(epsilon >= 0.0) || !epsilon.is_finite() {
        return Err(Error::InvalidParams(format!("m = {m}, ε = {epsilon}")));
    }
    if epsilon == 0.0 {
        return limit_dispersion(lambda, m);
    }
    let s = m + epsilon * m * m + lambda;
    let r1 = principal_sqrt(1.0 + 4.0 * epsilon * s);
    let r2 = principal_sqrt(1.0 + 4.0 * epsilon * lambda);
    let r3 = principal_sqrt(1.0 + 4.0 * lambda);
    let q = 4.0 * s / (r1 + 1.0);
    Ok(-0.25 * (r1 + r2) * (q + 1.0 + r3) * (ONE - r3 / (1.0 + m)) + m + epsilon * m * m)
}

/// Limit `ε → 0` of [`dispersion_eps`]:
/// `D₀(λ; m) = (H−1)/(4(1+m)) · [4λ − (m−2)H + m + 2]`, `H = √(1+4λ)`.
pub fn limit_dispersion(lambda: C, m: f64) -> Result<C> {
    check_cut(lambda)?;
    let h = principal_sqrt(1.0 + 4.0 * lambda);
    Ok((h - 1.0) / (4.0 * (1.0 + m)) * (4.0 * lambda - (m - 2.0) * h + m + 2.0))
}

/// Analytic partial derivatives `(∂D₀/∂λ, ∂D₀/∂m)`.
pub fn limit_dispersion_partials(lambda: C, m: f64) -> Result<(C, C)> {
    check_cut(lambda)?;
    let h = principal_sqrt(1.0 + 4.0 * lambda);
    let dh = 2.0 / h;
    let f = (h - 1.0) / (4.0 * (1.0 + m));
    let g = 4.0 * lambda - (m - 2.0) * h + m + 2.0;
    let d_lambda = dh / (4.0 * (1.0 + m)) * g + f * (4.0 - (m - 2.0) * dh);
    let d_m = -f / (1.0 + m) * g + f * (1.0 - h);
    Ok((d_lambda, d_m))
}

/// Nonzero roots of `D₀(·; m)`: the roots of `4λ² + (6m−m²)λ + 2m`.
///
/// For `2 < m < 8` they are `a(m) ± i b(m)` with `a = (m²−6m)/8`,
/// `b = (m−2)√(8m−m²)/8`; otherwise a real pair (double at `m = 8`).
/// Ordered with the lower imaginary part (or smaller real root) first.
pub fn limit_roots(m: f64) -> Result<Vec<C>> {
    if !(m > 2.0) || !m.is_finite() {
        return Err(Error::InvalidParams(format!("m = {m} must exceed 2")));
    }
    let a = (m * m - 6.0 * m) / 8.0;
    // discriminant/64 = m (m−2)² (m−8) / 64
    let b = (m - 2.0) * (m * (m - 8.0)).abs().sqrt() / 8.0;
    let roots = if m < 8.0 {
        vec![C::new(a, -b), C::new(a, b)]
    } else {
        vec![C::new(a - b, 0.0), C::new(a + b, 0.0)]
    };
    debug_assert!(roots.iter().all(|z| z.re >= -(m + 2.0) / 4.0));
    Ok(roots)
}

/// Coefficients of the parabola `𝒫 = {a Re λ + b (Im λ)² + c ≤ 0}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Parabola {
    pub a: f64,
    pub b: f64,
    pub c: f64,
}

impl Parabola {
    pub fn new(params: &ModelParams) -> Result<Self> {
        if params.is_limit() {
            return Err(Error::RequiresFiniteLewis("parabola"));
        }
        let le = params.lewis();
        let am = params.a();
        Ok(Parabola {
            a: (1.0 - 1.0 / le).powi(2),
            b: 1.0 / le,
            c: (2.0 * am + 1.0) / 2.0 + (8.0 * am - 5.0) / (4.0 * le) + (1.0 + am) / (le * le)
                - 1.0 / (4.0 * le.powi(3)),
        })
    }

    pub fn value(&self, lambda: C) -> f64 {
        self.a * lambda.re + self.b * lambda.im * lambda.im + self.c
    }

    pub fn contains(&self, lambda: C) -> bool {
        self.value(lambda) <= 0.0
    }

    /// Real abscissa of the vertex, `−c/a`.
    pub fn vertex(&self) -> f64 {
        -self.c / self.a
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SpectrumLabel {
    EssentialRay,
    EssentialParabola,
    PointRoot,
    ZeroEigenvalue,
    Resolvent,
}

impl SpectrumLabel {
    pub fn as_str(&self) -> &'static str {
        match self {
            SpectrumLabel::EssentialRay => "essential-ray",
            SpectrumLabel::EssentialParabola => "essential-parabola",
            SpectrumLabel::PointRoot => "point-root",
            SpectrumLabel::ZeroEigenvalue => "zero-eigenvalue",
            SpectrumLabel::Resolvent => "resolvent",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SpectrumClassification {
    pub label: SpectrumLabel,
    /// `|D(λ)|`; `None` on the ray where `D` is not evaluated.
    pub residual: Option<f64>,
}

/// Relative threshold on `|D|/scale` for calling a point a root.
pub const POINT_ROOT_TOL: f64 = 1e-9;

/// Classify `λ` as essential spectrum, eigenvalue or resolvent point.
///
/// The ray takes precedence, then the parabola; outside both, `λ` is an
/// eigenvalue when `|D(λ)| < 1e−9 · scale`.
pub fn essential_membership(lambda: C, params: &ModelParams) -> Result<SpectrumClassification> {
    if on_cut(lambda) {
        return Ok(SpectrumClassification {
            label: SpectrumLabel::EssentialRay,
            residual: None,
        });
    }
    let d = dispersion(lambda, params)?.norm();
    let label = if Parabola::new(params)?.contains(lambda) {
        SpectrumLabel::EssentialParabola
    } else if d < POINT_ROOT_TOL * dispersion_scale(lambda, params)? {
        if lambda.norm() < 1e-8 {
            SpectrumLabel::ZeroEigenvalue
        } else {
            SpectrumLabel::PointRoot
        }
    } else {
        SpectrumLabel::Resolvent
    };
    Ok(SpectrumClassification {
        label,
        residual: Some(d),
    })
}

/// Matrix of the interface conditions for the unknowns `(c₁, c₃, c₆, c₈)`.
///
/// Its determinant satisfies `det · (Θi−1)(k₂−k₃) = D(λ)`.
pub fn boundary_matrix(lambda: C, params: &ModelParams) -> Result<Matrix4<C>> {
    check_cut(lambda)?;
    let b = branch_data(lambda, params)?;
    Ok(boundary_matrix_from(&b, params))
}

fn boundary_matrix_from(b: &BranchData, params: &ModelParams) -> Matrix4<C> {
    let k = &b.k;
    let a = params.a();
    let ti = params.theta_i();
    let z = C::new(0.0, 0.0);
    let s = a / ((k[2] - k[1]) * b.h1);
    Matrix4::new(
        ONE, s, -ONE, z,
        z, ONE, z, -ONE,
        k[0], s * k[1], 1.0 / (ti - 1.0) - k[1], z,
        z, k[2], C::new(params.lewis() / (1.0 - ti), 0.0), -k[5],
    )
}

/// Singular-value summary of a 4×4 matrix.
#[derive(Debug, Clone, Copy)]
pub struct NullSpace {
    /// Right singular vector of the smallest singular value, unit length.
    pub vector: Vector4<C>,
    /// Singular values, descending.
    pub singular_values: [f64; 4],
}

impl NullSpace {
    pub fn of(mat: &Matrix4<C>) -> Self {
        let svd = mat.svd(false, true);
        let vt = svd.v_t.expect("v_t requested");
        let mut idx = [0usize, 1, 2, 3];
        idx.sort_by(|&i, &j| svd.singular_values[j].total_cmp(&svd.singular_values[i]));
        let last = idx[3];
        let vector = vt.row(last).transpose().map(|z| z.conj());
        NullSpace {
            vector,
            singular_values: idx.map(|i| svd.singular_values[i]),
        }
    }

    /// Number of singular values above `rel_tol` times the largest.
    pub fn rank(&self, rel_tol: f64) -> usize {
        let top = self.singular_values[0];
        self.singular_values.iter().filter(|&&s| s > rel_tol * top).count()
    }
}

/// Singular-value threshold used for rank decisions.
pub const RANK_TOL: f64 = 1e-8;

/// An eigenfunction sampled on a grid, with the coefficients it was built from.
#[derive(Debug, Clone, PartialEq)]
pub struct Eigenfunction {
    pub lambda: C,
    /// `(c₁, c₃, c₆, c₈)`.
    pub coeffs: [C; 4],
    pub grid: Vec<f64>,
    pub u: Vec<C>,
    pub v: Vec<C>,
}

/// Closed-form evaluator for `(u, v)` and their first two derivatives.
#[derive(Debug, Clone, Copy)]
pub struct ModeEvaluator {
    lambda: C,
    branch: BranchData,
    coeffs: [C; 4],
    a: f64,
}

/// Values `[f, f', f'']` of one component.
pub type Jet = [C; 3];

impl ModeEvaluator {
    pub fn new(lambda: C, params: &ModelParams, coeffs: [C; 4]) -> Result<Self> {
        check_cut(lambda)?;
        let branch = branch_data(lambda, params)?;
        let k = &branch.k;
        let gap = (k[0] - k[2]).norm();
        if gap < 1e-10 * (1.0 + k[0].norm()) {
            return Err(Error::Precondition(format!(
                "k₁ = k₃ at λ = {lambda}: the coincident-root eigenfunction is not built \
                 (such λ are never eigenvalues)"
            )));
        }
        Ok(ModeEvaluator {
            lambda,
            branch,
            coeffs,
            a: params.a(),
        })
    }

    pub fn lambda(&self) -> C {
        self.lambda
    }

    pub fn coeffs(&self) -> [C; 4] {
        self.coeffs
    }

    /// `(u, v)` jets at `ξ`; `side` selects the branch at `ξ = 0`.
    pub fn jets(&self, xi: f64, side: Side) -> (Jet, Jet) {
        let k = &self.branch.k;
        let [c1, c3, c6, c8] = self.coeffs;
        let jet = |c: C, kk: C| -> Jet {
            let e = c * (kk * xi).exp();
            [e, e * kk, e * kk * kk]
        };
        let add = |x: Jet, y: Jet| -> Jet { [x[0] + y[0], x[1] + y[1], x[2] + y[2]] };
        if xi < 0.0 || (xi == 0.0 && side == Side::Left) {
            let (k1, k2, k3) = (k[0], k[1], k[2]);
            let g = self.a / self.branch.h1;
            let w3 = g * (1.0 / (k3 - k2) - 1.0 / (k3 - k1)) * c3;
            let w1 = g / (k3 - k1) * c3;
            let u = add(add(jet(c1, k1), jet(w3, k3)), jet(w1, k1));
            (u, jet(c3, k3))
        } else {
            (jet(c6, k[1]), jet(c8, k[5]))
        }
    }

    pub fn u(&self, xi: f64) -> C {
        self.jets(xi, Side::Left).0[0]
    }

    pub fn v(&self, xi: f64) -> C {
        self.jets(xi, Side::Left).1[0]
    }

    /// Residuals of the four interface conditions.
    pub fn interface_residuals(&self, params: &ModelParams) -> [C; 4] {
        let (ul, vl) = self.jets(0.0, Side::Left);
        let (ur, vr) = self.jets(0.0, Side::Right);
        let w = 1.0 - params.theta_i();
        [
            ur[0] - ul[0],
            vr[0] - vl[0],
            ur[1] - ul[1] + ur[0] / w,
            vr[1] - vl[1] - params.lewis() * ur[0] / w,
        ]
    }

    /// Residuals of the two eigenvalue equations at `ξ ≠ 0`, analytic derivatives.
    pub fn ode_residuals(&self, xi: f64, params: &ModelParams) -> (C, C) {
        let (u, v) = self.jets(xi, Side::Left);
        let chi = if xi < 0.0 { params.a() } else { 0.0 };
        let l = self.lambda;
        (
            l * u[0] - (u[2] + u[1] + chi * v[0]),
            l * v[0] - (params.epsilon() * v[2] + v[1] - chi * v[0]),
        )
    }
}

/// Eigenfunction for a root of `D`, from the null vector of the boundary
/// matrix. The null vector is rotated so that `u(0) = c₆` is real and
/// non-negative.
pub fn eigenfunction(lambda: C, params: &ModelParams, grid: &[f64]) -> Result<Eigenfunction> {
    check_cut(lambda)?;
    let d = dispersion(lambda, params)?.norm();
    let scale = dispersion_scale(lambda, params)?;
    if d > 1e-7 * scale {
        return Err(Error::Precondition(format!(
            "λ = {lambda} is not a root: |D| = {d:.3e} (scale {scale:.3e})"
        )));
    }
    let ns = NullSpace::of(&boundary_matrix(lambda, params)?);
    let mut c = ns.vector;
    let pivot = if c[2].norm() > 1e-12 { c[2] } else { c[0] };
    let phase = pivot.conj() / pivot.norm();
    c *= phase;
    eigenfunction_from_coeffs(lambda, params, [c[0], c[1], c[2], c[3]], grid)
}

/// Sample the closed-form eigenfunction for explicit coefficients.
pub fn eigenfunction_from_coeffs(
    lambda: C,
    params: &ModelParams,
    coeffs: [C; 4],
    grid: &[f64],
) -> Result<Eigenfunction> {
    let ev = ModeEvaluator::new(lambda, params, coeffs)?;
    let (u, v) = grid.iter().map(|&x| (ev.u(x), ev.v(x))).unzip();
    Ok(Eigenfunction {
        lambda,
        coeffs,
        grid: grid.to_vec(),
        u,
        v,
    })
}

/// The two solutions of `k₁ = k₃`,
/// `λ*ⱼ = (−A·Le + (−1)ʲ i √(A·Le(Le−1)))/(Le−1)`, `j = 1, 2`.
pub fn lambda_star(params: &ModelParams) -> Result<[C; 2]> {
    if params.is_limit() {
        return Err(Error::RequiresFiniteLewis("lambda_star"));
    }
    let le = params.lewis();
    let al = params.a() * le;
    let re = -al / (le - 1.0);
    let im = (al * (le - 1.0)).sqrt() / (le - 1.0);
    Ok([C::new(re, -im), C::new(re, im)])
}

/// Threshold `Θ̄i = (4+√22)/12` above which `Le₊ > 1`.
pub fn theta_bar() -> f64 {
    (4.0 + 22f64.sqrt()) / 12.0
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SignCheck {
    pub theta_i: f64,
    pub p: f64,
    pub q: f64,
    pub p_sign: i8,
    pub q_sign: i8,
}

const P_COEFFS: [f64; 10] = [
    -38400.0, 296896.0, -800896.0, 1041468.0, -698658.0, 218492.0, -14718.0, -3894.0, -298.0,
    -8.0,
];
const Q_COEFFS: [f64; 7] = [1920.0, -11600.0, 19164.0, -12038.0, 2174.0, 251.0, 8.0];

fn signum(x: f64) -> i8 {
    if x > 0.0 {
        1
    } else if x < 0.0 {
        -1
    } else {
        0
    }
}

/// The polynomials `p(Θi)` and `q(Θi)` whose signs decide whether `λ*` can be
/// a root of `D`.
pub fn appendix_b_check(theta_i: f64) -> SignCheck {
    let h = |c: &[f64]| c.iter().fold(0.0, |acc, &x| acc * theta_i + x);
    let p = h(&P_COEFFS);
    let q = h(&Q_COEFFS);
    SignCheck {
        theta_i,
        p,
        q,
        p_sign: signum(p),
        q_sign: signum(q),
    }
}

/// Signs `(q, p)` that rule out `D(λ*) = 0`: `q > 0, p < 0` on `(0, 1/2)` and
/// `q < 0, p < 0` on `(Θ̄i, 1)`; `None` in between.
pub fn expected_signs(theta_i: f64) -> Option<(i8, i8)> {
    if theta_i > 0.0 && theta_i < 0.5 {
        Some((1, -1))
    } else if theta_i > theta_bar() && theta_i < 1.0 {
        Some((-1, -1))
    } else {
        None
    }
}
