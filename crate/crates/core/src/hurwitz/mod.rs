//! The squared dispersion polynomial `P₇`, its Hurwitz determinants and the
//! Hopf critical curve `m_c(ε)`.
//!
//! Removing the square roots from `D_ε(λ; m) = 0` by repeated squaring gives
//! a real polynomial of degree seven in `λ` whose coefficients are integer
//! polynomials in `(m, ε)`. Every dispersion root is a root of `P₇`; the
//! converse fails (squaring introduces spurious roots). A conjugate pair of
//! purely imaginary roots makes the Hurwitz determinant `Δ₆` vanish, and the
//! critical curve is traced as the zero set of `Δ₆` in `m`.

mod coeffs;

use std::sync::OnceLock;

use num_bigint::{BigInt, Sign};
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::poly;
use crate::spectral;

type C = Complex64;
pub type Rational = BigRational;

/// Exact rational value of a finite `f64`.
pub fn rational_from_f64(x: f64) -> Result<Rational> {
    Rational::from_float(x).ok_or_else(|| Error::Domain(format!("{x} is not finite")))
}

/// Parse `"p/q"`, an integer, or a decimal such as `"0.02"` or `"1e-4"`
/// exactly (the decimal is read in base ten, not through `f64`).
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::Config(format!("not a rational number: {s:?}"));
    if let Some((p, q)) = s.split_once('/') {
        let p: BigInt = p.trim().parse().map_err(|_| bad())?;
        let q: BigInt = q.trim().parse().map_err(|_| bad())?;
        if q.is_zero() {
            return Err(bad());
        }
        return Ok(Rational::new(p, q));
    }
    let (mant, exp) = match s.find(['e', 'E']) {
        Some(i) => (&s[..i], s[i + 1..].parse::<i32>().map_err(|_| bad())?),
        None => (s, 0),
    };
    let (neg, mant) = match mant.strip_prefix('-') {
        Some(r) => (true, r),
        None => (false, mant.strip_prefix('+').unwrap_or(mant)),
    };
    let (int, frac) = mant.split_once('.').unwrap_or((mant, ""));
    let digits = format!("{int}{frac}");
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return Err(bad());
    }
    let n: BigInt = digits.parse().map_err(|_| bad())?;
    let shift = exp - frac.len() as i32;
    let ten = BigInt::from(10u32);
    let mut r = if shift >= 0 {
        Rational::from_integer(n * num_traits::pow(ten, shift as usize))
    } else {
        Rational::new(n, num_traits::pow(ten, (-shift) as usize))
    };
    if neg {
        r = -r;
    }
    Ok(r)
}

fn to_f64(q: &Rational) -> f64 {
    q.to_f64().unwrap_or(f64::NAN)
}

/// Exact coefficients `a₀ … a₇` of `P₇(λ) = Σ aᵢ λ^(7−i)` at rational `(m, ε)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Poly7 {
    pub a: [Rational; 8],
    pub m: Rational,
    pub epsilon: Rational,
}

impl Poly7 {
    /// Degree after dropping vanishing leading coefficients (7 for `ε > 0`).
    pub fn degree(&self) -> Option<usize> {
        self.a.iter().position(|c| !c.is_zero()).map(|i| 7 - i)
    }

    pub fn coeffs_f64(&self) -> [f64; 8] {
        std::array::from_fn(|i| to_f64(&self.a[i]))
    }

    pub fn eval(&self, z: C) -> C {
        poly::eval(&self.coeffs_f64(), z)
    }

    /// `|P₇(z)|` relative to `Σ |aᵢ| |z|^(7−i)`.
    pub fn relative_residual(&self, z: C) -> f64 {
        poly::relative_residual(&self.coeffs_f64(), z)
    }
}

/// `P₇` coefficients for `m > 2`, `0 ≤ ε < 1/2`.
pub fn p7_coeffs(m: &Rational, epsilon: &Rational) -> Result<Poly7> {
    let two = Rational::from_integer(2.into());
    let half = Rational::new(1.into(), 2.into());
    if *m <= two || epsilon.is_negative() || *epsilon >= half {
        return Err(Error::InvalidParams(format!(
            "need m > 2 and 0 ≤ ε < 1/2, got m = {m}, ε = {epsilon}"
        )));
    }
    Ok(p7_coeffs_unchecked(m, epsilon))
}

fn p7_coeffs_unchecked(m: &Rational, epsilon: &Rational) -> Poly7 {
    let powers = |x: &Rational| {
        let mut v = vec![Rational::one()];
        for i in 1..=12 {
            let next = &v[i - 1] * x;
            v.push(next);
        }
        v
    };
    let mp = powers(m);
    let ep = powers(epsilon);
    let a = std::array::from_fn(|k| {
        coeffs::A[k].iter().fold(Rational::zero(), |acc, &(c, i, j)| {
            acc + Rational::from_integer(c.into()) * &mp[i as usize] * &ep[j as usize]
        })
    });
    Poly7 {
        a,
        m: m.clone(),
        epsilon: epsilon.clone(),
    }
}

/// `P₇` coefficients in floating point (same tables, no validation).
pub fn p7_coeffs_f64(m: f64, epsilon: f64) -> [f64; 8] {
    std::array::from_fn(|k| {
        coeffs::A[k].iter().fold(0.0, |acc, &(c, i, j)| {
            acc + c as f64 * m.powi(i as i32) * epsilon.powi(j as i32)
        })
    })
}

/// Intermediate quantities of the squaring chain.
///
/// `D_ε = 0` is rearranged so that one radical stands alone with right-hand
/// side `ζ`; squaring twice produces `Σ₁, Σ₂, Σ₃` and the polynomial
/// `[(ζ²−Σ₁)² − 4Σ₂]² − 64 Σ₃ ζ² = 32 ε² λ P₇(λ) / (1+m)⁸`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SquaredFormIntermediates {
    pub zeta: C,
    pub sigma1: C,
    pub sigma2: C,
    pub sigma3: C,
    /// `[(ζ²−Σ₁)² − 4Σ₂]² − 64 Σ₃ ζ²`.
    pub value: C,
    /// Larger modulus of the two terms of `value`.
    pub scale: f64,
}

impl SquaredFormIntermediates {
    /// `|value − 32ε²λP₇(λ)/(1+m)⁸|` relative to [`Self::scale`].
    pub fn identity_residual(&self, lambda: C, m: f64, epsilon: f64) -> f64 {
        let p = poly::eval(&p7_coeffs_f64(m, epsilon), lambda);
        let rhs = 32.0 * epsilon * epsilon * lambda * p / (1.0 + m).powi(8);
        let s = self.scale.max(rhs.norm());
        if s == 0.0 {
            0.0
        } else {
            (self.value - rhs).norm() / s
        }
    }
}

pub fn squared_form(lambda: C, m: f64, epsilon: f64) -> Result<SquaredFormIntermediates> {
    if spectral::on_cut(lambda) {
        return Err(Error::OnBranchCut(lambda));
    }
    let e = epsilon;
    let l4 = 1.0 + 4.0 * lambda;
    let m1 = 1.0 + m;
    let em = 1.0 + e * m;
    let zeta = e * l4 / m1 + 1.0 - e;
    let b = 2.0 + 6.0 * e * m + 5.0 * e * e * m * m + 4.0 * e * lambda;
    let r2 = 1.0 + 4.0 * e * lambda;
    let r1 = 1.0 + 4.0 * e * (m + e * m * m + lambda);
    let sigma1 = r2 + b / (m1 * m1) * l4;
    let sigma2 = l4 / (m1 * m1) * (b * r2 + r1 * em * em / (m1 * m1) * l4);
    let sigma3 = r1 * em * em / m1.powi(4) * r2 * l4 * l4;
    let t = (zeta * zeta - sigma1).powi(2) - 4.0 * sigma2;
    let first = t * t;
    let second = 64.0 * sigma3 * zeta * zeta;
    Ok(SquaredFormIntermediates {
        zeta,
        sigma1,
        sigma2,
        sigma3,
        value: first - second,
        scale: first.norm().max(second.norm()),
    })
}

/// All complex roots of `P₇` (degree drops when `ε = 0`).
pub fn p7_roots(poly: &Poly7) -> Result<Vec<C>> {
    poly::roots(&poly.coeffs_f64())
}

/// Hurwitz determinants `Δ₁ … Δ₆` of `P₇`.
#[derive(Debug, Clone, PartialEq)]
pub struct HurwitzReport {
    pub deltas: Vec<Rational>,
    /// `Δ₆ = 0`: a root pair with zero sum (imaginary pair or double zero).
    pub orlando_zero: bool,
    pub signs: Vec<i8>,
}

impl HurwitzReport {
    pub fn delta6(&self) -> &Rational {
        &self.deltas[5]
    }
}

/// Exact leading minors of the Hurwitz matrix `H[i][j] = a_{2j−i}`
/// (1-based, `aₖ = 0` outside `0..=7`), by fraction-free elimination.
pub fn hurwitz_determinants(poly: &Poly7) -> Result<HurwitzReport> {
    if poly.a[0].is_zero() {
        return Err(Error::DegreeDegeneration(
            "a₀ = 0 (ε = 0): P₇ reduces to a quartic; use p7_roots on the reduced polynomial"
                .into(),
        ));
    }
    // clear denominators: Δₖ scales by Lᵏ with L > 0, signs unchanged
    let l = poly
        .a
        .iter()
        .fold(BigInt::one(), |acc, c| num_integer::Integer::lcm(&acc, c.denom()));
    let b: Vec<BigInt> = poly
        .a
        .iter()
        .map(|c| (c * Rational::from_integer(l.clone())).to_integer())
        .collect();
    let n = 7usize;
    let entry = |i: usize, j: usize| -> BigInt {
        let k = 2 * (j as i64 + 1) - (i as i64 + 1);
        if (0..=7).contains(&k) {
            b[k as usize].clone()
        } else {
            BigInt::zero()
        }
    };
    let mut deltas = Vec::with_capacity(6);
    for k in 1..n {
        let mat: Vec<Vec<BigInt>> = (0..k).map(|i| (0..k).map(|j| entry(i, j)).collect()).collect();
        let det = bareiss_det(mat);
        let lk = num_traits::pow(l.clone(), k);
        deltas.push(Rational::new(det, lk));
    }
    let signs = deltas
        .iter()
        .map(|d| match d.numer().sign() {
            Sign::Plus => 1,
            Sign::Minus => -1,
            Sign::NoSign => 0,
        })
        .collect();
    Ok(HurwitzReport {
        orlando_zero: deltas[5].is_zero(),
        deltas,
        signs,
    })
}

/// Determinant of an integer matrix by Bareiss elimination with row pivoting.
pub fn bareiss_det(mut a: Vec<Vec<BigInt>>) -> BigInt {
    let n = a.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut negate = false;
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                Some(i) => {
                    a.swap(k, i);
                    negate = !negate;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = (&a[i][j] * &a[k][k] - &a[i][k] * &a[k][j]) / &prev;
                a[i][j] = v;
            }
        }
        prev = a[k][k].clone();
    }
    let d = a[n - 1][n - 1].clone();
    if negate {
        -d
    } else {
        d
    }
}

/// `(−1)^(n(n−1)/2) a₀^(n−1) ∏_{i<j} (λᵢ+λⱼ)`, which equals `Δ_{n−1}` for a
/// degree-`n` polynomial with leading coefficient `a₀` and roots `λᵢ`.
pub fn orlando_product(a0: f64, roots: &[C]) -> C {
    let n = roots.len();
    let mut p = C::new(1.0, 0.0);
    for i in 0..n {
        for j in i + 1..n {
            p *= roots[i] + roots[j];
        }
    }
    let sign = if (n * (n - 1) / 2).is_multiple_of(2) { 1.0 } else { -1.0 };
    sign * a0.powi(n as i32 - 1) * p
}

const DELTA0: [i64; 19] = [
    -1, 8, 97, 42, -2129, -9376, -16811, -7866, 19913, 31292, -4309, -55466, -66363, -35480,
    -4729, 4666, 2628, 500, 24,
];

/// The degree-18 polynomial `Δ₀(m)` governing the `ε → 0` limit of `Δ₆`,
/// evaluated exactly.
pub fn delta0(m: &Rational) -> Rational {
    DELTA0
        .iter()
        .fold(Rational::zero(), |acc, &c| acc * m + Rational::from_integer(c.into()))
}

/// Exact `dΔ₀/dm`.
pub fn delta0_derivative(m: &Rational) -> Rational {
    let n = DELTA0.len() - 1;
    DELTA0[..n].iter().enumerate().fold(Rational::zero(), |acc, (i, &c)| {
        acc * m + Rational::from_integer(BigInt::from(c) * BigInt::from(n - i))
    })
}

pub fn delta0_f64(m: f64) -> f64 {
    DELTA0.iter().fold(0.0, |acc, &c| acc * m + c as f64)
}

/// Half-width of the window `(6−δ, 6+δ)` in which `m_c` is sought.
pub const CRITICAL_WINDOW: f64 = 1.0;
/// Largest `ε` accepted by [`critical_curve`].
pub const EPS_MAX: f64 = 0.05;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CriticalResiduals {
    /// Exact `Δ₆(m_c, ε)` rounded to `f64`.
    pub delta6: f64,
    /// Estimated distance in `m` to the exact zero of `Δ₆`, relative to `m_c`.
    pub m_relative: f64,
    /// `|P₇(iω)|` relative to its term scale.
    pub p7_at_iomega: f64,
    /// `|D_ε(iω; m_c)|`.
    pub dispersion_at_iomega: f64,
}

/// A point of the critical curve.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CriticalPoint {
    pub epsilon: f64,
    /// `ε` as an exact fraction.
    pub epsilon_exact: String,
    pub m_c: f64,
    pub omega: f64,
    pub residuals: CriticalResiduals,
    /// `Δ₆` evaluations used by the root finder.
    pub evaluations: usize,
}

fn delta6_at(m: f64, epsilon: &Rational) -> Result<Rational> {
    let poly = p7_coeffs(&rational_from_f64(m)?, epsilon)?;
    Ok(hurwitz_determinants(&poly)?.delta6().clone())
}

fn sign_of(q: &Rational) -> i8 {
    match q.numer().sign() {
        Sign::Plus => 1,
        Sign::Minus => -1,
        Sign::NoSign => 0,
    }
}

/// Solve `Δ₆(m, ε) = 0` near `seed` and extract the imaginary root pair.
///
/// The zero is bracketed by an outward search from `seed` and then located
/// by the Illinois variant of regula falsi with bisection safeguards, on
/// exact values of `Δ₆`; iteration stops when the bracket is narrower than
/// `1e−13·m`.
pub fn critical_point(epsilon: &Rational, seed: f64) -> Result<CriticalPoint> {
    let eps = to_f64(epsilon);
    if !(eps > 0.0 && eps <= EPS_MAX) {
        return Err(Error::Domain(format!(
            "ε = {epsilon} outside the working range (0, {EPS_MAX}]"
        )));
    }
    let (lo_m, hi_m) = (6.0 - CRITICAL_WINDOW, 6.0 + CRITICAL_WINDOW);
    let mut evals = 0usize;
    let mut f = |m: f64| -> Result<(i8, f64)> {
        evals += 1;
        let d = delta6_at(m, epsilon)?;
        Ok((sign_of(&d), to_f64(&d)))
    };

    let (s0, v0) = f(seed)?;
    let (mut a, mut b) = (seed, seed);
    if s0 != 0 {
        let mut found = None;
        let mut prev = [seed, seed];
        let mut prev_v = [v0, v0];
        let mut h = 0.02;
        let mut open = [seed < hi_m, seed > lo_m];
        'search: while open.iter().any(|&o| o) {
            for (side, dir) in [1.0, -1.0].into_iter().enumerate() {
                if !open[side] {
                    continue;
                }
                // the last probe on each side sits on the window edge, so
                // doubling never steps over a zero near it
                let m = (seed + dir * h).clamp(lo_m, hi_m);
                if m == lo_m || m == hi_m {
                    open[side] = false;
                }
                let (s, v) = f(m)?;
                if s != s0 {
                    found = Some((prev[side], prev_v[side], m, v));
                    break 'search;
                }
                prev[side] = m;
                prev_v[side] = v;
            }
            h *= 2.0;
        }
        let (x0, v0b, x1, v1) = found.ok_or_else(|| {
            Error::Bracket(format!(
                "no sign change of Δ₆ in [{lo_m}, {hi_m}] around m = {seed} at ε = {epsilon}; \
                 try a seed closer to the curve"
            ))
        })?;
        let (mut fa, mut fb);
        (a, fa, b, fb) = (x0, v0b, x1, v1);
        if a > b {
            std::mem::swap(&mut a, &mut b);
            std::mem::swap(&mut fa, &mut fb);
        }
        let mut side = 0i8;
        for _ in 0..300 {
            if (b - a) <= 1e-13 * a.abs() {
                break;
            }
            let width = b - a;
            let mut c = b - fb * (b - a) / (fb - fa);
            if !(c > a && c < b) {
                c = 0.5 * (a + b);
            }
            if c == a || c == b {
                break;
            }
            let (sc, vc) = f(c)?;
            if sc == 0 {
                (a, b) = (c, c);
                break;
            }
            if (sc > 0) == (fb > 0.0) {
                b = c;
                fb = vc;
                if side == 1 {
                    fa *= 0.5;
                }
                side = 1;
            } else {
                a = c;
                fa = vc;
                if side == -1 {
                    fb *= 0.5;
                }
                side = -1;
            }
            // guarantee progress when false position stalls on one side
            if b - a > 0.5 * width {
                let mid = 0.5 * (a + b);
                let (sm, vm) = f(mid)?;
                if sm == 0 {
                    (a, b) = (mid, mid);
                    break;
                }
                if (sm > 0) == (fb > 0.0) {
                    b = mid;
                    fb = vm;
                } else {
                    a = mid;
                    fa = vm;
                }
                side = 0;
            }
        }
    }
    // exact values at both ends (the Illinois scaling altered fa/fb)
    let da = delta6_at(a, epsilon)?;
    let db = delta6_at(b, epsilon)?;
    let (m_c, d_c) = if da.abs() <= db.abs() { (a, da.clone()) } else { (b, db.clone()) };
    let slope = if b > a { (to_f64(&db) - to_f64(&da)) / (b - a) } else { f64::NAN };
    let m_relative = if slope.is_finite() && slope != 0.0 {
        (to_f64(&d_c) / slope / m_c).abs()
    } else {
        0.0
    };
    if (m_c - 6.0).abs() >= CRITICAL_WINDOW {
        return Err(Error::Bracket(format!("m_c = {m_c} left the window (6 ± {CRITICAL_WINDOW})")));
    }

    let poly = p7_coeffs(&rational_from_f64(m_c)?, epsilon)?;
    let roots = p7_roots(&poly)?;
    let pairs: Vec<C> = roots
        .iter()
        .copied()
        .filter(|z| z.im > 0.0 && z.re.abs() < 1e-8 * z.im)
        .collect();
    if pairs.len() != 1 {
        return Err(Error::Uniqueness {
            epsilon: eps,
            found: pairs.len(),
        });
    }
    let omega = pairs[0].im;
    let d = spectral::dispersion_eps(C::new(0.0, omega), m_c, eps)?.norm();
    if !(d < 1e-8) {
        return Err(Error::Precondition(format!(
            "imaginary pair ±{omega}i of P₇ at ε = {eps} is spurious: |D_ε(iω)| = {d:.3e}"
        )));
    }
    Ok(CriticalPoint {
        epsilon: eps,
        epsilon_exact: epsilon.to_string(),
        m_c,
        omega,
        residuals: CriticalResiduals {
            delta6: to_f64(&d_c),
            m_relative,
            p7_at_iomega: poly.relative_residual(C::new(0.0, omega)),
            dispersion_at_iomega: d,
        },
        evaluations: evals,
    })
}

/// The critical curve for ascending `ε` values, continued from `m = 6` at the
/// smallest `ε`.
pub fn critical_curve(eps_list: &[Rational]) -> Result<Vec<CriticalPoint>> {
    if eps_list.is_empty() {
        return Err(Error::Config("empty ε list".into()));
    }
    if eps_list.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::Config("ε list must be strictly ascending".into()));
    }
    let mut seed = 6.0;
    let mut out = Vec::with_capacity(eps_list.len());
    for e in eps_list {
        let p = critical_point(e, seed)?;
        seed = p.m_c;
        out.push(p);
    }
    Ok(out)
}

/// `∂λ/∂m = −(∂D/∂m)/(∂D/∂λ)` along the root through `iω` at `m_c`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Transversality {
    pub value: C,
    pub d_lambda: C,
    pub d_m: C,
}

/// Partials of `D_ε` by central differences (step `1e−6` relative) with one
/// Richardson extrapolation.
pub fn transversality(epsilon: &Rational, point: &CriticalPoint) -> Result<Transversality> {
    let e = to_f64(epsilon);
    let m = point.m_c;
    let lam = C::new(0.0, point.omega);
    let d = |l: C, mm: f64| spectral::dispersion_eps(l, mm, e);
    let rich = |g: &dyn Fn(f64) -> Result<C>, h: f64| -> Result<C> {
        let c1 = (g(h)? - g(-h)?) / (2.0 * h);
        let c2 = (g(h / 2.0)? - g(-h / 2.0)?) / h;
        Ok((4.0 * c2 - c1) / 3.0)
    };
    let hl = 1e-6 * lam.norm().max(1.0);
    let d_lambda = rich(&|t| d(lam + t, m), hl)?;
    let d_m = rich(&|t| d(lam, m + t), 1e-6 * m)?;
    if d_lambda.norm() < 1e-10 {
        return Err(Error::DegenerateDerivative(d_lambda.norm()));
    }
    Ok(Transversality {
        value: -d_m / d_lambda,
        d_lambda,
        d_m,
    })
}

fn a6_bound() -> f64 {
    static K: OnceLock<f64> = OnceLock::new();
    *K.get_or_init(|| {
        let n = 200;
        let mut k: f64 = 0.0;
        for i in 0..=n {
            let m = 3.0 + 4.0 * i as f64 / n as f64;
            for j in 0..=n {
                let e = j as f64 / n as f64;
                k = k.max(p7_coeffs_f64(m, e)[6].abs());
            }
        }
        1.01 * k
    })
}

/// Upper bound `υ₀` on `|ω|` for purely imaginary roots `iω` of `P₇`.
///
/// `Im P₇(iζ) = −a₀ζ⁷ + a₂ζ⁵ − a₄ζ³ + a₆ζ`. For small `ε` the first three
/// terms share one sign and `a₄ ≥ 64(2m⁴−7m²−6m−1)`, so any real zero obeys
/// `ζ² ≤ K / (64(2m⁴−7m²−6m−1))` with `K = max |a₆|` over
/// `m ∈ [3,7], ε ∈ [0,1]`. The sign and size conditions are checked at the
/// requested `(m, ε)`.
pub fn imaginary_root_bound(m: f64, epsilon: f64) -> Result<f64> {
    if !(3.0..=7.0).contains(&m) {
        return Err(Error::Domain(format!("m = {m} outside [3, 7]")));
    }
    if !(0.0..1.0).contains(&epsilon) {
        return Err(Error::Domain(format!("ε = {epsilon} outside [0, 1)")));
    }
    let c = 64.0 * (2.0 * m.powi(4) - 7.0 * m * m - 6.0 * m - 1.0);
    let a = p7_coeffs_f64(m, epsilon);
    if !(a[0] >= 0.0 && a[2] <= 0.0 && a[4] >= c) {
        return Err(Error::Domain(format!(
            "ε = {epsilon} too large for the bound at m = {m} (a₀ = {:.3e}, a₂ = {:.3e}, a₄ = {:.3e})",
            a[0], a[2], a[4]
        )));
    }
    Ok((a6_bound() / c).sqrt())
}

/// `Im P₇(iζ)` in floating point.
pub fn im_p7_on_axis(m: f64, epsilon: f64, zeta: f64) -> f64 {
    poly::eval(&p7_coeffs_f64(m, epsilon), C::new(0.0, zeta)).im
}

/// The surviving quartic `a₃λ⁴ + … + a₇` of `P₇` at `ε = 0`.
pub fn limit_quartic(m: &Rational) -> Result<[Rational; 5]> {
    let p = p7_coeffs(m, &Rational::zero())?;
    Ok(std::array::from_fn(|i| p.a[i + 3].clone()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(s: &str) -> Rational {
        parse_rational(s).unwrap()
    }

    #[test]
    fn parses_rationals() {
        assert_eq!(r("1/10000"), r("1e-4"));
        assert_eq!(r("0.02"), Rational::new(1.into(), 50.into()));
        assert_eq!(r("-2.5E1"), Rational::from_integer((-25).into()));
        assert_eq!(r("6"), Rational::from_integer(6.into()));
        assert!(parse_rational("abc").is_err());
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("1.2.3").is_err());
    }

    #[test]
    fn leading_coefficient() {
        for (m, e) in [("6", "1/100"), ("3", "0.3"), ("9/2", "1e-4")] {
            let p = p7_coeffs(&r(m), &r(e)).unwrap();
            let e = r(e);
            let one = Rational::one();
            let want = Rational::from_integer(2048.into())
                * num_traits::pow(&e - &one, 4)
                * &e
                * &e;
            assert_eq!(p.a[0], want);
            assert_eq!(p.degree(), Some(7));
        }
        let p = p7_coeffs(&r("5"), &Rational::zero()).unwrap();
        assert!(p.a[0].is_zero() && p.a[1].is_zero() && p.a[2].is_zero());
        assert_eq!(p.degree(), Some(4));
    }

    #[test]
    fn a7_at_hopf_limit() {
        let p = p7_coeffs(&r("6"), &Rational::zero()).unwrap();
        assert_eq!(p.a[7], Rational::from_integer(225792.into()));
        assert_eq!(p.a[3], Rational::from_integer((-25088).into()));
    }

    #[test]
    fn bareiss_small() {
        let m = vec![
            vec![BigInt::from(0), BigInt::from(2), BigInt::from(1)],
            vec![BigInt::from(3), BigInt::from(1), BigInt::from(4)],
            vec![BigInt::from(1), BigInt::from(5), BigInt::from(9)],
        ];
        // 0(9−20) − 2(27−4) + 1(15−1) = −46 + 14
        assert_eq!(bareiss_det(m), BigInt::from(-32));
    }

    #[test]
    fn hurwitz_of_stable_product() {
        // (λ+1)^7: all Hurwitz determinants positive
        let binom = [1, 7, 21, 35, 35, 21, 7, 1];
        let poly = Poly7 {
            a: binom.map(|c| Rational::from_integer(c.into())),
            m: Rational::zero(),
            epsilon: Rational::zero(),
        };
        let h = hurwitz_determinants(&poly).unwrap();
        assert!(h.signs.iter().all(|&s| s == 1));
        assert!(!h.orlando_zero);
        let roots = vec![C::new(-1.0, 0.0); 7];
        let orl = orlando_product(1.0, &roots);
        assert!((orl.re - to_f64(h.delta6())).abs() < 1e-9 * orl.norm());
    }

    #[test]
    fn delta0_anchor() {
        assert!(delta0(&r("6")).is_zero());
        assert_eq!(delta0(&Rational::zero()), Rational::from_integer(24.into()));
        assert!(delta0_derivative(&r("6")).is_positive());
        let h = 1e-5;
        let fd = (delta0_f64(5.0 + h) - delta0_f64(5.0 - h)) / (2.0 * h);
        let ex = to_f64(&delta0_derivative(&r("5")));
        assert!((fd - ex).abs() < 1e-6 * ex.abs());
    }

    #[test]
    fn imaginary_bound_rejects_outside() {
        assert!(imaginary_root_bound(2.5, 0.01).is_err());
        assert!(imaginary_root_bound(6.0, 0.01).unwrap() > 2.0 * 3f64.sqrt());
        let z = 0.7;
        assert_eq!(im_p7_on_axis(6.0, 0.01, -z), -im_p7_on_axis(6.0, 0.01, z));
    }
}
