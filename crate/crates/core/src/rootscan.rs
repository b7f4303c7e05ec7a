//! Locating dispersion roots in rectangles of the complex plane.
//!
//! Zeros are counted by the argument principle (phase accumulated along the
//! boundary with adaptive sampling), cells are bisected until each holds a
//! single zero, and the zero is then refined by damped Newton iteration.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::ModelParams;
use crate::spectral;

type C = Complex64;

/// Half-width of the excluded band around the ray `(−∞, −1/4]`.
pub const CUT_GUARD: f64 = 1e-3;

/// An analytic function together with a magnitude scale for its values.
pub trait Analytic: Sync {
    fn eval(&self, z: C) -> Result<C>;

    /// Typical size of the terms that cancel at a zero; residuals are judged
    /// relative to it.
    fn scale(&self, _z: C) -> f64 {
        1.0
    }
}

/// Wraps a closure with unit scale.
pub struct FnAnalytic<F>(pub F);

impl<F: Fn(C) -> Result<C> + Sync> Analytic for FnAnalytic<F> {
    fn eval(&self, z: C) -> Result<C> {
        (self.0)(z)
    }
}

/// `D(λ)` in Lewis-number form.
pub struct Dispersion(pub ModelParams);

impl Analytic for Dispersion {
    fn eval(&self, z: C) -> Result<C> {
        spectral::dispersion(z, &self.0)
    }
    fn scale(&self, z: C) -> f64 {
        spectral::dispersion_scale(z, &self.0).unwrap_or(1.0)
    }
}

/// `D_ε(λ; m)`, including the `ε = 0` limit.
pub struct DispersionEps {
    pub m: f64,
    pub epsilon: f64,
}

impl Analytic for DispersionEps {
    fn eval(&self, z: C) -> Result<C> {
        spectral::dispersion_eps(z, self.m, self.epsilon)
    }
    fn scale(&self, z: C) -> f64 {
        let m = self.m;
        let e = self.epsilon;
        let h = spectral::principal_sqrt(1.0 + 4.0 * z);
        let r2 = spectral::principal_sqrt(1.0 + 4.0 * e * z);
        let big = (2.0 + 4.0 * (m + e * m * m + z).norm()) * (1.0 + h.norm() / (1.0 + m));
        0.25 * (1.0 + r2.norm()) * (big + 1.0 + h.norm()) + m + e * m * m
    }
}

/// The limit relation `D₀(λ; m)`.
pub struct LimitDispersion(pub f64);

impl Analytic for LimitDispersion {
    fn eval(&self, z: C) -> Result<C> {
        spectral::limit_dispersion(z, self.0)
    }
    fn scale(&self, z: C) -> f64 {
        let m = self.0;
        let h = spectral::principal_sqrt(1.0 + 4.0 * z);
        (h.norm() + 1.0) / (4.0 * (1.0 + m)) * (4.0 * z.norm() + (m - 2.0) * h.norm() + m + 2.0)
    }
}

/// Axis-aligned rectangle `[re_min, re_max] × [im_min, im_max]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Rect {
    pub re_min: f64,
    pub re_max: f64,
    pub im_min: f64,
    pub im_max: f64,
}

impl Rect {
    pub fn new(re_min: f64, re_max: f64, im_min: f64, im_max: f64) -> Result<Self> {
        let ok = [re_min, re_max, im_min, im_max].iter().all(|x| x.is_finite())
            && re_min < re_max
            && im_min < im_max;
        if !ok {
            return Err(Error::Domain(format!(
                "degenerate rectangle [{re_min}, {re_max}] × [{im_min}, {im_max}]"
            )));
        }
        Ok(Rect {
            re_min,
            re_max,
            im_min,
            im_max,
        })
    }

    pub fn contains(&self, z: C) -> bool {
        z.re >= self.re_min && z.re <= self.re_max && z.im >= self.im_min && z.im <= self.im_max
    }

    pub fn center(&self) -> C {
        C::new(
            0.5 * (self.re_min + self.re_max),
            0.5 * (self.im_min + self.im_max),
        )
    }

    pub fn diameter(&self) -> f64 {
        (self.re_max - self.re_min).hypot(self.im_max - self.im_min)
    }

    fn corners(&self) -> [C; 4] {
        [
            C::new(self.re_min, self.im_min),
            C::new(self.re_max, self.im_min),
            C::new(self.re_max, self.im_max),
            C::new(self.re_min, self.im_max),
        ]
    }

    /// True if the rectangle meets the guard band around the cut.
    pub fn touches_cut(&self) -> bool {
        self.im_min < CUT_GUARD && self.im_max > -CUT_GUARD && self.re_min < -0.25 + CUT_GUARD
    }

    /// Split into at most three rectangles that avoid the guard band.
    pub fn avoid_cut(&self) -> Vec<Rect> {
        if !self.touches_cut() {
            return vec![*self];
        }
        let g = CUT_GUARD;
        let mut out = Vec::new();
        if self.im_max > g {
            out.push(Rect { im_min: self.im_min.max(g), ..*self });
        }
        if self.im_min < -g {
            out.push(Rect { im_max: self.im_max.min(-g), ..*self });
        }
        let edge = -0.25 + g;
        if self.re_max > edge {
            out.push(Rect {
                re_min: self.re_min.max(edge),
                im_min: self.im_min.max(-g),
                im_max: self.im_max.min(g),
                ..*self
            });
        }
        out
    }

    fn split(&self, frac: f64) -> [Rect; 2] {
        if self.re_max - self.re_min >= self.im_max - self.im_min {
            let x = self.re_min + frac * (self.re_max - self.re_min);
            [Rect { re_max: x, ..*self }, Rect { re_min: x, ..*self }]
        } else {
            let y = self.im_min + frac * (self.im_max - self.im_min);
            [Rect { im_max: y, ..*self }, Rect { im_min: y, ..*self }]
        }
    }
}

/// Boundary sampling controls for [`count_roots_with`].
#[derive(Debug, Clone, Copy)]
pub struct CountOptions {
    /// Initial samples per edge before adaptive refinement.
    pub samples_per_edge: usize,
    /// Values with `|f| < floor · scale` on the contour count as a zero there.
    pub modulus_floor: f64,
}

impl Default for CountOptions {
    fn default() -> Self {
        CountOptions {
            samples_per_edge: 32,
            modulus_floor: 1e-10,
        }
    }
}

/// Number of zeros of `f` inside `rect`, counted with multiplicity.
pub fn count_roots<F: Analytic>(f: &F, rect: &Rect) -> Result<usize> {
    count_roots_with(f, rect, CountOptions::default())
}

pub fn count_roots_with<F: Analytic>(f: &F, rect: &Rect, opts: CountOptions) -> Result<usize> {
    if rect.touches_cut() {
        return Err(Error::Domain(format!(
            "rectangle {rect:?} comes within {CUT_GUARD} of the cut (−∞, −1/4]"
        )));
    }
    let probe = |z: C| -> Result<C> {
        let w = f.eval(z)?;
        if !(w.norm() >= opts.modulus_floor * f.scale(z)) {
            return Err(Error::BoundaryZero { at: z, modulus: w.norm() });
        }
        Ok(w)
    };
    let corners = rect.corners();
    let n = opts.samples_per_edge.max(1);
    let mut total = 0.0;
    let mut prev_z = corners[0];
    let mut prev_w = probe(prev_z)?;
    for e in 0..4 {
        let (a, b) = (corners[e], corners[(e + 1) % 4]);
        for j in 1..=n {
            let z = a + (b - a) * (j as f64 / n as f64);
            let w = probe(z)?;
            total += segment_phase(&probe, prev_z, prev_w, z, w, 0)?;
            prev_z = z;
            prev_w = w;
        }
    }
    let winding = total / std::f64::consts::TAU;
    let k = winding.round();
    if (winding - k).abs() > 0.1 || k < 0.0 {
        return Err(Error::BoundaryZero {
            at: rect.center(),
            modulus: f64::NAN,
        });
    }
    Ok(k as usize)
}

fn segment_phase(
    probe: &impl Fn(C) -> Result<C>,
    a: C,
    fa: C,
    b: C,
    fb: C,
    depth: u32,
) -> Result<f64> {
    let d = (fb / fa).arg();
    if d.abs() <= std::f64::consts::FRAC_PI_4 {
        return Ok(d);
    }
    if depth > 40 {
        return Err(Error::BoundaryZero {
            at: 0.5 * (a + b),
            modulus: fa.norm().min(fb.norm()),
        });
    }
    let mid = 0.5 * (a + b);
    let fm = probe(mid)?;
    Ok(segment_phase(probe, a, fa, mid, fm, depth + 1)?
        + segment_phase(probe, mid, fm, b, fb, depth + 1)?)
}

/// Outcome of [`refine_root`].
#[derive(Debug, Clone, PartialEq)]
pub struct Refined {
    pub root: C,
    pub iterations: usize,
    pub residual: f64,
    /// `|f|` before each iteration; shows the quadratic decay for simple roots.
    pub trace: Vec<f64>,
}

/// Damped Newton iteration; derivative by a central difference.
///
/// Converged when `|f| ≤ 1e−12 · scale`; an exact root is returned after zero
/// iterations.
pub fn refine_root<F: Analytic>(f: &F, guess: C) -> Result<Refined> {
    const MAX_ITER: usize = 100;
    let mut z = guess;
    let mut fz = f.eval(z)?;
    let mut trace = Vec::new();
    for it in 0..=MAX_ITER {
        let r = fz.norm();
        trace.push(r);
        if r <= 1e-12 * f.scale(z) {
            return Ok(Refined {
                root: z,
                iterations: it,
                residual: r,
                trace,
            });
        }
        if it == MAX_ITER {
            break;
        }
        let h = 1e-6 * (1.0 + z.norm());
        let d = (f.eval(z + h)? - f.eval(z - h)?) / (2.0 * h);
        if d.norm() == 0.0 || !d.is_finite() {
            break;
        }
        let step = fz / d;
        let mut t = 1.0;
        let mut accepted = false;
        for _ in 0..30 {
            let cand = z - t * step;
            if let Ok(fc) = f.eval(cand) {
                if fc.norm() < r || step.norm() * t < 1e-15 * (1.0 + z.norm()) {
                    z = cand;
                    fz = fc;
                    accepted = true;
                    break;
                }
            }
            t *= 0.5;
        }
        if !accepted {
            break;
        }
    }
    Err(Error::NoConvergence {
        iterations: trace.len(),
        residual: fz.norm(),
        trace,
    })
}

/// A located zero.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RootEntry {
    pub z: C,
    pub residual: f64,
    /// Winding count of the smallest cell that isolated it.
    pub multiplicity: usize,
}

/// Dispersion roots found in a rectangle.
///
/// Conjugates of found roots are always included, even when they fall
/// outside the rectangle. The eigenvalue `λ = 0` is reported separately.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RootSet {
    pub roots: Vec<RootEntry>,
    pub zero_eigenvalue: Option<RootEntry>,
    pub region: Rect,
    pub params: ModelParams,
}

/// Roots closer than this (relative to `1 + |z|`) are treated as one.
pub const SEPARATION_TOL: f64 = 1e-8;

/// All roots of the dispersion relation in `rect` (with the cut band removed).
/// Uses `D(λ)` for `ε > 0` and `D₀` at `ε = 0`.
pub fn scan(params: &ModelParams, rect: &Rect) -> Result<RootSet> {
    let mut found = Vec::new();
    if params.is_limit() {
        let f = LimitDispersion(params.m());
        for piece in rect.avoid_cut() {
            scan_cell(&f, &piece, 0, &mut found)?;
        }
    } else {
        let f = Dispersion(*params);
        for piece in rect.avoid_cut() {
            scan_cell(&f, &piece, 0, &mut found)?;
        }
    }
    found.sort_by(|a, b| a.z.re.total_cmp(&b.z.re).then(a.z.im.total_cmp(&b.z.im)));

    let mut uniq: Vec<RootEntry> = Vec::new();
    let close = |a: C, b: C| (a - b).norm() < SEPARATION_TOL * (1.0 + a.norm());
    for r in found {
        if !uniq.iter().any(|u| close(u.z, r.z)) {
            uniq.push(r);
        }
    }
    let mut extra = Vec::new();
    for r in &uniq {
        if r.z.im.abs() > SEPARATION_TOL * (1.0 + r.z.norm())
            && !uniq.iter().any(|u| close(u.z, r.z.conj()))
        {
            extra.push(RootEntry { z: r.z.conj(), ..*r });
        }
    }
    uniq.extend(extra);
    let (zero, mut roots): (Vec<_>, Vec<_>) = uniq.into_iter().partition(|r| r.z.norm() < 1e-8);
    roots.sort_by(|a, b| a.z.re.total_cmp(&b.z.re).then(a.z.im.total_cmp(&b.z.im)));
    Ok(RootSet {
        roots,
        zero_eigenvalue: zero.into_iter().next(),
        region: *rect,
        params: *params,
    })
}

/// Cells whose winding count is 1 are refined once smaller than this.
const REFINE_DIAMETER: f64 = 0.25;

fn scan_cell<F: Analytic>(f: &F, rect: &Rect, depth: u32, out: &mut Vec<RootEntry>) -> Result<()> {
    let n = count_roots(f, rect)?;
    if n == 0 {
        return Ok(());
    }
    if n == 1 && rect.diameter() < REFINE_DIAMETER {
        if let Ok(r) = refine_root(f, rect.center()) {
            let pad = 1e-9 * (1.0 + r.root.norm());
            let inside = r.root.re >= rect.re_min - pad
                && r.root.re <= rect.re_max + pad
                && r.root.im >= rect.im_min - pad
                && r.root.im <= rect.im_max + pad;
            if inside {
                out.push(RootEntry {
                    z: r.root,
                    residual: r.residual,
                    multiplicity: 1,
                });
                return Ok(());
            }
        }
    }
    if rect.diameter() < 1e-7 || depth > 60 {
        let r = refine_root(f, rect.center())?;
        out.push(RootEntry {
            z: r.root,
            residual: r.residual,
            multiplicity: n,
        });
        return Ok(());
    }
    // off-centre splits keep symmetric features (real axis, λ = 0) off the cuts
    for frac in [0.5 + 0.0131, 0.5 - 0.0273, 0.5 + 0.0517] {
        let halves = rect.split(frac);
        let mut sub = Vec::new();
        let ok = halves
            .iter()
            .try_for_each(|h| scan_cell(f, h, depth + 1, &mut sub));
        match ok {
            Ok(()) => {
                out.extend(sub);
                return Ok(());
            }
            Err(Error::BoundaryZero { .. }) => continue,
            Err(e) => return Err(e),
        }
    }
    Err(Error::BoundaryZero {
        at: rect.center(),
        modulus: 0.0,
    })
}
