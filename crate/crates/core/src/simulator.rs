//! Front-fixed method-of-lines solver for the free-interface system.
//!
//! In the frame `ξ = x − g(τ)` attached to the ignition front the fields obey
//!
//! ```text
//! Θ_τ − ġ Θ_ξ = Θ_ξξ + A Φ χ(ξ<0),      Φ_τ − ġ Φ_ξ = ε Φ_ξξ − A Φ χ(ξ<0),
//! ```
//!
//! with `Θ, Φ` and their first derivatives continuous at `ξ = 0` and the
//! ignition constraint `Θ(τ, 0) = Θi`. The solver integrates the perturbation
//! `u = (Θ, Φ) − (Θ⁰, Φ⁰)` so the exact wave is transported without
//! discretisation drift, and `ġ = 1 + ṡ` is the multiplier that keeps the
//! constraint exact after every step.
//!
//! Time stepping is a θ-scheme (Crank–Nicolson by default, with a short
//! implicit-Euler start to damp grid-scale modes). The `ṡ` terms are explicit
//! in the fields and implicit in `ṡ` itself, so each step is two linear solves
//! per field plus a scalar equation for `ṡ`. In `limit_mode` (`ε = 0`) the
//! `Φ` equation is pure transport on `ξ < 0`: first-order upwind between two
//! exact half-step factors `e^{−A dt/2}`.
//!
//! The second-order Stefan law `ṡ = (u_ξξ + u_ξ)(0⁺) / (Θi − u_ξ(0⁺))` is not
//! used to advance the front; it is evaluated with one-sided stencils and
//! recorded as a discrepancy channel.

use num_complex::Complex64 as C;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{ModelParams, Side, WaveProfile};
use crate::rootscan::{scan, Rect};
use crate::spectral::{eigenfunction, ModeEvaluator};

/// Minimum truncation length in units of the slowest wave decay length.
const MIN_WAVELENGTHS: f64 = 20.0;
/// Constraint residual above which a step is rejected.
const CONSTRAINT_TOL: f64 = 1e-8;
/// Blow-up guard bounds for both fields.
const GUARD: (f64, f64) = (-0.1, 1.1);
/// Number of dt halvings before a run is abandoned.
const MAX_HALVINGS: u32 = 30;
/// Implicit-Euler substeps replacing the first θ-scheme step.
const STARTUP_SUBSTEPS: usize = 4;

fn default_theta() -> f64 {
    0.5
}

/// Initial perturbation shape. All shapes vanish with their derivative at
/// `ξ = 0`, so the constraint holds at `τ = 0` without projection.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum Shape {
    /// `cos⁴` bump on `Θ` centred at `center` with half-width `width`; `Φ`
    /// untouched. Its support must not contain the interface.
    Bump { center: f64, width: f64 },
    /// Real part of the leading point eigenfunction, written in front-fixed
    /// form `s₀U' + φ` with `s₀ = φ_Θ(0)/Θi`, tapered near the far field.
    Mode,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Perturbation {
    /// Maximum of `|Θ − Θ⁰|` at `τ = 0`.
    pub amplitude: f64,
    pub shape: Shape,
}

/// Simulation set-up. `domain = [−L₋, L₊]`, `n_cells` cells on each side of
/// the interface.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SimConfig {
    pub params: ModelParams,
    pub domain: [f64; 2],
    pub n_cells: usize,
    pub dt: f64,
    pub t_end: f64,
    /// Sampling interval of the trace; defaults to `dt`.
    #[serde(default)]
    pub dt_out: Option<f64>,
    pub perturbation: Perturbation,
    #[serde(default)]
    pub limit_mode: bool,
    /// Implicitness of the diffusion step (0.5 = Crank–Nicolson).
    #[serde(default = "default_theta")]
    pub theta: f64,
}

impl SimConfig {
    /// A Crank–Nicolson configuration on `[−25, 20]` with `h = 0.005`.
    pub fn new(params: ModelParams, t_end: f64, perturbation: Perturbation) -> Self {
        SimConfig {
            params,
            domain: [-25.0, 20.0],
            n_cells: 5000,
            dt: 0.01,
            t_end,
            dt_out: Some(0.05),
            perturbation,
            limit_mode: params.is_limit(),
            theta: 0.5,
        }
    }

    pub fn l_minus(&self) -> f64 {
        -self.domain[0]
    }

    pub fn l_plus(&self) -> f64 {
        self.domain[1]
    }

    /// `(h₋, h₊)`.
    pub fn spacing(&self) -> (f64, f64) {
        let n = self.n_cells as f64;
        (self.l_minus() / n, self.l_plus() / n)
    }

    pub fn sample_interval(&self) -> f64 {
        self.dt_out.unwrap_or(self.dt)
    }

    /// Same run with both spacings and `dt` halved.
    pub fn refined(&self) -> SimConfig {
        SimConfig {
            n_cells: 2 * self.n_cells,
            dt: self.dt / 2.0,
            ..self.clone()
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::Config(msg));
        let p = &self.params;
        let [lo, hi] = self.domain;
        if !(lo.is_finite() && hi.is_finite() && lo < 0.0 && hi > 0.0) {
            return bad(format!("domain {:?} must straddle ξ = 0", self.domain));
        }
        // slowest decay of the wave: rate 1 (Θ, right) or m (left)
        let need = MIN_WAVELENGTHS / p.m().min(1.0);
        if self.l_minus() < need || self.l_plus() < need {
            return bad(format!(
                "domain {:?} is shorter than {need} decay lengths on one side",
                self.domain
            ));
        }
        if self.n_cells < 8 {
            return bad(format!("n_cells = {} is too small", self.n_cells));
        }
        if !(self.dt.is_finite() && self.dt > 0.0) {
            return bad(format!("dt = {} must be positive", self.dt));
        }
        if !(self.t_end.is_finite() && self.t_end > 0.0) {
            return bad(format!("t_end = {} must be positive", self.t_end));
        }
        let out = self.sample_interval();
        if !(out.is_finite() && out > 0.0 && out <= self.t_end) {
            return bad(format!("dt_out = {out} must lie in (0, t_end]"));
        }
        if !(0.0..=1.0).contains(&self.theta) {
            return bad(format!("theta = {} must lie in [0, 1]", self.theta));
        }
        let amp = self.perturbation.amplitude;
        if !(amp.is_finite() && amp >= 0.0) {
            return bad(format!("amplitude = {amp} must be finite and non-negative"));
        }
        if self.limit_mode != p.is_limit() {
            return bad(format!(
                "limit_mode = {} requires ε {} 0 (got ε = {})",
                self.limit_mode,
                if self.limit_mode { "=" } else { ">" },
                p.epsilon()
            ));
        }
        if !self.limit_mode {
            // central advection needs cell Péclet number h/(2ε) ≤ 1
            let (hl, hr) = self.spacing();
            if hl.max(hr) > 2.0 * p.epsilon() {
                return bad(format!(
                    "grid spacing {} too coarse for ε = {} (need h ≤ 2ε)",
                    hl.max(hr),
                    p.epsilon()
                ));
            }
        }
        if let Shape::Bump { center, width } = self.perturbation.shape {
            if !(width.is_finite() && width > 0.0 && center.is_finite()) {
                return bad(format!("bump width {width} / center {center} invalid"));
            }
            if center.abs() < width {
                return bad(format!(
                    "bump [{}, {}] contains the interface: Θ(0) = Θi would be violated",
                    center - width,
                    center + width
                ));
            }
            if center - width < lo + 1.0 || center + width > hi - 1.0 {
                return bad("bump reaches the truncated far field".into());
            }
        }
        Ok(())
    }
}

/// Fields on the two half-grids sharing the interface node.
#[derive(Debug, Clone, PartialEq)]
pub struct SimState {
    pub theta: Vec<f64>,
    pub phi: Vec<f64>,
    /// Front position.
    pub g: f64,
    pub tau: f64,
    /// Front speed over the last step (1 at `τ = 0`).
    pub gdot: f64,
    u: Vec<f64>,
    w: Vec<f64>,
}

impl SimState {
    /// Perturbations `(Θ − Θ⁰, Φ − Φ⁰)`.
    pub fn perturbation(&self) -> (&[f64], &[f64]) {
        (&self.u, &self.w)
    }

    pub fn s(&self) -> f64 {
        self.g - self.tau
    }
}

/// Sampled front trajectory.
#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct FrontTrace {
    pub tau: Vec<f64>,
    pub g: Vec<f64>,
    pub gdot: Vec<f64>,
    /// `s = g − τ`.
    pub s: Vec<f64>,
    /// Weighted sup-norm of the perturbation.
    pub wnorm: Vec<f64>,
    /// `ġ` minus the second-order Stefan evaluation.
    pub stefan_diag: Vec<f64>,
}

impl FrontTrace {
    pub const HEADER: [&'static str; 6] = ["tau", "g", "gdot", "s", "wnorm", "stefan_diag"];

    pub fn len(&self) -> usize {
        self.tau.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tau.is_empty()
    }

    pub fn row(&self, i: usize) -> [f64; 6] {
        [
            self.tau[i],
            self.g[i],
            self.gdot[i],
            self.s[i],
            self.wnorm[i],
            self.stefan_diag[i],
        ]
    }

    fn truncate(&mut self, n: usize) {
        for v in [
            &mut self.tau,
            &mut self.g,
            &mut self.gdot,
            &mut self.s,
            &mut self.wnorm,
            &mut self.stefan_diag,
        ] {
            v.truncate(n);
        }
    }
}

/// Blow-up report.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Instability {
    pub tau: f64,
    pub reason: String,
}

/// Result of [`run`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SimOutcome {
    pub trace: FrontTrace,
    pub accepted_steps: usize,
    pub rejected_steps: usize,
    /// Smallest step actually taken.
    pub min_dt: f64,
    /// Leading eigenvalue used for a `mode` perturbation.
    pub mode_eigenvalue: Option<C>,
    pub instability: Option<Instability>,
}

/// Outcome of one attempted step.
#[derive(Debug, Clone, PartialEq)]
pub enum StepOutcome {
    Accepted {
        state: SimState,
        /// `ṡ` over the step (front speed minus one).
        sdot: f64,
        constraint_residual: f64,
    },
    /// The step violated a stability or constraint bound; retry with a
    /// smaller `dt`.
    Rejected(String),
}

/// Three-point operator rows `(lower, diag, upper)`.
#[derive(Debug, Clone)]
struct Rows {
    lo: Vec<f64>,
    di: Vec<f64>,
    up: Vec<f64>,
}

impl Rows {
    fn apply(&self, x: &[f64], out: &mut [f64]) {
        let n = x.len();
        out[0] = 0.0;
        out[n - 1] = 0.0;
        for j in 1..n - 1 {
            out[j] = self.lo[j] * x[j - 1] + self.di[j] * x[j] + self.up[j] * x[j + 1];
        }
    }
}

/// LU factors of a tridiagonal matrix with identity end rows.
#[derive(Debug, Clone)]
struct Tridiag {
    lo: Vec<f64>,
    up: Vec<f64>,
    inv: Vec<f64>,
}

impl Tridiag {
    /// Factor `I − c·L` (interior rows) with Dirichlet end rows.
    fn factor(l: &Rows, c: f64) -> Tridiag {
        let n = l.di.len();
        let mut lo = vec![0.0; n];
        let mut di = vec![1.0; n];
        let mut up = vec![0.0; n];
        for j in 1..n - 1 {
            lo[j] = -c * l.lo[j];
            di[j] = 1.0 - c * l.di[j];
            up[j] = -c * l.up[j];
        }
        let mut inv = vec![0.0; n];
        let mut upm = vec![0.0; n];
        inv[0] = 1.0 / di[0];
        upm[0] = up[0] * inv[0];
        for j in 1..n {
            let d = di[j] - lo[j] * upm[j - 1];
            inv[j] = 1.0 / d;
            upm[j] = up[j] * inv[j];
        }
        Tridiag { lo, up: upm, inv }
    }

    fn solve(&self, r: &mut [f64]) {
        let n = r.len();
        r[0] *= self.inv[0];
        for j in 1..n {
            r[j] = (r[j] - self.lo[j] * r[j - 1]) * self.inv[j];
        }
        for j in (0..n - 1).rev() {
            r[j] -= self.up[j] * r[j + 1];
        }
    }
}

struct Factors {
    dt: f64,
    theta: f64,
    u: Tridiag,
    w: Option<Tridiag>,
}

/// Solver bound to one configuration.
pub struct Simulator {
    config: SimConfig,
    xi: Vec<f64>,
    iface: usize,
    /// Reaction weight: 1 left of the interface, the left share of the
    /// interface control volume at the node itself, 0 right of it.
    chi: Vec<f64>,
    wave_u: Vec<f64>,
    wave_w: Vec<f64>,
    du0: Vec<f64>,
    dw0: Vec<f64>,
    d1: Rows,
    lu: Rows,
    lw: Rows,
    /// Forward difference for the limit-mode transport.
    fwd: Vec<f64>,
    hmin: f64,
    factors: Option<Factors>,
    mode_eigenvalue: Option<C>,
}

fn three_point(hl: f64, hr: f64) -> ([f64; 3], [f64; 3]) {
    let s = hl + hr;
    let d2 = [2.0 / (hl * s), -2.0 / (hl * hr), 2.0 / (hr * s)];
    let d1 = [-hr / (hl * s), (hr - hl) / (hl * hr), hl / (hr * s)];
    (d2, d1)
}

/// Grid with `n` cells of width `L₋/n` left and `L₊/n` right of `ξ = 0`.
fn build_grid(config: &SimConfig) -> (Vec<f64>, usize) {
    let n = config.n_cells;
    let (hl, hr) = config.spacing();
    let mut xi: Vec<f64> = (0..n).map(|j| -((n - j) as f64) * hl).collect();
    xi.push(0.0);
    xi.extend((1..=n).map(|j| j as f64 * hr));
    (xi, n)
}

fn smoothstep(t: f64) -> f64 {
    let t = t.clamp(0.0, 1.0);
    t * t * t * (10.0 - 15.0 * t + 6.0 * t * t)
}

/// Leading eigenvalue (largest real part, `Im ≥ 0`) of the point spectrum.
pub fn leading_eigenvalue(params: &ModelParams) -> Result<C> {
    let rs = scan(params, &Rect::new(-4.0, 4.0, -4.0, 4.0)?)?;
    rs.roots
        .iter()
        .map(|r| r.z)
        .filter(|z| z.im >= 0.0)
        .max_by(|a, b| a.re.total_cmp(&b.re))
        .ok_or_else(|| Error::Config("no nonzero point eigenvalue in [−4, 4]²".into()))
}

/// Initial perturbation `(u, w)` on arbitrary nodes `xs`.
fn perturbation_on(
    config: &SimConfig,
    xs: &[f64],
    mode: Option<C>,
) -> Result<(Vec<f64>, Vec<f64>)> {
    let amp = config.perturbation.amplitude;
    let n = xs.len();
    if amp == 0.0 {
        return Ok((vec![0.0; n], vec![0.0; n]));
    }
    let p = &config.params;
    let (lo, hi) = (config.domain[0], config.domain[1]);
    match config.perturbation.shape {
        Shape::Bump { center, width } => {
            let u = xs
                .iter()
                .map(|&x| {
                    let t = (x - center) / width;
                    if t.abs() < 1.0 {
                        amp * (std::f64::consts::FRAC_PI_2 * t).cos().powi(4)
                    } else {
                        0.0
                    }
                })
                .collect();
            Ok((u, vec![0.0; n]))
        }
        Shape::Mode => {
            if p.is_limit() {
                return Err(Error::Config(
                    "mode perturbation needs ε > 0 (eigenfunctions are built at finite Le)".into(),
                ));
            }
            let lambda = mode.ok_or_else(|| Error::Config("mode eigenvalue missing".into()))?;
            let ef = eigenfunction(lambda, p, xs)?;
            let s0 = ModeEvaluator::new(lambda, p, ef.coeffs)?.u(0.0) / p.theta_i();
            let wave = WaveProfile::new(*p);
            let taper = |x: f64| smoothstep((x - lo - 1.0) / 4.0) * smoothstep((hi - 1.0 - x) / 4.0);
            let mut u: Vec<f64> = Vec::with_capacity(n);
            let mut w: Vec<f64> = Vec::with_capacity(n);
            for (k, &x) in xs.iter().enumerate() {
                let t = taper(x);
                u.push(t * (s0 * wave.theta_d(x, 1, Side::Left) + ef.u[k]).re);
                w.push(t * (s0 * wave.phi_d(x, 1, Side::Left) + ef.v[k]).re);
            }
            let top = u.iter().fold(0.0f64, |a, x| a.max(x.abs()));
            if top == 0.0 {
                return Err(Error::Config("mode perturbation vanishes on the grid".into()));
            }
            let k = amp / top;
            u.iter_mut().for_each(|x| *x *= k);
            w.iter_mut().for_each(|x| *x *= k);
            Ok((u, w))
        }
    }
}

impl Simulator {
    pub fn new(config: &SimConfig) -> Result<Self> {
        config.validate()?;
        let p = config.params;
        let (xi, iface) = build_grid(config);
        let n = xi.len();
        let (hl, hr) = config.spacing();
        let wave = WaveProfile::new(p);
        let a = p.a();
        let eps = p.epsilon();

        let mut chi = vec![0.0; n];
        chi[..iface].fill(1.0);
        chi[iface] = hl / (hl + hr);

        let zeros = || vec![0.0; n];
        let (mut d1, mut lu, mut lw) = (
            Rows { lo: zeros(), di: zeros(), up: zeros() },
            Rows { lo: zeros(), di: zeros(), up: zeros() },
            Rows { lo: zeros(), di: zeros(), up: zeros() },
        );
        let mut fwd = zeros();
        for j in 1..n - 1 {
            let (l, r) = (xi[j] - xi[j - 1], xi[j + 1] - xi[j]);
            let (c2, c1) = three_point(l, r);
            d1.lo[j] = c1[0];
            d1.di[j] = c1[1];
            d1.up[j] = c1[2];
            lu.lo[j] = c2[0] + c1[0];
            lu.di[j] = c2[1] + c1[1];
            lu.up[j] = c2[2] + c1[2];
            lw.lo[j] = eps * c2[0] + c1[0];
            lw.di[j] = eps * c2[1] + c1[1] - a * chi[j];
            lw.up[j] = eps * c2[2] + c1[2];
        }
        for j in 0..n - 1 {
            fwd[j] = 1.0 / (xi[j + 1] - xi[j]);
        }

        // the wave and its slope; at the interface the slopes are continuous
        let side = |j: usize| if j < iface { Side::Left } else { Side::Right };
        let wave_u = xi.iter().map(|&x| wave.theta(x)).collect();
        let wave_w = xi.iter().map(|&x| wave.phi(x)).collect();
        let du0 = (0..n).map(|j| wave.theta_d(xi[j], 1, side(j))).collect();
        // in the limit Φ⁰' jumps at the interface; the transport step uses its
        // average over the upwind cell instead of a point value
        let dw0 = if p.is_limit() {
            (0..n)
                .map(|j| match xi.get(j + 1) {
                    Some(&x1) => (wave.phi(x1) - wave.phi(xi[j])) / (x1 - xi[j]),
                    None => 0.0,
                })
                .collect()
        } else {
            (0..n).map(|j| wave.phi_d(xi[j], 1, side(j))).collect()
        };

        let mode_eigenvalue = match config.perturbation.shape {
            Shape::Mode if config.perturbation.amplitude > 0.0 && !p.is_limit() => {
                Some(leading_eigenvalue(&p)?)
            }
            _ => None,
        };

        Ok(Simulator {
            config: config.clone(),
            xi,
            iface,
            chi,
            wave_u,
            wave_w,
            du0,
            dw0,
            d1,
            lu,
            lw,
            fwd,
            hmin: hl.min(hr),
            factors: None,
            mode_eigenvalue,
        })
    }

    pub fn grid(&self) -> &[f64] {
        &self.xi
    }

    /// Index of the interface node.
    pub fn interface_index(&self) -> usize {
        self.iface
    }

    pub fn mode_eigenvalue(&self) -> Option<C> {
        self.mode_eigenvalue
    }

    /// Wave plus the configured perturbation, `g = τ = 0`.
    pub fn init(&self) -> Result<SimState> {
        let (u, w) = perturbation_on(&self.config, &self.xi, self.mode_eigenvalue)?;
        let i = self.iface;
        let tol = 1e-14 * (1.0 + self.config.perturbation.amplitude);
        if u[i].abs() > tol {
            return Err(Error::Config(format!(
                "perturbation violates Θ(0) = Θi (u(0) = {:e})",
                u[i]
            )));
        }
        if u[0] != 0.0 || w[0] != 0.0 || u[u.len() - 1] != 0.0 || w[w.len() - 1] != 0.0 {
            return Err(Error::Config("perturbation does not vanish at the far field".into()));
        }
        let mut u = u;
        u[i] = 0.0;
        let state = self.assemble(u, w, 0.0, 0.0, 1.0);
        if let Some(reason) = self.guard(&state) {
            return Err(Error::Config(format!("initial state: {reason}")));
        }
        Ok(state)
    }

    fn assemble(&self, u: Vec<f64>, w: Vec<f64>, g: f64, tau: f64, gdot: f64) -> SimState {
        let theta = self.wave_u.iter().zip(&u).map(|(a, b)| a + b).collect();
        let phi = self.wave_w.iter().zip(&w).map(|(a, b)| a + b).collect();
        SimState { theta, phi, g, tau, gdot, u, w }
    }

    fn guard(&self, s: &SimState) -> Option<String> {
        for (name, f) in [("theta", &s.theta), ("phi", &s.phi)] {
            if let Some((j, v)) = f
                .iter()
                .enumerate()
                .find(|(_, v)| !(GUARD.0..=GUARD.1).contains(*v))
            {
                return Some(format!("{name} = {v} at ξ = {} leaves [−0.1, 1.1]", self.xi[j]));
            }
        }
        None
    }

    fn ensure_factors(&mut self, dt: f64, theta: f64) {
        let fresh = matches!(&self.factors, Some(f) if f.dt == dt && f.theta == theta);
        if !fresh {
            let c = theta * dt;
            self.factors = Some(Factors {
                dt,
                theta,
                u: Tridiag::factor(&self.lu, c),
                w: (!self.config.limit_mode).then(|| Tridiag::factor(&self.lw, c)),
            });
        }
    }

    /// Largest stable `dt` of the explicit part of the diffusion step, if any.
    fn diffusion_bound(&self, theta: f64) -> f64 {
        if theta >= 0.5 {
            return f64::INFINITY;
        }
        let kappa = self.config.params.epsilon().max(1.0);
        self.hmin * self.hmin / (2.0 * (1.0 - 2.0 * theta) * kappa)
    }

    /// Advance `state` by `dt` with the configured θ.
    pub fn step(&mut self, state: &SimState, dt: f64) -> Result<StepOutcome> {
        let theta = self.config.theta;
        self.step_with(state, dt, theta)
    }

    fn step_with(&mut self, state: &SimState, dt: f64, theta: f64) -> Result<StepOutcome> {
        if dt > self.diffusion_bound(theta) {
            return Ok(StepOutcome::Rejected(format!(
                "dt = {dt} exceeds the θ = {theta} diffusion bound {}",
                self.diffusion_bound(theta)
            )));
        }
        self.ensure_factors(dt, theta);
        let f = self.factors.as_ref().expect("factored above");
        let n = self.xi.len();
        let i = self.iface;
        let a = self.config.params.a();
        let (u, w) = (&state.u, &state.w);
        let mut tmp = vec![0.0; n];

        // Φ perturbation: w⁺ = wa + ṡ·wb
        let mut wa = vec![0.0; n];
        let mut wb = vec![0.0; n];
        match &f.w {
            None => {
                // Strang: half decay, upwind transport, half decay
                let half = (-0.5 * a * dt).exp();
                let e = |j: usize| if j < i { half } else { 1.0 };
                let ws: Vec<f64> = (0..n).map(|j| e(j) * w[j]).collect();
                for j in 0..n - 1 {
                    let dw = (ws[j + 1] - ws[j]) * self.fwd[j];
                    wa[j] = e(j) * (ws[j] + dt * dw);
                    wb[j] = e(j) * dt * (dw + self.dw0[j]);
                }
            }
            Some(fw) => {
                self.lw.apply(w, &mut tmp);
                self.d1.apply(w, &mut wb);
                for j in 1..n - 1 {
                    wa[j] = w[j] + (1.0 - theta) * dt * tmp[j];
                    wb[j] = dt * (wb[j] + self.dw0[j]);
                }
                fw.solve(&mut wa);
                fw.solve(&mut wb);
            }
        }

        // Θ perturbation: u⁺ = ua + ṡ·ub
        let mut ua = vec![0.0; n];
        let mut ub = vec![0.0; n];
        self.lu.apply(u, &mut tmp);
        self.d1.apply(u, &mut ub);
        for j in 1..n - 1 {
            let r = a * self.chi[j];
            ua[j] = u[j]
                + (1.0 - theta) * dt * tmp[j]
                + dt * r * (theta * wa[j] + (1.0 - theta) * w[j]);
            ub[j] = dt * (ub[j] + self.du0[j] + r * theta * wb[j]);
        }
        f.u.solve(&mut ua);
        f.u.solve(&mut ub);
        let limit = self.config.limit_mode;

        if !(ub[i].abs() > 0.0) {
            return Ok(StepOutcome::Rejected("front response vanished".into()));
        }
        let sdot = -ua[i] / ub[i];
        if !sdot.is_finite() {
            return Err(Error::Unstable {
                tau: state.tau,
                reason: "non-finite front speed".into(),
            });
        }
        if limit && (1.0 + sdot <= 0.0 || dt * (1.0 + sdot) > self.hmin) {
            return Ok(StepOutcome::Rejected(format!(
                "transport CFL: dt·ġ = {} > h = {}",
                dt * (1.0 + sdot),
                self.hmin
            )));
        }
        if sdot.abs() * dt > self.hmin {
            return Ok(StepOutcome::Rejected(format!(
                "front moved {} > h relative to the wave in one step",
                sdot.abs() * dt
            )));
        }
        let mut un: Vec<f64> = ua.iter().zip(&ub).map(|(x, y)| x + sdot * y).collect();
        let wn: Vec<f64> = wa.iter().zip(&wb).map(|(x, y)| x + sdot * y).collect();
        let residual = un[i].abs();
        if residual > CONSTRAINT_TOL {
            return Ok(StepOutcome::Rejected(format!(
                "constraint residual {residual:e} after correction"
            )));
        }
        un[i] = 0.0;
        let next = self.assemble(un, wn, state.g + dt * (1.0 + sdot), state.tau + dt, 1.0 + sdot);
        if let Some(reason) = self.guard(&next) {
            return Err(Error::Unstable { tau: next.tau, reason });
        }
        Ok(StepOutcome::Accepted {
            state: next,
            sdot,
            constraint_residual: residual,
        })
    }

    /// `ṡ` from the second-order Stefan law with one-sided stencils at `0⁺`.
    pub fn stefan_sdot(&self, state: &SimState) -> f64 {
        let i = self.iface;
        let h = self.xi[i + 1] - self.xi[i];
        let u = &state.u;
        let d1 = (-3.0 * u[i] + 4.0 * u[i + 1] - u[i + 2]) / (2.0 * h);
        let d2 = (2.0 * u[i] - 5.0 * u[i + 1] + 4.0 * u[i + 2] - u[i + 3]) / (h * h);
        (d2 + d1) / (self.config.params.theta_i() - d1)
    }

    /// `sup e^{ξ/2}|u| + sup e^{ξ/2}|u| + sup_{ξ<0} e^{ξ/2}|w| + sup_{ξ>0} e^{Le ξ/2}|w|`.
    /// The last term is dropped in the limit, where `w ≡ 0` on `ξ > 0`.
    pub fn weighted_norm(&self, state: &SimState) -> f64 {
        let le = self.config.params.lewis();
        let i = self.iface;
        let sup = |f: &[f64], rate: f64, range: std::ops::Range<usize>| {
            range
                .filter(|&j| f[j] != 0.0)
                .map(|j| (rate * self.xi[j] + f[j].abs().ln()).exp())
                .fold(0.0f64, f64::max)
        };
        let n = self.xi.len();
        let mut total = sup(&state.u, 0.5, 0..i + 1)
            + sup(&state.u, 0.5, i + 1..n)
            + sup(&state.w, 0.5, 0..i + 1);
        if le.is_finite() {
            total += sup(&state.w, 0.5 * le, i + 1..n);
        }
        total
    }
}

/// Integrate `config` and sample the front every `dt_out`.
///
/// Blow-up is a result, not an error: the trace up to the last sample is
/// returned with `instability` set.
pub fn run(config: &SimConfig) -> Result<SimOutcome> {
    let mut sim = Simulator::new(config)?;
    let mut state = sim.init()?;
    let out = config.sample_interval();
    let k_max = (config.t_end / out - 1e-9).ceil() as usize;

    let mut trace = FrontTrace::default();
    let mut sdot_diag = Vec::new();
    let mut record = |trace: &mut FrontTrace, st: &SimState, sim: &Simulator| {
        trace.tau.push(st.tau);
        trace.g.push(st.g);
        trace.s.push(st.s());
        trace.wnorm.push(sim.weighted_norm(st));
        sdot_diag.push(sim.stefan_sdot(st));
    };
    record(&mut trace, &state, &sim);

    // (midpoint time, ṡ) of every accepted step
    let mut mids: Vec<(f64, f64)> = Vec::new();
    let mut accepted = 0usize;
    let mut rejected = 0usize;
    let mut dt_cur = config.dt;
    let mut min_dt = f64::INFINITY;
    let mut instability = None;
    let dt_floor = config.dt * 0.5f64.powi(MAX_HALVINGS as i32);

    'outer: for k in 1..=k_max {
        let target = (k as f64 * out).min(config.t_end);
        while target - state.tau > 1e-12 * target.max(1.0) {
            let remaining = target - state.tau;
            let nsub = (remaining / dt_cur - 1e-9).ceil().max(1.0);
            let dt = remaining / nsub;
            let attempt = if accepted == 0 && config.theta < 1.0 {
                startup(&mut sim, &state, dt)
            } else {
                sim.step(&state, dt).map(|o| (o, Vec::new()))
            };
            match attempt {
                Ok((StepOutcome::Accepted { state: next, sdot, .. }, sub)) => {
                    if sub.is_empty() {
                        mids.push((state.tau + 0.5 * dt, sdot));
                    } else {
                        mids.extend(sub);
                    }
                    let last_sub = nsub == 1.0;
                    state = next;
                    if last_sub {
                        state.tau = target;
                    }
                    accepted += 1;
                    min_dt = min_dt.min(dt);
                }
                Ok((StepOutcome::Rejected(_), _)) => {
                    rejected += 1;
                    dt_cur = dt / 2.0;
                    if dt_cur < dt_floor {
                        return Err(Error::Unstable {
                            tau: state.tau,
                            reason: format!("step size fell below {dt_floor:e}"),
                        });
                    }
                }
                Err(Error::Unstable { tau, reason }) => {
                    instability = Some(Instability { tau, reason });
                    break 'outer;
                }
                Err(e) => return Err(e),
            }
        }
        record(&mut trace, &state, &sim);
    }

    // ṡ at the sample times from the step midpoints
    trace.gdot = trace
        .tau
        .iter()
        .map(|&t| 1.0 + interpolate(&mids, t))
        .collect();
    trace.stefan_diag = trace
        .gdot
        .iter()
        .zip(&sdot_diag)
        .map(|(g, s)| g - (1.0 + s))
        .collect();
    let n = trace.len();
    trace.truncate(n);

    Ok(SimOutcome {
        trace,
        accepted_steps: accepted,
        rejected_steps: rejected,
        min_dt,
        mode_eigenvalue: sim.mode_eigenvalue,
        instability,
    })
}

/// First step as implicit-Euler substeps; returns the combined outcome and
/// the substep midpoints.
fn startup(
    sim: &mut Simulator,
    state: &SimState,
    dt: f64,
) -> Result<(StepOutcome, Vec<(f64, f64)>)> {
    let h = dt / STARTUP_SUBSTEPS as f64;
    let mut st = state.clone();
    let mut mids = Vec::with_capacity(STARTUP_SUBSTEPS);
    let mut last = (0.0, 0.0);
    for _ in 0..STARTUP_SUBSTEPS {
        match sim.step_with(&st, h, 1.0)? {
            StepOutcome::Accepted { state, sdot, constraint_residual } => {
                mids.push((st.tau + 0.5 * h, sdot));
                st = state;
                last = (sdot, constraint_residual);
            }
            rej => return Ok((rej, Vec::new())),
        }
    }
    Ok((
        StepOutcome::Accepted {
            state: st,
            sdot: last.0,
            constraint_residual: last.1,
        },
        mids,
    ))
}

/// Piecewise-linear interpolation of `(t, y)` pairs, extrapolating linearly
/// from the nearest two points outside the range.
fn interpolate(pts: &[(f64, f64)], t: f64) -> f64 {
    match pts.len() {
        0 => 0.0,
        1 => pts[0].1,
        n => {
            let k = pts.partition_point(|p| p.0 < t).clamp(1, n - 1);
            let (t0, y0) = pts[k - 1];
            let (t1, y1) = pts[k];
            y0 + (y1 - y0) * (t - t0) / (t1 - t0)
        }
    }
}

/// Least-squares slope of `ln y` against `τ` over `[t0, t1]`.
pub fn fit_log_rate(tau: &[f64], y: &[f64], t0: f64, t1: f64) -> Result<f64> {
    let pts: Vec<(f64, f64)> = tau
        .iter()
        .zip(y)
        .filter(|(t, v)| **t >= t0 && **t <= t1 && **v > 0.0)
        .map(|(t, v)| (*t, v.ln()))
        .collect();
    if pts.len() < 3 {
        return Err(Error::InsufficientData(format!(
            "{} positive samples in [{t0}, {t1}]",
            pts.len()
        )));
    }
    Ok(ls_slope(&pts))
}

fn ls_slope(pts: &[(f64, f64)]) -> f64 {
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
    sxy / sxx
}

/// Decay rate of the weighted perturbation norm over `[t0, t1]` (positive
/// for decay).
pub fn fit_decay_rate(trace: &FrontTrace, t0: f64, t1: f64) -> Result<f64> {
    Ok(-fit_log_rate(&trace.tau, &trace.wnorm, t0, t1)?)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Decaying,
    Oscillating,
    Growing,
}

/// Frequency and growth of the front oscillation.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Oscillation {
    pub verdict: Verdict,
    /// Angular frequency; `None` for a flat signal.
    pub freq: Option<f64>,
    /// Envelope growth rate; `None` for a flat signal.
    pub rate: Option<f64>,
    pub zero_crossings: usize,
}

/// Dead band of the verdict, relative to the frequency.
pub const DEAD_BAND: f64 = 0.05;

fn crossings(t: &[f64], x: &[f64]) -> Vec<f64> {
    let mut out = Vec::new();
    let mut prev: Option<usize> = None;
    for j in 0..x.len() {
        if x[j] == 0.0 {
            continue;
        }
        if let Some(p) = prev {
            if (x[p] < 0.0) != (x[j] < 0.0) {
                out.push(t[p] + (t[j] - t[p]) * x[p] / (x[p] - x[j]));
            }
        }
        prev = Some(j);
    }
    out
}

/// Index of the last sample with `|x| > floor`.
fn last_above(x: &[f64], floor: f64) -> usize {
    x.iter().rposition(|v| v.abs() > floor).unwrap_or(0)
}

/// Classify the front motion `s(τ)`.
///
/// The trend is removed with a centred moving average over one period
/// (estimated from the crossings of `ds/dτ`); the frequency is `π` over the
/// mean spacing of zero crossings and the rate is the least-squares slope of
/// the log of the half-cycle peaks.
pub fn detect_oscillation(trace: &FrontTrace) -> Result<Oscillation> {
    let (t, s) = (&trace.tau, &trace.s);
    let n = t.len();
    if n < 8 {
        return Err(Error::InsufficientData(format!("{n} samples")));
    }
    let dtau = t[1] - t[0];
    let scale = 1.0 + s.iter().fold(0.0f64, |a, v| a.max(v.abs()));
    let (lo, hi) = s.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &v| (a.min(v), b.max(v)));
    if hi - lo <= 1e-12 * scale {
        return Ok(Oscillation {
            verdict: Verdict::Decaying,
            freq: None,
            rate: None,
            zero_crossings: 0,
        });
    }

    // preliminary period from the derivative, which carries no offset
    let mut ds: Vec<f64> = s.windows(2).map(|w| (w[1] - w[0]) / dtau).collect();
    // the median tracks a constant drift without being dragged by transients
    let mut sorted = ds.clone();
    sorted.sort_by(f64::total_cmp);
    let mid = sorted[sorted.len() / 2];
    ds.iter_mut().for_each(|v| *v -= mid);
    let top = ds.iter().fold(0.0f64, |a, v| a.max(v.abs()));
    let keep = last_above(&ds, 1e-6 * top) + 1;
    let tm: Vec<f64> = t.windows(2).map(|w| 0.5 * (w[0] + w[1])).collect();
    let c0 = crossings(&tm[..keep], &ds[..keep]);
    if c0.len() < 3 {
        return Err(Error::InsufficientData(format!(
            "{} zero crossings of ds/dτ (need 3)",
            c0.len()
        )));
    }
    let period = 2.0 * (c0[c0.len() - 1] - c0[0]) / (c0.len() - 1) as f64;
    let half = ((0.5 * period / dtau).round() as usize).max(1);
    if 2 * half + 1 >= n {
        return Err(Error::InsufficientData(format!(
            "trace of {} shorter than one period {period}",
            t[n - 1] - t[0]
        )));
    }

    // detrend with a centred moving average over one period
    let win = 2 * half + 1;
    let mut prefix = vec![0.0; n + 1];
    for j in 0..n {
        prefix[j + 1] = prefix[j] + s[j];
    }
    let idx: Vec<usize> = (half..n - half).collect();
    let x: Vec<f64> = idx
        .iter()
        .map(|&j| s[j] - (prefix[j + half + 1] - prefix[j - half]) / win as f64)
        .collect();
    let tx: Vec<f64> = idx.iter().map(|&j| t[j]).collect();
    let amp = x.iter().fold(0.0f64, |a, v| a.max(v.abs()));
    let floor = (1e-8 * amp).max(1e-13 * scale);
    let keep = last_above(&x, floor) + 1;
    let (tx, x) = (&tx[..keep], &x[..keep]);

    let cr = crossings(tx, x);
    if cr.len() < 3 {
        return Err(Error::InsufficientData(format!(
            "{} zero crossings of detrended s (need 3)",
            cr.len()
        )));
    }
    let freq = std::f64::consts::PI * (cr.len() - 1) as f64 / (cr[cr.len() - 1] - cr[0]);

    // half-cycle peaks with parabolic refinement
    let mut peaks = Vec::new();
    for w in cr.windows(2) {
        let range: Vec<usize> = (0..x.len()).filter(|&j| tx[j] > w[0] && tx[j] < w[1]).collect();
        let Some(&jm) = range.iter().max_by(|&&a, &&b| x[a].abs().total_cmp(&x[b].abs())) else {
            continue;
        };
        let (mut tp, mut ap) = (tx[jm], x[jm].abs());
        if jm > 0 && jm + 1 < x.len() {
            let (y0, y1, y2) = (x[jm - 1].abs(), x[jm].abs(), x[jm + 1].abs());
            let den = y0 - 2.0 * y1 + y2;
            if den < 0.0 {
                let d = 0.5 * (y0 - y2) / den;
                tp += d * dtau;
                ap = y1 - 0.25 * (y0 - y2) * d;
            }
        }
        peaks.push((tp, ap.ln()));
    }
    if peaks.len() < 2 {
        return Err(Error::InsufficientData("fewer than two half-cycle peaks".into()));
    }
    let rate = ls_slope(&peaks);
    let verdict = if rate < -DEAD_BAND * freq {
        Verdict::Decaying
    } else if rate > DEAD_BAND * freq {
        Verdict::Growing
    } else {
        Verdict::Oscillating
    };
    Ok(Oscillation {
        verdict,
        freq: Some(freq),
        rate: Some(rate),
        zero_crossings: cr.len(),
    })
}

/// Front positions from the lab-frame diagnostic solver.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LabTrace {
    pub tau: Vec<f64>,
    pub g: Vec<f64>,
}

/// Solve the same initial-value problem in the laboratory frame on a fixed
/// uniform grid (`h = h₋`) wide enough to contain the front up to `t_end`.
/// The front is located by cubic inverse interpolation of `Θ = Θi`; the
/// reaction switches off across the cell containing it in proportion to the
/// burnt fraction. Diagnostic only: `ε > 0`, Crank–Nicolson, no rejection.
pub fn lab_frame_run(config: &SimConfig) -> Result<LabTrace> {
    config.validate()?;
    if config.limit_mode {
        return Err(Error::RequiresFiniteLewis("the lab-frame solver"));
    }
    let p = config.params;
    let wave = WaveProfile::new(p);
    let (h, _) = config.spacing();
    let x0 = config.domain[0];
    let x1 = config.domain[1] + 1.2 * config.t_end + 2.0;
    let n = ((x1 - x0) / h).round() as usize + 1;
    let x: Vec<f64> = (0..n).map(|j| x0 + j as f64 * h).collect();
    let mode = match config.perturbation.shape {
        Shape::Mode if config.perturbation.amplitude > 0.0 => Some(leading_eigenvalue(&p)?),
        _ => None,
    };
    // the perturbation lives on the front-fixed domain; zero beyond it
    let (u0, w0) = perturbation_on(config, &x, mode)?;
    let inside = |xv: f64| xv >= config.domain[0] && xv <= config.domain[1];
    let mut th: Vec<f64> = (0..n)
        .map(|j| wave.theta(x[j]) + if inside(x[j]) { u0[j] } else { 0.0 })
        .collect();
    let mut ph: Vec<f64> = (0..n)
        .map(|j| wave.phi(x[j]) + if inside(x[j]) { w0[j] } else { 0.0 })
        .collect();

    let a = p.a();
    let eps = p.epsilon();
    let ti = p.theta_i();
    let dt = config.dt;
    let out = config.sample_interval();
    let k_max = (config.t_end / out - 1e-9).ceil() as usize;
    let steps_per = (out / dt - 1e-9).ceil().max(1.0) as usize;
    let dt = out / steps_per as f64;

    let inv_h2 = 1.0 / (h * h);
    let lap = Rows {
        lo: vec![inv_h2; n],
        di: vec![-2.0 * inv_h2; n],
        up: vec![inv_h2; n],
    };
    let fu = Tridiag::factor(&lap, 0.5 * dt);

    let locate = |f: &[f64], guess: f64| -> Result<f64> {
        let j0 = (((guess - x0) / h).floor() as isize).clamp(2, n as isize - 4) as usize;
        let j = (j0.saturating_sub(20)..(j0 + 20).min(n - 2))
            .find(|&j| f[j] >= ti && f[j + 1] < ti)
            .ok_or_else(|| Error::Unstable {
                tau: 0.0,
                reason: "lab-frame front lost".into(),
            })?;
        let js = j.clamp(1, n - 3) - 1;
        let xs = [x[js], x[js + 1], x[js + 2], x[js + 3]];
        let ys = [f[js] - ti, f[js + 1] - ti, f[js + 2] - ti, f[js + 3] - ti];
        let lag = |z: f64| -> (f64, f64) {
            let mut v = 0.0;
            let mut d = 0.0;
            for a in 0..4 {
                let mut l = 1.0;
                let mut dl = 0.0;
                for b in 0..4 {
                    if b == a {
                        continue;
                    }
                    let den = xs[a] - xs[b];
                    dl = dl * (z - xs[b]) / den + l / den;
                    l *= (z - xs[b]) / den;
                }
                v += ys[a] * l;
                d += ys[a] * dl;
            }
            (v, d)
        };
        let mut z = x[j] + h * (f[j] - ti) / (f[j] - f[j + 1]);
        for _ in 0..20 {
            let (v, d) = lag(z);
            let dz = v / d;
            z -= dz;
            if dz.abs() < 1e-15 * (1.0 + z.abs()) {
                break;
            }
        }
        Ok(z)
    };

    let mut g = locate(&th, 0.0)?;
    let mut g_prev = g - dt;
    let mut trace = LabTrace { tau: vec![0.0], g: vec![g] };
    let mut tau = 0.0;
    let mut rhs = vec![0.0; n];
    let mut chi = vec![0.0; n];
    for k in 1..=k_max {
        for _ in 0..steps_per {
            let bc = |t: f64| {
                (
                    [wave.theta(x[0] - t), wave.theta(x[n - 1] - t)],
                    [wave.phi(x[0] - t), wave.phi(x[n - 1] - t)],
                )
            };
            let (bt, bp) = bc(tau + dt);
            let mut gm = g + 0.5 * (g - g_prev);
            let (mut th_new, mut ph_new) = (th.clone(), ph.clone());
            let mut g_new = g;
            for _ in 0..3 {
                for j in 0..n {
                    chi[j] = ((gm - (x[j] - 0.5 * h)) / h).clamp(0.0, 1.0);
                }
                // Φ: (I − dt/2 (ε∂² − Aχ)) Φ⁺ = (I + dt/2 (ε∂² − Aχ)) Φ
                let lw = Rows {
                    lo: vec![eps * inv_h2; n],
                    di: (0..n).map(|j| -2.0 * eps * inv_h2 - a * chi[j]).collect(),
                    up: vec![eps * inv_h2; n],
                };
                lw.apply(&ph, &mut rhs);
                for j in 1..n - 1 {
                    rhs[j] = ph[j] + 0.5 * dt * rhs[j];
                }
                rhs[0] = bp[0];
                rhs[n - 1] = bp[1];
                Tridiag::factor(&lw, 0.5 * dt).solve(&mut rhs);
                ph_new.copy_from_slice(&rhs);
                lap.apply(&th, &mut rhs);
                for j in 1..n - 1 {
                    rhs[j] = th[j] + 0.5 * dt * rhs[j] + 0.5 * dt * a * chi[j] * (ph[j] + ph_new[j]);
                }
                rhs[0] = bt[0];
                rhs[n - 1] = bt[1];
                fu.solve(&mut rhs);
                th_new.copy_from_slice(&rhs);
                g_new = locate(&th_new, g + dt)?;
                gm = 0.5 * (g + g_new);
            }
            th = th_new;
            ph = ph_new;
            g_prev = g;
            g = g_new;
            tau += dt;
        }
        tau = k as f64 * out;
        trace.tau.push(tau);
        trace.g.push(g);
    }
    Ok(trace)
}
