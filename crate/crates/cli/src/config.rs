//! Run configuration: one JSON document, validated before any computation.

use std::fmt;
use std::path::Path;

use flamefront::hurwitz::{parse_rational, rational_from_f64, Rational, EPS_MAX};
use flamefront::rootscan::Rect;
use flamefront::simulator::{Perturbation, SimConfig};
use flamefront::ModelParams;
use serde::{Deserialize, Serialize};

/// Bad input: unreadable or malformed config, or values outside the domain.
#[derive(Debug)]
pub struct ConfigError(pub String);

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "config error: {}", self.0)
    }
}

impl std::error::Error for ConfigError {}

pub fn bad<T>(msg: impl Into<String>) -> anyhow::Result<T> {
    Err(ConfigError(msg.into()).into())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    Wave,
    Spectrum,
    Critical,
    Simulate,
    Verify,
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    /// If present, must name the command being run.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub command: Option<Command>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub params: Option<ModelParams>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub wave: Option<WaveBlock>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub spectrum: Option<SpectrumBlock>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub critical: Option<CriticalBlock>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sim: Option<SimBlock>,
    /// Output path prefix; `--out` takes precedence.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub out: Option<String>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WaveBlock {
    #[serde(default = "WaveBlock::default_min")]
    pub z_min: f64,
    #[serde(default = "WaveBlock::default_max")]
    pub z_max: f64,
    #[serde(default = "WaveBlock::default_points")]
    pub points: usize,
}

impl WaveBlock {
    fn default_min() -> f64 {
        -10.0
    }
    fn default_max() -> f64 {
        10.0
    }
    fn default_points() -> usize {
        401
    }
}

impl Default for WaveBlock {
    fn default() -> Self {
        WaveBlock { z_min: -10.0, z_max: 10.0, points: 401 }
    }
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RectBlock {
    pub re_min: f64,
    pub re_max: f64,
    pub im_min: f64,
    pub im_max: f64,
}

impl RectBlock {
    pub fn rect(&self) -> anyhow::Result<Rect> {
        Rect::new(self.re_min, self.re_max, self.im_min, self.im_max)
            .or_else(|e| bad(format!("region: {e}")))
    }
}

/// Uniform `n_re × n_im` grid of `λ` values.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridBlock {
    pub re_min: f64,
    pub re_max: f64,
    pub n_re: usize,
    pub im_min: f64,
    pub im_max: f64,
    pub n_im: usize,
}

impl GridBlock {
    fn axis(lo: f64, hi: f64, n: usize) -> Vec<f64> {
        if n == 1 {
            return vec![lo];
        }
        (0..n).map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64).collect()
    }

    pub fn re_axis(&self) -> Vec<f64> {
        Self::axis(self.re_min, self.re_max, self.n_re)
    }

    pub fn im_axis(&self) -> Vec<f64> {
        Self::axis(self.im_min, self.im_max, self.n_im)
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpectrumBlock {
    pub grid: GridBlock,
    #[serde(default)]
    pub regions: Vec<RectBlock>,
}

/// `ε` given exactly (`"1/100"`, `"1e-4"`) or as a binary64 number.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum EpsValue {
    Exact(String),
    Float(f64),
}

impl EpsValue {
    pub fn rational(&self) -> anyhow::Result<Rational> {
        match self {
            EpsValue::Exact(s) => parse_rational(s).or_else(|e| bad(format!("ε = {s:?}: {e}"))),
            EpsValue::Float(x) => rational_from_f64(*x).or_else(|e| bad(format!("ε = {x}: {e}"))),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CriticalBlock {
    pub epsilon: Vec<EpsValue>,
    /// Starting guess for `m_c` at every `ε`.
    #[serde(default = "CriticalBlock::default_seed")]
    pub seed: f64,
}

impl CriticalBlock {
    fn default_seed() -> f64 {
        6.0
    }
}

/// Mirror of [`SimConfig`] without the parameters (taken from `params`);
/// unset fields take the [`SimConfig::new`] defaults.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SimBlock {
    pub t_end: f64,
    pub perturbation: Perturbation,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub domain: Option<[f64; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n_cells: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dt: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dt_out: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub limit_mode: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub theta: Option<f64>,
    /// Window `[t0, t1]` for the decay-rate fit; default `[0.1, 0.6]·t_end`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fit_window: Option<[f64; 2]>,
}

impl SimBlock {
    pub fn sim_config(&self, params: ModelParams) -> anyhow::Result<SimConfig> {
        let mut c = SimConfig::new(params, self.t_end, self.perturbation);
        if let Some(d) = self.domain {
            c.domain = d;
        }
        if let Some(n) = self.n_cells {
            c.n_cells = n;
        }
        if let Some(dt) = self.dt {
            c.dt = dt;
        }
        if self.dt_out.is_some() {
            c.dt_out = self.dt_out;
        }
        if let Some(l) = self.limit_mode {
            c.limit_mode = l;
        }
        if let Some(t) = self.theta {
            c.theta = t;
        }
        c.validate().or_else(|e| bad(format!("sim: {e}")))?;
        Ok(c)
    }

    pub fn fit_window(&self) -> anyhow::Result<[f64; 2]> {
        let w = self.fit_window.unwrap_or([0.1 * self.t_end, 0.6 * self.t_end]);
        if !(w[0] >= 0.0 && w[0] < w[1] && w[1] <= self.t_end) {
            return bad(format!("sim.fit_window {w:?} must satisfy 0 ≤ t0 < t1 ≤ t_end"));
        }
        Ok(w)
    }
}

impl RunConfig {
    pub fn load(path: &Path) -> anyhow::Result<RunConfig> {
        let text = std::fs::read_to_string(path)
            .or_else(|e| bad(format!("cannot read {}: {e}", path.display())))?;
        serde_json::from_str(&text).or_else(|e| bad(format!("{}: {e}", path.display())))
    }

    pub fn params(&self) -> anyhow::Result<ModelParams> {
        match self.params {
            Some(p) => Ok(p),
            None => bad("missing `params` block"),
        }
    }

    /// Everything `cmd` needs is present and in range.
    pub fn validate(&self, cmd: Command) -> anyhow::Result<()> {
        if let Some(c) = self.command {
            if c != cmd {
                return bad(format!("config is for `{c:?}`, not `{cmd:?}`").to_lowercase());
            }
        }
        match cmd {
            Command::Wave => {
                self.params()?;
                let w = self.wave.clone().unwrap_or_default();
                if !(w.z_min < w.z_max && w.z_min.is_finite() && w.z_max.is_finite()) {
                    return bad("wave: need finite z_min < z_max");
                }
                if w.points < 2 {
                    return bad("wave: need at least 2 points");
                }
            }
            Command::Spectrum => {
                self.params()?;
                let Some(s) = &self.spectrum else {
                    return bad("missing `spectrum` block");
                };
                let g = &s.grid;
                if g.n_re == 0 || g.n_im == 0 || !(g.re_min <= g.re_max && g.im_min <= g.im_max) {
                    return bad("spectrum.grid: need n_re, n_im ≥ 1 and min ≤ max");
                }
                for r in &s.regions {
                    r.rect()?;
                }
            }
            Command::Critical => {
                let Some(c) = &self.critical else {
                    return bad("missing `critical` block");
                };
                if c.epsilon.is_empty() {
                    return bad("critical.epsilon is empty");
                }
                for e in &c.epsilon {
                    let q = e.rational()?;
                    let x: f64 = num_traits::ToPrimitive::to_f64(&q).unwrap_or(f64::NAN);
                    if !(x > 0.0 && x <= EPS_MAX) {
                        return bad(format!("critical.epsilon {q} outside (0, {EPS_MAX}]"));
                    }
                }
                if !c.seed.is_finite() || c.seed <= 2.0 {
                    return bad("critical.seed must exceed 2");
                }
            }
            Command::Simulate => {
                let p = self.params()?;
                let Some(s) = &self.sim else {
                    return bad("missing `sim` block");
                };
                s.sim_config(p)?;
                s.fit_window()?;
            }
            Command::Verify => {}
        }
        Ok(())
    }
}
