//! Model parameters and the explicit traveling wave.
//!
//! In the moving frame `z = x − t` the wave `(Θ⁰, Φ⁰)` solves
//!
//! ```text
//! Θ'' + Θ' + A·Φ·χ(z<0) = 0,      ε·Φ'' + Φ' − A·Φ·χ(z<0) = 0,
//! ```
//!
//! with `Θ⁰(0) = Θi`, `Θ⁰ → 1, Φ⁰ → 0` as `z → −∞` and `Θ⁰ → 0, Φ⁰ → 1` as
//! `z → +∞`. The normalisation `A = m + ε m²` makes the speed exactly one.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Which one-sided limit to take at the interface `z = 0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Side {
    Left,
    Right,
}

/// Validated `(m, ε)` pair together with derived quantities.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawParams", into = "RawParams")]
pub struct ModelParams {
    m: f64,
    epsilon: f64,
    theta_i: f64,
    a: f64,
}

#[derive(Serialize, Deserialize)]
struct RawParams {
    m: f64,
    epsilon: f64,
}

impl TryFrom<RawParams> for ModelParams {
    type Error = Error;
    fn try_from(r: RawParams) -> Result<Self> {
        ModelParams::new(r.m, r.epsilon)
    }
}

impl From<ModelParams> for RawParams {
    fn from(p: ModelParams) -> Self {
        RawParams {
            m: p.m,
            epsilon: p.epsilon,
        }
    }
}

impl ModelParams {
    /// Parameters in the working domain `m > 2`, `0 ≤ ε < 1/2`.
    /// `ε = 0` is the infinite-Lewis-number limit.
    pub fn new(m: f64, epsilon: f64) -> Result<Self> {
        if !(m.is_finite() && m > 2.0) {
            return Err(Error::InvalidParams(format!("m = {m} must exceed 2")));
        }
        if !(epsilon.is_finite() && (0.0..0.5).contains(&epsilon)) {
            return Err(Error::InvalidParams(format!(
                "ε = {epsilon} must lie in [0, 1/2)"
            )));
        }
        Ok(Self::unchecked(m, epsilon))
    }

    /// Parameters from the ignition temperature and a Lewis number `Le > 1`.
    ///
    /// This admits `1/2 ≤ ε < 1`, which [`ModelParams::new`] rejects; it is
    /// meant for the `k₁ = k₃` analysis, which is posed for every `Le > 1`.
    pub fn from_lewis(theta_i: f64, le: f64) -> Result<Self> {
        if !(theta_i > 2.0 / 3.0 && theta_i < 1.0) {
            return Err(Error::InvalidParams(format!(
                "Θi = {theta_i} must lie in (2/3, 1)"
            )));
        }
        if !(le.is_finite() && le > 1.0) {
            return Err(Error::InvalidParams(format!("Le = {le} must exceed 1")));
        }
        let mut p = Self::unchecked(theta_i / (1.0 - theta_i), 1.0 / le);
        p.theta_i = theta_i;
        Ok(p)
    }

    fn unchecked(m: f64, epsilon: f64) -> Self {
        ModelParams {
            m,
            epsilon,
            theta_i: m / (1.0 + m),
            a: m + epsilon * m * m,
        }
    }

    pub fn m(&self) -> f64 {
        self.m
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    /// Ignition temperature `Θi = m/(1+m)`.
    pub fn theta_i(&self) -> f64 {
        self.theta_i
    }

    /// Lewis number `1/ε`; `+∞` in the limit case.
    pub fn lewis(&self) -> f64 {
        if self.is_limit() {
            f64::INFINITY
        } else {
            1.0 / self.epsilon
        }
    }

    /// Reaction rate normalisation `A = m + ε m²`.
    pub fn a(&self) -> f64 {
        self.a
    }

    /// True for `ε = 0` (infinite Lewis number).
    pub fn is_limit(&self) -> bool {
        self.epsilon == 0.0
    }

    /// Inverse of `Θi = m/(1+m)`.
    pub fn m_from_theta_i(theta_i: f64) -> f64 {
        theta_i / (1.0 - theta_i)
    }
}

/// Jump and slope data of the wave at the interface.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct WaveJumps {
    /// `Θ⁰'(0)`, continuous across the interface; equals `−Θi`.
    pub dtheta0: f64,
    /// `[Θ⁰''] = Θ⁰''(0⁺) − Θ⁰''(0⁻)`; equals `m`.
    pub theta_dd_jump: f64,
    /// `[Φ⁰'']`; equals `−Le·m` for `ε > 0` and `−m²` in the limit.
    pub phi_dd_jump: f64,
}

/// The explicit traveling wave for given parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WaveProfile {
    params: ModelParams,
}

impl WaveProfile {
    pub fn new(params: ModelParams) -> Self {
        WaveProfile { params }
    }

    pub fn params(&self) -> &ModelParams {
        &self.params
    }

    pub fn theta(&self, z: f64) -> f64 {
        self.theta_d(z, 0, Side::Left)
    }

    pub fn phi(&self, z: f64) -> f64 {
        self.phi_d(z, 0, Side::Left)
    }

    /// `order`-th derivative of `Θ⁰` (order ≤ 2). `side` only matters at
    /// `z = 0`; elsewhere the branch follows the sign of `z`.
    pub fn theta_d(&self, z: f64, order: u32, side: Side) -> f64 {
        let p = &self.params;
        let m = p.m;
        if z < 0.0 || (z == 0.0 && side == Side::Left) {
            let base = if order == 0 { 1.0 } else { 0.0 };
            base - (1.0 - p.theta_i) * m.powi(order as i32) * (m * z).exp()
        } else {
            p.theta_i * (-1.0f64).powi(order as i32) * (-z).exp()
        }
    }

    /// `order`-th derivative of `Φ⁰`; see [`WaveProfile::theta_d`].
    pub fn phi_d(&self, z: f64, order: u32, side: Side) -> f64 {
        let p = &self.params;
        let m = p.m;
        if z < 0.0 || (z == 0.0 && side == Side::Left) {
            m / p.a * m.powi(order as i32) * (m * z).exp()
        } else {
            let base = if order == 0 { 1.0 } else { 0.0 };
            if p.is_limit() {
                return base;
            }
            let le = p.lewis();
            base + (m / p.a - 1.0) * (-le).powi(order as i32) * (-le * z).exp()
        }
    }

    pub fn jumps(&self) -> WaveJumps {
        WaveJumps {
            dtheta0: self.theta_d(0.0, 1, Side::Right),
            theta_dd_jump: self.theta_d(0.0, 2, Side::Right) - self.theta_d(0.0, 2, Side::Left),
            phi_dd_jump: self.phi_d(0.0, 2, Side::Right) - self.phi_d(0.0, 2, Side::Left),
        }
    }

    /// Residuals of the two traveling-wave equations at `z ≠ 0`.
    pub fn ode_residual(&self, z: f64) -> (f64, f64) {
        let p = &self.params;
        let s = Side::Left;
        let chi = if z < 0.0 { 1.0 } else { 0.0 };
        let rate = p.a * self.phi(z) * chi;
        let r_theta = self.theta_d(z, 2, s) + self.theta_d(z, 1, s) + rate;
        let r_phi = p.epsilon * self.phi_d(z, 2, s) + self.phi_d(z, 1, s) - rate;
        (r_theta, r_phi)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_out_of_domain() {
        assert!(ModelParams::new(2.0, 0.1).is_err());
        assert!(ModelParams::new(6.0, 0.5).is_err());
        assert!(ModelParams::new(6.0, -1e-3).is_err());
        assert!(ModelParams::new(f64::NAN, 0.1).is_err());
        assert!(ModelParams::new(2.0001, 0.0).is_ok());
    }

    #[test]
    fn interface_data() {
        let w = WaveProfile::new(ModelParams::new(6.0, 0.1).unwrap());
        let j = w.jumps();
        assert!((j.dtheta0 + 6.0 / 7.0).abs() < 1e-15);
        assert!((j.theta_dd_jump - 6.0).abs() < 1e-13);
        assert!((j.phi_dd_jump + 60.0).abs() < 1e-12);
        assert!((w.theta(0.0) - 6.0 / 7.0).abs() < 1e-15);
        assert!((w.theta_d(0.0, 1, Side::Left) - j.dtheta0).abs() < 1e-15);
        assert!((w.phi_d(0.0, 1, Side::Left) - w.phi_d(0.0, 1, Side::Right)).abs() < 1e-13);

        let w = WaveProfile::new(ModelParams::new(4.0, 0.0).unwrap());
        assert!((w.jumps().theta_dd_jump - 4.0).abs() < 1e-14);
        assert_eq!(w.phi(0.3), 1.0);
        assert_eq!(w.phi(0.0), 1.0);
    }

    #[test]
    fn solves_wave_equations() {
        for &(m, e) in &[(3.0, 0.0), (4.0, 0.02), (6.0, 0.1), (12.0, 0.3)] {
            let w = WaveProfile::new(ModelParams::new(m, e).unwrap());
            for i in 1..=200 {
                let z = -10.0 + 0.1 * i as f64 - 0.05;
                if z == 0.0 {
                    continue;
                }
                let (a, b) = w.ode_residual(z);
                assert!(a.abs() < 1e-10 && b.abs() < 1e-10, "{m} {e} {z}: {a} {b}");
            }
        }
    }

    #[test]
    fn round_trip_theta_i() {
        for &m in &[2.5, 3.0, 6.0, 17.25] {
            let p = ModelParams::new(m, 0.01).unwrap();
            let back = ModelParams::m_from_theta_i(p.theta_i());
            assert!((back - m).abs() <= 4.0 * f64::EPSILON * m);
        }
    }
}
