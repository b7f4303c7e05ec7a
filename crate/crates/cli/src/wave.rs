use flamefront::{Side, WaveProfile};
use serde_json::json;

use crate::config::RunConfig;
use crate::output::{num, Sink};

pub const HEADER: [&str; 5] = ["z", "theta0", "phi0", "dtheta0", "dphi0"];

pub fn run(cfg: &RunConfig, sink: &mut Sink) -> anyhow::Result<()> {
    let p = cfg.params()?;
    let w = cfg.wave.clone().unwrap_or_default();
    let wave = WaveProfile::new(p);
    let rows: Vec<Vec<String>> = (0..w.points)
        .map(|i| {
            let z = w.z_min + (w.z_max - w.z_min) * i as f64 / (w.points - 1) as f64;
            // right-sided at z = 0; only Φ⁰' in the limit differs between sides
            let side = if z < 0.0 { Side::Left } else { Side::Right };
            vec![
                num(z),
                num(wave.theta(z)),
                num(wave.phi(z)),
                num(wave.theta_d(z, 1, side)),
                num(wave.phi_d(z, 1, side)),
            ]
        })
        .collect();
    sink.csv("wave.csv", &HEADER, &rows)?;

    let jumps = wave.jumps();
    let meta = json!({
        "m": p.m(),
        "epsilon": p.epsilon(),
        "theta_i": p.theta_i(),
        "a": p.a(),
        "lewis": if p.is_limit() { None } else { Some(p.lewis()) },
        "limit": p.is_limit(),
        "interface": {
            "z": 0.0,
            "theta0": wave.theta(0.0),
            "phi0_left": wave.phi_d(0.0, 0, Side::Left),
            "phi0_right": wave.phi_d(0.0, 0, Side::Right),
            "dtheta0": jumps.dtheta0,
            "dphi0_left": wave.phi_d(0.0, 1, Side::Left),
            "dphi0_right": wave.phi_d(0.0, 1, Side::Right),
            "theta_dd_jump": jumps.theta_dd_jump,
            "phi_dd_jump": jumps.phi_dd_jump,
        },
    });
    sink.json("wave_meta.json", &meta)
}
