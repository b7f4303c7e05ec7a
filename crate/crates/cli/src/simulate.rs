use flamefront::simulator::{detect_oscillation, fit_decay_rate, run as simulate, FrontTrace, Verdict};
use serde_json::json;

use crate::config::{bad, RunConfig};
use crate::output::{num, Sink};

pub fn run(cfg: &RunConfig, sink: &mut Sink) -> anyhow::Result<()> {
    let p = cfg.params()?;
    let Some(block) = &cfg.sim else {
        return bad("missing `sim` block");
    };
    let config = block.sim_config(p)?;
    let window = block.fit_window()?;
    let out = simulate(&config)?;

    let rows: Vec<Vec<String>> = (0..out.trace.len()).map(|i| out.trace.row(i).map(num).to_vec()).collect();
    sink.csv("trace.csv", &FrontTrace::HEADER, &rows)?;

    let osc = detect_oscillation(&out.trace);
    let decay = fit_decay_rate(&out.trace, window[0], window[1]);
    // a blow-up is a growing front whatever the detector makes of the short
    // trace; without enough oscillations the norm trend decides
    let (verdict, source) = match (&out.instability, &osc, &decay) {
        (Some(_), _, _) => (Some(Verdict::Growing), "instability"),
        (None, Ok(o), _) => (Some(o.verdict), "oscillation"),
        (None, Err(_), Ok(r)) if *r > 0.0 => (Some(Verdict::Decaying), "norm-trend"),
        (None, Err(_), Ok(r)) if *r < 0.0 => (Some(Verdict::Growing), "norm-trend"),
        _ => (None, "none"),
    };
    let o = osc.as_ref().ok();
    let verdict_json = json!({
        "verdict": verdict,
        "verdict_source": source,
        "freq": o.and_then(|o| o.freq),
        "rate": o.and_then(|o| o.rate),
        "zero_crossings": o.map(|o| o.zero_crossings),
        "detector_error": osc.as_ref().err().map(|e| e.to_string()),
        "decay_rate": decay.as_ref().ok(),
        "decay_fit_window": window,
        "decay_fit_error": decay.as_ref().err().map(|e| e.to_string()),
        "mode_eigenvalue": out.mode_eigenvalue.map(|z| json!({ "re": z.re, "im": z.im })),
        "accepted_steps": out.accepted_steps,
        "rejected_steps": out.rejected_steps,
        "min_dt": out.min_dt,
        "samples": out.trace.len(),
        "instability": out.instability,
    });
    sink.json("verdict.json", &verdict_json)
}
