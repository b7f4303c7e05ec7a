use flamefront::rootscan::scan;
use flamefront::spectral::{
    essential_membership, limit_dispersion, on_cut, Parabola, SpectrumLabel,
    POINT_ROOT_TOL,
};
use flamefront::ModelParams;
use num_complex::Complex64 as C;
use rayon::prelude::*;
use serde_json::json;

use crate::config::{bad, RunConfig};
use crate::output::{num, opt_num, Sink};

pub const HEADER: [&str; 4] = ["re", "im", "classification", "|D|"];
pub const ROOTS_HEADER: [&str; 6] = ["region", "re", "im", "residual", "multiplicity", "kind"];

/// In the limit there is no parabola; the ray and `D₀` still classify.
fn classify_limit(l: C, p: &ModelParams) -> flamefront::Result<(SpectrumLabel, Option<f64>)> {
    if on_cut(l) {
        return Ok((SpectrumLabel::EssentialRay, None));
    }
    let m = p.m();
    let d = limit_dispersion(l, m)?.norm();
    // sum of the moduli of the terms of (H−1)/(4(1+m))·[4λ − (m−2)H + m + 2]
    let h = (1.0 + 4.0 * l).sqrt();
    let scale = (h - 1.0).norm() / (4.0 * (1.0 + m)) * (4.0 * l.norm() + (m - 2.0) * h.norm() + m + 2.0);
    // λ = 0 is always a root, and there the scale vanishes too
    let label = if l.norm() < 1e-8 {
        SpectrumLabel::ZeroEigenvalue
    } else if d < POINT_ROOT_TOL * scale {
        SpectrumLabel::PointRoot
    } else {
        SpectrumLabel::Resolvent
    };
    Ok((label, Some(d)))
}

pub fn run(cfg: &RunConfig, sink: &mut Sink) -> anyhow::Result<()> {
    let p = cfg.params()?;
    let Some(block) = &cfg.spectrum else {
        return bad("missing `spectrum` block");
    };
    let (re, im) = (block.grid.re_axis(), block.grid.im_axis());
    let points: Vec<C> = im.iter().flat_map(|&y| re.iter().map(move |&x| C::new(x, y))).collect();
    let rows: Vec<Vec<String>> = points
        .par_iter()
        .map(|&l| {
            let (label, d) = if p.is_limit() {
                classify_limit(l, &p)?
            } else {
                let c = essential_membership(l, &p)?;
                (c.label, c.residual)
            };
            Ok(vec![num(l.re), num(l.im), label.as_str().to_string(), opt_num(d)])
        })
        .collect::<flamefront::Result<_>>()?;
    sink.csv("spectrum.csv", &HEADER, &rows)?;

    let sets = block
        .regions
        .par_iter()
        .map(|r| scan(&p, &r.rect()?).map_err(anyhow::Error::from))
        .collect::<anyhow::Result<Vec<_>>>()?;
    let mut roots = Vec::new();
    for (k, rs) in sets.iter().enumerate() {
        let zero = rs.zero_eigenvalue.iter().map(|r| (r, "zero"));
        for (r, kind) in rs.roots.iter().map(|r| (r, "point")).chain(zero) {
            roots.push(vec![
                k.to_string(),
                num(r.z.re),
                num(r.z.im),
                num(r.residual),
                r.multiplicity.to_string(),
                kind.to_string(),
            ]);
        }
    }
    sink.csv("roots.csv", &ROOTS_HEADER, &roots)?;

    let parabola = Parabola::new(&p).ok().map(|q| {
        json!({ "a": q.a, "b": q.b, "c": q.c, "vertex": q.vertex(),
                "inequality": "a*re + b*im^2 + c <= 0" })
    });
    let meta = json!({
        "m": p.m(),
        "epsilon": p.epsilon(),
        "cut_ray": { "re_max": -0.25, "im": 0.0 },
        "parabola": parabola,
        "grid": block.grid,
        "regions": block.regions,
        "root_counts": sets.iter().map(|s| s.roots.len()).collect::<Vec<_>>(),
    });
    sink.json("spectrum_meta.json", &meta)
}
