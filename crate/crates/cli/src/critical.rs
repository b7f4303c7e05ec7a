use flamefront::hurwitz::{critical_point, transversality, CriticalPoint, Transversality};
use flamefront::Error;
use rayon::prelude::*;

use crate::config::{bad, RunConfig};
use crate::output::{num, Sink};

pub const HEADER: [&str; 9] = [
    "epsilon",
    "epsilon_exact",
    "m_c",
    "omega",
    "delta6",
    "m_relative",
    "p7_at_iomega",
    "dispersion_at_iomega",
    "status",
];
pub const TRANSVERSALITY_HEADER: [&str; 9] =
    ["epsilon", "m_c", "re", "im", "d_lambda_re", "d_lambda_im", "d_m_re", "d_m_im", "status"];

/// Row status: `ok`, `uniqueness-violation: …` (a result), or `failed: …`.
fn status(e: &Error) -> String {
    match e {
        Error::Uniqueness { .. } => format!("uniqueness-violation: {e}"),
        _ => format!("failed: {e}"),
    }
}

/// Whether any row failed for a reason other than a uniqueness violation.
pub fn numerical_failure(statuses: &[String]) -> bool {
    statuses.iter().any(|s| s.starts_with("failed"))
}

pub fn run(cfg: &RunConfig, sink: &mut Sink) -> anyhow::Result<Vec<String>> {
    let Some(block) = &cfg.critical else {
        return bad("missing `critical` block");
    };
    let eps = block.epsilon.iter().map(|e| e.rational()).collect::<anyhow::Result<Vec<_>>>()?;
    // each ε starts from the same seed, so results do not depend on scheduling
    type Task = (Result<CriticalPoint, Error>, Option<Result<Transversality, Error>>);
    let results: Vec<Task> = eps
        .par_iter()
        .map(|e| {
            let pt = critical_point(e, block.seed);
            let tr = pt.as_ref().ok().map(|p| transversality(e, p));
            (pt, tr)
        })
        .collect();

    let nan = || num(f64::NAN);
    let mut rows = Vec::new();
    let mut trows = Vec::new();
    let mut statuses = Vec::new();
    for (e, (pt, tr)) in eps.iter().zip(&results) {
        let x = num_traits::ToPrimitive::to_f64(e).unwrap_or(f64::NAN);
        match pt {
            Ok(p) => {
                let r = &p.residuals;
                rows.push(vec![
                    num(p.epsilon),
                    p.epsilon_exact.clone(),
                    num(p.m_c),
                    num(p.omega),
                    num(r.delta6),
                    num(r.m_relative),
                    num(r.p7_at_iomega),
                    num(r.dispersion_at_iomega),
                    "ok".into(),
                ]);
                statuses.push("ok".to_string());
                let (vals, st) = match tr {
                    Some(Ok(t)) => (
                        [t.value.re, t.value.im, t.d_lambda.re, t.d_lambda.im, t.d_m.re, t.d_m.im].map(num),
                        "ok".to_string(),
                    ),
                    Some(Err(err)) => ([(); 6].map(|_| nan()), status(err)),
                    None => unreachable!("transversality is computed for every point"),
                };
                if st != "ok" {
                    statuses.push(st.clone());
                }
                let mut row = vec![num(p.epsilon), num(p.m_c)];
                row.extend(vals);
                row.push(st);
                trows.push(row);
            }
            Err(err) => {
                let st = status(err);
                let mut row = vec![num(x), e.to_string()];
                row.extend([(); 6].map(|_| nan()));
                row.push(st.clone());
                rows.push(row);
                let mut trow = vec![num(x)];
                trow.extend([(); 7].map(|_| nan()));
                trow.push(st.clone());
                trows.push(trow);
                statuses.push(st);
            }
        }
    }
    sink.csv("critical.csv", &HEADER, &rows)?;
    sink.csv("transversality.csv", &TRANSVERSALITY_HEADER, &trows)?;
    Ok(statuses)
}
