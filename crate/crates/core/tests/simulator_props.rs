use flamefront::simulator::{
    detect_oscillation, fit_decay_rate, lab_frame_run, leading_eigenvalue, run,
    FrontTrace, Perturbation, Shape, SimConfig, Verdict,
};
use flamefront::ModelParams;
use nalgebra::{DMatrix, DVector};
use num_complex::Complex64 as C;

fn bump(amplitude: f64) -> Perturbation {
    Perturbation { amplitude, shape: Shape::Bump { center: -2.0, width: 1.5 } }
}

fn mode(amplitude: f64) -> Perturbation {
    Perturbation { amplitude, shape: Shape::Mode }
}

fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

fn synthetic(f: impl Fn(f64) -> f64, t_end: f64, dt: f64) -> FrontTrace {
    let n = (t_end / dt).round() as usize + 1;
    let tau: Vec<f64> = (0..n).map(|i| i as f64 * dt).collect();
    let s: Vec<f64> = tau.iter().map(|&t| f(t)).collect();
    FrontTrace {
        g: tau.iter().zip(&s).map(|(t, s)| t + s).collect(),
        gdot: vec![1.0; n],
        wnorm: vec![0.0; n],
        stefan_diag: vec![0.0; n],
        tau,
        s,
    }
}

#[test]
fn unperturbed_wave_travels_at_unit_speed() {
    let p = ModelParams::new(5.0, 0.05).unwrap();
    let mut c = SimConfig::new(p, 5.0, bump(0.0));
    c.n_cells = 500;
    let o = run(&c).unwrap();
    assert!(o.instability.is_none());
    assert!(o.trace.gdot.iter().all(|v| (v - 1.0).abs() < 1e-12));
    assert!(o.trace.s.iter().all(|v| v.abs() < 1e-12));
    assert!(o.trace.wnorm.iter().all(|v| *v < 1e-12));
}

#[test]
fn stefan_discrepancy_is_second_order() {
    let p = ModelParams::new(4.0, 0.02).unwrap();
    let errs: Vec<f64> = [(1250, 0.04), (2500, 0.02), (5000, 0.01)]
        .iter()
        .map(|&(n, dt)| {
            let mut c = SimConfig::new(p, 2.0, bump(1e-3));
            c.n_cells = n;
            c.dt = dt;
            c.dt_out = Some(0.2);
            let o = run(&c).unwrap();
            // the first samples carry the start-up layer
            o.trace.stefan_diag.iter().skip(3).fold(0.0f64, |a, v| a.max(v.abs()))
        })
        .collect();
    for w in errs.windows(2) {
        let ratio = w[0] / w[1];
        assert!(ratio > 3.0 && ratio < 5.5, "{errs:?}");
    }
}

#[test]
fn decay_rate_matches_spectrum_and_converges() {
    let p = ModelParams::new(4.0, 0.02).unwrap();
    let lambda = leading_eigenvalue(&p).unwrap();
    let mut c = SimConfig::new(p, 14.0, mode(1e-3));
    c.n_cells = 2500;
    c.dt = 0.02;
    let coarse = run(&c).unwrap();
    let fine = run(&c.refined()).unwrap();
    assert_eq!(coarse.mode_eigenvalue, Some(lambda));
    let r1 = fit_decay_rate(&coarse.trace, 1.0, 8.0).unwrap();
    let r2 = fit_decay_rate(&fine.trace, 1.0, 8.0).unwrap();
    assert!(((r1 - r2) / r2).abs() < 0.02, "{r1} {r2}");
    assert!(((r2 + lambda.re) / lambda.re).abs() < 0.03, "{r2} vs {lambda}");
    let osc = detect_oscillation(&fine.trace).unwrap();
    assert_eq!(osc.verdict, Verdict::Decaying);
    assert!((osc.freq.unwrap() - lambda.im).abs() < 0.03 * lambda.im, "{osc:?}");
}

#[test]
fn stable_front_settles() {
    let p = ModelParams::new(4.0, 0.02).unwrap();
    let mut c = SimConfig::new(p, 20.0, mode(1e-3));
    c.n_cells = 2500;
    c.dt = 0.02;
    c.dt_out = Some(0.1);
    let o = run(&c).unwrap();
    let s = &o.trace.s;
    let last = *s.last().unwrap();
    let tail = &s[s.len() * 9 / 10..];
    assert!(tail.iter().all(|v| (v - last).abs() < 1e-6), "{last}");
}

#[test]
fn agrees_with_lab_frame() {
    let p = ModelParams::new(4.0, 0.1).unwrap();
    let diffs: Vec<f64> = [(1000, 0.02), (2000, 0.01)]
        .iter()
        .map(|&(n, dt)| {
            let mut c = SimConfig::new(p, 2.0, bump(1e-2));
            c.domain = [-20.0, 20.0];
            c.n_cells = n;
            c.dt = dt;
            c.dt_out = Some(0.2);
            let ff = run(&c).unwrap();
            let lab = lab_frame_run(&c).unwrap();
            assert_eq!(ff.trace.tau.len(), lab.tau.len());
            max_abs_diff(&ff.trace.g, &lab.g)
        })
        .collect();
    assert!(diffs[1] < 1e-3, "{diffs:?}");
    assert!(diffs[0] / diffs[1] > 3.0, "{diffs:?}");
}

#[test]
fn limit_mode_is_the_small_epsilon_limit() {
    let mut c0 = SimConfig::new(ModelParams::new(4.0, 0.0).unwrap(), 3.0, bump(1e-2));
    c0.domain = [-20.0, 20.0];
    c0.n_cells = 4000;
    c0.dt = 0.00495;
    c0.dt_out = Some(0.1);
    assert!(c0.limit_mode);
    let limit = run(&c0).unwrap();
    let diffs: Vec<f64> = [0.02, 0.01]
        .iter()
        .map(|&e| {
            let mut c = c0.clone();
            c.params = ModelParams::new(4.0, e).unwrap();
            c.limit_mode = false;
            c.dt = 0.005;
            max_abs_diff(&run(&c).unwrap().trace.s, &limit.trace.s)
        })
        .collect();
    let ratio = diffs[0] / diffs[1];
    assert!(ratio > 1.6 && ratio < 2.5, "{diffs:?}");
    assert!(diffs[1] < 0.1 * 0.01, "{diffs:?}");
}

/// Relative residual of the least-squares fit `s ≈ a + Re[b e^{λτ}]` on `[t0, t1]`.
fn linear_fit_residual(tr: &FrontTrace, l: C, t0: f64, t1: f64) -> f64 {
    let idx: Vec<usize> = (0..tr.len()).filter(|&i| tr.tau[i] >= t0 && tr.tau[i] <= t1).collect();
    let a = DMatrix::from_fn(idx.len(), 3, |r, k| {
        let e = (l * tr.tau[idx[r]]).exp();
        [1.0, e.re, -e.im][k]
    });
    let y = DVector::from_iterator(idx.len(), idx.iter().map(|&i| tr.s[i]));
    let x = a.clone().svd(true, true).solve(&y, 1e-14).unwrap();
    (a * x - &y).amax() / y.amax()
}

#[test]
fn unstable_front_follows_linear_mode() {
    let p = ModelParams::new(6.5, 0.02).unwrap();
    let lambda = leading_eigenvalue(&p).unwrap();
    assert!(lambda.re > 0.5);
    let mut c = SimConfig::new(p, 2.0, mode(1e-4));
    c.n_cells = 2500;
    c.dt = 0.01;
    let o = run(&c).unwrap();
    assert!(o.instability.is_none());
    let good = linear_fit_residual(&o.trace, lambda, 0.1, 2.0);
    let wrong = linear_fit_residual(&o.trace, C::new(0.5 * lambda.re, lambda.im), 0.1, 2.0);
    assert!(good < 0.02, "{good}");
    assert!(wrong > 5.0 * good, "{good} {wrong}");
}

#[test]
fn detector_on_synthetic_signals() {
    let w = 3f64.sqrt();
    let tr = synthetic(|t| 1e-3 * (-0.1 * t).exp() * (w * t).cos(), 40.0, 0.01);
    let o = detect_oscillation(&tr).unwrap();
    assert!((o.freq.unwrap() - w).abs() < 0.01 * w);
    assert!((o.rate.unwrap() + 0.1).abs() < 0.005);
    assert_eq!(o.verdict, Verdict::Decaying);

    let tr = synthetic(|t| 0.3 + 0.01 * t + 1e-4 * (0.05 * t).exp() * (2.0 * t).sin(), 40.0, 0.01);
    let o = detect_oscillation(&tr).unwrap();
    assert!((o.freq.unwrap() - 2.0).abs() < 0.02);
    assert_eq!(o.verdict, Verdict::Oscillating);

    let tr = synthetic(|t| 1e-4 * (0.3 * t).exp() * (1.5 * t).sin(), 30.0, 0.01);
    assert_eq!(detect_oscillation(&tr).unwrap().verdict, Verdict::Growing);

    let tr = synthetic(|_| 0.25, 10.0, 0.1);
    let o = detect_oscillation(&tr).unwrap();
    assert_eq!((o.verdict, o.freq, o.rate), (Verdict::Decaying, None, None));

    let tr = synthetic(|t| (0.2 * t).sin(), 10.0, 0.01);
    assert!(detect_oscillation(&tr).is_err());
}

#[test]
fn config_json_round_trip() {
    let p = ModelParams::new(4.0, 0.02).unwrap();
    let c = SimConfig::new(p, 3.0, bump(1e-3));
    let text = serde_json::to_string(&c).unwrap();
    let back: SimConfig = serde_json::from_str(&text).unwrap();
    assert_eq!(back, c);
    let bad = text.replacen("\"dt\"", "\"dtt\"", 1);
    assert!(serde_json::from_str::<SimConfig>(&bad).is_err());
}
