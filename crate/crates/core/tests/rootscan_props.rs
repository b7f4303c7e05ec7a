use flamefront::hurwitz::{p7_coeffs, rational_from_f64};
use flamefront::rootscan::{
    count_roots, count_roots_with, refine_root, scan, CountOptions, Dispersion, DispersionEps,
    LimitDispersion, Rect, RootSet, SEPARATION_TOL,
};
use flamefront::spectral::{dispersion_scale, limit_roots};
use flamefront::ModelParams;
use num_complex::Complex64 as C;

fn default_rect() -> Rect {
    Rect::new(-3.0, 1.0, -3.0, 3.0).unwrap()
}

fn check_invariants(rs: &RootSet) {
    let p = &rs.params;
    for r in &rs.roots {
        assert!(r.residual < 1e-9 * dispersion_scale(r.z, p).unwrap(), "{r:?}");
        if r.z.im != 0.0 {
            assert!(rs.roots.iter().any(|s| (s.z - r.z.conj()).norm() < 1e-10 * (1.0 + r.z.norm())));
        }
    }
    for (i, a) in rs.roots.iter().enumerate() {
        for b in &rs.roots[i + 1..] {
            assert!((a.z - b.z).norm() >= SEPARATION_TOL * (1.0 + a.z.norm()));
        }
    }
    let z = rs.zero_eigenvalue.expect("λ = 0 reported");
    assert!(z.z.norm() < 1e-8);
}

fn upper_root(rs: &RootSet) -> C {
    let ups: Vec<C> = rs.roots.iter().map(|r| r.z).filter(|z| z.im > 0.0).collect();
    assert_eq!(ups.len(), 1, "{:?}", rs.roots);
    ups[0]
}

#[test]
fn stable_regime() {
    let p = ModelParams::new(4.0, 0.01).unwrap();
    let rs = scan(&p, &default_rect()).unwrap();
    check_invariants(&rs);
    assert_eq!(rs.roots.len(), 2);
    let z = upper_root(&rs);
    // O(ε) drift from the limit pair −1 ± i, with a constant near 11
    assert!(z.re < 0.0 && (z - C::new(-1.0, 1.0)).norm() < 15.0 * 0.01, "{z}");
}

#[test]
fn unstable_regime() {
    let p = ModelParams::new(7.0, 0.01).unwrap();
    let rs = scan(&p, &Rect::new(-3.0, 3.0, -3.0, 3.0).unwrap()).unwrap();
    check_invariants(&rs);
    let z = upper_root(&rs);
    let lim = C::new(7.0 / 8.0, 5.0 / 8.0 * 7f64.sqrt());
    assert!(z.re > 0.0 && (z - lim).norm() < 0.6, "{z}");
}

#[test]
fn near_hopf() {
    let p = ModelParams::new(6.0, 0.01).unwrap();
    let rs = scan(&p, &default_rect()).unwrap();
    check_invariants(&rs);
    let z = upper_root(&rs);
    assert!((z - C::new(0.0, 3f64.sqrt())).norm() < 40.0 * 0.01);
}

#[test]
fn roots_are_p7_roots() {
    for (m, e) in [(4.0, 0.01), (7.0, 0.01), (5.0, 0.05), (6.5, 0.02)] {
        let p = ModelParams::new(m, e).unwrap();
        let poly = p7_coeffs(&rational_from_f64(m).unwrap(), &rational_from_f64(e).unwrap()).unwrap();
        let rs = scan(&p, &Rect::new(-3.0, 3.0, -3.0, 3.0).unwrap()).unwrap();
        for r in &rs.roots {
            assert!(poly.relative_residual(r.z) < 1e-8, "({m}, {e}) {}", r.z);
        }
    }
}

#[test]
fn count_stable_under_refinement() {
    let f = Dispersion(ModelParams::new(4.0, 0.02).unwrap());
    let rects = [
        Rect::new(-2.0, 1.0, 0.1, 3.0).unwrap(),
        Rect::new(-0.2, 1.0, -0.5, 0.5).unwrap(),
        Rect::new(-3.0, 3.0, -3.0, -0.01).unwrap(),
    ];
    for r in &rects {
        let a = count_roots_with(&f, r, CountOptions { samples_per_edge: 16, ..Default::default() })
            .unwrap();
        let b = count_roots_with(&f, r, CountOptions { samples_per_edge: 32, ..Default::default() })
            .unwrap();
        let c = count_roots_with(&f, r, CountOptions { samples_per_edge: 64, ..Default::default() })
            .unwrap();
        assert_eq!(a, b);
        assert_eq!(b, c);
    }
}

#[test]
fn convergence_to_limit_roots() {
    for m in [4.0, 7.0] {
        let lim = limit_roots(m).unwrap()[1];
        let errs: Vec<f64> = [1e-2, 1e-3, 1e-4]
            .iter()
            .map(|&e| {
                let z = refine_root(&DispersionEps { m, epsilon: e }, lim).unwrap().root;
                (z - lim).norm()
            })
            .collect();
        for w in errs.windows(2) {
            let order = (w[0] / w[1]).log10();
            assert!(order >= 0.9, "m = {m}: {errs:?}");
        }
    }
}

#[test]
fn refine_near_hopf_limit() {
    let s3 = C::new(0.0, 3f64.sqrt());
    let r = refine_root(&DispersionEps { m: 6.0, epsilon: 1e-3 }, s3).unwrap();
    let d = (r.root - s3).norm();
    // the root moves like √3 i + ε·(31.5 + …), so the O(ε) constant is about 32
    assert!(d <= 40.0 * 1e-3 && d > 10.0 * 1e-3, "{d}");
    // quadratic convergence: each residual at most a fixed multiple of the square of the previous
    let t = &r.trace;
    assert!(t.len() >= 3);
    let k = t.len() - 2;
    assert!(t[k] < 1e-3 * t[k - 1] || t[k] < 1e-10);
}

#[test]
fn limit_scan_matches_closed_form() {
    let p = ModelParams::new(4.0, 0.0).unwrap();
    let rs = scan(&p, &default_rect()).unwrap();
    assert_eq!(rs.roots.len(), 2);
    let z = upper_root(&rs);
    assert!((z - C::new(-1.0, 1.0)).norm() < 1e-12);
    assert_eq!(count_roots(&LimitDispersion(4.0), &Rect::new(-2.0, -0.5, 0.5, 1.5).unwrap()).unwrap(), 1);
}

#[test]
fn asymmetric_rectangle_still_conjugate_closed() {
    let p = ModelParams::new(4.0, 0.01).unwrap();
    let rs = scan(&p, &Rect::new(-2.0, 1.0, 0.5, 2.0).unwrap()).unwrap();
    assert_eq!(rs.roots.len(), 2);
    assert!(rs.zero_eigenvalue.is_none());
    assert!((rs.roots[0].z - rs.roots[1].z.conj()).norm() < 1e-14);
}
