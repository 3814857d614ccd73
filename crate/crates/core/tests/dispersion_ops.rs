use std::f64::consts::{FRAC_PI_2, PI, SQRT_2};

use twave::dispersion::{diagnostics, sweep_dispersion, test_function_energy, uniform_speeds, DispersionCurve, EnvelopeSource};
use twave::{builtin, Nonlinearity};

fn gp_curve(n: usize) -> DispersionCurve {
    sweep_dispersion(&Nonlinearity::gp(), &uniform_speeds(0.005, 1.41, n)).unwrap()
}

#[test]
fn gp_sweep_matches_closed_forms() {
    let curve = sweep_dispersion(&Nonlinearity::gp(), &uniform_speeds(0.05, 1.35, 25)).unwrap();
    assert_eq!(curve.samples.len(), 25);
    for s in &curve.samples {
        let r = (2.0 - s.c * s.c).sqrt();
        let e = 2.0 / 3.0 * r.powi(3);
        let p = 2.0 * (r / s.c).atan() - s.c * r;
        assert!((s.energy - e).abs() <= 1e-6 * e, "c = {}", s.c);
        assert!((s.momentum - p).abs() <= 1e-6 * p, "c = {}", s.c);
        assert!(s.energy >= 0.0 && s.p > 0.0 && s.p <= PI);
    }
    // p(c) strictly decreasing.
    assert!(curve.samples.windows(2).all(|w| w[1].p < w[0].p));
}

#[test]
fn cubic_contact_curve_has_a_gap_at_the_contact_speed() {
    let m = builtin("example43").unwrap();
    let speeds = [1.0, 1.1, 1.15, 1.2, 1.25, 1.3];
    let curve = sweep_dispersion(&m, &speeds).unwrap();
    let at = curve.samples.iter().find(|s| s.c == 1.2).unwrap();
    assert!(!at.is_wave(), "{at:?}");
    assert!(at.note.is_some());
    assert!(curve.transitions.iter().any(|&t| (t - 1.2).abs() < 0.06), "{:?}", curve.transitions);
    // Refinement adds samples next to c0, where the quadrature may give up.
    assert!(curve.samples.iter().filter(|s| (s.c - 1.2).abs() > 0.01).all(|s| s.is_wave()));
}

#[test]
fn gp_envelope_values() {
    let curve = gp_curve(400);
    assert_eq!(curve.emin1(0.0).unwrap(), 0.0);
    let e = curve.emin1(FRAC_PI_2 - 1.0).unwrap();
    assert!((e - 2.0 / 3.0).abs() < 1e-6, "{e}");
    let (left, right) = curve.slopes(FRAC_PI_2 - 1.0, 1e-3).unwrap();
    assert!((left - 1.0).abs() < 1e-2 && (right - 1.0).abs() < 1e-2, "{left} {right}");
    // Slope √2 at the origin: E/p increases towards √2 as p decreases.
    let ratios: Vec<f64> = [0.1, 1e-2, 1e-3].iter().map(|&p| curve.emin1(p).unwrap() / p).collect();
    assert!(ratios.windows(2).all(|w| w[1] > w[0]), "{ratios:?}");
    assert!(ratios.iter().all(|&r| r < SQRT_2));
    assert!(SQRT_2 - ratios[2] < 5e-3, "{ratios:?}");
    // Evenness and periodicity.
    for p in [0.3, 1.0, 2.5] {
        let e = curve.emin1(p).unwrap();
        assert_eq!(curve.emin1(-p).unwrap(), e);
        assert!((curve.emin1(p + 2.0 * PI).unwrap() - e).abs() < 1e-12);
    }
}

#[test]
fn gp_diagnostics() {
    let curve = gp_curve(400);
    let d = diagnostics(&curve, 512).unwrap();
    assert!(d.concave, "worst {}", d.worst_concavity);
    assert!(d.lipschitz_constant <= SQRT_2 + 1e-3);
    assert!(d.subsonic_gap > 0.0);
    assert!(d.cusp_points.iter().all(|k| k.p >= PI - 1e-9), "{:?}", d.cusp_points);
    assert!(d.two_speed_points.is_empty());
    assert!(d.slope_speed_error.unwrap() <= 1e-3);
    let threshold = d.threshold.unwrap();
    for row in curve.envelope_grid(128).unwrap() {
        assert!(row.emin1 >= 0.0);
        assert!(row.emin1 <= (SQRT_2 * row.p).min(threshold) + 1e-12);
        if row.p >= 0.05 {
            assert!(row.emin1 < SQRT_2 * row.p);
        }
    }
    // The envelope lies below every sample.
    for s in curve.waves() {
        assert!(curve.emin1(s.p).unwrap() <= s.energy + 1e-9, "c = {}", s.c);
    }
}

#[test]
fn cusp_at_pi_for_example55() {
    let m = builtin("example55").unwrap();
    let curve = sweep_dispersion(&m, &uniform_speeds(0.005, 1.41, 400)).unwrap();
    let d = diagnostics(&curve, 512).unwrap();
    let at_pi = d.cusp_points.iter().find(|k| (k.p - PI).abs() < 1e-9).expect("cusp at π");
    assert!(at_pi.slope_left > 0.0 && at_pi.gap() > 0.02 * SQRT_2, "{at_pi:?}");
}

#[test]
fn two_speeds_for_example56() {
    let m = builtin("example56").unwrap();
    let curve = sweep_dispersion(&m, &uniform_speeds(0.005, 1.41, 400)).unwrap();
    let d = diagnostics(&curve, 512).unwrap();
    let t = d.two_speed_points.first().expect("a two-speed momentum");
    assert!(t.c1 < t.c2);
    assert!(t.slope_left > t.slope_right);
    let speeds = curve.attained_speeds(t.p, 1e-6).unwrap();
    assert!(speeds.len() >= 2, "{speeds:?}");
}

#[test]
fn envelope_flags_sources() {
    let curve = gp_curve(100);
    let rows = curve.envelope_grid(16).unwrap();
    assert_eq!(rows[0].source, EnvelopeSource::Origin);
    assert!(rows[1..].iter().all(|r| r.source != EnvelopeSource::Origin));
}

#[test]
fn test_function_examples() {
    let gp = Nonlinearity::gp();
    let t = test_function_energy(&gp, 0.3, 400.0).unwrap();
    assert!((t.momentum - 0.3).abs() < 1e-10);
    assert!(t.energy <= SQRT_2 * 0.3 * 1.05);
    // Kinetic part tends to p/√2 as λ grows.
    let errs: Vec<f64> = [50.0, 200.0, 800.0]
        .iter()
        .map(|&lam| (test_function_energy(&gp, 0.3, lam).unwrap().kinetic - 0.3 / SQRT_2).abs())
        .collect();
    assert!(errs[2] < errs[1] && errs[1] < errs[0], "{errs:?}");
    assert!(errs[2] < 1e-3);
    let z = test_function_energy(&gp, 0.0, 10.0).unwrap();
    assert_eq!((z.momentum, z.energy), (0.0, 0.0));
}
