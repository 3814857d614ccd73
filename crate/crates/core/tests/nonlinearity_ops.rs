use std::f64::consts::SQRT_2;

use twave::assumptions::{check_assumptions, AssumptionId, SampleGrid, Verdict};
use twave::jet::Jet;
use twave::nonlinearity::{black_soliton_threshold, discriminant_g, potential_h};
use twave::{builtin, builtin_models, Nonlinearity};

// Composite Simpson rule on [a, b] with n (even) panels, for oracles.
fn simpson(f: impl Fn(f64) -> f64, a: f64, b: f64, n: usize) -> f64 {
    let h = (b - a) / n as f64;
    let mut s = f(a) + f(b);
    for k in 1..n {
        s += f(a + k as f64 * h) * if k % 2 == 1 { 4.0 } else { 2.0 };
    }
    s * h / 3.0
}

#[test]
fn gp_pointwise_values() {
    let gp = Nonlinearity::gp();
    assert!((gp.f(0.5) - 0.5).abs() < 1e-15);
    assert!((gp.v(0.5) - 0.125).abs() < 1e-15);
    assert_eq!(gp.f(1.0), 0.0);
    assert!((gp.f_prime(1.0) + 1.0).abs() < 1e-15);
}

#[test]
fn cubic_contact_has_triple_root_at_contact_speed() {
    let m = builtin("example43").unwrap();
    let g = m.g_jet(0.3, 1.2);
    assert!(g.v.abs() < 1e-12, "g(s0, c0) = {}", g.v);
    assert!(g.d1.abs() < 1e-12, "dg/ds(s0, c0) = {}", g.d1);
    assert!(g.d2.abs() < 1e-10, "d2g/ds2(s0, c0) = {}", g.d2);
}

#[test]
fn primitive_h_examples() {
    let gp = Nonlinearity::gp();
    assert!(potential_h(&gp, 1.0).unwrap().abs() < 1e-15);
    // √V(τ^2) = |τ^2 - 1|/√2, antiderivative of (τ^2 - 1)/√2 is (τ^3/3 - τ)/√2.
    let anti = |t: f64| (t * t * t / 3.0 - t) / SQRT_2;
    let h2 = potential_h(&gp, 2.0).unwrap();
    assert!((h2 - (anti(2.0) - anti(1.0))).abs() < 1e-10);
    assert!((h2 - 4.0 / 3.0 / SQRT_2).abs() < 1e-6);
    let h0 = potential_h(&gp, 0.0).unwrap();
    assert!((h0 + (anti(0.0) - anti(1.0))).abs() < 1e-10);
    assert!((h0 + 2.0 / 3.0 / SQRT_2).abs() < 1e-6);
    // Sign convention: H <= 0 below 1, >= 0 above, monotone on each side.
    let mut prev = f64::NEG_INFINITY;
    for k in 0..=40 {
        let s = 0.1 * k as f64;
        let h = potential_h(&gp, s).unwrap();
        assert!(h >= prev - 1e-14);
        assert!(if s < 1.0 { h <= 0.0 } else { h >= 0.0 });
        prev = h;
    }
}

#[test]
fn discriminant_examples() {
    let gp = Nonlinearity::gp();
    assert!(discriminant_g(&gp, 0.5, 1.0).abs() < 1e-15);
    assert!((discriminant_g(&gp, 0.0, 1.0) + 1.0).abs() < 1e-15);
    for m in builtin_models() {
        for c in [0.0, 0.3, 1.0, 1.41] {
            assert!(discriminant_g(&m, 1.0, c).abs() <= 1e-14, "{} c = {c}", m.name);
        }
    }
}

#[test]
fn gp_passes_all_assumptions_with_expected_witnesses() {
    let gp = Nonlinearity::gp();
    let r = check_assumptions(&gp, SampleGrid::for_model(&gp)).unwrap();
    assert!(r.all_pass(), "{r:?}");
    let p0 = r.get(AssumptionId::A2).witness("p0").unwrap();
    assert!((p0 - 1.0).abs() < 0.1, "p0 = {p0}");
    let b2 = r.get(AssumptionId::B2);
    assert_eq!(b2.witness("gamma"), Some(1.0));
    assert_eq!(b2.witness("s0"), Some(6.0));
    // ½(1-s)^2 >= s holds from 2 + √3 on, so the witness is valid.
    assert!((0..=200).map(|k| 6.0 + 0.1 * k as f64).all(|s| gp.v(s) >= s));
}

#[test]
fn builtins_pass_normalization_and_b1() {
    for m in builtin_models() {
        let r = check_assumptions(&m, SampleGrid::for_model(&m)).unwrap();
        assert_eq!(r.get(AssumptionId::A1).verdict, Verdict::Pass, "{}", m.name);
        assert_eq!(r.get(AssumptionId::B1).verdict, Verdict::Pass, "{}", m.name);
    }
}

#[test]
fn exponentially_damped_potential_fails_b1() {
    let m = Nonlinearity::from_potential("damped", |s: Jet| 0.5 * (1.0 - s).powi(2) * (-s).exp());
    let r = check_assumptions(&m, SampleGrid { s_max: 40.0, n: 2001 }).unwrap();
    assert_eq!(r.get(AssumptionId::B1).verdict, Verdict::Fail, "{:?}", r.get(AssumptionId::B1));
    // Oracle: H(∞) is finite, the tail beyond 40 is negligible.
    let h_far = simpson(|t| m.v(t * t).sqrt(), 1.0, 12.0, 20_000);
    let h40 = potential_h(&m, 40.0).unwrap();
    assert!((h40 - h_far).abs() < 1e-8, "H(40) = {h40}, H(12) = {h_far}");
}

#[test]
fn black_soliton_threshold_examples() {
    let gp = Nonlinearity::gp();
    let t = black_soliton_threshold(&gp).unwrap();
    assert!((t - 4.0 * SQRT_2 / 3.0).abs() < 1e-10);

    // GP scaled by 4 near 0, blended back to GP by a smooth weight.
    let w = |s: Jet| (s * (-1.0 / 0.05)).exp();
    let scaled = Nonlinearity::from_potential("scaled", move |s: Jet| 0.5 * (1.0 - s).powi(2) * (1.0 + 3.0 * w(s)));
    let oracle = 4.0 * simpson(|t| scaled.v(t * t).sqrt(), 0.0, 1.0, 200_000);
    let got = black_soliton_threshold(&scaled).unwrap();
    assert!((got - oracle).abs() < 1e-9, "{got} vs {oracle}");
    // Near 0 the integrand is doubled.
    assert!((scaled.v(0.0).sqrt() - 2.0 * gp.v(0.0).sqrt()).abs() < 1e-14);
    assert!(got > t);
    for m in builtin_models() {
        assert!(black_soliton_threshold(&m).unwrap() >= 0.0);
    }
}
