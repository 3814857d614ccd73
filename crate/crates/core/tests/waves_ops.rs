use std::f64::consts::{FRAC_PI_2, PI, SQRT_2};

use twave::waves::{
    build_profile, decay_rate, first_integral_residual, gp_oracle, primitive_g, speed_for_momentum, turning_point,
    wave_invariants, Branch, ProfileGrid,
};
use twave::{builtin, Nonlinearity, TwaveError};

fn gp_energy(c: f64) -> f64 {
    2.0 / 3.0 * (2.0 - c * c).powf(1.5)
}

fn gp_momentum(c: f64) -> f64 {
    let r = (2.0 - c * c).sqrt();
    2.0 * (r / c).atan() - c * r
}

#[test]
fn gp_turning_points() {
    let gp = Nonlinearity::gp();
    let tp = turning_point(&gp, 1.0, Branch::Lower).unwrap();
    assert!((tp.zeta - 0.5).abs() < 1e-12);
    assert!(tp.finite);
    let tp = turning_point(&gp, 0.0, Branch::Lower).unwrap();
    assert!(tp.zeta.abs() < 1e-12);
    assert!(tp.finite);
    // g(s, 0) = 2s(1 - s)^2 has slope 2 at the origin.
    assert!((tp.derivative_g - 2.0).abs() < 1e-9, "{}", tp.derivative_g);
}

#[test]
fn degenerate_contact_is_undecidable() {
    let m = builtin("example43").unwrap();
    let err = turning_point(&m, 1.2, Branch::Lower).unwrap_err();
    assert!(matches!(err, TwaveError::UndecidableFiniteness { .. }), "{err:?}");
    assert_eq!(err.exit_code(), 4);
}

#[test]
fn primitive_matches_closed_form() {
    let gp = Nonlinearity::gp();
    let c: f64 = 1.0;
    let r = (2.0 - c * c).sqrt();
    let closed = |s: f64| {
        let q = (2.0 * s - c * c).sqrt();
        ((r + q) / (r - q)).abs().ln() / r
    };
    let anchor = 0.5 * (0.5 + 1.0);
    assert!(primitive_g(&gp, c, anchor).unwrap().abs() < 1e-15);
    for s in [0.55, 0.6, 0.9, 0.99] {
        let got = primitive_g(&gp, c, s).unwrap();
        let want = closed(s) - closed(anchor);
        assert!((got - want).abs() < 1e-8, "s = {s}: {got} vs {want}");
    }
    // Near s = 1 the primitive grows like -ln(1 - s)/√(2 - c^2).
    let (s1, s2) = (1.0 - 1e-6, 1.0 - 1e-10);
    let rate = (primitive_g(&gp, c, s2).unwrap() - primitive_g(&gp, c, s1).unwrap()) / ((1e-6f64).ln() - (1e-10f64).ln());
    assert!((rate * r - 1.0).abs() < 0.02, "rate {rate}");
    assert!(primitive_g(&gp, c, 0.4).is_err());
    assert!(primitive_g(&gp, c, 1.0).is_err());
}

#[test]
fn gp_profile_values() {
    let gp = Nonlinearity::gp();
    let grid = ProfileGrid {
        x_max: Some(30.0),
        n_points: 8001,
    };
    let prof = build_profile(&gp, 1.0, Branch::Lower, grid).unwrap();
    let mid = prof.x.len() / 2;
    assert_eq!(prof.x[mid], 0.0);
    assert!((prof.rho[mid] - 0.5).abs() < 1e-12);
    let (rho2, _) = prof.sample(2.0);
    let want = 0.5 + 0.5 * 1f64.tanh().powi(2);
    assert!((rho2 - want).abs() < 1e-9, "{rho2} vs {want}");
    assert!((want - 0.790014).abs() < 2e-6);
    let jump = prof.theta.last().unwrap() - prof.theta[0];
    assert!((jump - FRAC_PI_2).abs() < 1e-9, "θ jump {jump}");
    assert!(first_integral_residual(&gp, &prof) < 1e-6);
    let rate = decay_rate(&prof).unwrap();
    assert!((rate - 1.0).abs() < 0.02, "decay rate {rate}");
}

#[test]
fn black_soliton_profile() {
    let gp = Nonlinearity::gp();
    let prof = build_profile(&gp, 0.0, Branch::Lower, ProfileGrid::default()).unwrap();
    for (x, r) in prof.x.iter().zip(&prof.rho).step_by(97) {
        let want = (x / SQRT_2).tanh().powi(2);
        assert!((r - want).abs() < 1e-8, "x = {x}: {r} vs {want}");
    }
    let inv = wave_invariants(&gp, &prof).unwrap();
    assert!((inv.energy - 4.0 * SQRT_2 / 3.0).abs() < 1e-8);
    assert!((inv.momentum_class.abs() - PI).abs() < 1e-12);
}

#[test]
fn gp_invariants() {
    let gp = Nonlinearity::gp();
    for c in [1.0, 1.4] {
        let prof = build_profile(&gp, c, Branch::Lower, ProfileGrid::default()).unwrap();
        let inv = wave_invariants(&gp, &prof).unwrap();
        assert!((inv.energy - gp_energy(c)).abs() < 1e-8 * gp_energy(c).max(1.0), "c = {c}");
        assert!((inv.momentum_valuation - gp_momentum(c)).abs() < 1e-8, "c = {c}");
        assert!((inv.kinetic - inv.potential).abs() < 1e-6 * inv.energy.max(1e-3));
    }
    assert!((gp_energy(1.0) - 2.0 / 3.0).abs() < 1e-15);
    assert!((gp_momentum(1.0) - (FRAC_PI_2 - 1.0)).abs() < 1e-15);
    assert!((gp_energy(1.4) - 0.005333).abs() < 1e-6);
    assert!(gp_momentum(1.4) < 0.004);
}

#[test]
fn gp_oracle_limits() {
    let o = gp_oracle(1.0).unwrap();
    assert!((o.energy() - 2.0 / 3.0).abs() < 1e-15);
    assert!((o.momentum() - (FRAC_PI_2 - 1.0)).abs() < 1e-15);
    assert!((o.rho(0.0) - 0.5).abs() < 1e-15);
    let o = gp_oracle(1e-7).unwrap();
    assert!((o.energy() - 4.0 * SQRT_2 / 3.0).abs() < 1e-6);
    assert!((o.momentum() - PI).abs() < 1e-6);
    assert!(gp_oracle(1.5).is_err());
}

#[test]
fn speed_for_momentum_inverts_the_curve() {
    let gp = Nonlinearity::gp();
    let c = speed_for_momentum(&gp, FRAC_PI_2 - 1.0).unwrap();
    assert!((c - 1.0).abs() < 1e-8, "{c}");
}
