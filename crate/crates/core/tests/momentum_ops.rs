use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI, TAU};

use num_complex::Complex64;
use twave::momentum::{abs_class, class_of, momentum_compact_support, momentum_lifted_1d, momentum_lifted_2d};
use twave::strip::{Field2D, StripGrid};
use twave::waves::{build_profile, Branch, ProfileGrid, WaveProfile1D};
use twave::{Nonlinearity, TwaveError};

fn gp_profile(x_max: f64, n: usize) -> WaveProfile1D {
    let grid = ProfileGrid {
        x_max: Some(x_max),
        n_points: n,
    };
    build_profile(&Nonlinearity::gp(), 1.0, Branch::Lower, grid).unwrap()
}

fn modulus(p: &WaveProfile1D) -> Vec<f64> {
    p.rho.iter().map(|r| r.sqrt()).collect()
}

// C^1 step from 0 to 1 on [a, b].
fn ramp(x: f64, a: f64, b: f64) -> f64 {
    let t = ((x - a) / (b - a)).clamp(0.0, 1.0);
    0.5 * (1.0 - (PI * t).cos())
}

#[test]
fn class_examples() {
    assert!((class_of(1.5 * PI + TAU).canonical() - 1.5 * PI).abs() < 1e-12);
    assert!((class_of(-0.3).canonical() - (TAU - 0.3)).abs() < 1e-15);
    assert_eq!(class_of(PI).canonical(), PI);
    assert!((abs_class(class_of(1.5 * PI)) - FRAC_PI_2).abs() < 1e-15);
    assert_eq!(abs_class(class_of(PI)), PI);
    assert_eq!(abs_class(class_of(0.0)), 0.0);
}

#[test]
fn lifted_1d_examples() {
    let prof = gp_profile(30.0, 8001);
    let p = momentum_lifted_1d(&modulus(&prof), &prof.theta, &prof.x).unwrap();
    assert!((p - (FRAC_PI_2 - 1.0)).abs() < 1e-6, "{p}");

    let x: Vec<f64> = (0..201).map(|i| -10.0 + 0.1 * i as f64).collect();
    let ones = vec![1.0; x.len()];
    assert_eq!(momentum_lifted_1d(&ones, &vec![0.0; x.len()], &x).unwrap(), 0.0);
    let ramp_theta: Vec<f64> = x.iter().map(|&t| 3.0 * t + (t * 0.7).sin()).collect();
    assert_eq!(momentum_lifted_1d(&ones, &ramp_theta, &x).unwrap(), 0.0);

    let mut dip = ones.clone();
    dip[100] = 0.0;
    assert!(matches!(
        momentum_lifted_1d(&dip, &ramp_theta, &x),
        Err(TwaveError::LiftingUnavailable { .. })
    ));
}

#[test]
fn lifted_2d_examples() {
    let prof = gp_profile(30.0, 8001);
    let grid = StripGrid::new(2001, 4, 30.0);
    let field = Field2D::from_profile(&prof, grid, 1.3);
    let p = momentum_lifted_2d(&field).unwrap();
    let err = (p - (FRAC_PI_2 - 1.0)).abs();
    assert!(err < 1e-4, "{p}");
    // The link form is second order in dx.
    let fine = momentum_lifted_2d(&Field2D::from_profile(&prof, StripGrid::new(4001, 4, 30.0), 1.3)).unwrap();
    let ratio = err / (fine - (FRAC_PI_2 - 1.0)).abs();
    assert!((ratio - 4.0).abs() < 0.5, "ratio {ratio}");

    let mut rotated = field.clone();
    rotated.theta.iter_mut().for_each(|t| *t += 0.9);
    assert!((momentum_lifted_2d(&rotated).unwrap() - p).abs() < 1e-13);

    assert_eq!(momentum_lifted_2d(&Field2D::uniform(grid, 1.0)).unwrap(), 0.0);
}

#[test]
fn compact_support_examples() {
    let x: Vec<f64> = (0..801).map(|i| -20.0 + 0.05 * i as f64).collect();
    let ones = vec![Complex64::new(1.0, 0.0); x.len()];
    assert_eq!(momentum_compact_support(&ones, &x, None).unwrap(), 0.0);

    // |ψ| = 1 with a full turn of phase on [-5, 5].
    let turn: Vec<Complex64> = x.iter().map(|&t| Complex64::from_polar(1.0, TAU * ramp(t, -5.0, 5.0))).collect();
    let q = momentum_compact_support(&turn, &x, None).unwrap();
    assert!((q + TAU).abs() < 1e-6, "{q}");
    assert!(abs_class(class_of(q)) < 1e-6);

    let mut shifted = ones.clone();
    shifted[0] = Complex64::new(0.0, 1.0);
    assert!(matches!(
        momentum_compact_support(&shifted, &x, None),
        Err(TwaveError::BoundaryNotNormalized { .. })
    ));
}

#[test]
fn gauge_fixed_dip_agrees_with_the_lifted_class() {
    let prof = gp_profile(40.0, 16001);
    let rho = modulus(&prof);
    // The phase runs from -π/4 to π/4; unwind it in buffers far from the core.
    let gauge = |x: f64| FRAC_PI_4 * (ramp(x, -30.0, -20.0) + ramp(x, 20.0, 30.0)) - FRAC_PI_4;
    let theta: Vec<f64> = prof.x.iter().zip(&prof.theta).map(|(&x, &t)| t - gauge(x)).collect();
    let psi: Vec<Complex64> = rho.iter().zip(&theta).map(|(&r, &t)| Complex64::from_polar(r, t)).collect();
    let compact = momentum_compact_support(&psi, &prof.x, None).unwrap();
    let lifted = momentum_lifted_1d(&rho, &theta, &prof.x).unwrap();
    assert!(class_of(compact).distance(class_of(lifted)) < 1e-6, "{compact} vs {lifted}");
    assert!(class_of(compact).distance(class_of(FRAC_PI_2 - 1.0)) < 1e-6);
}

#[test]
fn two_dimensional_representations_agree() {
    let grid = StripGrid::new(801, 8, 20.0);
    let field = Field2D::from_fn(grid, 1.0, |x, y| {
        let core = (-(x * x)).exp();
        let r = 1.0 - 0.3 * core * (1.0 + 0.2 * (TAU * y).cos());
        (r, 0.4 * (ramp(x, -3.0, 3.0) - 0.5) * (1.0 - ramp(x.abs(), 8.0, 12.0)))
    });
    let x: Vec<f64> = (0..grid.nx).map(|i| grid.x(i)).collect();
    let lifted = momentum_lifted_2d(&field).unwrap();
    let compact = momentum_compact_support(&field.psi(), &x, Some(grid.ny)).unwrap();
    assert!(class_of(compact).distance(class_of(lifted)) < 1e-4, "{compact} vs {lifted}");
}
