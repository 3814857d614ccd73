use std::f64::consts::{FRAC_PI_2, TAU};

use twave::strip::minimize::default_x_max;
use twave::strip::{
    el_residual, energy_gl_2d, lambda_scan, minimize_at_momentum, mutual_bound_constants, symmetry_check, Field2D, Init,
    MinimizeOptions, ScanOptions, StripGrid,
};
use twave::waves::{build_profile, speed_for_momentum, Branch, ProfileGrid};
use twave::{builtin, Nonlinearity};

const P1: f64 = FRAC_PI_2 - 1.0;

fn gp_field(c: f64, grid: StripGrid, lam: f64) -> Field2D {
    let gp = Nonlinearity::gp();
    let prof = build_profile(&gp, c, Branch::Lower, ProfileGrid::default()).unwrap();
    Field2D::from_profile(&prof, grid, lam)
}

fn one_d() -> Init {
    Init::OneD {
        perturbation: 1e-3,
        phase: 0.0,
    }
}

#[test]
fn energy_examples() {
    let gp = Nonlinearity::gp();
    let grid = StripGrid::new(1025, 4, 20.0);
    assert_eq!(Field2D::uniform(grid, 1.0).energy(&gp), 0.0);
    assert_eq!(energy_gl_2d(&Field2D::uniform(grid, 1.0)), 0.0);

    let field = gp_field(1.0, grid, 1.0);
    let e = field.energy(&gp);
    assert!((e - 2.0 / 3.0).abs() < 1e-4, "{e}");
    for lam in [0.1, 7.0] {
        assert_eq!(field.clone().with_lambda(lam).energy(&gp), e);
    }
    assert_eq!(energy_gl_2d(&field), e);
}

#[test]
fn mutual_bounds_on_scaled_dips() {
    let m = builtin("example43").unwrap();
    let p0 = m.growth_p0.unwrap_or(1.0);
    let grid = StripGrid::new(401, 8, 10.0);
    let dip = |a: f64| {
        Field2D::from_fn(grid, 1.0, move |x, y| {
            let d = a * (1.0 + 0.3 * (TAU * y).cos()) / x.cosh().powi(2);
            (1.0 - d, 0.5 * a * x.tanh())
        })
    };
    let pairs = |amps: &[f64]| -> Vec<(f64, f64)> {
        amps.iter()
            .map(|&a| {
                let f = dip(a);
                (f.energy(&m), energy_gl_2d(&f))
            })
            .collect()
    };
    let fit = pairs(&[0.05, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7]);
    assert!(fit.iter().all(|(e, gl)| e.is_finite() && *e > 0.0 && *gl > 0.0));
    let (a, b) = mutual_bound_constants(&fit, p0).unwrap();
    for (e, gl) in fit {
        assert!(e <= a * gl + b * gl.powf(p0 + 1.0) + 1e-12);
    }
}

#[test]
fn large_period_minimizers_are_one_dimensional() {
    let gp = Nonlinearity::gp();
    let grid = StripGrid::new(257, 8, 20.0);
    let opts = MinimizeOptions::default();
    let reference = gp_field(1.0, grid, 2.0).energy(&gp);
    let from_1d = minimize_at_momentum(&gp, 2.0, P1, &one_d(), grid, &opts).unwrap();
    assert!(from_1d.converged);
    assert!((from_1d.energy - 2.0 / 3.0).abs() < 1e-3);
    assert!((from_1d.energy - reference).abs() < 1e-3);
    assert!(from_1d.two_dimensionality <= 1e-8, "{}", from_1d.two_dimensionality);
    assert!((from_1d.speed - 1.0).abs() < 1e-2, "{}", from_1d.speed);
    assert!(from_1d.max_constraint_violation <= 1e-8 * P1);
    assert!(from_1d.energy_history.windows(2).all(|w| w[1] <= w[0] + 1e-14));

    let blended = minimize_at_momentum(&gp, 2.0, P1, &Init::Blend { spread: 0.2 }, grid, &opts).unwrap();
    assert!((blended.energy - from_1d.energy).abs() < 1e-8, "{} vs {}", blended.energy, from_1d.energy);
    assert!(blended.two_dimensionality <= 1e-6);
    assert!(symmetry_check(&from_1d.field).defect <= 1e-6);
}

#[test]
fn short_period_minimizer_improves_on_the_wave() {
    let gp = Nonlinearity::gp();
    let c = speed_for_momentum(&gp, 1.0).unwrap();
    let mut opts = ScanOptions::new(StripGrid::new(257, 16, default_x_max(c)));
    opts.minimize.tol_e = 1e-12;
    opts.minimize.window = 100;
    let scan = lambda_scan(&gp, 1.0, &[0.07], &opts).unwrap();
    let e = &scan.entries[0];
    assert!(e.improved && !e.failed, "{e:?}");
    assert!(e.energy < scan.reference_discrete - scan.margin, "{} vs {}", e.energy, scan.reference_discrete);
    assert!(e.two_dimensionality > 0.01, "{}", e.two_dimensionality);
}

#[test]
fn energy_is_concave_in_momentum_at_fixed_period() {
    let gp = Nonlinearity::gp();
    let grid = StripGrid::new(257, 8, 20.0);
    let opts = MinimizeOptions::default();
    let energies: Vec<f64> = [0.4, 0.5, 0.6, 0.7, 0.8]
        .iter()
        .map(|&p| minimize_at_momentum(&gp, 2.0, p, &one_d(), grid, &opts).unwrap().energy)
        .collect();
    for w in energies.windows(3) {
        assert!(w[0] - 2.0 * w[1] + w[2] <= 1e-9, "{energies:?}");
    }
}

#[test]
fn scan_flat_regime() {
    let gp = Nonlinearity::gp();
    let mut opts = ScanOptions::new(StripGrid::new(129, 4, 20.0));
    opts.minimize.tol_e = 1e-12;
    let scan = lambda_scan(&gp, P1, &[1.5, 3.0], &opts).unwrap();
    for e in &scan.entries {
        assert!(!e.improved, "λ = {}", e.lambda);
        assert!((e.energy - scan.reference_discrete).abs() <= scan.margin, "λ = {}", e.lambda);
        assert!(e.two_dimensionality <= 1e-6);
    }
    assert!(scan.bracket.is_none());
    assert!(scan.note.as_deref().unwrap().starts_with("no reliable bracket"));
}

#[test]
fn scan_near_zero_momentum_has_no_bracket() {
    let gp = Nonlinearity::gp();
    let opts = ScanOptions::new(StripGrid::new(129, 4, 20.0));
    let scan = lambda_scan(&gp, 0.005, &[0.5, 1.0], &opts).unwrap();
    assert!(scan.reference < 0.01 && scan.margin < 1e-5);
    assert!(scan.bracket.is_none());
    assert!(scan.note.as_deref().unwrap().starts_with("no reliable bracket"), "{:?}", scan.note);
}

#[test]
fn el_residual_examples() {
    let gp = Nonlinearity::gp();
    let grid = StripGrid::new(257, 4, 20.0);
    let (max, l2) = el_residual(&Field2D::uniform(grid, 1.0), &gp, 0.7);
    assert_eq!((max, l2), (0.0, 0.0));

    let field = gp_field(1.0, grid, 1.0);
    let right = el_residual(&field, &gp, 1.0).0;
    let wrong = el_residual(&field, &gp, 1.2).0;
    assert!(wrong >= 10.0 * right, "{wrong} vs {right}");

    // Second order: halving h divides the residual of the minimizer by about 4.
    let opts = MinimizeOptions::default();
    let coarse = minimize_at_momentum(&gp, 2.0, P1, &one_d(), StripGrid::new(257, 4, 20.0), &opts).unwrap();
    let fine = minimize_at_momentum(&gp, 2.0, P1, &one_d(), StripGrid::new(513, 4, 20.0), &opts).unwrap();
    let ratio = coarse.el_residual / fine.el_residual;
    assert!((ratio - 4.0).abs() < 0.6, "ratio {ratio}");
}

#[test]
fn symmetry_examples() {
    let grid = StripGrid::new(201, 16, 10.0);
    let flat = gp_field(1.0, grid, 1.0);
    assert!(symmetry_check(&flat).defect < 1e-15);
    // Two dips of unequal widths placed at different heights: no reflection center.
    let skew = Field2D::from_fn(grid, 1.0, |x, y| {
        let w = 0.6 + 0.4 * (TAU * y).sin() + 0.2 * (2.0 * TAU * y).cos();
        (1.0 - 0.5 / (x / w).cosh().powi(2) - 0.2 * (TAU * (y - 0.1)).sin().powi(3) / x.cosh(), 0.0)
    });
    assert!(symmetry_check(&skew).defect > 0.01, "{}", symmetry_check(&skew).defect);
}
