// Scan in `λ` at momentum `p = 1` for Gross–Pitaevskii: below a critical
// period the strip minimizer depends on `y` and beats the 1D wave.

use twave::builtin;
use twave::config::GridSpec;
use twave::strip::minimize::default_x_max;
use twave::strip::{lambda_scan, LambdaScan, ScanOptions, StripGrid};
use twave::waves::speed_for_momentum;

pub fn scan(p: f64, nx: usize, ny: usize, lambdas: &[f64]) -> LambdaScan {
    let gp = builtin("gp").expect("builtin");
    let c = speed_for_momentum(&gp, p).expect("momentum in (0, π)");
    let mut opts = ScanOptions::new(StripGrid::new(nx, ny, default_x_max(c)));
    opts.minimize.tol_e = 1e-12;
    opts.minimize.window = 100;
    lambda_scan(&gp, p, lambdas, &opts).expect("valid scan")
}

pub fn run_example() -> LambdaScan {
    let lambdas = GridSpec::parse("0.05:0.15:linear:11").expect("valid grid").points();
    scan(1.0, 513, 32, &lambdas)
}

#[allow(dead_code)]
fn main() {
    let s = run_example();
    println!(
        "p = {}: 1D energy {:.8}, on this grid {:.8}, margin {:.1e}",
        s.p, s.reference, s.reference_discrete, s.margin
    );
    for e in &s.entries {
        if e.failed {
            println!("λ = {:.5}  no minimizer ({})", e.lambda, e.failures.join("; "));
        } else {
            println!(
                "λ = {:.5}  E = {:.8}  2D = {:.2e}  improved = {:<5}  start = {}",
                e.lambda, e.energy, e.two_dimensionality, e.improved, e.init
            );
        }
    }
    match (s.bracket, s.lambda_s_estimate) {
        (Some((lo, hi)), Some(est)) => println!("critical period in ({lo:.5}, {hi:.5}), estimate {est:.5}"),
        _ => println!("{}", s.note.as_deref().unwrap_or("no bracket")),
    }
}
