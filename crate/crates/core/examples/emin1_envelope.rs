// Minimal 1D energy `E¹_min(p)` for three models: concave and subsonic
// for Gross–Pitaevskii, a cusp at `p = π` for the plateau model and a
// momentum reached by two speeds for the two-speed model.

use std::f64::consts::{FRAC_PI_2, PI};

use twave::builtin;
use twave::dispersion::{diagnostics, sweep_dispersion, uniform_speeds, CurveDiagnostics, DispersionCurve};

#[derive(Debug)]
pub struct EnvelopeReport {
    pub name: &'static str,
    pub curve: DispersionCurve,
    pub diagnostics: CurveDiagnostics,
}

pub fn run_example() -> Vec<EnvelopeReport> {
    let speeds = uniform_speeds(0.005, 1.41, 400);
    ["gp", "example55", "example56"]
        .into_iter()
        .map(|name| {
            let model = builtin(name).expect("builtin");
            let curve = sweep_dispersion(&model, &speeds).expect("speeds in (0, √2)");
            let diagnostics = diagnostics(&curve, 512).expect("enough waves");
            EnvelopeReport { name, curve, diagnostics }
        })
        .collect()
}

#[allow(dead_code)]
fn main() {
    for r in run_example() {
        let d = &r.diagnostics;
        println!(
            "{:<10} concave={} (worst {:.1e}) lipschitz={:.6} subsonic gap={:.2e}",
            r.name, d.concave, d.worst_concavity, d.lipschitz_constant, d.subsonic_gap
        );
        if r.name == "gp" {
            let p = FRAC_PI_2 - 1.0;
            println!("  emin1(π/2 - 1) = {:.10} (2/3 exactly)", r.curve.emin1(p).unwrap());
        }
        for k in &d.cusp_points {
            let at = if (k.p - PI).abs() < 1e-9 { " (at π)" } else { "" };
            println!("  kink p = {:.6}{at}: slopes {:.4} | {:.4}", k.p, k.slope_left, k.slope_right);
        }
        for t in &d.two_speed_points {
            println!(
                "  two speeds at p = {:.6}: c = {:.4} and {:.4}, slopes {:.4} | {:.4}",
                t.p, t.c1, t.c2, t.slope_left, t.slope_right
            );
        }
    }
}
