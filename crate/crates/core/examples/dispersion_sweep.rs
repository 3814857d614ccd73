// Energy and momentum of Gross–Pitaevskii waves at 25 speeds against the
// closed forms, and the black soliton energy as the `c → 0` limit.

use std::time::Instant;

use twave::dispersion::{sweep_dispersion, uniform_speeds, DispersionCurve};
use twave::nonlinearity::black_soliton_threshold;
use twave::waves::{gp_oracle, invariants_s_form, Branch};
use twave::Nonlinearity;

#[derive(Debug)]
pub struct SweepReport {
    pub curve: DispersionCurve,
    pub max_energy_rel_error: f64,
    pub max_momentum_rel_error: f64,
    pub seconds: f64,
    /// `4 ∫_0^1 √V(s^2) ds`.
    pub threshold: f64,
    /// Energy of the slowest wave of the limit sequence.
    pub slow_energy: f64,
    pub slow_speed: f64,
}

pub fn run_example() -> SweepReport {
    let gp = Nonlinearity::gp();
    let t = Instant::now();
    let curve = sweep_dispersion(&gp, &uniform_speeds(0.05, 1.35, 25)).expect("subsonic speeds");
    let seconds = t.elapsed().as_secs_f64();
    let mut max_e = 0.0f64;
    let mut max_p = 0.0f64;
    for s in &curve.samples {
        let exact = gp_oracle(s.c).expect("subsonic speed");
        max_e = max_e.max((s.energy / exact.energy() - 1.0).abs());
        max_p = max_p.max((s.momentum / exact.momentum() - 1.0).abs());
    }
    let threshold = black_soliton_threshold(&gp).expect("V > 0 below 1");
    let slow_speed = 1e-3;
    let (slow_energy, _) = invariants_s_form(&gp, slow_speed, Branch::Lower).expect("slow wave exists");
    SweepReport {
        curve,
        max_energy_rel_error: max_e,
        max_momentum_rel_error: max_p,
        seconds,
        threshold,
        slow_energy,
        slow_speed,
    }
}

#[allow(dead_code)]
fn main() {
    let r = run_example();
    println!("{} samples in {:.3} s", r.curve.samples.len(), r.seconds);
    println!("max relative error: energy {:.2e}, momentum {:.2e}", r.max_energy_rel_error, r.max_momentum_rel_error);
    println!(
        "black soliton energy {:.12} (4√2/3 = {:.12}); E(c = {}) = {:.12}",
        r.threshold,
        4.0 * 2f64.sqrt() / 3.0,
        r.slow_speed,
        r.slow_energy
    );
}
