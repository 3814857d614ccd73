// Gross–Pitaevskii dark solitons built by quadrature and compared with the
// closed forms.

use twave::waves::{
    build_profile, decay_rate, first_integral_residual, gp_oracle, wave_invariants, Branch, ProfileGrid,
};
use twave::Nonlinearity;

#[derive(Debug, Clone)]
pub struct ProfileCheck {
    pub c: f64,
    pub max_rho_error: f64,
    pub max_theta_error: f64,
    pub first_integral_residual: f64,
    /// Fitted decay rate over `√(2 - c^2)`.
    pub decay_ratio: f64,
    pub energy_rel_error: f64,
    pub momentum_rel_error: f64,
}

pub fn run_example() -> Vec<ProfileCheck> {
    let gp = Nonlinearity::gp();
    [0.5, 1.0, 1.3]
        .into_iter()
        .map(|c| {
            let prof = build_profile(&gp, c, Branch::Lower, ProfileGrid::default()).expect("subsonic speed");
            let exact = gp_oracle(c).expect("subsonic speed");
            let inv = wave_invariants(&gp, &prof).expect("finite wave");
            let mut rho_err = 0.0f64;
            let mut theta_err = 0.0f64;
            for (k, &x) in prof.x.iter().enumerate() {
                rho_err = rho_err.max((prof.rho[k] - exact.rho(x)).abs());
                theta_err = theta_err.max((prof.theta[k] - exact.theta(x)).abs());
            }
            ProfileCheck {
                c,
                max_rho_error: rho_err,
                max_theta_error: theta_err,
                first_integral_residual: first_integral_residual(&gp, &prof),
                decay_ratio: decay_rate(&prof).expect("decaying tail") / (2.0 - c * c).sqrt(),
                energy_rel_error: (inv.energy / exact.energy() - 1.0).abs(),
                momentum_rel_error: (inv.momentum_valuation / exact.momentum() - 1.0).abs(),
            }
        })
        .collect()
}

#[allow(dead_code)]
fn main() {
    println!("c      |rho err|  |theta err|  first-int  decay/exact  E rel      P rel");
    for r in run_example() {
        println!(
            "{:<6} {:.2e}   {:.2e}     {:.2e}   {:.5}      {:.2e}   {:.2e}",
            r.c,
            r.max_rho_error,
            r.max_theta_error,
            r.first_integral_residual,
            r.decay_ratio,
            r.energy_rel_error,
            r.momentum_rel_error
        );
    }
}
