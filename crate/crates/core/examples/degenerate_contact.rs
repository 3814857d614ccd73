// The cubic-contact model: regular waves away from the contact speed `c0`
// and an undecidable turning point at `c0` itself.

use twave::nonlinearity::CubicContactParams;
use twave::waves::{build_profile, first_integral_residual, turning_point, Branch, ProfileGrid};
use twave::{Nonlinearity, TwaveError};

#[derive(Debug)]
pub struct ContactReport {
    pub c0: f64,
    pub s0: f64,
    /// `(c, zeta, first-integral residual)` for speeds away from `c0`.
    pub regular: Vec<(f64, f64, f64)>,
    pub at_contact: TwaveError,
}

pub fn run_example() -> ContactReport {
    let params = CubicContactParams::default();
    let model = Nonlinearity::cubic_contact("example43", params).expect("valid defaults");
    let regular = [0.3, 0.8, 1.0, 1.35]
        .into_iter()
        .map(|c| {
            let prof = build_profile(&model, c, Branch::Lower, ProfileGrid::default()).expect("regular speed");
            (c, prof.zeta, first_integral_residual(&model, &prof))
        })
        .collect();
    let at_contact = turning_point(&model, params.c0, Branch::Lower).expect_err("contact speed is degenerate");
    ContactReport {
        c0: params.c0,
        s0: params.s0,
        regular,
        at_contact,
    }
}

#[allow(dead_code)]
fn main() {
    let r = run_example();
    println!("contact at c0 = {}, s0 = {}", r.c0, r.s0);
    for (c, zeta, res) in &r.regular {
        println!("c = {c:<5} zeta = {zeta:.6}  first-integral residual {res:.2e}");
    }
    println!("at c0: {} (exit code {})", r.at_contact, r.at_contact.exit_code());
}
