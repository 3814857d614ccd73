// Energy of the wide, shallow test function of momentum `p`: it tends to
// `√2 p` from above as the width grows.

use std::f64::consts::SQRT_2;

use twave::dispersion::{test_function_energy, TestFunction};
use twave::Nonlinearity;

pub fn run_example() -> Vec<(f64, f64, TestFunction)> {
    let gp = Nonlinearity::gp();
    let mut out = Vec::new();
    for p in [0.1, 0.3] {
        for width in [50.0, 200.0, 800.0] {
            out.push((p, width, test_function_energy(&gp, p, width).expect("small amplitude")));
        }
    }
    out
}

#[allow(dead_code)]
fn main() {
    for (p, width, t) in run_example() {
        println!(
            "p = {p}, width {width:>5}: momentum {:.12}, E/(√2 p) = {:.6}",
            t.momentum,
            t.energy / (SQRT_2 * p)
        );
    }
}
