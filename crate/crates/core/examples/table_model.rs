// A model given as samples of `F`, loaded from TOML, swept like any other:
// sampled Gross–Pitaevskii reproduces the closed-form curve.

use twave::dispersion::{sweep_dispersion, uniform_speeds};
use twave::nonlinearity::ModelSpec;
use twave::waves::gp_oracle;

pub fn model_toml() -> String {
    let s: Vec<String> = (0..=120).map(|k| format!("{}", 0.1 * k as f64)).collect();
    let f: Vec<String> = (0..=120).map(|k| format!("{}", 1.0 - 0.1 * k as f64)).collect();
    format!(
        "[model]\nname = \"gp-table\"\nkind = \"table\"\ns = [{}]\nf = [{}]\ngrowth_p0 = 1.0\ngamma = 1.0\ns0 = 6.0\n",
        s.join(", "),
        f.join(", ")
    )
}

/// `(c, energy error, momentum error)` relative to the closed forms.
pub fn run_example() -> Vec<(f64, f64, f64)> {
    let model = ModelSpec::from_toml(&model_toml()).and_then(|s| s.build()).expect("valid table");
    let curve = sweep_dispersion(&model, &uniform_speeds(0.2, 1.3, 12)).expect("subsonic speeds");
    curve
        .samples
        .iter()
        .map(|s| {
            let exact = gp_oracle(s.c).unwrap();
            (s.c, (s.energy / exact.energy() - 1.0).abs(), (s.momentum / exact.momentum() - 1.0).abs())
        })
        .collect()
}

#[allow(dead_code)]
fn main() {
    for (c, de, dp) in run_example() {
        println!("c = {c:.3}: energy rel error {de:.1e}, momentum rel error {dp:.1e}");
    }
}
