// Structural checks (A1, A2, B1, B2) for every builtin model and for a
// tabulated copy of Gross–Pitaevskii.

use twave::assumptions::{check_assumptions, AssumptionReport, SampleGrid};
use twave::nonlinearity::TableParams;
use twave::{builtin_models, Nonlinearity};

pub fn run_example() -> Vec<AssumptionReport> {
    let mut models = builtin_models();
    // F(s) = 1 - s sampled on [0, 12].
    let s: Vec<f64> = (0..=240).map(|k| 0.05 * k as f64).collect();
    let f = s.iter().map(|x| 1.0 - x).collect();
    let table = TableParams {
        s,
        f,
        growth_p0: Some(1.0),
        gamma: Some(1.0),
        s0: Some(6.0),
    };
    models.push(Nonlinearity::table(&table).expect("valid table"));
    models
        .iter()
        .map(|m| check_assumptions(m, SampleGrid::for_model(m)).expect("grid is large enough"))
        .collect()
}

#[allow(dead_code)]
fn main() {
    for report in run_example() {
        let verdicts: Vec<String> = report.checks.iter().map(|c| format!("{:?}={:?}", c.id, c.verdict)).collect();
        println!("{:<10} {}  ({})", report.model, verdicts.join(" "), report.regularity);
    }
}
