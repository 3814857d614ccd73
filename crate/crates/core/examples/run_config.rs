// A reproducible run from a TOML config: the same config written twice
// yields byte-identical files, each starting with the provenance header.

use std::path::PathBuf;

use twave::config::RunConfig;
use twave::run::{execute, RunOutput};

pub const CONFIG: &str = r#"
seed = 11
model = "gp"

[check]

[profile]
c = 1.0
points = 2001

[dispersion]
c_min = 0.05
c_max = 1.35
n = 25

[emin1]
p_grid = 64
n_speeds = 200

[scan2d]
p = 1.0
lambda = "0.1:4:geometric:6"
nx = 129
ny = 4
"#;

pub struct ConfigRun {
    pub output: RunOutput,
    pub dirs: [PathBuf; 2],
}

pub fn run_example() -> ConfigRun {
    let cfg = RunConfig::from_toml(CONFIG).expect("valid config");
    let base = std::env::temp_dir().join(format!("twave-run-config-{}", std::process::id()));
    let dirs = [base.join("first"), base.join("second")];
    let mut output = None;
    for dir in &dirs {
        let out = execute(&cfg, None).expect("run succeeds");
        out.save(dir).expect("writable temp dir");
        output = Some(out);
    }
    ConfigRun {
        output: output.expect("ran twice"),
        dirs,
    }
}

#[allow(dead_code)]
fn main() {
    let run = run_example();
    println!("{}", run.output.provenance.header_line());
    for a in &run.output.artifacts {
        let first = std::fs::read(run.dirs[0].join(format!("{}.csv", a.name))).unwrap();
        let second = std::fs::read(run.dirs[1].join(format!("{}.csv", a.name))).unwrap();
        println!(
            "{:<10} {:>5} rows  checks ok: {:<5}  identical rerun: {}",
            a.name,
            a.table.rows.len(),
            a.ok,
            first == second
        );
    }
    println!("files in {}", run.dirs[0].display());
}
