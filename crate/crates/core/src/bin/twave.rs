use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use twave::config::{
    CheckSection, DispersionSection, Emin1Section, GridSpec, LambdaGrid, ModelRef, ProfileSection, RunConfig, Scan2dSection,
};
use twave::run::{execute, RunOutput};
use twave::waves::Branch;
use twave::TwaveError;

/// Traveling waves, dispersion curves and strip minimizers for defocusing NLS.
#[derive(Parser)]
#[command(name = "twave", version)]
struct Cli {
    /// Worker threads for sweeps and scans.
    #[arg(long, global = true, env = "TWAVE_JOBS")]
    jobs: Option<usize>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args)]
struct Common {
    /// Builtin model name (gp, example43, example55, example56) or model file.
    #[arg(long, default_value = "gp")]
    model: String,
    /// Output directory; tables go to stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Cmd {
    /// Check the structural assumptions on a model.
    Check {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        s_max: Option<f64>,
        #[arg(long)]
        n: Option<usize>,
    },
    /// Build one traveling wave profile.
    Profile {
        #[command(flatten)]
        common: Common,
        #[arg(long, allow_hyphen_values = true)]
        c: f64,
        #[arg(long, value_parser = parse_branch, default_value = "lower")]
        branch: Branch,
        #[arg(long)]
        x_max: Option<f64>,
        #[arg(long, default_value_t = 8001)]
        points: usize,
    },
    /// Energy and momentum over a range of speeds.
    Dispersion {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        c_min: f64,
        #[arg(long)]
        c_max: f64,
        #[arg(long)]
        n: usize,
    },
    /// Minimal 1D energy on a grid of momenta in [0, π].
    Emin1 {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        p_grid: usize,
        #[arg(long, default_value_t = 0.005)]
        c_min: f64,
        #[arg(long, default_value_t = 1.41)]
        c_max: f64,
        #[arg(long, default_value_t = 400)]
        n_speeds: usize,
    },
    /// Scan the strip minimum over λ and bracket the critical period.
    Scan2d {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        p: f64,
        /// `min:max:geometric|linear:n`.
        #[arg(long)]
        lambda: String,
        #[arg(long, default_value_t = 2049)]
        nx: usize,
        #[arg(long, default_value_t = 64)]
        ny: usize,
        #[arg(long)]
        x_max: Option<f64>,
        #[arg(long)]
        tol_e: Option<f64>,
        #[arg(long)]
        max_iter: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Run every section of a TOML config.
    Run {
        #[arg(long)]
        config: PathBuf,
        /// Overrides `out` from the config.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn parse_branch(s: &str) -> Result<Branch, String> {
    match s {
        "lower" => Ok(Branch::Lower),
        "upper" => Ok(Branch::Upper),
        _ => Err(format!("unknown branch {s:?} (lower or upper)")),
    }
}

fn config_for(common: Common) -> RunConfig {
    let mut cfg = RunConfig::new(ModelRef::Named(common.model));
    cfg.out = common.out;
    cfg
}

fn build(cmd: Cmd) -> Result<(RunConfig, Option<PathBuf>), TwaveError> {
    Ok(match cmd {
        Cmd::Check { common, s_max, n } => {
            let mut cfg = config_for(common);
            cfg.check = Some(CheckSection { s_max, n });
            (cfg, None)
        }
        Cmd::Profile {
            common,
            c,
            branch,
            x_max,
            points,
        } => {
            let mut cfg = config_for(common);
            cfg.profile = Some(ProfileSection { c, branch, x_max, points });
            (cfg, None)
        }
        Cmd::Dispersion { common, c_min, c_max, n } => {
            let mut cfg = config_for(common);
            cfg.dispersion = Some(DispersionSection { c_min, c_max, n });
            (cfg, None)
        }
        Cmd::Emin1 {
            common,
            p_grid,
            c_min,
            c_max,
            n_speeds,
        } => {
            let mut cfg = config_for(common);
            cfg.emin1 = Some(Emin1Section {
                p_grid,
                c_min,
                c_max,
                n_speeds,
            });
            (cfg, None)
        }
        Cmd::Scan2d {
            common,
            p,
            lambda,
            nx,
            ny,
            x_max,
            tol_e,
            max_iter,
            seed,
        } => {
            let mut cfg = config_for(common);
            let mut s = Scan2dSection::new(p, LambdaGrid::Spec(GridSpec::parse(&lambda)?));
            s.nx = nx;
            s.ny = ny;
            s.x_max = x_max;
            if let Some(t) = tol_e {
                s.tol_e = t;
            }
            if let Some(m) = max_iter {
                s.max_iter = m;
            }
            cfg.seed = seed;
            cfg.scan2d = Some(s);
            (cfg, None)
        }
        Cmd::Run { config, out } => {
            let mut cfg = RunConfig::from_file(&config)?;
            if out.is_some() {
                cfg.out = out;
            }
            let base = config.parent().map(|p| p.to_path_buf());
            (cfg, base)
        }
    })
}

fn emit(cfg: &RunConfig, out: &RunOutput) -> Result<(), TwaveError> {
    match &cfg.out {
        Some(dir) => {
            out.save(dir)?;
            for a in &out.artifacts {
                eprintln!("wrote {}/{}.csv and .json", dir.display(), a.name);
            }
        }
        None => {
            let mut stdout = std::io::stdout().lock();
            for a in &out.artifacts {
                match stdout.write_all(a.table.to_csv_string(&out.provenance).as_bytes()) {
                    Err(e) if e.kind() == std::io::ErrorKind::BrokenPipe => break,
                    r => r?,
                }
            }
        }
    }
    for a in out.artifacts.iter().filter(|a| !a.ok) {
        eprintln!("{}: checks failed", a.name);
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(j) = cli.jobs.filter(|&j| j > 0) {
        // Only fails if a pool already exists, which cannot happen here.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(j).build_global();
    }
    let result = build(cli.cmd).and_then(|(cfg, base)| {
        let out = execute(&cfg, base.as_deref())?;
        emit(&cfg, &out)?;
        Ok(out)
    });
    match result {
        Ok(out) if out.ok() => ExitCode::SUCCESS,
        Ok(out) => {
            let check_failed = out.artifacts.iter().any(|a| !a.ok && a.name == "check");
            ExitCode::from(if check_failed { 3 } else { 5 })
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
