//! Execution of a [`RunConfig`]: each present section produces a CSV table
//! and a JSON summary, both stamped with the same provenance.

use std::f64::consts::{PI, SQRT_2};
use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::assumptions::{check_assumptions, SampleGrid};
use crate::config::{ModelRef, RunConfig};
use crate::dispersion::{diagnostics, sweep_dispersion, uniform_speeds, EnvelopeSource};
use crate::error::Result;
use crate::momentum::MomentumReport;
use crate::nonlinearity::{ModelKind, Nonlinearity};
use crate::output::{save_json, Cell, Provenance, Table};
use crate::strip::minimize::default_x_max;
use crate::strip::{lambda_scan, MinimizeOptions, ScanOptions, StripGrid};
use crate::waves::{build_profile, first_integral_residual, gp_oracle, speed_for_momentum, wave_invariants, ProfileGrid};

/// Relative error below which a sample matches the closed forms.
pub const ORACLE_TOL: f64 = 1e-6;

/// One command's output.
#[derive(Debug, Clone)]
pub struct Artifact {
    /// File stem: `check`, `profile`, `dispersion`, `emin1` or `scan2d`.
    pub name: &'static str,
    pub table: Table,
    pub summary: Value,
    /// `false` when the command ran but its checks failed (a failing
    /// assumption, an oracle mismatch).
    pub ok: bool,
}

#[derive(Debug, Clone)]
pub struct RunOutput {
    pub provenance: Provenance,
    pub artifacts: Vec<Artifact>,
}

impl RunOutput {
    pub fn ok(&self) -> bool {
        self.artifacts.iter().all(|a| a.ok)
    }

    /// Writes `<name>.csv` and `<name>.json` per artifact into `dir`.
    pub fn save(&self, dir: &Path) -> Result<()> {
        std::fs::create_dir_all(dir)?;
        for a in &self.artifacts {
            a.table.save_csv(&dir.join(format!("{}.csv", a.name)), &self.provenance)?;
            save_json(&dir.join(format!("{}.json", a.name)), &a.summary, &self.provenance)?;
        }
        Ok(())
    }
}

/// The model and hashed config of a run. Relative model paths resolve
/// against `base`.
pub fn prepare(cfg: &RunConfig, base: Option<&Path>) -> Result<(Nonlinearity, Provenance)> {
    cfg.validate()?;
    let model = cfg.model.load(base)?;
    let mut canonical = cfg.clone();
    canonical.model = ModelRef::resolved(&model);
    canonical.out = None;
    let prov = Provenance::new(&model, &canonical.canonical_json());
    Ok((model, prov))
}

/// Runs every section of `cfg` in the order check, profile, dispersion,
/// emin1, scan2d.
pub fn execute(cfg: &RunConfig, base: Option<&Path>) -> Result<RunOutput> {
    let (model, provenance) = prepare(cfg, base)?;
    let mut artifacts = Vec::new();
    if let Some(s) = &cfg.check {
        let mut grid = SampleGrid::for_model(&model);
        if let Some(v) = s.s_max {
            grid.s_max = v;
        }
        if let Some(n) = s.n {
            grid.n = n;
        }
        artifacts.push(check(&model, grid)?);
    }
    if let Some(s) = &cfg.profile {
        let grid = ProfileGrid {
            x_max: s.x_max,
            n_points: s.points,
        };
        artifacts.push(profile(&model, s.c, s.branch, grid)?);
    }
    if let Some(s) = &cfg.dispersion {
        artifacts.push(dispersion(&model, &uniform_speeds(s.c_min, s.c_max, s.n))?);
    }
    if let Some(s) = &cfg.emin1 {
        artifacts.push(emin1(&model, &uniform_speeds(s.c_min, s.c_max, s.n_speeds), s.p_grid)?);
    }
    if let Some(s) = &cfg.scan2d {
        let c = speed_for_momentum(&model, s.p)?;
        let x_max = s.x_max.unwrap_or_else(|| default_x_max(c));
        let mut opts = ScanOptions::new(StripGrid::new(s.nx, s.ny, x_max));
        opts.minimize = MinimizeOptions {
            tol_e: s.tol_e,
            window: s.window,
            max_iter: s.max_iter,
            ..MinimizeOptions::default()
        };
        opts.perturbation = s.perturbation;
        opts.phase = perturbation_phase(cfg.seed);
        opts.blend_spread = s.blend_spread;
        opts.bracket_rel_width = s.bracket_rel_width;
        opts.max_bisections = s.max_bisections;
        artifacts.push(scan2d(&model, s.p, &s.lambda.points(), &opts)?);
    }
    Ok(RunOutput { provenance, artifacts })
}

/// Phase in `[0, 1)` of the transverse perturbation for a seed.
pub fn perturbation_phase(seed: u64) -> f64 {
    ChaCha8Rng::seed_from_u64(seed).random::<f64>()
}

pub fn check(model: &Nonlinearity, grid: SampleGrid) -> Result<Artifact> {
    let report = check_assumptions(model, grid)?;
    let mut table = Table::new(&["assumption", "verdict", "note"]);
    for c in &report.checks {
        table.push(vec![format!("{:?}", c.id).into(), format!("{:?}", c.verdict).into(), c.note.clone().into()]);
    }
    Ok(Artifact {
        name: "check",
        ok: report.all_pass(),
        summary: json!({ "all_pass": report.all_pass(), "report": report }),
        table,
    })
}

pub fn profile(model: &Nonlinearity, c: f64, branch: crate::waves::Branch, grid: ProfileGrid) -> Result<Artifact> {
    let prof = build_profile(model, c, branch, grid)?;
    let inv = wave_invariants(model, &prof)?;
    let residual = first_integral_residual(model, &prof);
    let mut table = Table::new(&["x", "rho", "theta", "re_psi", "im_psi"]);
    for (k, (re, im)) in prof.psi().into_iter().enumerate() {
        table.push(vec![prof.x[k].into(), prof.rho[k].into(), prof.theta[k].into(), re.into(), im.into()]);
    }
    let mut summary = json!({
        "model": model.name,
        "c": c,
        "branch": branch,
        "zeta": prof.zeta,
        "energy": inv.energy,
        "momentum": MomentumReport::new(inv.momentum_valuation),
        "decay_rate": inv.decay_rate,
        "decay_rate_expected": (2.0 - c * c).sqrt(),
        "energy_x": inv.energy_x,
        "momentum_x": inv.momentum_x,
        "kinetic": inv.kinetic,
        "potential": inv.potential,
        "first_integral_residual": residual,
    });
    if is_gp(model) {
        let o = gp_oracle(c.abs())?;
        let rho_err = prof.x.iter().zip(&prof.rho).map(|(&x, &r)| (r - o.rho(x)).abs()).fold(0.0, f64::max);
        let theta_err = prof
            .x
            .iter()
            .zip(&prof.theta)
            .map(|(&x, &t)| (t - c.signum() * o.theta(x)).abs())
            .fold(0.0, f64::max);
        summary["oracle"] = json!({
            "energy": o.energy(),
            "momentum": c.signum() * o.momentum(),
            "max_rho_error": rho_err,
            "max_theta_error": theta_err,
        });
    }
    Ok(Artifact {
        name: "profile",
        table,
        summary,
        ok: true,
    })
}

fn is_gp(model: &Nonlinearity) -> bool {
    matches!(model.spec().map(|s| &s.kind), Some(ModelKind::Gp))
}

fn rel_err(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(f64::MIN_POSITIVE)
}

pub fn dispersion(model: &Nonlinearity, speeds: &[f64]) -> Result<Artifact> {
    let curve = sweep_dispersion(model, speeds)?;
    let gp = is_gp(model);
    let mut cols = vec!["c", "momentum", "p", "energy", "zeta", "finite_l", "subsonic"];
    if gp {
        cols.extend(["energy_exact", "momentum_exact", "energy_rel_err", "momentum_rel_err", "oracle_ok"]);
    }
    let mut table = Table::new(&cols);
    let mut all_ok = true;
    for s in &curve.samples {
        let mut row: Vec<Cell> = vec![
            s.c.into(),
            s.momentum.into(),
            s.p.into(),
            s.energy.into(),
            s.zeta.into(),
            s.finite_l.into(),
            (s.is_wave() && s.energy < SQRT_2 * s.p).into(),
        ];
        if gp {
            let o = gp_oracle(s.c)?;
            let (ee, pe) = (rel_err(s.energy, o.energy()), rel_err(s.momentum, o.momentum()));
            let ok = ee <= ORACLE_TOL && pe <= ORACLE_TOL;
            all_ok &= ok;
            row.extend([o.energy().into(), o.momentum().into(), ee.into(), pe.into(), ok.into()]);
        }
        table.push(row);
    }
    let diag = diagnostics(&curve, 256).ok();
    let summary = json!({
        "model": model.name,
        "samples": curve.samples.len(),
        "waves": curve.waves().count(),
        "transitions": curve.transitions,
        "threshold": curve.threshold,
        "oracle_all_ok": if gp { Some(all_ok) } else { None },
        "diagnostics": diag,
    });
    Ok(Artifact {
        name: "dispersion",
        table,
        summary,
        ok: all_ok,
    })
}

pub fn emin1(model: &Nonlinearity, speeds: &[f64], p_grid: usize) -> Result<Artifact> {
    let curve = sweep_dispersion(model, speeds)?;
    let rows = curve.envelope_grid(p_grid)?;
    let mut table = Table::new(&["p", "emin1", "slope_left", "slope_right", "source", "below_sqrt2_p"]);
    let mut subsonic_from_005 = true;
    for r in &rows {
        let below = r.emin1 < SQRT_2 * r.p;
        if r.p >= 0.05 {
            subsonic_from_005 &= below;
        }
        let source = match r.source {
            EnvelopeSource::Origin => "origin",
            EnvelopeSource::Sampled => "sampled",
            EnvelopeSource::GapInterpolated => "gap-interpolated",
            EnvelopeSource::CappedSqrt2 => "capped-sqrt2",
            EnvelopeSource::CappedThreshold => "capped-threshold",
        };
        table.push(vec![r.p.into(), r.emin1.into(), r.slope_left.into(), r.slope_right.into(), source.into(), below.into()]);
    }
    let diag = diagnostics(&curve, p_grid.max(256)).ok();
    let summary = json!({
        "model": model.name,
        "p_max": PI,
        "points": rows.len(),
        "below_sqrt2_p_for_p_ge_0_05": subsonic_from_005,
        "threshold": curve.threshold,
        "transitions": curve.transitions,
        "diagnostics": diag,
    });
    Ok(Artifact {
        name: "emin1",
        table,
        summary,
        ok: true,
    })
}

pub fn scan2d(model: &Nonlinearity, p: f64, lambdas: &[f64], opts: &ScanOptions) -> Result<Artifact> {
    let scan = lambda_scan(model, p, lambdas, opts)?;
    let mut table = Table::new(&[
        "lambda",
        "energy",
        "two_dimensionality",
        "converged",
        "improved",
        "failed",
        "speed",
        "iterations",
        "max_constraint_violation",
        "init",
    ]);
    for e in &scan.entries {
        table.push(vec![
            e.lambda.into(),
            e.energy.into(),
            e.two_dimensionality.into(),
            e.converged.into(),
            e.improved.into(),
            e.failed.into(),
            e.speed.into(),
            e.iterations.into(),
            e.max_constraint_violation.into(),
            e.init.clone().into(),
        ]);
    }
    let summary = json!({ "model": model.name, "grid": opts.grid, "scan": scan });
    Ok(Artifact {
        name: "scan2d",
        table,
        summary,
        ok: true,
    })
}
