//! Scan of `E_{λ,min}(p)` over `λ` and bracketing of the critical period.
//!
//! The grid is processed from the largest `λ` down. At each `λ` the
//! minimizer is started from the previous minimizer (continuation), from
//! the perturbed 1D wave and from a two-wave blend, and the lowest energy
//! is kept. Since shrinking `λ` never raises the energy of a fixed field,
//! continuation makes the scanned energies nondecreasing in `λ`.

use rayon::prelude::*;
use serde::Serialize;

use super::field::{Field2D, StripGrid};
use super::minimize::{minimize_at_momentum, Init, MinimizeOptions, MinimizeResult};
use crate::error::{Result, TwaveError};
use crate::nonlinearity::Nonlinearity;
use crate::waves::{invariants_s_form, speed_for_momentum, Branch};

#[derive(Debug, Clone, Serialize)]
pub struct ScanOptions {
    pub grid: StripGrid,
    pub minimize: MinimizeOptions,
    /// Amplitude of the transverse perturbation of the 1D start.
    pub perturbation: f64,
    /// Phase shift of that perturbation (in units of the period).
    pub phase: f64,
    /// Half-distance of the two momenta of the blended start.
    pub blend_spread: f64,
    /// Bisection stops when `hi / lo - 1` is below this.
    pub bracket_rel_width: f64,
    pub max_bisections: usize,
}

impl ScanOptions {
    pub fn new(grid: StripGrid) -> Self {
        ScanOptions {
            grid,
            minimize: MinimizeOptions::default(),
            perturbation: 1e-2,
            phase: 0.0,
            blend_spread: 0.3,
            bracket_rel_width: 0.05,
            max_bisections: 8,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct LambdaEntry {
    pub lambda: f64,
    pub energy: f64,
    pub two_dimensionality: f64,
    pub converged: bool,
    pub speed: f64,
    pub iterations: usize,
    pub max_constraint_violation: f64,
    /// `energy < reference - margin`.
    pub improved: bool,
    /// Start that produced the kept minimizer.
    pub init: String,
    /// Set when a start failed (e.g. `ρ` reached its floor).
    pub failures: Vec<String>,
    /// Every start failed; `energy` and `two_dimensionality` are NaN and
    /// the entry takes no part in the bracket.
    pub failed: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct LambdaScan {
    pub p: f64,
    /// Lowest 1D wave energy at momentum `p`.
    pub reference: f64,
    /// The same wave's energy on the strip grid.
    pub reference_discrete: f64,
    /// `|reference_discrete - reference|`.
    pub grid_tol: f64,
    /// `3 × grid_tol`.
    pub margin: f64,
    /// Sorted by `λ`, bisection points included.
    pub entries: Vec<LambdaEntry>,
    /// `(largest λ with strict improvement, smallest larger λ without)`.
    pub bracket: Option<(f64, f64)>,
    pub lambda_s_estimate: Option<f64>,
    /// Why no bracket was reported, if so.
    pub note: Option<String>,
}

struct Candidate {
    label: String,
    result: MinimizeResult,
}

fn best_at(
    model: &Nonlinearity,
    p: f64,
    lam: f64,
    starts: Vec<(String, Init)>,
    opts: &ScanOptions,
) -> (Option<Candidate>, Vec<String>) {
    let outcomes: Vec<(String, Result<MinimizeResult>)> = starts
        .into_par_iter()
        .map(|(label, init)| {
            let r = minimize_at_momentum(model, lam, p, &init, opts.grid, &opts.minimize);
            (label, r)
        })
        .collect();
    let mut best: Option<Candidate> = None;
    let mut failures = Vec::new();
    for (label, r) in outcomes {
        match r {
            Ok(result) => {
                if best.as_ref().is_none_or(|b| result.energy < b.result.energy) {
                    best = Some(Candidate { label, result });
                }
            }
            Err(e) => failures.push(format!("{label}: {e}")),
        }
    }
    (best, failures)
}

/// The field of a kept minimizer if it depends on `y`.
fn two_dimensional(b: Option<&(Candidate, Vec<String>)>) -> Option<Field2D> {
    b.filter(|(c, _)| c.result.two_dimensionality > 1e-8)
        .map(|(c, _)| c.result.field.clone())
}

/// Runs `starts` at `lam` and keeps the result if it lowers the energy.
/// Returns the failures when there is nothing to attach them to.
fn update(
    model: &Nonlinearity,
    p: f64,
    lam: f64,
    starts: Vec<(String, Init)>,
    opts: &ScanOptions,
    slot: &mut Option<(Candidate, Vec<String>)>,
) -> Vec<String> {
    if starts.is_empty() {
        return Vec::new();
    }
    let (cand, failures) = best_at(model, p, lam, starts, opts);
    match (slot.as_mut(), cand) {
        (None, Some(c)) => *slot = Some((c, failures)),
        (Some((old, old_failures)), Some(c)) => {
            old_failures.extend(failures);
            if c.result.energy < old.result.energy {
                *old = c;
            }
        }
        (Some((_, old_failures)), None) => old_failures.extend(failures),
        (None, None) => return failures,
    }
    Vec::new()
}

fn entry(c: &Candidate, failures: Vec<String>, threshold: f64) -> LambdaEntry {
    let r = &c.result;
    LambdaEntry {
        lambda: r.lam,
        energy: r.energy,
        two_dimensionality: r.two_dimensionality,
        converged: r.converged,
        speed: r.speed,
        iterations: r.iterations,
        max_constraint_violation: r.max_constraint_violation,
        improved: r.energy < threshold,
        init: c.label.clone(),
        failures,
        failed: false,
    }
}

fn failed_entry(lambda: f64, failures: Vec<String>) -> LambdaEntry {
    LambdaEntry {
        lambda,
        energy: f64::NAN,
        two_dimensionality: f64::NAN,
        converged: false,
        speed: f64::NAN,
        iterations: 0,
        max_constraint_violation: f64::NAN,
        improved: false,
        init: String::new(),
        failures,
        failed: true,
    }
}

fn standard_starts(opts: &ScanOptions) -> Vec<(String, Init)> {
    vec![
        (
            "1d".to_string(),
            Init::OneD {
                perturbation: opts.perturbation,
                phase: opts.phase,
            },
        ),
        ("blend".to_string(), Init::Blend { spread: opts.blend_spread }),
    ]
}

/// Runs the scan over `lambdas` (ascending) at momentum `p`.
pub fn lambda_scan(model: &Nonlinearity, p: f64, lambdas: &[f64], opts: &ScanOptions) -> Result<LambdaScan> {
    if lambdas.is_empty() || lambdas.windows(2).any(|w| !(w[0] < w[1])) || !(lambdas[0] > 0.0) {
        return Err(TwaveError::InvalidInput("λ grid must be positive, nonempty and strictly ascending".into()));
    }
    let c = speed_for_momentum(model, p)?;
    let (reference, _) = invariants_s_form(model, c, Branch::Lower)?;
    // The 1D wave on the same x-grid (a single y row carries the same energy).
    let line = StripGrid::new(opts.grid.nx, 1, opts.grid.x_max);
    let flat = minimize_at_momentum(
        model,
        1.0,
        p,
        &Init::OneD {
            perturbation: 0.0,
            phase: 0.0,
        },
        line,
        &opts.minimize,
    )?;
    let reference_discrete = flat.energy;
    let grid_tol = (reference_discrete - reference).abs();
    let margin = 3.0 * grid_tol;
    let threshold = reference - margin;

    // Descending sweep with all starts, then an ascending and a second
    // descending sweep that only continue two-dimensional minimizers.
    let n = lambdas.len();
    let mut best: Vec<Option<(Candidate, Vec<String>)>> = (0..n).map(|_| None).collect();
    let mut lost: Vec<Vec<String>> = vec![Vec::new(); n];
    let sweep_down = |best: &mut Vec<Option<(Candidate, Vec<String>)>>, lost: &mut Vec<Vec<String>>, all: bool| {
        for k in (0..n).rev() {
            let mut starts = if all { standard_starts(opts) } else { Vec::new() };
            if let Some(f) = best.get(k + 1).and_then(|b| two_dimensional(b.as_ref())) {
                starts.push(("continuation".to_string(), Init::Field(f)));
            }
            lost[k].extend(update(model, p, lambdas[k], starts, opts, &mut best[k]));
        }
    };
    sweep_down(&mut best, &mut lost, true);
    for k in 1..n {
        if let Some(f) = two_dimensional(best[k - 1].as_ref()) {
            let up = vec![("continuation-up".to_string(), Init::Field(f))];
            lost[k].extend(update(model, p, lambdas[k], up, opts, &mut best[k]));
        }
    }
    sweep_down(&mut best, &mut lost, false);
    let mut entries = Vec::with_capacity(n);
    let mut fields = Vec::with_capacity(n);
    for ((b, lost), &lam) in best.into_iter().zip(lost).zip(lambdas) {
        match b {
            Some((c, failures)) => {
                entries.push(entry(&c, failures, threshold));
                fields.push(Some(c.result.field));
            }
            None => {
                entries.push(failed_entry(lam, lost));
                fields.push(None);
            }
        }
    }

    let mut scan = LambdaScan {
        p,
        reference,
        reference_discrete,
        grid_tol,
        margin,
        entries,
        bracket: None,
        lambda_s_estimate: None,
        note: None,
    };
    let Some(lo_idx) = scan.entries.iter().rposition(|e| e.improved) else {
        scan.note = Some(if reference <= 10.0 * margin.max(f64::EPSILON) {
            "no reliable bracket: the 1D energy is within the grid tolerance of zero".into()
        } else {
            "no reliable bracket: no λ in the grid improves on the 1D energy".into()
        });
        return Ok(scan);
    };
    let Some(hi_idx) = (lo_idx + 1..n).find(|&k| !scan.entries[k].failed) else {
        scan.note = Some("no reliable bracket: every λ in the grid improves on the 1D energy".into());
        return Ok(scan);
    };
    let (mut lo, mut hi) = (scan.entries[lo_idx].lambda, scan.entries[hi_idx].lambda);
    let mut lo_field = fields[lo_idx].clone().expect("improved entries have a field");
    let mut hi_field = fields[hi_idx].clone().expect("entries that did not fail have a field");
    for _ in 0..opts.max_bisections {
        if hi / lo - 1.0 <= opts.bracket_rel_width {
            break;
        }
        let mid = (lo * hi).sqrt();
        let mut starts = standard_starts(opts);
        starts.push(("continuation".to_string(), Init::Field(hi_field.clone())));
        starts.push(("continuation-below".to_string(), Init::Field(lo_field.clone())));
        let (best, failures) = best_at(model, p, mid, starts, opts);
        let Some(best) = best else { break };
        let e = entry(&best, failures, threshold);
        if e.improved {
            lo = mid;
            lo_field = best.result.field;
        } else {
            hi = mid;
            hi_field = best.result.field;
        }
        scan.entries.push(e);
    }
    scan.entries.sort_by(|a, b| a.lambda.total_cmp(&b.lambda));
    scan.bracket = Some((lo, hi));
    scan.lambda_s_estimate = Some((lo * hi).sqrt());
    Ok(scan)
}
