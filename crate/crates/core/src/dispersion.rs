//! Energy–momentum curve of the lower branch and the minimal energy at
//! fixed momentum `E¹_min(p)`.
//!
//! The curve is sampled at a list of speeds. Consecutive samples are joined
//! by cubic Hermite arcs in `c` (with `dE/dc = c dP/dc`), resampled densely,
//! and `E¹_min` is estimated as the lowest arc value over every preimage of
//! the reduced momentum. Momenta reached by no arc are filled with the upper
//! concave hull of the sampled values and of the endpoints `(0, 0)` and, when
//! it exists, the black soliton `(π, threshold)`. Everything is finally
//! capped by `√2 p` and the threshold.

use std::f64::consts::{PI, SQRT_2, TAU};

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Result, TwaveError};
use crate::momentum::class_of;
use crate::nonlinearity::{black_soliton_threshold, Nonlinearity};
use crate::numerics::quad::{integrate, QuadTol};
use crate::waves::{invariants_at, turning_point, Branch};

/// One speed of a sweep.
#[derive(Debug, Clone, Serialize)]
pub struct DispersionSample {
    pub c: f64,
    /// Momentum valuation `P(c)`; NaN when no wave was built.
    pub momentum: f64,
    /// `|⟦P(c)⟧| ∈ [0, π]`.
    pub p: f64,
    pub energy: f64,
    /// Turning point `ζ(c)`; NaN when none was found.
    pub zeta: f64,
    pub finite_l: bool,
    /// Why the sample is missing, if it is.
    pub note: Option<String>,
}

impl DispersionSample {
    pub fn is_wave(&self) -> bool {
        self.finite_l && self.energy.is_finite()
    }
}

#[derive(Debug, Clone, Copy)]
struct Node {
    c: f64,
    p: f64,
    e: f64,
}

/// How a value of the envelope was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum EnvelopeSource {
    /// `p = 0`.
    Origin,
    /// Lowest traveling wave with that momentum.
    Sampled,
    /// Concave hull across momenta reached by no sampled wave.
    GapInterpolated,
    /// Capped by `√2 p`.
    CappedSqrt2,
    /// Capped by the black soliton threshold.
    CappedThreshold,
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct EnvelopePoint {
    /// The reduced momentum `|⟦p⟧|`.
    pub p: f64,
    pub emin1: f64,
    pub source: EnvelopeSource,
}

#[derive(Debug, Clone, Serialize)]
pub struct DispersionCurve {
    pub model: String,
    pub samples: Vec<DispersionSample>,
    /// `4 ∫_0^1 √V(s^2) ds` when `V > 0` on `[0, 1)`.
    pub threshold: Option<f64>,
    /// Speeds where the turning point jumps or waves cease to exist; no
    /// arc crosses them.
    pub transitions: Vec<f64>,
    #[serde(skip)]
    runs: Vec<Vec<Node>>,
    #[serde(skip)]
    hull: Vec<(f64, f64)>,
}

/// Subdivisions of each Hermite arc.
const ARC_POINTS: usize = 16;
/// Resolution of the hull grid on `[0, π]`.
const HULL_GRID: usize = 4096;
/// Minimum left/right slope gap reported as a kink.
pub const CUSP_GAP: f64 = 0.02 * SQRT_2;

/// `n` equally spaced speeds in `[c_min, c_max]`.
pub fn uniform_speeds(c_min: f64, c_max: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![c_min],
        _ => (0..n).map(|i| c_min + (c_max - c_min) * i as f64 / (n - 1) as f64).collect(),
    }
}

/// Builds the lower-branch curve at the given speeds in `(0, √2)`. Speeds
/// without a wave are kept as gaps.
pub fn sweep_dispersion(model: &Nonlinearity, speeds: &[f64]) -> Result<DispersionCurve> {
    if let Some(&c) = speeds.iter().find(|&&c| !(c > 0.0 && c < SQRT_2)) {
        return Err(TwaveError::InvalidInput(format!("speeds must lie in (0, √2), got {c}")));
    }
    let mut speeds = speeds.to_vec();
    speeds.sort_by(f64::total_cmp);
    speeds.dedup();
    let mut samples: Vec<DispersionSample> = speeds.par_iter().map(|&c| sample_at(model, c)).collect();
    // Locate every jump of the turning point (or wave/no-wave switch)
    // between neighbors and cluster extra speeds geometrically around it:
    // near such a speed the momentum of the surviving branch can grow
    // without bound.
    let suspects: Vec<(DispersionSample, DispersionSample)> = samples
        .windows(2)
        .filter(|w| suspicious(&w[0], &w[1]))
        .map(|w| (w[0].clone(), w[1].clone()))
        .collect();
    let found: Vec<(f64, Vec<DispersionSample>)> = suspects
        .par_iter()
        .filter_map(|(a, b)| locate_transition(model, a, b))
        .collect();
    let mut transitions = Vec::new();
    for (c_star, extra) in found {
        transitions.push(c_star);
        samples.extend(extra);
    }
    samples.sort_by(|a, b| a.c.total_cmp(&b.c));
    samples.dedup_by(|a, b| a.c == b.c);
    transitions.sort_by(f64::total_cmp);
    let threshold = if model.v_positive_below_one() {
        Some(black_soliton_threshold(model)?)
    } else {
        None
    };
    let mut curve = DispersionCurve {
        model: model.name.clone(),
        samples,
        threshold,
        transitions,
        runs: Vec::new(),
        hull: Vec::new(),
    };
    curve.runs = build_runs(&curve.samples, &curve.transitions);
    curve.hull = build_hull(&curve);
    Ok(curve)
}

/// Three-point derivative at `x[i]` on a nonuniform grid.
fn derivative3(x: &[f64], y: &[f64], i: usize) -> f64 {
    let n = x.len();
    if n == 2 {
        return (y[1] - y[0]) / (x[1] - x[0]);
    }
    let (a, b, c) = match i {
        0 => (0, 1, 2),
        _ if i == n - 1 => (n - 3, n - 2, n - 1),
        _ => (i - 1, i, i + 1),
    };
    // Derivative of the interpolating parabola through a, b, c at x[i].
    let t = x[i];
    let la = ((t - x[b]) + (t - x[c])) / ((x[a] - x[b]) * (x[a] - x[c]));
    let lb = ((t - x[a]) + (t - x[c])) / ((x[b] - x[a]) * (x[b] - x[c]));
    let lc = ((t - x[a]) + (t - x[b])) / ((x[c] - x[a]) * (x[c] - x[b]));
    la * y[a] + lb * y[b] + lc * y[c]
}

/// Largest `|Δζ| / Δc` between neighbors that is not examined for a jump.
const MAX_ZETA_RATE: f64 = 20.0;
/// Geometric offsets added on each side of a transition.
const CLUSTER_POINTS: usize = 48;

fn sample_at(model: &Nonlinearity, c: f64) -> DispersionSample {
    let tp = turning_point(model, c, Branch::Lower);
    let zeta = tp.as_ref().map_or(f64::NAN, |t| t.zeta);
    let finite_l = tp.as_ref().is_ok_and(|t| t.finite);
    match tp.and_then(|t| invariants_at(model, &t, c, Branch::Lower)) {
        Ok((e, q)) => DispersionSample {
            c,
            momentum: q,
            p: class_of(q).abs(),
            energy: e,
            zeta,
            finite_l,
            note: None,
        },
        Err(err) => DispersionSample {
            c,
            momentum: f64::NAN,
            p: f64::NAN,
            energy: f64::NAN,
            zeta,
            finite_l,
            note: Some(err.to_string()),
        },
    }
}

fn suspicious(a: &DispersionSample, b: &DispersionSample) -> bool {
    a.is_wave() != b.is_wave() || (a.is_wave() && (b.zeta - a.zeta).abs() > MAX_ZETA_RATE * (b.c - a.c))
}

/// Bisects between two neighbors for a transition; returns its speed and
/// samples clustered on both sides, or `None` if the change is continuous.
fn locate_transition(
    model: &Nonlinearity,
    a: &DispersionSample,
    b: &DispersionSample,
) -> Option<(f64, Vec<DispersionSample>)> {
    let by_wave = a.is_wave() != b.is_wave();
    let like_a = |s: &DispersionSample| {
        if by_wave {
            s.is_wave() == a.is_wave()
        } else {
            s.is_wave() && (s.zeta - a.zeta).abs() < (s.zeta - b.zeta).abs()
        }
    };
    let (mut lo, mut hi) = (a.clone(), b.clone());
    for _ in 0..64 {
        let mid = 0.5 * (lo.c + hi.c);
        if mid <= lo.c || mid >= hi.c {
            break;
        }
        let s = sample_at(model, mid);
        if like_a(&s) {
            lo = s;
        } else {
            hi = s;
        }
    }
    let genuine = lo.is_wave() != hi.is_wave() || (lo.zeta - hi.zeta).abs() > 1e-4;
    if !genuine {
        return None;
    }
    let c_star = 0.5 * (lo.c + hi.c);
    let mut extra = vec![lo.clone(), hi.clone()];
    for k in 1..=CLUSTER_POINTS {
        let f = 10f64.powf(-(k as f64) / 4.0);
        for c in [c_star - f * (c_star - a.c), c_star + f * (b.c - c_star)] {
            if c > a.c && c < b.c && c != lo.c && c != hi.c {
                extra.push(sample_at(model, c));
            }
        }
    }
    Some((c_star, extra))
}

fn build_runs(samples: &[DispersionSample], transitions: &[f64]) -> Vec<Vec<Node>> {
    let mut runs = Vec::new();
    let mut current: Vec<&DispersionSample> = Vec::new();
    for s in samples {
        let joins = current.last().is_some_and(|prev| {
            s.is_wave() && !transitions.iter().any(|&t| t > prev.c && t < s.c)
        });
        if !joins && !current.is_empty() {
            runs.push(densify(&current));
            current.clear();
        }
        if s.is_wave() {
            current.push(s);
        }
    }
    if !current.is_empty() {
        runs.push(densify(&current));
    }
    runs
}

fn densify(run: &[&DispersionSample]) -> Vec<Node> {
    let c: Vec<f64> = run.iter().map(|s| s.c).collect();
    let p: Vec<f64> = run.iter().map(|s| s.momentum).collect();
    let e: Vec<f64> = run.iter().map(|s| s.energy).collect();
    if run.len() == 1 {
        return vec![Node { c: c[0], p: p[0], e: e[0] }];
    }
    let dp: Vec<f64> = (0..run.len()).map(|i| derivative3(&c, &p, i)).collect();
    let de: Vec<f64> = (0..run.len()).map(|i| c[i] * dp[i]).collect();
    let mut nodes = Vec::with_capacity((run.len() - 1) * ARC_POINTS + 1);
    for i in 0..run.len() - 1 {
        let h = c[i + 1] - c[i];
        for k in 0..ARC_POINTS {
            let t = k as f64 / ARC_POINTS as f64;
            let (h00, h10, h01, h11) = hermite_basis(t);
            nodes.push(Node {
                c: c[i] + t * h,
                p: h00 * p[i] + h10 * h * dp[i] + h01 * p[i + 1] + h11 * h * dp[i + 1],
                e: h00 * e[i] + h10 * h * de[i] + h01 * e[i + 1] + h11 * h * de[i + 1],
            });
        }
    }
    let last = run.len() - 1;
    nodes.push(Node {
        c: c[last],
        p: p[last],
        e: e[last],
    });
    nodes
}

fn hermite_basis(t: f64) -> (f64, f64, f64, f64) {
    let t2 = t * t;
    let t3 = t2 * t;
    (2.0 * t3 - 3.0 * t2 + 1.0, t3 - 2.0 * t2 + t, -2.0 * t3 + 3.0 * t2, t3 - t2)
}

/// Upper concave hull (monotone chain) of points sorted by `x`.
fn upper_hull(points: &[(f64, f64)]) -> Vec<(f64, f64)> {
    let mut hull: Vec<(f64, f64)> = Vec::new();
    for &pt in points {
        while hull.len() >= 2 {
            let (a, b) = (hull[hull.len() - 2], hull[hull.len() - 1]);
            let cross = (b.0 - a.0) * (pt.1 - a.1) - (b.1 - a.1) * (pt.0 - a.0);
            if cross >= 0.0 {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(pt);
    }
    hull
}

fn build_hull(curve: &DispersionCurve) -> Vec<(f64, f64)> {
    let mut pts = vec![(0.0, 0.0)];
    for k in 1..HULL_GRID {
        let q = PI * k as f64 / HULL_GRID as f64;
        if let Some((e, _)) = curve.lower(q) {
            pts.push((q, e));
        }
    }
    match (curve.threshold, curve.lower(PI)) {
        (Some(t), Some((e, _))) => pts.push((PI, t.min(e))),
        (Some(t), None) => pts.push((PI, t)),
        (None, Some((e, _))) => pts.push((PI, e)),
        (None, None) => {}
    }
    upper_hull(&pts)
}

impl DispersionCurve {
    /// Finite samples.
    pub fn waves(&self) -> impl Iterator<Item = &DispersionSample> {
        self.samples.iter().filter(|s| s.is_wave())
    }

    /// Every `(E, c)` on the interpolated curve with reduced momentum `q`.
    pub fn candidates(&self, q: f64) -> Vec<(f64, f64)> {
        let mut out = Vec::new();
        for run in &self.runs {
            if run.len() == 1 {
                if (class_of(run[0].p).abs() - q).abs() <= 1e-14 {
                    out.push((run[0].e, run[0].c));
                }
                continue;
            }
            for w in run.windows(2) {
                let (a, b) = (w[0], w[1]);
                let (lo, hi) = (a.p.min(b.p), a.p.max(b.p));
                if hi == lo {
                    continue;
                }
                let k_min = ((lo - q) / TAU).floor() as i64 - 1;
                let k_max = ((hi + q) / TAU).ceil() as i64 + 1;
                for k in k_min..=k_max {
                    for target in [q + TAU * k as f64, TAU * k as f64 - q] {
                        if target < lo || target > hi {
                            continue;
                        }
                        let alpha = (target - a.p) / (b.p - a.p);
                        out.push((a.e + alpha * (b.e - a.e), a.c + alpha * (b.c - a.c)));
                    }
                }
            }
        }
        out
    }

    /// Lowest `(E, c)` with reduced momentum `q`.
    fn lower(&self, q: f64) -> Option<(f64, f64)> {
        self.candidates(q).into_iter().min_by(|x, y| x.0.total_cmp(&y.0))
    }

    fn hull_at(&self, q: f64) -> f64 {
        let h = &self.hull;
        if h.is_empty() {
            return f64::NAN;
        }
        let last = h[h.len() - 1];
        if q >= last.0 {
            // Beyond the last hull vertex a nondecreasing concave estimate
            // is flat.
            return last.1;
        }
        let k = h.partition_point(|v| v.0 <= q).max(1);
        let (a, b) = (h[k - 1], h[k]);
        a.1 + (q - a.0) / (b.0 - a.0) * (b.1 - a.1)
    }

    /// The envelope at any valuation `p` (even and `2π`-periodic).
    pub fn envelope_point(&self, p: f64) -> Result<EnvelopePoint> {
        let n = self.waves().count();
        if n < 2 {
            return Err(TwaveError::InsufficientSamples { needed: 2, got: n });
        }
        // Reducing only outside [-π, π] keeps emin1(-p) = emin1(p) bit for bit.
        let q = if p.abs() <= PI { p.abs() } else { class_of(p).abs() };
        if q == 0.0 {
            return Ok(EnvelopePoint {
                p: q,
                emin1: 0.0,
                source: EnvelopeSource::Origin,
            });
        }
        let hull = self.hull_at(q);
        let (mut value, mut source) = match self.lower(q) {
            // The hull chords undershoot a concave curve by O(h^2) between
            // grid nodes; only a clear gap means the samples are not concave.
            Some((e, _)) if hull >= e - 1e-6 => (e, EnvelopeSource::Sampled),
            _ => (hull, EnvelopeSource::GapInterpolated),
        };
        if SQRT_2 * q < value {
            value = SQRT_2 * q;
            source = EnvelopeSource::CappedSqrt2;
        }
        if let Some(t) = self.threshold {
            if t < value {
                value = t;
                source = EnvelopeSource::CappedThreshold;
            }
        }
        Ok(EnvelopePoint { p: q, emin1: value, source })
    }

    pub fn emin1(&self, p: f64) -> Result<f64> {
        self.envelope_point(p).map(|pt| pt.emin1)
    }

    /// One-sided slopes of the envelope at `p` by differences over `δ`.
    pub fn slopes(&self, p: f64, delta: f64) -> Result<(f64, f64)> {
        let f0 = self.emin1(p)?;
        let left = (f0 - self.emin1(p - delta)?) / delta;
        let right = (self.emin1(p + delta)? - f0) / delta;
        Ok((left, right))
    }

    /// Speeds of the waves attaining the envelope at `p` (within `tol`).
    pub fn attained_speeds(&self, p: f64, tol: f64) -> Result<Vec<f64>> {
        let best = self.envelope_point(p)?;
        if best.source != EnvelopeSource::Sampled {
            return Ok(Vec::new());
        }
        let mut speeds: Vec<f64> = self
            .candidates(best.p)
            .into_iter()
            .filter(|(e, _)| *e <= best.emin1 + tol)
            .map(|(_, c)| c)
            .collect();
        speeds.sort_by(f64::total_cmp);
        speeds.dedup_by(|a, b| (*a - *b).abs() < 1e-6);
        Ok(speeds)
    }

    /// The envelope on `n + 1` equally spaced momenta in `[0, π]`.
    pub fn envelope_grid(&self, n: usize) -> Result<Vec<EnvelopeRow>> {
        let delta = 1e-5;
        (0..=n)
            .map(|k| {
                let p = PI * k as f64 / n.max(1) as f64;
                let pt = self.envelope_point(p)?;
                let (left, right) = self.slopes(p, delta)?;
                Ok(EnvelopeRow {
                    p,
                    emin1: pt.emin1,
                    slope_left: left,
                    slope_right: right,
                    source: pt.source,
                })
            })
            .collect()
    }
}

/// A row of the sampled envelope.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct EnvelopeRow {
    pub p: f64,
    pub emin1: f64,
    pub slope_left: f64,
    pub slope_right: f64,
    pub source: EnvelopeSource,
}

/// A momentum where the left and right slopes of the envelope differ.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct Kink {
    pub p: f64,
    pub slope_left: f64,
    pub slope_right: f64,
}

impl Kink {
    pub fn gap(&self) -> f64 {
        self.slope_left - self.slope_right
    }
}

/// A momentum attained by two waves of different speeds.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct TwoSpeedPoint {
    pub p: f64,
    pub energy: f64,
    pub c1: f64,
    pub c2: f64,
    pub slope_left: f64,
    pub slope_right: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct CurveDiagnostics {
    pub concave: bool,
    /// Largest second difference of the envelope on the grid.
    pub worst_concavity: f64,
    pub lipschitz_constant: f64,
    /// `min (√2 p - E¹_min(p))` over grid momenta in `[0.05, π]`.
    pub subsonic_gap: f64,
    /// `√2 |⟦P(c)⟧| > E(c)` per finite sample.
    pub sample_subsonic: Vec<(f64, bool)>,
    /// Largest `|ΔE/ΔP - c|` over interior samples (three-point differences).
    pub slope_speed_error: Option<f64>,
    /// Kinks in `(0, π)` and the cusp at `π`.
    pub cusp_points: Vec<Kink>,
    pub two_speed_points: Vec<TwoSpeedPoint>,
    pub threshold: Option<f64>,
    pub grid: usize,
}

/// Structural checks of the envelope on a grid of `n + 1` momenta in `[0, π]`.
pub fn diagnostics(curve: &DispersionCurve, n: usize) -> Result<CurveDiagnostics> {
    let count = curve.waves().count();
    if count < 10 {
        return Err(TwaveError::InsufficientSamples { needed: 10, got: count });
    }
    let n = n.max(8);
    let h = PI / n as f64;
    let ps: Vec<f64> = (0..=n).map(|k| h * k as f64).collect();
    let f: Vec<f64> = ps.iter().map(|&p| curve.emin1(p)).collect::<Result<_>>()?;

    let worst_concavity = (1..n).map(|k| f[k - 1] - 2.0 * f[k] + f[k + 1]).fold(f64::NEG_INFINITY, f64::max);
    let chords: Vec<f64> = (0..n).map(|k| (f[k + 1] - f[k]) / h).collect();
    let lipschitz_constant = chords.iter().map(|s| s.abs()).fold(0.0, f64::max);
    let subsonic_gap = ps
        .iter()
        .zip(&f)
        .filter(|(p, _)| **p >= 0.05)
        .map(|(p, e)| SQRT_2 * p - e)
        .fold(f64::INFINITY, f64::min);
    let sample_subsonic = curve.waves().map(|s| (s.c, SQRT_2 * s.p > s.energy)).collect();

    let mut cusp_points = Vec::new();
    let mut two_speed_points = Vec::new();
    for k in 1..n {
        if chords[k - 1] - chords[k] > CUSP_GAP {
            // Locate the kink more precisely through the switch of the
            // attaining wave, when two branches cross.
            match two_speed_point(curve, ps[k - 1], ps[k + 1])? {
                Some(t) => {
                    cusp_points.push(Kink {
                        p: t.p,
                        slope_left: t.slope_left,
                        slope_right: t.slope_right,
                    });
                    two_speed_points.push(t);
                }
                None => cusp_points.push(Kink {
                    p: ps[k],
                    slope_left: chords[k - 1],
                    slope_right: chords[k],
                }),
            }
        }
    }
    // At π the envelope is even, so the right slope is minus the left one.
    let (left_pi, _) = curve.slopes(PI, 1e-5)?;
    if 2.0 * left_pi > CUSP_GAP {
        cusp_points.push(Kink {
            p: PI,
            slope_left: left_pi,
            slope_right: -left_pi,
        });
    }
    cusp_points.dedup_by(|a, b| (a.p - b.p).abs() < 2.0 * h);
    two_speed_points.dedup_by(|a, b| (a.p - b.p).abs() < 2.0 * h);

    Ok(CurveDiagnostics {
        concave: worst_concavity <= 1e-6,
        worst_concavity,
        lipschitz_constant,
        subsonic_gap,
        sample_subsonic,
        slope_speed_error: slope_speed_error(curve),
        cusp_points,
        two_speed_points,
        threshold: curve.threshold,
        grid: n,
    })
}

fn argmin_speed(curve: &DispersionCurve, p: f64) -> Option<f64> {
    curve.lower(class_of(p).abs()).map(|(_, c)| c)
}

/// Bisects for the momentum where the attaining speed jumps, if it does.
fn two_speed_point(curve: &DispersionCurve, a: f64, b: f64) -> Result<Option<TwoSpeedPoint>> {
    let (Some(ca), Some(cb)) = (argmin_speed(curve, a), argmin_speed(curve, b)) else {
        return Ok(None);
    };
    if (ca - cb).abs() < 0.05 {
        return Ok(None);
    }
    let (mut lo, mut hi) = (a, b);
    for _ in 0..60 {
        let mid = 0.5 * (lo + hi);
        let Some(cm) = argmin_speed(curve, mid) else { return Ok(None) };
        if (cm - ca).abs() < (cm - cb).abs() {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let p = 0.5 * (lo + hi);
    let energy = curve.emin1(p)?;
    let tol = 1e-9 * energy.abs().max(1.0);
    let near: Vec<f64> = curve
        .candidates(class_of(p).abs())
        .into_iter()
        .filter(|(e, _)| *e <= energy + tol + 1e-12)
        .map(|(_, c)| c)
        .collect();
    let c1 = near.iter().copied().fold(f64::INFINITY, f64::min);
    let c2 = near.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if !(c2 - c1 > 0.05) {
        return Ok(None);
    }
    let (slope_left, slope_right) = curve.slopes(p, 1e-4)?;
    Ok(Some(TwoSpeedPoint {
        p,
        energy,
        c1,
        c2,
        slope_left,
        slope_right,
    }))
}

/// `max |dE/dc / (dP/dc) - c|` over interior samples with both neighbors.
fn slope_speed_error(curve: &DispersionCurve) -> Option<f64> {
    let s = &curve.samples;
    let mut worst: Option<f64> = None;
    for i in 1..s.len().saturating_sub(1) {
        if !(s[i - 1].is_wave() && s[i].is_wave() && s[i + 1].is_wave()) {
            continue;
        }
        if curve.transitions.iter().any(|&t| t > s[i - 1].c && t < s[i + 1].c) {
            continue;
        }
        let c = [s[i - 1].c, s[i].c, s[i + 1].c];
        let p = [s[i - 1].momentum, s[i].momentum, s[i + 1].momentum];
        let e = [s[i - 1].energy, s[i].energy, s[i + 1].energy];
        let dp = derivative3(&c, &p, 1);
        if dp.abs() < 1e-8 {
            continue;
        }
        let err = (derivative3(&c, &e, 1) / dp - c[1]).abs();
        worst = Some(worst.map_or(err, |w: f64| w.max(err)));
    }
    worst
}

/// Energy and momentum of an explicit small-amplitude field.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct TestFunction {
    pub momentum: f64,
    pub energy: f64,
    pub kinetic: f64,
    pub potential: f64,
}

// Even bump b(u) = exp(-1/(1 - u^2)) on (-1, 1) and its derivatives.
fn bump(u: f64) -> (f64, f64, f64) {
    if u.abs() >= 1.0 {
        return (0.0, 0.0, 0.0);
    }
    let w = 1.0 - u * u;
    let b = (-1.0 / w).exp();
    (b, -2.0 * u / (w * w) * b, (6.0 * u.powi(4) - 2.0) / w.powi(4) * b)
}

/// `ρ = 1 - (ε/λ) χ'(x/λ)`, `θ = σ χ(x/λ)` with `ε = 2^{-3/4} √(pλ)`,
/// `σ = 2^{-1/4} √(pλ)` and an even bump `χ` normalized to `∫ χ'^2 = 1`;
/// its momentum is exactly `p` and its energy tends to `√2 p` as `λ → ∞`.
pub fn test_function_energy(model: &Nonlinearity, p: f64, lam: f64) -> Result<TestFunction> {
    if !(p >= 0.0 && lam > 0.0) {
        return Err(TwaveError::InvalidInput(format!("need p >= 0 and λ > 0, got p = {p}, λ = {lam}")));
    }
    if p == 0.0 {
        return Ok(TestFunction {
            momentum: 0.0,
            energy: 0.0,
            kinetic: 0.0,
            potential: 0.0,
        });
    }
    let tol = QuadTol::new(1e-14, 1e-12);
    let norm2 = integrate(|u| bump(u).1.powi(2), -1.0, 1.0, tol)?.value;
    let k = 1.0 / norm2.sqrt();
    let max_d1 = (0..=2000)
        .map(|i| (k * bump(-1.0 + i as f64 / 1000.0).1).abs())
        .fold(0.0, f64::max);
    let eps = 2f64.powf(-0.75) * (p * lam).sqrt();
    let sigma = 2f64.powf(-0.25) * (p * lam).sqrt();
    let margin = 1.0 - eps / lam * max_d1;
    if !(margin > 0.0) {
        return Err(TwaveError::AmplitudeTooLarge { margin });
    }
    // With x = λu: ρ(u) = 1 - (ε/λ) k b'(u), θ(u) = σ k b(u).
    let fields = |u: f64| {
        let (_, d1, d2) = bump(u);
        let rho = 1.0 - eps / lam * k * d1;
        let drho = -eps / (lam * lam) * k * d2;
        let dtheta = sigma / lam * k * d1;
        (rho, drho, dtheta)
    };
    let momentum = integrate(
        |u| {
            let (rho, _, dtheta) = fields(u);
            lam * (1.0 - rho * rho) * dtheta
        },
        -1.0,
        1.0,
        tol,
    )?
    .value;
    let kinetic = integrate(
        |u| {
            let (rho, drho, dtheta) = fields(u);
            lam * (drho * drho + rho * rho * dtheta * dtheta)
        },
        -1.0,
        1.0,
        tol,
    )?
    .value;
    let potential = integrate(
        |u| {
            let (rho, _, _) = fields(u);
            lam * model.v(rho * rho)
        },
        -1.0,
        1.0,
        tol,
    )?
    .value;
    Ok(TestFunction {
        momentum,
        energy: kinetic + potential,
        kinetic,
        potential,
    })
}
