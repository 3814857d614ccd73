//! Numerical checks of the structural assumptions on a nonlinearity.
//!
//! * `A1`: normalization `F(1) = 0`, `F'(1) = -1`, consistency `V' = -F`
//!   and `V(s) ≈ ½(s-1)^2` near 1.
//! * `A2`: polynomial growth of `|F|`, estimated by fitting `a + b s^p` on
//!   the tail of the grid.
//! * `B1`: `V > 0` off 1 and `H(s) → ∞`.
//! * `B2`: `V > 0` off 1 and `V(s) >= s^γ` beyond some `s0`.

use serde::Serialize;

use crate::error::{Result, TwaveError};
use crate::nonlinearity::{potential_h, Nonlinearity, PotentialSource};
use crate::numerics::fit::lsq2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum AssumptionId {
    A1,
    A2,
    B1,
    B2,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Verdict {
    Pass,
    Fail,
    Unknown,
}

#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub id: AssumptionId,
    pub verdict: Verdict,
    /// Named numbers supporting the verdict (failing `s`, fitted exponent, ...).
    pub witness: Vec<(String, f64)>,
    pub note: String,
}

impl Check {
    pub fn witness(&self, key: &str) -> Option<f64> {
        self.witness.iter().find(|(k, _)| k == key).map(|(_, v)| *v)
    }
}

/// Uniform sample grid on `[0, s_max]`.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct SampleGrid {
    pub s_max: f64,
    pub n: usize,
}

impl SampleGrid {
    /// Default grid for a model: `s_max = max(10, 2 s0)`, 2001 points.
    pub fn for_model(model: &Nonlinearity) -> Self {
        let s0 = model.coercivity.map(|(_, s0)| s0).unwrap_or(0.0);
        SampleGrid {
            s_max: 10f64.max(2.0 * s0),
            n: 2001,
        }
    }

    pub fn points(&self) -> Vec<f64> {
        (0..self.n)
            .map(|i| self.s_max * i as f64 / (self.n - 1) as f64)
            .collect()
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct AssumptionReport {
    pub model: String,
    pub checks: Vec<Check>,
    pub grid: SampleGrid,
    pub regularity: String,
}

impl AssumptionReport {
    pub fn get(&self, id: AssumptionId) -> &Check {
        self.checks.iter().find(|c| c.id == id).expect("all ids are checked")
    }

    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.verdict == Verdict::Pass)
    }
}

pub fn check_assumptions(model: &Nonlinearity, grid: SampleGrid) -> Result<AssumptionReport> {
    let s0 = model.coercivity.map(|(_, s0)| s0).unwrap_or(0.0);
    if grid.n < 10 || grid.s_max < 4f64.max(2.0 * s0) {
        return Err(TwaveError::InvalidInput(format!(
            "assumption grid must have s_max >= max(4, 2 s0) = {} and >= 10 points",
            4f64.max(2.0 * s0)
        )));
    }
    let s = grid.points();
    let positive = positivity(model, &s);
    let checks = vec![
        check_a1(model, &s),
        check_a2(model, &s),
        check_b1(model, &s, &positive)?,
        check_b2(model, &s, &positive),
    ];
    let regularity = match model.spec().map(|s| &s.kind) {
        Some(crate::nonlinearity::ModelKind::Table(_)) => {
            "F tabulated and interpolated by monotone cubics: C^1 between samples, linear beyond the table".into()
        }
        Some(_) => "closed-form potential, C^2 piecewise blends".into(),
        None => "user-supplied functions".into(),
    };
    Ok(AssumptionReport {
        model: model.name.clone(),
        checks,
        grid,
        regularity,
    })
}

/// First grid point (off 1) where `V <= 0`, if any.
fn positivity(model: &Nonlinearity, s: &[f64]) -> Option<f64> {
    s.iter()
        .copied()
        .find(|&x| (x - 1.0).abs() > 1e-9 && !(model.v(x) > 0.0))
}

fn check_a1(model: &Nonlinearity, s: &[f64]) -> Check {
    let f1 = model.f(1.0);
    let fp1 = model.f_prime(1.0);
    let v1 = model.v(1.0);
    // Quadrature noise in V forbids small difference steps.
    let (consistency_tol, step): (f64, f64) = match model.potential_source() {
        PotentialSource::Analytic => (1e-8, 1e-6),
        PotentialSource::Quadrature => (1e-6, 1e-5),
    };
    // V' by central differences against -F.
    let mut worst = (0.0f64, 0.0f64);
    for &x in s.iter().filter(|&&x| x > 1e-3) {
        let h = step * (1.0 + x);
        let dv = (model.v(x + h) - model.v(x - h)) / (2.0 * h);
        let err = (dv + model.f(x)).abs() / (1.0 + model.f(x).abs());
        if err > worst.0 {
            worst = (err, x);
        }
    }
    // FD truncation error is O(h^2 V''') so relax by that amount.
    let consistency_ok = worst.0 <= consistency_tol.max(1e-7);
    let ratio = |d: f64| model.v(1.0 + d) / (0.5 * d * d) - 1.0;
    let near: Vec<f64> = [1e-1, 1e-2, 1e-3, -1e-1, -1e-2, -1e-3].iter().map(|&d| ratio(d)).collect();
    let shrinking = near[2].abs() <= near[1].abs() + 1e-6
        && near[5].abs() <= near[4].abs() + 1e-6
        && near[2].abs() < 0.05
        && near[5].abs() < 0.05;
    let normalized = f1.abs() <= 1e-8 && (fp1 + 1.0).abs() <= 1e-6 && v1.abs() <= 1e-10;
    let verdict = if normalized && consistency_ok && shrinking { Verdict::Pass } else { Verdict::Fail };
    Check {
        id: AssumptionId::A1,
        verdict,
        witness: vec![
            ("F(1)".into(), f1),
            ("F'(1)".into(), fp1),
            ("V(1)".into(), v1),
            ("max |V'+F|".into(), worst.0),
            ("at s".into(), worst.1),
            ("V/(½(s-1)^2)-1 at 1+1e-3".into(), near[2]),
            ("V/(½(s-1)^2)-1 at 1-1e-3".into(), near[5]),
        ],
        note: "normalization, V/F consistency, quadratic behaviour at 1".into(),
    }
}

fn check_a2(model: &Nonlinearity, s: &[f64]) -> Check {
    let tail: Vec<f64> = s.iter().copied().filter(|&x| x >= 2.0).collect();
    let y: Vec<f64> = tail.iter().map(|&x| model.f(x).abs()).collect();
    let ones = vec![1.0; tail.len()];
    // Exponent search with (a, b) solved by linear least squares.
    let fit_at = |p: f64| -> Option<(f64, f64, f64, f64)> {
        let u: Vec<f64> = tail.iter().map(|x| x.powf(p)).collect();
        let (a, b) = lsq2(&ones, &u, &y)?;
        let mut resid = 0.0f64;
        for (k, &t) in y.iter().enumerate() {
            let m = a + b * u[k];
            if !(m > 0.0 && t > 0.0) {
                return None;
            }
            resid = resid.max((m.ln() - t.ln()).abs());
        }
        Some((p, a, b, resid))
    };
    let pick = |best: Option<(f64, f64, f64, f64)>, ps: &mut dyn Iterator<Item = f64>| {
        ps.filter_map(fit_at).fold(best, |acc, c| match acc {
            Some(b) if b.3 <= c.3 => Some(b),
            _ => Some(c),
        })
    };
    let mut best = pick(None, &mut (0..=160).map(|i| 0.05 * i as f64));
    if let Some((p, ..)) = best {
        best = pick(best, &mut (-50..=50).map(|i| p + 0.001 * i as f64));
    }
    match best {
        Some((p, a, b, resid)) => {
            let mut verdict = if resid < 0.1 { Verdict::Pass } else { Verdict::Fail };
            if let Some(meta) = model.growth_p0 {
                if (meta - p).abs() > 0.1 {
                    verdict = Verdict::Fail;
                }
            }
            Check {
                id: AssumptionId::A2,
                verdict,
                witness: vec![
                    ("p0".into(), p),
                    ("a".into(), a),
                    ("b".into(), b),
                    ("max log residual".into(), resid),
                ],
                note: "fit |F(s)| ≈ a + b s^p0 on s >= 2".into(),
            }
        }
        None => Check {
            id: AssumptionId::A2,
            verdict: Verdict::Unknown,
            witness: vec![],
            note: "no admissible power-law fit on the grid tail".into(),
        },
    }
}

fn check_b1(model: &Nonlinearity, s: &[f64], positive: &Option<f64>) -> Result<Check> {
    let s_max = *s.last().expect("non-empty grid");
    let h_max = potential_h(model, s_max)?;
    if let Some(bad) = positive {
        return Ok(Check {
            id: AssumptionId::B1,
            verdict: Verdict::Fail,
            witness: vec![("s with V <= 0".into(), *bad), ("H(s_max)".into(), h_max)],
            note: "V must be positive off 1".into(),
        });
    }
    // H diverges when the integrand √V(τ^2) decays no faster than 1/τ, i.e.
    // when τ √V(τ^2) does not collapse along the tail of the grid.
    let weight = |x: f64| x.sqrt() * model.v(x).sqrt();
    let tail: Vec<f64> = s.iter().copied().filter(|&x| x >= 0.25 * s_max).collect();
    let start = weight(tail[0]);
    let (min_w, at) = tail
        .iter()
        .map(|&x| (weight(x), x))
        .fold((f64::INFINITY, 0.0), |acc, v| if v.0 < acc.0 { v } else { acc });
    let verdict = if min_w >= 0.5 * start { Verdict::Pass } else { Verdict::Fail };
    Ok(Check {
        id: AssumptionId::B1,
        verdict,
        witness: vec![
            ("H(s_max)".into(), h_max),
            ("tail min τ√V(τ^2)".into(), min_w),
            ("at s".into(), at),
            ("tail start τ√V(τ^2)".into(), start),
        ],
        note: "H(s) -> ∞ judged from the decay of τ√V(τ^2) on the tail".into(),
    })
}

fn check_b2(model: &Nonlinearity, s: &[f64], positive: &Option<f64>) -> Check {
    if let Some(bad) = positive {
        return Check {
            id: AssumptionId::B2,
            verdict: Verdict::Fail,
            witness: vec![("s with V <= 0".into(), *bad)],
            note: "V must be positive off 1".into(),
        };
    }
    let s_max = *s.last().expect("non-empty grid");
    let holds_from = |gamma: f64, s0: f64| -> Option<f64> {
        s.iter()
            .copied()
            .filter(|&x| x >= s0)
            .find(|&x| model.v(x) < x.powf(gamma))
    };
    if let Some((gamma, s0)) = model.coercivity {
        if s0 >= s_max {
            return Check {
                id: AssumptionId::B2,
                verdict: Verdict::Unknown,
                witness: vec![("gamma".into(), gamma), ("s0".into(), s0)],
                note: "grid does not extend beyond s0".into(),
            };
        }
        let min_ratio = s
            .iter()
            .filter(|&&x| x >= s0)
            .map(|&x| model.v(x) / x.powf(gamma))
            .fold(f64::INFINITY, f64::min);
        return match holds_from(gamma, s0) {
            None => Check {
                id: AssumptionId::B2,
                verdict: Verdict::Pass,
                witness: vec![("gamma".into(), gamma), ("s0".into(), s0), ("min V/s^gamma".into(), min_ratio)],
                note: "V(s) >= s^gamma for grid s >= s0".into(),
            },
            Some(bad) => Check {
                id: AssumptionId::B2,
                verdict: Verdict::Fail,
                witness: vec![("gamma".into(), gamma), ("s0".into(), s0), ("failing s".into(), bad)],
                note: "V(s) < s^gamma beyond s0".into(),
            },
        };
    }
    for gamma in [2.0, 1.5, 1.0, 0.5, 0.25] {
        // Smallest grid point from which the bound holds to the end.
        let mut s0 = None;
        for &x in s.iter().rev() {
            if x < 1.0 || model.v(x) < x.powf(gamma) {
                break;
            }
            s0 = Some(x);
        }
        if let Some(s0) = s0 {
            if s0 <= 0.5 * s_max {
                return Check {
                    id: AssumptionId::B2,
                    verdict: Verdict::Pass,
                    witness: vec![("gamma".into(), gamma), ("s0".into(), s0)],
                    note: "largest gamma from the ladder {2, 1.5, 1, 0.5, 0.25} holding on the upper half of the grid".into(),
                };
            }
        }
    }
    Check {
        id: AssumptionId::B2,
        verdict: Verdict::Fail,
        witness: vec![("V(s_max)".into(), model.v(s_max))],
        note: "no gamma in {2, 1.5, 1, 0.5, 0.25} works on the grid".into(),
    }
}
