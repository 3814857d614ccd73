//! One-dimensional traveling waves `ψ_c = √ϱ e^{iθ}` by quadrature.
//!
//! With `g(s, c) = 4 s V(s) - c^2 (s - 1)^2`, the squared modulus solves the
//! first integral `(ϱ')^2 = g(ϱ, c)` and the phase `θ' = (c/2)(1 - ϱ)/ϱ`.
//! The profile starts at the turning point `ϱ(0) = ζ(c)` and is continued
//! outward by ODE integration:
//!
//! 1. the regular second-order form `ϱ'' = ½ ∂g/∂s(ϱ, c)` with `ϱ'(0) = 0`
//!    until `ϱ` is half way to 1 (the first-order form is singular at the
//!    turning point);
//! 2. the first-order form `ϱ' = ±√g(ϱ, c)` up to `x_max` (the second-order
//!    form is unstable near the saddle `ϱ = 1`).
//!
//! Energy and momentum are computed both as integrals in `s = ϱ` (with the
//! inverse square root endpoint removed by substitution) and as integrals in
//! `x` over the sampled profile; the two must agree.

use std::f64::consts::{FRAC_PI_2, PI};

use serde::{Deserialize, Serialize};

use crate::error::{NumericalError, Result, TwaveError};
use crate::momentum::{class_of, MomentumClass};
use crate::jet::Jet;
use crate::nonlinearity::Nonlinearity;
use crate::numerics::fit;
use crate::numerics::ode::{Dopri5, OdeTol};
use crate::numerics::quad::{integrate, QuadTol};
use crate::numerics::roots::brent;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Branch {
    /// `|ψ| < 1`: dark solitons.
    Lower,
    /// `|ψ| > 1`: bright-on-background waves, when `g(., c)` vanishes above 1.
    Upper,
}

impl std::fmt::Display for Branch {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Branch::Lower => "lower",
            Branch::Upper => "upper",
        })
    }
}

/// The zero of `g(., c)` where the profile turns.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct TurningPoint {
    pub c: f64,
    pub branch: Branch,
    /// `ζ(c)` (lower branch) or `ζ̃(c)` (upper branch).
    pub zeta: f64,
    /// `L(c) = G(ζ, c)`, or `-∞` at a double root.
    pub l_value: f64,
    pub finite: bool,
    pub derivative_g: f64,
    pub second_derivative_g: f64,
}

/// Relative threshold on `|∂g/∂s|` above which a zero is declared simple.
pub const SIMPLE_ZERO_TOL: f64 = 1e-6;
/// Relative threshold on `|∂²g/∂s²|` below which a non-simple zero is
/// considered degenerate beyond second order.
pub const DOUBLE_ZERO_TOL: f64 = 1e-3;

fn check_speed(c: f64) -> Result<()> {
    if !c.is_finite() || c * c >= 2.0 {
        return Err(TwaveError::Supersonic { c });
    }
    Ok(())
}

/// Locates `ζ(c) = sup{s ∈ [0, 1) : g(s, c) = 0}` (lower branch) or
/// `ζ̃(c) = inf{s > 1 : g(s, c) = 0}` (upper branch) and classifies the zero.
pub fn turning_point(model: &Nonlinearity, c: f64, branch: Branch) -> Result<TurningPoint> {
    check_speed(c)?;
    let c = c.abs();
    let zeta = match branch {
        Branch::Lower => lower_zero(model, c)?,
        Branch::Upper => upper_zero(model, c)?,
    };
    let gj = model.g_jet(zeta, c);
    let scale = 1.0 + c * c;
    let slope = match branch {
        Branch::Lower => gj.d1,
        Branch::Upper => -gj.d1,
    };
    let (finite, l_value) = if slope > SIMPLE_ZERO_TOL * scale {
        (true, l_value(model, c, zeta, branch)?)
    } else if gj.d2 > DOUBLE_ZERO_TOL * scale {
        (false, f64::NEG_INFINITY)
    } else {
        return Err(TwaveError::UndecidableFiniteness {
            c,
            zeta,
            dg: gj.d1,
            d2g: gj.d2,
        });
    };
    if branch == Branch::Lower && c == 0.0 && zeta == 0.0 && !finite {
        return Err(TwaveError::NoTurningPoint {
            c,
            reason: "V(0) = 0: no black soliton".into(),
        });
    }
    Ok(TurningPoint {
        c,
        branch,
        zeta,
        l_value,
        finite,
        derivative_g: gj.d1,
        second_derivative_g: gj.d2,
    })
}

fn lower_zero(model: &Nonlinearity, c: f64) -> Result<f64> {
    // Scan down from 1 for the first sign change. Near 1, g ≈ (2 - c^2)(1-s)^2,
    // so the scaled function keeps its sign away from round-off.
    let n = 4000;
    let scaled = |s: f64| model.g(s, c) / ((1.0 - s) * (1.0 - s));
    let mut prev = 1.0 - 1.0 / n as f64;
    if scaled(prev) <= 0.0 {
        return Err(TwaveError::NoTurningPoint {
            c,
            reason: "g(., c) is not positive just below 1".into(),
        });
    }
    for k in 2..=n {
        let s = 1.0 - k as f64 / n as f64;
        let gs = model.g(s, c);
        if gs <= 0.0 {
            if gs == 0.0 {
                return Ok(s);
            }
            let root = brent(|t| model.g(t, c), s, prev, 1e-14)?;
            // The side where g > 0 keeps the quadratures real.
            return Ok(if root.f_hi >= 0.0 { root.hi } else { root.x });
        }
        prev = s;
    }
    Err(TwaveError::NoTurningPoint {
        c,
        reason: "g(., c) > 0 on (0, 1)".into(),
    })
}

fn upper_zero(model: &Nonlinearity, c: f64) -> Result<f64> {
    let scaled = |s: f64| model.g(s, c) / ((1.0 - s) * (1.0 - s));
    let mut prev = 1.0 + 1e-4;
    if scaled(prev) <= 0.0 {
        return Err(TwaveError::NoTurningPoint {
            c,
            reason: "g(., c) is not positive just above 1".into(),
        });
    }
    let s_max = 1e3;
    let mut s = prev;
    while s < s_max {
        let next = (s * 1.002).max(s + 1e-4);
        let gs = model.g(next, c);
        if gs <= 0.0 {
            if gs == 0.0 {
                return Ok(next);
            }
            let root = brent(|t| model.g(t, c), prev, next, 1e-14)?;
            return Ok(if root.f_lo >= 0.0 { root.lo } else { root.x });
        }
        prev = next;
        s = next;
    }
    Err(TwaveError::NoTurningPoint {
        c,
        reason: format!("g(., c) > 0 on (1, {s_max}]"),
    })
}

fn quad_tol() -> QuadTol {
    QuadTol {
        abs: 1e-13,
        rel: 1e-12,
        max_intervals: 4000,
    }
}

/// `L(c) = G(ζ, c) = -∫_ζ^a ds / √g` with anchor `a = (ζ + 1)/2`; computed
/// with `s = ζ + u^2` which removes the inverse square root.
fn l_value(model: &Nonlinearity, c: f64, zeta: f64, branch: Branch) -> Result<f64> {
    let a = 0.5 * (zeta + 1.0);
    let w = (a - zeta).abs().sqrt();
    let dir = if branch == Branch::Lower { 1.0 } else { -1.0 };
    let jet0 = model.g_jet(zeta, c);
    let q = integrate(|u| 2.0 / root_g_over_u(model, c, zeta, dir, jet0, u), 0.0, w, quad_tol())?;
    Ok(-q.value)
}

/// `√g(ζ + dir·u^2, c) / u`, by Taylor expansion at small `u` where the
/// direct form loses its digits to cancellation.
fn root_g_over_u(model: &Nonlinearity, c: f64, zeta: f64, dir: f64, jet0: Jet, u: f64) -> f64 {
    if u < 1e-4 {
        let delta = dir * u * u;
        (dir * (jet0.d1 + 0.5 * jet0.d2 * delta)).abs().sqrt()
    } else {
        model.g(zeta + dir * u * u, c).max(0.0).sqrt() / u
    }
}

/// `g(1 - u, c) / u^2`. Below `u = 1e-5` rounding in `1 - u` dominates, so
/// the quotient is extrapolated linearly from `1e-5` and `2e-5`.
fn g_over_square_near_one(model: &Nonlinearity, c: f64, u: f64) -> f64 {
    const U0: f64 = 1e-5;
    let q = |u: f64| model.g(1.0 - u, c) / (u * u);
    if u >= U0 {
        q(u)
    } else {
        let (q0, q1) = (q(U0), q(2.0 * U0));
        q0 + (q1 - q0) * (u - U0) / U0
    }
}

/// `G(s, c) = ∫_a^s dτ / √g(τ, c)` on the lower branch, anchored at
/// `a = (ζ(c) + 1)/2`, for `ζ(c) < s < 1`.
pub fn primitive_g(model: &Nonlinearity, c: f64, s: f64) -> Result<f64> {
    let tp = turning_point(model, c, Branch::Lower)?;
    let c = c.abs();
    let zeta = tp.zeta;
    if !(s > zeta && s < 1.0) {
        return Err(TwaveError::InvalidInput(format!("G(s, c) needs {zeta} < s < 1, got {s}")));
    }
    let a = 0.5 * (zeta + 1.0);
    if s == a {
        return Ok(0.0);
    }
    let tol = QuadTol::new(1e-13, 1e-11);
    if s < a {
        // τ = ζ + u^2 near the turning point.
        let jet0 = model.g_jet(zeta, c);
        let q = integrate(
            |u| 2.0 / root_g_over_u(model, c, zeta, 1.0, jet0, u),
            (s - zeta).sqrt(),
            (a - zeta).sqrt(),
            tol,
        )?;
        Ok(-q.value)
    } else {
        // τ = 1 - (1 - a) e^{-v}; the integrand (1 - τ)/√g stays bounded as τ → 1.
        let v_end = ((1.0 - a) / (1.0 - s)).ln();
        let q = integrate(
            |v| {
                let one_minus = (1.0 - a) * (-v).exp();
                1.0 / g_over_square_near_one(model, c, one_minus).max(0.0).sqrt()
            },
            0.0,
            v_end,
            tol,
        )?;
        Ok(q.value)
    }
}

/// Output grid of a profile.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct ProfileGrid {
    /// Half-width; `None` selects `12 / √(2 - c^2)`.
    pub x_max: Option<f64>,
    /// Total number of points, made odd so that `x = 0` is a node.
    pub n_points: usize,
}

impl Default for ProfileGrid {
    fn default() -> Self {
        ProfileGrid {
            x_max: None,
            n_points: 8001,
        }
    }
}

impl ProfileGrid {
    pub fn half_width(&self, c: f64) -> f64 {
        self.x_max.unwrap_or_else(|| 12.0 / (2.0 - c * c).sqrt())
    }
}

/// Samples of a traveling wave on a grid symmetric about 0.
#[derive(Debug, Clone, Serialize)]
pub struct WaveProfile1D {
    pub c: f64,
    pub branch: Branch,
    pub x: Vec<f64>,
    /// Squared modulus `ϱ = |ψ|^2`.
    pub rho: Vec<f64>,
    /// Unwrapped phase with `θ(0) = 0`.
    pub theta: Vec<f64>,
    /// `ϱ'` from the ODE (not differenced).
    pub drho: Vec<f64>,
    /// `θ'` from the ODE.
    pub dtheta: Vec<f64>,
    pub zeta: f64,
}

impl WaveProfile1D {
    pub fn dx(&self) -> f64 {
        self.x[1] - self.x[0]
    }

    pub fn x_max(&self) -> f64 {
        *self.x.last().expect("non-empty")
    }

    /// `(Re ψ, Im ψ)` at every node.
    pub fn psi(&self) -> Vec<(f64, f64)> {
        self.rho
            .iter()
            .zip(&self.theta)
            .map(|(r, t)| {
                let m = r.max(0.0).sqrt();
                (m * t.cos(), m * t.sin())
            })
            .collect()
    }

    /// `(ϱ, θ)` at an arbitrary `x` by cubic Hermite interpolation with the
    /// stored derivatives; constant continuation beyond the grid.
    pub fn sample(&self, x: f64) -> (f64, f64) {
        let n = self.x.len();
        if x <= self.x[0] {
            return (self.rho[0], self.theta[0]);
        }
        if x >= self.x[n - 1] {
            return (self.rho[n - 1], self.theta[n - 1]);
        }
        let h = self.dx();
        let k = (((x - self.x[0]) / h).floor() as usize).min(n - 2);
        let t = (x - self.x[k]) / h;
        let herm = |y0: f64, y1: f64, m0: f64, m1: f64| {
            let t2 = t * t;
            let t3 = t2 * t;
            (2.0 * t3 - 3.0 * t2 + 1.0) * y0 + (t3 - 2.0 * t2 + t) * h * m0 + (-2.0 * t3 + 3.0 * t2) * y1 + (t3 - t2) * h * m1
        };
        (
            herm(self.rho[k], self.rho[k + 1], self.drho[k], self.drho[k + 1]),
            herm(self.theta[k], self.theta[k + 1], self.dtheta[k], self.dtheta[k + 1]),
        )
    }

    /// Complex conjugate: the wave of speed `-c`.
    pub fn conjugate(mut self) -> Self {
        self.c = -self.c;
        for t in self.theta.iter_mut().chain(self.dtheta.iter_mut()) {
            *t = -*t;
        }
        self
    }
}

/// Builds the traveling wave of speed `c` on `grid`.
pub fn build_profile(model: &Nonlinearity, c: f64, branch: Branch, grid: ProfileGrid) -> Result<WaveProfile1D> {
    check_speed(c)?;
    if c < 0.0 {
        return build_profile(model, -c, branch, grid).map(WaveProfile1D::conjugate);
    }
    let tp = turning_point(model, c, branch)?;
    if !tp.finite {
        return Err(TwaveError::InfiniteL { c, zeta: tp.zeta });
    }
    let x_max = grid.half_width(c);
    let m = grid.n_points.max(5) / 2;
    if !(x_max > 0.0) {
        return Err(TwaveError::InvalidInput(format!("x_max must be positive, got {x_max}")));
    }
    let dx = x_max / m as f64;
    let zeta = tp.zeta;
    let black = c == 0.0 && branch == Branch::Lower;

    let mut rho = vec![0.0; m + 1];
    let mut drho = vec![0.0; m + 1];
    let mut theta = vec![0.0; m + 1];
    let mut dtheta = vec![0.0; m + 1];
    let phase_rate = |r: f64| if black { 0.0 } else { 0.5 * c * (1.0 - r) / r };
    rho[0] = zeta;
    dtheta[0] = phase_rate(zeta);
    let tol = OdeTol {
        rtol: 1e-12,
        atol: 1e-15,
        ..Default::default()
    };
    let half_gap = 0.5 * (1.0 - zeta).abs();

    // Regular second-order start.
    let second = |_: f64, y: &[f64; 3]| [y[1], 0.5 * model.g_jet(y[0], c).d1, phase_rate(y[0])];
    let mut stage_a = Dopri5::new(0.0, [zeta, 0.0, 0.0], 1e-3 * dx, tol);
    let mut k = 0;
    while k < m && (rho[k] - zeta).abs() < half_gap {
        k += 1;
        stage_a.advance(&second, k as f64 * dx).map_err(|e| ode_error(e, c))?;
        let [r, dr, th] = stage_a.y;
        rho[k] = r;
        drho[k] = dr;
        theta[k] = th;
        dtheta[k] = phase_rate(r);
    }

    // Stable first-order continuation.
    let sign = if branch == Branch::Lower { 1.0 } else { -1.0 };
    let first = |_: f64, y: &[f64; 2]| [sign * model.g(y[0], c).max(0.0).sqrt(), phase_rate(y[0])];
    let mut stage_b = Dopri5::new(k as f64 * dx, [rho[k], theta[k]], 1e-2 * dx, tol);
    while k < m {
        k += 1;
        stage_b.advance(&first, k as f64 * dx).map_err(|e| ode_error(e, c))?;
        let [r, th] = stage_b.y;
        rho[k] = r;
        drho[k] = sign * model.g(r, c).max(0.0).sqrt();
        theta[k] = th;
        dtheta[k] = phase_rate(r);
    }
    if black {
        // ψ_0 = i sgn(x) √ϱ_0, i.e. θ = ±π/2.
        theta.iter_mut().skip(1).for_each(|t| *t = FRAC_PI_2);
    }

    // Mirror: ϱ even, θ odd.
    let n = 2 * m + 1;
    let mut profile = WaveProfile1D {
        c,
        branch,
        x: (0..n).map(|i| (i as f64 - m as f64) * dx).collect(),
        rho: vec![0.0; n],
        theta: vec![0.0; n],
        drho: vec![0.0; n],
        dtheta: vec![0.0; n],
        zeta,
    };
    for j in 0..=m {
        profile.rho[m + j] = rho[j];
        profile.rho[m - j] = rho[j];
        profile.drho[m + j] = drho[j];
        profile.drho[m - j] = -drho[j];
        profile.theta[m + j] = theta[j];
        profile.theta[m - j] = -theta[j];
        profile.dtheta[m + j] = dtheta[j];
        profile.dtheta[m - j] = dtheta[j];
    }
    Ok(profile)
}

fn ode_error(e: NumericalError, c: f64) -> TwaveError {
    TwaveError::Numerical(NumericalError::Other(format!("profile integration for c = {c}: {e}")))
}

/// Energy, momentum and decay of a profile.
#[derive(Debug, Clone, Serialize)]
pub struct WaveInvariants {
    pub c: f64,
    pub branch: Branch,
    /// `E¹ = 4 ∫ V / √g ds`.
    pub energy: f64,
    /// `c ∫ (1 - s)^2 / (s √g) ds`, or `π` for the black soliton.
    pub momentum_valuation: f64,
    #[serde(skip)]
    pub momentum_class: MomentumClass,
    pub decay_rate: f64,
    /// `∫ |ψ'|^2 + V(|ψ|^2) dx` over the samples.
    pub energy_x: f64,
    /// `∫ (1 - ϱ) θ' dx` over the samples.
    pub momentum_x: f64,
    /// `∫ |ψ'|^2 dx` and `∫ V(|ψ|^2) dx`; each is half the energy.
    pub kinetic: f64,
    pub potential: f64,
}

/// Relative agreement required between s-integrals and x-integrals.
pub const FORM_AGREEMENT_TOL: f64 = 1e-6;

/// Energy and momentum valuation of the wave of speed `c` as integrals in
/// `s`, without building a profile.
pub fn invariants_s_form(model: &Nonlinearity, c: f64, branch: Branch) -> Result<(f64, f64)> {
    let tp = turning_point(model, c, branch)?;
    invariants_at(model, &tp, c, branch)
}

/// As [`invariants_s_form`], from an already located turning point.
pub fn invariants_at(model: &Nonlinearity, tp: &TurningPoint, c: f64, branch: Branch) -> Result<(f64, f64)> {
    if !tp.finite {
        return Err(TwaveError::InfiniteL { c, zeta: tp.zeta });
    }
    let sgn_c = c.signum();
    let c = c.abs();
    let zeta = tp.zeta;
    let span = 1.0 - zeta;
    // s = ζ + (1 - ζ) t^2, ds = 2 (1 - ζ) t dt.
    let at = |t: f64| zeta + span * t * t;
    let jet0 = model.g_jet(zeta, c);
    // g(ζ + δ) / t^2 by Taylor expansion near t = 0, where direct evaluation
    // loses all digits to cancellation.
    let root_g_over_t = |t: f64| {
        if t < 1e-4 {
            let delta = span * t * t;
            (span * (jet0.d1 + 0.5 * jet0.d2 * delta)).abs().sqrt()
        } else {
            model.g(at(t), c).max(0.0).sqrt() / t
        }
    };
    let energy = integrate(
        |t| 8.0 * span.abs() * model.v(at(t)) / root_g_over_t(t),
        0.0,
        1.0,
        quad_tol(),
    )?
    .value;
    let momentum = if c == 0.0 && branch == Branch::Lower {
        PI
    } else {
        let m = integrate(
            |t| {
                let s = at(t);
                2.0 * span.abs() * (1.0 - s) * (1.0 - s) / (s * root_g_over_t(t))
            },
            0.0,
            1.0,
            quad_tol(),
        )?
        .value;
        sgn_c * c * m
    };
    Ok((energy, momentum))
}

pub fn wave_invariants(model: &Nonlinearity, profile: &WaveProfile1D) -> Result<WaveInvariants> {
    let (energy, momentum) = invariants_s_form(model, profile.c, profile.branch)?;
    let h = profile.dx();
    let n = profile.x.len();
    let dg0 = model.g_jet(profile.zeta, profile.c).d1;
    let mut kin = vec![0.0; n];
    let mut pot = vec![0.0; n];
    let mut mom = vec![0.0; n];
    for i in 0..n {
        let r = profile.rho[i];
        // |ψ'|^2 = ϱ'^2 / (4ϱ) + ϱ θ'^2, with the ϱ → 0 limit ∂g/∂s / 4.
        let modulus_part = if r > 1e-300 { profile.drho[i].powi(2) / (4.0 * r) } else { 0.25 * dg0 };
        kin[i] = modulus_part + r * profile.dtheta[i].powi(2);
        pot[i] = model.v(r);
        mom[i] = (1.0 - r) * profile.dtheta[i];
    }
    let trap = |f: &[f64]| h * (f[1..n - 1].iter().sum::<f64>() + 0.5 * (f[0] + f[n - 1]));
    // Trapezoid on every other node; |T_h - T_2h| bounds the error of T_h
    // when the core is barely resolved (slow waves with tiny ζ).
    let trap2 = |f: &[f64]| {
        let m = (n - 1) / 2;
        2.0 * h * ((1..m).map(|k| f[2 * k]).sum::<f64>() + 0.5 * (f[0] + f[2 * m]))
    };
    let kinetic = trap(&kin);
    let potential = trap(&pot);
    let energy_x = kinetic + potential;
    let black = profile.c == 0.0 && profile.branch == Branch::Lower;
    let momentum_x = if black { momentum } else { trap(&mom) };
    let coarse_gap = |f: &[f64], fine: f64| if n % 2 == 1 { (trap2(f) - fine).abs() } else { 0.0 };
    let e_gap = coarse_gap(&kin, kinetic) + coarse_gap(&pot, potential);
    let p_gap = if black { 0.0 } else { coarse_gap(&mom, momentum_x) };

    let scale_e = energy.abs().max(1e-12);
    if (energy_x - energy).abs() > (FORM_AGREEMENT_TOL * scale_e).max(e_gap) {
        return Err(TwaveError::Disagreement {
            what: format!("energy at c = {}", profile.c),
            s_form: energy,
            x_form: energy_x,
        });
    }
    let scale_p = momentum.abs().max(1e-12);
    if (momentum_x - momentum).abs() > (FORM_AGREEMENT_TOL * scale_p).max(p_gap) {
        return Err(TwaveError::Disagreement {
            what: format!("momentum at c = {}", profile.c),
            s_form: momentum,
            x_form: momentum_x,
        });
    }
    Ok(WaveInvariants {
        c: profile.c,
        branch: profile.branch,
        energy,
        momentum_valuation: momentum,
        momentum_class: class_of(momentum),
        decay_rate: decay_rate(profile).unwrap_or(f64::NAN),
        energy_x,
        momentum_x,
        kinetic,
        potential,
    })
}

/// Exponential rate of `|ϱ - 1|` fitted on the right tail where
/// `|ϱ - 1| ∈ [1e-8, 1e-3]`.
pub fn decay_rate(profile: &WaveProfile1D) -> Option<f64> {
    let (xs, ys): (Vec<f64>, Vec<f64>) = profile
        .x
        .iter()
        .zip(&profile.rho)
        .filter(|(x, r)| **x > 0.0 && (1e-8..=1e-3).contains(&(*r - 1.0).abs()))
        .map(|(x, r)| (*x, (r - 1.0).abs().ln()))
        .unzip();
    if xs.len() < 5 {
        return None;
    }
    fit::line(&xs, &ys).map(|f| -f.slope)
}

/// `max |ϱ'^2 + c^2 (ϱ - 1)^2 - 4 ϱ V(ϱ)|` with `ϱ'` from fourth-order
/// central differences of the samples (interior nodes).
pub fn first_integral_residual(model: &Nonlinearity, profile: &WaveProfile1D) -> f64 {
    let d = crate::momentum::derivative4(&profile.rho, profile.dx());
    let c2 = profile.c * profile.c;
    (2..profile.x.len() - 2)
        .map(|i| {
            let r = profile.rho[i];
            (d[i] * d[i] + c2 * (r - 1.0) * (r - 1.0) - 4.0 * r * model.v(r)).abs()
        })
        .fold(0.0, f64::max)
}

/// Speed of the lowest-energy lower-branch wave with `|⟦p(c)⟧| = p`, found by
/// scanning `c ∈ [0, √2)` and refining sign changes with Brent's method.
pub fn speed_for_momentum(model: &Nonlinearity, p: f64) -> Result<f64> {
    if !(p > 0.0 && p <= PI) {
        return Err(TwaveError::InvalidInput(format!("momentum must lie in (0, π], got {p}")));
    }
    const SAMPLES: usize = 200;
    let c_max = std::f64::consts::SQRT_2 * (1.0 - 1e-6);
    let residual = |c: f64| -> Option<(f64, f64)> {
        let (e, q) = invariants_s_form(model, c, Branch::Lower).ok()?;
        Some((class_of(q).abs() - p, e))
    };
    let samples: Vec<(f64, Option<(f64, f64)>)> = (0..=SAMPLES)
        .map(|k| {
            let c = c_max * k as f64 / SAMPLES as f64;
            (c, residual(c))
        })
        .collect();
    let mut best: Option<(f64, f64)> = None;
    let mut consider = |c: f64, e: f64| {
        if best.is_none_or(|(_, eb)| e < eb) {
            best = Some((c, e));
        }
    };
    for w in samples.windows(2) {
        let ((c0, Some((f0, e0))), (c1, Some((f1, _)))) = (w[0], w[1]) else {
            continue;
        };
        if f0 == 0.0 {
            consider(c0, e0);
        } else if f0 * f1 < 0.0 {
            let root = brent(|c| residual(c).map_or(f64::NAN, |r| r.0), c0, c1, 1e-14)?;
            if let Some((_, e)) = residual(root.x) {
                consider(root.x, e);
            }
        }
    }
    if let (c, Some((f, e))) = samples[SAMPLES] {
        if f == 0.0 {
            consider(c, e);
        }
    }
    best.map(|(c, _)| c).ok_or_else(|| {
        TwaveError::Numerical(NumericalError::Other(format!("no subsonic wave has momentum {p}")))
    })
}

/// Closed-form Gross–Pitaevskii waves for `0 <= c < √2`.
#[derive(Debug, Clone, Copy)]
pub struct GpOracle {
    pub c: f64,
    k: f64,
}

pub fn gp_oracle(c: f64) -> Result<GpOracle> {
    check_speed(c)?;
    Ok(GpOracle {
        c,
        k: (2.0 - c * c).sqrt(),
    })
}

impl GpOracle {
    /// `ϱ(x) = c^2/2 + (2 - c^2)/2 tanh^2(√(2-c^2) x / 2)`.
    pub fn rho(&self, x: f64) -> f64 {
        let t = (0.5 * self.k * x).tanh();
        0.5 * self.c * self.c + 0.5 * self.k * self.k * t * t
    }

    /// `θ(x) = arctan(√(2-c^2)/c · tanh(√(2-c^2) x / 2))`, `±π/2` at `c = 0`.
    pub fn theta(&self, x: f64) -> f64 {
        let t = (0.5 * self.k * x).tanh();
        if self.c == 0.0 {
            return if x == 0.0 { 0.0 } else { FRAC_PI_2.copysign(x) };
        }
        (self.k * t).atan2(self.c)
    }

    /// `⅔ (2 - c^2)^{3/2}`.
    pub fn energy(&self) -> f64 {
        2.0 / 3.0 * self.k.powi(3)
    }

    /// `2 arctan(√(2-c^2)/c) - c √(2-c^2)`.
    pub fn momentum(&self) -> f64 {
        2.0 * self.k.atan2(self.c) - self.c * self.k
    }

    /// `ζ(c) = c^2 / 2`.
    pub fn zeta(&self) -> f64 {
        0.5 * self.c * self.c
    }

    /// `(1/√(2-c^2)) ln |(√(2-c^2) + √(2s-c^2)) / (√(2-c^2) - √(2s-c^2))|`,
    /// a primitive of `1/√g` on `(ζ, 1)`.
    pub fn primitive(&self, s: f64) -> f64 {
        let r = (2.0 * s - self.c * self.c).sqrt();
        ((self.k + r) / (self.k - r)).abs().ln() / self.k
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gp_turning_points() {
        let gp = Nonlinearity::gp();
        let tp = turning_point(&gp, 1.0, Branch::Lower).unwrap();
        assert!((tp.zeta - 0.5).abs() < 1e-12 && tp.finite);
        let tp = turning_point(&gp, 0.0, Branch::Lower).unwrap();
        assert_eq!(tp.zeta, 0.0);
        assert!((tp.derivative_g - 2.0).abs() < 1e-14 && tp.finite);
        let tp = turning_point(&gp, -1.0, Branch::Lower).unwrap();
        assert!((tp.zeta - 0.5).abs() < 1e-12);
    }

    #[test]
    fn supersonic_is_rejected() {
        assert!(matches!(
            turning_point(&Nonlinearity::gp(), 1.5, Branch::Lower),
            Err(TwaveError::Supersonic { .. })
        ));
    }

    #[test]
    fn gp_has_no_upper_branch() {
        assert!(matches!(
            turning_point(&Nonlinearity::gp(), 1.0, Branch::Upper),
            Err(TwaveError::NoTurningPoint { .. })
        ));
    }

    #[test]
    fn l_value_matches_closed_form() {
        let gp = Nonlinearity::gp();
        let c = 0.7;
        let o = gp_oracle(c).unwrap();
        let tp = turning_point(&gp, c, Branch::Lower).unwrap();
        let a = 0.5 * (o.zeta() + 1.0);
        let exact = o.primitive(o.zeta()) - o.primitive(a);
        assert!((tp.l_value - exact).abs() < 1e-9, "{} vs {exact}", tp.l_value);
    }

    #[test]
    fn hermite_sampling_is_accurate() {
        let gp = Nonlinearity::gp();
        let p = build_profile(&gp, 1.0, Branch::Lower, ProfileGrid { x_max: Some(10.0), n_points: 801 }).unwrap();
        let o = gp_oracle(1.0).unwrap();
        for x in [-3.33, -0.01, 0.4321, 2.0, 7.77] {
            let (r, t) = p.sample(x);
            assert!((r - o.rho(x)).abs() < 1e-8 && (t - o.theta(x)).abs() < 1e-8, "{x}");
        }
    }
}
