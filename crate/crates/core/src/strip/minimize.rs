//! Minimization of the discrete strip energy at fixed momentum.
//!
//! The iteration is a preconditioned nonlinear conjugate gradient on the
//! constraint manifold `Q(ρ, θ) = p`:
//!
//! * gradients are preconditioned by `M = diag(A_ρ, A_θ)` (see
//!   [`StripSolver`]) and projected onto the tangent space of the constraint
//!   in the `M` metric; the projection coefficient is the Lagrange multiplier
//!   `c`, i.e. the speed of the wave at convergence;
//! * after every trial step the constraint is restored exactly by a
//!   θ-correction along `A_θ^{-1} ∇_θ Q` (`Q` is linear in `θ` for fixed
//!   `ρ`), so every accepted iterate is feasible;
//! * Armijo backtracking makes the energy nonincreasing.

use serde::Serialize;

use super::field::{Field2D, StripGrid};
use super::precond::{StripSolver, XBoundary};
use crate::error::{Result, TwaveError};
use crate::momentum::MomentumReport;
use crate::nonlinearity::Nonlinearity;
use crate::waves::{build_profile, speed_for_momentum, Branch, ProfileGrid};

#[derive(Debug, Clone, Copy, Serialize)]
pub struct MinimizeOptions {
    pub max_iter: usize,
    /// Stop when the mean relative energy decrease per step over the last
    /// `window` steps drops below this.
    pub tol_e: f64,
    pub window: usize,
    /// Stop when the dual norm of the projected gradient drops below this.
    pub tol_grad: f64,
    /// Accepted iterates with `min ρ` below this end the run.
    pub rho_floor: f64,
    pub alpha_rho: f64,
    pub alpha_theta: f64,
}

impl Default for MinimizeOptions {
    fn default() -> Self {
        MinimizeOptions {
            max_iter: 20_000,
            tol_e: 1e-10,
            window: 50,
            tol_grad: 1e-14,
            rho_floor: 1e-3,
            alpha_rho: 2.0,
            alpha_theta: 1e-2,
        }
    }
}

/// Starting field of a minimization.
#[derive(Debug, Clone)]
pub enum Init {
    /// The 1D wave with momentum `p`, embedded y-independently, plus
    /// `perturbation · cos(2π(y - phase)) / cosh(x)` on `ρ`.
    OneD { perturbation: f64, phase: f64 },
    /// `χ(y)`-interpolation of the 1D waves of momenta `p - spread` and
    /// `p + spread`, with `χ(y) = ½(1 + cos 2πy)`.
    Blend { spread: f64 },
    /// A given field (resampled if the grid differs).
    Field(Field2D),
}

#[derive(Debug, Clone, Serialize)]
pub struct MinimizeResult {
    #[serde(skip)]
    pub field: Field2D,
    pub lam: f64,
    pub p_target: f64,
    pub energy: f64,
    pub momentum: MomentumReport,
    /// Lagrange multiplier of the constraint (the wave speed).
    pub speed: f64,
    pub iterations: usize,
    pub converged: bool,
    pub el_residual: f64,
    pub el_residual_l2: f64,
    pub two_dimensionality: f64,
    /// `max |Q - p|` over all accepted iterates, including the start.
    pub max_constraint_violation: f64,
    /// Dual norm of the projected gradient at the last evaluated iterate.
    pub projected_gradient: f64,
    /// Energy of every accepted iterate.
    #[serde(skip)]
    pub energy_history: Vec<f64>,
}

/// Default strip half-width for a wave of speed about `c`.
pub fn default_x_max(c: f64) -> f64 {
    (12.0 / (2.0 - c * c).max(1e-6).sqrt()).max(20.0)
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

struct Problem<'a> {
    model: &'a Nonlinearity,
    grid: StripGrid,
    lam: f64,
    p: f64,
    solve_rho: StripSolver,
    solve_theta: StripSolver,
}

impl<'a> Problem<'a> {
    fn len(&self) -> usize {
        self.grid.len()
    }

    /// Energy and its gradient; the ρ-gradient on the fixed end columns is 0.
    fn energy_grad(&self, f: &Field2D, g_rho: &mut [f64], g_theta: &mut [f64]) -> f64 {
        let grid = self.grid;
        let (nx, ny) = (grid.nx, grid.ny);
        let (dx, dy) = (grid.dx(), grid.dy());
        let ax = dy / dx;
        let lam2 = self.lam * self.lam;
        g_rho.iter_mut().for_each(|v| *v = 0.0);
        g_theta.iter_mut().for_each(|v| *v = 0.0);
        let (rho, theta) = (&f.rho, &f.theta);
        let mut e = 0.0;
        for i in 0..nx {
            let w = grid.weight(i);
            let by = w * dx * lam2 / dy;
            let mass = w * dx * dy;
            for j in 0..ny {
                let k = i * ny + j;
                let r = rho[k];
                let t = theta[k];
                if i + 1 < nx {
                    let kn = k + ny;
                    let (rn, dr, dt) = (rho[kn], rho[kn] - r, theta[kn] - t);
                    e += ax * (dr * dr + r * rn * dt * dt);
                    g_rho[k] += ax * (-2.0 * dr + rn * dt * dt);
                    g_rho[kn] += ax * (2.0 * dr + r * dt * dt);
                    let gt = 2.0 * ax * r * rn * dt;
                    g_theta[k] -= gt;
                    g_theta[kn] += gt;
                }
                if ny > 1 {
                    let kn = i * ny + (j + 1) % ny;
                    let (rn, dr, dt) = (rho[kn], rho[kn] - r, theta[kn] - t);
                    e += by * (dr * dr + r * rn * dt * dt);
                    g_rho[k] += by * (-2.0 * dr + rn * dt * dt);
                    g_rho[kn] += by * (2.0 * dr + r * dt * dt);
                    let gt = 2.0 * by * r * rn * dt;
                    g_theta[k] -= gt;
                    g_theta[kn] += gt;
                }
                let vj = self.model.jet(r * r);
                e += mass * vj.v;
                g_rho[k] += mass * vj.d1 * 2.0 * r;
            }
        }
        for j in 0..ny {
            g_rho[j] = 0.0;
            g_rho[(nx - 1) * ny + j] = 0.0;
        }
        e
    }

    /// Momentum and its gradient (ρ-gradient masked on the end columns).
    fn momentum_grad(&self, f: &Field2D, q_rho: &mut [f64], q_theta: &mut [f64]) -> f64 {
        let grid = self.grid;
        let (nx, ny) = (grid.nx, grid.ny);
        let dy = grid.dy();
        q_rho.iter_mut().for_each(|v| *v = 0.0);
        q_theta.iter_mut().for_each(|v| *v = 0.0);
        let mut q = 0.0;
        for k in 0..(nx - 1) * ny {
            let kn = k + ny;
            let (r, rn) = (f.rho[k], f.rho[kn]);
            let dt = f.theta[kn] - f.theta[k];
            let a = 1.0 - r * rn;
            q += a * dt;
            q_theta[k] -= dy * a;
            q_theta[kn] += dy * a;
            q_rho[k] -= dy * rn * dt;
            q_rho[kn] -= dy * r * dt;
        }
        for j in 0..ny {
            q_rho[j] = 0.0;
            q_rho[(nx - 1) * ny + j] = 0.0;
        }
        q * dy
    }

    /// Restores `Q = p` by `θ += s A_θ^{-1} ∇_θ Q`; returns false if the
    /// constraint has no θ-gradient.
    fn restore(&self, f: &mut Field2D, q_rho: &mut [f64], q_theta: &mut [f64], v: &mut [f64]) -> bool {
        let q = self.momentum_grad(f, q_rho, q_theta);
        self.solve_theta.solve(q_theta, v);
        let denom = dot(q_theta, v);
        if !(denom > 0.0) {
            return false;
        }
        let s = (self.p - q) / denom;
        f.theta.iter_mut().zip(v.iter()).for_each(|(t, d)| *t += s * d);
        true
    }
}

/// Minimizes `E_λ` at momentum `p_target` on `grid`.
pub fn minimize_at_momentum(
    model: &Nonlinearity,
    lam: f64,
    p_target: f64,
    init: &Init,
    grid: StripGrid,
    opts: &MinimizeOptions,
) -> Result<MinimizeResult> {
    if !(p_target > 0.0 && p_target <= std::f64::consts::PI) {
        return Err(TwaveError::InvalidInput(format!("target momentum must lie in (0, π], got {p_target}")));
    }
    if !(lam > 0.0) {
        return Err(TwaveError::InvalidInput(format!("λ must be positive, got {lam}")));
    }
    let mut field = initial_field(model, lam, p_target, init, grid)?;
    let min0 = field.min_rho();
    if !(min0 > 0.0) {
        return Err(TwaveError::LiftingUnavailable { min_rho: min0 });
    }
    let problem = Problem {
        model,
        grid,
        lam,
        p: p_target,
        solve_rho: StripSolver::new(grid, lam, opts.alpha_rho, XBoundary::Dirichlet),
        solve_theta: StripSolver::new(grid, lam, opts.alpha_theta, XBoundary::Neumann),
    };
    run(&problem, &mut field, opts)
}

fn run(pb: &Problem, field: &mut Field2D, opts: &MinimizeOptions) -> Result<MinimizeResult> {
    let n = pb.len();
    let mut q_rho = vec![0.0; n];
    let mut q_theta = vec![0.0; n];
    let mut scratch = vec![0.0; n];
    if !pb.restore(field, &mut q_rho, &mut q_theta, &mut scratch) {
        return Err(TwaveError::InvalidInput("initial field carries no momentum gradient".into()));
    }

    let mut g_rho = vec![0.0; n];
    let mut g_theta = vec![0.0; n];
    let mut n_rho = vec![0.0; n];
    let mut n_theta = vec![0.0; n];
    let mut z_rho = vec![0.0; n];
    let mut z_theta = vec![0.0; n];
    let mut zp_rho = vec![0.0; n];
    let mut zp_theta = vec![0.0; n];
    let mut d_rho = vec![0.0; n];
    let mut d_theta = vec![0.0; n];
    let mut rz_prev = 0.0;
    let mut have_prev = false;

    let mut energy = pb.energy_grad(field, &mut g_rho, &mut g_theta);
    let mut q = pb.momentum_grad(field, &mut q_rho, &mut q_theta);
    let mut max_violation = (q - pb.p).abs();
    let mut history = vec![energy];
    let mut speed = 0.0;
    let mut last_rz = f64::INFINITY;
    let mut converged = false;
    let mut step = 1.0f64;
    let mut iterations = 0;
    let mut trial = field.clone();

    while iterations < opts.max_iter {
        // Preconditioned gradient and constraint normal.
        pb.solve_rho.solve(&q_rho, &mut n_rho);
        pb.solve_theta.solve(&q_theta, &mut n_theta);
        pb.solve_rho.solve(&g_rho, &mut z_rho);
        pb.solve_theta.solve(&g_theta, &mut z_theta);
        let qn = dot(&q_rho, &n_rho) + dot(&q_theta, &n_theta);
        speed = (dot(&q_rho, &z_rho) + dot(&q_theta, &z_theta)) / qn;
        for k in 0..n {
            z_rho[k] -= speed * n_rho[k];
            z_theta[k] -= speed * n_theta[k];
        }
        // <r, z> with r = g - c q.
        let rz: f64 = (0..n)
            .map(|k| (g_rho[k] - speed * q_rho[k]) * z_rho[k] + (g_theta[k] - speed * q_theta[k]) * z_theta[k])
            .sum();
        last_rz = rz;
        if rz.max(0.0).sqrt() <= opts.tol_grad * energy.abs().max(1.0) {
            converged = true;
            break;
        }
        // Polak–Ribière+ with projection back onto the tangent space.
        let beta = if have_prev {
            let num: f64 = (0..n)
                .map(|k| {
                    (g_rho[k] - speed * q_rho[k]) * (z_rho[k] - zp_rho[k])
                        + (g_theta[k] - speed * q_theta[k]) * (z_theta[k] - zp_theta[k])
                })
                .sum();
            (num / rz_prev).max(0.0)
        } else {
            0.0
        };
        for k in 0..n {
            d_rho[k] = -z_rho[k] + beta * d_rho[k];
            d_theta[k] = -z_theta[k] + beta * d_theta[k];
        }
        let off = (dot(&q_rho, &d_rho) + dot(&q_theta, &d_theta)) / qn;
        for k in 0..n {
            d_rho[k] -= off * n_rho[k];
            d_theta[k] -= off * n_theta[k];
        }
        let mut slope = dot(&g_rho, &d_rho) + dot(&g_theta, &d_theta);
        if !(slope < 0.0) {
            for k in 0..n {
                d_rho[k] = -z_rho[k];
                d_theta[k] = -z_theta[k];
            }
            slope = -rz;
        }
        zp_rho.copy_from_slice(&z_rho);
        zp_theta.copy_from_slice(&z_theta);
        rz_prev = rz;
        have_prev = true;

        // Armijo backtracking with exact constraint restoration.
        let mut t = (2.0 * step).min(4.0);
        let accepted = loop {
            if t < 1e-14 {
                break None;
            }
            for k in 0..n {
                trial.rho[k] = field.rho[k] + t * d_rho[k];
                trial.theta[k] = field.theta[k] + t * d_theta[k];
            }
            if !(trial.min_rho() > 0.0) {
                t *= 0.5;
                continue;
            }
            if !pb.restore(&mut trial, &mut q_rho, &mut q_theta, &mut scratch) {
                t *= 0.5;
                continue;
            }
            let e_trial = trial.energy(pb.model);
            if e_trial <= energy + 1e-4 * t * slope {
                break Some(e_trial);
            }
            t *= 0.5;
        };
        let Some(_) = accepted else {
            // No descent along a projected direction: stationary to rounding.
            // Converged if the predicted decrease rz / 2 is within the
            // per-step energy tolerance.
            converged = 0.5 * rz <= opts.tol_e * energy.abs().max(1e-300);
            if !converged && have_prev && beta > 0.0 {
                have_prev = false;
                d_rho.iter_mut().for_each(|v| *v = 0.0);
                d_theta.iter_mut().for_each(|v| *v = 0.0);
                iterations += 1;
                continue;
            }
            break;
        };
        step = t;
        std::mem::swap(field, &mut trial);
        iterations += 1;
        energy = pb.energy_grad(field, &mut g_rho, &mut g_theta);
        q = pb.momentum_grad(field, &mut q_rho, &mut q_theta);
        max_violation = max_violation.max((q - pb.p).abs());
        history.push(energy);
        let min_rho = field.min_rho();
        if min_rho < opts.rho_floor {
            return Err(TwaveError::RhoUnderflow {
                min_rho,
                floor: opts.rho_floor,
                iteration: iterations,
            });
        }
        if history.len() > opts.window {
            let old = history[history.len() - 1 - opts.window];
            if old - energy <= opts.tol_e * opts.window as f64 * energy.abs().max(1e-300) {
                converged = true;
                break;
            }
        }
    }

    let (el_max, el_l2) = super::diagnostics::el_residual(field, pb.model, speed);
    Ok(MinimizeResult {
        field: field.clone(),
        lam: pb.lam,
        p_target: pb.p,
        energy,
        momentum: MomentumReport::new(q),
        speed,
        iterations,
        converged,
        el_residual: el_max,
        el_residual_l2: el_l2,
        two_dimensionality: field.two_dimensionality(),
        projected_gradient: last_rz.max(0.0).sqrt(),
        max_constraint_violation: max_violation,
        energy_history: history,
    })
}

/// The 1D wave of momentum `p` sampled onto a fine profile grid.
fn wave_at(model: &Nonlinearity, p: f64, x_max: f64) -> Result<crate::waves::WaveProfile1D> {
    let c = speed_for_momentum(model, p)?;
    build_profile(
        model,
        c,
        Branch::Lower,
        ProfileGrid {
            x_max: Some(x_max.max(12.0 / (2.0 - c * c).sqrt())),
            n_points: 8001,
        },
    )
}

fn initial_field(model: &Nonlinearity, lam: f64, p: f64, init: &Init, grid: StripGrid) -> Result<Field2D> {
    let mut field = match init {
        Init::OneD { perturbation, phase } => {
            let wave = wave_at(model, p, grid.x_max)?;
            let (amp, ph) = (*perturbation, *phase);
            Field2D::from_fn(grid, lam, |x, y| {
                let (r, t) = wave.sample(x);
                let bump = amp * (std::f64::consts::TAU * (y - ph)).cos() / x.cosh();
                (r.max(0.0).sqrt() + bump, t)
            })
        }
        Init::Blend { spread } => {
            let spread = spread.min(0.95 * p).min(0.95 * (std::f64::consts::PI - p)).max(0.0);
            let w1 = wave_at(model, p - spread, grid.x_max)?;
            let w2 = if spread > 0.0 { wave_at(model, p + spread, grid.x_max)? } else { w1.clone() };
            let half1 = w1.theta[w1.theta.len() - 1];
            let half2 = w2.theta[w2.theta.len() - 1];
            let target = 0.5 * (half1 + half2);
            Field2D::from_fn(grid, lam, |x, y| {
                let chi = 0.5 * (1.0 + (std::f64::consts::TAU * y).cos());
                let (r1, t1) = w1.sample(x);
                let (r2, t2) = w2.sample(x);
                let rho = chi * r1.max(0.0).sqrt() + (1.0 - chi) * r2.max(0.0).sqrt();
                // Align the far-field phase so that it does not depend on y.
                let far = chi * half1 + (1.0 - chi) * half2;
                let theta = chi * t1 + (1.0 - chi) * t2 + (target - far) * (0.5 * x).tanh();
                (rho, theta)
            })
        }
        Init::Field(f) => {
            if f.grid == grid {
                f.clone().with_lambda(lam)
            } else {
                resample(f, grid).with_lambda(lam)
            }
        }
    };
    for j in 0..grid.ny {
        let last = (grid.nx - 1) * grid.ny + j;
        field.rho[j] = 1.0;
        field.rho[last] = 1.0;
    }
    Ok(field)
}

/// Bilinear resampling onto another grid (constant continuation in `x`).
pub fn resample(f: &Field2D, grid: StripGrid) -> Field2D {
    let src = f.grid;
    Field2D::from_fn(grid, f.lam, |x, y| {
        let fx = ((x + src.x_max) / src.dx()).clamp(0.0, (src.nx - 1) as f64);
        let i0 = (fx.floor() as usize).min(src.nx - 2);
        let ax = fx - i0 as f64;
        let fy = y * src.ny as f64;
        let j0 = fy.floor() as usize % src.ny;
        let j1 = (j0 + 1) % src.ny;
        let ay = fy - fy.floor();
        let at = |v: &[f64], i: usize, j: usize| v[i * src.ny + j];
        let lerp = |v: &[f64]| {
            (1.0 - ax) * ((1.0 - ay) * at(v, i0, j0) + ay * at(v, i0, j1))
                + ax * ((1.0 - ay) * at(v, i0 + 1, j0) + ay * at(v, i0 + 1, j1))
        };
        (lerp(&f.rho), lerp(&f.theta))
    })
}
