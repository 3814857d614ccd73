//! Fast solver for `2 (α M - Δ_h)` on the strip, used as the preconditioner
//! of the minimizer: FFT in the periodic `y` direction, then one tridiagonal
//! solve in `x` per Fourier mode.

use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use super::field::StripGrid;

/// Boundary treatment in `x`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum XBoundary {
    /// End columns are fixed (zero in the solve).
    Dirichlet,
    /// End columns are unknowns with one-sided links.
    Neumann,
}

pub struct StripSolver {
    ny: usize,
    first: usize,
    count: usize,
    off: f64,
    // Thomas coefficients per (column, mode).
    c_prime: Vec<f64>,
    inv_den: Vec<f64>,
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
}

impl StripSolver {
    /// Solver for the Hessian of `Σ links + α Σ w_i dx dy u^2` with the link
    /// weights of the discrete energy at period parameter `lam`.
    pub fn new(grid: StripGrid, lam: f64, alpha: f64, boundary: XBoundary) -> Self {
        let (nx, ny) = (grid.nx, grid.ny);
        let (dx, dy) = (grid.dx(), grid.dy());
        let ax = dy / dx;
        let lam2 = lam * lam;
        let (first, count) = match boundary {
            XBoundary::Dirichlet => (1, nx - 2),
            XBoundary::Neumann => (0, nx),
        };
        let sigma: Vec<f64> = (0..ny)
            .map(|k| 2.0 - 2.0 * (std::f64::consts::TAU * k as f64 / ny as f64).cos())
            .collect();
        let off = -2.0 * ax;
        let mut c_prime = vec![0.0; count * ny];
        let mut inv_den = vec![0.0; count * ny];
        for (r, i) in (first..first + count).enumerate() {
            let w = grid.weight(i);
            let degree = match boundary {
                XBoundary::Dirichlet => 2.0,
                XBoundary::Neumann => {
                    if i == 0 || i == nx - 1 {
                        1.0
                    } else {
                        2.0
                    }
                }
            };
            for k in 0..ny {
                let diag = 2.0 * (ax * degree + w * dx * lam2 / dy * sigma[k] + alpha * w * dx * dy);
                let den = if r == 0 { diag } else { diag - off * c_prime[(r - 1) * ny + k] };
                inv_den[r * ny + k] = 1.0 / den;
                c_prime[r * ny + k] = off / den;
            }
        }
        let mut planner = FftPlanner::new();
        StripSolver {
            ny,
            first,
            count,
            off,
            c_prime,
            inv_den,
            forward: planner.plan_fft_forward(ny),
            inverse: planner.plan_fft_inverse(ny),
        }
    }

    /// Solves `A u = rhs` for full-grid arrays; fixed columns of `u` are 0.
    pub fn solve(&self, rhs: &[f64], out: &mut [f64]) {
        let ny = self.ny;
        let mut buf: Vec<Complex64> = rhs[self.first * ny..(self.first + self.count) * ny]
            .iter()
            .map(|&v| Complex64::new(v, 0.0))
            .collect();
        self.forward.process(&mut buf);
        for r in 0..self.count {
            for k in 0..ny {
                let prev = if r == 0 { Complex64::new(0.0, 0.0) } else { buf[(r - 1) * ny + k] };
                buf[r * ny + k] = (buf[r * ny + k] - prev * self.off) * self.inv_den[r * ny + k];
            }
        }
        for r in (0..self.count.saturating_sub(1)).rev() {
            for k in 0..ny {
                let next = buf[(r + 1) * ny + k];
                buf[r * ny + k] -= next * self.c_prime[r * ny + k];
            }
        }
        self.inverse.process(&mut buf);
        out.iter_mut().for_each(|v| *v = 0.0);
        let scale = 1.0 / ny as f64;
        for (o, z) in out[self.first * ny..(self.first + self.count) * ny].iter_mut().zip(&buf) {
            *o = z.re * scale;
        }
    }
}
