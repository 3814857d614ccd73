//! Lifted fields `ψ = ρ e^{iθ}` on the truncated strip `[-x_max, x_max] × [0, 1)`,
//! periodic in `y`, and the discrete energy and momentum.
//!
//! Nodes are `x_i = -x_max + i dx` (`i < nx`) and `y_j = j / ny`; arrays are
//! row-major with `y` fastest. The discrete energy sums link terms
//!
//! ```text
//! x-links: (dy/dx)          [(ρ_{i+1} - ρ_i)^2 + ρ_i ρ_{i+1} (θ_{i+1} - θ_i)^2]
//! y-links: w_i dx (λ^2/dy)  [(ρ_{j+1} - ρ_j)^2 + ρ_j ρ_{j+1} (θ_{j+1} - θ_j)^2]
//! nodes:   w_i dx dy        V(ρ^2)
//! ```
//!
//! with trapezoid weights `w_i` (½ on the two end columns), and the momentum
//! is `Q = Σ_j dy Σ_i (1 - ρ_i ρ_{i+1}) (θ_{i+1} - θ_i)`, linear in `θ`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::nonlinearity::Nonlinearity;
use crate::waves::WaveProfile1D;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StripGrid {
    pub nx: usize,
    pub ny: usize,
    pub x_max: f64,
}

impl StripGrid {
    pub fn new(nx: usize, ny: usize, x_max: f64) -> Self {
        assert!(nx >= 5 && ny >= 1 && x_max > 0.0, "degenerate strip grid");
        StripGrid { nx, ny, x_max }
    }

    pub fn dx(&self) -> f64 {
        2.0 * self.x_max / (self.nx - 1) as f64
    }

    pub fn dy(&self) -> f64 {
        1.0 / self.ny as f64
    }

    pub fn x(&self, i: usize) -> f64 {
        -self.x_max + i as f64 * self.dx()
    }

    pub fn y(&self, j: usize) -> f64 {
        j as f64 * self.dy()
    }

    pub fn len(&self) -> usize {
        self.nx * self.ny
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Trapezoid weight of column `i`.
    pub fn weight(&self, i: usize) -> f64 {
        if i == 0 || i == self.nx - 1 {
            0.5
        } else {
            1.0
        }
    }

    /// Same extent with both resolutions doubled (`nx` keeps odd/even parity
    /// of intervals: `2 (nx - 1) + 1` nodes).
    pub fn refined(&self) -> Self {
        StripGrid::new(2 * (self.nx - 1) + 1, 2 * self.ny, self.x_max)
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Field2D {
    pub grid: StripGrid,
    pub lam: f64,
    /// `|ψ|` at the nodes.
    pub rho: Vec<f64>,
    /// Unwrapped phase at the nodes.
    pub theta: Vec<f64>,
}

impl Field2D {
    /// `ψ ≡ 1`.
    pub fn uniform(grid: StripGrid, lam: f64) -> Self {
        Field2D {
            grid,
            lam,
            rho: vec![1.0; grid.len()],
            theta: vec![0.0; grid.len()],
        }
    }

    /// Field with `(ρ, θ) = f(x, y)`.
    pub fn from_fn(grid: StripGrid, lam: f64, f: impl Fn(f64, f64) -> (f64, f64)) -> Self {
        let mut field = Field2D::uniform(grid, lam);
        for i in 0..grid.nx {
            for j in 0..grid.ny {
                let (r, t) = f(grid.x(i), grid.y(j));
                field.rho[i * grid.ny + j] = r;
                field.theta[i * grid.ny + j] = t;
            }
        }
        field
    }

    /// y-independent embedding of a 1D profile (`ρ = √ϱ`).
    pub fn from_profile(profile: &WaveProfile1D, grid: StripGrid, lam: f64) -> Self {
        Field2D::from_fn(grid, lam, |x, _| {
            let (r, t) = profile.sample(x);
            (r.max(0.0).sqrt(), t)
        })
    }

    #[inline]
    pub fn idx(&self, i: usize, j: usize) -> usize {
        i * self.grid.ny + j
    }

    pub fn with_lambda(mut self, lam: f64) -> Self {
        self.lam = lam;
        self
    }

    pub fn min_rho(&self) -> f64 {
        self.rho.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn psi(&self) -> Vec<Complex64> {
        self.rho
            .iter()
            .zip(&self.theta)
            .map(|(&r, &t)| Complex64::from_polar(r, t))
            .collect()
    }

    /// Discrete `E_λ` with potential `v(ρ^2)`.
    pub fn energy_with(&self, v: impl Fn(f64) -> f64) -> f64 {
        let g = self.grid;
        let (nx, ny) = (g.nx, g.ny);
        let (dx, dy) = (g.dx(), g.dy());
        let ax = dy / dx;
        let lam2 = self.lam * self.lam;
        let mut total = 0.0;
        for i in 0..nx {
            let w = g.weight(i);
            let by = w * dx * lam2 / dy;
            let mass = w * dx * dy;
            let row = i * ny;
            let mut row_sum = 0.0;
            for j in 0..ny {
                let k = row + j;
                let r = self.rho[k];
                let t = self.theta[k];
                if i + 1 < nx {
                    let dr = self.rho[k + ny] - r;
                    let dt = self.theta[k + ny] - t;
                    row_sum += ax * (dr * dr + r * self.rho[k + ny] * dt * dt);
                }
                if ny > 1 {
                    let kn = row + (j + 1) % ny;
                    let dr = self.rho[kn] - r;
                    let dt = self.theta[kn] - t;
                    row_sum += by * (dr * dr + r * self.rho[kn] * dt * dt);
                }
                row_sum += mass * v(r * r);
            }
            total += row_sum;
        }
        total
    }

    pub fn energy(&self, model: &Nonlinearity) -> f64 {
        self.energy_with(|s| model.v(s))
    }

    /// Energy with the Ginzburg–Landau potential `½(1 - ρ^2)^2`.
    pub fn energy_gl(&self) -> f64 {
        self.energy_with(|s| 0.5 * (1.0 - s) * (1.0 - s))
    }

    /// `Q = Σ_j dy Σ_i (1 - ρ_i ρ_{i+1}) (θ_{i+1} - θ_i)`.
    pub fn momentum(&self) -> f64 {
        let g = self.grid;
        let ny = g.ny;
        let mut total = 0.0;
        for k in 0..(g.nx - 1) * ny {
            total += (1.0 - self.rho[k] * self.rho[k + ny]) * (self.theta[k + ny] - self.theta[k]);
        }
        total * g.dy()
    }

    /// `∫∫ |ψ - mean_y ψ|^2 / ∫∫ |1 - ρ^2|`: zero for y-independent fields.
    pub fn two_dimensionality(&self) -> f64 {
        let g = self.grid;
        let psi = self.psi();
        let mut num = 0.0;
        let mut den = 0.0;
        for i in 0..g.nx {
            let w = g.weight(i);
            let row = &psi[i * g.ny..(i + 1) * g.ny];
            let mean = row.iter().sum::<Complex64>() / g.ny as f64;
            for (j, z) in row.iter().enumerate() {
                num += w * (z - mean).norm_sqr();
                den += w * (1.0 - self.rho[i * g.ny + j].powi(2)).abs();
            }
        }
        if den == 0.0 {
            0.0
        } else {
            num / den
        }
    }

    /// Column `i` averaged over `y` as `(mean ρ, mean θ)`.
    pub fn column_mean(&self, i: usize) -> (f64, f64) {
        let ny = self.grid.ny;
        let r = self.rho[i * ny..(i + 1) * ny].iter().sum::<f64>() / ny as f64;
        let t = self.theta[i * ny..(i + 1) * ny].iter().sum::<f64>() / ny as f64;
        (r, t)
    }
}
