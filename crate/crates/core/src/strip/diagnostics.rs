//! Checks on strip fields: Euler–Lagrange residual, reflection symmetry in
//! `y`, and the comparison with the Ginzburg–Landau energy.

use num_complex::Complex64;
use serde::Serialize;

use super::field::Field2D;
use crate::nonlinearity::Nonlinearity;

/// Max and L² norms of `i c ψ_x + ψ_xx + λ^2 ψ_yy + F(|ψ|^2) ψ` by central
/// differences, over the nodes at least two columns away from the ends.
pub fn el_residual(field: &Field2D, model: &Nonlinearity, c: f64) -> (f64, f64) {
    let g = field.grid;
    let (nx, ny) = (g.nx, g.ny);
    let (dx, dy) = (g.dx(), g.dy());
    let lam2 = field.lam * field.lam;
    let psi = field.psi();
    let i_unit = Complex64::new(0.0, 1.0);
    let mut max = 0.0f64;
    let mut sum = 0.0;
    for i in 2..nx.saturating_sub(2) {
        for j in 0..ny {
            let k = i * ny + j;
            let z = psi[k];
            let (xm, xp) = (psi[k - ny], psi[k + ny]);
            let (ym, yp) = (psi[i * ny + (j + ny - 1) % ny], psi[i * ny + (j + 1) % ny]);
            let psi_x = (xp - xm) / (2.0 * dx);
            let psi_xx = (xp - 2.0 * z + xm) / (dx * dx);
            let psi_yy = (yp - 2.0 * z + ym) / (dy * dy);
            let r = i_unit * c * psi_x + psi_xx + lam2 * psi_yy + model.f(z.norm_sqr()) * z;
            let a = r.norm();
            max = max.max(a);
            sum += a * a * dx * dy;
        }
    }
    (max, sum.sqrt())
}

/// Best reflection center of a field in `y`.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct Symmetry {
    pub y0: f64,
    /// `‖ψ(x, y0 + y) - ψ(x, y0 - y)‖_{L²}`.
    pub defect: f64,
}

/// Minimizes the reflection defect over centers on nodes and half-nodes.
pub fn symmetry_check(field: &Field2D) -> Symmetry {
    let g = field.grid;
    let (nx, ny) = (g.nx, g.ny);
    let psi = field.psi();
    let mut best = Symmetry {
        y0: 0.0,
        defect: f64::INFINITY,
    };
    // Center y0 = s dy / 2 maps row j to (s - j) mod ny.
    for s in 0..2 * ny {
        let mut sum = 0.0;
        for i in 0..nx {
            let w = g.weight(i);
            for j in 0..ny {
                let jr = (s + 2 * ny - j) % ny;
                sum += w * (psi[i * ny + j] - psi[i * ny + jr]).norm_sqr();
            }
        }
        let defect = (sum * g.dx() * g.dy()).sqrt();
        if defect < best.defect {
            best = Symmetry {
                y0: 0.5 * s as f64 * g.dy(),
                defect,
            };
        }
    }
    best
}

/// Energy with the Ginzburg–Landau potential `½(1 - ρ^2)^2`.
pub fn energy_gl_2d(field: &Field2D) -> f64 {
    field.energy_gl()
}

/// Constants `(a, b)` with `E ≤ a E_GL + b E_GL^{p0+1}` on the given
/// `(E, E_GL)` pairs: `a` is the largest ratio `E / E_GL` over the lower
/// half of the `E_GL` values, `b` covers the rest.
pub fn mutual_bound_constants(pairs: &[(f64, f64)], p0: f64) -> Option<(f64, f64)> {
    let mut pts: Vec<(f64, f64)> = pairs.iter().copied().filter(|&(_, gl)| gl > 0.0).collect();
    if pts.is_empty() {
        return None;
    }
    pts.sort_by(|x, y| x.1.total_cmp(&y.1));
    let lower = pts.len().div_ceil(2);
    let a = pts[..lower].iter().map(|(e, gl)| e / gl).fold(0.0, f64::max);
    let b = pts
        .iter()
        .map(|(e, gl)| ((e - a * gl) / gl.powf(p0 + 1.0)).max(0.0))
        .fold(0.0, f64::max);
    Some((a, b))
}
