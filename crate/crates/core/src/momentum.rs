//! Momentum modulo `2π` and discrete momentum functionals.
//!
//! The momentum of a field with `|ψ| → 1` is only defined up to `2π`. A
//! *valuation* is any real representative; [`MomentumClass`] stores the
//! canonical one in `[0, 2π)`.

use std::f64::consts::TAU;
use std::ops::{Add, Neg, Sub};

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Result, TwaveError};
use crate::strip::field::Field2D;

/// A real number modulo `2π`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MomentumClass {
    canonical: f64,
}

impl MomentumClass {
    /// The representative in `[0, 2π)`.
    pub fn canonical(self) -> f64 {
        self.canonical
    }

    /// `min |p'|` over representatives; lies in `[0, π]`.
    pub fn abs(self) -> f64 {
        self.canonical.min(TAU - self.canonical)
    }

    /// Circular distance between two classes, in `[0, π]`.
    pub fn distance(self, other: MomentumClass) -> f64 {
        (self - other).abs()
    }

    /// The representative closest to `reference`.
    pub fn valuation_near(self, reference: f64) -> f64 {
        let k = ((reference - self.canonical) / TAU).round();
        self.canonical + k * TAU
    }
}

/// Canonical class of a valuation.
pub fn class_of(p: f64) -> MomentumClass {
    let mut r = p.rem_euclid(TAU);
    // rem_euclid rounds tiny negative inputs up to exactly 2π.
    if r >= TAU {
        r = 0.0;
    }
    MomentumClass { canonical: r }
}

/// `|[[q]]| = min(canonical, 2π - canonical)`.
pub fn abs_class(q: MomentumClass) -> f64 {
    q.abs()
}

impl Add for MomentumClass {
    type Output = MomentumClass;
    fn add(self, o: MomentumClass) -> MomentumClass {
        class_of(self.canonical + o.canonical)
    }
}

impl Sub for MomentumClass {
    type Output = MomentumClass;
    fn sub(self, o: MomentumClass) -> MomentumClass {
        class_of(self.canonical - o.canonical)
    }
}

impl Neg for MomentumClass {
    type Output = MomentumClass;
    fn neg(self) -> MomentumClass {
        class_of(-self.canonical)
    }
}

/// A valuation together with its class, as exported to JSON.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MomentumReport {
    pub valuation: f64,
    pub canonical: f64,
    pub abs_class: f64,
}

impl MomentumReport {
    pub fn new(valuation: f64) -> Self {
        let q = class_of(valuation);
        MomentumReport {
            valuation,
            canonical: q.canonical(),
            abs_class: q.abs(),
        }
    }
}

fn uniform_step(x: &[f64]) -> Result<f64> {
    if x.len() < 5 {
        return Err(TwaveError::InsufficientSamples { needed: 5, got: x.len() });
    }
    let h = (x[x.len() - 1] - x[0]) / (x.len() - 1) as f64;
    let uniform = x
        .windows(2)
        .all(|w| ((w[1] - w[0]) - h).abs() <= 1e-9 * h.abs().max(1e-300));
    if !(h > 0.0) || !uniform {
        return Err(TwaveError::InvalidInput("grid must be uniform and increasing".into()));
    }
    Ok(h)
}

/// Fourth-order finite-difference derivative on a uniform grid (one-sided
/// fourth-order stencils at the two ends on each side).
pub fn derivative4(f: &[f64], h: f64) -> Vec<f64> {
    let n = f.len();
    let mut d = vec![0.0; n];
    for i in 2..n - 2 {
        d[i] = (f[i - 2] - 8.0 * f[i - 1] + 8.0 * f[i + 1] - f[i + 2]) / (12.0 * h);
    }
    let fwd = |i: usize| (-25.0 * f[i] + 48.0 * f[i + 1] - 36.0 * f[i + 2] + 16.0 * f[i + 3] - 3.0 * f[i + 4]) / (12.0 * h);
    let fwd1 = |i: usize| (-3.0 * f[i - 1] - 10.0 * f[i] + 18.0 * f[i + 1] - 6.0 * f[i + 2] + f[i + 3]) / (12.0 * h);
    let bwd = |i: usize| (25.0 * f[i] - 48.0 * f[i - 1] + 36.0 * f[i - 2] - 16.0 * f[i - 3] + 3.0 * f[i - 4]) / (12.0 * h);
    let bwd1 = |i: usize| (3.0 * f[i + 1] + 10.0 * f[i] - 18.0 * f[i - 1] + 6.0 * f[i - 2] - f[i - 3]) / (12.0 * h);
    d[0] = fwd(0);
    d[1] = fwd1(1);
    d[n - 1] = bwd(n - 1);
    d[n - 2] = bwd1(n - 2);
    d
}

fn trapezoid(f: &[f64], h: f64) -> f64 {
    let n = f.len();
    h * (f[1..n - 1].iter().sum::<f64>() + 0.5 * (f[0] + f[n - 1]))
}

/// `∫ (1 - ρ^2) θ' dx` for samples of `ρ = |ψ|` and the unwrapped phase on
/// a uniform grid.
pub fn momentum_lifted_1d(rho: &[f64], theta: &[f64], x: &[f64]) -> Result<f64> {
    if rho.len() != x.len() || theta.len() != x.len() {
        return Err(TwaveError::InvalidInput("rho, theta and x lengths differ".into()));
    }
    let h = uniform_step(x)?;
    let min_rho = rho.iter().copied().fold(f64::INFINITY, f64::min);
    if !(min_rho > 0.0) {
        return Err(TwaveError::LiftingUnavailable { min_rho });
    }
    let dtheta = derivative4(theta, h);
    let integrand: Vec<f64> = rho.iter().zip(&dtheta).map(|(r, d)| (1.0 - r * r) * d).collect();
    Ok(trapezoid(&integrand, h))
}

/// `∫∫ (1 - ρ^2) θ_x dx dy` on a strip field, in the link form used by the
/// minimizer: `Σ_j dy Σ_i (1 - ρ_i ρ_{i+1}) (θ_{i+1} - θ_i)`.
pub fn momentum_lifted_2d(field: &Field2D) -> Result<f64> {
    let min_rho = field.min_rho();
    if !(min_rho > 0.0) {
        return Err(TwaveError::LiftingUnavailable { min_rho });
    }
    Ok(field.momentum())
}

/// `∫ <iψ_x, ψ> dx = ∫ (Re ψ_x Im ψ - Re ψ Im ψ_x) dx` for a field equal to
/// 1 at both ends of a uniform grid. With `y` samples the field is a
/// row-major `nx × ny` array (y fastest) and the y-integral uses the
/// periodic rectangle rule over `[0, 1)`.
pub fn momentum_compact_support(psi: &[Complex64], x: &[f64], ny: Option<usize>) -> Result<f64> {
    let ny = ny.unwrap_or(1);
    let nx = x.len();
    if psi.len() != nx * ny {
        return Err(TwaveError::InvalidInput("psi size does not match the grid".into()));
    }
    let h = uniform_step(x)?;
    let tol = 1e-6;
    let mut deviation = 0.0f64;
    for j in 0..ny {
        deviation = deviation
            .max((psi[j] - 1.0).norm())
            .max((psi[(nx - 1) * ny + j] - 1.0).norm());
    }
    if deviation > tol {
        return Err(TwaveError::BoundaryNotNormalized { deviation });
    }
    let mut total = 0.0;
    let mut re = vec![0.0; nx];
    let mut im = vec![0.0; nx];
    for j in 0..ny {
        for i in 0..nx {
            re[i] = psi[i * ny + j].re;
            im[i] = psi[i * ny + j].im;
        }
        let dre = derivative4(&re, h);
        let dim = derivative4(&im, h);
        let integrand: Vec<f64> = (0..nx).map(|i| dre[i] * im[i] - re[i] * dim[i]).collect();
        total += trapezoid(&integrand, h);
    }
    Ok(total / ny as f64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn canonical_examples() {
        assert!((class_of(1.5 * PI + TAU).canonical() - 1.5 * PI).abs() < 1e-12);
        assert!((class_of(-0.3).canonical() - (TAU - 0.3)).abs() < 1e-15);
        assert_eq!(class_of(PI).canonical(), PI);
        assert_eq!(class_of(-1e-18).canonical(), 0.0);
        assert!((abs_class(class_of(1.5 * PI)) - 0.5 * PI).abs() < 1e-15);
        assert_eq!(abs_class(class_of(PI)), PI);
        assert_eq!(abs_class(class_of(0.0)), 0.0);
    }

    #[test]
    fn valuation_near_reference() {
        let q = class_of(0.2);
        assert!((q.valuation_near(6.0) - (0.2 + TAU)).abs() < 1e-14);
        assert!((q.valuation_near(-5.0) - (0.2 - TAU)).abs() < 1e-14);
    }

    #[test]
    fn derivative4_is_exact_on_quartics() {
        let h = 0.1;
        let x: Vec<f64> = (0..20).map(|i| i as f64 * h).collect();
        let f: Vec<f64> = x.iter().map(|t| t.powi(4) - 2.0 * t).collect();
        let d = derivative4(&f, h);
        for (t, v) in x.iter().zip(&d) {
            assert!((v - (4.0 * t.powi(3) - 2.0)).abs() < 1e-10, "{t}");
        }
    }

    #[test]
    fn constant_modulus_has_zero_lifted_momentum() {
        let x: Vec<f64> = (0..101).map(|i| -5.0 + 0.1 * i as f64).collect();
        let rho = vec![1.0; x.len()];
        let theta: Vec<f64> = x.iter().map(|t| 3.0 * t.sin() + t).collect();
        assert_eq!(momentum_lifted_1d(&rho, &theta, &x).unwrap(), 0.0);
    }

    #[test]
    fn vanishing_modulus_cannot_lift() {
        let x: Vec<f64> = (0..11).map(|i| i as f64).collect();
        let mut rho = vec![1.0; 11];
        rho[4] = 0.0;
        assert!(matches!(
            momentum_lifted_1d(&rho, &vec![0.0; 11], &x),
            Err(TwaveError::LiftingUnavailable { .. })
        ));
    }

    #[test]
    fn phase_ramp_has_momentum_minus_two_pi() {
        let n = 4001;
        let x: Vec<f64> = (0..n).map(|i| -10.0 + 20.0 * i as f64 / (n - 1) as f64).collect();
        // Smooth ramp from 0 to 2π supported on [-3, 3].
        let ramp = |t: f64| {
            let u = ((t + 3.0) / 6.0).clamp(0.0, 1.0);
            TAU * u * u * u * (10.0 - 15.0 * u + 6.0 * u * u)
        };
        let psi: Vec<Complex64> = x.iter().map(|&t| Complex64::from_polar(1.0, ramp(t))).collect();
        let q = momentum_compact_support(&psi, &x, None).unwrap();
        assert!((q + TAU).abs() < 1e-8, "{q}");
        assert!(class_of(q).abs() < 1e-8);
    }

    #[test]
    fn unnormalized_boundary_is_rejected() {
        let x: Vec<f64> = (0..11).map(|i| i as f64).collect();
        let psi = vec![Complex64::new(0.0, 1.0); 11];
        assert!(matches!(
            momentum_compact_support(&psi, &x, None),
            Err(TwaveError::BoundaryNotNormalized { .. })
        ));
    }
}
