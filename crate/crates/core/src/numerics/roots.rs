//! Bracketed root finding (Brent's method).

use crate::error::NumericalError;

/// A root together with the final bracket, so callers can pick the side on
/// which `f` has a known sign.
#[derive(Debug, Clone, Copy)]
pub struct Root {
    pub x: f64,
    pub lo: f64,
    pub hi: f64,
    pub f_lo: f64,
    pub f_hi: f64,
    pub iterations: usize,
}

/// Finds a zero of `f` in `[a, b]`, which must bracket a sign change.
/// Terminates when the bracket is narrower than `2 * (4 eps |x| + xtol)`.
pub fn brent<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, xtol: f64) -> Result<Root, NumericalError> {
    let (mut a, mut b) = (a, b);
    let mut fa = f(a);
    let mut fb = f(b);
    if fa == 0.0 {
        return Ok(Root { x: a, lo: a, hi: a, f_lo: 0.0, f_hi: 0.0, iterations: 0 });
    }
    if fb == 0.0 {
        return Ok(Root { x: b, lo: b, hi: b, f_lo: 0.0, f_hi: 0.0, iterations: 0 });
    }
    if !(fa.is_finite() && fb.is_finite()) || fa.signum() == fb.signum() {
        return Err(NumericalError::NoBracket { a, b, fa, fb });
    }
    let mut c = a;
    let mut fc = fa;
    let mut d = b - a;
    let mut e = d;
    for iter in 1..=200 {
        if fb.signum() == fc.signum() {
            c = a;
            fc = fa;
            d = b - a;
            e = d;
        }
        if fc.abs() < fb.abs() {
            a = b;
            b = c;
            c = a;
            fa = fb;
            fb = fc;
            fc = fa;
        }
        let tol = 2.0 * f64::EPSILON * b.abs() + 0.5 * xtol;
        let m = 0.5 * (c - b);
        if m.abs() <= tol || fb == 0.0 {
            let (lo, hi, f_lo, f_hi) = if b < c { (b, c, fb, fc) } else { (c, b, fc, fb) };
            return Ok(Root { x: b, lo, hi, f_lo, f_hi, iterations: iter });
        }
        if e.abs() >= tol && fa.abs() > fb.abs() {
            let s = fb / fa;
            let (mut p, mut q);
            if a == c {
                p = 2.0 * m * s;
                q = 1.0 - s;
            } else {
                let qa = fa / fc;
                let r = fb / fc;
                p = s * (2.0 * m * qa * (qa - r) - (b - a) * (r - 1.0));
                q = (qa - 1.0) * (r - 1.0) * (s - 1.0);
            }
            if p > 0.0 {
                q = -q;
            } else {
                p = -p;
            }
            if 2.0 * p < (3.0 * m * q - (tol * q).abs()).min((e * q).abs()) {
                e = d;
                d = p / q;
            } else {
                d = m;
                e = m;
            }
        } else {
            d = m;
            e = m;
        }
        a = b;
        fa = fb;
        b += if d.abs() > tol { d } else { tol.copysign(m) };
        fb = f(b);
        if !fb.is_finite() {
            return Err(NumericalError::non_finite(b, a.min(c), a.max(c)));
        }
    }
    Err(NumericalError::Other(format!("brent: no convergence near {b}")))
}
