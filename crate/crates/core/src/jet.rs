//! Second-order forward-mode differentiation in one variable.
//!
//! A [`Jet`] carries `(f, f', f'')` at a point; arithmetic propagates all
//! three exactly, which gives closed-form potentials their first and second
//! derivatives without finite differences.

use std::ops::{Add, Div, Mul, Neg, Sub};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Jet {
    pub v: f64,
    pub d1: f64,
    pub d2: f64,
}

impl Jet {
    /// The independent variable at `s`.
    pub fn var(s: f64) -> Self {
        Jet { v: s, d1: 1.0, d2: 0.0 }
    }

    pub fn cst(c: f64) -> Self {
        Jet { v: c, d1: 0.0, d2: 0.0 }
    }

    fn chain(self, f: f64, f1: f64, f2: f64) -> Self {
        Jet {
            v: f,
            d1: f1 * self.d1,
            d2: f2 * self.d1 * self.d1 + f1 * self.d2,
        }
    }

    pub fn powi(self, n: i32) -> Self {
        match n {
            0 => Jet::cst(1.0),
            1 => self,
            _ => {
                let x = self.v;
                let nf = n as f64;
                self.chain(x.powi(n), nf * x.powi(n - 1), nf * (nf - 1.0) * x.powi(n - 2))
            }
        }
    }

    pub fn exp(self) -> Self {
        let e = self.v.exp();
        self.chain(e, e, e)
    }

    pub fn recip(self) -> Self {
        let x = self.v;
        self.chain(1.0 / x, -1.0 / (x * x), 2.0 / (x * x * x))
    }

    pub fn sqrt(self) -> Self {
        let r = self.v.sqrt();
        self.chain(r, 0.5 / r, -0.25 / (r * self.v))
    }
}

impl Add for Jet {
    type Output = Jet;
    fn add(self, o: Jet) -> Jet {
        Jet { v: self.v + o.v, d1: self.d1 + o.d1, d2: self.d2 + o.d2 }
    }
}

impl Sub for Jet {
    type Output = Jet;
    fn sub(self, o: Jet) -> Jet {
        Jet { v: self.v - o.v, d1: self.d1 - o.d1, d2: self.d2 - o.d2 }
    }
}

impl Mul for Jet {
    type Output = Jet;
    fn mul(self, o: Jet) -> Jet {
        Jet {
            v: self.v * o.v,
            d1: self.d1 * o.v + self.v * o.d1,
            d2: self.d2 * o.v + 2.0 * self.d1 * o.d1 + self.v * o.d2,
        }
    }
}

impl Div for Jet {
    type Output = Jet;
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn div(self, o: Jet) -> Jet {
        self * o.recip()
    }
}

impl Neg for Jet {
    type Output = Jet;
    fn neg(self) -> Jet {
        Jet { v: -self.v, d1: -self.d1, d2: -self.d2 }
    }
}

impl Add<f64> for Jet {
    type Output = Jet;
    fn add(self, c: f64) -> Jet {
        Jet { v: self.v + c, ..self }
    }
}

impl Sub<f64> for Jet {
    type Output = Jet;
    fn sub(self, c: f64) -> Jet {
        Jet { v: self.v - c, ..self }
    }
}

impl Mul<f64> for Jet {
    type Output = Jet;
    fn mul(self, c: f64) -> Jet {
        Jet { v: self.v * c, d1: self.d1 * c, d2: self.d2 * c }
    }
}

impl Add<Jet> for f64 {
    type Output = Jet;
    fn add(self, j: Jet) -> Jet {
        j + self
    }
}

impl Sub<Jet> for f64 {
    type Output = Jet;
    fn sub(self, j: Jet) -> Jet {
        -j + self
    }
}

impl Mul<Jet> for f64 {
    type Output = Jet;
    fn mul(self, j: Jet) -> Jet {
        j * self
    }
}

/// Quintic smoothstep `6t^5 - 15t^4 + 10t^3`, clamped to `[0, 1]`; its first
/// and second derivatives vanish at both ends.
pub fn smoothstep(t: Jet) -> Jet {
    if t.v <= 0.0 {
        return Jet::cst(0.0);
    }
    if t.v >= 1.0 {
        return Jet::cst(1.0);
    }
    let t3 = t.powi(3);
    t3 * (10.0 - 15.0 * t + 6.0 * t * t)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fd(f: impl Fn(f64) -> f64, x: f64) -> (f64, f64) {
        let h = 1e-4;
        (
            (f(x + h) - f(x - h)) / (2.0 * h),
            (f(x + h) - 2.0 * f(x) + f(x - h)) / (h * h),
        )
    }

    #[test]
    fn derivatives_match_finite_differences() {
        let g = |s: Jet| (s.powi(3) * 2.0 - 1.0) / (s + 0.5) + (-s).exp() * s.sqrt();
        for &x in &[0.3, 1.0, 2.7] {
            let j = g(Jet::var(x));
            let (d1, d2) = fd(|y| g(Jet::cst(y)).v, x);
            assert!((j.d1 - d1).abs() < 1e-7 * (1.0 + d1.abs()), "{x}");
            assert!((j.d2 - d2).abs() < 1e-5 * (1.0 + d2.abs()), "{x}");
        }
    }

    #[test]
    fn smoothstep_is_c2_at_the_ends() {
        let lo = smoothstep(Jet::var(1e-9));
        let hi = smoothstep(Jet::var(1.0 - 1e-9));
        assert!(lo.v.abs() < 1e-20 && lo.d1.abs() < 1e-15 && lo.d2.abs() < 1e-7);
        assert!((hi.v - 1.0).abs() < 1e-14 && hi.d1.abs() < 1e-14 && hi.d2.abs() < 1e-7, "{hi:?}");
        assert!((smoothstep(Jet::var(0.5)).v - 0.5).abs() < 1e-15);
    }
}
