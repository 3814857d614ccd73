//! Monotone piecewise cubic Hermite interpolation (PCHIP) with an exact
//! antiderivative.

use crate::error::TwaveError;

#[derive(Debug, Clone)]
pub struct Pchip {
    x: Vec<f64>,
    y: Vec<f64>,
    m: Vec<f64>,
    // Antiderivative from x[0] to each knot.
    cum: Vec<f64>,
}

fn hermite(t: f64, h: f64, y0: f64, y1: f64, m0: f64, m1: f64) -> (f64, f64, f64) {
    let t2 = t * t;
    let t3 = t2 * t;
    let t4 = t3 * t;
    let value = (2.0 * t3 - 3.0 * t2 + 1.0) * y0
        + (t3 - 2.0 * t2 + t) * h * m0
        + (-2.0 * t3 + 3.0 * t2) * y1
        + (t3 - t2) * h * m1;
    let deriv = ((6.0 * t2 - 6.0 * t) * y0
        + (3.0 * t2 - 4.0 * t + 1.0) * h * m0
        + (-6.0 * t2 + 6.0 * t) * y1
        + (3.0 * t2 - 2.0 * t) * h * m1)
        / h;
    let integral = h
        * ((t - t3 + 0.5 * t4) * y0
            + (0.5 * t2 - 2.0 * t3 / 3.0 + 0.25 * t4) * h * m0
            + (t3 - 0.5 * t4) * y1
            + (-t3 / 3.0 + 0.25 * t4) * h * m1);
    (value, deriv, integral)
}

impl Pchip {
    pub fn new(x: Vec<f64>, y: Vec<f64>) -> Result<Self, TwaveError> {
        let n = x.len();
        if n < 2 || y.len() != n {
            return Err(TwaveError::Config(format!(
                "table needs at least 2 points and equal lengths (got {} and {})",
                n,
                y.len()
            )));
        }
        if x.windows(2).any(|w| !(w[1] > w[0])) || x.iter().chain(&y).any(|v| !v.is_finite()) {
            return Err(TwaveError::Config(
                "table abscissae must be finite and strictly increasing".into(),
            ));
        }
        let h: Vec<f64> = x.windows(2).map(|w| w[1] - w[0]).collect();
        let delta: Vec<f64> = (0..n - 1).map(|k| (y[k + 1] - y[k]) / h[k]).collect();
        let mut m = vec![0.0; n];
        if n == 2 {
            m[0] = delta[0];
            m[1] = delta[0];
        } else {
            for k in 1..n - 1 {
                if delta[k - 1] * delta[k] > 0.0 {
                    let w1 = 2.0 * h[k] + h[k - 1];
                    let w2 = h[k] + 2.0 * h[k - 1];
                    m[k] = (w1 + w2) / (w1 / delta[k - 1] + w2 / delta[k]);
                }
            }
            m[0] = end_slope(h[0], h[1], delta[0], delta[1]);
            m[n - 1] = end_slope(h[n - 2], h[n - 3], delta[n - 2], delta[n - 3]);
        }
        let mut cum = vec![0.0; n];
        for k in 0..n - 1 {
            let (_, _, seg) = hermite(1.0, h[k], y[k], y[k + 1], m[k], m[k + 1]);
            cum[k + 1] = cum[k] + seg;
        }
        Ok(Pchip { x, y, m, cum })
    }

    fn segment(&self, s: f64) -> usize {
        match self.x.partition_point(|&v| v <= s) {
            0 => 0,
            i => (i - 1).min(self.x.len() - 2),
        }
    }

    /// Value, derivative and antiderivative (from the first knot) at `s`.
    /// Outside the knot range the interpolant continues linearly with the
    /// end slope.
    pub fn eval_all(&self, s: f64) -> (f64, f64, f64) {
        let n = self.x.len();
        if s < self.x[0] {
            let d = s - self.x[0];
            return (self.y[0] + self.m[0] * d, self.m[0], self.y[0] * d + 0.5 * self.m[0] * d * d);
        }
        if s > self.x[n - 1] {
            let d = s - self.x[n - 1];
            return (
                self.y[n - 1] + self.m[n - 1] * d,
                self.m[n - 1],
                self.cum[n - 1] + self.y[n - 1] * d + 0.5 * self.m[n - 1] * d * d,
            );
        }
        let k = self.segment(s);
        let h = self.x[k + 1] - self.x[k];
        let t = (s - self.x[k]) / h;
        let (v, d, i) = hermite(t, h, self.y[k], self.y[k + 1], self.m[k], self.m[k + 1]);
        (v, d, self.cum[k] + i)
    }

    pub fn eval(&self, s: f64) -> f64 {
        self.eval_all(s).0
    }

    pub fn deriv(&self, s: f64) -> f64 {
        self.eval_all(s).1
    }

    pub fn antiderivative(&self, s: f64) -> f64 {
        self.eval_all(s).2
    }
}

fn end_slope(h0: f64, h1: f64, d0: f64, d1: f64) -> f64 {
    let m = ((2.0 * h0 + h1) * d0 - h0 * d1) / (h0 + h1);
    if m.signum() != d0.signum() {
        0.0
    } else if d0.signum() != d1.signum() && m.abs() > 3.0 * d0.abs() {
        3.0 * d0
    } else {
        m
    }
}
