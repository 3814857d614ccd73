//! Dormand–Prince 5(4) integrator with adaptive step control.

use crate::error::NumericalError;

const C2: f64 = 1.0 / 5.0;
const C3: f64 = 3.0 / 10.0;
const C4: f64 = 4.0 / 5.0;
const C5: f64 = 8.0 / 9.0;
const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const B1: f64 = 35.0 / 384.0;
const B3: f64 = 500.0 / 1113.0;
const B4: f64 = 125.0 / 192.0;
const B5: f64 = -2187.0 / 6784.0;
const B6: f64 = 11.0 / 84.0;
// Difference between the 5th and embedded 4th order weights.
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

#[derive(Debug, Clone, Copy)]
pub struct OdeTol {
    pub rtol: f64,
    pub atol: f64,
    pub h_min: f64,
    pub max_steps: usize,
}

impl Default for OdeTol {
    fn default() -> Self {
        OdeTol {
            rtol: 1e-12,
            atol: 1e-14,
            h_min: 1e-14,
            max_steps: 1_000_000,
        }
    }
}

/// Adaptive integrator state; keeps the last accepted step size so that
/// repeated calls to [`Dopri5::advance`] along an output grid stay cheap.
pub struct Dopri5<const N: usize> {
    pub t: f64,
    pub y: [f64; N],
    h: f64,
    tol: OdeTol,
    pub steps: usize,
}

fn axpy<const N: usize>(y: &[f64; N], h: f64, terms: &[(f64, &[f64; N])]) -> [f64; N] {
    let mut out = *y;
    for (i, o) in out.iter_mut().enumerate() {
        let mut acc = 0.0;
        for (w, k) in terms {
            acc += w * k[i];
        }
        *o += h * acc;
    }
    out
}

impl<const N: usize> Dopri5<N> {
    pub fn new(t0: f64, y0: [f64; N], h0: f64, tol: OdeTol) -> Self {
        Dopri5 {
            t: t0,
            y: y0,
            h: h0,
            tol,
            steps: 0,
        }
    }

    /// Integrates up to `t_end` exactly (the last step is shortened).
    pub fn advance<F>(&mut self, f: &F, t_end: f64) -> Result<(), NumericalError>
    where
        F: Fn(f64, &[f64; N]) -> [f64; N],
    {
        let dir = (t_end - self.t).signum();
        if dir == 0.0 {
            return Ok(());
        }
        let mut h = self.h.abs().max(self.tol.h_min) * dir;
        loop {
            let remaining = t_end - self.t;
            if remaining * dir <= 0.0 {
                return Ok(());
            }
            let last = (h * dir) >= remaining * dir;
            if last {
                h = remaining;
            }
            let (y_new, err) = self.trial(f, h);
            if !err.is_finite() {
                h *= 0.25;
                if h.abs() < self.tol.h_min {
                    return Err(NumericalError::StepUnderflow { t: self.t });
                }
                continue;
            }
            if err <= 1.0 {
                self.t = if last { t_end } else { self.t + h };
                self.y = y_new;
                self.steps += 1;
                if self.steps > self.tol.max_steps {
                    return Err(NumericalError::Other(format!(
                        "ODE step budget exhausted at t = {}",
                        self.t
                    )));
                }
                let factor = if err == 0.0 {
                    5.0
                } else {
                    (0.9 * err.powf(-0.2)).clamp(0.2, 5.0)
                };
                // A shortened final step says nothing about the natural scale.
                if !last {
                    self.h = h * factor;
                    h = self.h;
                } else {
                    self.h = self.h.abs().max((h * factor).abs()) * dir;
                }
            } else {
                h *= (0.9 * err.powf(-0.2)).clamp(0.1, 0.9);
                if h.abs() < self.tol.h_min {
                    return Err(NumericalError::StepUnderflow { t: self.t });
                }
            }
        }
    }

    fn trial<F>(&self, f: &F, h: f64) -> ([f64; N], f64)
    where
        F: Fn(f64, &[f64; N]) -> [f64; N],
    {
        let t = self.t;
        let y = &self.y;
        let k1 = f(t, y);
        let k2 = f(t + C2 * h, &axpy(y, h, &[(A21, &k1)]));
        let k3 = f(t + C3 * h, &axpy(y, h, &[(A31, &k1), (A32, &k2)]));
        let k4 = f(t + C4 * h, &axpy(y, h, &[(A41, &k1), (A42, &k2), (A43, &k3)]));
        let k5 = f(
            t + C5 * h,
            &axpy(y, h, &[(A51, &k1), (A52, &k2), (A53, &k3), (A54, &k4)]),
        );
        let k6 = f(
            t + h,
            &axpy(y, h, &[(A61, &k1), (A62, &k2), (A63, &k3), (A64, &k4), (A65, &k5)]),
        );
        let y5 = axpy(y, h, &[(B1, &k1), (B3, &k3), (B4, &k4), (B5, &k5), (B6, &k6)]);
        let k7 = f(t + h, &y5);
        let mut err = 0.0f64;
        for i in 0..N {
            let e = h * (E1 * k1[i] + E3 * k3[i] + E4 * k4[i] + E5 * k5[i] + E6 * k6[i] + E7 * k7[i]);
            let scale = self.tol.atol + self.tol.rtol * y[i].abs().max(y5[i].abs());
            err = err.max((e / scale).abs());
        }
        if y5.iter().any(|v| !v.is_finite()) {
            err = f64::NAN;
        }
        (y5, err)
    }
}
