//! Small least-squares fits.

/// Least-squares coefficients `(a, b)` for `y ≈ a * u + b * v`.
/// Returns `None` when the normal equations are singular.
pub fn lsq2(u: &[f64], v: &[f64], y: &[f64]) -> Option<(f64, f64)> {
    let (mut uu, mut uv, mut vv, mut uy, mut vy) = (0.0, 0.0, 0.0, 0.0, 0.0);
    for ((&a, &b), &t) in u.iter().zip(v).zip(y) {
        uu += a * a;
        uv += a * b;
        vv += b * b;
        uy += a * t;
        vy += b * t;
    }
    let det = uu * vv - uv * uv;
    if det.abs() <= 1e-14 * uu * vv || det == 0.0 {
        return None;
    }
    Some(((uy * vv - vy * uv) / det, (uu * vy - uv * uy) / det))
}

/// Straight line `y ≈ intercept + slope * x`.
#[derive(Debug, Clone, Copy)]
pub struct LineFit {
    pub intercept: f64,
    pub slope: f64,
    pub max_residual: f64,
}

pub fn line(x: &[f64], y: &[f64]) -> Option<LineFit> {
    let ones = vec![1.0; x.len()];
    let (intercept, slope) = lsq2(&ones, x, y)?;
    let max_residual = x
        .iter()
        .zip(y)
        .map(|(&a, &b)| (b - intercept - slope * a).abs())
        .fold(0.0, f64::max);
    Some(LineFit {
        intercept,
        slope,
        max_residual,
    })
}
