//! Globally adaptive Gauss–Kronrod (10/21) quadrature.
//!
//! The integrator bisects the interval with the largest error estimate until
//! the summed estimate drops below `max(abs, rel * |I|)`. Integrands with an
//! inverse square root singularity at an endpoint should go through
//! [`integrate_sqrt_lower`] / [`integrate_sqrt_upper`], which remove the
//! singularity by the substitution `s = a + u^2`.

use crate::error::NumericalError;

const XGK: [f64; 11] = [
    0.995_657_163_025_808_080_735_527_280_689_003,
    0.973_906_528_517_171_720_077_964_012_084_452,
    0.930_157_491_355_708_226_001_207_180_059_508,
    0.865_063_366_688_984_510_732_096_688_423_493,
    0.780_817_726_586_416_897_063_717_578_345_042,
    0.679_409_568_299_024_406_234_327_365_114_874,
    0.562_757_134_668_604_683_339_000_099_272_694,
    0.433_395_394_129_247_190_799_265_943_165_784,
    0.294_392_862_701_460_198_131_126_603_103_866,
    0.148_874_338_981_631_210_884_826_001_129_720,
    0.0,
];

const WGK: [f64; 11] = [
    0.011_694_638_867_371_874_278_064_396_062_192,
    0.032_558_162_307_964_727_478_818_972_459_390,
    0.054_755_896_574_351_996_031_381_300_244_580,
    0.075_039_674_810_919_952_767_043_140_916_190,
    0.093_125_454_583_697_605_535_065_465_083_366,
    0.109_387_158_802_297_641_899_210_590_325_805,
    0.123_491_976_262_065_851_077_208_707_811_640,
    0.134_709_217_311_473_325_928_054_001_771_707,
    0.142_775_938_577_060_080_797_094_273_138_717,
    0.147_739_104_901_338_491_374_841_515_972_068,
    0.149_445_554_002_916_905_664_936_468_389_821,
];

// Gauss weights for the nodes XGK[1], XGK[3], ..., XGK[9].
const WG: [f64; 5] = [
    0.066_671_344_308_688_137_593_568_809_893_332,
    0.149_451_349_150_580_593_145_776_339_657_697,
    0.219_086_362_515_982_043_995_534_934_228_163,
    0.269_266_719_309_996_355_091_226_921_569_469,
    0.295_524_224_714_752_870_173_892_994_651_338,
];

/// Stopping rule for [`integrate`].
#[derive(Debug, Clone, Copy)]
pub struct QuadTol {
    pub abs: f64,
    pub rel: f64,
    pub max_intervals: usize,
}

impl Default for QuadTol {
    fn default() -> Self {
        QuadTol {
            abs: 1e-12,
            rel: 1e-11,
            max_intervals: 2000,
        }
    }
}

impl QuadTol {
    pub fn new(abs: f64, rel: f64) -> Self {
        QuadTol {
            abs,
            rel,
            ..Default::default()
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct Quad {
    pub value: f64,
    pub error: f64,
    pub intervals: usize,
}

#[derive(Clone, Copy)]
struct Segment {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

fn kronrod21<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> Result<Segment, NumericalError> {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    if !fc.is_finite() {
        return Err(NumericalError::non_finite(center, a, b));
    }
    let mut resk = fc * WGK[10];
    let mut resg = 0.0;
    for j in 0..10 {
        let dx = half * XGK[j];
        let f1 = f(center - dx);
        let f2 = f(center + dx);
        if !f1.is_finite() {
            return Err(NumericalError::non_finite(center - dx, a, b));
        }
        if !f2.is_finite() {
            return Err(NumericalError::non_finite(center + dx, a, b));
        }
        resk += WGK[j] * (f1 + f2);
        if j % 2 == 1 {
            resg += WG[j / 2] * (f1 + f2);
        }
    }
    let value = resk * half;
    let error = ((resk - resg) * half).abs();
    Ok(Segment { a, b, value, error })
}

/// Integrates `f` over `[a, b]` (either orientation).
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, tol: QuadTol) -> Result<Quad, NumericalError> {
    if a == b {
        return Ok(Quad {
            value: 0.0,
            error: 0.0,
            intervals: 0,
        });
    }
    if b < a {
        let q = integrate(f, b, a, tol)?;
        return Ok(Quad {
            value: -q.value,
            ..q
        });
    }
    let mut segments = vec![kronrod21(&f, a, b)?];
    loop {
        let total: f64 = segments.iter().map(|s| s.value).sum();
        let err: f64 = segments.iter().map(|s| s.error).sum();
        let target = tol.abs.max(tol.rel * total.abs());
        if err <= target {
            return Ok(Quad {
                value: total,
                error: err,
                intervals: segments.len(),
            });
        }
        let (worst, _) = segments
            .iter()
            .enumerate()
            .max_by(|x, y| x.1.error.total_cmp(&y.1.error))
            .expect("non-empty");
        let seg = segments[worst];
        let mid = 0.5 * (seg.a + seg.b);
        if segments.len() >= tol.max_intervals || mid <= seg.a || mid >= seg.b {
            return Err(NumericalError::NotConverged {
                a: seg.a,
                b: seg.b,
                estimate: total,
                error: err,
            });
        }
        let left = kronrod21(&f, seg.a, mid)?;
        let right = kronrod21(&f, mid, seg.b)?;
        segments[worst] = left;
        segments.push(right);
    }
}

/// Integrates `f` over `[a, b]` when `f(s)` behaves like `(s - a)^{-1/2}`
/// near the lower endpoint.
pub fn integrate_sqrt_lower<F: Fn(f64) -> f64>(
    f: F,
    a: f64,
    b: f64,
    tol: QuadTol,
) -> Result<Quad, NumericalError> {
    debug_assert!(b >= a);
    let umax = (b - a).sqrt();
    integrate(move |u| 2.0 * u * f(a + u * u), 0.0, umax, tol)
}

/// Same as [`integrate_sqrt_lower`] but for a singularity at `b`.
pub fn integrate_sqrt_upper<F: Fn(f64) -> f64>(
    f: F,
    a: f64,
    b: f64,
    tol: QuadTol,
) -> Result<Quad, NumericalError> {
    debug_assert!(b >= a);
    let umax = (b - a).sqrt();
    integrate(move |u| 2.0 * u * f(b - u * u), 0.0, umax, tol)
}

/// Integral over `[a, ∞)` through the map `s = a + t / (1 - t)`.
pub fn integrate_to_infinity<F: Fn(f64) -> f64>(
    f: F,
    a: f64,
    tol: QuadTol,
) -> Result<Quad, NumericalError> {
    integrate(
        move |t| {
            if t >= 1.0 {
                return 0.0;
            }
            let s = a + t / (1.0 - t);
            let v = f(s) / ((1.0 - t) * (1.0 - t));
            if v.is_finite() {
                v
            } else {
                0.0
            }
        },
        0.0,
        1.0,
        tol,
    )
}
