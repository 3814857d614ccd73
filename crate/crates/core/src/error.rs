use thiserror::Error;

/// Failures of the low-level numerical kernels.
#[derive(Debug, Clone, Error, PartialEq)]
pub enum NumericalError {
    #[error("integrand is not finite at {at} (interval [{a}, {b}])")]
    NonFinite { at: f64, a: f64, b: f64 },
    #[error("quadrature did not converge: worst interval [{a}, {b}], estimate {estimate}, error {error}")]
    NotConverged {
        a: f64,
        b: f64,
        estimate: f64,
        error: f64,
    },
    #[error("no sign change on [{a}, {b}] (f(a) = {fa}, f(b) = {fb})")]
    NoBracket { a: f64, b: f64, fa: f64, fb: f64 },
    #[error("ODE step size underflow at t = {t}")]
    StepUnderflow { t: f64 },
    #[error("{0}")]
    Other(String),
}

impl NumericalError {
    pub(crate) fn non_finite(at: f64, a: f64, b: f64) -> Self {
        NumericalError::NonFinite { at, a, b }
    }
}

/// Every error the library can report.
#[derive(Debug, Clone, Error)]
pub enum TwaveError {
    #[error(transparent)]
    Numerical(#[from] NumericalError),
    #[error("supersonic speed c = {c}: need c^2 < 2")]
    Supersonic { c: f64 },
    #[error("no turning point for c = {c}: {reason}")]
    NoTurningPoint { c: f64, reason: String },
    #[error("degenerate turning point at c = {c}: zeta = {zeta}, dg/ds = {dg}, d2g/ds2 = {d2g}; finiteness of L(c) undecidable")]
    UndecidableFiniteness { c: f64, zeta: f64, dg: f64, d2g: f64 },
    #[error("turning point zeta = {zeta} is a double root of g(., {c}); L(c) = -inf, only the constant wave exists")]
    InfiniteL { c: f64, zeta: f64 },
    #[error("lifting unavailable: min rho = {min_rho}")]
    LiftingUnavailable { min_rho: f64 },
    #[error("field not normalized to 1 at the x boundary (deviation {deviation})")]
    BoundaryNotNormalized { deviation: f64 },
    #[error("{what}: s-integral {s_form} and x-integral {x_form} disagree")]
    Disagreement { what: String, s_form: f64, x_form: f64 },
    #[error("need at least {needed} samples, got {got}")]
    InsufficientSamples { needed: usize, got: usize },
    #[error("test-function amplitude too large: 1 - (eps/lambda) max|chi'| = {margin}")]
    AmplitudeTooLarge { margin: f64 },
    #[error("rho dropped to {min_rho} at iteration {iteration} (floor {floor}); black-soliton regime")]
    RhoUnderflow {
        min_rho: f64,
        floor: f64,
        iteration: usize,
    },
    #[error("no convergence after {iterations} iterations")]
    MaxIterations { iterations: usize },
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("configuration error: {0}")]
    Config(String),
    #[error("io error: {0}")]
    Io(String),
}

impl TwaveError {
    /// Process exit code used by the command-line tool.
    pub fn exit_code(&self) -> i32 {
        match self {
            TwaveError::Config(_) | TwaveError::Io(_) => 2,
            TwaveError::Supersonic { .. }
            | TwaveError::InvalidInput(_)
            | TwaveError::LiftingUnavailable { .. }
            | TwaveError::BoundaryNotNormalized { .. }
            | TwaveError::InsufficientSamples { .. }
            | TwaveError::AmplitudeTooLarge { .. }
            | TwaveError::NoTurningPoint { .. } => 3,
            TwaveError::UndecidableFiniteness { .. } | TwaveError::InfiniteL { .. } => 4,
            TwaveError::Numerical(_)
            | TwaveError::Disagreement { .. }
            | TwaveError::RhoUnderflow { .. }
            | TwaveError::MaxIterations { .. } => 5,
        }
    }
}

impl From<std::io::Error> for TwaveError {
    fn from(e: std::io::Error) -> Self {
        TwaveError::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, TwaveError>;
