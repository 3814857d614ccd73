//! Traveling waves of the defocusing nonlinear Schrödinger equation with
//! `|ψ| → 1` at infinity.
//!
//! * [`nonlinearity`] / [`assumptions`]: models `F`, `V` and their checks.
//! * [`waves`]: one-dimensional waves by quadrature, with the
//!   Gross–Pitaevskii closed forms as a reference.
//! * [`momentum`]: momentum modulo `2π` and discrete momentum functionals.
//! * [`dispersion`]: energy–momentum curves and the minimal energy `E¹_min(p)`.
//! * [`strip`]: energy minimization at fixed momentum on a periodic strip and
//!   the critical period scan.
//! * [`config`] / [`run`] / [`output`]: reproducible runs from TOML
//!   configs, written as CSV and JSON with a provenance header.

pub mod assumptions;
pub mod config;
pub mod dispersion;
pub mod error;
pub mod jet;
pub mod momentum;
pub mod nonlinearity;
pub mod numerics;
pub mod output;
pub mod run;
pub mod strip;
pub mod waves;

pub use error::{NumericalError, Result, TwaveError};
pub use nonlinearity::{builtin, builtin_models, Nonlinearity};
