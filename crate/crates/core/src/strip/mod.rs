//! Energy minimization at fixed momentum on the strip `ℝ × [0, 1)` with
//! transverse scaling `λ`, and the scan in `λ` for the critical period.

pub mod diagnostics;
pub mod field;
pub mod minimize;
pub mod precond;
pub mod scan;

pub use diagnostics::{el_residual, energy_gl_2d, mutual_bound_constants, symmetry_check, Symmetry};
pub use field::{Field2D, StripGrid};
pub use minimize::{minimize_at_momentum, Init, MinimizeOptions, MinimizeResult};
pub use scan::{lambda_scan, LambdaEntry, LambdaScan, ScanOptions};
