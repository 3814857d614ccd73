//! Generic numerical kernels: quadrature, root finding, ODE integration,
//! interpolation and small least-squares fits.

pub mod fit;
pub mod interp;
pub mod ode;
pub mod quad;
pub mod roots;
