//! Special functions and quadrature primitives.
//!
//! Everything here is pure and reentrant.

mod bessel;
mod gamma;
mod pcf;
mod quad;

pub use bessel::bessel_k0;
pub use gamma::{double_factorial_odd, gamma_fn, ln_gamma};
pub use pcf::{parabolic_cylinder_d, parabolic_cylinder_d_scaled};
pub use quad::{integrate, integrate_interval, integrate_real_line, Estimate, QuadratureSpec};

/// Euler-Mascheroni constant.
pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_860_606_512_090_082_402_43;
