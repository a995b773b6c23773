//! Self-consistent renormalized φ⁴ mean-field solver.
//!
//! The sextic term of a Ginzburg-Landau-Wilson functional is decoupled into
//! temperature dependent corrections of the quadratic (`Ω_d`) and quartic
//! (`Θ_d`) coefficients. This crate solves the resulting fixed-point
//! equations for finite systems of dimension `0 < d ≤ 4`, locates the shifted
//! critical temperature `T*_c`, and evaluates the thermodynamic, transport and
//! application observables built on top of them.
//!
//! Module map:
//!
//! * [`specfun`]: gamma, `K₀`, `D₋ₚ` and adaptive Gauss-Kronrod quadrature.
//! * [`model`]: parameters, bare coefficients, Gaussian free energy and heat capacity.
//! * [`selfconsist`]: fixed-point solves for `Ω_d`, `Θ_d`, the critical point and calibration.
//! * [`observables`]: susceptibility, correlators, order parameter, exponent fits.
//! * [`applications`]: Weiss magnetism, film Curie temperature, superconductors.
//! * [`oracle`]: brute-force validators used by the test suite and the CLI.
//! * [`presets`]: shipped material parameter sets.

// Negated comparisons are used on purpose so that NaN fails validation.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod applications;
pub mod error;
pub mod model;
pub mod observables;
pub mod oracle;
pub mod presets;
pub mod selfconsist;
pub mod specfun;

pub use applications::{
    FilmParams, FilmTransition, Geometry, GlLengths, MagnetParams, SuperconductorParams,
};
pub use error::{Error, Result};
pub use model::{Extent, ModelParams, PhysicalConstants};
pub use observables::{ExponentSet, ObservableCurve, OrderParameterPoint, PowerLawFit, Side};
pub use selfconsist::{CriticalPoint, FluctuationState, SolverSettings};
pub use specfun::{Estimate, QuadratureSpec};
