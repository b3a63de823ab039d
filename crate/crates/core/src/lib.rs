//! Exact and high-precision verification engine for orthogonal polynomials
//! with the Hermite weight perturbed by `|x - t|^gamma`.
//!
//! * [`algebra`]: exact rationals, polynomials, rational functions.
//! * [`moments`] and [`ortho`]: moments, Hankel determinants, and the
//!   recurrence coefficients `alpha_n(t)`, `beta_n(t)` for `gamma = 2K`.
//! * [`verify`]: exact zero-residual checks of the difference equations,
//!   Toda flows, and the Painleve IV equation.
//! * [`hermite`]: generalized Hermite polynomials and the closed forms built
//!   on them.
//! * [`numeric`]: multi-precision pipeline for arbitrary real `gamma >= 0`.
//! * [`ensemble`]: eigenvalue density and Monte Carlo checks of the
//!   partition-function integrals.

pub mod algebra;
pub mod ensemble;
mod error;
pub mod hermite;
pub mod moments;
pub mod numeric;
pub mod ortho;
pub mod verify;

pub use algebra::{bareiss_det, Poly, RatFn, Rational};
pub use error::{Error, Result};
pub use moments::{gaussian_moment, hankel_det, weight_moments, MomentSet};
pub use ortho::{recurrence_table, LadderCoeffs, RecurrenceTable};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");
