//! Exact arithmetic over the rationals: scalars, univariate polynomials,
//! rational functions, and polynomial determinants.
//!
//! Every value is kept in canonical form, so an identity holds exactly when
//! the difference of its two sides is structurally the zero polynomial.

mod matrix;
mod poly;
mod ratfn;
mod rational;

pub use matrix::bareiss_det;
pub use poly::Poly;
pub use ratfn::RatFn;
pub use rational::Rational;
