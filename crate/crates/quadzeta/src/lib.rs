//! Exact special values of the secant and cotangent zeta functions at real
//! quadratic irrationalities.
//!
//! The secant zeta function `psi(alpha, s) = sum sec(pi n alpha)/n^s` takes,
//! at even arguments `s = 2k` and quadratic irrational `alpha`, values in
//! `pi^{2k} Q(alpha)`. This crate certifies those values by computing the
//! ratio `psi(alpha, 2k)/pi^{2k}` exactly along two independent routes and
//! checking both against a high-precision numeric summation of the defining
//! series:
//!
//! - [`eta::secant_value_eta`] evaluates a closed-form finite double sum of
//!   Bernoulli polynomials obtained through a transfer matrix built from the
//!   fundamental totally positive unit of the order of `Z + Z alpha`;
//! - [`funceq::secant_value_fixed_point`] decomposes a subgroup element
//!   fixing `alpha` into the free generators of the level-2 congruence
//!   subgroup, folds the known affine functional equations along the word,
//!   and solves the resulting fixed-point equation;
//! - [`series`] sums the Dirichlet series directly in deterministic
//!   fixed-point arithmetic.
//!
//! The cotangent zeta function `xi(alpha, s) = sum cot(pi n alpha)/n^s` is
//! certified at units via [`funceq::cotangent_unit_value`]: the closed
//! formula pins the rational magnitude and the series adjudicates the sign,
//! which the stated functional equation leaves ambiguous at odd exponents.
//!
//! Everything outside [`series`] and [`fixed`] is exact arbitrary-precision
//! arithmetic; equality of values means structural equality of canonical
//! field elements.

pub mod bernoulli;
pub mod error;
pub mod eta;
pub mod fixed;
pub mod funceq;
pub mod gamma2;
pub mod mat2;
pub mod quad;
pub mod rational;
pub mod series;
pub mod transfer;
pub mod units;
pub mod value;

pub use error::{Error, Result};
pub use eta::{h_special_value, secant_value_eta, EvalConfig};
pub use funceq::{cotangent_unit_value, phi, secant_value_fixed_point};
pub use quad::{parse_quad, QuadElem};
pub use rational::Rational;
pub use series::{eta_h_series, frac_multiple, lerch_fe_residual, psi_series, xi_series};
pub use value::{CotangentValue, Method, SpecialValue};
