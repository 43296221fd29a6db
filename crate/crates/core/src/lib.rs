//! Bivariate exponentiated extended Weibull (BEEW) distributions.
//!
//! The crate covers the whole workflow for this Marshall–Olkin type family:
//!
//! * [`hfamily`]: the generator `H(x; ξ)` behind every extended Weibull law,
//!   with the six registered generators `exp`, `lfr`, `weib`, `gomp`, `wg`
//!   and `mwe`.
//! * [`eew`]: the univariate law `F(x) = (1 − e^{−λH(x)})^α`.
//! * [`beew`]: the bivariate law of `(max(U1, U3), max(U2, U3))` with
//!   independent EEW components sharing `(λ, ξ)`.
//! * [`fit`]: maximum likelihood through the EM algorithm, a direct simplex
//!   optimizer used as a cross-check, and observed-information standard
//!   errors.
//! * [`gof`]: information criteria, Kolmogorov–Smirnov tests and likelihood
//!   ratio tests.
//!
//! The crate is `no_std` and only needs `alloc`. Elementary functions come
//! from `libm`, so results are identical on every target.

#![no_std]
// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod beew;
pub mod eew;
mod error;
pub mod fit;
pub mod gof;
pub mod hfamily;
pub(crate) mod math;

pub use beew::{Beew, BivariateEvaluation, Margin, Region};
pub use eew::Eew;
pub use error::{Error, Result};
pub use hfamily::{FamilyId, HFamily};
