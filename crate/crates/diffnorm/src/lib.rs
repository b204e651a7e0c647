//! Differential algebra toolkit for constructive Noether normalization of
//! hypersurface systems.
//!
//! The crate provides:
//!
//! * sparse differential polynomials over exchangeable coefficient fields
//!   ([`DiffPoly`], [`scalar::DiffField`]),
//! * Ritt-style partial reduction and saturation-ideal membership with
//!   explicit certificates ([`reduction`]),
//! * resultants with Bezout cofactors over the differential polynomial ring,
//! * the coordinate changes that raise the order of the distinguished
//!   indeterminate and make a guard polynomial manageable ([`transforms`]),
//! * truncated power series and the solution-extension recursion that turns a
//!   normalized pair into series solutions ([`series`]),
//! * the end-to-end normalization pipeline and its verification sampler
//!   ([`pipeline`]),
//! * a text format plus CLI front end ([`parse`], [`document`]).
//!
//! Coefficients are exact rationals by default; rational functions in `t`
//! cover time-dependent systems and complex doubles back the float fallback
//! for root finding. Everything downstream of a fixed seed is deterministic.

pub mod document;
pub mod error;
pub mod parse;
pub mod pipeline;
pub mod poly;
pub mod reduction;
pub mod scalar;
pub mod series;
pub mod transforms;

pub use error::{Error, Result};
pub use poly::{DerivTable, DerivVar, DiffPoly, Monomial};
pub use scalar::{C64, RatT, TPoly};

use num::BigRational;

/// Differential polynomial over the exact rationals (constant base field).
pub type QPoly = DiffPoly<BigRational>;
/// Differential polynomial over rational functions in `t` (time mode, `t' = 1`).
pub type QtPoly = DiffPoly<RatT>;
/// Differential polynomial over complex doubles with tolerance.
pub type CPoly = DiffPoly<C64>;

/// Truncated series with exact rational coefficients.
pub type QSeries = series::TruncSeries<BigRational>;
/// Truncated series with complex-double coefficients.
pub type CSeries = series::TruncSeries<C64>;
