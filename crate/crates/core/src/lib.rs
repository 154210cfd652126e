//! Exact q-series laboratory.
//!
//! The crate verifies q-analogues of `zeta(2) = pi^2/6` and `zeta(4) = pi^4/90`
//! coefficient by coefficient over the integers, cross-checks the divisor-sum
//! and triangular-number lemmas they rest on with brute-force oracles, and
//! evaluates both sides numerically near `q = 1` to watch the classical
//! constants appear.
//!
//! * [`series`] truncated integer power series, the common value type.
//! * [`arith`] divisor sums, representation counts, Bernoulli numbers.
//! * [`catalog`] the identities as named, buildable objects.
//! * [`real`] and [`qlimits`] fixed-point high-precision evaluation near `q = 1`.
//! * [`dsl`] a small language for writing further sums and products.
//!
//! The crate is `no_std` (with `alloc`) when built without the `std` feature;
//! `std` only adds wall-clock timing to verification reports.

#![cfg_attr(not(feature = "std"), no_std)]

extern crate alloc;

pub mod arith;
pub mod catalog;
pub mod dsl;
pub mod qlimits;
pub mod real;
pub mod series;

pub use series::{equal_up_to, expand_product, geometric_pow, lambert_term, Comparison, PowerSeries, ProductFactor, ProductSpec, SeriesError};
