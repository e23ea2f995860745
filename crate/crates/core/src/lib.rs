//! Exact arithmetic for counting t-core partition k-tuples.
//!
//! Let `A_{t,k}(n)` be the number of ordered k-tuples of t-core partitions
//! whose weights sum to n. This crate computes `A_{t,k}(n)` three independent
//! ways and cross-checks them:
//!
//! - [`formulas`]: closed-form divisor-sum identities (Eisenstein coefficient
//!   minus a cusp-form coefficient, divided by an integer constant), one
//!   registry record per known `(t, k)` pair;
//! - [`eta`]: power-series expansion of the generating eta quotient
//!   `(q^t;q^t)^{kt} / (q;q)^k`;
//! - [`cores`]: direct enumeration of partitions and their hook numbers.
//!
//! [`series`] provides the underlying truncated power series over
//! arbitrary-precision integers, and [`arith`] the Dirichlet characters and
//! twisted divisor sums the closed forms are built from.
//!
//! The crate is `no_std` + `alloc`; the default `std` feature only adds
//! wall-clock timing to verification reports.

#![cfg_attr(not(feature = "std"), no_std)]

extern crate alloc;

pub mod arith;
pub mod cores;
pub mod eta;
pub mod formulas;
pub mod series;

pub use num_bigint;
pub use num_rational;
pub use num_traits;

pub use eta::{EtaQuotient, NamedForm};
pub use formulas::{FormulaSpec, VerificationReport};
pub use series::TruncatedSeries;
