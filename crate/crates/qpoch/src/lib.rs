//! Laurent coefficients of `1/(q)_N` at roots of unity.
//!
//! The crate computes the coefficients `A_m(xi, N)` of the expansion of
//! `1/((1-q)(1-q^2)...(1-q^N))` about a primitive `k`-th root of unity, the
//! Sylvester waves `W_k(N, n)` of the restricted partition function, and the
//! saddle-point asymptotic expansions of both as `N` grows.
//!
//! Exact values live in [`exact_field`] and [`exact_coeffs`]; the
//! arbitrary-precision numerics are in [`hp_analysis`] and [`saddle_asym`].

pub mod cli_app;
pub mod error;
pub mod exact_coeffs;
pub mod exact_field;
pub mod hp_analysis;
pub mod number_tables;
pub mod saddle_asym;

pub use error::{QsError, QsResult};
