//! Exact arithmetic: rationals, cyclotomic field elements and truncated
//! Laurent series over them.

mod cyclotomic;
mod laurent;

pub use cyclotomic::{cyclotomic_polynomial, euler_phi, gcd, CyclotomicElement, CyclotomicField, IntPoly};
pub use laurent::ExactLaurentSeries;
pub use rug::{Integer, Rational};
