//! Arbitrary-precision complex arithmetic, truncated complex Taylor series,
//! the special functions used by the saddle-point analysis, and the Newton
//! solve for the dilogarithm zero `w0`.

mod complex;
mod saddle;
mod series;
mod special;

pub use complex::{bits_to_digits, digits_to_bits, format_float, pi, ten_pow_neg, BigComplex};
pub use saddle::{find_w0, log1mexp_series, p_series_at, SaddleConstants};
pub use series::ComplexSeries;
pub use special::{bessel_l32, clausen, gamma_half, li2, ln2, polylog_neg, zeta2, LI2_MAX_MODULUS};
