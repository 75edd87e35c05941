//! Exact Laurent coefficients `A_m(xi, N)`, Rademacher coefficients
//! `C_{hkl}(N)` and Sylvester waves `W_k(N, n)`, with a brute-force oracle and
//! a validated floating-point path for large `N`.
//!
//! Exact values for a root `xi = e^(2 pi i h/k)` are elements of `Q(xi_k)` in
//! the power basis of `xi_k = e^(2 pi i/k)`; [`CyclotomicElement::embed`] with
//! `h = 1` gives their complex value.
//!
//! [`CyclotomicElement::embed`]: crate::exact_field::CyclotomicElement::embed

mod exact;
mod numeric;
mod oracle;

pub use exact::{a_exact, partial_fraction_check, power_sums, rademacher_c, wave_exact, PowerSums};
pub use numeric::{a_numeric, a_validated, wave_numeric, wave_validated, Validated};
pub use oracle::laurent_oracle;

use crate::error::{QsError, QsResult};
use crate::exact_field::gcd;

/// Which Laurent coefficient to compute: `A_m(e^(2 pi i h/k), N)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CoeffRequest {
    pub m: i64,
    pub k: u32,
    pub h: i64,
    pub n: u32,
}

impl CoeffRequest {
    pub fn new(m: i64, k: u32, h: i64, n: u32) -> Self {
        CoeffRequest { m, k, h, n }
    }

    pub fn validate(&self) -> QsResult<()> {
        if self.k == 0 {
            return Err(QsError::InvalidParameter("k must be positive".into()));
        }
        if self.n == 0 {
            return Err(QsError::InvalidParameter("N must be positive".into()));
        }
        if gcd(self.h.rem_euclid(self.k as i64) as u64, self.k as u64) != 1 {
            return Err(QsError::InvalidParameter(format!("gcd(h, k) must be 1, got h = {}, k = {}", self.h, self.k)));
        }
        Ok(())
    }

    /// `s = floor(N/k)`, the pole order at `xi`.
    pub fn pole_order(&self) -> i64 {
        (self.n / self.k) as i64
    }

    /// `M = floor(N/k) + m`; negative means the coefficient is zero.
    pub fn big_m(&self) -> i64 {
        self.pole_order() + self.m
    }
}
