use crate::error::{QsError, QsResult};
use crate::exact_field::{CyclotomicElement, CyclotomicField, ExactLaurentSeries};
use crate::number_tables::binom_int;
use rug::Rational;

use super::CoeffRequest;

/// Largest `N` the brute-force oracle accepts.
pub const ORACLE_MAX_N: u32 = 64;

/// Laurent expansion of `1/(q)_N` about `xi = e^(2 pi i h/k)` in the variable
/// `u = q - xi`, with coefficients `A_{-floor(N/k)} .. A_{m_max}`.
///
/// Each factor `1 - (xi + u)^j` is expanded as a polynomial in `u`, inverted
/// as a Laurent series (a simple pole when `xi^j = 1`), and the inverses are
/// multiplied. This shares nothing with the residue formula in
/// [`a_exact`](super::a_exact) and serves as its oracle.
pub fn laurent_oracle(k: u32, h: i64, n: u32, m_max: i64) -> QsResult<ExactLaurentSeries> {
    CoeffRequest::new(0, k, h, n).validate()?;
    if n > ORACLE_MAX_N {
        return Err(QsError::ResourceLimit(format!("laurent_oracle supports N <= {ORACLE_MAX_N}, got {n}")));
    }
    let field = CyclotomicField::new(k);
    let pole = (n / k) as i64;
    let rel = (m_max + pole + 1).max(1);
    let mut acc = ExactLaurentSeries::new(&field, 0, vec![CyclotomicElement::one(&field)], rel);
    for j in 1..=n as i64 {
        // 1 - (xi + u)^j = (1 - xi^j) - sum_{i>=1} binom(j, i) xi^(j-i) u^i
        let mut coeffs = Vec::with_capacity(j as usize + 1);
        coeffs.push(&CyclotomicElement::one(&field) - &CyclotomicElement::xi_pow(&field, h * j));
        for i in 1..=j {
            let b = Rational::from(binom_int(j, i as u32));
            coeffs.push(-&CyclotomicElement::xi_pow(&field, h * (j - i)).scale(&b));
        }
        let val = if j % k as i64 == 0 { 1 } else { 0 };
        let factor = ExactLaurentSeries::new(&field, 0, coeffs, val + rel);
        acc = acc.mul(&factor.invert()?)?;
    }
    if acc.order() > m_max + 1 {
        let start = acc.valuation().unwrap_or(m_max + 1).min(m_max + 1);
        let cs = (start..=m_max).map(|e| acc.coeff(e)).collect::<QsResult<Vec<_>>>()?;
        acc = ExactLaurentSeries::new(&field, start, cs, m_max + 1);
    }
    Ok(acc)
}
