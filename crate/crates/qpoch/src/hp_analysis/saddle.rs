use rug::Float;

use super::complex::{digits_to_bits, pi, ten_pow_neg, BigComplex};
use super::series::ComplexSeries;
use super::special::{li2, polylog_neg, zeta2};
use crate::error::{QsError, QsResult};

/// The dilogarithm zero `w0` (solving `Li_2(w) = 2 pi i log w`), the saddle
/// point `z0 = 2 pi i + log(1 - w0)` and the growth constants `U`, `V`.
#[derive(Clone, Debug)]
pub struct SaddleConstants {
    pub digits: u32,
    pub w0: BigComplex,
    pub z0: BigComplex,
    /// `U = -log|w0|`.
    pub u: Float,
    /// `V = arg(1/w0)`.
    pub v: Float,
    /// `|Li_2(w0) - 2 pi i log w0|`.
    pub residual: Float,
}

impl SaddleConstants {
    pub fn prec(&self) -> u32 {
        self.w0.prec()
    }
}

const NEWTON_MAX_ITER: usize = 200;

fn two_pi_i(prec: u32) -> BigComplex {
    BigComplex::new(Float::new(prec), Float::with_val(prec, pi(prec) * 2u32))
}

/// `F(w) = Li_2(w) - 2 pi i log w`.
fn dilog_equation(w: &BigComplex) -> QsResult<BigComplex> {
    Ok(&li2(w)? - &(&two_pi_i(w.prec()) * &w.ln()?))
}

/// Newton's method for `w0`, seeded at `0.92 - 0.18 i`, stopping once the
/// step drops below `10^-(digits-5)`.
pub fn find_w0(digits: u32) -> QsResult<SaddleConstants> {
    if digits < 30 {
        return Err(QsError::InvalidParameter(format!("find_w0 needs at least 30 digits, got {digits}")));
    }
    let prec = digits_to_bits(digits);
    let work = prec + 32;
    let tpi = two_pi_i(work);
    let one = BigComplex::one(work);
    let tol = ten_pow_neg(digits as i32 - 5, work);
    let mut w = BigComplex::from_parts_f64(0.92, -0.18, work);
    let mut converged = false;
    for _ in 0..NEWTON_MAX_ITER {
        let f = dilog_equation(&w)?;
        // F'(w) = (-log(1 - w) - 2 pi i) / w
        let fp = &(-(&one - &w).ln()? - &tpi) * &w.recip()?;
        let step = &f * &fp.recip()?;
        w = &w - &step;
        if step.abs() < tol {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(QsError::Convergence(format!("Newton iteration for w0 at {digits} digits")));
    }
    let residual = dilog_equation(&w)?.abs();
    let z0 = &tpi + &(&one - &w).ln()?;
    let u = Float::with_val(prec, -w.abs().ln());
    let v = Float::with_val(prec, -w.arg());
    Ok(SaddleConstants {
        digits,
        w0: w.with_prec(prec),
        z0: z0.with_prec(prec),
        u,
        v,
        residual: Float::with_val(prec, residual),
    })
}

/// Taylor series of `log(1 - e^z)` at `center`: the constant is the principal
/// logarithm and the `i`-th coefficient is `-Li_{1-i}(e^center) / i!`.
pub fn log1mexp_series(center: &BigComplex, len: usize) -> QsResult<ComplexSeries> {
    let prec = center.prec();
    let e = center.exp();
    let mut coeffs = Vec::with_capacity(len);
    if len > 0 {
        coeffs.push((&BigComplex::one(prec) - &e).ln()?);
    }
    let mut fact = Float::with_val(prec, 1u32);
    for i in 1..len {
        fact *= i as u32;
        let li = polylog_neg((i - 1) as u32, &e)?;
        coeffs.push(-li.scale(&Float::with_val(prec, fact.recip_ref())));
    }
    Ok(ComplexSeries::new(center.clone(), coeffs))
}

/// Taylor series of `p(z) = (Li_2(e^z) - Li_2(1)) / z` at a point with
/// negative real part.
///
/// The constant term comes from the dilogarithm series; the rest follows from
/// `z p'(z) = -(p(z) + log(1 - e^z))`, which gives
/// `a_{i+1} = -((i+1) a_i + L_i) / (c (i+1))`.
pub fn p_series_at(center: &BigComplex, len: usize) -> QsResult<ComplexSeries> {
    if !center.re.is_sign_negative() || center.re.is_zero() {
        return Err(QsError::Domain("p_series_at needs Re(center) < 0".into()));
    }
    let prec = center.prec();
    let lg = log1mexp_series(center, len)?;
    let cinv = center.recip()?;
    let mut a = Vec::with_capacity(len);
    if len == 0 {
        return Ok(ComplexSeries::new(center.clone(), a));
    }
    let li = li2(&center.exp())?;
    let z2 = BigComplex::from_real(zeta2(prec));
    a.push(&(&li - &z2) * &cinv);
    for i in 0..len - 1 {
        let num = &a[i].scale_i64((i + 1) as i64) + &lg.coeffs[i];
        a.push(-(&num * &cinv).div_i64((i + 1) as i64));
    }
    Ok(ComplexSeries::new(center.clone(), a))
}
