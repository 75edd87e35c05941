use rug::Float;

use crate::error::{QsError, QsResult};
use crate::exact_field::{CyclotomicElement, CyclotomicField};
use crate::hp_analysis::{digits_to_bits, BigComplex};

use super::exact::residue_prefactor;
use super::CoeffRequest;

/// `beta_n(rho) / n!` for `n = 0..len`, from the Taylor coefficients of
/// `z / (rho e^z - 1)` computed by floating series inversion.
fn apostol_over_factorial(rho: &BigComplex, rho_is_one: bool, len: usize) -> Vec<BigComplex> {
    let prec = rho.prec();
    if len == 0 {
        return Vec::new();
    }
    let mut inv_fact = vec![BigComplex::one(prec)];
    for i in 1..=len {
        inv_fact.push(inv_fact[i - 1].div_i64(i as i64));
    }
    // denominators d_i with z/(rho e^z - 1) = z^a / sum d_i z^i
    let (d, shift): (Vec<BigComplex>, usize) = if rho_is_one {
        ((0..len).map(|i| inv_fact[i + 1].clone()).collect(), 0)
    } else {
        let mut d = vec![rho - &BigComplex::one(prec)];
        d.extend((1..len).map(|i| rho * &inv_fact[i]));
        (d, 1)
    };
    let inv0 = d[0].recip().expect("nonzero leading denominator");
    let mut e = vec![inv0.clone()];
    for n in 1..len {
        let mut acc = BigComplex::zero(prec);
        for i in 1..=n {
            acc += &(&d[i] * &e[n - i]);
        }
        e.push(-(&acc * &inv0));
    }
    let mut out = vec![BigComplex::zero(prec); shift];
    out.extend(e);
    out.truncate(len);
    out
}

/// `[z^target] exp(sum_{n>=1} c_n z^n)` at floating precision, where `c_n`
/// are assembled from floating power sums and Apostol-Bernoulli numbers.
fn residue_core(k: u32, h: i64, big_n: u32, shift: i64, delta: Option<i64>, target: usize, prec: u32) -> BigComplex {
    if target == 0 {
        return BigComplex::one(prec);
    }
    let k_us = k as usize;
    let len = target + 1;
    let betas: Vec<Vec<BigComplex>> = (0..k as i64)
        .map(|r| {
            let rho = BigComplex::root_of_unity(h * r, k as u64, prec);
            apostol_over_factorial(&rho, (h * r).rem_euclid(k as i64) == 0, len)
        })
        .collect();
    let mut pw: Vec<Float> = (1..=big_n).map(|j| Float::with_val(prec, j)).collect();
    let mut weighted = vec![BigComplex::zero(prec)];
    for deg in 1..len {
        let mut sums = vec![Float::new(prec); k_us];
        if let Some(m) = delta {
            sums[0] += m + 1;
        }
        for (idx, p) in pw.iter().enumerate() {
            sums[(idx + 1) % k_us] += p;
        }
        if deg + 1 < len {
            for (idx, p) in pw.iter_mut().enumerate() {
                *p *= (idx + 1) as u32;
            }
        }
        // n c_n = -sum_r (beta_n / n!) S_{n,r}
        let mut acc = BigComplex::zero(prec);
        for (r, s) in sums.iter().enumerate() {
            acc += &betas[r][deg].scale(s);
        }
        let mut wc = -acc;
        if deg == 1 {
            let lin = Float::with_val(prec, shift) + Float::with_val(prec, big_n) * Float::with_val(prec, big_n + 1) / 2u32;
            wc.re -= lin;
        }
        weighted.push(wc);
    }
    let mut t = vec![BigComplex::one(prec)];
    for n in 1..len {
        let mut acc = BigComplex::zero(prec);
        for j in 1..=n {
            acc += &(&weighted[j] * &t[n - j]);
        }
        t.push(acc.div_i64(n as i64));
    }
    t.pop().unwrap()
}

/// `A_m(xi, N)` through the residue formula evaluated in floating point with
/// `digits` significant decimal digits of working precision. Cancellation in
/// the exponential recurrence loses roughly `0.1 N` digits; use
/// [`a_validated`] to get a checked result.
pub fn a_numeric(req: &CoeffRequest, digits: u32) -> QsResult<BigComplex> {
    req.validate()?;
    let prec = digits_to_bits(digits);
    let big_m = req.big_m();
    if big_m < 0 {
        return Ok(BigComplex::zero(prec));
    }
    let core = residue_core(req.k, req.h, req.n, req.m, Some(req.m), big_m as usize, prec);
    let field = CyclotomicField::new(req.k);
    let pref = &residue_prefactor(&field, req.k, req.h, req.n) * &CyclotomicElement::xi_pow(&field, -req.h * req.m);
    Ok(&pref.embed(1, prec) * &core)
}

/// `W_k(N, n)` through the floating residue formula. Conjugate roots give
/// conjugate contributions, so only `h <= k/2` is evaluated.
pub fn wave_numeric(k: u32, big_n: u32, n: i64, digits: u32) -> QsResult<Float> {
    if k == 0 || big_n == 0 {
        return Err(QsError::InvalidParameter("k and N must be positive".into()));
    }
    let prec = digits_to_bits(digits);
    if k > big_n {
        return Ok(Float::new(prec));
    }
    let s = (big_n / k) as usize;
    let field = CyclotomicField::new(k);
    let mut total = Float::new(prec);
    for h in CyclotomicElement::galois_units(k) {
        if 2 * h > k as i64 {
            continue;
        }
        let core = residue_core(k, h, big_n, n, None, s - 1, prec);
        let pref = &residue_prefactor(&field, k, h, big_n) * &CyclotomicElement::xi_pow(&field, -h * n);
        let term = &pref.embed(1, prec) * &core;
        let paired = 2 * h != k as i64 && k > 1;
        if paired {
            total -= Float::with_val(prec, &term.re * 2u32);
        } else {
            total -= &term.re;
        }
    }
    Ok(total)
}

/// A floating result whose leading digits were confirmed by a second run at
/// 20 more digits of working precision.
#[derive(Clone, Debug)]
pub struct Validated<T> {
    pub value: T,
    /// Number of significant decimal digits on which the two runs agree.
    pub digits: u32,
    /// Working precision (decimal digits) of the more precise run.
    pub working_digits: u32,
}

const MAX_ROUNDS: usize = 8;

fn agreement(a: &BigComplex, b: &BigComplex) -> u32 {
    let scale = b.abs();
    if scale.is_zero() {
        return if a.is_zero() { u32::MAX } else { 0 };
    }
    let d = a.dist(b);
    if d.is_zero() {
        return u32::MAX;
    }
    let rel = (d / scale).to_f64();
    (-rel.log10()).floor().max(0.0) as u32
}

fn validate_with<F>(target: u32, start: u32, run: F) -> QsResult<Validated<BigComplex>>
where
    F: Fn(u32) -> QsResult<BigComplex> + Sync,
{
    let mut work = start;
    for _ in 0..MAX_ROUNDS {
        let (lo, hi) = rayon::join(|| run(work), || run(work + 20));
        let (lo, hi) = (lo?, hi?);
        let agree = agreement(&lo, &hi).min(work + 20);
        if agree >= target {
            return Ok(Validated { value: hi, digits: agree, working_digits: work + 20 });
        }
        work += (work / 2).max(target.saturating_sub(agree) + 20);
    }
    Err(QsError::Convergence(format!("floating path did not reach {target} stable digits")))
}

/// Initial working precision: the target plus a guard and the observed
/// cancellation of about `0.1 N` digits.
fn start_digits(target: u32, big_n: u32) -> u32 {
    target + 20 + big_n / 9
}

/// [`a_numeric`] with precision doubling until `target` digits agree between
/// runs at `P` and `P + 20` digits.
pub fn a_validated(req: &CoeffRequest, target: u32) -> QsResult<Validated<BigComplex>> {
    req.validate()?;
    validate_with(target, start_digits(target, req.n), |p| a_numeric(req, p))
}

/// [`wave_numeric`] with the same validation as [`a_validated`].
pub fn wave_validated(k: u32, big_n: u32, n: i64, target: u32) -> QsResult<Validated<Float>> {
    let v = validate_with(target, start_digits(target, big_n), |p| wave_numeric(k, big_n, n, p).map(BigComplex::from_real))?;
    Ok(Validated { value: v.value.re, digits: v.digits, working_digits: v.working_digits })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact_coeffs::{a_exact, wave_exact};

    #[test]
    fn numeric_matches_exact() {
        for &(m, k, h, n) in &[(-1i64, 1u32, 0i64, 30u32), (0, 3, 2, 25), (2, 4, 1, 17), (-3, 5, 2, 19)] {
            let req = CoeffRequest::new(m, k, h, n);
            let exact = a_exact(&req).unwrap().embed(1, 300);
            let num = a_numeric(&req, 60).unwrap();
            let d = num.dist(&exact).to_f64() / exact.abs().to_f64();
            assert!(d < 1e-40, "{req:?}: {d}");
        }
    }

    #[test]
    fn wave_numeric_matches_exact() {
        for &(k, big_n, n) in &[(1u32, 12u32, 40i64), (2, 11, 7), (3, 14, 30), (4, 9, 100), (5, 13, 5)] {
            let exact = Float::with_val(300, wave_exact(k, big_n, n).unwrap());
            let num = wave_numeric(k, big_n, n, 60).unwrap();
            let d = (num - &exact).abs().to_f64() / exact.abs().to_f64();
            assert!(d < 1e-40, "k={k} N={big_n} n={n}: {d}");
        }
    }

    #[test]
    fn validated_reports_digits() {
        let v = a_validated(&CoeffRequest::new(-1, 1, 0, 200), 25).unwrap();
        assert!(v.digits >= 25);
        let exact = a_exact(&CoeffRequest::new(-1, 1, 0, 200)).unwrap().embed(1, 400);
        assert!(v.value.dist(&exact).to_f64() / exact.abs().to_f64() < 1e-24);
    }
}
