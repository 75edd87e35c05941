use std::sync::Arc;

use rug::ops::Pow;
use rug::{Float, Integer, Rational};

use crate::error::{QsError, QsResult};
use crate::exact_field::{CyclotomicElement, CyclotomicField, ExactLaurentSeries};
use crate::hp_analysis::BigComplex;
use crate::number_tables::apostol_bernoulli_in;

use super::CoeffRequest;

/// Power sums `S_{n,r}(m, N) = delta_{0,r} (m+1) + sum_{1<=j<=N, j = r mod k} j^n`
/// for `1 <= n <= n_max` and `0 <= r < k`.
#[derive(Clone, Debug)]
pub struct PowerSums {
    pub k: u32,
    /// `sums[n - 1][r]`.
    pub sums: Vec<Vec<Integer>>,
}

impl PowerSums {
    pub fn get(&self, n: usize, r: usize) -> &Integer {
        &self.sums[n - 1][r]
    }
}

/// Exact power sums; pass `m = None` to drop the `delta_{0,r}(m+1)` term
/// (the wave variant).
pub fn power_sums(k: u32, m: Option<i64>, n: u32, n_max: usize) -> PowerSums {
    let k_us = k as usize;
    let mut pw: Vec<Integer> = (1..=n as u64).map(Integer::from).collect();
    let mut sums = Vec::with_capacity(n_max);
    for deg in 1..=n_max {
        let mut row = vec![Integer::new(); k_us];
        if let Some(m) = m {
            row[0] += m + 1;
        }
        for (idx, p) in pw.iter().enumerate() {
            row[(idx + 1) % k_us] += p;
        }
        sums.push(row);
        if deg < n_max {
            for (idx, p) in pw.iter_mut().enumerate() {
                *p *= (idx + 1) as u64;
            }
        }
    }
    PowerSums { k, sums }
}

/// Shared data of the residue formula at `xi = generator^h`:
/// the prefactor `(-1)^s / (k^(2s+1) s!) * prod_{w=N_k+1}^{k-1} (1 - xi^w)`.
pub(crate) fn residue_prefactor(field: &Arc<CyclotomicField>, k: u32, h: i64, n: u32) -> CyclotomicElement {
    let s = n / k;
    let nk = n % k;
    let mut pref = CyclotomicElement::one(field);
    for w in (nk + 1)..k {
        let f = &CyclotomicElement::one(field) - &CyclotomicElement::xi_pow(field, h * w as i64);
        pref = &pref * &f;
    }
    let mut den = Integer::from(k).pow(2 * s + 1);
    for i in 2..=s as u64 {
        den *= i;
    }
    if s % 2 == 1 {
        den = -den;
    }
    pref.scale(&Rational::from((Integer::from(1), den)))
}

/// Exponent series `sum_{n=1}^{len-1} c_n z^n` of the residue formula:
/// `c_1 = -shift - N(N+1)/2 - sum_r beta_1(xi^r) S_{1,r}` and
/// `c_n = -sum_r beta_n(xi^r) S_{n,r} / (n n!)`.
fn exponent_series(
    field: &Arc<CyclotomicField>,
    h: i64,
    n: u32,
    shift: &Integer,
    sums: &PowerSums,
    len: usize,
) -> ExactLaurentSeries {
    let k = field.conductor() as i64;
    let mut coeffs = vec![CyclotomicElement::zero(field)];
    let mut fact = Integer::from(1);
    for deg in 1..len {
        fact *= deg as u64;
        let mut acc = CyclotomicElement::zero(field);
        for r in 0..k {
            let s = sums.get(deg, r as usize);
            if *s == 0 {
                continue;
            }
            let beta = apostol_bernoulli_in(field, deg as u32, h * r);
            acc = &acc + &beta.scale(&Rational::from(s));
        }
        let mut c = acc.scale(&Rational::from((Integer::from(-1), Integer::from(&fact * deg as u64))));
        if deg == 1 {
            let lin: Integer = shift + Integer::from(n) * Integer::from(n + 1) / 2u32;
            c = &c - &CyclotomicElement::from_rational(field, Rational::from(lin));
        }
        coeffs.push(c);
    }
    ExactLaurentSeries::new(field, 0, coeffs, len as i64)
}

/// Exact `A_m(xi, N)` from the residue formula: the prefactor
/// `(-1)^s xi^(-m) / (k^(2s+1) s!) prod_{w=N_k+1}^{k-1}(1 - xi^w)` times the
/// `z^M` coefficient of `exp(sum c_n z^n)`, with `s = floor(N/k)` and
/// `M = s + m`. Returns zero when `M < 0`.
pub fn a_exact(req: &CoeffRequest) -> QsResult<CyclotomicElement> {
    req.validate()?;
    let field = CyclotomicField::new(req.k);
    let big_m = req.big_m();
    if big_m < 0 {
        return Ok(CyclotomicElement::zero(&field));
    }
    let len = big_m as usize + 1;
    let sums = power_sums(req.k, Some(req.m), req.n, len.saturating_sub(1).max(1));
    let shift = Integer::from(req.m);
    let e = exponent_series(&field, req.h, req.n, &shift, &sums, len).exp()?;
    let core = e.coeff(big_m)?;
    let pref = residue_prefactor(&field, req.k, req.h, req.n);
    let xi_m = CyclotomicElement::xi_pow(&field, -req.h * req.m);
    Ok(&(&pref * &xi_m) * &core)
}

/// Rademacher coefficient `C_{hkl}(N) = A_{-l}(e^(2 pi i h/k), N)`; zero for
/// `l > floor(N/k)`.
pub fn rademacher_c(h: i64, k: u32, ell: u32, n: u32) -> QsResult<CyclotomicElement> {
    a_exact(&CoeffRequest::new(-(ell as i64), k, h, n))
}

/// Residue part of the wave at a single primitive root `xi = generator^h`:
/// `Res_{z=0} e^(-n z) / (xi e^z)_N`.
fn wave_residue(field: &Arc<CyclotomicField>, k: u32, h: i64, big_n: u32, n: i64) -> QsResult<CyclotomicElement> {
    let s = (big_n / k) as usize;
    let sums = power_sums(k, None, big_n, s.saturating_sub(1).max(1));
    let e = exponent_series(field, h, big_n, &Integer::from(n), &sums, s).exp()?;
    let core = e.coeff(s as i64 - 1)?;
    Ok(&residue_prefactor(field, k, h, big_n) * &core)
}

/// Sylvester wave `W_k(N, n) = -sum_xi xi^(-n) Res_{z=0} e^(-n z)/(xi e^z)_N`
/// over the primitive `k`-th roots. Each root's contribution is computed in
/// `Q(xi_k)`; the sum is checked to be rational.
pub fn wave_exact(k: u32, big_n: u32, n: i64) -> QsResult<Rational> {
    if k == 0 || big_n == 0 {
        return Err(QsError::InvalidParameter("k and N must be positive".into()));
    }
    if k > big_n {
        return Ok(Rational::new());
    }
    let field = CyclotomicField::new(k);
    let mut total = CyclotomicElement::zero(&field);
    for h in CyclotomicElement::galois_units(k) {
        let res = wave_residue(&field, k, h, big_n, n)?;
        total = &total - &(&CyclotomicElement::xi_pow(&field, -h * n) * &res);
    }
    match total.as_rational() {
        Some(q) => Ok(q.clone()),
        None => Err(QsError::Domain(format!("wave sum is not rational: {total}"))),
    }
}

/// `|1/(q)_N - sum_{k<=N} sum_h sum_l C_{hkl}(N) / (q - e^(2 pi i h/k))^l|`
/// at the precision of `q`.
pub fn partial_fraction_check(big_n: u32, q: &BigComplex) -> QsResult<Float> {
    let prec = q.prec();
    let work = prec + 32;
    let q = q.with_prec(work);
    let one = BigComplex::one(work);
    let mut direct = one.clone();
    let mut qp = one.clone();
    for _ in 0..big_n {
        qp = &qp * &q;
        direct = &direct * &(&one - &qp);
    }
    let direct = direct.recip()?;
    let mut sum = BigComplex::zero(work);
    for k in 1..=big_n {
        for h in CyclotomicElement::galois_units(k) {
            let h = if k == 1 { 0 } else { h };
            let xi = BigComplex::root_of_unity(h, k as u64, work);
            let inv = (&q - &xi).recip()?;
            let mut pw = one.clone();
            for ell in 1..=(big_n / k) {
                pw = &pw * &inv;
                let c = rademacher_c(h, k, ell, big_n)?.embed(1, work);
                sum += &(&c * &pw);
            }
        }
    }
    Ok(Float::with_val(prec, direct.dist(&sum)))
}

#[cfg(test)]
mod tests {
    use super::super::laurent_oracle;
    use super::*;
    use crate::number_tables::restricted_p;

    fn q(s: &str) -> Rational {
        s.parse().unwrap()
    }

    #[test]
    fn k1_n3_coefficients() {
        let want = ["-1/6", "1/4", "-17/72", "25/144", "-91/864"];
        for (i, w) in want.iter().enumerate() {
            let a = a_exact(&CoeffRequest::new(i as i64 - 3, 1, 0, 3)).unwrap();
            assert_eq!(a.as_rational().unwrap(), &q(w), "m = {}", i as i64 - 3);
        }
    }

    #[test]
    fn below_valuation_is_zero() {
        assert!(a_exact(&CoeffRequest::new(-4, 1, 0, 3)).unwrap().is_zero());
        assert!(rademacher_c(1, 3, 2, 5).unwrap().is_zero());
    }

    #[test]
    fn matches_oracle_small_grid() {
        for k in 1..=4u32 {
            for h in CyclotomicElement::galois_units(k) {
                for n in 1..=9u32 {
                    let s = (n / k) as i64;
                    let series = laurent_oracle(k, h, n, 2).unwrap();
                    for m in -s..=2 {
                        let a = a_exact(&CoeffRequest::new(m, k, h, n)).unwrap();
                        assert_eq!(a, series.coeff(m).unwrap(), "k={k} h={h} N={n} m={m}");
                    }
                }
            }
        }
    }

    #[test]
    fn simple_pole_at_primitive_nth_root() {
        let field = CyclotomicField::new(5);
        let c = rademacher_c(1, 5, 1, 5).unwrap();
        let want = CyclotomicElement::xi_pow(&field, 1).scale(&q("-1/25"));
        assert_eq!(c, want);
    }

    #[test]
    fn waves_at_n5() {
        let n = 60;
        assert_eq!(wave_exact(2, 5, n).unwrap(), q("135/128"));
        assert_eq!(wave_exact(3, 5, n).unwrap(), q("2/27"));
        assert_eq!(wave_exact(4, 5, n).unwrap(), q("1/16"));
        assert_eq!(wave_exact(5, 5, n).unwrap(), q("4/25"));
        assert_eq!(wave_exact(6, 5, n).unwrap(), Rational::new());
    }

    #[test]
    fn waves_sum_to_partitions() {
        for big_n in 1..=6u32 {
            for n in 0..=20i64 {
                let mut total = Rational::new();
                for k in 1..=big_n {
                    total += wave_exact(k, big_n, n).unwrap();
                }
                assert_eq!(total, Rational::from(restricted_p(big_n, n as u32)), "N={big_n} n={n}");
            }
        }
    }

    #[test]
    fn partial_fractions_small() {
        let z = BigComplex::from_parts_f64(2.0, 1.0, 200);
        assert!(partial_fraction_check(4, &z).unwrap() < 1e-50);
        let z = BigComplex::from_rational(&q("1/3"), 200);
        assert!(partial_fraction_check(3, &z).unwrap() < 1e-50);
    }

    #[test]
    fn power_sums_direct() {
        let ps = power_sums(3, Some(2), 7, 3);
        // r = 0: 3 + (3^2 + 6^2) at n = 2
        assert_eq!(*ps.get(2, 0), 3 + 9 + 36);
        assert_eq!(*ps.get(3, 1), 1 + 64 + 343);
    }
}
