use rug::float::Constant;
use rug::ops::Pow;
use rug::{Float, Integer};

use super::complex::{pi, BigComplex};
use crate::error::{QsError, QsResult};
use crate::number_tables::{bernoulli, eulerian_poly};

/// Largest modulus accepted by [`li2`].
pub const LI2_MAX_MODULUS: f64 = 0.97;

/// Principal dilogarithm `Li_2(w) = sum w^n / n^2` for `|w| <= 0.97`, plus
/// the limit value `Li_2(1) = pi^2/6`.
///
/// The series is cut once the geometric tail bound
/// `|w|^(n+1) / ((n+1)^2 (1 - |w|))` drops below the working ulp.
pub fn li2(w: &BigComplex) -> QsResult<BigComplex> {
    let prec = w.prec();
    if w.im.is_zero() && w.re == 1 {
        return Ok(BigComplex::from_real(zeta2(prec)));
    }
    let r = w.abs();
    if r > LI2_MAX_MODULUS {
        return Err(QsError::Domain(format!("li2 needs |w| <= {LI2_MAX_MODULUS}, got {}", r.to_f64())));
    }
    let work = prec + 24;
    let w = w.with_prec(work);
    let r64 = r.to_f64();
    if r64 == 0.0 {
        return Ok(BigComplex::zero(prec));
    }
    let log_r = r64.ln();
    let log_eps = -f64::from(prec + 4) * std::f64::consts::LN_2;
    let log_gap = (1.0 - r64).ln();
    let mut acc = BigComplex::zero(work);
    let mut pw = w.clone();
    let mut n: u64 = 1;
    loop {
        acc += &pw.div_i64((n * n) as i64);
        let nn = (n + 1) as f64;
        let log_tail = nn * log_r - 2.0 * nn.ln() - log_gap;
        if log_tail < log_eps {
            break;
        }
        pw = &pw * &w;
        n += 1;
    }
    Ok(acc.with_prec(prec))
}

/// `pi^2 / 6`.
pub fn zeta2(prec: u32) -> Float {
    let p = pi(prec + 8);
    Float::with_val(prec, p.square() / 6u32)
}

/// `Li_{-m}(w) = w A_m(w) / (1 - w)^(m+1)` with `A_m` the Eulerian polynomial.
pub fn polylog_neg(m: u32, w: &BigComplex) -> QsResult<BigComplex> {
    let prec = w.prec();
    let one = BigComplex::one(prec);
    let omw = &one - w;
    if omw.is_zero() {
        return Err(QsError::Domain("polylog_neg has a pole at w = 1".into()));
    }
    let a = eulerian_poly(m);
    let mut acc = BigComplex::zero(prec);
    for c in a.iter().rev() {
        acc = &(&acc * w) + &BigComplex::from_integer(c, prec);
    }
    let den = omw.powi(m as i64 + 1)?;
    Ok(&(w * &acc) * &den.recip()?)
}

/// Clausen function `Cl_2(theta) = sum sin(n theta)/n^2`.
///
/// After reducing `theta` to `(-pi, pi]` this uses the expansion
/// `theta - theta log|theta| + sum_j |B_2j| theta^(2j+1) / (2j (2j+1)!)`,
/// which converges geometrically with ratio `(theta / 2 pi)^2 <= 1/4`.
pub fn clausen(theta: &Float) -> Float {
    let prec = theta.prec();
    let work = prec + 24;
    let two_pi = Float::with_val(work, pi(work) * 2u32);
    let mut t = Float::with_val(work, theta % &two_pi);
    if t > pi(work) {
        t -= &two_pi;
    } else if t <= -pi(work) {
        t += &two_pi;
    }
    if t.is_zero() {
        return Float::new(prec);
    }
    let abs_t = Float::with_val(work, t.abs_ref());
    let mut acc = Float::with_val(work, &t - Float::with_val(work, &t * abs_t.ln()));
    let t2 = Float::with_val(work, t.square_ref());
    let eps = Float::with_val(work, Float::with_val(work, 2u32).pow(-(work as i32)));
    // term_j = |B_2j| t^(2j+1) / (2j (2j+1)!)
    let mut tpow = Float::with_val(work, &t * &t2);
    let mut fact = Integer::from(6); // (2j+1)! for j = 1
    let mut j: u32 = 1;
    loop {
        let b = bernoulli(2 * j as usize);
        let babs = Float::with_val(work, b.abs());
        let term = Float::with_val(work, &tpow * &babs) / (Float::with_val(work, &fact) * (2 * j));
        let small = Float::with_val(work, term.abs_ref()) < eps;
        acc += term;
        if small {
            break;
        }
        j += 1;
        tpow *= &t2;
        fact *= (2 * j) * (2 * j + 1);
    }
    Float::with_val(prec, acc)
}

/// `Gamma(s + 1/2)` for `s >= 0`, from `Gamma(1/2) = sqrt(pi)`.
pub fn gamma_half(s: u32, prec: u32) -> Float {
    let mut g = Float::with_val(prec, pi(prec).sqrt());
    for j in 0..s {
        g *= Float::with_val(prec, 2 * j + 1) / 2u32;
    }
    g
}

/// `L_{3/2}(y) = sum_j y^j / (j! Gamma(j + 5/2))`, the entire function equal
/// to `y^(-3/4) I_{3/2}(2 sqrt(y))` for `y > 0`.
pub fn bessel_l32(y: &Float) -> Float {
    let prec = y.prec();
    let work = prec + 32;
    let y = Float::with_val(work, y);
    let mut term = Float::with_val(work, gamma_half(2, work).recip());
    let mut acc = term.clone();
    let eps = Float::with_val(work, Float::with_val(work, 2u32).pow(-(work as i32)));
    let ymag = y.to_f64().abs();
    let mut j: u32 = 0;
    loop {
        // t_{j+1} = t_j y / ((j+1)(j+5/2))
        term *= &y;
        term /= Float::with_val(work, (j + 1) as f64 * (j as f64 + 2.5));
        acc += &term;
        j += 1;
        let rel = Float::with_val(work, term.abs_ref()) / Float::with_val(work, acc.abs_ref()).max(&Float::with_val(work, 1e-300));
        if f64::from(j) > ymag && rel < eps {
            break;
        }
    }
    Float::with_val(prec, acc)
}

/// `log 2`.
pub fn ln2(prec: u32) -> Float {
    Float::with_val(prec, Constant::Log2)
}

#[cfg(test)]
mod tests {
    use super::*;

    const P: u32 = 220;

    #[test]
    fn li2_special_values() {
        assert!(li2(&BigComplex::zero(P)).unwrap().is_zero());
        let one = li2(&BigComplex::one(P)).unwrap();
        assert!((one.re - zeta2(P)).abs() < 1e-60);
        let half = li2(&BigComplex::from_f64(0.5, P)).unwrap();
        let l2 = ln2(P);
        let want = Float::with_val(P, zeta2(P) / 2u32) - Float::with_val(P, l2.square_ref()) / 2u32;
        assert!((half.re - want).abs() < 1e-60);
        assert!(li2(&BigComplex::from_f64(0.98, P)).is_err());
    }

    #[test]
    fn negative_order_polylog() {
        let m1 = BigComplex::from_f64(-1.0, P);
        assert!(polylog_neg(0, &m1).unwrap().dist(&BigComplex::from_f64(-0.5, P)) < 1e-60);
        assert!(polylog_neg(1, &m1).unwrap().dist(&BigComplex::from_f64(-0.25, P)) < 1e-60);
        assert!(polylog_neg(2, &BigComplex::one(P)).is_err());
    }

    #[test]
    fn clausen_values() {
        assert!(clausen(&Float::new(P)).is_zero());
        assert!(clausen(&pi(P)).abs() < 1e-60);
        let catalan = Float::with_val(P, Constant::Catalan);
        let half_pi = Float::with_val(P, pi(P) / 2u32);
        assert!((clausen(&half_pi) - catalan).abs() < 1e-60);
    }

    #[test]
    fn bessel_kernel() {
        let l0 = bessel_l32(&Float::new(P));
        let want = Float::with_val(P, 4u32) / (Float::with_val(P, 3u32) * pi(P).sqrt());
        assert!((l0 - want).abs() < 1e-60);
        // y = 1: I_{3/2}(2) = sqrt(2/(2 pi)) (cosh 2 - sinh 2 / 2)
        let two = Float::with_val(P, 2u32);
        let i32 = Float::with_val(P, pi(P).recip()).sqrt()
            * (Float::with_val(P, two.cosh_ref()) - Float::with_val(P, two.sinh_ref()) / 2u32);
        assert!((bessel_l32(&Float::with_val(P, 1u32)) - i32).abs() < 1e-60);
    }
}
