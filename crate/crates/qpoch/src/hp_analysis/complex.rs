use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};

use rug::float::Constant;
use rug::ops::Pow;
use rug::{Float, Integer, Rational};

use crate::error::{QsError, QsResult};

/// Guard bits added on top of the requested decimal digits.
const GUARD_BITS: u32 = 16;

/// Binary precision that carries `digits` significant decimal digits.
pub fn digits_to_bits(digits: u32) -> u32 {
    (f64::from(digits) * std::f64::consts::LOG2_10).ceil() as u32 + GUARD_BITS
}

/// Decimal digits carried by a binary precision (guard bits excluded).
pub fn bits_to_digits(bits: u32) -> u32 {
    (f64::from(bits.saturating_sub(GUARD_BITS)) / std::f64::consts::LOG2_10).floor() as u32
}

pub fn pi(prec: u32) -> Float {
    Float::with_val(prec, Constant::Pi)
}

/// `10^(-digits)` at the given precision.
pub fn ten_pow_neg(digits: i32, prec: u32) -> Float {
    Float::with_val(prec, 10u32).pow(-digits)
}

/// Complex number with arbitrary-precision real and imaginary parts.
///
/// Both parts always share one precision; binary operations work at the
/// larger of the two operand precisions.
#[derive(Clone, PartialEq)]
pub struct BigComplex {
    pub re: Float,
    pub im: Float,
}

impl BigComplex {
    pub fn new(re: Float, im: Float) -> Self {
        let prec = re.prec().max(im.prec());
        BigComplex { re: Float::with_val(prec, re), im: Float::with_val(prec, im) }
    }

    pub fn zero(prec: u32) -> Self {
        BigComplex { re: Float::new(prec), im: Float::new(prec) }
    }

    pub fn one(prec: u32) -> Self {
        Self::from_f64(1.0, prec)
    }

    pub fn i(prec: u32) -> Self {
        BigComplex { re: Float::new(prec), im: Float::with_val(prec, 1) }
    }

    pub fn from_f64(x: f64, prec: u32) -> Self {
        BigComplex { re: Float::with_val(prec, x), im: Float::new(prec) }
    }

    pub fn from_parts_f64(re: f64, im: f64, prec: u32) -> Self {
        BigComplex { re: Float::with_val(prec, re), im: Float::with_val(prec, im) }
    }

    pub fn from_real(x: Float) -> Self {
        let prec = x.prec();
        BigComplex { re: x, im: Float::new(prec) }
    }

    pub fn from_rational(q: &Rational, prec: u32) -> Self {
        BigComplex { re: Float::with_val(prec, q), im: Float::new(prec) }
    }

    pub fn from_integer(n: &Integer, prec: u32) -> Self {
        BigComplex { re: Float::with_val(prec, n), im: Float::new(prec) }
    }

    pub fn from_i64(n: i64, prec: u32) -> Self {
        BigComplex { re: Float::with_val(prec, n), im: Float::new(prec) }
    }

    /// `e^(2 pi i num / den)`.
    pub fn root_of_unity(num: i64, den: u64, prec: u32) -> Self {
        let den = den as i64;
        let r = num.rem_euclid(den);
        if r == 0 {
            return Self::one(prec);
        }
        if 2 * r == den {
            return Self::from_f64(-1.0, prec);
        }
        if 4 * r == den {
            return Self::i(prec);
        }
        if 4 * r == 3 * den {
            return -Self::i(prec);
        }
        let theta = pi(prec + 8) * Float::with_val(prec + 8, 2 * r) / Float::with_val(prec + 8, den);
        let (s, c) = theta.sin_cos(Float::new(prec + 8));
        BigComplex { re: Float::with_val(prec, c), im: Float::with_val(prec, s) }
    }

    pub fn prec(&self) -> u32 {
        self.re.prec().max(self.im.prec())
    }

    pub fn with_prec(&self, prec: u32) -> Self {
        BigComplex { re: Float::with_val(prec, &self.re), im: Float::with_val(prec, &self.im) }
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn is_finite(&self) -> bool {
        self.re.is_finite() && self.im.is_finite()
    }

    pub fn conj(&self) -> Self {
        BigComplex { re: self.re.clone(), im: Float::with_val(self.im.prec(), -&self.im) }
    }

    pub fn norm_sqr(&self) -> Float {
        let p = self.prec();
        Float::with_val(p, self.re.square_ref()) + Float::with_val(p, self.im.square_ref())
    }

    pub fn abs(&self) -> Float {
        let p = self.prec();
        Float::with_val(p, self.re.hypot_ref(&self.im))
    }

    /// Principal argument in `(-pi, pi]`.
    pub fn arg(&self) -> Float {
        let p = self.prec();
        Float::with_val(p, self.im.atan2_ref(&self.re))
    }

    pub fn scale(&self, x: &Float) -> Self {
        let p = self.prec().max(x.prec());
        BigComplex { re: Float::with_val(p, &self.re * x), im: Float::with_val(p, &self.im * x) }
    }

    pub fn scale_rational(&self, q: &Rational) -> Self {
        let p = self.prec();
        BigComplex { re: Float::with_val(p, &self.re * q), im: Float::with_val(p, &self.im * q) }
    }

    pub fn scale_i64(&self, n: i64) -> Self {
        let p = self.prec();
        BigComplex { re: Float::with_val(p, &self.re * n), im: Float::with_val(p, &self.im * n) }
    }

    pub fn div_i64(&self, n: i64) -> Self {
        let p = self.prec();
        BigComplex { re: Float::with_val(p, &self.re / n), im: Float::with_val(p, &self.im / n) }
    }

    pub fn mul_i(&self) -> Self {
        BigComplex { re: Float::with_val(self.im.prec(), -&self.im), im: self.re.clone() }
    }

    pub fn recip(&self) -> QsResult<Self> {
        if self.is_zero() {
            return Err(QsError::DivisionByZero);
        }
        let n = self.norm_sqr();
        let p = self.prec();
        Ok(BigComplex {
            re: Float::with_val(p, &self.re / &n),
            im: -Float::with_val(p, &self.im / &n),
        })
    }

    pub fn exp(&self) -> Self {
        let p = self.prec();
        let r = Float::with_val(p, self.re.exp_ref());
        let (s, c) = self.im.clone().sin_cos(Float::new(p));
        BigComplex { re: Float::with_val(p, &r * &c), im: Float::with_val(p, &r * &s) }
    }

    /// Principal logarithm, imaginary part in `(-pi, pi]`.
    pub fn ln(&self) -> QsResult<Self> {
        if self.is_zero() {
            return Err(QsError::Domain("logarithm of zero".into()));
        }
        let p = self.prec();
        let re = Float::with_val(p, self.norm_sqr().ln()) / 2u32;
        Ok(BigComplex { re, im: self.arg() })
    }

    /// Principal power `self^tau = exp(tau * Log self)`.
    pub fn pow(&self, tau: &BigComplex) -> QsResult<Self> {
        if self.is_zero() {
            if tau.re.is_sign_positive() && !tau.re.is_zero() {
                return Ok(Self::zero(self.prec()));
            }
            return Err(QsError::Domain("zero raised to a non-positive power".into()));
        }
        Ok((tau * &self.ln()?).exp())
    }

    pub fn pow_rational(&self, tau: &Rational) -> QsResult<Self> {
        self.pow(&BigComplex::from_rational(tau, self.prec()))
    }

    /// Principal square root.
    pub fn sqrt(&self) -> Self {
        let p = self.prec();
        if self.is_zero() {
            return Self::zero(p);
        }
        let r = self.abs();
        // sqrt((|z| + |re|)/2) is computed without cancellation.
        let t = Float::with_val(p, (Float::with_val(p, &r + Float::with_val(p, self.re.abs_ref()))) / 2u32).sqrt();
        let half_im = Float::with_val(p, &self.im / 2u32);
        if self.re.is_sign_positive() {
            BigComplex { re: t.clone(), im: Float::with_val(p, &half_im / &t) }
        } else {
            let im = if self.im.is_sign_negative() { -t.clone() } else { t.clone() };
            BigComplex { re: Float::with_val(p, &half_im / &im), im }
        }
    }

    /// Integer power by repeated squaring.
    pub fn powi(&self, n: i64) -> QsResult<Self> {
        let p = self.prec();
        let mut base = if n < 0 { self.recip()? } else { self.clone() };
        let mut e = n.unsigned_abs();
        let mut acc = Self::one(p);
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        Ok(acc)
    }

    /// Distance `|self - other|`.
    pub fn dist(&self, other: &BigComplex) -> Float {
        (self - other).abs()
    }

    /// Scientific-notation rendering with `digits` significant digits.
    pub fn to_decimal(&self, digits: usize) -> String {
        let re = format_float(&self.re, digits);
        if self.im.is_zero() {
            return re;
        }
        let im_abs = Float::with_val(self.im.prec(), self.im.abs_ref());
        let sign = if self.im.is_sign_negative() { '-' } else { '+' };
        format!("{} {} {}i", re, sign, format_float(&im_abs, digits))
    }

    pub fn to_c64(&self) -> (f64, f64) {
        (self.re.to_f64(), self.im.to_f64())
    }
}

/// Scientific rendering `d.ddd...e<exp>` with `digits` significant digits
/// (the exponent is omitted when it is zero).
pub fn format_float(x: &Float, digits: usize) -> String {
    if x.is_zero() {
        return "0".to_string();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let (neg, mant, exp) = x.to_sign_string_exp(10, Some(digits.max(1)));
    // value = 0.mant * 10^exp
    let exp = exp.unwrap_or(0) - 1;
    let mut out = String::new();
    if neg {
        out.push('-');
    }
    out.push_str(&mant[..1]);
    if mant.len() > 1 {
        out.push('.');
        out.push_str(&mant[1..]);
    }
    if exp != 0 {
        out.push_str(&format!("e{exp}"));
    }
    out
}

impl fmt::Debug for BigComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_decimal(20))
    }
}

impl fmt::Display for BigComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let digits = f.precision().unwrap_or(bits_to_digits(self.prec()) as usize);
        write!(f, "{}", self.to_decimal(digits))
    }
}

impl<'a> Add<&'a BigComplex> for &'a BigComplex {
    type Output = BigComplex;
    fn add(self, o: &BigComplex) -> BigComplex {
        let p = self.prec().max(o.prec());
        BigComplex { re: Float::with_val(p, &self.re + &o.re), im: Float::with_val(p, &self.im + &o.im) }
    }
}

impl<'a> Sub<&'a BigComplex> for &'a BigComplex {
    type Output = BigComplex;
    fn sub(self, o: &BigComplex) -> BigComplex {
        let p = self.prec().max(o.prec());
        BigComplex { re: Float::with_val(p, &self.re - &o.re), im: Float::with_val(p, &self.im - &o.im) }
    }
}

impl<'a> Mul<&'a BigComplex> for &'a BigComplex {
    type Output = BigComplex;
    fn mul(self, o: &BigComplex) -> BigComplex {
        let p = self.prec().max(o.prec());
        let mut re = Float::with_val(p, &self.re * &o.re);
        re -= Float::with_val(p, &self.im * &o.im);
        let mut im = Float::with_val(p, &self.re * &o.im);
        im += Float::with_val(p, &self.im * &o.re);
        BigComplex { re, im }
    }
}

impl<'a> Div<&'a BigComplex> for &'a BigComplex {
    type Output = BigComplex;
    /// Panics on division by zero; use [`BigComplex::recip`] for a checked form.
    fn div(self, o: &BigComplex) -> BigComplex {
        self * &o.recip().expect("complex division by zero")
    }
}

impl Neg for &BigComplex {
    type Output = BigComplex;
    fn neg(self) -> BigComplex {
        BigComplex { re: Float::with_val(self.re.prec(), -&self.re), im: Float::with_val(self.im.prec(), -&self.im) }
    }
}

impl Neg for BigComplex {
    type Output = BigComplex;
    fn neg(self) -> BigComplex {
        BigComplex { re: -self.re, im: -self.im }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr<BigComplex> for BigComplex {
            type Output = BigComplex;
            fn $m(self, o: BigComplex) -> BigComplex {
                (&self).$m(&o)
            }
        }
        impl<'a> $tr<&'a BigComplex> for BigComplex {
            type Output = BigComplex;
            fn $m(self, o: &BigComplex) -> BigComplex {
                (&self).$m(o)
            }
        }
        impl<'a> $tr<BigComplex> for &'a BigComplex {
            type Output = BigComplex;
            fn $m(self, o: BigComplex) -> BigComplex {
                self.$m(&o)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);
forward_owned!(Div, div);

impl AddAssign<&BigComplex> for BigComplex {
    fn add_assign(&mut self, o: &BigComplex) {
        self.re += &o.re;
        self.im += &o.im;
    }
}

impl SubAssign<&BigComplex> for BigComplex {
    fn sub_assign(&mut self, o: &BigComplex) {
        self.re -= &o.re;
        self.im -= &o.im;
    }
}

impl MulAssign<&BigComplex> for BigComplex {
    fn mul_assign(&mut self, o: &BigComplex) {
        *self = &*self * o;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const P: u32 = 200;

    #[test]
    fn sqrt_is_principal() {
        for (re, im) in [(-4.0, 0.0), (-4.0, -0.0), (3.0, 4.0), (-3.0, -4.0), (0.0, -2.0)] {
            let z = BigComplex::from_parts_f64(re, im, P);
            let s = z.sqrt();
            assert!(s.re.is_sign_positive() || s.re.is_zero());
            assert!((&s * &s).dist(&z) < 1e-50);
            let via_pow = z.pow_rational(&Rational::from((1, 2))).unwrap();
            if im != 0.0 || re > 0.0 {
                assert!(via_pow.dist(&s) < 1e-50);
            }
        }
    }

    #[test]
    fn exp_ln_round_trip() {
        let z = BigComplex::from_parts_f64(-1.25, 2.5, P);
        assert!(z.ln().unwrap().exp().dist(&z) < 1e-55);
        let l = BigComplex::from_f64(-1.0, P).ln().unwrap();
        assert!((l.im - pi(P)).abs() < 1e-55);
    }

    #[test]
    fn roots_of_unity_have_unit_order() {
        for den in 1..9u64 {
            for num in 0..den as i64 {
                let z = BigComplex::root_of_unity(num, den, P);
                let w = z.powi(den as i64).unwrap();
                assert!(w.dist(&BigComplex::one(P)) < 1e-50);
            }
        }
    }

    #[test]
    fn formatting() {
        let z = BigComplex::from_parts_f64(-1.5e14, 7.25e14, P);
        assert_eq!(z.to_decimal(4), "-1.500e14 + 7.250e14i");
        assert_eq!(format_float(&Float::with_val(P, 2.5), 3), "2.50");
    }
}
