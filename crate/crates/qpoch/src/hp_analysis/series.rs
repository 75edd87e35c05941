use rug::{Float, Rational};

use super::complex::BigComplex;
use crate::error::{QsError, QsResult};

/// Truncated Taylor series `sum_{i < len} c_i (z - center)^i` with
/// arbitrary-precision complex coefficients.
#[derive(Clone, Debug)]
pub struct ComplexSeries {
    pub center: BigComplex,
    pub coeffs: Vec<BigComplex>,
}

impl ComplexSeries {
    pub fn new(center: BigComplex, coeffs: Vec<BigComplex>) -> Self {
        ComplexSeries { center, coeffs }
    }

    pub fn constant(c: BigComplex, center: &BigComplex, len: usize) -> Self {
        let prec = c.prec();
        let mut coeffs = vec![BigComplex::zero(prec); len];
        if len > 0 {
            coeffs[0] = c;
        }
        ComplexSeries { center: center.clone(), coeffs }
    }

    pub fn zero(center: &BigComplex, len: usize, prec: u32) -> Self {
        Self::constant(BigComplex::zero(prec), center, len)
    }

    pub fn one(center: &BigComplex, len: usize, prec: u32) -> Self {
        Self::constant(BigComplex::one(prec), center, len)
    }

    /// The series of `z` itself: `center + t`.
    pub fn identity(center: &BigComplex, len: usize) -> Self {
        let prec = center.prec();
        let mut s = Self::constant(center.clone(), center, len);
        if len > 1 {
            s.coeffs[1] = BigComplex::one(prec);
        }
        s
    }

    /// Number of known coefficients (the truncation order).
    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn prec(&self) -> u32 {
        self.coeffs.iter().map(|c| c.prec()).max().unwrap_or(self.center.prec())
    }

    pub fn coeff(&self, i: usize) -> BigComplex {
        self.coeffs.get(i).cloned().unwrap_or_else(|| BigComplex::zero(self.prec()))
    }

    pub fn truncate(&self, len: usize) -> Self {
        let mut s = self.clone();
        s.coeffs.truncate(len);
        s
    }

    pub fn add(&self, o: &Self) -> Self {
        let n = self.len().min(o.len());
        let coeffs = (0..n).map(|i| &self.coeffs[i] + &o.coeffs[i]).collect();
        ComplexSeries { center: self.center.clone(), coeffs }
    }

    pub fn sub(&self, o: &Self) -> Self {
        let n = self.len().min(o.len());
        let coeffs = (0..n).map(|i| &self.coeffs[i] - &o.coeffs[i]).collect();
        ComplexSeries { center: self.center.clone(), coeffs }
    }

    pub fn neg(&self) -> Self {
        ComplexSeries { center: self.center.clone(), coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }

    pub fn scale(&self, c: &BigComplex) -> Self {
        ComplexSeries { center: self.center.clone(), coeffs: self.coeffs.iter().map(|x| x * c).collect() }
    }

    pub fn scale_rational(&self, q: &Rational) -> Self {
        ComplexSeries { center: self.center.clone(), coeffs: self.coeffs.iter().map(|x| x.scale_rational(q)).collect() }
    }

    pub fn add_constant(&self, c: &BigComplex) -> Self {
        let mut s = self.clone();
        if let Some(c0) = s.coeffs.first_mut() {
            *c0 = &*c0 + c;
        }
        s
    }

    pub fn mul(&self, o: &Self) -> Self {
        let n = self.len().min(o.len());
        let prec = self.prec().max(o.prec());
        let mut coeffs = vec![BigComplex::zero(prec); n];
        for i in 0..n {
            if self.coeffs[i].is_zero() {
                continue;
            }
            for j in 0..n - i {
                if !o.coeffs[j].is_zero() {
                    coeffs[i + j] += &(&self.coeffs[i] * &o.coeffs[j]);
                }
            }
        }
        ComplexSeries { center: self.center.clone(), coeffs }
    }

    pub fn invert(&self) -> QsResult<Self> {
        let n = self.len();
        if n == 0 {
            return Ok(self.clone());
        }
        let inv0 = self.coeffs[0].recip()?;
        let mut out = vec![inv0.clone()];
        for i in 1..n {
            let mut acc = BigComplex::zero(self.prec());
            for j in 1..=i {
                acc += &(&self.coeffs[j] * &out[i - j]);
            }
            out.push(-(&acc * &inv0));
        }
        Ok(ComplexSeries { center: self.center.clone(), coeffs: out })
    }

    pub fn div(&self, o: &Self) -> QsResult<Self> {
        Ok(self.mul(&o.invert()?))
    }

    /// Exponential of a series whose constant term is zero.
    fn exp_no_constant(&self) -> Self {
        let n = self.len();
        let prec = self.prec();
        let mut out = vec![BigComplex::one(prec)];
        for m in 1..n {
            let mut acc = BigComplex::zero(prec);
            for j in 1..=m {
                if !self.coeffs[j].is_zero() {
                    acc += &(&self.coeffs[j].scale_i64(j as i64) * &out[m - j]);
                }
            }
            out.push(acc.div_i64(m as i64));
        }
        out.truncate(n);
        ComplexSeries { center: self.center.clone(), coeffs: out }
    }

    pub fn exp(&self) -> Self {
        if self.is_empty() {
            return self.clone();
        }
        let c0 = self.coeffs[0].exp();
        let mut rest = self.clone();
        rest.coeffs[0] = BigComplex::zero(self.prec());
        rest.exp_no_constant().scale(&c0)
    }

    /// Logarithm of a series with constant term 1.
    fn log_unit(&self) -> Self {
        let n = self.len();
        let prec = self.prec();
        let mut l = vec![BigComplex::zero(prec)];
        for m in 1..n {
            let mut acc = self.coeffs[m].scale_i64(m as i64);
            for j in 1..m {
                acc -= &(&l[j].scale_i64(j as i64) * &self.coeffs[m - j]);
            }
            l.push(acc.div_i64(m as i64));
        }
        l.truncate(n);
        ComplexSeries { center: self.center.clone(), coeffs: l }
    }

    fn check_off_cut(c0: &BigComplex) -> QsResult<()> {
        if c0.is_zero() {
            return Err(QsError::Branch("series constant term is zero".into()));
        }
        if c0.im.is_zero() && c0.re.is_sign_negative() {
            return Err(QsError::Branch(format!("series constant term {} lies on the negative real axis", c0.to_decimal(12))));
        }
        Ok(())
    }

    /// Principal logarithm; the constant term must avoid `(-inf, 0]`.
    pub fn log(&self) -> QsResult<Self> {
        let c0 = self.coeffs[0].clone();
        Self::check_off_cut(&c0)?;
        let unit = self.scale(&c0.recip()?);
        Ok(unit.log_unit().add_constant(&c0.ln()?))
    }

    /// Principal power `s^tau`: the constant term's principal power times the
    /// binomial expansion of the normalized remainder.
    pub fn pow(&self, tau: &BigComplex) -> QsResult<Self> {
        let c0 = self.coeffs[0].clone();
        Self::check_off_cut(&c0)?;
        let lead = c0.pow(tau)?;
        let unit = self.scale(&c0.recip()?);
        Ok(unit.log_unit().scale(tau).exp_no_constant().scale(&lead))
    }

    pub fn pow_rational(&self, tau: &Rational) -> QsResult<Self> {
        self.pow(&BigComplex::from_rational(tau, self.prec()))
    }

    /// Integer power (negative exponents invert).
    pub fn powi(&self, e: i64) -> QsResult<Self> {
        let base = if e < 0 { self.invert()? } else { self.clone() };
        let mut acc = Self::one(&self.center, self.len(), self.prec());
        let mut b = base;
        let mut n = e.unsigned_abs();
        while n > 0 {
            if n & 1 == 1 {
                acc = acc.mul(&b);
            }
            n >>= 1;
            if n > 0 {
                b = b.mul(&b);
            }
        }
        Ok(acc)
    }

    pub fn derivative(&self) -> Self {
        let coeffs = self.coeffs.iter().enumerate().skip(1).map(|(i, c)| c.scale_i64(i as i64)).collect();
        ComplexSeries { center: self.center.clone(), coeffs }
    }

    /// Evaluate at `center + t` (Horner).
    pub fn eval(&self, t: &BigComplex) -> BigComplex {
        let mut acc = BigComplex::zero(self.prec());
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * t) + c;
        }
        acc
    }

    /// Largest coefficient distance to another series over the common length.
    pub fn max_dist(&self, o: &Self) -> Float {
        let n = self.len().min(o.len());
        let mut m = Float::new(self.prec());
        for i in 0..n {
            let d = self.coeffs[i].dist(&o.coeffs[i]);
            if d > m {
                m = d;
            }
        }
        m
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const P: u32 = 256;

    fn sample() -> ComplexSeries {
        let c = BigComplex::from_parts_f64(-0.4, 1.8, P);
        let coeffs = [(1.5, -0.5), (0.25, 0.75), (-1.0, 0.125), (0.5, 0.5), (0.1, -0.3), (2.0, 1.0)]
            .iter()
            .map(|&(a, b)| BigComplex::from_parts_f64(a, b, P))
            .collect();
        ComplexSeries::new(c, coeffs)
    }

    #[test]
    fn exp_log_round_trip() {
        let s = sample();
        let back = s.log().unwrap().exp();
        assert!(back.max_dist(&s) < 1e-70);
    }

    #[test]
    fn fractional_power_round_trip() {
        let s = sample();
        let a = Rational::from((3, 7));
        let back = s.pow_rational(&a).unwrap().pow_rational(&a.clone().recip()).unwrap();
        assert!(back.max_dist(&s) < 1e-70);
        let half = s.pow_rational(&Rational::from((1, 2))).unwrap();
        assert!(half.mul(&half).max_dist(&s) < 1e-70);
    }

    #[test]
    fn inverse_and_integer_power() {
        let s = sample();
        let one = s.mul(&s.invert().unwrap());
        assert!(one.max_dist(&ComplexSeries::one(&s.center, s.len(), P)) < 1e-70);
        let cube = s.powi(3).unwrap();
        assert!(cube.max_dist(&s.mul(&s).mul(&s)) < 1e-70);
        let inv2 = s.powi(-2).unwrap();
        assert!(inv2.mul(&s).mul(&s).max_dist(&ComplexSeries::one(&s.center, s.len(), P)) < 1e-70);
    }

    #[test]
    fn branch_cut_is_rejected() {
        let mut s = sample();
        s.coeffs[0] = BigComplex::from_f64(-2.0, P);
        assert!(matches!(s.pow_rational(&Rational::from((1, 2))), Err(QsError::Branch(_))));
        assert!(matches!(s.log(), Err(QsError::Branch(_))));
    }
}
