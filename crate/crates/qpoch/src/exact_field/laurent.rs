use std::sync::Arc;

use rug::Rational;

use super::cyclotomic::{CyclotomicElement, CyclotomicField};
use crate::error::{QsError, QsResult};

/// Truncated Laurent series `sum_{e >= v} c_e z^e + O(z^order)` with
/// coefficients in `Q(xi_k)`.
///
/// A nonzero series keeps a nonzero leading coefficient at its valuation. A
/// series whose known coefficients all vanish is flagged as zero up to its
/// order and has no valuation.
#[derive(Clone, Debug)]
pub struct ExactLaurentSeries {
    field: Arc<CyclotomicField>,
    /// Exponent of `coeffs[0]`; meaningless when `coeffs` is empty.
    valuation: i64,
    coeffs: Vec<CyclotomicElement>,
    order: i64,
}

impl PartialEq for ExactLaurentSeries {
    fn eq(&self, other: &Self) -> bool {
        self.field.conductor() == other.field.conductor()
            && self.order == other.order
            && self.coeffs == other.coeffs
            && (self.is_zero() || self.valuation == other.valuation)
    }
}

impl ExactLaurentSeries {
    /// Series with coefficients `coeffs[i]` at `z^(start + i)`, known up to
    /// (excluding) `z^order`. Coefficients at or beyond `order` are dropped.
    pub fn new(field: &Arc<CyclotomicField>, start: i64, mut coeffs: Vec<CyclotomicElement>, order: i64) -> Self {
        let keep = (order - start).max(0) as usize;
        coeffs.truncate(keep);
        let mut s = ExactLaurentSeries { field: field.clone(), valuation: start, coeffs, order };
        s.normalize();
        s
    }

    /// Rational-coefficient series (conductor 1 unless a field is given).
    pub fn from_rationals(field: &Arc<CyclotomicField>, start: i64, coeffs: &[Rational], order: i64) -> Self {
        let cs = coeffs.iter().map(|q| CyclotomicElement::from_rational(field, q.clone())).collect();
        Self::new(field, start, cs, order)
    }

    pub fn zero(field: &Arc<CyclotomicField>, order: i64) -> Self {
        ExactLaurentSeries { field: field.clone(), valuation: order, coeffs: Vec::new(), order }
    }

    /// `c * z^e + O(z^order)`.
    pub fn monomial(c: CyclotomicElement, e: i64, order: i64) -> Self {
        let field = c.field().clone();
        Self::new(&field, e, vec![c], order)
    }

    fn normalize(&mut self) {
        let lead = self.coeffs.iter().position(|c| !c.is_zero());
        match lead {
            Some(p) => {
                self.coeffs.drain(..p);
                self.valuation += p as i64;
                // store every coefficient up to the order explicitly
                let len = (self.order - self.valuation) as usize;
                self.coeffs.resize(len, CyclotomicElement::zero(&self.field));
            }
            None => {
                self.coeffs.clear();
                self.valuation = self.order;
            }
        }
    }

    pub fn field(&self) -> &Arc<CyclotomicField> {
        &self.field
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Exponent of the leading nonzero coefficient, or `None` for the zero
    /// series.
    pub fn valuation(&self) -> Option<i64> {
        if self.is_zero() {
            None
        } else {
            Some(self.valuation)
        }
    }

    /// Truncation exponent: coefficients at and beyond it are unknown.
    pub fn order(&self) -> i64 {
        self.order
    }

    /// Lower bound for the exponents of nonzero terms (the order for zero).
    fn low(&self) -> i64 {
        self.valuation
    }

    /// Coefficient of `z^e`; errors if `e` is at or beyond the order.
    pub fn coeff(&self, e: i64) -> QsResult<CyclotomicElement> {
        if e >= self.order {
            return Err(QsError::Truncated(e, self.order));
        }
        if self.is_zero() || e < self.valuation {
            return Ok(CyclotomicElement::zero(&self.field));
        }
        Ok(self.coeffs[(e - self.valuation) as usize].clone())
    }

    fn check(&self, other: &Self) -> QsResult<()> {
        if self.field.conductor() != other.field.conductor() {
            Err(QsError::ConductorMismatch(self.field.conductor(), other.field.conductor()))
        } else {
            Ok(())
        }
    }

    pub fn add(&self, other: &Self) -> QsResult<Self> {
        self.check(other)?;
        let order = self.order.min(other.order);
        let start = self.low().min(other.low()).min(order);
        let len = (order - start) as usize;
        let mut coeffs = vec![CyclotomicElement::zero(&self.field); len];
        for s in [self, other] {
            for (i, c) in s.coeffs.iter().enumerate() {
                let e = s.valuation + i as i64;
                if e < order {
                    let slot = &mut coeffs[(e - start) as usize];
                    *slot = &*slot + c;
                }
            }
        }
        Ok(Self::new(&self.field, start, coeffs, order))
    }

    pub fn neg(&self) -> Self {
        let coeffs = self.coeffs.iter().map(|c| -c).collect();
        ExactLaurentSeries { field: self.field.clone(), valuation: self.valuation, coeffs, order: self.order }
    }

    pub fn sub(&self, other: &Self) -> QsResult<Self> {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: &CyclotomicElement) -> QsResult<Self> {
        if c.conductor() != self.field.conductor() {
            return Err(QsError::ConductorMismatch(self.field.conductor(), c.conductor()));
        }
        let coeffs = self.coeffs.iter().map(|x| x * c).collect();
        Ok(Self::new(&self.field, self.valuation, coeffs, self.order))
    }

    /// Product with guaranteed order `min(v_a + order_b, v_b + order_a)`.
    pub fn mul(&self, other: &Self) -> QsResult<Self> {
        self.check(other)?;
        let order = (self.low() + other.order).min(other.low() + self.order);
        if self.is_zero() || other.is_zero() {
            return Ok(Self::zero(&self.field, order));
        }
        let start = self.valuation + other.valuation;
        let len = (order - start).max(0) as usize;
        let mut coeffs = vec![CyclotomicElement::zero(&self.field); len];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if i + j >= len {
                    break;
                }
                if !b.is_zero() {
                    coeffs[i + j] = &coeffs[i + j] + &(a * b);
                }
            }
        }
        Ok(Self::new(&self.field, start, coeffs, order))
    }

    /// Multiplicative inverse. The relative precision `order - valuation` is
    /// preserved and the result has valuation `-v`.
    pub fn invert(&self) -> QsResult<Self> {
        if self.is_zero() {
            return Err(QsError::ZeroSeries);
        }
        let n = self.coeffs.len();
        let inv0 = self.coeffs[0].inverse()?;
        let mut out: Vec<CyclotomicElement> = Vec::with_capacity(n);
        out.push(inv0.clone());
        for i in 1..n {
            let mut acc = CyclotomicElement::zero(&self.field);
            for j in 1..=i {
                if !self.coeffs[j].is_zero() && !out[i - j].is_zero() {
                    acc = &acc + &(&self.coeffs[j] * &out[i - j]);
                }
            }
            out.push(-&(&acc * &inv0));
        }
        let v = -self.valuation;
        Ok(Self::new(&self.field, v, out, v + n as i64))
    }

    /// Dense coefficient vector for exponents `0..order` (all must be
    /// nonnegative).
    fn dense_from_zero(&self) -> Vec<CyclotomicElement> {
        (0..self.order).map(|e| self.coeff(e).expect("below order")).collect()
    }

    /// `exp(s)` for a series with valuation at least 1, by the recurrence
    /// `t_n = (1/n) sum_{j=1}^n j s_j t_{n-j}`.
    pub fn exp(&self) -> QsResult<Self> {
        if let Some(v) = self.valuation() {
            if v < 1 {
                return Err(QsError::Valuation(v, 1));
            }
        }
        let order = self.order.max(0);
        if order == 0 {
            return Ok(Self::zero(&self.field, 0));
        }
        let s = self.dense_from_zero();
        let weighted: Vec<CyclotomicElement> =
            s.iter().enumerate().map(|(j, c)| c.scale_i64(j as i64)).collect();
        let mut t = vec![CyclotomicElement::one(&self.field)];
        for n in 1..order as usize {
            let mut acc = CyclotomicElement::zero(&self.field);
            for j in 1..=n {
                if !weighted[j].is_zero() && !t[n - j].is_zero() {
                    acc = &acc + &(&weighted[j] * &t[n - j]);
                }
            }
            t.push(acc.scale(&Rational::from((1, n as i64))));
        }
        Ok(Self::new(&self.field, 0, t, order))
    }

    /// `log(s)` for a series with constant term 1, by the inverse recurrence
    /// `n l_n = n s_n - sum_{j=1}^{n-1} j l_j s_{n-j}`.
    pub fn log(&self) -> QsResult<Self> {
        let ok = self.valuation() == Some(0) && self.coeffs[0].is_one();
        if !ok {
            return Err(QsError::Domain("log_series needs constant term 1".into()));
        }
        let s = self.dense_from_zero();
        let mut l = vec![CyclotomicElement::zero(&self.field)];
        for n in 1..self.order as usize {
            let mut acc = s[n].scale_i64(n as i64);
            for j in 1..n {
                if !l[j].is_zero() && !s[n - j].is_zero() {
                    acc = &acc - &(&l[j].scale_i64(j as i64) * &s[n - j]);
                }
            }
            l.push(acc.scale(&Rational::from((1, n as i64))));
        }
        Ok(Self::new(&self.field, 0, l, self.order))
    }

    /// Apply a Galois automorphism coefficientwise.
    pub fn galois(&self, h: i64) -> Self {
        let coeffs = self.coeffs.iter().map(|c| c.galois(h)).collect();
        ExactLaurentSeries { field: self.field.clone(), valuation: self.valuation, coeffs, order: self.order }
    }
}
