use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use rug::{Float, Integer, Rational};

use crate::error::{QsError, QsResult};
use crate::hp_analysis::BigComplex;

/// Integer polynomial as a coefficient list, lowest degree first.
pub type IntPoly = Vec<Integer>;

fn poly_trim(p: &mut IntPoly) {
    while p.len() > 1 && p.last().is_some_and(|c| *c == 0) {
        p.pop();
    }
}

#[cfg(test)]
fn poly_mul(a: &[Integer], b: &[Integer]) -> IntPoly {
    let mut out = vec![Integer::new(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += Integer::from(x * y);
        }
    }
    out
}

/// Exact division of integer polynomials by a monic divisor. Returns the
/// quotient, or `None` if the remainder is nonzero.
fn poly_div_exact(num: &[Integer], den: &[Integer]) -> Option<IntPoly> {
    let dn = den.len() - 1;
    if *den.last()? != 1 {
        return None;
    }
    let mut rem: IntPoly = num.to_vec();
    if rem.len() <= dn {
        return None;
    }
    let mut q = vec![Integer::new(); rem.len() - dn];
    for i in (0..q.len()).rev() {
        let c = rem[i + dn].clone();
        if c != 0 {
            for (j, d) in den.iter().enumerate() {
                rem[i + j] -= Integer::from(&c * d);
            }
        }
        q[i] = c;
    }
    if rem.iter().any(|c| *c != 0) {
        return None;
    }
    poly_trim(&mut q);
    Some(q)
}

fn divisors(k: u32) -> Vec<u32> {
    (1..=k).filter(|d| k % d == 0).collect()
}

/// Euler's totient.
pub fn euler_phi(k: u32) -> u32 {
    (1..=k).filter(|&j| gcd(j as u64, k as u64) == 1).count() as u32
}

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// The `k`-th cyclotomic polynomial, lowest degree first.
///
/// Built as `(x^k - 1)` divided by the cyclotomic polynomials of the proper
/// divisors of `k`.
pub fn cyclotomic_polynomial(k: u32) -> IntPoly {
    assert!(k >= 1, "cyclotomic_polynomial needs k >= 1");
    let mut memo: BTreeMap<u32, IntPoly> = BTreeMap::new();
    for d in divisors(k) {
        let mut p = vec![Integer::new(); d as usize + 1];
        p[0] = Integer::from(-1);
        p[d as usize] = Integer::from(1);
        for e in divisors(d) {
            if e < d {
                p = poly_div_exact(&p, &memo[&e]).expect("cyclotomic division is exact");
            }
        }
        memo.insert(d, p);
    }
    memo.remove(&k).unwrap()
}

/// The field `Q(xi)` for `xi` a primitive `k`-th root of unity, in the power
/// basis `1, xi, ..., xi^(phi(k)-1)` reduced modulo the cyclotomic polynomial.
#[derive(Debug)]
pub struct CyclotomicField {
    k: u32,
    modulus: IntPoly,
    /// Coordinates of `xi^e` for `0 <= e < k`.
    powers: Vec<Vec<Integer>>,
}

impl CyclotomicField {
    pub fn new(k: u32) -> Arc<Self> {
        assert!(k >= 1, "conductor must be positive");
        let modulus = cyclotomic_polynomial(k);
        let deg = modulus.len() - 1;
        let mut powers = Vec::with_capacity(k as usize);
        let mut cur = vec![Integer::new(); deg];
        cur[0] = Integer::from(1);
        for _ in 0..k {
            powers.push(cur.clone());
            // multiply by x and reduce
            let mut next = vec![Integer::new(); deg + 1];
            for (i, c) in cur.iter().enumerate() {
                next[i + 1] = c.clone();
            }
            let top = next[deg].clone();
            if top != 0 {
                for (j, m) in modulus.iter().enumerate().take(deg) {
                    next[j] -= Integer::from(&top * m);
                }
            }
            next.truncate(deg);
            cur = next;
        }
        Arc::new(CyclotomicField { k, modulus, powers })
    }

    pub fn conductor(&self) -> u32 {
        self.k
    }

    /// Degree `phi(k)` of the field over `Q`.
    pub fn degree(&self) -> usize {
        self.modulus.len() - 1
    }

    pub fn modulus(&self) -> &IntPoly {
        &self.modulus
    }

    /// Reduce a raw coefficient list (any length) modulo the cyclotomic
    /// polynomial.
    fn reduce(&self, mut raw: Vec<Rational>) -> Vec<Rational> {
        let deg = self.degree();
        for i in (deg..raw.len()).rev() {
            let top = std::mem::take(&mut raw[i]);
            if top != 0 {
                for (j, m) in self.modulus.iter().enumerate().take(deg) {
                    if *m != 0 {
                        raw[i - deg + j] -= Rational::from(&top * m);
                    }
                }
            }
        }
        raw.truncate(deg);
        raw.resize(deg, Rational::new());
        raw
    }
}

/// Exact element of `Q(xi_k)`.
#[derive(Clone)]
pub struct CyclotomicElement {
    field: Arc<CyclotomicField>,
    coords: Vec<Rational>,
}

impl PartialEq for CyclotomicElement {
    fn eq(&self, other: &Self) -> bool {
        self.field.k == other.field.k && self.coords == other.coords
    }
}

impl Eq for CyclotomicElement {}

impl CyclotomicElement {
    pub fn zero(field: &Arc<CyclotomicField>) -> Self {
        CyclotomicElement { field: field.clone(), coords: vec![Rational::new(); field.degree()] }
    }

    pub fn one(field: &Arc<CyclotomicField>) -> Self {
        Self::from_rational(field, Rational::from(1))
    }

    pub fn from_rational(field: &Arc<CyclotomicField>, q: Rational) -> Self {
        let mut e = Self::zero(field);
        e.coords[0] = q;
        e
    }

    pub fn from_i64(field: &Arc<CyclotomicField>, n: i64) -> Self {
        Self::from_rational(field, Rational::from(n))
    }

    /// Build from power-basis coordinates (reduced if longer than `phi(k)`).
    pub fn from_coords(field: &Arc<CyclotomicField>, coords: Vec<Rational>) -> Self {
        CyclotomicElement { field: field.clone(), coords: field.reduce(coords) }
    }

    /// `xi^e` for any integer exponent.
    pub fn xi_pow(field: &Arc<CyclotomicField>, e: i64) -> Self {
        let idx = e.rem_euclid(field.k as i64) as usize;
        let coords = field.powers[idx].iter().map(Rational::from).collect();
        CyclotomicElement { field: field.clone(), coords }
    }

    pub fn field(&self) -> &Arc<CyclotomicField> {
        &self.field
    }

    pub fn conductor(&self) -> u32 {
        self.field.k
    }

    pub fn coords(&self) -> &[Rational] {
        &self.coords
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|c| *c == 0)
    }

    pub fn is_one(&self) -> bool {
        self.coords[0] == 1 && self.coords[1..].iter().all(|c| *c == 0)
    }

    /// The rational value if the element lies in `Q`.
    pub fn as_rational(&self) -> Option<&Rational> {
        if self.coords[1..].iter().all(|c| *c == 0) {
            Some(&self.coords[0])
        } else {
            None
        }
    }

    fn check(&self, other: &Self) -> QsResult<()> {
        if self.field.k != other.field.k {
            Err(QsError::ConductorMismatch(self.field.k, other.field.k))
        } else {
            Ok(())
        }
    }

    pub fn try_add(&self, other: &Self) -> QsResult<Self> {
        self.check(other)?;
        let coords = self.coords.iter().zip(&other.coords).map(|(a, b)| Rational::from(a + b)).collect();
        Ok(CyclotomicElement { field: self.field.clone(), coords })
    }

    pub fn try_sub(&self, other: &Self) -> QsResult<Self> {
        self.check(other)?;
        let coords = self.coords.iter().zip(&other.coords).map(|(a, b)| Rational::from(a - b)).collect();
        Ok(CyclotomicElement { field: self.field.clone(), coords })
    }

    /// Exact product reduced modulo the cyclotomic polynomial.
    pub fn try_mul(&self, other: &Self) -> QsResult<Self> {
        self.check(other)?;
        let deg = self.field.degree();
        if deg == 1 {
            let c = Rational::from(&self.coords[0] * &other.coords[0]);
            return Ok(CyclotomicElement { field: self.field.clone(), coords: vec![c] });
        }
        let mut raw = vec![Rational::new(); 2 * deg - 1];
        for (i, a) in self.coords.iter().enumerate() {
            if *a == 0 {
                continue;
            }
            for (j, b) in other.coords.iter().enumerate() {
                if *b != 0 {
                    raw[i + j] += Rational::from(a * b);
                }
            }
        }
        Ok(CyclotomicElement { field: self.field.clone(), coords: self.field.reduce(raw) })
    }

    pub fn scale(&self, q: &Rational) -> Self {
        let coords = self.coords.iter().map(|c| Rational::from(c * q)).collect();
        CyclotomicElement { field: self.field.clone(), coords }
    }

    pub fn scale_i64(&self, n: i64) -> Self {
        self.scale(&Rational::from(n))
    }

    /// The Galois automorphism `xi -> xi^h` (requires `gcd(h, k) = 1`).
    pub fn galois(&self, h: i64) -> Self {
        let k = self.field.k as i64;
        debug_assert_eq!(gcd(h.rem_euclid(k) as u64, k as u64), 1);
        let mut out = Self::zero(&self.field);
        for (i, c) in self.coords.iter().enumerate() {
            if *c == 0 {
                continue;
            }
            let idx = (h * i as i64).rem_euclid(k) as usize;
            for (o, p) in out.coords.iter_mut().zip(&self.field.powers[idx]) {
                if *p != 0 {
                    *o += Rational::from(c * p);
                }
            }
        }
        out
    }

    /// Complex conjugation, i.e. `xi -> xi^(-1)`.
    pub fn conj(&self) -> Self {
        self.galois(-1)
    }

    /// Units `h` modulo `k` indexing the Galois group.
    pub fn galois_units(k: u32) -> Vec<i64> {
        (1..=k as i64).filter(|&h| gcd(h as u64, k as u64) == 1).map(|h| h % k as i64).collect()
    }

    /// Field norm down to `Q`.
    pub fn norm(&self) -> Rational {
        let mut acc = Self::one(&self.field);
        for h in Self::galois_units(self.field.k) {
            acc = &acc * &self.galois(h);
        }
        acc.as_rational().cloned().expect("norm lies in Q")
    }

    /// Field trace down to `Q`.
    pub fn trace(&self) -> Rational {
        let mut acc = Self::zero(&self.field);
        for h in Self::galois_units(self.field.k) {
            acc = &acc + &self.galois(h);
        }
        acc.as_rational().cloned().expect("trace lies in Q")
    }

    pub fn inverse(&self) -> QsResult<Self> {
        if self.is_zero() {
            return Err(QsError::DivisionByZero);
        }
        if let Some(q) = self.as_rational() {
            return Ok(Self::from_rational(&self.field, Rational::from(q.recip_ref())));
        }
        // a^{-1} = (product of the other conjugates) / norm(a)
        let mut others = Self::one(&self.field);
        for h in Self::galois_units(self.field.k) {
            if h != 1 % self.field.k as i64 {
                others = &others * &self.galois(h);
            }
        }
        let n = (&others * self).as_rational().cloned().expect("norm lies in Q");
        Ok(others.scale(&Rational::from(n.recip_ref())))
    }

    pub fn pow(&self, e: u64) -> Self {
        let mut acc = Self::one(&self.field);
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Numeric value at `xi = e^(2 pi i h / k)`.
    pub fn embed(&self, h: i64, prec: u32) -> BigComplex {
        let k = self.field.k as u64;
        let work = prec + 32;
        let mut acc = BigComplex::zero(work);
        for (i, c) in self.coords.iter().enumerate() {
            if *c == 0 {
                continue;
            }
            let z = BigComplex::root_of_unity(h * i as i64, k, work);
            let cf = Float::with_val(work, c);
            acc += &z.scale(&cf);
        }
        acc.with_prec(prec)
    }
}

impl fmt::Debug for CyclotomicElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

/// Renders as a polynomial in `xi`, e.g. `1/4 - 3/2*xi^2`; rational elements
/// print as a bare rational.
impl fmt::Display for CyclotomicElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, c) in self.coords.iter().enumerate() {
            if *c == 0 {
                continue;
            }
            let neg = *c < 0;
            let abs = Rational::from(c.abs_ref());
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            first = false;
            match i {
                0 => write!(f, "{}", abs)?,
                _ => {
                    if abs != 1 {
                        write!(f, "{}*", abs)?;
                    }
                    if i == 1 {
                        write!(f, "xi")?;
                    } else {
                        write!(f, "xi^{}", i)?;
                    }
                }
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

impl<'a> Add<&'a CyclotomicElement> for &'a CyclotomicElement {
    type Output = CyclotomicElement;
    fn add(self, o: &CyclotomicElement) -> CyclotomicElement {
        self.try_add(o).expect("conductor mismatch")
    }
}

impl<'a> Sub<&'a CyclotomicElement> for &'a CyclotomicElement {
    type Output = CyclotomicElement;
    fn sub(self, o: &CyclotomicElement) -> CyclotomicElement {
        self.try_sub(o).expect("conductor mismatch")
    }
}

impl<'a> Mul<&'a CyclotomicElement> for &'a CyclotomicElement {
    type Output = CyclotomicElement;
    fn mul(self, o: &CyclotomicElement) -> CyclotomicElement {
        self.try_mul(o).expect("conductor mismatch")
    }
}

impl Neg for &CyclotomicElement {
    type Output = CyclotomicElement;
    fn neg(self) -> CyclotomicElement {
        let coords = self.coords.iter().map(|c| Rational::from(-c)).collect();
        CyclotomicElement { field: self.field.clone(), coords }
    }
}
