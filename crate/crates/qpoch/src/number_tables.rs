//! Exact special-number generators: Bernoulli numbers and polynomials,
//! Norlund polynomials, Apostol-Bernoulli numbers, Stirling numbers of the
//! second kind, Eulerian polynomials and partition counts.

use std::sync::{Arc, RwLock};

use rug::ops::Pow;
use rug::{Integer, Rational};

use crate::exact_field::{CyclotomicElement, CyclotomicField, IntPoly};

static BERNOULLI: RwLock<Vec<Rational>> = RwLock::new(Vec::new());

/// Exact Bernoulli numbers `B_0..=B_{n_max}` with `B_1 = -1/2`.
///
/// Values come from the coefficient recurrence of `z/(e^z - 1)`,
/// `sum_{j=0}^{n} binom(n+1, j) B_j = 0`, and are memoized in an append-only
/// table shared across threads.
pub fn bernoulli_numbers(n_max: usize) -> Vec<Rational> {
    {
        let table = BERNOULLI.read().expect("bernoulli cache poisoned");
        if table.len() > n_max {
            return table[..=n_max].to_vec();
        }
    }
    let mut table = BERNOULLI.write().expect("bernoulli cache poisoned");
    if table.is_empty() {
        table.push(Rational::from(1));
    }
    while table.len() <= n_max {
        let n = table.len();
        if n > 1 && n % 2 == 1 {
            table.push(Rational::new());
            continue;
        }
        // binom(n+1, j) for j = 0..n
        let mut acc = Rational::new();
        let mut binom = Integer::from(1);
        for (j, b) in table.iter().enumerate() {
            if *b != 0 {
                acc += Rational::from(b * &binom);
            }
            binom *= (n + 1 - j) as u64;
            binom /= (j + 1) as u64;
        }
        table.push(-acc / Integer::from(n + 1));
    }
    table[..=n_max].to_vec()
}

/// Single Bernoulli number `B_n`.
pub fn bernoulli(n: usize) -> Rational {
    {
        let table = BERNOULLI.read().expect("bernoulli cache poisoned");
        if let Some(b) = table.get(n) {
            return b.clone();
        }
    }
    bernoulli_numbers(n).pop().unwrap()
}

/// Binomial coefficient `binom(a, j)` for any integer `a` (falling factorial
/// over `j!`).
pub fn binom_int(a: i64, j: u32) -> Integer {
    let mut num = Integer::from(1);
    for i in 0..j as i64 {
        num *= a - i;
    }
    let mut den = Integer::from(1);
    for i in 1..=j as u64 {
        den *= i;
    }
    num / den
}

/// Stirling number of the second kind `{n over j}`.
pub fn stirling2(n: u32, j: u32) -> Integer {
    if j > n {
        return Integer::new();
    }
    // row recurrence S(i, c) = c S(i-1, c) + S(i-1, c-1)
    let mut row = vec![Integer::new(); j as usize + 1];
    row[0] = Integer::from(1);
    for i in 1..=n as usize {
        let top = i.min(j as usize);
        for c in (1..=top).rev() {
            let prev = std::mem::take(&mut row[c]);
            row[c] = prev * c as u64 + &row[c - 1];
        }
        row[0] = Integer::new();
    }
    row[j as usize].clone()
}

/// Norlund polynomial `B_n^(alpha)` at an integer `alpha`, from the closed
/// form `sum_j (-1)^j binom(alpha+n, n-j) binom(alpha+j-1, j) {n+j over j} / binom(n+j, j)`.
pub fn norlund(n: u32, alpha: i64) -> Rational {
    let mut acc = Rational::new();
    for j in 0..=n {
        let a = binom_int(alpha + n as i64, n - j);
        let b = binom_int(alpha + j as i64 - 1, j);
        let s = stirling2(n + j, j);
        let c = binom_int((n + j) as i64, j);
        let term = Rational::from((a * b * s, c));
        if j % 2 == 0 {
            acc += term;
        } else {
            acc -= term;
        }
    }
    acc
}

/// Bernoulli polynomial `B_n(x) = sum_i binom(n, i) B_i x^(n-i)`.
pub fn bernoulli_poly(n: u32, x: &Rational) -> Rational {
    let bs = bernoulli_numbers(n as usize);
    // Horner in x over the coefficients binom(n, i) B_i of x^(n-i)
    let mut acc = Rational::new();
    let mut binom = Integer::from(1);
    for (i, b) in bs.iter().enumerate() {
        acc *= x;
        acc += Rational::from(b * &binom);
        binom *= (n as usize - i) as u64;
        binom /= (i + 1) as u64;
    }
    acc
}

/// Apostol-Bernoulli number `beta_m(xi^j)` in `Q(xi)` for `xi = e^(2 pi i/k)`,
/// via `beta_m(rho) = k^(m-1) sum_{r<k} B_m(r/k) rho^r`, which holds for any
/// `rho` with `rho^k = 1` (and gives `B_m` at `rho = 1`).
pub fn apostol_bernoulli(m: u32, k: u32, j: i64) -> CyclotomicElement {
    apostol_bernoulli_in(&CyclotomicField::new(k), m, j)
}

/// As [`apostol_bernoulli`], inside an existing field.
pub fn apostol_bernoulli_in(field: &Arc<CyclotomicField>, m: u32, j: i64) -> CyclotomicElement {
    let k = field.conductor() as i64;
    if j.rem_euclid(k) == 0 {
        return CyclotomicElement::from_rational(field, bernoulli(m as usize));
    }
    let mut acc = CyclotomicElement::zero(field);
    for r in 0..k {
        let b = bernoulli_poly(m, &Rational::from((r, k)));
        if b != 0 {
            acc = &acc + &CyclotomicElement::xi_pow(field, j * r).scale(&b);
        }
    }
    let kpow = if m == 0 {
        Rational::from((1, k))
    } else {
        Rational::from(Integer::from(k).pow(m - 1))
    };
    acc.scale(&kpow)
}

/// Eulerian polynomial `A_m(z)` (lowest degree first), defined through
/// `Li_{-m}(z) = z A_m(z) / (1 - z)^(m+1)`.
pub fn eulerian_poly(m: u32) -> IntPoly {
    // A_m(z) = (1 + (m-1) z) A_{m-1}(z) + z (1 - z) A'_{m-1}(z)
    let mut a: IntPoly = vec![Integer::from(1)];
    for n in 1..=m as i64 {
        let d = a.len();
        let mut next = vec![Integer::new(); d + 1];
        for (i, c) in a.iter().enumerate() {
            let i64i = i as i64;
            next[i] += c;
            next[i + 1] += Integer::from(c * (n - 1));
            // z(1 - z) * i c z^(i-1) = i c z^i - i c z^(i+1)
            next[i] += Integer::from(c * i64i);
            next[i + 1] -= Integer::from(c * i64i);
        }
        while next.len() > 1 && next.last().is_some_and(|c| *c == 0) {
            next.pop();
        }
        a = next;
    }
    a
}

/// Number of partitions of `n` into at most `big_n` parts (equivalently,
/// into parts of size at most `big_n`).
pub fn restricted_p(big_n: u32, n: u32) -> Integer {
    restricted_p_row(big_n, n).pop().unwrap()
}

/// `p_N(0), ..., p_N(n_max)` by the part-size dynamic program.
pub fn restricted_p_row(big_n: u32, n_max: u32) -> Vec<Integer> {
    let len = n_max as usize + 1;
    let mut ways = vec![Integer::new(); len];
    ways[0] = Integer::from(1);
    for part in 1..=big_n.min(n_max.max(1)) as usize {
        for t in part..len {
            let (lo, hi) = ways.split_at_mut(t);
            hi[0] += &lo[t - part];
        }
    }
    ways
}

/// Unrestricted partition numbers `p(0..=n_max)` by Euler's pentagonal
/// recurrence.
pub fn unrestricted_p_row(n_max: u32) -> Vec<Integer> {
    let len = n_max as usize + 1;
    let mut p = vec![Integer::new(); len];
    p[0] = Integer::from(1);
    for n in 1..len as i64 {
        let mut acc = Integer::new();
        let mut g = 1i64;
        loop {
            let pent1 = g * (3 * g - 1) / 2;
            if pent1 > n {
                break;
            }
            let sign_pos = g % 2 == 1;
            let mut add = p[(n - pent1) as usize].clone();
            let pent2 = g * (3 * g + 1) / 2;
            if pent2 <= n {
                add += &p[(n - pent2) as usize];
            }
            if sign_pos {
                acc += add;
            } else {
                acc -= add;
            }
            g += 1;
        }
        p[n as usize] = acc;
    }
    p
}

pub fn unrestricted_p(n: u32) -> Integer {
    unrestricted_p_row(n).pop().unwrap()
}
