//! Exact rationals plus the memoized combinatorial tables (factorials,
//! binomials, Bernoulli numbers) the product formulas draw from.

use std::sync::{OnceLock, RwLock};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Arbitrary precision rational, always kept in lowest terms with a positive
/// denominator.
pub type Rational = BigRational;

/// Default number of factorials precomputed on first use.
pub const DEFAULT_TABLE_BOUND: usize = 64;

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Parses `p/q` or `p` into a reduced rational.
pub fn parse_rational(text: &str) -> Option<Rational> {
    let text = text.trim();
    match text.split_once('/') {
        Some((p, q)) => {
            let p: BigInt = p.trim().parse().ok()?;
            let q: BigInt = q.trim().parse().ok()?;
            if q.is_zero() {
                return None;
            }
            Some(Rational::new(p, q))
        }
        None => Some(Rational::from_integer(text.parse().ok()?)),
    }
}

fn factorial_table() -> &'static RwLock<Vec<BigInt>> {
    static TABLE: OnceLock<RwLock<Vec<BigInt>>> = OnceLock::new();
    TABLE.get_or_init(|| {
        let mut v = Vec::with_capacity(DEFAULT_TABLE_BOUND + 1);
        v.push(BigInt::one());
        for i in 1..=DEFAULT_TABLE_BOUND {
            let next = &v[i - 1] * BigInt::from(i);
            v.push(next);
        }
        RwLock::new(v)
    })
}

pub fn factorial(n: usize) -> BigInt {
    let table = factorial_table();
    if let Some(f) = table.read().unwrap().get(n) {
        return f.clone();
    }
    let mut v = table.write().unwrap();
    while v.len() <= n {
        let i = v.len();
        let next = &v[i - 1] * BigInt::from(i);
        v.push(next);
    }
    v[n].clone()
}

/// Binomial coefficient `C(n, k)`, zero when `k > n`.
pub fn binomial(n: usize, k: usize) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    factorial(n) / (factorial(k) * factorial(n - k))
}

fn bernoulli_table() -> &'static RwLock<Vec<Rational>> {
    static TABLE: OnceLock<RwLock<Vec<Rational>>> = OnceLock::new();
    TABLE.get_or_init(|| RwLock::new(vec![Rational::one()]))
}

/// Bernoulli number `B_n` with the convention `B_1 = -1/2`.
///
/// Values come from the recurrence `sum_{j=0}^{m} C(m+1, j) B_j = 0` and are
/// memoized behind a lock, so the table may be shared across threads.
pub fn bernoulli(n: i64) -> Result<Rational> {
    if n < 0 {
        return Err(Error::NegativeBernoulli(n));
    }
    let n = n as usize;
    let table = bernoulli_table();
    if let Some(b) = table.read().unwrap().get(n) {
        return Ok(b.clone());
    }
    let mut values = table.write().unwrap();
    while values.len() <= n {
        let m = values.len();
        if m >= 3 && m % 2 == 1 {
            values.push(Rational::zero());
            continue;
        }
        let mut acc = Rational::zero();
        for (j, b) in values.iter().enumerate() {
            if !b.is_zero() {
                acc += Rational::from_integer(binomial(m + 1, j)) * b;
            }
        }
        values.push(-acc / Rational::from_integer(BigInt::from(m + 1)));
    }
    Ok(values[n].clone())
}

/// The correction coefficient
/// `lambda^j_{a,b} = (-1)^{b-1} C(a+b-j-1, a-j) B_{a+b-j} / (a+b-j)!`
/// for `1 <= j <= a`.
pub fn lambda_coeff(a: u32, b: u32, j: u32) -> Result<Rational> {
    if j == 0 || j > a || b == 0 {
        return Err(Error::LambdaIndex { a, j });
    }
    let (a, b, j) = (a as usize, b as usize, j as usize);
    let m = a + b - j;
    let bern = bernoulli(m as i64)?;
    if bern.is_zero() {
        return Ok(bern);
    }
    let value = Rational::from_integer(binomial(m - 1, a - j)) * bern
        / Rational::from_integer(factorial(m));
    Ok(if b % 2 == 0 { -value } else { value })
}

/// `p/q` text for a rational, integers without a denominator.
pub fn render(r: &Rational) -> String {
    r.to_string()
}

/// Renders `|r|` as a coefficient prefix, empty for one.
pub(crate) fn coefficient_prefix(r: &Rational) -> String {
    let a = r.abs();
    if a.is_one() {
        String::new()
    } else {
        format!("{} ", a)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_bernoulli_values() {
        assert_eq!(bernoulli(0).unwrap(), int(1));
        assert_eq!(bernoulli(1).unwrap(), rat(-1, 2));
        assert_eq!(bernoulli(2).unwrap(), rat(1, 6));
        assert_eq!(bernoulli(4).unwrap(), rat(-1, 30));
        assert_eq!(bernoulli(12).unwrap(), rat(-691, 2730));
        assert!(bernoulli(-1).is_err());
    }

    #[test]
    fn recurrence_holds_up_to_thirty() {
        for n in 1..=30usize {
            let mut acc = Rational::zero();
            for j in 0..=n {
                acc += Rational::from_integer(binomial(n + 1, j)) * bernoulli(j as i64).unwrap();
            }
            assert!(acc.is_zero(), "recurrence fails at n={n}");
        }
        for n in (3..=61).step_by(2) {
            assert!(bernoulli(n).unwrap().is_zero());
        }
    }

    #[test]
    fn lambda_examples() {
        assert_eq!(lambda_coeff(3, 2, 3).unwrap(), rat(-1, 12));
        assert_eq!(lambda_coeff(2, 3, 2).unwrap(), int(0));
        assert_eq!(lambda_coeff(1, 1, 1).unwrap(), rat(-1, 2));
        assert!(lambda_coeff(2, 3, 3).is_err());
        assert!(lambda_coeff(2, 3, 0).is_err());
    }

    #[test]
    fn lambda_correction_of_e2_e3() {
        // Only e_3 survives in sum_j lambda^j_{2,3} e_j + sum_j lambda^j_{3,2} e_j.
        let mut by_j = vec![Rational::zero(); 6];
        for j in 1..=2 {
            by_j[j as usize] += lambda_coeff(2, 3, j).unwrap();
        }
        for j in 1..=3 {
            by_j[j as usize] += lambda_coeff(3, 2, j).unwrap();
        }
        assert_eq!(by_j[3], rat(-1, 12));
        for j in [1, 2, 4, 5] {
            assert!(by_j[j].is_zero());
        }
    }

    #[test]
    fn factorials_past_the_table() {
        assert_eq!(factorial(0), BigInt::one());
        assert_eq!(factorial(5), BigInt::from(120));
        assert_eq!(factorial(70) / factorial(69), BigInt::from(70));
        assert_eq!(binomial(5, 2), BigInt::from(10));
        assert_eq!(binomial(2, 5), BigInt::zero());
    }

    #[test]
    fn rational_text() {
        assert_eq!(parse_rational("-3/6"), Some(rat(-1, 2)));
        assert_eq!(parse_rational("7"), Some(int(7)));
        assert_eq!(parse_rational("1/0"), None);
        assert_eq!(render(&rat(-691, 2730)), "-691/2730");
    }
}
