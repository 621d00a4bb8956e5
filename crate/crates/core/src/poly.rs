//! Sparse multivariate polynomials in commuting variables, used to expand
//! products of powers of linear forms.

use std::collections::BTreeMap;
use std::ops::Mul;

use num_traits::{One, Zero};

use crate::rational::{factorial, Rational};

/// Exponent vector over a fixed variable list.
pub type Exponents = Vec<u32>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultiPoly {
    nvars: usize,
    terms: BTreeMap<Exponents, Rational>,
}

impl MultiPoly {
    pub fn zero(nvars: usize) -> Self {
        MultiPoly {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(nvars: usize) -> Self {
        MultiPoly::monomial(nvars, vec![0; nvars], Rational::one())
    }

    pub fn monomial(nvars: usize, exps: Exponents, coeff: Rational) -> Self {
        assert_eq!(exps.len(), nvars);
        let mut p = MultiPoly::zero(nvars);
        p.add_term(exps, coeff);
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn add_term(&mut self, exps: Exponents, coeff: Rational) {
        if coeff.is_zero() {
            return;
        }
        let slot = self.terms.entry(exps).or_insert_with(Rational::zero);
        *slot += coeff;
        if slot.is_zero() {
            self.terms.retain(|_, c| !c.is_zero());
        }
    }

    pub fn coeff(&self, exps: &[u32]) -> Rational {
        self.terms.get(exps).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exponents, &Rational)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn pow(&self, n: u32) -> MultiPoly {
        let mut out = MultiPoly::one(self.nvars);
        for _ in 0..n {
            out = &out * self;
        }
        out
    }
}

impl Mul for &MultiPoly {
    type Output = MultiPoly;
    fn mul(self, rhs: &MultiPoly) -> MultiPoly {
        assert_eq!(self.nvars, rhs.nvars);
        let mut out = MultiPoly::zero(self.nvars);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &rhs.terms {
                let e: Exponents = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
                out.add_term(e, ca * cb);
            }
        }
        out
    }
}

/// A homogeneous linear form `sum_i c_i x_i` without constant term.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearForm {
    coeffs: Vec<Rational>,
}

impl LinearForm {
    pub fn new(coeffs: Vec<Rational>) -> Self {
        LinearForm { coeffs }
    }

    pub fn zero(nvars: usize) -> Self {
        LinearForm::new(vec![Rational::zero(); nvars])
    }

    /// The single variable `x_i`.
    pub fn var(nvars: usize, i: usize) -> Self {
        let mut f = LinearForm::zero(nvars);
        f.coeffs[i] = Rational::one();
        f
    }

    /// `x_{from} + ... + x_{to}` (inclusive, zero based).
    pub fn sum_range(nvars: usize, from: usize, to: usize) -> Self {
        let mut f = LinearForm::zero(nvars);
        for c in &mut f.coeffs[from..=to] {
            *c = Rational::one();
        }
        f
    }

    /// `x_i - x_j`, where `None` stands for the zero variable.
    pub fn difference(nvars: usize, i: usize, j: Option<usize>) -> Self {
        let mut f = LinearForm::var(nvars, i);
        if let Some(j) = j {
            f.coeffs[j] -= Rational::one();
        }
        f
    }

    pub fn nvars(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn to_poly(&self) -> MultiPoly {
        let n = self.nvars();
        let mut p = MultiPoly::zero(n);
        for (i, c) in self.coeffs.iter().enumerate() {
            let mut e = vec![0; n];
            e[i] = 1;
            p.add_term(e, c.clone());
        }
        p
    }
}

/// Full expansion of `prod_i forms[i]^exponents[i]` by repeated
/// multiplication.
pub fn expand_power_product(forms: &[LinearForm], exponents: &[u32]) -> MultiPoly {
    assert_eq!(forms.len(), exponents.len(), "one exponent per form");
    let nvars = forms.first().map_or(0, LinearForm::nvars);
    forms
        .iter()
        .zip(exponents)
        .fold(MultiPoly::one(nvars), |acc, (f, &e)| {
            &acc * &f.to_poly().pow(e)
        })
}

/// Coefficient of the monomial `x^target` in `prod_i forms[i]^exponents[i]`,
/// read off through multinomial expansion without building the product.
pub fn power_product_coefficient(
    forms: &[LinearForm],
    exponents: &[u32],
    target: &[u32],
) -> Rational {
    assert_eq!(forms.len(), exponents.len(), "one exponent per form");
    let total: u32 = exponents.iter().sum();
    if total != target.iter().sum::<u32>() {
        return Rational::zero();
    }
    let mut remaining = target.to_vec();
    let mut acc = Rational::zero();
    distribute(
        forms,
        exponents,
        0,
        &mut remaining,
        Rational::one(),
        &mut acc,
    );
    acc
}

// Splits forms[idx]^exponents[idx] over the variables, bounded by what the
// target still needs.
fn distribute(
    forms: &[LinearForm],
    exponents: &[u32],
    idx: usize,
    remaining: &mut Vec<u32>,
    weight: Rational,
    acc: &mut Rational,
) {
    if idx == forms.len() {
        if remaining.iter().all(|&r| r == 0) {
            *acc += weight;
        }
        return;
    }
    let coeffs = forms[idx].coeffs();
    let budget = exponents[idx];
    let base = weight * Rational::from_integer(factorial(budget as usize));
    split(
        forms, exponents, idx, coeffs, 0, budget, remaining, base, acc,
    );
}

#[allow(clippy::too_many_arguments)]
fn split(
    forms: &[LinearForm],
    exponents: &[u32],
    idx: usize,
    coeffs: &[Rational],
    var: usize,
    left: u32,
    remaining: &mut Vec<u32>,
    weight: Rational,
    acc: &mut Rational,
) {
    if var == coeffs.len() {
        if left == 0 {
            distribute(forms, exponents, idx + 1, remaining, weight, acc);
        }
        return;
    }
    let max = if coeffs[var].is_zero() {
        0
    } else {
        left.min(remaining[var])
    };
    let mut power = Rational::one();
    for m in 0..=max {
        if m > 0 {
            power *= &coeffs[var];
        }
        remaining[var] -= m;
        let w = &weight * &power / Rational::from_integer(factorial(m as usize));
        split(
            forms,
            exponents,
            idx,
            coeffs,
            var + 1,
            left - m,
            remaining,
            w,
            acc,
        );
        remaining[var] += m;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;

    #[test]
    fn binomial_square() {
        // (Y1 + Y2)^2
        let f = LinearForm::sum_range(2, 0, 1);
        let p = expand_power_product(&[f], &[2]);
        assert_eq!(p.coeff(&[2, 0]), int(1));
        assert_eq!(p.coeff(&[1, 1]), int(2));
        assert_eq!(p.coeff(&[0, 2]), int(1));
        assert_eq!(p.terms().count(), 3);
    }

    #[test]
    fn difference_identity() {
        // X2 - X1
        let f = LinearForm::difference(2, 1, Some(0));
        let p = expand_power_product(&[f], &[1]);
        assert_eq!(p.coeff(&[0, 1]), int(1));
        assert_eq!(p.coeff(&[1, 0]), int(-1));
        assert_eq!(p.terms().count(), 2);
    }

    #[test]
    fn mixed_product() {
        // Y2 * (Y1 + Y2)^2 = Y1^2 Y2 + 2 Y1 Y2^2 + Y2^3
        let forms = [LinearForm::var(2, 1), LinearForm::sum_range(2, 0, 1)];
        let p = expand_power_product(&forms, &[1, 2]);
        assert_eq!(p.coeff(&[2, 1]), int(1));
        assert_eq!(p.coeff(&[1, 2]), int(2));
        assert_eq!(p.coeff(&[0, 3]), int(1));
        assert_eq!(p.terms().count(), 3);
        assert_eq!(power_product_coefficient(&forms, &[1, 2], &[1, 2]), int(2));
        assert_eq!(power_product_coefficient(&forms, &[1, 2], &[3, 0]), int(0));
    }

    #[test]
    fn empty_product_is_one() {
        let p = expand_power_product(&[], &[]);
        assert_eq!(p, MultiPoly::one(0));
        assert_eq!(power_product_coefficient(&[], &[], &[]), int(1));
    }
}

/// All vectors of `parts` non-negative integers summing to `total`.
pub fn weak_compositions(total: u32, parts: usize) -> Vec<Vec<u32>> {
    fn go(total: u32, parts: usize, prefix: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if parts == 1 {
            prefix.push(total);
            out.push(prefix.clone());
            prefix.pop();
            return;
        }
        for first in 0..=total {
            prefix.push(first);
            go(total - first, parts - 1, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    if parts == 0 {
        if total == 0 {
            out.push(Vec::new());
        }
        return out;
    }
    go(total, parts, &mut Vec::new(), &mut out);
    out
}

/// All compositions of `n` into positive parts.
pub fn compositions(n: u32) -> Vec<Vec<u32>> {
    fn go(n: u32, prefix: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if n == 0 {
            out.push(prefix.clone());
            return;
        }
        for first in 1..=n {
            prefix.push(first);
            go(n - first, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    go(n, &mut Vec::new(), &mut out);
    out
}

#[cfg(test)]
mod enumeration_tests {
    use super::*;

    #[test]
    fn counts() {
        assert_eq!(weak_compositions(3, 2).len(), 4);
        assert_eq!(weak_compositions(0, 3), vec![vec![0, 0, 0]]);
        assert_eq!(weak_compositions(0, 0), vec![Vec::<u32>::new()]);
        assert!(weak_compositions(1, 0).is_empty());
        assert_eq!(compositions(4).len(), 8);
        assert_eq!(compositions(0), vec![Vec::<u32>::new()]);
    }
}
