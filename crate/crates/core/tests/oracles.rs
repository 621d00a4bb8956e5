//! Library results against independent brute-force computations.

use std::collections::HashMap;

use bibracket::poly::{power_product_coefficient, LinearForm, MultiPoly};
use bibracket::rational::{factorial, parse_rational};
use bibracket::word::words_of_weight;
use bibracket::{
    bernoulli, eval_g, eval_gsh, involution_p, shuffle, GshIndex, LinComb, QSeries, Rational, Word,
};
use num_bigint::BigInt;
use num_traits::{One, Pow, Zero};

/// Direct enumeration of `0 < u_1 < ... < u_r`, `v_i >= 1` with `sum u_i v_i <= order`.
fn brute_g(w: &Word, order: usize) -> Vec<Rational> {
    fn rec(
        letters: &[(u32, u32)],
        umin: usize,
        n: usize,
        weight: Rational,
        order: usize,
        out: &mut [Rational],
    ) {
        let Some(&(k, d)) = letters.first() else {
            out[n] += weight;
            return;
        };
        let mut u = umin;
        while n + u <= order {
            let mut v = 1;
            while n + u * v <= order {
                let fu = Rational::new(BigInt::from(u).pow(d), factorial(d as usize));
                let fv = Rational::new(BigInt::from(v).pow(k - 1), factorial(k as usize - 1));
                rec(
                    &letters[1..],
                    u + 1,
                    n + u * v,
                    &weight * fu * fv,
                    order,
                    out,
                );
                v += 1;
            }
            u += 1;
        }
    }
    let letters: Vec<(u32, u32)> = w.letters().iter().map(|l| (l.k(), l.d())).collect();
    let mut out = vec![Rational::zero(); order + 1];
    rec(&letters, 1, 0, Rational::one(), order, &mut out);
    out
}

fn series(texts: &[&str]) -> QSeries {
    QSeries::from_coeffs(texts.iter().map(|t| parse_rational(t).unwrap()).collect())
}

#[test]
fn brackets_match_enumeration_for_all_short_words() {
    for weight in 0..=5 {
        for w in words_of_weight(weight) {
            assert_eq!(eval_g(&w, 14).coeffs(), &brute_g(&w, 14)[..], "{w}");
        }
    }
}

#[test]
fn frozen_enumeration_values() {
    let w = Word::from_pairs(&[(2, 0), (3, 1)]).unwrap();
    let expected = series(&[
        "0", "0", "0", "1", "7/2", "27/2", "25", "119/2", "100", "327/2", "270", "404", "558",
    ]);
    assert_eq!(eval_g(&w, 12), expected);

    let w = Word::from_ks(&[1, 1]).unwrap();
    let expected = series(&[
        "0", "0", "0", "1", "2", "5", "6", "11", "13", "17", "22", "27", "29",
    ]);
    assert_eq!(eval_g(&w, 12), expected);

    let w = Word::from_pairs(&[(1, 2), (2, 0), (1, 1)]).unwrap();
    let expected = series(&[
        "0", "0", "0", "0", "0", "0", "3/2", "7/2", "11", "30", "101/2", "102", "381/2", "302",
        "881/2",
    ]);
    assert_eq!(eval_g(&w, 14), expected);
}

#[test]
fn regularized_bracket_frozen_from_enumeration() {
    // g_{1,2} - 1/2 g_2 + 1/2 g^{(1)}_2, each term enumerated directly.
    let expected = series(&["0", "0", "1/2", "2", "9/2", "8", "13", "18", "53/2"]);
    assert_eq!(eval_gsh(&GshIndex::new(vec![1, 2]).unwrap(), 8), expected);
}

/// Akiyama-Tanigawa; yields `B_1 = +1/2`, so index 1 is compared up to sign.
fn akiyama_tanigawa(n: usize) -> Rational {
    let mut a: Vec<Rational> = (0..=n)
        .map(|m| Rational::new(1.into(), BigInt::from(m + 1)))
        .collect();
    for m in 1..=n {
        for j in 0..=n - m {
            a[j] = Rational::from_integer(BigInt::from(j + 1)) * (&a[j] - &a[j + 1]);
        }
    }
    a[0].clone()
}

#[test]
fn bernoulli_matches_akiyama_tanigawa() {
    for n in 0..=40usize {
        let expected = akiyama_tanigawa(n);
        let got = bernoulli(n as i64).unwrap();
        if n == 1 {
            assert_eq!(got, -expected);
        } else {
            assert_eq!(got, expected, "B_{n}");
        }
    }
}

/// Shuffle by choosing which positions of the result come from the first word,
/// over the e0/e1 spelling.
fn brute_shuffle(u: &Word, v: &Word) -> LinComb {
    fn spell(w: &Word) -> Vec<bool> {
        w.ks()
            .iter()
            .flat_map(|&k| std::iter::once(true).chain(std::iter::repeat_n(false, k as usize - 1)))
            .collect()
    }
    fn unspell(bits: &[bool]) -> Word {
        let mut ks = Vec::new();
        for &b in bits {
            if b {
                ks.push(1);
            } else {
                *ks.last_mut().unwrap() += 1;
            }
        }
        Word::from_ks(&ks).unwrap()
    }
    let (a, b) = (spell(u), spell(v));
    let n = a.len() + b.len();
    let mut counts: HashMap<Word, i64> = HashMap::new();
    for mask in 0u32..(1 << n) {
        if mask.count_ones() as usize != a.len() {
            continue;
        }
        let (mut i, mut j) = (0, 0);
        let mut bits = Vec::with_capacity(n);
        for pos in 0..n {
            if mask >> pos & 1 == 1 {
                bits.push(a[i]);
                i += 1;
            } else {
                bits.push(b[j]);
                j += 1;
            }
        }
        if n > 0 && !bits[0] {
            panic!("inputs in H^1 start with e1");
        }
        *counts.entry(unspell(&bits)).or_default() += 1;
    }
    counts
        .into_iter()
        .map(|(w, c)| (w, Rational::from_integer(c.into())))
        .collect()
}

#[test]
fn shuffle_matches_position_enumeration() {
    let words: Vec<Word> = (1..=4)
        .flat_map(words_of_weight)
        .filter(|w| w.is_h1())
        .collect();
    for u in &words {
        for v in &words {
            let got = shuffle(&LinComb::from(u.clone()), &LinComb::from(v.clone())).unwrap();
            assert_eq!(got, brute_shuffle(u, v), "{u} sh {v}");
        }
    }
}

/// P by expanding the substituted generating series of every candidate word
/// as a full polynomial and reading off the coefficient of `w`'s monomial.
fn brute_involution(w: &Word) -> LinComb {
    let r = w.depth();
    let n = 2 * r;
    // X_1..X_r are variables 0..r, Y_1..Y_r are r..2r
    let mut target = vec![0u32; n];
    for (j, l) in w.letters().iter().enumerate() {
        target[j] = l.k() - 1;
        target[r + j] = l.d();
    }
    let mut out = LinComb::zero();
    for u in words_of_weight(w.weight())
        .into_iter()
        .filter(|u| u.depth() == r)
    {
        let mut poly = MultiPoly::one(n);
        for (i, l) in u.letters().iter().enumerate() {
            let i = i + 1;
            let mut ysum = vec![Rational::zero(); n];
            for c in &mut ysum[r + r - i..n] {
                *c = Rational::one();
            }
            let mut xdiff = vec![Rational::zero(); n];
            xdiff[r - i] = Rational::one();
            if r > i {
                xdiff[r - i - 1] = -Rational::one();
            }
            let a = LinearForm::new(ysum).to_poly().pow(l.k() - 1);
            let b = LinearForm::new(xdiff).to_poly().pow(l.d());
            poly = &(&poly * &a) * &b;
        }
        out.add_term(u, poly.coeff(&target));
    }
    out
}

#[test]
fn involution_matches_polynomial_expansion() {
    for weight in 1..=6 {
        for w in words_of_weight(weight)
            .into_iter()
            .filter(|w| w.depth() <= 3)
        {
            assert_eq!(involution_p(&w), brute_involution(&w), "{w}");
        }
    }
}

#[test]
fn direct_coefficient_route_matches_expansion() {
    let forms = [
        LinearForm::sum_range(3, 0, 2),
        LinearForm::difference(3, 2, Some(0)),
        LinearForm::var(3, 1),
    ];
    for exps in [[2u32, 1, 0], [1, 2, 3], [3, 0, 2]] {
        let full = bibracket::poly::expand_power_product(&forms, &exps);
        for (target, c) in full.terms() {
            assert_eq!(&power_product_coefficient(&forms, &exps, target), c);
        }
    }
}
