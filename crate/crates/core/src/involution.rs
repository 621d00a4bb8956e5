//! The involution `P` on bi-indexed words and the conjugate product
//! `u ⊡ v = P(P(u) ⊛ P(v))`.
//!
//! For `w = e_{k_1}^(d_1) ... e_{k_r}^(d_r)` the coefficient of
//! `u = e_{a_1}^(b_1) ... e_{a_r}^(b_r)` in `P(w)` is the coefficient of
//! `X^{k-1} Y^d` in
//! `prod_i (Y_{r-i+1} + ... + Y_r)^{a_i - 1} * prod_i (X_{r-i+1} - X_{r-i})^{b_i}`
//! with `X_0 = 0`. The `Y` and `X` factors separate, so candidates are the
//! pairs of `(a - 1)` and `b` tuples with matching degrees.

use num_traits::Zero;

use crate::poly::{power_product_coefficient, weak_compositions, LinearForm};
use crate::products::boxast;
use crate::rational::Rational;
use crate::word::{Letter, LinComb, Word};

/// The forms substituted for the first block of variables:
/// `Y_r, Y_{r-1} + Y_r, ..., Y_1 + ... + Y_r`.
pub fn y_forms(r: usize) -> Vec<LinearForm> {
    (1..=r)
        .map(|i| LinearForm::sum_range(r, r - i, r - 1))
        .collect()
}

/// The forms substituted for the second block:
/// `X_r - X_{r-1}, ..., X_2 - X_1, X_1`.
pub fn x_forms(r: usize) -> Vec<LinearForm> {
    (1..=r)
        .map(|i| LinearForm::difference(r, r - i, (r - i).checked_sub(1)))
        .collect()
}

/// `P` on a single word. Preserves weight and depth.
pub fn involution_p(w: &Word) -> LinComb {
    let r = w.depth();
    if r == 0 {
        return LinComb::one();
    }
    let ds = w.ds();
    let ks_minus_one: Vec<u32> = w.ks().iter().map(|k| k - 1).collect();
    let ys = y_forms(r);
    let xs = x_forms(r);

    let a_parts: Vec<(Vec<u32>, Rational)> = weak_compositions(ds.iter().sum(), r)
        .into_iter()
        .map(|a| {
            let c = power_product_coefficient(&ys, &a, &ds);
            (a, c)
        })
        .filter(|(_, c)| !c.is_zero())
        .collect();
    let b_parts: Vec<(Vec<u32>, Rational)> = weak_compositions(ks_minus_one.iter().sum(), r)
        .into_iter()
        .map(|b| {
            let c = power_product_coefficient(&xs, &b, &ks_minus_one);
            (b, c)
        })
        .filter(|(_, c)| !c.is_zero())
        .collect();

    let mut out = LinComb::zero();
    for (a, ca) in &a_parts {
        for (b, cb) in &b_parts {
            let letters = a
                .iter()
                .zip(b)
                .map(|(&ai, &bi)| Letter::new(ai + 1, bi).expect("k >= 1"))
                .collect();
            out.add_term(Word::new(letters), ca * cb);
        }
    }
    out
}

/// Linear extension of `P`.
pub fn involution(x: &LinComb) -> LinComb {
    x.map_linear(involution_p)
}

/// `u ⊡ v = P(P(u) ⊛ P(v))`.
pub fn boxdot(u: &LinComb, v: &LinComb) -> LinComb {
    involution(&boxast(&involution(u), &involution(v)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;

    fn w(pairs: &[(u32, u32)]) -> Word {
        Word::from_pairs(pairs).unwrap()
    }

    fn e(ks: &[u32]) -> Word {
        Word::from_ks(ks).unwrap()
    }

    #[test]
    fn depth_one_swaps_indices() {
        for k in 1..6 {
            for d in 0..5 {
                assert_eq!(
                    involution_p(&w(&[(k, d)])),
                    LinComb::from(w(&[(d + 1, k - 1)]))
                );
            }
        }
        assert_eq!(involution_p(&Word::empty()), LinComb::one());
    }

    #[test]
    fn depth_two_examples() {
        let got = involution_p(&w(&[(1, 2), (1, 1)]));
        let want: LinComb = [(e(&[2, 3]), int(1)), (e(&[1, 4]), int(3))]
            .into_iter()
            .collect();
        assert_eq!(got, want);

        let got = involution_p(&w(&[(1, 1), (1, 2)]));
        let want: LinComb = [
            (e(&[3, 2]), int(1)),
            (e(&[2, 3]), int(2)),
            (e(&[1, 4]), int(3)),
        ]
        .into_iter()
        .collect();
        assert_eq!(got, want);
    }

    #[test]
    fn boxdot_e2_e3() {
        let got = boxdot(&e(&[2]).into(), &e(&[3]).into());
        let want: LinComb = [
            (e(&[3, 2]), int(1)),
            (e(&[2, 3]), int(3)),
            (e(&[1, 4]), int(6)),
            (w(&[(4, 1)]), int(3)),
            (e(&[4]), int(-3)),
        ]
        .into_iter()
        .collect();
        assert_eq!(got, want);
    }

    #[test]
    fn boxdot_unit() {
        let x: LinComb = w(&[(2, 1), (1, 3)]).into();
        assert_eq!(boxdot(&LinComb::one(), &x), x);
    }
}
