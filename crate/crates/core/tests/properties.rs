use bibracket::linalg::{kernel_basis, rref, QMatrix};
use bibracket::poly::{expand_power_product, power_product_coefficient, LinearForm};
use bibracket::rational::rat;
use bibracket::{
    boxast, boxdot, derivative, ds, harmonic, involution, shuffle, LinComb, Rational, Word,
};
use num_traits::Zero;
use proptest::prelude::*;

fn arb_word(max_len: usize, max_d: u32) -> impl Strategy<Value = Word> {
    prop::collection::vec((1u32..4, 0..=max_d), 0..=max_len)
        .prop_map(|pairs| Word::from_pairs(&pairs).unwrap())
}

fn arb_comb(max_len: usize, max_d: u32) -> impl Strategy<Value = LinComb> {
    prop::collection::vec((arb_word(max_len, max_d), -3i64..4, 1i64..3), 0..3)
        .prop_map(|terms| terms.into_iter().map(|(w, n, d)| (w, rat(n, d))).collect())
}

fn h1(max_len: usize) -> impl Strategy<Value = LinComb> {
    arb_comb(max_len, 0)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn boxast_commutative_associative(u in arb_comb(2, 1), v in arb_comb(2, 1), w in arb_comb(1, 1)) {
        prop_assert_eq!(boxast(&u, &v), boxast(&v, &u));
        prop_assert_eq!(boxast(&boxast(&u, &v), &w), boxast(&u, &boxast(&v, &w)));
    }

    #[test]
    fn boxdot_commutative(u in arb_word(2, 1), v in arb_word(2, 1)) {
        let (u, v) = (LinComb::from(u), LinComb::from(v));
        prop_assert_eq!(boxdot(&u, &v), boxdot(&v, &u));
    }

    #[test]
    fn boxdot_associative(u in arb_word(1, 1), v in arb_word(2, 1), w in arb_word(1, 1)) {
        let (u, v, w) = (LinComb::from(u), LinComb::from(v), LinComb::from(w));
        prop_assert_eq!(boxdot(&boxdot(&u, &v), &w), boxdot(&u, &boxdot(&v, &w)));
    }

    #[test]
    fn harmonic_and_shuffle_commutative_associative(u in h1(2), v in h1(2), w in h1(2)) {
        prop_assert_eq!(harmonic(&u, &v).unwrap(), harmonic(&v, &u).unwrap());
        prop_assert_eq!(shuffle(&u, &v).unwrap(), shuffle(&v, &u).unwrap());
        prop_assert_eq!(
            harmonic(&harmonic(&u, &v).unwrap(), &w).unwrap(),
            harmonic(&u, &harmonic(&v, &w).unwrap()).unwrap()
        );
        prop_assert_eq!(
            shuffle(&shuffle(&u, &v).unwrap(), &w).unwrap(),
            shuffle(&u, &shuffle(&v, &w).unwrap()).unwrap()
        );
    }

    #[test]
    fn boxast_keeps_h1_and_agrees_with_harmonic_on_top_weight(u in arb_word(3, 0), v in arb_word(3, 0)) {
        let (lu, lv) = (LinComb::from(u.clone()), LinComb::from(v.clone()));
        let product = boxast(&lu, &lv);
        prop_assert!(product.is_h1());
        let top = u.weight() + v.weight();
        prop_assert_eq!(product.homogeneous_part(top), harmonic(&lu, &lv).unwrap());
        prop_assert!(product.max_weight().is_none_or(|m| m <= top));
    }

    #[test]
    fn ds_is_symmetric_and_stays_in_h1(u in h1(2), v in h1(2)) {
        let x = ds(&u, &v).unwrap();
        prop_assert_eq!(&x, &ds(&v, &u).unwrap());
        prop_assert!(x.is_h1());
    }

    #[test]
    fn involution_is_involutive_and_weight_preserving(w in arb_word(3, 2)) {
        let x = LinComb::from(w.clone());
        let px = involution(&x);
        prop_assert_eq!(involution(&px), x);
        prop_assert!(px.words().all(|u| u.weight() == w.weight() && u.depth() == w.depth()));
    }

    #[test]
    fn word_derivative_is_a_derivation_for_concatenation(u in arb_word(2, 1), v in arb_word(2, 1)) {
        let (lu, lv) = (LinComb::from(u), LinComb::from(v));
        let lhs = derivative(&lu.concat(&lv));
        let rhs = derivative(&lu).concat(&lv) + lu.concat(&derivative(&lv));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn additive_inverse(x in arb_comb(3, 2)) {
        prop_assert!((&x + &(-&x)).is_zero());
        prop_assert_eq!(&x - &x, LinComb::zero());
    }

    #[test]
    fn power_product_routes_agree(
        exps in prop::collection::vec(0u32..4, 3),
        signs in prop::collection::vec(-1i64..2, 9),
    ) {
        let forms: Vec<LinearForm> = signs
            .chunks(3)
            .map(|c| LinearForm::new(c.iter().map(|&s| rat(s, 1)).collect()))
            .collect();
        let full = expand_power_product(&forms, &exps);
        for (target, c) in full.terms() {
            prop_assert_eq!(&power_product_coefficient(&forms, &exps, target), c);
        }
    }

    #[test]
    fn rank_nullity_and_rref_idempotence(
        entries in prop::collection::vec((-4i64..5, 1i64..4), 12),
        rows in 1usize..5,
    ) {
        let cols = 12 / rows.max(1);
        let data: Vec<Vec<Rational>> = (0..rows)
            .map(|i| (0..cols).map(|j| {
                let (n, d) = entries[(i * cols + j) % entries.len()];
                rat(n, d)
            }).collect())
            .collect();
        let m = QMatrix::from_rows(data);
        let kernel = kernel_basis(&m);
        prop_assert_eq!(m.rank() + kernel.len(), m.cols());
        for v in &kernel {
            for i in 0..m.rows() {
                let dot: Rational = m.row(i).iter().zip(v).map(|(a, b)| a * b).sum();
                prop_assert!(dot.is_zero());
            }
        }
        let (r1, p1) = rref(&m);
        let (r2, p2) = rref(&r1);
        prop_assert_eq!(r1, r2);
        prop_assert_eq!(p1, p2);
    }
}
