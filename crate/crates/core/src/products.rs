//! The quasi-shuffle product on bi-indexed words, the harmonic (stuffle)
//! and shuffle products on `H^1`, and their difference `ds`.
//!
//! All products recurse on first letters and memoize on word pairs within a
//! single call; pairs are stored with the smaller word first since every
//! product here is commutative.

use std::collections::HashMap;

use num_traits::{One, Zero};

use crate::error::Result;
use crate::rational::{binomial, lambda_coeff, Rational};
use crate::word::{Letter, LinComb, Word};

type Memo = HashMap<(Word, Word), LinComb>;

fn ordered(a: &Word, b: &Word) -> (Word, Word) {
    if a <= b {
        (a.clone(), b.clone())
    } else {
        (b.clone(), a.clone())
    }
}

fn bilinear<F>(u: &LinComb, v: &LinComb, mut on_words: F) -> LinComb
where
    F: FnMut(&Word, &Word) -> LinComb,
{
    let mut out = LinComb::zero();
    for (a, ca) in u.iter() {
        for (b, cb) in v.iter() {
            out.add_scaled(&on_words(a, b), &(ca * cb));
        }
    }
    out
}

/// Letters contributed by the merge of `e_{k1}^(d1)` and `e_{k2}^(d2)`:
/// `C(d1+d2, d1) (e_{k1+k2} + sum_j lambda^j_{k1,k2} e_j + sum_j lambda^j_{k2,k1} e_j)`,
/// all with upper index `d1 + d2`.
pub fn merge_letters(x: Letter, y: Letter) -> Vec<(Letter, Rational)> {
    let d = x.d() + y.d();
    let scale = Rational::from_integer(binomial(d as usize, x.d() as usize));
    let mut by_k: Vec<Rational> = vec![Rational::zero(); (x.k() + y.k() + 1) as usize];
    by_k[(x.k() + y.k()) as usize] += Rational::one();
    for j in 1..=x.k() {
        by_k[j as usize] += lambda_coeff(x.k(), y.k(), j).expect("j in range");
    }
    for j in 1..=y.k() {
        by_k[j as usize] += lambda_coeff(y.k(), x.k(), j).expect("j in range");
    }
    by_k.into_iter()
        .enumerate()
        .filter(|(_, c)| !c.is_zero())
        .map(|(k, c)| (Letter::new(k as u32, d).expect("k >= 1"), c * &scale))
        .collect()
}

fn boxast_words(a: &Word, b: &Word, memo: &mut Memo) -> LinComb {
    if a.is_empty() {
        return LinComb::from(b.clone());
    }
    if b.is_empty() {
        return LinComb::from(a.clone());
    }
    let key = ordered(a, b);
    if let Some(hit) = memo.get(&key) {
        return hit.clone();
    }
    let (x, a_tail) = a.first().unwrap();
    let (y, b_tail) = b.first().unwrap();
    let mut out = boxast_words(&a_tail, b, memo).prepend(x);
    out += &boxast_words(a, &b_tail, memo).prepend(y);
    let inner = boxast_words(&a_tail, &b_tail, memo);
    for (letter, c) in merge_letters(x, y) {
        out.add_scaled(&inner.prepend(letter), &c);
    }
    memo.insert(key, out.clone());
    out
}

/// Quasi-shuffle product on `H^2`.
pub fn boxast(u: &LinComb, v: &LinComb) -> LinComb {
    let mut memo = Memo::new();
    bilinear(u, v, |a, b| boxast_words(a, b, &mut memo))
}

fn harmonic_words(a: &Word, b: &Word, memo: &mut Memo) -> LinComb {
    if a.is_empty() {
        return LinComb::from(b.clone());
    }
    if b.is_empty() {
        return LinComb::from(a.clone());
    }
    let key = ordered(a, b);
    if let Some(hit) = memo.get(&key) {
        return hit.clone();
    }
    let (x, a_tail) = a.first().unwrap();
    let (y, b_tail) = b.first().unwrap();
    let mut out = harmonic_words(&a_tail, b, memo).prepend(x);
    out += &harmonic_words(a, &b_tail, memo).prepend(y);
    let merged = Letter::plain(x.k() + y.k()).unwrap();
    out += &harmonic_words(&a_tail, &b_tail, memo).prepend(merged);
    memo.insert(key, out.clone());
    out
}

/// Harmonic (stuffle) product on `H^1`. Rejects words with a nonzero upper
/// index.
pub fn harmonic(u: &LinComb, v: &LinComb) -> Result<LinComb> {
    u.ensure_h1()?;
    v.ensure_h1()?;
    let mut memo = Memo::new();
    Ok(bilinear(u, v, |a, b| harmonic_words(a, b, &mut memo)))
}

/// A word over `{e0, e1}`; `true` stands for `e1`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BinaryWord(Vec<bool>);

impl BinaryWord {
    pub fn new(bits: Vec<bool>) -> Self {
        BinaryWord(bits)
    }

    pub fn bits(&self) -> &[bool] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Empty, or starting with `e1`.
    pub fn in_h1(&self) -> bool {
        self.0.first().is_none_or(|&b| b)
    }

    /// Encodes `e_k` as `e1 e0^{k-1}`. Upper indices must be zero.
    pub fn from_word(w: &Word) -> Result<Self> {
        if !w.is_h1() {
            return Err(crate::error::Error::NotInH1(w.clone()));
        }
        let mut bits = Vec::with_capacity(w.weight() as usize);
        for l in w.letters() {
            bits.push(true);
            bits.extend(std::iter::repeat_n(false, (l.k() - 1) as usize));
        }
        Ok(BinaryWord(bits))
    }

    /// Groups maximal blocks `e1 e0^{k-1}` into `e_k`; `None` outside `H^1`.
    pub fn to_word(&self) -> Option<Word> {
        if !self.in_h1() {
            return None;
        }
        let mut ks: Vec<u32> = Vec::new();
        for &b in &self.0 {
            if b {
                ks.push(1);
            } else {
                *ks.last_mut()? += 1;
            }
        }
        Some(Word::from_ks(&ks).expect("k >= 1"))
    }
}

/// Letterwise shuffle of two binary words, as a map word -> multiplicity.
pub fn shuffle_binary(a: &BinaryWord, b: &BinaryWord) -> HashMap<BinaryWord, u64> {
    fn go(
        a: &[bool],
        b: &[bool],
        memo: &mut HashMap<(usize, usize), HashMap<Vec<bool>, u64>>,
    ) -> HashMap<Vec<bool>, u64> {
        if a.is_empty() || b.is_empty() {
            let rest = if a.is_empty() { b } else { a };
            return HashMap::from([(rest.to_vec(), 1)]);
        }
        let key = (a.len(), b.len());
        if let Some(hit) = memo.get(&key) {
            return hit.clone();
        }
        let mut out: HashMap<Vec<bool>, u64> = HashMap::new();
        for (head, tail) in [(a[0], go(&a[1..], b, memo)), (b[0], go(a, &b[1..], memo))] {
            for (w, m) in tail {
                let mut v = Vec::with_capacity(w.len() + 1);
                v.push(head);
                v.extend(w);
                *out.entry(v).or_insert(0) += m;
            }
        }
        memo.insert(key, out.clone());
        out
    }
    // Memo keys are suffix lengths, valid because a and b are fixed per call.
    let mut memo = HashMap::new();
    go(&a.0, &b.0, &mut memo)
        .into_iter()
        .map(|(w, m)| (BinaryWord(w), m))
        .collect()
}

/// Shuffle product on `H^1`, computed through the `e0`/`e1` encoding.
pub fn shuffle(u: &LinComb, v: &LinComb) -> Result<LinComb> {
    u.ensure_h1()?;
    v.ensure_h1()?;
    let mut memo = Memo::new();
    Ok(bilinear(u, v, |a, b| {
        let key = ordered(a, b);
        if let Some(hit) = memo.get(&key) {
            return hit.clone();
        }
        let ba = BinaryWord::from_word(a).unwrap();
        let bb = BinaryWord::from_word(b).unwrap();
        let out: LinComb = shuffle_binary(&ba, &bb)
            .into_iter()
            .map(|(w, m)| {
                let word = w.to_word().expect("shuffle of H^1 words stays in H^1");
                (word, Rational::from_integer(m.into()))
            })
            .collect();
        memo.insert(key, out.clone());
        out
    }))
}

/// `ds(u, v) = u * v - u sh v`.
pub fn ds(u: &LinComb, v: &LinComb) -> Result<LinComb> {
    Ok(harmonic(u, v)? - shuffle(u, v)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, rat};

    fn w(pairs: &[(u32, u32)]) -> Word {
        Word::from_pairs(pairs).unwrap()
    }

    fn e(ks: &[u32]) -> Word {
        Word::from_ks(ks).unwrap()
    }

    fn lc(terms: &[(Word, Rational)]) -> LinComb {
        terms.iter().cloned().collect()
    }

    #[test]
    fn boxast_e2_e3() {
        let got = boxast(&e(&[2]).into(), &e(&[3]).into());
        let want = lc(&[
            (e(&[2, 3]), int(1)),
            (e(&[3, 2]), int(1)),
            (e(&[5]), int(1)),
            (e(&[3]), rat(-1, 12)),
        ]);
        assert_eq!(got, want);
    }

    #[test]
    fn boxast_with_upper_indices() {
        let got = boxast(&w(&[(1, 1)]).into(), &w(&[(1, 2)]).into());
        let want = lc(&[
            (w(&[(1, 1), (1, 2)]), int(1)),
            (w(&[(1, 2), (1, 1)]), int(1)),
            (w(&[(2, 3)]), int(3)),
            (w(&[(1, 3)]), int(-3)),
        ]);
        assert_eq!(got, want);
    }

    #[test]
    fn units() {
        let x: LinComb = w(&[(2, 1), (1, 0)]).into();
        assert_eq!(boxast(&LinComb::one(), &x), x);
        let y: LinComb = e(&[2, 1]).into();
        assert_eq!(harmonic(&LinComb::one(), &y).unwrap(), y);
        assert_eq!(shuffle(&y, &LinComb::one()).unwrap(), y);
        assert!(ds(&LinComb::one(), &y).unwrap().is_zero());
    }

    #[test]
    fn harmonic_examples() {
        let got = harmonic(&e(&[2]).into(), &e(&[3]).into()).unwrap();
        assert_eq!(
            got,
            lc(&[
                (e(&[2, 3]), int(1)),
                (e(&[3, 2]), int(1)),
                (e(&[5]), int(1))
            ])
        );
        let got = harmonic(&e(&[1]).into(), &e(&[2]).into()).unwrap();
        assert_eq!(
            got,
            lc(&[
                (e(&[1, 2]), int(1)),
                (e(&[2, 1]), int(1)),
                (e(&[3]), int(1))
            ])
        );
    }

    #[test]
    fn harmonic_rejects_upper_index() {
        let bad: LinComb = w(&[(1, 1)]).into();
        assert!(matches!(
            harmonic(&bad, &e(&[2]).into()),
            Err(crate::error::Error::NotInH1(_))
        ));
        assert!(ds(&e(&[2]).into(), &bad).is_err());
    }

    #[test]
    fn shuffle_examples() {
        let got = shuffle(&e(&[2]).into(), &e(&[3]).into()).unwrap();
        assert_eq!(
            got,
            lc(&[
                (e(&[3, 2]), int(1)),
                (e(&[2, 3]), int(3)),
                (e(&[1, 4]), int(6))
            ])
        );
        let got = shuffle(&e(&[1]).into(), &e(&[2]).into()).unwrap();
        assert_eq!(got, lc(&[(e(&[1, 2]), int(2)), (e(&[2, 1]), int(1))]));
    }

    #[test]
    fn ds_examples() {
        let got = ds(&e(&[2]).into(), &e(&[3]).into()).unwrap();
        assert_eq!(
            got,
            lc(&[
                (e(&[5]), int(1)),
                (e(&[2, 3]), int(-2)),
                (e(&[1, 4]), int(-6))
            ])
        );
        let got = ds(&e(&[1]).into(), &e(&[2]).into()).unwrap();
        assert_eq!(got, lc(&[(e(&[3]), int(1)), (e(&[1, 2]), int(-1))]));
    }

    #[test]
    fn binary_round_trip() {
        let word = e(&[1, 3, 2]);
        let b = BinaryWord::from_word(&word).unwrap();
        assert_eq!(b.bits(), &[true, true, false, false, true, false]);
        assert_eq!(b.to_word().unwrap(), word);
        assert_eq!(BinaryWord::new(vec![false, true]).to_word(), None);
        assert!(BinaryWord::new(vec![]).in_h1());
    }

    #[test]
    fn shuffle_mass_is_binomial() {
        let a = BinaryWord::new(vec![true, false, true]);
        let b = BinaryWord::new(vec![true, false, false, true]);
        let total: u64 = shuffle_binary(&a, &b).values().sum();
        assert_eq!(total, 35);
    }
}
