//! Letters `e_k^(d)`, words over them, and finite rational linear
//! combinations of words.

use std::collections::btree_map::{self, BTreeMap};
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::rational::{coefficient_prefix, Rational};

/// A bi-indexed letter `e_k^(d)` with `k >= 1`, `d >= 0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Letter {
    k: u32,
    d: u32,
}

impl Letter {
    pub fn new(k: u32, d: u32) -> Result<Self> {
        if k == 0 {
            return Err(Error::InvalidLetter { k: 0, d: d as i64 });
        }
        Ok(Letter { k, d })
    }

    /// The letter `e_k = e_k^(0)`.
    pub fn plain(k: u32) -> Result<Self> {
        Letter::new(k, 0)
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn d(&self) -> u32 {
        self.d
    }

    pub fn weight(&self) -> u32 {
        self.k + self.d
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.d == 0 {
            write!(f, "e({})", self.k)
        } else {
            write!(f, "e({},{})", self.k, self.d)
        }
    }
}

/// A finite word of letters. The empty word is the unit `1`.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word(Vec<Letter>);

impl Word {
    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn new(letters: Vec<Letter>) -> Self {
        Word(letters)
    }

    /// Word `e_{k_1} ... e_{k_r}` with all upper indices zero.
    pub fn from_ks(ks: &[u32]) -> Result<Self> {
        ks.iter()
            .map(|&k| Letter::plain(k))
            .collect::<Result<_>>()
            .map(Word)
    }

    /// Word from `(k, d)` pairs.
    pub fn from_pairs(pairs: &[(u32, u32)]) -> Result<Self> {
        pairs
            .iter()
            .map(|&(k, d)| Letter::new(k, d))
            .collect::<Result<_>>()
            .map(Word)
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn depth(&self) -> usize {
        self.0.len()
    }

    pub fn weight(&self) -> u32 {
        word_weight(self)
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// True when every upper index is zero.
    pub fn is_h1(&self) -> bool {
        self.0.iter().all(|l| l.d == 0)
    }

    pub fn ks(&self) -> Vec<u32> {
        self.0.iter().map(|l| l.k).collect()
    }

    pub fn ds(&self) -> Vec<u32> {
        self.0.iter().map(|l| l.d).collect()
    }

    pub fn first(&self) -> Option<(Letter, Word)> {
        let (head, tail) = self.0.split_first()?;
        Some((*head, Word(tail.to_vec())))
    }

    pub fn prepend(&self, letter: Letter) -> Word {
        let mut v = Vec::with_capacity(self.0.len() + 1);
        v.push(letter);
        v.extend_from_slice(&self.0);
        Word(v)
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        Word(v)
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("1");
        }
        for l in &self.0 {
            write!(f, "{l}")?;
        }
        Ok(())
    }
}

impl From<Letter> for Word {
    fn from(l: Letter) -> Self {
        Word(vec![l])
    }
}

/// Sum of `k_i + d_i` over the letters; zero for the empty word.
pub fn word_weight(w: &Word) -> u32 {
    w.0.iter().map(Letter::weight).sum()
}

/// All words of exactly the given weight, in lexicographic order.
pub fn words_of_weight(weight: u32) -> Vec<Word> {
    fn go(remaining: u32, prefix: &mut Vec<Letter>, out: &mut Vec<Word>) {
        if remaining == 0 {
            out.push(Word(prefix.clone()));
            return;
        }
        for k in 1..=remaining {
            for d in 0..=(remaining - k) {
                prefix.push(Letter { k, d });
                go(remaining - k - d, prefix, out);
                prefix.pop();
            }
        }
    }
    let mut out = Vec::new();
    go(weight, &mut Vec::new(), &mut out);
    out.sort();
    out
}

/// All words with all `d = 0` of the given weight and depth at most `max_depth`.
pub fn h1_words_of_weight(weight: u32, max_depth: usize) -> Vec<Word> {
    fn go(remaining: u32, depth_left: usize, prefix: &mut Vec<Letter>, out: &mut Vec<Word>) {
        if remaining == 0 {
            out.push(Word(prefix.clone()));
            return;
        }
        if depth_left == 0 {
            return;
        }
        for k in 1..=remaining {
            prefix.push(Letter { k, d: 0 });
            go(remaining - k, depth_left - 1, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    go(weight, max_depth, &mut Vec::new(), &mut out);
    out.sort();
    out
}

/// A finite rational linear combination of words with no zero coefficients.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct LinComb {
    terms: BTreeMap<Word, Rational>,
}

impl LinComb {
    pub fn zero() -> Self {
        LinComb::default()
    }

    pub fn one() -> Self {
        LinComb::from(Word::empty())
    }

    pub fn term(coeff: Rational, word: Word) -> Self {
        let mut lc = LinComb::zero();
        lc.add_term(word, coeff);
        lc
    }

    pub fn add_term(&mut self, word: Word, coeff: Rational) {
        if coeff.is_zero() {
            return;
        }
        match self.terms.entry(word) {
            btree_map::Entry::Vacant(e) => {
                e.insert(coeff);
            }
            btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += coeff;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    /// Adds `scale * other` in place.
    pub fn add_scaled(&mut self, other: &LinComb, scale: &Rational) {
        if scale.is_zero() {
            return;
        }
        for (w, c) in &other.terms {
            self.add_term(w.clone(), c * scale);
        }
    }

    pub fn coeff(&self, word: &Word) -> Rational {
        self.terms.get(word).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Word, &Rational)> {
        self.terms.iter()
    }

    pub fn words(&self) -> impl Iterator<Item = &Word> {
        self.terms.keys()
    }

    pub fn scale(&self, s: &Rational) -> LinComb {
        if s.is_zero() {
            return LinComb::zero();
        }
        LinComb {
            terms: self.terms.iter().map(|(w, c)| (w.clone(), c * s)).collect(),
        }
    }

    /// `letter` concatenated in front of every word.
    pub fn prepend(&self, letter: Letter) -> LinComb {
        LinComb {
            terms: self
                .terms
                .iter()
                .map(|(w, c)| (w.prepend(letter), c.clone()))
                .collect(),
        }
    }

    /// Bilinear extension of word concatenation.
    pub fn concat(&self, other: &LinComb) -> LinComb {
        let mut out = LinComb::zero();
        for (u, a) in &self.terms {
            for (v, b) in &other.terms {
                out.add_term(u.concat(v), a * b);
            }
        }
        out
    }

    /// Linear extension of a map defined on words.
    pub fn try_map_linear<F>(&self, mut f: F) -> Result<LinComb>
    where
        F: FnMut(&Word) -> Result<LinComb>,
    {
        let mut out = LinComb::zero();
        for (w, c) in &self.terms {
            out.add_scaled(&f(w)?, c);
        }
        Ok(out)
    }

    pub fn map_linear<F>(&self, mut f: F) -> LinComb
    where
        F: FnMut(&Word) -> LinComb,
    {
        let mut out = LinComb::zero();
        for (w, c) in &self.terms {
            out.add_scaled(&f(w), c);
        }
        out
    }

    /// The terms whose words have exactly the given weight.
    pub fn homogeneous_part(&self, weight: u32) -> LinComb {
        LinComb {
            terms: self
                .terms
                .iter()
                .filter(|(w, _)| w.weight() == weight)
                .map(|(w, c)| (w.clone(), c.clone()))
                .collect(),
        }
    }

    pub fn max_weight(&self) -> Option<u32> {
        self.terms.keys().map(Word::weight).max()
    }

    pub fn is_h1(&self) -> bool {
        self.terms.keys().all(Word::is_h1)
    }

    /// Fails with the first word that leaves `H^1`.
    pub fn ensure_h1(&self) -> Result<()> {
        match self.terms.keys().find(|w| !w.is_h1()) {
            Some(w) => Err(Error::NotInH1(w.clone())),
            None => Ok(()),
        }
    }
}

impl From<Word> for LinComb {
    fn from(w: Word) -> Self {
        LinComb::term(Rational::one(), w)
    }
}

impl From<Letter> for LinComb {
    fn from(l: Letter) -> Self {
        LinComb::from(Word::from(l))
    }
}

impl FromIterator<(Word, Rational)> for LinComb {
    fn from_iter<I: IntoIterator<Item = (Word, Rational)>>(iter: I) -> Self {
        let mut lc = LinComb::zero();
        for (w, c) in iter {
            lc.add_term(w, c);
        }
        lc
    }
}

impl AddAssign<&LinComb> for LinComb {
    fn add_assign(&mut self, rhs: &LinComb) {
        for (w, c) in &rhs.terms {
            self.add_term(w.clone(), c.clone());
        }
    }
}

impl SubAssign<&LinComb> for LinComb {
    fn sub_assign(&mut self, rhs: &LinComb) {
        for (w, c) in &rhs.terms {
            self.add_term(w.clone(), -c);
        }
    }
}

impl Add<&LinComb> for &LinComb {
    type Output = LinComb;
    fn add(self, rhs: &LinComb) -> LinComb {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Sub<&LinComb> for &LinComb {
    type Output = LinComb;
    fn sub(self, rhs: &LinComb) -> LinComb {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl Add for LinComb {
    type Output = LinComb;
    fn add(mut self, rhs: LinComb) -> LinComb {
        self += &rhs;
        self
    }
}

impl Sub for LinComb {
    type Output = LinComb;
    fn sub(mut self, rhs: LinComb) -> LinComb {
        self -= &rhs;
        self
    }
}

impl Neg for &LinComb {
    type Output = LinComb;
    fn neg(self) -> LinComb {
        LinComb {
            terms: self.terms.iter().map(|(w, c)| (w.clone(), -c)).collect(),
        }
    }
}

impl Neg for LinComb {
    type Output = LinComb;
    fn neg(self) -> LinComb {
        -&self
    }
}

impl Mul<&LinComb> for &Rational {
    type Output = LinComb;
    fn mul(self, rhs: &LinComb) -> LinComb {
        rhs.scale(self)
    }
}

impl fmt::Display for LinComb {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (w, c)) in self.terms.iter().enumerate() {
            let negative = c.is_negative();
            match (i, negative) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            if w.is_empty() {
                write!(f, "{}", c.abs())?;
            } else {
                write!(f, "{}{}", coefficient_prefix(c), w)?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, rat};

    fn w(pairs: &[(u32, u32)]) -> Word {
        Word::from_pairs(pairs).unwrap()
    }

    #[test]
    fn weights() {
        assert_eq!(word_weight(&Word::empty()), 0);
        assert_eq!(word_weight(&w(&[(2, 0), (3, 0)])), 5);
        assert_eq!(word_weight(&w(&[(1, 1), (1, 2)])), 5);
    }

    #[test]
    fn letter_rejects_zero_k() {
        assert!(Letter::new(0, 1).is_err());
        assert!(Word::from_ks(&[2, 0]).is_err());
    }

    #[test]
    fn word_counts_follow_odd_fibonacci() {
        let counts: Vec<usize> = (0..=8).map(|n| words_of_weight(n).len()).collect();
        assert_eq!(counts, vec![1, 1, 3, 8, 21, 55, 144, 377, 987]);
        assert_eq!(h1_words_of_weight(5, 2).len(), 5);
    }

    #[test]
    fn zero_coefficients_are_pruned() {
        let mut lc = LinComb::term(int(2), w(&[(2, 0)]));
        lc.add_term(w(&[(2, 0)]), int(-2));
        assert!(lc.is_zero());
        assert_eq!(lc, LinComb::zero());
    }

    #[test]
    fn display() {
        let lc: LinComb = [
            (w(&[(2, 0), (3, 0)]), int(1)),
            (w(&[(3, 0)]), rat(-1, 12)),
            (w(&[(4, 1)]), int(3)),
            (Word::empty(), int(-2)),
        ]
        .into_iter()
        .collect();
        assert_eq!(lc.to_string(), "-2 + e(2)e(3) - 1/12 e(3) + 3 e(4,1)");
        assert_eq!(LinComb::zero().to_string(), "0");
    }
}
