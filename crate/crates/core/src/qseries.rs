//! Truncated q-expansions with exact coefficients: bi-brackets, the
//! `H` series, the regularized brackets `g^sh`, and the operator `q d/dq`.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, Mul, Sub};
use std::sync::{Arc, RwLock};

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::poly::{compositions, power_product_coefficient, weak_compositions, LinearForm};
use crate::rational::{binomial, factorial, parse_rational, rat, Rational};
use crate::word::{Letter, LinComb, Word};

/// A power series in `q` known up to and including `q^order`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct QSeries {
    coeffs: Vec<Rational>,
}

impl QSeries {
    pub fn zero(order: usize) -> Self {
        QSeries {
            coeffs: vec![Rational::zero(); order + 1],
        }
    }

    pub fn one(order: usize) -> Self {
        let mut s = QSeries::zero(order);
        s.coeffs[0] = Rational::one();
        s
    }

    /// Series from `c_0, ..., c_N`; the order is `coeffs.len() - 1`.
    pub fn from_coeffs(coeffs: Vec<Rational>) -> Self {
        assert!(!coeffs.is_empty(), "a series carries at least c_0");
        QSeries { coeffs }
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn coeff(&self, n: usize) -> &Rational {
        &self.coeffs[n]
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn truncate(&self, order: usize) -> QSeries {
        QSeries {
            coeffs: self.coeffs[..=order.min(self.order())].to_vec(),
        }
    }

    pub fn scale(&self, s: &Rational) -> QSeries {
        QSeries {
            coeffs: self.coeffs.iter().map(|c| c * s).collect(),
        }
    }

    /// `self += s * other`, truncating to the smaller order.
    pub fn add_scaled(&mut self, other: &QSeries, s: &Rational) {
        if s.is_zero() {
            return;
        }
        self.coeffs.truncate(other.coeffs.len());
        for (c, o) in self.coeffs.iter_mut().zip(&other.coeffs) {
            if !o.is_zero() {
                *c += o * s;
            }
        }
    }

    /// First index where the two series differ, up to the smaller order.
    pub fn first_difference(&self, other: &QSeries) -> Option<usize> {
        self.coeffs
            .iter()
            .zip(&other.coeffs)
            .position(|(a, b)| a != b)
    }

    /// Renders `c_0 + c_1 q + ...` with exact coefficients, skipping zeros.
    pub fn to_text(&self) -> String {
        let mut parts = Vec::new();
        for (n, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let monomial = match n {
                0 => String::new(),
                1 => "q".to_string(),
                _ => format!("q^{n}"),
            };
            parts.push(match (n, c.is_one()) {
                (0, _) => c.to_string(),
                (_, true) => monomial,
                _ if *c == -Rational::one() => format!("-{monomial}"),
                _ => format!("{c}*{monomial}"),
            });
        }
        if parts.is_empty() {
            parts.push("0".to_string());
        }
        format!(
            "{} + O(q^{})",
            parts.join(" + ").replace("+ -", "- "),
            self.order() + 1
        )
    }
}

impl fmt::Display for QSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

impl Add for &QSeries {
    type Output = QSeries;
    fn add(self, rhs: &QSeries) -> QSeries {
        let mut out = self.clone();
        out.add_scaled(rhs, &Rational::one());
        out
    }
}

impl Sub for &QSeries {
    type Output = QSeries;
    fn sub(self, rhs: &QSeries) -> QSeries {
        let mut out = self.clone();
        out.add_scaled(rhs, &-Rational::one());
        out
    }
}

impl Mul for &QSeries {
    type Output = QSeries;
    fn mul(self, rhs: &QSeries) -> QSeries {
        let order = self.order().min(rhs.order());
        let mut out = QSeries::zero(order);
        for (i, a) in self.coeffs.iter().enumerate().take(order + 1) {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate().take(order + 1 - i) {
                if !b.is_zero() {
                    out.coeffs[i + j] += a * b;
                }
            }
        }
        out
    }
}

#[derive(Serialize, Deserialize)]
struct QSeriesRepr {
    order: usize,
    coeffs: Vec<String>,
}

impl Serialize for QSeries {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        QSeriesRepr {
            order: self.order(),
            coeffs: self.coeffs.iter().map(ToString::to_string).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for QSeries {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let repr = QSeriesRepr::deserialize(d)?;
        if repr.coeffs.len() != repr.order + 1 {
            return Err(D::Error::custom("coeffs must have order + 1 entries"));
        }
        let coeffs = repr
            .coeffs
            .iter()
            .map(|c| parse_rational(c).ok_or_else(|| D::Error::custom(format!("bad rational {c}"))))
            .collect::<std::result::Result<_, _>>()?;
        Ok(QSeries { coeffs })
    }
}

/// `q d/dq`: multiplies the n-th coefficient by n.
pub fn derivative_q(s: &QSeries) -> QSeries {
    QSeries {
        coeffs: s
            .coeffs
            .iter()
            .enumerate()
            .map(|(n, c)| c * Rational::from_integer(BigInt::from(n)))
            .collect(),
    }
}

/// Weight attached to the free summation variable `v` of one nested level.
#[derive(Debug, Clone, Copy)]
enum FreeWeight {
    /// `v^p`
    Power(u32),
    /// `C(v - 1, m)`, vanishing for `v <= m`
    Binomial(u32),
}

/// One level `x^p * w(v) q^{x v}` of an ordered nested sum over `0 < x_1 < ... < x_r`.
#[derive(Debug, Clone, Copy)]
struct Level {
    ordered_power: u32,
    free: FreeWeight,
}

/// `table[x][m]`: total weight of partial sums with last ordered index `<= x`
/// and exponent `m`.
type Table = Vec<Vec<BigInt>>;

fn initial_table(n: usize) -> Table {
    let mut table = vec![vec![BigInt::zero(); n + 1]; n + 1];
    for row in table.iter_mut() {
        row[0] = BigInt::one();
    }
    table
}

/// Appends one level to a nested sum, using prefix sums over the ordered index.
fn extend_table(prefix: &Table, level: Level, n: usize) -> Table {
    let mut next: Table = vec![vec![BigInt::zero(); n + 1]; n + 1];
    for x in 1..=n {
        let xp = BigInt::from(x).pow(level.ordered_power);
        let mut row = next[x - 1].clone();
        let prev = &prefix[x - 1];
        for v in 1..=(n / x) {
            let wv = match level.free {
                FreeWeight::Power(p) => BigInt::from(v).pow(p),
                FreeWeight::Binomial(m) => binomial(v - 1, m as usize),
            };
            if wv.is_zero() {
                continue;
            }
            let weight = &xp * wv;
            let shift = x * v;
            for m in 0..=(n - shift) {
                if !prev[m].is_zero() {
                    row[m + shift] += &prev[m] * &weight;
                }
            }
        }
        next[x] = row;
    }
    next
}

/// Integer coefficients of `sum_{0<x_1<...<x_r} sum_{v_i>0} prod_i x_i^{p_i} w_i(v_i) q^{sum x_i v_i}`.
fn nested_sum(levels: &[Level], order: usize) -> Vec<BigInt> {
    let mut table = initial_table(order);
    for &level in levels {
        table = extend_table(&table, level, order);
    }
    table.pop().expect("order + 1 rows")
}

fn scaled_series(ints: Vec<BigInt>, denominator: BigInt) -> QSeries {
    QSeries {
        coeffs: ints
            .into_iter()
            .map(|c| Rational::new(c, denominator.clone()))
            .collect(),
    }
}

/// The bi-bracket `g^{(d_1..d_r)}_{k_1..k_r}` up to `q^order`; the empty word gives `1`.
pub fn eval_g(w: &Word, order: usize) -> QSeries {
    let levels: Vec<Level> = w
        .letters()
        .iter()
        .map(|l| Level {
            ordered_power: l.d(),
            free: FreeWeight::Power(l.k() - 1),
        })
        .collect();
    let denominator = w
        .letters()
        .iter()
        .map(|l| factorial(l.d() as usize) * factorial(l.k() as usize - 1))
        .product();
    scaled_series(nested_sum(&levels, order), denominator)
}

/// Linear extension of [`eval_g`].
pub fn eval_map_g(x: &LinComb, order: usize) -> QSeries {
    let mut out = QSeries::zero(order);
    for (w, c) in x.iter() {
        out.add_scaled(&eval_g(w, order), c);
    }
    out
}

/// Coefficient of `X_1^{a_1-1} ... X_m^{a_m-1}` in `H[n_1..n_m](X_1..X_m)`:
/// `sum_{0<x_1<...<x_m} prod_i x_i^{a_i-1}/(a_i-1)! (q^{x_i}/(1-q^{x_i}))^{n_i}`.
pub fn eval_h(ns: &[u32], exps: &[u32], order: usize) -> QSeries {
    assert_eq!(ns.len(), exps.len(), "one exponent per H index");
    assert!(ns.iter().chain(exps).all(|&v| v >= 1), "H indices are >= 1");
    let levels: Vec<Level> = ns
        .iter()
        .zip(exps)
        .map(|(&n, &a)| Level {
            ordered_power: a - 1,
            free: FreeWeight::Binomial(n - 1),
        })
        .collect();
    let denominator = exps.iter().map(|&a| factorial(a as usize - 1)).product();
    scaled_series(nested_sum(&levels, order), denominator)
}

/// Key of one `H`-coefficient: the `(n_i, a_i)` pairs of [`eval_h`].
pub type HKey = Vec<(u32, u32)>;

/// [`eval_h`] for many keys at once. Keys sharing leading pairs share the
/// nested-sum tables of that prefix.
pub fn eval_h_batch(keys: &[HKey], order: usize) -> HashMap<HKey, QSeries> {
    fn walk(table: &Table, depth: usize, group: &[&HKey], order: usize) -> Vec<(HKey, QSeries)> {
        let mut out = Vec::new();
        let mut branches: BTreeMap<(u32, u32), Vec<&HKey>> = BTreeMap::new();
        for &key in group {
            if key.len() == depth {
                let denominator = key
                    .iter()
                    .map(|&(_, a)| factorial(a as usize - 1))
                    .product();
                let ints = table.last().expect("order + 1 rows").clone();
                out.push((key.clone(), scaled_series(ints, denominator)));
            } else {
                branches.entry(key[depth]).or_default().push(key);
            }
        }
        let nested: Vec<Vec<(HKey, QSeries)>> = branches
            .into_par_iter()
            .map(|((n, a), sub)| {
                let level = Level {
                    ordered_power: a - 1,
                    free: FreeWeight::Binomial(n - 1),
                };
                walk(&extend_table(table, level, order), depth + 1, &sub, order)
            })
            .collect();
        out.extend(nested.into_iter().flatten());
        out
    }
    let mut unique: Vec<&HKey> = keys.iter().collect();
    unique.sort();
    unique.dedup();
    assert!(
        unique
            .iter()
            .all(|k| k.iter().all(|&(n, a)| n >= 1 && a >= 1)),
        "H indices are >= 1"
    );
    walk(&initial_table(order), 0, &unique, order)
        .into_iter()
        .collect()
}

/// Index `(k_1, ..., k_r)` of a regularized bracket; every `k_i >= 1`, `r >= 1`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GshIndex(Vec<u32>);

impl GshIndex {
    pub fn new(ks: Vec<u32>) -> Result<Self> {
        if ks.is_empty() || ks.contains(&0) {
            return Err(Error::InvalidIndex(ks));
        }
        Ok(GshIndex(ks))
    }

    pub fn ks(&self) -> &[u32] {
        &self.0
    }

    pub fn depth(&self) -> usize {
        self.0.len()
    }

    pub fn weight(&self) -> u32 {
        self.0.iter().sum()
    }

    /// The word `e_{k_1} ... e_{k_r}`.
    pub fn word(&self) -> Word {
        Word::from_ks(&self.0).expect("validated")
    }

    /// Every index of weight `w`, one per composition of `w`.
    pub fn all_of_weight(w: u32) -> Vec<GshIndex> {
        compositions(w).into_iter().map(GshIndex).collect()
    }
}

impl fmt::Display for GshIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let ks: Vec<String> = self.0.iter().map(u32::to_string).collect();
        write!(f, "gsh({})", ks.join(","))
    }
}

/// One term `coeff * H-coefficient(ns, exps)` of the expansion of `g^sh`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HTerm {
    pub coeff: Rational,
    pub ns: Vec<u32>,
    pub exps: Vec<u32>,
}

/// Expands `g^sh_{k_1..k_r}` into `H`-coefficients.
///
/// For every composition `(i_1..i_m)` of `r` the arguments of `H` are
/// `X_r - X_{r-i_1}, X_{r-i_1} - X_{r-i_1-i_2}, ..., X_{i_m}` (with `X_0 = 0`);
/// the exponent tuples are bounded by total degree `sum (k_i - 1)`.
pub fn gsh_h_terms(idx: &GshIndex) -> Vec<HTerm> {
    let r = idx.depth();
    let target: Vec<u32> = idx.ks().iter().map(|k| k - 1).collect();
    let degree: u32 = target.iter().sum();
    let mut out = Vec::new();
    for comp in compositions(r as u32) {
        let mut forms = Vec::with_capacity(comp.len());
        let mut upper = r;
        for &i in &comp {
            let lower = upper - i as usize;
            forms.push(LinearForm::difference(r, upper - 1, lower.checked_sub(1)));
            upper = lower;
        }
        let prefactor: BigInt = comp.iter().map(|&i| factorial(i as usize)).product();
        for a in weak_compositions(degree, comp.len()) {
            let c = power_product_coefficient(&forms, &a, &target);
            if c.is_zero() {
                continue;
            }
            out.push(HTerm {
                coeff: c / Rational::from_integer(prefactor.clone()),
                ns: comp.clone(),
                exps: a.iter().map(|e| e + 1).collect(),
            });
        }
    }
    out
}

/// `g^sh_{k_1..k_r}` up to `q^order`.
pub fn eval_gsh(idx: &GshIndex, order: usize) -> QSeries {
    let mut out = QSeries::zero(order);
    for term in gsh_h_terms(idx) {
        out.add_scaled(&eval_h(&term.ns, &term.exps, order), &term.coeff);
    }
    out
}

/// `g^sh` written in bi-brackets, for depth at most three.
pub fn gsh_in_g(idx: &GshIndex) -> Result<LinComb> {
    let ks = idx.ks();
    let e = |pairs: &[(u32, u32)]| Word::from_pairs(pairs).expect("k >= 1");
    let half = rat(1, 2);
    let mut out = LinComb::from(idx.word());
    match *ks {
        [_] => {}
        [k1, k2] => {
            if k1 == 1 {
                out.add_term(e(&[(k2, 1)]), half.clone());
                out.add_term(e(&[(k2, 0)]), -half);
            }
        }
        [k1, k2, k3] => {
            if k1 == 1 {
                out.add_term(e(&[(k2, 1), (k3, 0)]), half.clone());
                out.add_term(e(&[(k2, 0), (k3, 0)]), -half.clone());
            }
            if k2 == 1 {
                out.add_term(e(&[(k1, 0), (k3, 1)]), half.clone());
                out.add_term(e(&[(k1, 1), (k3, 0)]), -half.clone());
                out.add_term(e(&[(k1, 0), (k3, 0)]), -half);
            }
            if k1 == 1 && k2 == 1 {
                out.add_term(e(&[(k3, 2)]), rat(1, 6));
                out.add_term(e(&[(k3, 1)]), rat(-1, 4));
                out.add_term(e(&[(k3, 0)]), rat(1, 6));
            }
        }
        _ => return Err(Error::DepthTooLarge(idx.depth())),
    }
    Ok(out)
}

/// `d` on a bi-bracket word:
/// `sum_j (d_j + 1) k_j e_{k_1}^(d_1) ... e_{k_j+1}^(d_j+1) ... e_{k_r}^(d_r)`.
pub fn derivative_word(w: &Word) -> LinComb {
    let mut out = LinComb::zero();
    let letters = w.letters();
    for (j, l) in letters.iter().enumerate() {
        let mut bumped = letters.to_vec();
        bumped[j] = Letter::new(l.k() + 1, l.d() + 1).expect("k >= 1");
        let c = (l.d() + 1) as i64 * l.k() as i64;
        out.add_term(Word::new(bumped), Rational::from_integer(c.into()));
    }
    out
}

/// Linear extension of [`derivative_word`].
pub fn derivative(x: &LinComb) -> LinComb {
    x.map_linear(derivative_word)
}

/// Thread-safe memo of bracket and regularized-bracket expansions at one
/// truncation order. Results are identical with or without the cache.
#[derive(Debug)]
pub struct SeriesCache {
    order: usize,
    g: RwLock<HashMap<Word, Arc<QSeries>>>,
    gsh: RwLock<HashMap<GshIndex, Arc<QSeries>>>,
}

impl SeriesCache {
    pub fn new(order: usize) -> Self {
        SeriesCache {
            order,
            g: RwLock::default(),
            gsh: RwLock::default(),
        }
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn g(&self, w: &Word) -> Arc<QSeries> {
        if let Some(s) = self.g.read().unwrap().get(w) {
            return s.clone();
        }
        let s = Arc::new(eval_g(w, self.order));
        self.g.write().unwrap().insert(w.clone(), s.clone());
        s
    }

    pub fn map_g(&self, x: &LinComb) -> QSeries {
        let mut out = QSeries::zero(self.order);
        for (w, c) in x.iter() {
            out.add_scaled(&self.g(w), c);
        }
        out
    }

    pub fn gsh(&self, idx: &GshIndex) -> Arc<QSeries> {
        if let Some(s) = self.gsh.read().unwrap().get(idx) {
            return s.clone();
        }
        let s = Arc::new(eval_gsh(idx, self.order));
        self.gsh.write().unwrap().insert(idx.clone(), s.clone());
        s
    }

    /// Fills the cache for all `indices`, evaluating the missing ones in one
    /// [`eval_h_batch`] pass.
    pub fn gsh_all(&self, indices: &[GshIndex]) {
        let missing: Vec<&GshIndex> = {
            let known = self.gsh.read().unwrap();
            indices.iter().filter(|i| !known.contains_key(*i)).collect()
        };
        if missing.is_empty() {
            return;
        }
        let expansions: Vec<Vec<HTerm>> = missing.par_iter().map(|i| gsh_h_terms(i)).collect();
        let keys: Vec<HKey> = expansions
            .iter()
            .flatten()
            .map(|t| t.ns.iter().copied().zip(t.exps.iter().copied()).collect())
            .collect();
        let h = eval_h_batch(&keys, self.order);
        let mut known = self.gsh.write().unwrap();
        for (idx, terms) in missing.into_iter().zip(expansions) {
            let mut s = QSeries::zero(self.order);
            for t in terms {
                let key: HKey = t.ns.iter().copied().zip(t.exps.iter().copied()).collect();
                s.add_scaled(&h[&key], &t.coeff);
            }
            known.insert(idx.clone(), Arc::new(s));
        }
    }

    /// The regularized map on `H^1`: `e_{k_1}..e_{k_r} -> g^sh_{k_1..k_r}`, `1 -> 1`.
    pub fn map_gsh(&self, x: &LinComb) -> Result<QSeries> {
        x.ensure_h1()?;
        let mut out = QSeries::zero(self.order);
        for (w, c) in x.iter() {
            if w.is_empty() {
                out.add_scaled(&QSeries::one(self.order), c);
            } else {
                out.add_scaled(&self.gsh(&GshIndex(w.ks())), c);
            }
        }
        Ok(out)
    }
}

/// The regularized map `g^sh` on `H^1`, without caching.
pub fn eval_map_gsh(x: &LinComb, order: usize) -> Result<QSeries> {
    SeriesCache::new(order).map_gsh(x)
}
