//! Executable checks of the identities and congruences satisfied by
//! brackets and regularized brackets, each producing a [`CheckReport`].
//!
//! Identities are compared coefficientwise and report `pass`. Congruences
//! modulo the span of lower-weight `g^sh` report `evidence` together with a
//! [`SpanCertificate`] valid up to the truncation order.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use num_traits::Zero;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::involution::{boxdot, involution_p};
use crate::linalg::{
    kernel_basis, pivot_columns, solve, span_membership, QMatrix, SpanCertificate,
};
use crate::poly::{expand_power_product, LinearForm};
use crate::products::{boxast, ds, shuffle};
use crate::qseries::{derivative_q, derivative_word, gsh_in_g, GshIndex, QSeries, SeriesCache};
use crate::rational::{int, rat, Rational};
use crate::word::{h1_words_of_weight, words_of_weight, LinComb, Word};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Evidence,
}

#[derive(Debug, Clone, Serialize)]
pub struct CheckReport {
    pub check_id: String,
    pub parameters: Value,
    pub status: Status,
    /// Truncation order of every series compared.
    pub order: usize,
    pub details: Value,
}

impl CheckReport {
    fn new(check_id: &str, parameters: Value, order: usize) -> Self {
        CheckReport {
            check_id: check_id.to_string(),
            parameters,
            status: Status::Pass,
            order,
            details: Value::Null,
        }
    }

    fn fail(mut self, details: Value) -> Self {
        self.status = Status::Fail;
        self.details = details;
        self
    }

    fn with(mut self, status: Status, details: Value) -> Self {
        self.status = status;
        self.details = details;
        self
    }

    pub fn is_fail(&self) -> bool {
        self.status == Status::Fail
    }

    pub fn to_json_line(&self) -> String {
        serde_json::to_string(self).expect("report serializes")
    }
}

/// Process-wide series cache for one truncation order.
pub fn shared_cache(order: usize) -> Arc<SeriesCache> {
    static CACHES: OnceLock<Mutex<HashMap<usize, Arc<SeriesCache>>>> = OnceLock::new();
    CACHES
        .get_or_init(Default::default)
        .lock()
        .unwrap()
        .entry(order)
        .or_insert_with(|| Arc::new(SeriesCache::new(order)))
        .clone()
}

fn e(ks: &[u32]) -> LinComb {
    LinComb::from(Word::from_ks(ks).expect("k >= 1"))
}

fn bi(pairs: &[(u32, u32)]) -> LinComb {
    LinComb::from(Word::from_pairs(pairs).expect("k >= 1"))
}

fn mismatch(label: String, lhs: &QSeries, rhs: &QSeries) -> Value {
    json!({
        "counterexample": label,
        "first_difference": lhs.first_difference(rhs),
    })
}

fn words_up_to(max_weight: u32) -> Vec<Word> {
    (0..=max_weight).flat_map(words_of_weight).collect()
}

/// Labeled `g^sh` series of weight at most `max_weight`, including the
/// constant `1` (depth zero).
pub fn gsh_basis(max_weight: u32, cache: &SeriesCache) -> Vec<(String, QSeries)> {
    let indices: Vec<GshIndex> = (1..=max_weight).flat_map(GshIndex::all_of_weight).collect();
    cache.gsh_all(&indices);
    let mut basis = vec![("1".to_string(), QSeries::one(cache.order()))];
    basis.extend(
        indices
            .par_iter()
            .map(|idx| (idx.to_string(), (*cache.gsh(idx)).clone()))
            .collect::<Vec<_>>(),
    );
    basis
}

/// Minimum number of equations beyond the span rank before a membership
/// certificate is accepted as evidence.
pub const EQUATION_SURPLUS: usize = 10;

/// Membership of `target` in the span of all `g^sh` of weight `<= max_weight`.
pub fn lower_weight_membership(
    target: &QSeries,
    max_weight: u32,
    cache: &SeriesCache,
) -> Result<SpanCertificate> {
    let basis = gsh_basis(max_weight, cache);
    let cert = span_membership(target, &basis)?;
    if cert.member && !cert.reverify(target, &basis) {
        unreachable!("certificate failed re-verification");
    }
    Ok(cert)
}

/// Smallest order `N >= min_order` (in steps of ten) at which the coefficient
/// equations exceed the rank of the weight `<= max_weight` span by
/// [`EQUATION_SURPLUS`], together with the probe order whose series were
/// used to find it.
///
/// The rank of every truncation is read off one reduction of the transposed
/// coefficient matrix: its pivot columns are the coefficient indices that
/// raise the rank.
pub fn congruence_order(max_weight: u32, min_order: usize) -> (usize, usize) {
    type Found = HashMap<(u32, usize), (usize, usize)>;
    static FOUND: OnceLock<Mutex<Found>> = OnceLock::new();
    let key = (max_weight, min_order);
    if let Some(&hit) = FOUND
        .get_or_init(Default::default)
        .lock()
        .unwrap()
        .get(&key)
    {
        return hit;
    }
    let mut probe = min_order.max(1);
    let found = loop {
        let cache = shared_cache(probe);
        let rows = gsh_basis(max_weight, &cache)
            .into_iter()
            .map(|(_, s)| s.coeffs().to_vec())
            .collect();
        let pivots = pivot_columns(&QMatrix::from_rows(rows));
        let hit = (min_order..=probe).step_by(10).find(|&n| {
            let rank = pivots.iter().filter(|&&p| p <= n).count();
            rank + EQUATION_SURPLUS <= n + 1
        });
        if let Some(n) = hit {
            break (n, probe);
        }
        probe *= 2;
    };
    FOUND.get().unwrap().lock().unwrap().insert(key, found);
    found
}

/// Like [`lower_weight_membership`], but at the order chosen by
/// [`congruence_order`]. Membership at a higher order implies membership at
/// every lower one.
pub fn lower_weight_congruence<F>(
    target: F,
    max_weight: u32,
    min_order: usize,
) -> Result<SpanCertificate>
where
    F: Fn(&SeriesCache) -> Result<QSeries>,
{
    let (order, probe) = congruence_order(max_weight, min_order);
    let cache = shared_cache(probe);
    let basis: Vec<(String, QSeries)> = gsh_basis(max_weight, &cache)
        .into_iter()
        .map(|(label, s)| (label, s.truncate(order)))
        .collect();
    let target = target(&cache)?.truncate(order);
    let cert = span_membership(&target, &basis)?;
    if cert.member && !cert.reverify(&target, &basis) {
        unreachable!("certificate failed re-verification");
    }
    Ok(cert)
}

/// `g(P(w)) = g(w)` for every word of weight `<= max_weight`.
pub fn check_partition_relation(max_weight: u32, order: usize) -> CheckReport {
    let cache = shared_cache(order);
    let report = CheckReport::new(
        "partition-relation",
        json!({ "max_weight": max_weight }),
        order,
    );
    let words = words_up_to(max_weight);
    let failure = words.par_iter().find_map_any(|w| {
        let lhs = cache.map_g(&involution_p(w));
        let rhs = cache.g(w);
        (lhs != *rhs).then(|| mismatch(w.to_string(), &lhs, &rhs))
    });
    match failure {
        Some(d) => report.fail(d),
        None => report.with(Status::Pass, json!({ "words_checked": words.len() })),
    }
}

/// `g(u ⊛ v) = g(u) g(v) = g(u ⊡ v)` for all word pairs of combined weight
/// `<= max_weight`.
pub fn check_double_shuffle_g(max_weight: u32, order: usize) -> CheckReport {
    let cache = shared_cache(order);
    let report = CheckReport::new("double-shuffle", json!({ "max_weight": max_weight }), order);
    let words: Vec<Word> = (1..max_weight).flat_map(words_of_weight).collect();
    let pairs: Vec<(&Word, &Word)> = words
        .iter()
        .enumerate()
        .flat_map(|(i, u)| words[i..].iter().map(move |v| (u, v)))
        .filter(|(u, v)| u.weight() + v.weight() <= max_weight)
        .collect();
    let failure = pairs.par_iter().find_map_any(|&(u, v)| {
        let (lu, lv) = (LinComb::from(u.clone()), LinComb::from(v.clone()));
        let product = &*cache.g(u) * &*cache.g(v);
        let quasi = cache.map_g(&boxast(&lu, &lv));
        if quasi != product {
            return Some(mismatch(format!("{u} ⊛ {v}"), &quasi, &product));
        }
        let conj = cache.map_g(&boxdot(&lu, &lv));
        (conj != product).then(|| mismatch(format!("{u} ⊡ {v}"), &conj, &product))
    });
    match failure {
        Some(d) => report.fail(d),
        None => report.with(Status::Pass, json!({ "pairs_checked": pairs.len() })),
    }
}

fn depth1_rhs_word(k: u32) -> LinComb {
    let mut rhs = e(&[k + 2]).scale(&int(k as i64 + 1));
    for n in 2..=k + 1 {
        let c = (1i64 << n) - 2;
        rhs.add_scaled(&e(&[k + 2 - n, n]), &int(-c));
    }
    rhs
}

/// `(1/k) d g^sh_k = (k+1) g^sh_{k+2} - sum_{n=2}^{k+1} (2^n - 2) g^sh_{k+2-n,n}`, exactly.
pub fn check_thm_derivative_depth1(k_max: u32, order: usize) -> CheckReport {
    let cache = shared_cache(order);
    let report = CheckReport::new("derivative-depth1", json!({ "k_max": k_max }), order);
    for k in 1..=k_max {
        let idx = GshIndex::new(vec![k]).unwrap();
        let lhs = derivative_q(&cache.gsh(&idx)).scale(&rat(1, k as i64));
        let rhs = cache.map_gsh(&depth1_rhs_word(k)).expect("H^1 words");
        if lhs != rhs {
            return report.fail(mismatch(format!("k={k}"), &lhs, &rhs));
        }
    }
    report.with(Status::Pass, json!({ "k_checked": k_max }))
}

/// The depth-one derivative written through double shuffle defects:
/// `sum_{i=1}^{k+1} ds(e_i, e_{k+2-i})` equals the right-hand side above as
/// words, and its `g^sh` image equals `(1/k) d g^sh_k`.
pub fn check_remark_depth1(k_max: u32, order: usize) -> CheckReport {
    let cache = shared_cache(order);
    let report = CheckReport::new("remark-depth1", json!({ "k_max": k_max }), order);
    for k in 1..=k_max {
        let mut sum = LinComb::zero();
        for i in 1..=k + 1 {
            sum += &ds(&e(&[i]), &e(&[k + 2 - i])).unwrap();
        }
        if sum != depth1_rhs_word(k) {
            return report
                .fail(json!({ "counterexample": format!("k={k}"), "words": sum.to_string() }));
        }
        let idx = GshIndex::new(vec![k]).unwrap();
        let lhs = derivative_q(&cache.gsh(&idx)).scale(&rat(1, k as i64));
        let rhs = cache.map_gsh(&sum).unwrap();
        if lhs != rhs {
            return report.fail(mismatch(format!("k={k}"), &lhs, &rhs));
        }
    }
    report.with(Status::Pass, json!({ "k_checked": k_max }))
}

/// `d g^sh_k - 2k g^sh(ds(e_1, e_{k+1}))` lies in the span of `g^sh` of weight `<= k+1`.
pub fn check_prop_dgk(k_max: u32, order: usize) -> Result<CheckReport> {
    let mut report = CheckReport::new("prop-dgk", json!({ "k_max": k_max }), order);
    let mut entries = Vec::new();
    for k in 1..=k_max {
        let idx = GshIndex::new(vec![k]).unwrap();
        let defect = ds(&e(&[1]), &e(&[k + 1]))?.scale(&int(2 * k as i64));
        let cert = lower_weight_congruence(
            |cache| Ok(&derivative_q(&cache.gsh(&idx)) - &cache.map_gsh(&defect)?),
            k + 1,
            order,
        )?;
        report.order = report.order.max(cert.order_checked);
        let entry = json!({ "k": k, "certificate": cert });
        if !cert.member {
            return Ok(report.fail(json!({ "counterexample": format!("k={k}"), "entry": entry })));
        }
        entries.push(entry);
    }
    Ok(report.with(Status::Evidence, json!({ "entries": entries })))
}

/// `g^{(1,0)}_{k1,k2}` and `g^{(0,1)}_{k1,k2}` lie in the span of `g^sh` of
/// weight `<= k1+k2+1`, for `k1, k2 >= 2`.
pub fn check_lemma_g10(pairs: &[(u32, u32)], order: usize) -> Result<CheckReport> {
    if let Some(&(a, b)) = pairs.iter().find(|(a, b)| *a < 2 || *b < 2) {
        return Err(Error::Hypothesis(format!(
            "lemma needs k1, k2 >= 2, got ({a},{b})"
        )));
    }
    let params = json!({ "pairs": pairs });
    let mut report = CheckReport::new("lemma-g10", params, order);
    let mut entries = Vec::new();
    for &(k1, k2) in pairs {
        for (label, word) in [
            (format!("e({k1},1)e({k2})"), bi(&[(k1, 1), (k2, 0)])),
            (format!("e({k1})e({k2},1)"), bi(&[(k1, 0), (k2, 1)])),
        ] {
            let cert = lower_weight_congruence(|cache| Ok(cache.map_g(&word)), k1 + k2 + 1, order)?;
            report.order = report.order.max(cert.order_checked);
            let entry = json!({ "target": label, "certificate": cert });
            if !cert.member {
                return Ok(report.fail(json!({ "counterexample": label, "entry": entry })));
            }
            entries.push(entry);
        }
    }
    Ok(report.with(Status::Evidence, json!({ "entries": entries })))
}

/// Which double shuffle defect the lemma on single `k_j = 1` describes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum GdshCase {
    /// `ds(e_{k1}, e_{k2} e_{k3})`
    I,
    /// `ds(e_{k1}, e_{k2} e_{k3} e_{k4})`
    Ii,
    /// `ds(e_{k1} e_{k2}, e_{k3} e_{k4})`
    Iii,
}

impl std::str::FromStr for GdshCase {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "i" => Ok(GdshCase::I),
            "ii" => Ok(GdshCase::Ii),
            "iii" => Ok(GdshCase::Iii),
            other => Err(Error::Hypothesis(format!("unknown lemma case {other:?}"))),
        }
    }
}

/// The defect word and the predicted bi-bracket leading term.
pub fn gdsh1_sides(case: GdshCase, ks: &[u32]) -> Result<(LinComb, LinComb)> {
    let arity = if case == GdshCase::I { 3 } else { 4 };
    if ks.len() != arity {
        return Err(Error::Hypothesis(format!(
            "case needs {arity} indices, got {}",
            ks.len()
        )));
    }
    if ks.iter().filter(|&&k| k == 1).count() != 1 || ks.contains(&0) {
        return Err(Error::Hypothesis(format!(
            "exactly one index must equal 1 (others >= 2), got {ks:?}"
        )));
    }
    let half = rat(1, 2);
    let mut rhs = LinComb::zero();
    let mut add = |pairs: &[(u32, u32)], sign: i64| {
        rhs.add_scaled(&bi(pairs), &(&half * int(sign)));
    };
    let lhs = match case {
        GdshCase::I => {
            let [k1, k2, k3] = [ks[0], ks[1], ks[2]];
            if k1 == 1 {
                add(&[(k2, 0), (k3, 1)], 1);
            }
            if k3 == 1 {
                add(&[(k2, 0), (k1, 1)], 1);
                add(&[(k2, 1), (k1, 0)], -1);
            }
            ds(&e(&[k1]), &e(&[k2, k3]))?
        }
        GdshCase::Ii => {
            let [k1, k2, k3, k4] = [ks[0], ks[1], ks[2], ks[3]];
            if k1 == 1 {
                add(&[(k2, 0), (k3, 0), (k4, 1)], 1);
            }
            if k4 == 1 {
                add(&[(k2, 0), (k3, 0), (k1, 1)], 1);
                add(&[(k2, 0), (k3, 1), (k1, 0)], -1);
            }
            ds(&e(&[k1]), &e(&[k2, k3, k4]))?
        }
        GdshCase::Iii => {
            let [k1, k2, k3, k4] = [ks[0], ks[1], ks[2], ks[3]];
            if k2 == 1 {
                add(&[(k1, 0), (k3, 0), (k4, 1)], 1);
                add(&[(k1, 1), (k3, 0), (k4, 0)], -1);
                add(&[(k3, 0), (k1, 0), (k4, 1)], 1);
                add(&[(k3, 0), (k1, 1), (k4, 0)], -1);
                add(&[(k1 + k3, 0), (k4, 1)], 1);
                add(&[(k1 + k3, 1), (k4, 0)], -1);
            }
            if k4 == 1 {
                add(&[(k1, 0), (k3, 0), (k2, 1)], 1);
                add(&[(k1, 0), (k3, 1), (k2, 0)], -1);
                add(&[(k3, 0), (k1, 0), (k2, 1)], 1);
                add(&[(k3, 1), (k1, 0), (k2, 0)], -1);
                add(&[(k1 + k3, 0), (k2, 1)], 1);
                add(&[(k1 + k3, 1), (k2, 0)], -1);
            }
            ds(&e(&[k1, k2]), &e(&[k3, k4]))?
        }
    };
    Ok((lhs, rhs))
}

/// `g^sh(ds(...)) - (bi-bracket terms)` lies in the span of `g^sh` of weight
/// `<= k - 1`, when exactly one index equals 1.
pub fn check_lemma_gdsh1(case: GdshCase, ks: &[u32], order: usize) -> Result<CheckReport> {
    let (lhs, rhs) = gdsh1_sides(case, ks)?;
    let weight: u32 = ks.iter().sum();
    let mut report = CheckReport::new("lemma-gdsh1", json!({ "case": case, "indices": ks }), order);
    let cert = lower_weight_congruence(
        |cache| Ok(&cache.map_gsh(&lhs)? - &cache.map_g(&rhs)),
        weight - 1,
        order,
    )?;
    report.order = cert.order_checked;
    let details = json!({
        "defect": lhs.to_string(),
        "leading_terms": rhs.to_string(),
        "certificate": cert,
    });
    Ok(if cert.member {
        report.with(Status::Evidence, details)
    } else {
        report.fail(details)
    })
}

/// Depth of the derivative congruence.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum DepthCase {
    Depth2,
    Depth3,
}

impl std::str::FromStr for DepthCase {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "depth2" | "2" => Ok(DepthCase::Depth2),
            "depth3" | "3" => Ok(DepthCase::Depth3),
            other => Err(Error::Hypothesis(format!("unknown depth case {other:?}"))),
        }
    }
}

/// The word combination of double shuffle defects predicted to agree with
/// `d g^sh_{k1,k2}` (resp. `d g^sh_{k1,k2,k3}`) modulo lower weight.
pub fn derivative_ds_combination(case: DepthCase, ks: &[u32]) -> Result<LinComb> {
    let expected = if case == DepthCase::Depth2 { 2 } else { 3 };
    if ks.len() != expected || ks.iter().any(|&k| k < 2) {
        return Err(Error::Hypothesis(format!(
            "need {expected} indices, all >= 2, got {ks:?}"
        )));
    }
    let c = |k: u32| int(2 * k as i64);
    let mut out = LinComb::zero();
    match case {
        DepthCase::Depth2 => {
            let (k1, k2) = (ks[0], ks[1]);
            out.add_scaled(&ds(&e(&[1]), &e(&[k1 + 1, k2]))?, &c(k1));
            out.add_scaled(&ds(&e(&[k2]), &e(&[k1 + 1, 1]))?, &-c(k1));
            out.add_scaled(&ds(&e(&[1]), &e(&[k1, k2 + 1]))?, &c(k2));
        }
        DepthCase::Depth3 => {
            let (k1, k2, k3) = (ks[0], ks[1], ks[2]);
            out.add_scaled(&ds(&e(&[1]), &e(&[k1 + 1, k2, k3]))?, &c(k1));
            out.add_scaled(&ds(&e(&[k3]), &e(&[k2, k1 + 1, 1]))?, &c(k1));
            out.add_scaled(&ds(&e(&[k3]), &e(&[k1 + 1 + k2, 1]))?, &c(k1));
            out.add_scaled(&ds(&e(&[k1 + 1, 1]), &e(&[k2, k3]))?, &-c(k1));
            out.add_scaled(&ds(&e(&[1]), &e(&[k1, k2 + 1, k3]))?, &c(k2));
            out.add_scaled(&ds(&e(&[k3]), &e(&[k1, k2 + 1, 1]))?, &-c(k2));
            out.add_scaled(&ds(&e(&[1]), &e(&[k1, k2, k3 + 1]))?, &c(k3));
        }
    }
    Ok(out)
}

fn derivative_congruence(
    check_id: &str,
    case: DepthCase,
    ks: &[u32],
    order: usize,
) -> Result<CheckReport> {
    let combination = derivative_ds_combination(case, ks)?;
    let weight: u32 = ks.iter().sum();
    let idx = GshIndex::new(ks.to_vec())?;
    let mut report = CheckReport::new(check_id, json!({ "case": case, "indices": ks }), order);
    let cert = lower_weight_congruence(
        |cache| Ok(&derivative_q(&cache.gsh(&idx)) - &cache.map_gsh(&combination)?),
        weight + 1,
        order,
    )?;
    report.order = cert.order_checked;
    let details = json!({
        "top_weight_part": combination.homogeneous_part(weight + 2).to_string(),
        "lower_weight_part": (&combination - &combination.homogeneous_part(weight + 2)).to_string(),
        "certificate": cert,
    });
    Ok(if cert.member {
        report.with(Status::Evidence, details)
    } else {
        report.fail(details)
    })
}

/// `d g^sh_{k1,k2}` and `d g^sh_{k1,k2,k3}` agree with their double shuffle
/// defect combinations modulo `g^sh` of weight `<= k+1`.
pub fn check_thm_dgsh23(case: DepthCase, ks: &[u32], order: usize) -> Result<CheckReport> {
    derivative_congruence("thm-dgsh23", case, ks, order)
}

/// The `g^sh` shadow of the conjectured derivative formulas for double and
/// triple series: the same congruence as [`check_thm_dgsh23`].
pub fn check_conjecture_formal(case: DepthCase, ks: &[u32], order: usize) -> Result<CheckReport> {
    derivative_congruence("conjecture", case, ks, order)
}

/// The published expansion of `d g^sh_{2,2}` on its ten weight-6 indices.
pub fn dgsh22_listed() -> Vec<(Vec<u32>, i64)> {
    vec![
        (vec![2, 4], 4),
        (vec![3, 3], 4),
        (vec![4, 2], 4),
        (vec![5, 1], -4),
        (vec![1, 2, 3], -4),
        (vec![1, 3, 2], 4),
        (vec![1, 4, 1], 24),
        (vec![2, 1, 3], -4),
        (vec![2, 2, 2], -4),
        (vec![2, 3, 1], 8),
    ]
}

/// Compares the weight-6 part of the defect combination for `d g^sh_{2,2}`
/// with the listed coefficients, and checks the listed combination against
/// `d g^sh_{2,2}` modulo weight `<= 5`.
pub fn check_example_dgsh22(order: usize) -> Result<CheckReport> {
    let mut report = CheckReport::new("example-dgsh22", json!({}), order);
    let combination = derivative_ds_combination(DepthCase::Depth2, &[2, 2])?;
    let top = combination.homogeneous_part(6);
    let listed: LinComb = dgsh22_listed()
        .into_iter()
        .map(|(ks, c)| (Word::from_ks(&ks).unwrap(), int(c)))
        .collect();
    let vector: Vec<String> = dgsh22_listed()
        .iter()
        .map(|(ks, _)| top.coeff(&Word::from_ks(ks).unwrap()).to_string())
        .collect();
    if top != listed {
        return Ok(report.fail(json!({
            "counterexample": "top-weight part differs from the listed expansion",
            "computed": top.to_string(),
            "coefficient_vector": vector,
        })));
    }
    let idx = GshIndex::new(vec![2, 2])?;
    let cert = lower_weight_congruence(
        |cache| Ok(&derivative_q(&cache.gsh(&idx)) - &cache.map_gsh(&listed)?),
        5,
        order,
    )?;
    report.order = cert.order_checked;
    let details = json!({ "coefficient_vector": vector, "certificate": cert });
    Ok(if cert.member {
        report.with(Status::Evidence, details)
    } else {
        report.fail(details)
    })
}

/// Linear relations among all brackets (`d = 0`) of weight `<= weight` and
/// depth `<= max_depth`, plus `extra` words, found as the kernel of their
/// coefficient matrix up to `q^order`. Each relation is re-evaluated and
/// must map to the zero series.
pub fn find_relations(weight: u32, max_depth: usize, order: usize, extra: &[Word]) -> Vec<LinComb> {
    let cache = shared_cache(order);
    let candidates = relation_candidates(weight, max_depth, extra);
    let series: Vec<Arc<QSeries>> = candidates.par_iter().map(|w| cache.g(w)).collect();
    let refs: Vec<&QSeries> = series.iter().map(|s| s.as_ref()).collect();
    let m = QMatrix::from_series_columns(&refs);
    kernel_basis(&m)
        .into_iter()
        .map(|v| candidates.iter().cloned().zip(v).collect::<LinComb>())
        .inspect(|rel| assert!(cache.map_g(rel).is_zero(), "kernel vector is a relation"))
        .collect()
}

/// Candidate words used by [`find_relations`], in column order.
pub fn relation_candidates(weight: u32, max_depth: usize, extra: &[Word]) -> Vec<Word> {
    let mut candidates: Vec<Word> = (1..=weight)
        .flat_map(|w| h1_words_of_weight(w, max_depth))
        .collect();
    for w in extra {
        if !candidates.contains(w) {
            candidates.push(w.clone());
        }
    }
    candidates
}

/// Whether `relation` is a rational combination of `relations`.
pub fn in_relation_span(relation: &LinComb, relations: &[LinComb]) -> bool {
    if relation.is_zero() {
        return true;
    }
    let mut coords: Vec<Word> = relations.iter().flat_map(|r| r.words().cloned()).collect();
    coords.extend(relation.words().cloned());
    coords.sort();
    coords.dedup();
    let m = QMatrix::from_rows(
        coords
            .iter()
            .map(|w| relations.iter().map(|r| r.coeff(w)).collect())
            .collect(),
    );
    let b: Vec<Rational> = coords.iter().map(|w| relation.coeff(w)).collect();
    if relations.is_empty() {
        return false;
    }
    solve(&m, &b).is_some()
}

/// The relation `g_5 - 2 g_{2,3} - 6 g_{1,4} - 3 g^{(1)}_4 + 3 g_4 - 1/12 g_3`.
pub fn weight_five_relation() -> LinComb {
    let mut x = e(&[5]);
    x.add_scaled(&e(&[2, 3]), &int(-2));
    x.add_scaled(&e(&[1, 4]), &int(-6));
    x.add_scaled(&bi(&[(4, 1)]), &int(-3));
    x.add_scaled(&e(&[4]), &int(3));
    x.add_scaled(&e(&[3]), &rat(-1, 12));
    x
}

/// The weight-five relation vanishes and lies in the mined relation space.
pub fn check_relation_example(order: usize) -> CheckReport {
    let cache = shared_cache(order);
    let report = CheckReport::new(
        "relation-example",
        json!({ "weight": 5, "max_depth": 2 }),
        order,
    );
    let relation = weight_five_relation();
    let value = cache.map_g(&relation);
    if !value.is_zero() {
        return report.fail(mismatch(
            relation.to_string(),
            &value,
            &QSeries::zero(order),
        ));
    }
    let from_products = &boxast(&e(&[2]), &e(&[3])) - &boxdot(&e(&[2]), &e(&[3]));
    if from_products != relation {
        return report.fail(json!({ "counterexample": from_products.to_string() }));
    }
    let extra = [Word::from_pairs(&[(4, 1)]).unwrap()];
    let relations = find_relations(5, 2, order, &extra);
    if !in_relation_span(&relation, &relations) {
        return report.fail(json!({ "counterexample": "relation not in mined kernel" }));
    }
    report.with(Status::Pass, json!({ "kernel_dimension": relations.len() }))
}

/// `g(D w) = d g(w)` for every word of weight `<= max_weight`.
pub fn check_derivative_square(max_weight: u32, order: usize) -> CheckReport {
    let cache = shared_cache(order);
    let report = CheckReport::new(
        "derivative-square",
        json!({ "max_weight": max_weight }),
        order,
    );
    let words = words_up_to(max_weight);
    let failure = words.par_iter().find_map_any(|w| {
        let lhs = cache.map_g(&derivative_word(w));
        let rhs = derivative_q(&cache.g(w));
        (lhs != rhs).then(|| mismatch(w.to_string(), &lhs, &rhs))
    });
    match failure {
        Some(d) => report.fail(d),
        None => report.with(Status::Pass, json!({ "words_checked": words.len() })),
    }
}

/// The generating-series definition of `g^sh` agrees with its bi-bracket
/// expansion for every index of depth `<= 3` and weight `<= max_weight`.
pub fn check_gsh_routes(max_weight: u32, order: usize) -> CheckReport {
    let cache = shared_cache(order);
    let report = CheckReport::new("gsh-routes", json!({ "max_weight": max_weight }), order);
    let indices: Vec<GshIndex> = (1..=max_weight)
        .flat_map(GshIndex::all_of_weight)
        .filter(|i| i.depth() <= 3)
        .collect();
    let failure = indices.par_iter().find_map_any(|idx| {
        let lhs = cache.gsh(idx);
        let rhs = cache.map_g(&gsh_in_g(idx).expect("depth <= 3"));
        (*lhs != rhs).then(|| mismatch(idx.to_string(), &lhs, &rhs))
    });
    match failure {
        Some(d) => report.fail(d),
        None => report.with(Status::Pass, json!({ "indices_checked": indices.len() })),
    }
}

/// `g^sh_{k_1..k_r} = g_{k_1..k_r}` whenever `k_1, ..., k_{r-1} >= 2`.
pub fn check_gsh_regular(max_weight: u32, order: usize) -> CheckReport {
    let cache = shared_cache(order);
    let report = CheckReport::new("gsh-regular", json!({ "max_weight": max_weight }), order);
    let indices: Vec<GshIndex> = (1..=max_weight)
        .flat_map(GshIndex::all_of_weight)
        .filter(|i| i.ks()[..i.depth() - 1].iter().all(|&k| k >= 2))
        .collect();
    let failure = indices.par_iter().find_map_any(|idx| {
        let lhs = cache.gsh(idx);
        let rhs = cache.g(&idx.word());
        (lhs != rhs).then(|| mismatch(idx.to_string(), &lhs, &rhs))
    });
    match failure {
        Some(d) => report.fail(d),
        None => report.with(Status::Pass, json!({ "indices_checked": indices.len() })),
    }
}

/// `g^sh(u sh v) = g^sh(u) g^sh(v)` for `H^1` words of depth `<= 2` and
/// combined weight `<= max_weight`.
pub fn check_gsh_shuffle(max_weight: u32, order: usize) -> CheckReport {
    let cache = shared_cache(order);
    let report = CheckReport::new("gsh-shuffle", json!({ "max_weight": max_weight }), order);
    let words: Vec<Word> = (1..max_weight)
        .flat_map(|w| h1_words_of_weight(w, 2))
        .collect();
    let pairs: Vec<(&Word, &Word)> = words
        .iter()
        .enumerate()
        .flat_map(|(i, u)| words[i..].iter().map(move |v| (u, v)))
        .filter(|(u, v)| u.weight() + v.weight() <= max_weight)
        .collect();
    let failure = pairs.par_iter().find_map_any(|&(u, v)| {
        let (lu, lv) = (LinComb::from(u.clone()), LinComb::from(v.clone()));
        let lhs = cache.map_gsh(&shuffle(&lu, &lv).unwrap()).unwrap();
        let rhs = &cache.map_gsh(&lu).unwrap() * &cache.map_gsh(&lv).unwrap();
        (lhs != rhs).then(|| mismatch(format!("{u} sh {v}"), &lhs, &rhs))
    });
    match failure {
        Some(d) => report.fail(d),
        None => report.with(Status::Pass, json!({ "pairs_checked": pairs.len() })),
    }
}

/// Coefficientwise form of `T(X) T(Y) = T(X, X+Y) + T(Y, X+Y)`:
/// `g_a g_b = sum_{k1+k2=a+b} c_{k1,k2} g^sh_{k1,k2}` with `c` read off from
/// `X^{k1-1}(X+Y)^{k2-1} + Y^{k1-1}(X+Y)^{k2-1}`.
pub fn check_gsh_square(max_weight: u32, order: usize) -> CheckReport {
    let cache = shared_cache(order);
    let report = CheckReport::new("gsh-square", json!({ "max_weight": max_weight }), order);
    let x = LinearForm::var(2, 0);
    let y = LinearForm::var(2, 1);
    let xy = LinearForm::sum_range(2, 0, 1);
    let mut checked = 0;
    for total in 2..=max_weight {
        for a in 1..total {
            let b = total - a;
            let mut rhs = QSeries::zero(order);
            for k1 in 1..total {
                let k2 = total - k1;
                let first = expand_power_product(&[x.clone(), xy.clone()], &[k1 - 1, k2 - 1]);
                let second = expand_power_product(&[y.clone(), xy.clone()], &[k1 - 1, k2 - 1]);
                let c = first.coeff(&[a - 1, b - 1]) + second.coeff(&[a - 1, b - 1]);
                if !c.is_zero() {
                    rhs.add_scaled(&cache.gsh(&GshIndex::new(vec![k1, k2]).unwrap()), &c);
                }
            }
            let lhs = &*cache.gsh(&GshIndex::new(vec![a]).unwrap())
                * &*cache.gsh(&GshIndex::new(vec![b]).unwrap());
            if lhs != rhs {
                return report.fail(mismatch(format!("a={a}, b={b}"), &lhs, &rhs));
            }
            checked += 1;
        }
    }
    report.with(Status::Pass, json!({ "pairs_checked": checked }))
}

/// Options of the full suite.
#[derive(Debug, Clone)]
pub struct SuiteOptions {
    /// Order of the exact identity checks.
    pub order: usize,
    /// Weight bound of the exhaustive identity checks.
    pub max_weight: u32,
}

impl Default for SuiteOptions {
    fn default() -> Self {
        SuiteOptions {
            order: 30,
            max_weight: 7,
        }
    }
}

/// Order used for congruences modulo `g^sh` of weight `<= 6`.
pub const CONGRUENCE_ORDER: usize = 50;
/// Order used for congruences modulo weight `<= 7` and above.
pub const WIDE_CONGRUENCE_ORDER: usize = 60;

/// Every check, with the identity checks at `opts.order` and the congruence
/// checks at the larger of `opts.order` and their fixed orders. Calls `emit`
/// as each report completes.
pub fn run_all<F: FnMut(&CheckReport)>(opts: &SuiteOptions, mut emit: F) -> Vec<CheckReport> {
    let n = opts.order;
    let w = opts.max_weight;
    let c50 = n.max(CONGRUENCE_ORDER);
    let c60 = n.max(WIDE_CONGRUENCE_ORDER);
    let mut jobs: Vec<Box<dyn Fn() -> Result<CheckReport> + Send + Sync>> = vec![
        Box::new(move || Ok(check_partition_relation(w, n))),
        Box::new(move || Ok(check_double_shuffle_g(w, n))),
        Box::new(move || Ok(check_derivative_square(w, n))),
        Box::new(move || Ok(check_gsh_routes(w + 1, n))),
        Box::new(move || Ok(check_gsh_regular(w, n))),
        Box::new(move || Ok(check_gsh_shuffle(w, n))),
        Box::new(move || Ok(check_gsh_square(w, n))),
        Box::new(move || Ok(check_relation_example(n.max(40)))),
        Box::new(move || Ok(check_thm_derivative_depth1(8, c50))),
        Box::new(move || Ok(check_remark_depth1(8, c50))),
        Box::new(move || check_prop_dgk(5, c50)),
        Box::new(move || check_lemma_g10(&[(2, 2), (2, 3), (3, 2), (3, 3)], c60)),
        Box::new(move || check_example_dgsh22(c60)),
    ];
    for (case, ks) in [
        (GdshCase::I, vec![1, 2, 2]),
        (GdshCase::I, vec![2, 1, 2]),
        (GdshCase::I, vec![2, 2, 1]),
        (GdshCase::Ii, vec![1, 2, 2, 2]),
        (GdshCase::Ii, vec![2, 2, 2, 1]),
        (GdshCase::Iii, vec![2, 1, 2, 2]),
        (GdshCase::Iii, vec![2, 2, 2, 1]),
    ] {
        jobs.push(Box::new(move || check_lemma_gdsh1(case, &ks, c60)));
    }
    for (case, ks) in [
        (DepthCase::Depth2, vec![2, 2]),
        (DepthCase::Depth2, vec![2, 3]),
        (DepthCase::Depth2, vec![3, 2]),
        (DepthCase::Depth3, vec![2, 2, 2]),
    ] {
        jobs.push(Box::new(move || check_thm_dgsh23(case, &ks, c60)));
    }
    for (case, ks) in [
        (DepthCase::Depth2, vec![2, 2]),
        (DepthCase::Depth2, vec![3, 3]),
        (DepthCase::Depth3, vec![2, 2, 3]),
    ] {
        jobs.push(Box::new(move || check_conjecture_formal(case, &ks, c60)));
    }

    let mut reports = Vec::with_capacity(jobs.len());
    for job in jobs {
        let report = job().unwrap_or_else(|err| CheckReport {
            check_id: "error".to_string(),
            parameters: Value::Null,
            status: Status::Fail,
            order: n,
            details: json!({ "error": err.to_string() }),
        });
        emit(&report);
        reports.push(report);
    }
    reports
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_checks_pass_at_small_weight() {
        for report in [
            check_partition_relation(4, 20),
            check_double_shuffle_g(5, 20),
            check_derivative_square(4, 20),
            check_gsh_routes(5, 20),
            check_gsh_regular(5, 20),
            check_gsh_shuffle(5, 20),
            check_gsh_square(5, 20),
            check_thm_derivative_depth1(3, 30),
            check_remark_depth1(3, 30),
        ] {
            assert_eq!(report.status, Status::Pass, "{}", report.to_json_line());
        }
    }

    #[test]
    fn bi_bracket_e11_equals_g2() {
        let cache = shared_cache(30);
        let lhs = cache.g(&Word::from_pairs(&[(1, 1)]).unwrap());
        let rhs = cache.g(&Word::from_ks(&[2]).unwrap());
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn remark_sum_is_theorem_rhs_as_words() {
        for k in 1..=8 {
            let mut sum = LinComb::zero();
            for i in 1..=k + 1 {
                sum += &ds(&e(&[i]), &e(&[k + 2 - i])).unwrap();
            }
            assert_eq!(sum, depth1_rhs_word(k), "k={k}");
        }
    }

    #[test]
    fn prop_dgk_k2_certificate() {
        let report = check_prop_dgk(2, 50).unwrap();
        assert_eq!(report.status, Status::Evidence);
        let entry = &report.details["entries"][1];
        assert_eq!(entry["k"], 2);
        assert_eq!(entry["certificate"]["member"], true);
        assert!(entry["certificate"]["coefficients"].as_object().is_some());
    }

    #[test]
    fn congruence_raises_saturated_order() {
        let target =
            |cache: &SeriesCache| Ok((*cache.gsh(&GshIndex::new(vec![3, 3]).unwrap())).clone());
        let cert = lower_weight_congruence(target, 6, 50).unwrap();
        assert!(cert.member);
        assert_eq!(cert.order_checked, 60);
        assert!(cert.rank + EQUATION_SURPLUS <= cert.equations);
    }

    #[test]
    fn perturbed_combination_is_not_a_member() {
        let mut combination = derivative_ds_combination(DepthCase::Depth2, &[2, 2]).unwrap();
        combination.add_scaled(&e(&[3, 3]), &int(1));
        let idx = GshIndex::new(vec![2, 2]).unwrap();
        let cert = lower_weight_congruence(
            |cache| Ok(&derivative_q(&cache.gsh(&idx)) - &cache.map_gsh(&combination)?),
            5,
            50,
        )
        .unwrap();
        assert!(!cert.member);
        assert!(cert.coefficients.is_none());
    }

    #[test]
    fn dgsh22_top_part_matches_listed_vector() {
        let top = derivative_ds_combination(DepthCase::Depth2, &[2, 2])
            .unwrap()
            .homogeneous_part(6);
        let listed: LinComb = dgsh22_listed()
            .into_iter()
            .map(|(ks, c)| (Word::from_ks(&ks).unwrap(), int(c)))
            .collect();
        assert_eq!(top, listed);
    }

    #[test]
    fn hypotheses_are_enforced() {
        assert!(gdsh1_sides(GdshCase::I, &[2, 2, 2]).is_err());
        assert!(gdsh1_sides(GdshCase::I, &[1, 1, 2]).is_err());
        assert!(gdsh1_sides(GdshCase::Ii, &[1, 2, 2]).is_err());
        assert!(derivative_ds_combination(DepthCase::Depth2, &[1, 2]).is_err());
        assert!(derivative_ds_combination(DepthCase::Depth3, &[2, 2]).is_err());
        assert!(check_lemma_g10(&[(1, 2)], 30).is_err());
    }

    #[test]
    fn single_one_in_middle_has_no_leading_term() {
        let (_, rhs) = gdsh1_sides(GdshCase::I, &[2, 1, 2]).unwrap();
        assert!(rhs.is_zero());
    }

    #[test]
    fn relation_example_is_mined() {
        let report = check_relation_example(40);
        assert_eq!(report.status, Status::Pass, "{}", report.to_json_line());
    }

    #[test]
    fn low_weight_brackets_are_independent() {
        assert!(find_relations(2, 2, 30, &[]).is_empty());
    }

    #[test]
    fn report_json_shape() {
        let line = check_gsh_regular(3, 10).to_json_line();
        let v: Value = serde_json::from_str(&line).unwrap();
        assert_eq!(v["check_id"], "gsh-regular");
        assert_eq!(v["status"], "pass");
        assert_eq!(v["order"], 10);
    }
}
