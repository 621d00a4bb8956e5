//! Dense exact linear algebra over the rationals: row reduction, kernels and
//! span-membership certificates for truncated q-series.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::qseries::QSeries;
use crate::rational::Rational;

/// Row-major rational matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<Rational>,
}

impl QMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        QMatrix {
            rows,
            cols,
            entries: vec![Rational::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = QMatrix::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Rational::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Self {
        let cols = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|r| r.len() == cols), "ragged rows");
        QMatrix {
            rows: rows.len(),
            cols,
            entries: rows.into_iter().flatten().collect(),
        }
    }

    /// Matrix whose j-th column holds the coefficients `c_0..c_N` of `columns[j]`.
    pub fn from_series_columns(columns: &[&QSeries]) -> Self {
        let order = columns.first().map_or(0, |s| s.order());
        let mut m = QMatrix::zeros(order + 1, columns.len());
        for (j, s) in columns.iter().enumerate() {
            for (i, c) in s.coeffs().iter().enumerate() {
                m[(i, j)] = c.clone();
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[Rational] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn rank(&self) -> usize {
        pivot_columns(self).len()
    }
}

impl std::ops::Index<(usize, usize)> for QMatrix {
    type Output = Rational;
    fn index(&self, (i, j): (usize, usize)) -> &Rational {
        &self.entries[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for QMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Rational {
        &mut self.entries[i * self.cols + j]
    }
}

/// Clears denominators row by row; row scaling keeps the row space.
fn integer_rows(m: &QMatrix) -> Vec<Vec<BigInt>> {
    (0..m.rows)
        .map(|i| {
            let row = m.row(i);
            let lcm = row.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
            row.iter().map(|c| c.numer() * (&lcm / c.denom())).collect()
        })
        .collect()
}

/// Fraction-free (Bareiss) forward elimination in place; returns the pivot
/// columns. Rows below each pivot are updated in parallel.
fn bareiss_forward(a: &mut [Vec<BigInt>], cols: usize) -> Vec<usize> {
    let rows = a.len();
    let mut pivots = Vec::new();
    let mut prev = BigInt::one();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        let (top, rest) = a.split_at_mut(r + 1);
        let pivot_row = &top[r];
        let lead = &pivot_row[c];
        rest.par_iter_mut().for_each(|row| {
            let factor = std::mem::take(&mut row[c]);
            for j in (c + 1)..cols {
                let mut v = lead * &row[j];
                if !factor.is_zero() {
                    v -= &factor * &pivot_row[j];
                }
                row[j] = v / &prev;
            }
        });
        // Columns left of c are already zero below the pivot rows.
        prev = a[r][c].clone();
        pivots.push(c);
        r += 1;
    }
    pivots
}

/// Pivot columns of the echelon form. Column `j` is a pivot iff it is not
/// a combination of columns `0..j`.
pub fn pivot_columns(m: &QMatrix) -> Vec<usize> {
    bareiss_forward(&mut integer_rows(m), m.cols)
}

/// Reduced row-echelon form and pivot columns.
///
/// Forward elimination is fraction free (Bareiss) on the denominator-cleared
/// rows; the echelon form is then normalized and back-substituted over Q.
pub fn rref(m: &QMatrix) -> (QMatrix, Vec<usize>) {
    let mut a = integer_rows(m);
    let (rows, cols) = (m.rows, m.cols);
    let pivots = bareiss_forward(&mut a, cols);

    let mut out = QMatrix::zeros(rows, cols);
    for (i, row) in a.iter().enumerate().take(pivots.len()) {
        let lead = &row[pivots[i]];
        for j in 0..cols {
            out[(i, j)] = Rational::new(row[j].clone(), lead.clone());
        }
    }
    for (i, &pc) in pivots.iter().enumerate().rev() {
        for k in 0..i {
            let factor = out[(k, pc)].clone();
            if factor.is_zero() {
                continue;
            }
            for j in pc..cols {
                let v = &out[(i, j)] * &factor;
                out[(k, j)] -= v;
            }
        }
    }
    (out, pivots)
}

/// Basis of the right null space, one vector per free column.
pub fn kernel_basis(m: &QMatrix) -> Vec<Vec<Rational>> {
    let (r, pivots) = rref(m);
    let free: Vec<usize> = (0..m.cols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![Rational::zero(); m.cols];
            v[f] = Rational::one();
            for (i, &p) in pivots.iter().enumerate() {
                v[p] = -r[(i, f)].clone();
            }
            v
        })
        .collect()
}

/// Exact solution of `m x = b`, free variables set to zero; `None` if
/// inconsistent.
pub fn solve(m: &QMatrix, b: &[Rational]) -> Option<Vec<Rational>> {
    assert_eq!(b.len(), m.rows, "right-hand side length");
    let mut aug = QMatrix::zeros(m.rows, m.cols + 1);
    for i in 0..m.rows {
        for j in 0..m.cols {
            aug[(i, j)] = m[(i, j)].clone();
        }
        aug[(i, m.cols)] = b[i].clone();
    }
    let (r, pivots) = rref(&aug);
    if pivots.last() == Some(&m.cols) {
        return None;
    }
    let mut x = vec![Rational::zero(); m.cols];
    for (i, &p) in pivots.iter().enumerate() {
        x[p] = r[(i, m.cols)].clone();
    }
    Some(x)
}

fn serialize_coeffs<S: Serializer>(
    coeffs: &Option<BTreeMap<String, Rational>>,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    coeffs
        .as_ref()
        .map(|m| {
            m.iter()
                .map(|(k, v)| (k.clone(), v.to_string()))
                .collect::<BTreeMap<_, _>>()
        })
        .serialize(s)
}

/// Outcome of a span-membership query. A positive answer is consistency up
/// to `order_checked` only; a negative answer is conclusive.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SpanCertificate {
    pub member: bool,
    #[serde(serialize_with = "serialize_coeffs")]
    pub coefficients: Option<BTreeMap<String, Rational>>,
    pub order_checked: usize,
    /// Rank of the (deduplicated) basis at this order.
    pub rank: usize,
    /// Number of coefficient equations, `order_checked + 1`.
    pub equations: usize,
    /// Pairs of labels whose truncated series coincide; the second was dropped.
    pub collisions: Vec<(String, String)>,
}

impl SpanCertificate {
    /// Recomputes `sum coeff * basis` and compares it with `target`.
    pub fn reverify(&self, target: &QSeries, basis: &[(String, QSeries)]) -> bool {
        let Some(coeffs) = &self.coefficients else {
            return !self.member;
        };
        let mut acc = QSeries::zero(self.order_checked);
        for (label, c) in coeffs {
            match basis.iter().find(|(l, _)| l == label) {
                Some((_, s)) => acc.add_scaled(s, c),
                None => return false,
            }
        }
        acc == target.truncate(self.order_checked)
    }
}

/// Decides whether `target` lies in the span of the labeled `basis` series,
/// using every coefficient `c_0..c_N`.
///
/// Identical series are collapsed first and reported in `collisions`. The
/// query is rejected when the basis rank reaches `N + 1`, since the system
/// would then be solvable for any target.
pub fn span_membership(target: &QSeries, basis: &[(String, QSeries)]) -> Result<SpanCertificate> {
    let order = target.order();
    if let Some((_, s)) = basis.iter().find(|(_, s)| s.order() != order) {
        return Err(Error::OrderMismatch(order, s.order()));
    }
    let mut kept: Vec<&(String, QSeries)> = Vec::new();
    let mut collisions = Vec::new();
    for entry in basis {
        match kept.iter().find(|k| k.1 == entry.1) {
            Some(k) => collisions.push((k.0.clone(), entry.0.clone())),
            None => kept.push(entry),
        }
    }
    let columns: Vec<&QSeries> = kept.iter().map(|(_, s)| s).collect();
    let m = QMatrix::from_series_columns(&columns);
    let rank = if kept.is_empty() { 0 } else { m.rank() };
    if rank > order {
        return Err(Error::OrderTooSmall { order, rank });
    }
    let solution = if kept.is_empty() {
        target.is_zero().then(Vec::new)
    } else {
        solve(&m, target.coeffs())
    };
    let cert = match solution {
        Some(x) => SpanCertificate {
            member: true,
            coefficients: Some(
                kept.iter()
                    .zip(x)
                    .map(|((label, _), c)| (label.clone(), c))
                    .collect(),
            ),
            order_checked: order,
            rank,
            equations: order + 1,
            collisions,
        },
        None => SpanCertificate {
            member: false,
            coefficients: None,
            order_checked: order,
            rank,
            equations: order + 1,
            collisions,
        },
    };
    debug_assert!(!cert.member || cert.reverify(target, basis));
    Ok(cert)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, rat};

    fn m(rows: &[&[i64]]) -> QMatrix {
        QMatrix::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&v| int(v)).collect())
                .collect(),
        )
    }

    #[test]
    fn rref_examples() {
        let id = QMatrix::identity(3);
        assert_eq!(rref(&id), (id.clone(), vec![0, 1, 2]));
        let z = QMatrix::zeros(2, 3);
        assert_eq!(rref(&z), (z.clone(), vec![]));
        assert_eq!(
            rref(&m(&[&[1, 2], &[2, 4]])),
            (m(&[&[1, 2], &[0, 0]]), vec![0])
        );
    }

    #[test]
    fn rref_with_fractions() {
        let a = QMatrix::from_rows(vec![
            vec![rat(1, 2), rat(1, 3), int(1)],
            vec![int(2), rat(-1, 5), int(0)],
            vec![int(0), int(0), rat(7, 3)],
        ]);
        let (r, pivots) = rref(&a);
        assert_eq!(pivots, vec![0, 1, 2]);
        assert_eq!(r, QMatrix::identity(3));
    }

    #[test]
    fn kernels() {
        assert!(kernel_basis(&QMatrix::identity(3)).is_empty());
        assert_eq!(kernel_basis(&m(&[&[1, 1]])), vec![vec![int(-1), int(1)]]);
    }

    #[test]
    fn solve_inconsistent() {
        let a = m(&[&[1, 1], &[2, 2]]);
        assert_eq!(solve(&a, &[int(1), int(3)]), None);
        assert_eq!(solve(&a, &[int(1), int(2)]), Some(vec![int(1), int(0)]));
    }

    #[test]
    fn span_rejects_mismatched_orders() {
        let t = QSeries::zero(4);
        let basis = vec![("a".to_string(), QSeries::zero(5))];
        assert_eq!(span_membership(&t, &basis), Err(Error::OrderMismatch(4, 5)));
    }

    #[test]
    fn span_records_collisions() {
        let s = QSeries::from_coeffs(vec![int(0), int(1), int(0), int(0)]);
        let basis = vec![("a".to_string(), s.clone()), ("b".to_string(), s.clone())];
        let cert = span_membership(&s.scale(&int(2)), &basis).unwrap();
        assert!(cert.member);
        assert_eq!(cert.collisions, vec![("a".to_string(), "b".to_string())]);
        assert_eq!(cert.coefficients.unwrap()["a"], int(2));
    }

    #[test]
    fn zero_target_with_empty_basis() {
        let cert = span_membership(&QSeries::zero(3), &[]).unwrap();
        assert!(cert.member);
        let one = span_membership(&QSeries::one(3), &[]).unwrap();
        assert!(!one.member);
    }

    #[test]
    fn certificate_json() {
        let s = QSeries::from_coeffs(vec![int(0), int(1), int(0)]);
        let cert = span_membership(&s.scale(&rat(1, 2)), &[("g1".into(), s)]).unwrap();
        let v = serde_json::to_value(&cert).unwrap();
        assert_eq!(v["member"], true);
        assert_eq!(v["coefficients"]["g1"], "1/2");
        assert_eq!(v["order_checked"], 2);
    }
}
