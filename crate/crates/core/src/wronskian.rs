//! Wronskians under the derivation `' = q d/dq`, the Vandermonde product,
//! and the term-by-term Vandermonde expansion used as an independent oracle.

use std::cmp::min;

use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::series::{exponent_to_big, lcm_i64, QExponent, QSeries};

/// An ordered list `(y_1, ..., y_k)` of series, `k >= 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SeriesVector {
    entries: Vec<QSeries>,
}

impl SeriesVector {
    pub fn new(entries: Vec<QSeries>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::InvalidArgument(
                "a series vector needs at least one entry".into(),
            ));
        }
        Ok(SeriesVector { entries })
    }

    pub fn entries(&self) -> &[QSeries] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Minimum precision over the entries.
    pub fn precision(&self) -> QExponent {
        self.entries.iter().map(QSeries::precision).min().unwrap()
    }

    /// Common exponent grid denominator of all entries.
    pub fn common_denominator(&self) -> i64 {
        self.entries
            .iter()
            .fold(1, |d, s| lcm_i64(d, s.grid_denominator()))
    }

    /// Swaps two entries.
    pub fn swapped(&self, i: usize, j: usize) -> SeriesVector {
        let mut entries = self.entries.clone();
        entries.swap(i, j);
        SeriesVector { entries }
    }
}

/// `V(x_1, ..., x_k) = prod_{j < i} (x_i - x_j)`; `1` for fewer than two points.
pub fn vandermonde(xs: &[BigRational]) -> BigRational {
    let mut v = BigRational::one();
    for i in 1..xs.len() {
        for j in 0..i {
            v *= &xs[i] - &xs[j];
        }
    }
    v
}

/// Determinant algorithm used by [`wronskian_with`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum DetMethod {
    /// Cofactor expansion for `k <= 4`, elimination above.
    #[default]
    Auto,
    Cofactor,
    Elimination,
}

/// `det [theta^r y_c]_{r, c}`, exact below the precision it reports.
pub fn wronskian(v: &SeriesVector) -> QSeries {
    wronskian_with(v, DetMethod::Auto)
}

pub fn wronskian_with(v: &SeriesVector, method: DetMethod) -> QSeries {
    let rows = derivative_rows(v);
    let cofactor = match method {
        DetMethod::Auto => v.len() <= 4,
        DetMethod::Cofactor => true,
        DetMethod::Elimination => false,
    };
    if cofactor {
        let cols: Vec<usize> = (0..v.len()).collect();
        cofactor_det(&rows, 0, &cols)
    } else {
        elimination_det(rows)
    }
}

fn derivative_rows(v: &SeriesVector) -> Vec<Vec<QSeries>> {
    let mut rows = vec![v.entries.clone()];
    for _ in 1..v.len() {
        let next = rows.last().unwrap().iter().map(QSeries::theta_derive).collect();
        rows.push(next);
    }
    rows
}

/// Laplace expansion along row `row` over the remaining columns `cols`.
fn cofactor_det(m: &[Vec<QSeries>], row: usize, cols: &[usize]) -> QSeries {
    if cols.len() == 1 {
        return m[row][cols[0]].clone();
    }
    let mut acc: Option<QSeries> = None;
    for (idx, &c) in cols.iter().enumerate() {
        let rest: Vec<usize> = cols.iter().copied().filter(|&x| x != c).collect();
        let term = m[row][c].mul(&cofactor_det(m, row + 1, &rest));
        let term = if idx % 2 == 1 { -term } else { term };
        acc = Some(match acc {
            None => term,
            Some(a) => a.add(&term),
        });
    }
    acc.unwrap()
}

/// Gaussian elimination over Laurent series, pivoting on the row of lowest
/// valuation in each column. Precision is tracked by the series operations.
fn elimination_det(mut m: Vec<Vec<QSeries>>) -> QSeries {
    let k = m.len();
    let mut det: Option<QSeries> = None;
    let mut negate = false;
    for c in 0..k {
        let pivot = (c..k)
            .filter(|&r| !m[r][c].is_zero())
            .min_by_key(|&r| m[r][c].lowest_exponent().unwrap());
        let Some(p) = pivot else {
            // the remaining minor is O(q^bound)
            let col_bound = (c..k).map(|r| m[r][c].precision()).min().unwrap();
            let rest: QExponent = ((c + 1)..k)
                .map(|j| (c..k).map(|r| m[r][j].low_bound()).min().unwrap())
                .sum();
            let zero = QSeries::zero(col_bound + rest);
            return match det {
                None => zero,
                Some(d) => d.mul(&zero),
            };
        };
        if p != c {
            m.swap(p, c);
            negate = !negate;
        }
        let inv = m[c][c]
            .invert()
            .expect("pivot is nonzero at its precision");
        for r in (c + 1)..k {
            let f = m[r][c].mul(&inv);
            for j in (c + 1)..k {
                let t = f.mul(&m[c][j]);
                m[r][j] = m[r][j].sub(&t);
            }
        }
        det = Some(match det {
            None => m[c][c].clone(),
            Some(d) => d.mul(&m[c][c]),
        });
    }
    let det = det.unwrap();
    if negate {
        -det
    } else {
        det
    }
}

/// The Wronskian as the multi-sum over term tuples
/// `sum V(e_1, ..., e_k) a_1 ... a_k q^(e_1 + ... + e_k)`.
///
/// Exact below `sum_i low_i + min_i (P_i - low_i)`.
pub fn wronskian_vandermonde_expand(v: &SeriesVector) -> QSeries {
    let lows: Vec<QExponent> = v.entries.iter().map(QSeries::low_bound).collect();
    let total_low: QExponent = lows.iter().copied().sum();
    let precision = total_low
        + v.entries
            .iter()
            .zip(&lows)
            .map(|(s, l)| s.precision() - l)
            .min()
            .unwrap();
    if v.entries.iter().any(QSeries::is_zero) {
        return QSeries::zero(precision);
    }
    let terms: Vec<Vec<(QExponent, BigRational)>> = v
        .entries
        .iter()
        .map(|s| s.terms().map(|(e, c)| (e, c.clone())).collect())
        .collect();
    // suffix_low[i] = sum of lows of entries i..k
    let mut suffix_low = vec![QExponent::zero(); lows.len() + 1];
    for i in (0..lows.len()).rev() {
        suffix_low[i] = suffix_low[i + 1] + lows[i];
    }
    let mut out = Vec::new();
    let mut chosen: Vec<(QExponent, BigRational)> = Vec::with_capacity(terms.len());
    expand_rec(&terms, &suffix_low, precision, QExponent::zero(), &mut chosen, &mut out);
    QSeries::from_terms_truncated(out, precision)
}

fn expand_rec(
    terms: &[Vec<(QExponent, BigRational)>],
    suffix_low: &[QExponent],
    precision: QExponent,
    partial: QExponent,
    chosen: &mut Vec<(QExponent, BigRational)>,
    out: &mut Vec<(QExponent, BigRational)>,
) {
    let depth = chosen.len();
    if depth == terms.len() {
        let xs: Vec<BigRational> = chosen.iter().map(|(e, _)| exponent_to_big(*e)).collect();
        let v = vandermonde(&xs);
        if !v.is_zero() {
            let weight = chosen.iter().fold(v, |acc, (_, c)| acc * c);
            out.push((partial, weight));
        }
        return;
    }
    for (e, c) in &terms[depth] {
        if partial + e + suffix_low[depth + 1] >= precision {
            break;
        }
        chosen.push((*e, c.clone()));
        expand_rec(terms, suffix_low, precision, partial + e, chosen, out);
        chosen.pop();
    }
}

/// Checks `theta(W) + f1 * W = 0` below `order`, the derivative form of
/// Abel's identity `W = C exp(-integral f1)`.
pub fn abel_log_derivative_check(
    v: &SeriesVector,
    expected_f1: &QSeries,
    order: QExponent,
) -> Result<bool> {
    let w = wronskian(v);
    if w.is_zero() {
        return Err(Error::DegenerateFundamentalSystem {
            precision: w.precision(),
        });
    }
    let lhs = w.theta_derive().add(&expected_f1.mul(&w));
    if lhs.precision() < order {
        return Err(Error::InsufficientPrecision {
            bound: order,
            available: lhs.precision(),
        });
    }
    Ok(lhs.first_difference(&QSeries::zero(order), order).is_none())
}

/// `h_i = sum_j T_ij f_j`.
pub fn scale_by_matrix(t: &[Vec<BigRational>], v: &SeriesVector) -> Result<SeriesVector> {
    let k = v.len();
    if t.len() != k || t.iter().any(|row| row.len() != k) {
        return Err(Error::InvalidArgument(format!(
            "matrix must be {k}x{k} to act on a vector of length {k}"
        )));
    }
    let p = v.precision();
    let entries = t
        .iter()
        .map(|row| {
            row.iter()
                .zip(&v.entries)
                .fold(QSeries::zero(p), |acc, (c, y)| acc.add(&y.scale(c)))
        })
        .collect();
    SeriesVector::new(entries)
}

/// Determinant of a square rational matrix by exact elimination.
pub fn determinant(t: &[Vec<BigRational>]) -> BigRational {
    let mut m: Vec<Vec<BigRational>> = t.to_vec();
    let k = m.len();
    let mut det = BigRational::one();
    for c in 0..k {
        let Some(p) = (c..k).find(|&r| !m[r][c].is_zero()) else {
            return BigRational::zero();
        };
        if p != c {
            m.swap(p, c);
            det = -det;
        }
        for r in (c + 1)..k {
            if m[r][c].is_zero() {
                continue;
            }
            let f = &m[r][c] / &m[c][c];
            for j in c..k {
                let d = &f * &m[c][j];
                m[r][j] -= d;
            }
        }
        det *= &m[c][c];
    }
    det
}

/// Common precision of two results; the range on which they are comparable.
pub fn comparable_precision(a: &QSeries, b: &QSeries) -> QExponent {
    min(a.precision(), b.precision())
}

/// Precision each entry needs for the cofactor Wronskian of series with
/// lowest exponents `lows` to be exact below `bound`:
/// `bound - sum(lows) + max(lows)`.
pub fn entry_precision_for(bound: QExponent, lows: &[QExponent]) -> QExponent {
    let total: QExponent = lows.iter().copied().sum();
    let top = lows.iter().copied().max().unwrap_or_else(QExponent::zero);
    bound - total + top
}
