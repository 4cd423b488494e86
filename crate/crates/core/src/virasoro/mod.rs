//! Virasoro minimal models `c_{s,t}`: central charges, conformal weights,
//! the distinct-weight enumeration, and weight-sum bookkeeping.
//!
//! Character builders live in [`characters`].

pub mod characters;

use std::fmt;

use num_integer::Integer;

use crate::error::{Error, Result};
use crate::series::{qexp, QExponent};

pub use characters::{
    character, character_chi_form, character_double_sum, character_lows, character_product_2k1,
    character_vector,
    characters_linearly_independent, chi_indicator, chi_support, double_sum_numerator,
    normalized_character, normalized_numerator, CharacterForm,
};

/// A minimal model `c_{s,t}` with `2 <= s < t` and `gcd(s, t) = 1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MinimalModel {
    s: i64,
    t: i64,
    k: usize,
    central_charge: QExponent,
}

/// A label `(m, n)` with its conformal weight `h` and `h_bar = h - c/24`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct WeightLabel {
    m: i64,
    n: i64,
    h: QExponent,
    h_bar: QExponent,
}

impl MinimalModel {
    /// Validates and canonicalises `(s, t)` so that `s < t`.
    pub fn new(s: i64, t: i64) -> Result<Self> {
        let (s, t) = if s < t { (s, t) } else { (t, s) };
        if s < 2 || s == t || s.gcd(&t) != 1 {
            return Err(Error::NotAMinimalModel { s, t });
        }
        let central_charge = QExponent::from_integer(1) - qexp(6 * (s - t) * (s - t), s * t);
        Ok(MinimalModel {
            s,
            t,
            k: ((s - 1) * (t - 1) / 2) as usize,
            central_charge,
        })
    }

    pub fn s(&self) -> i64 {
        self.s
    }

    pub fn t(&self) -> i64 {
        self.t
    }

    /// Number of distinct conformal weights, `(s-1)(t-1)/2`.
    pub fn k(&self) -> usize {
        self.k
    }

    pub fn central_charge(&self) -> QExponent {
        self.central_charge
    }

    /// `h^{m,n} = ((ns - mt)^2 - (s - t)^2) / (4st)`.
    pub fn weight(&self, m: i64, n: i64) -> QExponent {
        let (s, t) = (self.s, self.t);
        let a = n * s - m * t;
        qexp(a * a - (s - t) * (s - t), 4 * s * t)
    }

    pub fn label(&self, m: i64, n: i64) -> Result<WeightLabel> {
        if !(1..self.s).contains(&m) || !(1..self.t).contains(&n) {
            return Err(Error::LabelOutOfRange {
                m,
                n,
                s: self.s,
                t: self.t,
            });
        }
        let h = self.weight(m, n);
        Ok(WeightLabel {
            m,
            n,
            h,
            h_bar: h - self.central_charge / 24,
        })
    }

    /// All `(s-1)(t-1)` labels in row-major order (`m` outer, `n` inner).
    pub fn all_labels(&self) -> impl Iterator<Item = WeightLabel> + '_ {
        (1..self.s).flat_map(move |m| (1..self.t).map(move |n| self.label(m, n).unwrap()))
    }

    /// The first `k` labels in row-major order. These carry pairwise distinct
    /// weights; a repeat is reported as [`Error::DuplicateWeight`].
    pub fn distinct_weights(&self) -> Result<Vec<WeightLabel>> {
        let labels: Vec<WeightLabel> = self.all_labels().take(self.k).collect();
        for (i, a) in labels.iter().enumerate() {
            if labels[..i].iter().any(|b| b.h == a.h) {
                return Err(Error::DuplicateWeight {
                    s: self.s,
                    t: self.t,
                    h: a.h,
                });
            }
        }
        Ok(labels)
    }

    pub(crate) fn check_label(&self, label: &WeightLabel) -> Result<()> {
        let fresh = self.label(label.m, label.n)?;
        if fresh != *label {
            return Err(Error::InvalidArgument(format!(
                "label ({}, {}) does not belong to model {}",
                label.m, label.n, self
            )));
        }
        Ok(())
    }
}

impl fmt::Display for MinimalModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.s, self.t)
    }
}

impl WeightLabel {
    pub fn m(&self) -> i64 {
        self.m
    }

    pub fn n(&self) -> i64 {
        self.n
    }

    pub fn h(&self) -> QExponent {
        self.h
    }

    pub fn h_bar(&self) -> QExponent {
        self.h_bar
    }

    /// Lowest exponent of `eta * ch`, namely `h_bar + 1/24 = (ns - mt)^2 / (4st)`.
    pub fn normalized_lead(&self) -> QExponent {
        self.h_bar + qexp(1, 24)
    }
}

/// `make_model` under its operation name.
pub fn make_model(s: i64, t: i64) -> Result<MinimalModel> {
    MinimalModel::new(s, t)
}

/// Every minimal model `2 <= s < t`, `gcd(s, t) = 1`, with `s t <= max_st`,
/// ordered by `s` then `t`.
pub fn models_up_to(max_st: i64) -> Vec<MinimalModel> {
    let mut out = Vec::new();
    let mut s = 2;
    while s * (s + 1) <= max_st {
        for t in (s + 1)..=(max_st / s) {
            if let Ok(m) = MinimalModel::new(s, t) {
                out.push(m);
            }
        }
        s += 1;
    }
    out
}

/// `sum_{i=1}^k h_bar^{1,i}` for the model `(2, 2k+1)`.
pub fn strange_sum_2k1(k: usize) -> Result<QExponent> {
    if k == 0 {
        return Err(Error::InvalidArgument("k must be >= 1".into()));
    }
    let model = MinimalModel::new(2, 2 * k as i64 + 1)?;
    Ok(model
        .distinct_weights()?
        .iter()
        .map(WeightLabel::h_bar)
        .sum())
}

/// Half the sum of `h_bar^{m,n}` over all labels of `(s, t)`.
pub fn strange_sum_general(s: i64, t: i64) -> Result<QExponent> {
    let model = MinimalModel::new(s, t)?;
    let total: QExponent = model.all_labels().map(|l| l.h_bar).sum();
    Ok(total / 2)
}

/// Sum of `h_bar` over the distinct weights of a model.
pub fn strange_sum_distinct(model: &MinimalModel) -> Result<QExponent> {
    Ok(model
        .distinct_weights()?
        .iter()
        .map(WeightLabel::h_bar)
        .sum())
}

/// `2k(k-1)/24`.
pub fn strange_closed_form_2k1(k: usize) -> QExponent {
    let k = k as i64;
    qexp(2 * k * (k - 1), 24)
}

/// `(s-1)(t-1)(st-s-t-1)/48`.
pub fn strange_closed_form_general(s: i64, t: i64) -> QExponent {
    qexp((s - 1) * (t - 1) * (s * t - s - t - 1), 48)
}

/// Minimal models `(s, t)` with `(s-1)(t-1) = 2k`, and their number.
pub fn mu_count(k: usize) -> (usize, Vec<(i64, i64)>) {
    let two_k = 2 * k as i64;
    let mut solutions = Vec::new();
    let mut d = 1;
    while d * d < two_k {
        if two_k % d == 0 {
            let (s, t) = (d + 1, two_k / d + 1);
            if s.gcd(&t) == 1 {
                solutions.push((s, t));
            }
        }
        d += 1;
    }
    (solutions.len(), solutions)
}
