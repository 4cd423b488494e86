//! Characters `ch_{c,h}(q) = tr q^(L0 - c/24)` of minimal-model modules in
//! three independent forms:
//!
//! * the double sum over `r in Z` divided by the Euler product,
//! * the single sum weighted by the residue indicator `chi_{2st}` divided by `eta`,
//! * for `s = 2` only, the infinite product over `n != 0, +-i (mod 2k+1)`.

use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::{MinimalModel, WeightLabel};
use crate::error::{Error, Result};
use crate::eta::{eta_series, euler_product, finite_product};
use crate::series::{qexp, QExponent, QSeries};
use crate::wronskian::SeriesVector;

/// Value of `chi_{2st}^{h_{m,n}}(r)`: `+1` on `r = +-(ns - mt) mod 2st`,
/// `-1` on `r = +-(ns + mt) mod 2st`, `0` elsewhere.
pub fn chi_indicator(model: &MinimalModel, label: &WeightLabel, r: u64) -> Result<i8> {
    model.check_label(label)?;
    let (s, t) = (model.s(), model.t());
    let modulus = 2 * s * t;
    let a = label.n() * s - label.m() * t;
    let b = label.n() * s + label.m() * t;
    let r = (r % modulus as u64) as i64;
    let hits = |x: i64| r == x.rem_euclid(modulus) || r == (-x).rem_euclid(modulus);
    match (hits(a), hits(b)) {
        (true, true) => Err(Error::DegenerateChi { r: r as u64 }),
        (true, false) => Ok(1),
        (false, true) => Ok(-1),
        (false, false) => Ok(0),
    }
}

/// Nonnegative `r` with `r^2 < 4st * bound` where the indicator is nonzero,
/// in increasing order, paired with the indicator value.
pub fn chi_support(
    model: &MinimalModel,
    label: &WeightLabel,
    bound: QExponent,
) -> Result<Vec<(u64, i8)>> {
    let four_st = 4 * model.s() * model.t();
    let limit = bound * four_st;
    let modulus = (2 * model.s() * model.t()) as u64;
    let a = (label.n() * model.s() - label.m() * model.t()).unsigned_abs() % modulus;
    let b = (label.n() * model.s() + label.m() * model.t()).unsigned_abs() % modulus;
    let mut residues = vec![a, (modulus - a) % modulus, b, (modulus - b) % modulus];
    residues.sort_unstable();
    residues.dedup();
    let mut out = Vec::new();
    let mut block = 0u64;
    loop {
        let mut any = false;
        for &res in &residues {
            let r = block * modulus + res;
            if QExponent::from_integer((r * r) as i64) < limit {
                any = true;
                let v = chi_indicator(model, label, r)?;
                if v != 0 {
                    out.push((r, v));
                }
            }
        }
        if !any {
            break;
        }
        block += 1;
    }
    Ok(out)
}

/// `sum_{r>=0} chi(r) q^(r^2/4st)`, exact below `order`. This equals
/// `eta * ch` and has integer coefficients.
pub fn normalized_numerator(
    model: &MinimalModel,
    label: &WeightLabel,
    order: QExponent,
) -> Result<QSeries> {
    let four_st = 4 * model.s() * model.t();
    let terms = chi_support(model, label, order)?
        .into_iter()
        .map(|(r, v)| {
            (
                qexp((r * r) as i64, four_st),
                BigRational::from_integer(BigInt::from(v)),
            )
        });
    QSeries::from_terms(terms, order)
}

/// `sum_{r in Z} (q^(st r^2 + r(ns-mt)) - q^(st r^2 + r(ns+mt) + mn))`,
/// exact below `precision`. Only non-negative integer exponents occur.
pub fn double_sum_numerator(
    model: &MinimalModel,
    label: &WeightLabel,
    precision: QExponent,
) -> Result<QSeries> {
    model.check_label(label)?;
    let st = model.s() * model.t();
    let a = label.n() * model.s() - label.m() * model.t();
    let b = label.n() * model.s() + label.m() * model.t();
    let mn = label.m() * label.n();
    let mut terms = Vec::new();
    let below = |e: i64| QExponent::from_integer(e) < precision;
    // both exponents grow with |r| once |r| >= 1
    let mut r = 0i64;
    loop {
        let mut any = false;
        let signs: &[i64] = if r == 0 { &[1] } else { &[1, -1] };
        for &sg in signs {
            let rr = sg * r;
            let plus = st * rr * rr + rr * a;
            let minus = st * rr * rr + rr * b + mn;
            debug_assert!(plus >= 0 && minus >= 0);
            if below(plus) {
                any = true;
                terms.push((QExponent::from_integer(plus), BigRational::one()));
            }
            if below(minus) {
                any = true;
                terms.push((QExponent::from_integer(minus), -BigRational::one()));
            }
        }
        if !any && r > 0 {
            break;
        }
        r += 1;
    }
    QSeries::from_terms(terms, precision)
}

fn require_above(order: QExponent, minimum: QExponent) -> Result<()> {
    if order > minimum {
        Ok(())
    } else {
        Err(Error::InsufficientOrder { minimum })
    }
}

/// Character from the double sum divided by `(q)_inf`, with prefactor
/// `q^(h - c/24)`; exact below `order`.
pub fn character_double_sum(
    model: &MinimalModel,
    label: &WeightLabel,
    order: QExponent,
) -> Result<QSeries> {
    model.check_label(label)?;
    let h_bar = label.h_bar();
    require_above(order, h_bar)?;
    let rel = order - h_bar;
    let numerator = double_sum_numerator(model, label, rel)?;
    let denominator = euler_product(rel).invert()?;
    Ok(numerator.mul(&denominator).shift(h_bar))
}

/// Character as `sum_{r>=0} chi(r) q^(r^2/4st) / eta`; exact below `order`.
pub fn character_chi_form(
    model: &MinimalModel,
    label: &WeightLabel,
    order: QExponent,
) -> Result<QSeries> {
    model.check_label(label)?;
    require_above(order, label.h_bar())?;
    let lead = label.normalized_lead();
    let numerator = normalized_numerator(model, label, order + qexp(1, 24))?;
    let eta = eta_series(order - lead + qexp(1, 12))?;
    Ok(numerator.mul(&eta.invert()?))
}

/// Product form for `c_{2,2k+1}` and label `(1, i)`:
/// `q^(h - c/24) prod_{n != 0, +-i mod 2k+1} 1/(1 - q^n)`.
pub fn character_product_2k1(k: usize, i: usize, order: QExponent) -> Result<QSeries> {
    if k == 0 || i == 0 || i > k {
        return Err(Error::InvalidArgument(format!(
            "product form needs 1 <= i <= k, got k = {k}, i = {i}"
        )));
    }
    let modulus = 2 * k + 1;
    let model = MinimalModel::new(2, modulus as i64)?;
    let label = model.label(1, i as i64)?;
    let h_bar = label.h_bar();
    require_above(order, h_bar)?;
    let rel = order - h_bar;
    let len = if rel > QExponent::zero() {
        rel.ceil().to_integer() as usize
    } else {
        0
    };
    let retained = (1..len).filter(|n| {
        let r = n % modulus;
        r != 0 && r != i && r != modulus - i
    });
    let coeffs = finite_product(len, retained)
        .into_iter()
        .map(BigRational::from_integer)
        .collect();
    let product = QSeries::from_dense(QExponent::zero(), 1, coeffs, rel);
    Ok(product.invert()?.shift(h_bar))
}

/// `eta * ch`, computed as an honest product with the double-sum character;
/// exact below `order`.
pub fn normalized_character(
    model: &MinimalModel,
    label: &WeightLabel,
    order: QExponent,
) -> Result<QSeries> {
    model.check_label(label)?;
    require_above(order, label.normalized_lead())?;
    let ch = character_double_sum(model, label, order - qexp(1, 24))?;
    let eta = eta_series(order - label.h_bar())?;
    Ok(eta.mul(&ch))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CharacterForm {
    DoubleSum,
    Chi,
    Product,
}

impl FromStr for CharacterForm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "double" => Ok(CharacterForm::DoubleSum),
            "chi" => Ok(CharacterForm::Chi),
            "product" => Ok(CharacterForm::Product),
            _ => Err(Error::InvalidArgument(format!(
                "unknown character form `{s}` (expected double, chi or product)"
            ))),
        }
    }
}

/// Dispatches to one of the three character builders.
pub fn character(
    model: &MinimalModel,
    label: &WeightLabel,
    order: QExponent,
    form: CharacterForm,
) -> Result<QSeries> {
    match form {
        CharacterForm::DoubleSum => character_double_sum(model, label, order),
        CharacterForm::Chi => character_chi_form(model, label, order),
        CharacterForm::Product => {
            if model.s() != 2 || label.m() != 1 || label.n() > model.k() as i64 {
                return Err(Error::InvalidArgument(format!(
                    "product form exists only for s = 2 and labels (1, i), i <= k; got {} with ({}, {})",
                    model,
                    label.m(),
                    label.n()
                )));
            }
            character_product_2k1(model.k(), label.n() as usize, order)
        }
    }
}

/// Lowest exponents of the characters of the distinct weights (`h_bar`), or
/// of `eta * ch` when `normalized`.
pub fn character_lows(model: &MinimalModel, normalized: bool) -> Result<Vec<QExponent>> {
    Ok(model
        .distinct_weights()?
        .iter()
        .map(|l| if normalized { l.normalized_lead() } else { l.h_bar() })
        .collect())
}

/// The characters of the distinct weights (or `eta * ch` when `normalized`),
/// each exact below `precision`, as a Wronskian input.
pub fn character_vector(
    model: &MinimalModel,
    normalized: bool,
    precision: QExponent,
) -> Result<SeriesVector> {
    let entries = model
        .distinct_weights()?
        .iter()
        .map(|l| {
            if normalized {
                normalized_character(model, l, precision)
            } else {
                character_double_sum(model, l, precision)
            }
        })
        .collect::<Result<Vec<_>>>()?;
    SeriesVector::new(entries)
}

/// Certifies linear independence of the normalised characters of a model:
/// the coefficient matrix over all exponents below `order` has rank `k`.
pub fn characters_linearly_independent(model: &MinimalModel, order: QExponent) -> Result<bool> {
    let labels = model.distinct_weights()?;
    let series: Vec<QSeries> = labels
        .iter()
        .map(|l| normalized_numerator(model, l, order))
        .collect::<Result<_>>()?;
    let mut exponents: Vec<QExponent> = series
        .iter()
        .flat_map(|s| s.terms().map(|(e, _)| e).collect::<Vec<_>>())
        .collect();
    exponents.sort();
    exponents.dedup();
    let mut rows: Vec<Vec<BigRational>> = series
        .iter()
        .map(|s| {
            exponents
                .iter()
                .map(|e| s.coefficient(*e).unwrap())
                .collect()
        })
        .collect();
    Ok(rank(&mut rows) == labels.len())
}

fn rank(rows: &mut [Vec<BigRational>]) -> usize {
    let ncols = rows.first().map_or(0, Vec::len);
    let mut r = 0;
    for c in 0..ncols {
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        for i in (r + 1)..rows.len() {
            if rows[i][c].is_zero() {
                continue;
            }
            let f = &rows[i][c] / &rows[r][c];
            for j in c..ncols {
                let d = &f * &rows[r][j];
                rows[i][j] -= d;
            }
        }
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::int;
    use crate::virasoro::models_up_to;

    fn q(e: i64) -> QExponent {
        QExponent::from_integer(e)
    }

    #[test]
    fn chi_residues_for_lee_yang() {
        let model = MinimalModel::new(2, 5).unwrap();
        let l = model.label(1, 1).unwrap();
        for r in [3, 17, 23] {
            assert_eq!(chi_indicator(&model, &l, r).unwrap(), 1);
        }
        for r in [7, 13, 27] {
            assert_eq!(chi_indicator(&model, &l, r).unwrap(), -1);
        }
        for r in [0, 1, 2, 4, 5, 10] {
            assert_eq!(chi_indicator(&model, &l, r).unwrap(), 0);
        }
    }

    #[test]
    fn ising_vacuum_has_no_level_one_state() {
        let model = MinimalModel::new(3, 4).unwrap();
        let vac = model.label(1, 1).unwrap();
        let ch = character_double_sum(&model, &vac, q(6)).unwrap();
        let pre = qexp(-1, 48);
        assert_eq!(ch.lowest_exponent(), Some(pre));
        assert_eq!(ch.coefficient(pre).unwrap(), int(1));
        assert_eq!(ch.coefficient(pre + q(1)).unwrap(), int(0));
        assert_eq!(ch.coefficient(pre + q(2)).unwrap(), int(1));
    }

    #[test]
    fn double_sum_numerator_starts_with_one() {
        let model = MinimalModel::new(3, 5).unwrap();
        for l in model.distinct_weights().unwrap() {
            let num = double_sum_numerator(&model, &l, q(30)).unwrap();
            assert_eq!(num.coefficient(q(0)).unwrap(), int(1));
            assert_eq!(num.lowest_exponent(), Some(q(0)));
            assert_eq!(num.coefficient(q(l.m() * l.n())).unwrap(), int(-1));
            assert!(num.terms().all(|(e, _)| e >= q(0)));
        }
    }

    #[test]
    fn numerator_lead_matches_prefactor() {
        for model in models_up_to(60) {
            for l in model.distinct_weights().unwrap() {
                let a = l.n() * model.s() - l.m() * model.t();
                let lead = qexp(a * a, 4 * model.s() * model.t());
                let y = normalized_numerator(&model, &l, lead + q(1)).unwrap();
                assert_eq!(y.lowest_exponent(), Some(lead));
                assert_eq!(lead, l.h_bar() + qexp(1, 24));
            }
        }
    }

    #[test]
    fn three_forms_agree_for_s_two() {
        for k in 1..=4usize {
            let model = MinimalModel::new(2, 2 * k as i64 + 1).unwrap();
            for l in model.distinct_weights().unwrap() {
                let order = q(40);
                let d = character_double_sum(&model, &l, order).unwrap();
                let c = character_chi_form(&model, &l, order).unwrap();
                let p = character_product_2k1(k, l.n() as usize, order).unwrap();
                assert_eq!(d, c, "double vs chi for {model} {:?}", (l.m(), l.n()));
                assert_eq!(d, p, "double vs product for {model} {:?}", (l.m(), l.n()));
            }
        }
    }

    #[test]
    fn ising_forms_agree() {
        let model = MinimalModel::new(3, 4).unwrap();
        for l in model.distinct_weights().unwrap() {
            let d = character_double_sum(&model, &l, q(50)).unwrap();
            let c = character_chi_form(&model, &l, q(50)).unwrap();
            assert_eq!(d, c);
        }
    }

    #[test]
    fn product_form_brute_force() {
        // Rogers-Ramanujan: 1 / prod_{n = +-1 mod 5} (1 - q^n), by counting partitions
        // into parts = +-1 mod 5
        fn count(n: usize, max_part: usize) -> i64 {
            if n == 0 {
                return 1;
            }
            (1..=max_part.min(n))
                .filter(|p| p % 5 == 1 || p % 5 == 4)
                .map(|p| count(n - p, p))
                .sum()
        }
        let p = character_product_2k1(2, 2, q(20)).unwrap();
        let pre = p.lowest_exponent().unwrap();
        assert_eq!(pre, qexp(-1, 5) + qexp(22, 5 * 24));
        for n in 0..19 {
            assert_eq!(p.coefficient(pre + q(n as i64)).unwrap(), int(count(n, n)));
        }
    }

    #[test]
    fn product_form_empty_truncation() {
        let model = MinimalModel::new(2, 7).unwrap();
        let l = model.label(1, 2).unwrap();
        let p = character_product_2k1(3, 2, l.h_bar() + qexp(1, 2)).unwrap();
        assert_eq!(p.num_terms(), 1);
        assert_eq!(p.lowest_exponent(), Some(l.h_bar()));
    }

    #[test]
    fn normalized_character_is_the_numerator() {
        for (s, t) in [(2, 5), (3, 4), (2, 7), (3, 5)] {
            let model = MinimalModel::new(s, t).unwrap();
            for l in model.distinct_weights().unwrap() {
                let a = normalized_character(&model, &l, q(25)).unwrap();
                let b = normalized_numerator(&model, &l, q(25)).unwrap();
                assert_eq!(a, b);
                if s == 2 {
                    assert!(a.terms().all(|(_, c)| c.is_integer() && c.numer().magnitude() <= &1u32.into()));
                }
            }
        }
    }

    #[test]
    fn lee_yang_numerator_matches_theta_exponents() {
        let k = 2i64;
        let model = MinimalModel::new(2, 5).unwrap();
        let l = model.label(1, 1).unwrap();
        let order = q(30);
        let y = normalized_numerator(&model, &l, order).unwrap();
        let i = 1i64;
        let terms = (-10i64..=10).map(|n| {
            let e = l.normalized_lead() + qexp((2 * (k - i) + 1) * n + (2 * k + 1) * n * n, 2);
            (e, int(if n % 2 == 0 { 1 } else { -1 }))
        });
        assert_eq!(y, QSeries::from_terms_truncated(terms, order));
    }

    #[test]
    fn ising_weber_combinations() {
        use crate::eta::{weber_series, WeberKind};
        let model = MinimalModel::new(3, 4).unwrap();
        let order = q(20);
        let ch = |m, n| character_double_sum(&model, &model.label(m, n).unwrap(), order).unwrap();
        // (1,1): h = 0, (1,3): h = 1/2, (1,2): h = 1/16
        let (ch0, ch_half, ch_16) = (ch(1, 1), ch(1, 3), ch(1, 2));
        assert_eq!(ch0.add(&ch_half), weber_series(WeberKind::F, order).unwrap());
        assert_eq!(ch0.sub(&ch_half), weber_series(WeberKind::F1, order).unwrap());
        assert_eq!(ch_16, weber_series(WeberKind::F2, order).unwrap());
    }

    #[test]
    fn characters_are_nonnegative() {
        for model in models_up_to(40) {
            for l in model.distinct_weights().unwrap() {
                let ch = character_double_sum(&model, &l, q(15)).unwrap();
                assert_eq!(ch.lowest_exponent(), Some(l.h_bar()));
                for (e, c) in ch.terms() {
                    assert!(c.is_integer() && *c > BigRational::zero());
                    assert!((e - l.h_bar()).is_integer());
                }
            }
        }
    }

    #[test]
    fn independence_certificate() {
        for model in models_up_to(40) {
            assert!(characters_linearly_independent(&model, q(12)).unwrap(), "{model}");
        }
    }

    #[test]
    fn foreign_label_rejected() {
        let a = MinimalModel::new(2, 5).unwrap();
        let b = MinimalModel::new(3, 4).unwrap();
        let l = b.label(1, 2).unwrap();
        assert!(character_double_sum(&a, &l, q(3)).is_err());
    }
}
