//! Lattice-sum right-hand sides of the eta-power identities and the drivers
//! that check them against powers of `eta`.
//!
//! Two families are built here:
//!
//! * the `k`-dimensional sum `sum_n (-1)^{|n|} chi_D(n) q^{L(n)}` whose value
//!   is a multiple of `eta^{2k^2-k}`, with the rational prefactor `C_k`;
//! * for a minimal model with `k` distinct weights, the sum over `N_0^k` of
//!   `prod_i chi_i(n_i) V(n_1^2, ..., n_k^2) q^{|n|^2/4st}`.
//!
//! Normalisation constants are never assumed; see [`verify`].

mod report;
mod verify;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::series::{qexp, QExponent, QSeries};
use crate::virasoro::{chi_support, MinimalModel};

pub use report::VerificationReport;
pub use verify::{empirical_constant, verify_identity, verify_identity_with, Identity, VerifyOptions};

/// One nonzero summand of a lattice sum.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LatticeTerm {
    pub n_vec: Vec<i64>,
    pub exponent: QExponent,
    pub weight: BigInt,
}

/// `chi_D(n) = prod_{i<j} ((2i-1 + n_i(4k+2))^2 - (2j-1 + n_j(4k+2))^2)`,
/// with `k = n.len()` and 1-based `i`.
pub fn chi_d(n: &[i64]) -> BigInt {
    let x = shifted_squares(n);
    let mut p = BigInt::one();
    for i in 0..x.len() {
        for j in (i + 1)..x.len() {
            p *= &x[i] - &x[j];
        }
    }
    p
}

fn shifted_squares(n: &[i64]) -> Vec<BigInt> {
    let k = n.len() as i64;
    n.iter()
        .enumerate()
        .map(|(idx, &ni)| {
            let x = BigInt::from(2 * idx as i64 + 1) + BigInt::from(ni) * (4 * k + 2);
            &x * &x
        })
        .collect()
}

/// `L(n) = (2k^2-k)/24 + sum_i ((2k+1) n_i^2 + (2i-1) n_i) / 2`.
pub fn l_exponent(n: &[i64]) -> QExponent {
    let k = n.len() as i64;
    let tail: i64 = n
        .iter()
        .enumerate()
        .map(|(idx, &ni)| coordinate_cost(k, idx + 1, ni))
        .sum();
    qexp(2 * k * k - k, 24) + QExponent::from_integer(tail)
}

/// `((2k+1) n^2 + (2i-1) n) / 2`, always a nonnegative integer for `1 <= i <= k`.
fn coordinate_cost(k: i64, i: usize, n: i64) -> i64 {
    n * ((2 * k + 1) * n + 2 * i as i64 - 1) / 2
}

/// `C_k = 1 / (2^{k(k-1)} prod_{i<j} (i-j)(i+j-1))`.
pub fn c_k_constant(k: i64) -> Result<BigRational> {
    if k < 2 {
        return Err(Error::MacdonaldNeedsK2 { k });
    }
    let mut den = BigInt::one() << (k * (k - 1)) as usize;
    for i in 1..=k {
        for j in (i + 1)..=k {
            den *= (i - j) * (i + j - 1);
        }
    }
    Ok(BigRational::new(BigInt::one(), den))
}

/// `C_k (-1)^{k(k-1)/2}`.
pub fn macdonald_prefactor(k: i64) -> Result<BigRational> {
    let c = c_k_constant(k)?;
    Ok(if (k * (k - 1) / 2) % 2 == 1 { -c } else { c })
}

/// Coordinates `n` with `coordinate_cost(k, i, n) <= budget`, in increasing order.
fn coordinate_window(k: i64, i: usize, budget: i64) -> Vec<i64> {
    let mut hi = 0;
    while coordinate_cost(k, i, hi + 1) <= budget {
        hi += 1;
    }
    let mut lo = 0;
    while coordinate_cost(k, i, lo - 1) <= budget {
        lo -= 1;
    }
    (lo..=hi).collect()
}

fn macdonald_base(k: i64) -> QExponent {
    qexp(2 * k * k - k, 24)
}

/// Largest integer `B` with `base + B < order`, or `None` when `order <= base`.
fn integer_budget(base: QExponent, order: QExponent) -> Option<i64> {
    let rel = order - base;
    (rel > QExponent::zero()).then(|| rel.ceil().to_integer() - 1)
}

/// `sum_{n in Z^k} (-1)^{|n|} chi_D(n) q^{L(n)}` without the prefactor,
/// exact below `order`.
pub fn macdonald_lattice_sum(k: i64, order: QExponent) -> Result<QSeries> {
    if k < 2 {
        return Err(Error::MacdonaldNeedsK2 { k });
    }
    let base = macdonald_base(k);
    let budget = integer_budget(base, order).ok_or(Error::InsufficientOrder { minimum: base })?;
    let windows: Vec<Vec<i64>> = (1..=k as usize)
        .map(|i| coordinate_window(k, i, budget))
        .collect();
    let mut acc = vec![BigInt::zero(); budget as usize + 1];
    let mut state = MacdonaldWalk {
        k,
        windows: &windows,
        acc: &mut acc,
        xs: Vec::with_capacity(k as usize),
        sign_sum: 0,
    };
    state.walk(0, budget, BigInt::one());
    let coeffs = acc.into_iter().map(BigRational::from_integer).collect();
    Ok(QSeries::from_dense(base, 1, coeffs, order))
}

struct MacdonaldWalk<'a> {
    k: i64,
    windows: &'a [Vec<i64>],
    acc: &'a mut Vec<BigInt>,
    xs: Vec<BigInt>,
    sign_sum: i64,
}

impl MacdonaldWalk<'_> {
    fn walk(&mut self, depth: usize, remaining: i64, partial: BigInt) {
        if depth == self.windows.len() {
            let idx = self.acc.len() - 1 - remaining as usize;
            if self.sign_sum % 2 == 0 {
                self.acc[idx] += partial;
            } else {
                self.acc[idx] -= partial;
            }
            return;
        }
        for &n in &self.windows[depth] {
            let cost = coordinate_cost(self.k, depth + 1, n);
            if cost > remaining {
                continue;
            }
            let x = BigInt::from(2 * depth as i64 + 1) + BigInt::from(n) * (4 * self.k + 2);
            let x2 = &x * &x;
            let mut next = partial.clone();
            for prev in &self.xs {
                next *= prev - &x2;
            }
            if next.is_zero() {
                continue;
            }
            self.xs.push(x2);
            self.sign_sum += n;
            self.walk(depth + 1, remaining - cost, next);
            self.sign_sum -= n;
            self.xs.pop();
        }
    }
}

/// The full right-hand side `C_k (-1)^{k(k-1)/2} sum_n ...`, exact below `order`.
pub fn macdonald_rhs(k: i64, order: QExponent) -> Result<QSeries> {
    let prefactor = macdonald_prefactor(k)?;
    Ok(macdonald_lattice_sum(k, order)?.scale(&prefactor))
}

/// Independent enumeration of the same sum over the box of per-coordinate
/// windows widened by `scale`, without budget pruning; terms at or beyond
/// `order` are dropped at the end. Used to audit the window bounds.
pub fn macdonald_rhs_window(k: i64, order: QExponent, scale: i64) -> Result<QSeries> {
    let prefactor = macdonald_prefactor(k)?;
    let base = macdonald_base(k);
    let budget = integer_budget(base, order).ok_or(Error::InsufficientOrder { minimum: base })?;
    let ranges: Vec<(i64, i64)> = (1..=k as usize)
        .map(|i| {
            let w = coordinate_window(k, i, budget);
            (w[0] * scale, w[w.len() - 1] * scale)
        })
        .collect();
    let mut terms = Vec::new();
    let mut n = ranges.iter().map(|r| r.0).collect::<Vec<_>>();
    loop {
        let e = l_exponent(&n);
        if e < order {
            let sign: i64 = if n.iter().sum::<i64>() % 2 == 0 { 1 } else { -1 };
            let w = chi_d(&n) * sign;
            if !w.is_zero() {
                terms.push((e, BigRational::from_integer(w)));
            }
        }
        // odometer step
        let mut d = 0;
        loop {
            if d == n.len() {
                return Ok(QSeries::from_terms_truncated(terms, order).scale(&prefactor));
            }
            if n[d] < ranges[d].1 {
                n[d] += 1;
                break;
            }
            n[d] = ranges[d].0;
            d += 1;
        }
    }
}

/// Nonzero summands of the `k`-dimensional sum below `order`, in lexicographic
/// order of `n`.
pub fn macdonald_terms(k: i64, order: QExponent) -> Result<Vec<LatticeTerm>> {
    let base = macdonald_base(k);
    if k < 2 {
        return Err(Error::MacdonaldNeedsK2 { k });
    }
    let budget = integer_budget(base, order).ok_or(Error::InsufficientOrder { minimum: base })?;
    let windows: Vec<Vec<i64>> = (1..=k as usize)
        .map(|i| coordinate_window(k, i, budget))
        .collect();
    let mut out = Vec::new();
    let mut n = Vec::with_capacity(k as usize);
    collect_terms(&windows, budget, &mut n, &mut out);
    Ok(out)
}

fn collect_terms(windows: &[Vec<i64>], remaining: i64, n: &mut Vec<i64>, out: &mut Vec<LatticeTerm>) {
    let k = windows.len() as i64;
    if n.len() == windows.len() {
        let sign: i64 = if n.iter().sum::<i64>() % 2 == 0 { 1 } else { -1 };
        let weight = chi_d(n) * sign;
        if !weight.is_zero() {
            out.push(LatticeTerm {
                n_vec: n.clone(),
                exponent: l_exponent(n),
                weight,
            });
        }
        return;
    }
    for &v in &windows[n.len()] {
        let cost = coordinate_cost(k, n.len() + 1, v);
        if cost <= remaining {
            n.push(v);
            collect_terms(windows, remaining - cost, n, out);
            n.pop();
        }
    }
}

/// Per-coordinate candidates `(r, chi(r))` for the distinct weights of a model.
fn general_candidates(model: &MinimalModel, bound: QExponent) -> Result<Vec<Vec<(i64, i8)>>> {
    model
        .distinct_weights()?
        .iter()
        .map(|l| {
            Ok(chi_support(model, l, bound)?
                .into_iter()
                .map(|(r, v)| (r as i64, v))
                .collect())
        })
        .collect()
}

/// `sum_{n in N_0^k} prod_i chi_i(n_i) V(n_1^2, ..., n_k^2) q^{|n|^2/4st}`,
/// exact below `order`.
pub fn general_rhs(model: &MinimalModel, order: QExponent) -> Result<QSeries> {
    if order <= QExponent::zero() {
        return Err(Error::InsufficientOrder {
            minimum: QExponent::zero(),
        });
    }
    let four_st = 4 * model.s() * model.t();
    // largest integer E with E / 4st < order
    let max_e = (order * four_st).ceil().to_integer() - 1;
    let candidates = general_candidates(model, order)?;
    let mut suffix_min = vec![0i64; candidates.len() + 1];
    for i in (0..candidates.len()).rev() {
        let m = candidates[i].iter().map(|(r, _)| r * r).min();
        match m {
            Some(m) => suffix_min[i] = suffix_min[i + 1] + m,
            None => return Ok(QSeries::zero(order)),
        }
    }
    let mut acc = vec![BigInt::zero(); max_e as usize + 1];
    let mut walk = GeneralWalk {
        candidates: &candidates,
        suffix_min: &suffix_min,
        acc: &mut acc,
        squares: Vec::with_capacity(candidates.len()),
    };
    walk.walk(0, max_e, BigInt::one());
    let coeffs = acc.into_iter().map(BigRational::from_integer).collect();
    Ok(QSeries::from_dense(QExponent::zero(), four_st, coeffs, order))
}

struct GeneralWalk<'a> {
    candidates: &'a [Vec<(i64, i8)>],
    suffix_min: &'a [i64],
    acc: &'a mut Vec<BigInt>,
    squares: Vec<i64>,
}

impl GeneralWalk<'_> {
    fn walk(&mut self, depth: usize, remaining: i64, partial: BigInt) {
        if depth == self.candidates.len() {
            let idx = self.acc.len() - 1 - remaining as usize;
            self.acc[idx] += partial;
            return;
        }
        for &(r, chi) in &self.candidates[depth] {
            let sq = r * r;
            if sq + self.suffix_min[depth + 1] > remaining {
                // candidates are increasing in r
                break;
            }
            if self.squares.contains(&sq) {
                continue;
            }
            let mut next = if chi < 0 { -partial.clone() } else { partial.clone() };
            for &prev in &self.squares {
                next *= sq - prev;
            }
            self.squares.push(sq);
            self.walk(depth + 1, remaining - sq, next);
            self.squares.pop();
        }
    }
}

/// Audit enumeration of [`general_rhs`]: each coordinate ranges over the
/// support with `r^2 < scale^2 * 4st * order`, every tuple of the box is
/// visited, and terms at or beyond `order` are dropped at the end.
pub fn general_rhs_window(model: &MinimalModel, order: QExponent, scale: i64) -> Result<QSeries> {
    if order <= QExponent::zero() {
        return Err(Error::InsufficientOrder {
            minimum: QExponent::zero(),
        });
    }
    let four_st = 4 * model.s() * model.t();
    let candidates = general_candidates(model, order * (scale * scale))?;
    if candidates.iter().any(Vec::is_empty) {
        return Ok(QSeries::zero(order));
    }
    let mut terms = Vec::new();
    let mut idx = vec![0usize; candidates.len()];
    loop {
        let rs: Vec<(i64, i8)> = idx.iter().zip(&candidates).map(|(&i, c)| c[i]).collect();
        let e: i64 = rs.iter().map(|(r, _)| r * r).sum();
        let exponent = qexp(e, four_st);
        if exponent < order {
            let mut w = BigInt::one();
            for (a, &(r, chi)) in rs.iter().enumerate() {
                if chi < 0 {
                    w = -w;
                }
                for &(p, _) in &rs[..a] {
                    w *= r * r - p * p;
                }
            }
            if !w.is_zero() {
                terms.push((exponent, BigRational::from_integer(w)));
            }
        }
        let mut d = 0;
        loop {
            if d == idx.len() {
                return Ok(QSeries::from_terms_truncated(terms, order));
            }
            if idx[d] + 1 < candidates[d].len() {
                idx[d] += 1;
                break;
            }
            idx[d] = 0;
            d += 1;
        }
    }
}
