//! Dedekind eta, the quasimodular Eisenstein series `G2~`, Weber's functions
//! and the sum sides of Euler's and Jacobi's identities.
//!
//! Every infinite sum or product is cut at the first index whose smallest
//! contribution reaches the requested order, so the returned series is exact
//! below that order. The `*_bound` helpers expose those cut points.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::series::{qexp, QExponent, QSeries};

fn require_above(order: QExponent, minimum: QExponent) -> Result<()> {
    if order > minimum {
        Ok(())
    } else {
        Err(Error::InsufficientOrder { minimum })
    }
}

fn int_coeffs(v: Vec<BigInt>) -> Vec<BigRational> {
    v.into_iter().map(BigRational::from_integer).collect()
}

/// Number of integer exponents `0 <= m` with `m < bound`.
fn integer_steps(bound: QExponent) -> usize {
    if bound <= QExponent::zero() {
        0
    } else {
        bound.ceil().to_integer() as usize
    }
}

/// Dense coefficients of `prod_{i in factors} (1 - q^i)` below `q^len`.
pub(crate) fn finite_product(len: usize, factors: impl Iterator<Item = usize>) -> Vec<BigInt> {
    let mut c = vec![BigInt::zero(); len];
    if len == 0 {
        return c;
    }
    c[0] = BigInt::one();
    for i in factors {
        if i == 0 || i >= len {
            continue;
        }
        for m in (i..len).rev() {
            let (lo, hi) = c.split_at_mut(m);
            hi[0] -= &lo[m - i];
        }
    }
    c
}

/// Largest factor index used by [`eta_series`]: factors `(1 - q^i)` with
/// `i >= order - 1/24` cannot touch exponents below `order`.
pub fn euler_factor_bound(order: QExponent) -> usize {
    integer_steps(order - qexp(1, 24)).saturating_sub(1)
}

/// The Euler product `(q)_inf = prod_{i>=1} (1 - q^i)`, exact below `precision`.
pub fn euler_product(precision: QExponent) -> QSeries {
    let len = integer_steps(precision);
    let coeffs = finite_product(len, 1..len);
    QSeries::from_dense(QExponent::zero(), 1, int_coeffs(coeffs), precision)
}

/// `eta(q) = q^(1/24) prod_{i>=1} (1 - q^i)`, exact below `order`.
pub fn eta_series(order: QExponent) -> Result<QSeries> {
    require_above(order, qexp(1, 24))?;
    Ok(euler_product(order - qexp(1, 24)).shift(qexp(1, 24)))
}

/// Largest `|n|` used by [`pentagonal_sum_series`].
pub fn pentagonal_bound(order: QExponent) -> i64 {
    let rel = order - qexp(1, 24);
    let mut n = 0i64;
    while QExponent::from_integer((3 * (n + 1) * (n + 1) - (n + 1)) / 2) < rel {
        n += 1;
    }
    n
}

/// `q^(1/24) sum_{n in Z} (-1)^n q^((3n^2 - n)/2)`, exact below `order`.
pub fn pentagonal_sum_series(order: QExponent) -> Result<QSeries> {
    require_above(order, qexp(1, 24))?;
    let bound = pentagonal_bound(order);
    let terms = (-bound..=bound).map(|n| {
        let sign = if n % 2 == 0 { 1 } else { -1 };
        (
            qexp(1, 24) + QExponent::from_integer((3 * n * n - n) / 2),
            BigRational::from_integer(sign.into()),
        )
    });
    Ok(QSeries::from_terms_truncated(terms, order))
}

/// Largest `m` used by [`jacobi_cube_series`].
pub fn jacobi_bound(order: QExponent) -> i64 {
    let rel = order - qexp(1, 8);
    let mut m = 0i64;
    while QExponent::from_integer((m + 1) * (m + 2) / 2) < rel {
        m += 1;
    }
    m
}

/// `q^(1/8) sum_{m>=0} (-1)^m (2m+1) q^(m(m+1)/2)`, exact below `order`.
pub fn jacobi_cube_series(order: QExponent) -> Result<QSeries> {
    require_above(order, qexp(1, 8))?;
    let terms = (0..=jacobi_bound(order)).map(|m| {
        let sign = if m % 2 == 0 { 1 } else { -1 };
        (
            qexp(1, 8) + QExponent::from_integer(m * (m + 1) / 2),
            BigRational::from_integer((sign * (2 * m + 1)).into()),
        )
    });
    Ok(QSeries::from_terms_truncated(terms, order))
}

/// Divisor sums `sigma_1(m)` for `0 <= m < len` (entry 0 unused).
pub fn divisor_sums(len: usize) -> Vec<u64> {
    let mut sigma = vec![0u64; len];
    for d in 1..len {
        for m in (d..len).step_by(d) {
            sigma[m] += d as u64;
        }
    }
    sigma
}

/// `G2~(q) = -1/12 + 2 sum_{n>=1} n q^n / (1 - q^n)`, expanded through divisor
/// sums: the coefficient of `q^m` is `2 sigma_1(m)`.
pub fn eisenstein_g2(order: QExponent) -> Result<QSeries> {
    require_above(order, QExponent::zero())?;
    let len = integer_steps(order);
    let sigma = divisor_sums(len);
    let mut coeffs: Vec<BigRational> = sigma
        .iter()
        .map(|&s| BigRational::from_integer(BigInt::from(2 * s)))
        .collect();
    coeffs[0] = BigRational::new(BigInt::from(-1), BigInt::from(12));
    Ok(QSeries::from_dense(QExponent::zero(), 1, coeffs, order))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum WeberKind {
    /// `q^(-1/48) prod_{n>=0} (1 + q^(n+1/2))`
    F,
    /// `q^(-1/48) prod_{n>=0} (1 - q^(n+1/2))`
    F1,
    /// `q^(1/24) prod_{n>=0} (1 + q^(n+1))`
    F2,
}

impl WeberKind {
    pub fn prefactor(self) -> QExponent {
        match self {
            WeberKind::F | WeberKind::F1 => qexp(-1, 48),
            WeberKind::F2 => qexp(1, 24),
        }
    }
}

/// Weber's normalised functions on the `q^(1/48)` grid, exact below `order`.
pub fn weber_series(which: WeberKind, order: QExponent) -> Result<QSeries> {
    let pre = which.prefactor();
    require_above(order, pre)?;
    // work in x = q^(1/2); every factor is (1 +- x^j)
    let len = integer_steps((order - pre) * 2);
    let mut c = vec![BigInt::zero(); len];
    c[0] = BigInt::one();
    let (factors, sign): (Box<dyn Iterator<Item = usize>>, i32) = match which {
        WeberKind::F => (Box::new((1..len).step_by(2)), 1),
        WeberKind::F1 => (Box::new((1..len).step_by(2)), -1),
        WeberKind::F2 => (Box::new((2..len).step_by(2)), 1),
    };
    for j in factors {
        for m in (j..len).rev() {
            let (lo, hi) = c.split_at_mut(m);
            if sign > 0 {
                hi[0] += &lo[m - j];
            } else {
                hi[0] -= &lo[m - j];
            }
        }
    }
    // the q^(1/48) grid is the common refinement of the prefactor and the half steps
    let mut on_48 = vec![BigRational::zero(); (len.max(1) - 1) * 24 + 1];
    for (m, v) in c.into_iter().enumerate() {
        on_48[m * 24] = BigRational::from_integer(v);
    }
    Ok(QSeries::from_dense(pre, 48, on_48, order))
}

/// Identifier for the named series the CLI can build.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum NamedSeriesId {
    Eta,
    EtaPower(u32),
    G2,
    WeberF,
    WeberF1,
    WeberF2,
    PentagonalSum,
    JacobiCubeSum,
}

impl NamedSeriesId {
    pub fn build(self, order: QExponent) -> Result<QSeries> {
        match self {
            NamedSeriesId::Eta => eta_series(order),
            NamedSeriesId::EtaPower(m) => {
                if m == 0 {
                    return Err(Error::InvalidArgument("eta power must be >= 1".into()));
                }
                let lead = qexp(m as i64, 24);
                require_above(order, lead)?;
                // eta^m gains (m-1)/24 of precision over eta
                let eta = eta_series(order - qexp(m as i64 - 1, 24))?;
                Ok(eta.pow(m))
            }
            NamedSeriesId::G2 => eisenstein_g2(order),
            NamedSeriesId::WeberF => weber_series(WeberKind::F, order),
            NamedSeriesId::WeberF1 => weber_series(WeberKind::F1, order),
            NamedSeriesId::WeberF2 => weber_series(WeberKind::F2, order),
            NamedSeriesId::PentagonalSum => pentagonal_sum_series(order),
            NamedSeriesId::JacobiCubeSum => jacobi_cube_series(order),
        }
    }
}

impl fmt::Display for NamedSeriesId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NamedSeriesId::Eta => write!(f, "eta"),
            NamedSeriesId::EtaPower(m) => write!(f, "eta^{m}"),
            NamedSeriesId::G2 => write!(f, "g2"),
            NamedSeriesId::WeberF => write!(f, "weber-f"),
            NamedSeriesId::WeberF1 => write!(f, "weber-f1"),
            NamedSeriesId::WeberF2 => write!(f, "weber-f2"),
            NamedSeriesId::PentagonalSum => write!(f, "pentagonal"),
            NamedSeriesId::JacobiCubeSum => write!(f, "jacobi-cube"),
        }
    }
}

impl FromStr for NamedSeriesId {
    type Err = Error;

    /// Accepts `eta`, `eta^M`, `g2`, `weber-f`, `weber-f1`, `weber-f2`,
    /// `pentagonal` and `jacobi-cube`.
    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "eta" => NamedSeriesId::Eta,
            "g2" => NamedSeriesId::G2,
            "weber-f" => NamedSeriesId::WeberF,
            "weber-f1" => NamedSeriesId::WeberF1,
            "weber-f2" => NamedSeriesId::WeberF2,
            "pentagonal" => NamedSeriesId::PentagonalSum,
            "jacobi-cube" => NamedSeriesId::JacobiCubeSum,
            _ => {
                let m = s
                    .strip_prefix("eta^")
                    .and_then(|m| m.parse::<u32>().ok())
                    .filter(|m| *m >= 1)
                    .ok_or_else(|| Error::InvalidArgument(format!("unknown series `{s}`")))?;
                NamedSeriesId::EtaPower(m)
            }
        })
    }
}
