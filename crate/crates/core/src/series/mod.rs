//! Truncated formal series in fractional powers of `q` with exact rational
//! coefficients.
//!
//! A [`QSeries`] stores a base exponent, a step grid `1/den` and a dense
//! coefficient vector, so the term at index `n` is `coeffs[n] * q^(base + n/den)`.
//! Every series carries an absolute precision `P`: all terms with exponent
//! below `P` are exactly known, nothing at or beyond `P` is reported.
//!
//! Values are kept in a canonical form (first and last stored coefficients
//! nonzero, minimal step grid, zero series normalised), so structural
//! equality is mathematical equality including the precision bound.

mod text;

use std::cmp::min;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::{BigRational, Rational64};
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Exponent of `q`; always in lowest terms with positive denominator.
pub type QExponent = Rational64;

/// Converts a small exponent into an arbitrary-precision rational.
pub fn exponent_to_big(e: QExponent) -> BigRational {
    BigRational::new(BigInt::from(*e.numer()), BigInt::from(*e.denom()))
}

pub(crate) fn lcm_i64(a: i64, b: i64) -> i64 {
    let g = a.gcd(&b);
    (a / g)
        .checked_mul(b)
        .expect("grid denominator overflow")
        .abs()
}

/// Number of grid indices `n >= 0` with `base + n/den < bound`.
fn steps_below(base: QExponent, den: i64, bound: QExponent) -> usize {
    let r = (bound - base) * den;
    if r <= QExponent::zero() {
        0
    } else {
        r.ceil().to_integer() as usize
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QSeries {
    base: QExponent,
    step_den: i64,
    coeffs: Vec<BigRational>,
    precision: QExponent,
}

impl QSeries {
    /// The zero series known up to `O(q^precision)`.
    pub fn zero(precision: QExponent) -> Self {
        QSeries {
            base: QExponent::zero(),
            step_den: 1,
            coeffs: Vec::new(),
            precision,
        }
    }

    /// `1 + O(q^precision)`; the zero series when `precision <= 0`.
    pub fn one(precision: QExponent) -> Self {
        if precision > QExponent::zero() {
            QSeries {
                base: QExponent::zero(),
                step_den: 1,
                coeffs: vec![BigRational::one()],
                precision,
            }
        } else {
            Self::zero(precision)
        }
    }

    /// The single term `c * q^e` known up to `O(q^precision)`.
    pub fn monomial(c: BigRational, e: QExponent, precision: QExponent) -> Result<Self> {
        if c.is_zero() {
            return Ok(Self::zero(precision));
        }
        if precision <= e {
            return Err(Error::TermBeyondPrecision {
                exponent: e,
                precision,
            });
        }
        Ok(QSeries {
            base: e,
            step_den: 1,
            coeffs: vec![c],
            precision,
        })
    }

    /// Builds a series from `(exponent, coefficient)` pairs; repeated exponents
    /// are summed. A nonzero term at or beyond `precision` is an error.
    pub fn from_terms<I>(terms: I, precision: QExponent) -> Result<Self>
    where
        I: IntoIterator<Item = (QExponent, BigRational)>,
    {
        let terms: Vec<_> = terms.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        if let Some((e, _)) = terms.iter().find(|(e, _)| *e >= precision) {
            return Err(Error::TermBeyondPrecision {
                exponent: *e,
                precision,
            });
        }
        Ok(Self::collect_terms(terms, precision))
    }

    /// Like [`QSeries::from_terms`], but silently drops terms at or beyond
    /// `precision`.
    pub fn from_terms_truncated<I>(terms: I, precision: QExponent) -> Self
    where
        I: IntoIterator<Item = (QExponent, BigRational)>,
    {
        let terms: Vec<_> = terms
            .into_iter()
            .filter(|(e, c)| !c.is_zero() && *e < precision)
            .collect();
        Self::collect_terms(terms, precision)
    }

    fn collect_terms(terms: Vec<(QExponent, BigRational)>, precision: QExponent) -> Self {
        let Some(base) = terms.iter().map(|(e, _)| *e).min() else {
            return Self::zero(precision);
        };
        let den = terms
            .iter()
            .fold(1, |acc, (e, _)| lcm_i64(acc, *(*e - base).denom()));
        let len = terms
            .iter()
            .map(|(e, _)| ((*e - base) * den).to_integer() as usize + 1)
            .max()
            .unwrap_or(0);
        let mut coeffs = vec![BigRational::zero(); len];
        for (e, c) in terms {
            let idx = ((e - base) * den).to_integer() as usize;
            coeffs[idx] += c;
        }
        Self::from_dense(base, den, coeffs, precision)
    }

    /// Builds `sum_n coeffs[n] * q^(base + n/den)`, dropping entries at or
    /// beyond `precision` and normalising the representation.
    pub fn from_dense(
        base: QExponent,
        den: i64,
        mut coeffs: Vec<BigRational>,
        precision: QExponent,
    ) -> Self {
        assert!(den > 0, "step denominator must be positive");
        coeffs.truncate(steps_below(base, den, precision));
        let Some(first) = coeffs.iter().position(|c| !c.is_zero()) else {
            return Self::zero(precision);
        };
        let last = coeffs.iter().rposition(|c| !c.is_zero()).unwrap();
        let g = coeffs[first..=last]
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .fold(0usize, |acc, (i, _)| acc.gcd(&i));
        let new_base = base + QExponent::new(first as i64, den);
        if g == 0 {
            let c = coeffs.swap_remove(first);
            return QSeries {
                base: new_base,
                step_den: 1,
                coeffs: vec![c],
                precision,
            };
        }
        let d = (den as usize).gcd(&g);
        coeffs.truncate(last + 1);
        let coeffs = if first == 0 && d == 1 {
            coeffs
        } else {
            coeffs
                .into_iter()
                .skip(first)
                .step_by(d)
                .collect::<Vec<_>>()
        };
        QSeries {
            base: new_base,
            step_den: den / d as i64,
            coeffs,
            precision,
        }
    }

    pub fn precision(&self) -> QExponent {
        self.precision
    }

    /// True when no term below the precision is nonzero.
    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Exponent of the lowest nonzero term, if any.
    pub fn lowest_exponent(&self) -> Option<QExponent> {
        (!self.is_zero()).then_some(self.base)
    }

    /// Lowest exponent, or the precision for the zero series. This is the
    /// valuation bound used in precision propagation.
    pub fn low_bound(&self) -> QExponent {
        self.lowest_exponent().unwrap_or(self.precision)
    }

    pub fn leading_coefficient(&self) -> Option<&BigRational> {
        self.coeffs.first()
    }

    /// Denominator `D` of the exponent grid: every exponent is a multiple of `1/D`.
    pub fn grid_denominator(&self) -> i64 {
        lcm_i64(self.step_den, *self.base.denom())
    }

    /// Offset `a` such that the lowest representable exponent is `a/D`.
    pub fn offset(&self) -> i64 {
        (self.base * self.grid_denominator()).to_integer()
    }

    /// Nonzero terms in increasing exponent order.
    pub fn terms(&self) -> impl Iterator<Item = (QExponent, &BigRational)> + '_ {
        let (base, den) = (self.base, self.step_den);
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(move |(n, c)| (base + QExponent::new(n as i64, den), c))
    }

    pub fn num_terms(&self) -> usize {
        self.coeffs.iter().filter(|c| !c.is_zero()).count()
    }

    /// Coefficient of `q^e`. Asking at or beyond the precision is an error.
    pub fn coefficient(&self, e: QExponent) -> Result<BigRational> {
        if e >= self.precision {
            return Err(Error::InsufficientPrecision {
                bound: e,
                available: self.precision,
            });
        }
        if self.is_zero() || e < self.base {
            return Ok(BigRational::zero());
        }
        let pos = (e - self.base) * self.step_den;
        if !pos.is_integer() {
            return Ok(BigRational::zero());
        }
        Ok(self
            .coeffs
            .get(pos.to_integer() as usize)
            .cloned()
            .unwrap_or_else(BigRational::zero))
    }

    /// The same series known only up to `O(q^min(P, bound))`.
    pub fn truncate(&self, bound: QExponent) -> QSeries {
        if bound >= self.precision {
            return self.clone();
        }
        Self::from_dense(self.base, self.step_den, self.coeffs.clone(), bound)
    }

    /// Multiplies by `c`; precision unchanged.
    pub fn scale(&self, c: &BigRational) -> QSeries {
        if c.is_zero() {
            return Self::zero(self.precision);
        }
        QSeries {
            coeffs: self.coeffs.iter().map(|x| x * c).collect(),
            ..self.clone()
        }
    }

    /// Exact multiplication by `q^e`; the precision moves with the terms.
    pub fn shift(&self, e: QExponent) -> QSeries {
        if self.is_zero() {
            return Self::zero(self.precision + e);
        }
        QSeries {
            base: self.base + e,
            precision: self.precision + e,
            ..self.clone()
        }
    }

    /// Index of `self`'s term `n` on a finer grid `(base, den)`.
    fn placement(&self, base: QExponent, den: i64) -> (usize, usize) {
        let start = ((self.base - base) * den).to_integer() as usize;
        (start, (den / self.step_den) as usize)
    }

    /// Termwise sum on the common grid; precision is the smaller of the two.
    pub fn add(&self, other: &QSeries) -> QSeries {
        self.combine(other, false)
    }

    pub fn sub(&self, other: &QSeries) -> QSeries {
        self.combine(other, true)
    }

    fn combine(&self, other: &QSeries, negate_other: bool) -> QSeries {
        let precision = min(self.precision, other.precision);
        if other.is_zero() {
            return self.truncate(precision);
        }
        if self.is_zero() {
            let t = other.truncate(precision);
            return if negate_other { t.neg() } else { t };
        }
        let base = min(self.base, other.base);
        let den = lcm_i64(
            lcm_i64(self.step_den, other.step_den),
            *(self.base - other.base).denom(),
        );
        let len = steps_below(base, den, precision);
        let mut acc = vec![BigRational::zero(); len];
        let (start, stride) = self.placement(base, den);
        for (n, c) in self.coeffs.iter().enumerate() {
            match acc.get_mut(start + n * stride) {
                Some(slot) => *slot += c,
                None => break,
            }
        }
        let (start, stride) = other.placement(base, den);
        for (n, c) in other.coeffs.iter().enumerate() {
            match acc.get_mut(start + n * stride) {
                Some(slot) if negate_other => *slot -= c,
                Some(slot) => *slot += c,
                None => break,
            }
        }
        Self::from_dense(base, den, acc, precision)
    }

    /// Nonzero coefficients scaled to integers over a common denominator,
    /// with indices stretched by `stride`.
    fn integer_terms(&self, stride: usize) -> (Vec<(usize, BigInt)>, BigInt) {
        let common = self
            .coeffs
            .iter()
            .filter(|c| !c.is_zero())
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let terms = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(n, c)| (n * stride, c.numer() * (&common / c.denom())))
            .collect();
        (terms, common)
    }

    /// Cauchy product. The result is exact below
    /// `min(P_x + low(y), P_y + low(x))`.
    pub fn mul(&self, other: &QSeries) -> QSeries {
        let precision = min(
            self.precision + other.low_bound(),
            other.precision + self.low_bound(),
        );
        if self.is_zero() || other.is_zero() {
            return Self::zero(precision);
        }
        let base = self.base + other.base;
        let den = lcm_i64(self.step_den, other.step_den);
        let len = steps_below(base, den, precision);
        let (xs, dx) = self.integer_terms((den / self.step_den) as usize);
        let (ys, dy) = other.integer_terms((den / other.step_den) as usize);
        let mut acc = vec![BigInt::zero(); len];
        for (i, a) in &xs {
            if *i >= len {
                break;
            }
            for (j, b) in &ys {
                let k = i + j;
                if k >= len {
                    break;
                }
                acc[k] += a * b;
            }
        }
        let denom = dx * dy;
        let coeffs = acc
            .into_iter()
            .map(|v| BigRational::new(v, denom.clone()))
            .collect();
        Self::from_dense(base, den, coeffs, precision)
    }

    /// Multiplicative inverse. For `x = c q^b (1 + ...)` known below `P`, the
    /// inverse starts at `q^-b` and is exact below `P - 2b`.
    pub fn invert(&self) -> Result<QSeries> {
        if self.is_zero() {
            return Err(Error::NotInvertible {
                precision: self.precision,
            });
        }
        let lead = &self.coeffs[0];
        let base = -self.base;
        let precision = self.precision - self.base * 2;
        let len = steps_below(base, self.step_den, precision);
        let tail: Vec<(usize, BigRational)> = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .filter(|(_, c)| !c.is_zero())
            .map(|(n, c)| (n, c / lead))
            .collect();
        let g = tail.iter().fold(0usize, |acc, (n, _)| acc.gcd(n));
        let inv_lead = lead.recip();
        if g == 0 {
            return Ok(Self::from_dense(base, 1, vec![inv_lead], precision));
        }
        let units = len.div_ceil(g);
        let tail: Vec<(usize, BigRational)> = tail.into_iter().map(|(n, c)| (n / g, c)).collect();
        let reduced: Vec<BigRational> = if tail.iter().all(|(_, c)| c.is_integer()) {
            let tail: Vec<(usize, BigInt)> =
                tail.into_iter().map(|(u, c)| (u, c.to_integer())).collect();
            let mut b: Vec<BigInt> = Vec::with_capacity(units);
            b.push(BigInt::one());
            for j in 1..units {
                let mut s = BigInt::zero();
                for (u, a) in &tail {
                    if *u > j {
                        break;
                    }
                    s += a * &b[j - u];
                }
                b.push(-s);
            }
            b.into_iter()
                .map(|v| BigRational::from_integer(v) * &inv_lead)
                .collect()
        } else {
            let mut b: Vec<BigRational> = Vec::with_capacity(units);
            b.push(BigRational::one());
            for j in 1..units {
                let mut s = BigRational::zero();
                for (u, a) in &tail {
                    if *u > j {
                        break;
                    }
                    s += a * &b[j - u];
                }
                b.push(-s);
            }
            b.into_iter().map(|v| v * &inv_lead).collect()
        };
        let mut coeffs = vec![BigRational::zero(); len];
        for (j, c) in reduced.into_iter().enumerate() {
            coeffs[j * g] = c;
        }
        Ok(Self::from_dense(base, self.step_den, coeffs, precision))
    }

    /// The derivation `q d/dq`: each term `c q^e` becomes `(c e) q^e`.
    pub fn theta_derive(&self) -> QSeries {
        if self.is_zero() {
            return self.clone();
        }
        let base = exponent_to_big(self.base);
        let step = BigRational::new(BigInt::one(), BigInt::from(self.step_den));
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(n, c)| {
                if c.is_zero() {
                    BigRational::zero()
                } else {
                    c * (&base + &step * BigInt::from(n))
                }
            })
            .collect();
        Self::from_dense(self.base, self.step_den, coeffs, self.precision)
    }

    /// `x^n` by binary powering; `x^0` is `1` at `x`'s precision.
    pub fn pow(&self, n: u32) -> QSeries {
        if n == 0 {
            return Self::one(self.precision);
        }
        let mut result: Option<QSeries> = None;
        let mut square = self.clone();
        let mut e = n;
        loop {
            if e & 1 == 1 {
                result = Some(match result {
                    None => square.clone(),
                    Some(r) => r.mul(&square),
                });
            }
            e >>= 1;
            if e == 0 {
                break;
            }
            square = square.mul(&square);
        }
        result.unwrap()
    }

    /// Whether all coefficients of exponents below `bound` agree.
    pub fn equal_up_to(&self, other: &QSeries, bound: QExponent) -> Result<bool> {
        let available = min(self.precision, other.precision);
        if bound > available {
            return Err(Error::InsufficientPrecision { bound, available });
        }
        Ok(self.first_difference(other, bound).is_none())
    }

    /// Lowest exponent below `bound` (and below both precisions) where the
    /// two series differ.
    pub fn first_difference(&self, other: &QSeries, bound: QExponent) -> Option<QExponent> {
        self.sub(other).lowest_exponent().filter(|e| *e < bound)
    }
}

impl Neg for QSeries {
    type Output = QSeries;
    fn neg(self) -> QSeries {
        QSeries {
            coeffs: self.coeffs.into_iter().map(|c| -c).collect(),
            ..self
        }
    }
}

impl Neg for &QSeries {
    type Output = QSeries;
    fn neg(self) -> QSeries {
        self.clone().neg()
    }
}

macro_rules! forward_binop {
    ($tr:ident, $method:ident, $inner:ident) => {
        impl $tr<&QSeries> for &QSeries {
            type Output = QSeries;
            fn $method(self, rhs: &QSeries) -> QSeries {
                QSeries::$inner(self, rhs)
            }
        }
    };
}

forward_binop!(Add, add, add);
forward_binop!(Sub, sub, sub);
forward_binop!(Mul, mul, mul);

fn fmt_power(f: &mut fmt::Formatter<'_>, e: QExponent) -> fmt::Result {
    if e.is_zero() {
        Ok(())
    } else if e.is_one() {
        write!(f, "q")
    } else if e.is_integer() && e.is_positive() {
        write!(f, "q^{e}")
    } else {
        write!(f, "q^({e})")
    }
}

impl fmt::Display for QSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, (e, c)) in self.terms().enumerate() {
            let mag = c.abs();
            match (i, c.is_negative()) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            if e.is_zero() {
                write!(f, "{mag}")?;
            } else {
                if !mag.is_one() {
                    write!(f, "{mag}*")?;
                }
                fmt_power(f, e)?;
            }
        }
        if !self.is_zero() {
            write!(f, " + ")?;
        }
        write!(f, "O(")?;
        if self.precision.is_zero() {
            write!(f, "1")?;
        } else {
            fmt_power(f, self.precision)?;
        }
        write!(f, ")")
    }
}

/// Exact conversion of a small integer into a coefficient.
pub fn int(v: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(v))
}

/// Shorthand for building exponents in tests and examples.
pub fn qexp(num: i64, den: i64) -> QExponent {
    QExponent::new(num, den)
}
