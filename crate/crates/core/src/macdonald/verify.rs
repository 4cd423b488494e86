//! Identity drivers. Each identity compares a right-hand side against
//! `eta^m`, fixes the constant from the leading coefficients and then checks
//! every coefficient below `m/24 + order` against that one constant.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use num_rational::BigRational;
use num_traits::Zero;

use super::{general_rhs, general_rhs_window, macdonald_rhs, macdonald_rhs_window, VerificationReport};
use crate::error::{Error, Result};
use crate::eta::{jacobi_cube_series, pentagonal_sum_series, weber_series, NamedSeriesId, WeberKind};
use crate::series::{qexp, QExponent, QSeries};
use crate::virasoro::{character_lows, character_vector, MinimalModel};
use crate::wronskian::{entry_precision_for, wronskian, SeriesVector};

/// The identities the drivers know how to check.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Identity {
    /// `eta` against the pentagonal sum.
    Euler,
    /// `eta^3` against the Jacobi sum.
    Jacobi,
    /// The `k`-dimensional lattice sum against `eta^{2k^2-k}`.
    Macdonald { k: i64 },
    /// The minimal-model sum against `eta^{2k^2-k}`.
    Denominator { s: i64, t: i64 },
    /// Wronskian of the characters against `eta^{2k(k-1)}`.
    WronskianRaw { s: i64, t: i64 },
    /// Wronskian of `eta * ch` against `eta^{(2k-1)k}`.
    WronskianNormalized { s: i64, t: i64 },
    /// Wronskian of the three Weber functions against `eta^12`, constant `7/256`.
    Weber,
}

impl Identity {
    pub fn name(&self) -> &'static str {
        match self {
            Identity::Euler => "euler",
            Identity::Jacobi => "jacobi",
            Identity::Macdonald { .. } => "macdonald",
            Identity::Denominator { .. } => "denominator",
            Identity::WronskianRaw { .. } => "wronskian_raw",
            Identity::WronskianNormalized { .. } => "wronskian_normalized",
            Identity::Weber => "weber",
        }
    }

    pub fn params(&self) -> BTreeMap<String, i64> {
        let pairs: Vec<(&str, i64)> = match *self {
            Identity::Macdonald { k } => vec![("k", k)],
            Identity::Denominator { s, t }
            | Identity::WronskianRaw { s, t }
            | Identity::WronskianNormalized { s, t } => vec![("s", s), ("t", t)],
            _ => vec![],
        };
        pairs.into_iter().map(|(k, v)| (k.to_string(), v)).collect()
    }

    /// Builds an identity from its name and positional integer parameters.
    pub fn from_parts(name: &str, params: &[i64]) -> Result<Self> {
        let want = match name {
            "euler" | "jacobi" | "weber" => 0,
            "macdonald" => 1,
            "denominator" | "wronskian_raw" | "wronskian_normalized" => 2,
            _ => {
                return Err(Error::InvalidArgument(format!(
                    "unknown identity `{name}` (expected euler, jacobi, macdonald, denominator, \
                     wronskian_raw, wronskian_normalized or weber)"
                )))
            }
        };
        if params.len() != want {
            return Err(Error::InvalidArgument(format!(
                "identity `{name}` takes {want} parameter(s), got {}",
                params.len()
            )));
        }
        Ok(match name {
            "euler" => Identity::Euler,
            "jacobi" => Identity::Jacobi,
            "weber" => Identity::Weber,
            "macdonald" => Identity::Macdonald { k: params[0] },
            "denominator" => Identity::Denominator { s: params[0], t: params[1] },
            "wronskian_raw" => Identity::WronskianRaw { s: params[0], t: params[1] },
            _ => Identity::WronskianNormalized { s: params[0], t: params[1] },
        })
    }

    /// Checks parameters and returns the power of `eta` on the left.
    pub fn eta_power(&self) -> Result<u32> {
        let m = match *self {
            Identity::Euler => 1,
            Identity::Jacobi => 3,
            Identity::Weber => 12,
            Identity::Macdonald { k } => {
                if k < 2 {
                    return Err(Error::MacdonaldNeedsK2 { k });
                }
                2 * k * k - k
            }
            Identity::Denominator { s, t } => {
                let k = MinimalModel::new(s, t)?.k() as i64;
                2 * k * k - k
            }
            Identity::WronskianRaw { s, t } => {
                let k = MinimalModel::new(s, t)?.k() as i64;
                2 * k * (k - 1)
            }
            Identity::WronskianNormalized { s, t } => {
                let k = MinimalModel::new(s, t)?.k() as i64;
                (2 * k - 1) * k
            }
        };
        u32::try_from(m).map_err(|_| Error::InvalidArgument(format!("eta power {m} is too large")))
    }
}

impl fmt::Display for Identity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Identity::Macdonald { k } => write!(f, "macdonald({k})"),
            Identity::Denominator { s, t }
            | Identity::WronskianRaw { s, t }
            | Identity::WronskianNormalized { s, t } => write!(f, "{}({s},{t})", self.name()),
            _ => write!(f, "{}", self.name()),
        }
    }
}

impl FromStr for Identity {
    type Err = Error;

    /// Parses `euler`, `jacobi`, `weber`, `macdonald(K)`, `denominator(S,T)`,
    /// `wronskian_raw(S,T)` and `wronskian_normalized(S,T)`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let (name, params) = match s.split_once('(') {
            None => (s, Vec::new()),
            Some((name, rest)) => {
                let inner = rest
                    .strip_suffix(')')
                    .ok_or_else(|| Error::Parse(format!("missing `)` in `{s}`")))?;
                let params = inner
                    .split(',')
                    .map(|p| {
                        p.trim()
                            .parse::<i64>()
                            .map_err(|_| Error::Parse(format!("bad parameter `{p}` in `{s}`")))
                    })
                    .collect::<Result<Vec<_>>>()?;
                (name.trim(), params)
            }
        };
        Identity::from_parts(name, &params)
    }
}

/// Knobs for [`verify_identity_with`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct VerifyOptions {
    /// Recompute lattice sums over a doubled coordinate window and require
    /// agreement below the comparison bound.
    pub window_audit: bool,
    /// How many times a Wronskian is rebuilt from more precise entries when
    /// elimination falls short of the bound.
    pub max_retries: u32,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            window_audit: false,
            max_retries: 8,
        }
    }
}

struct Fit {
    constant: Option<BigRational>,
    matched: bool,
    first_mismatch: Option<QExponent>,
    terms_compared: usize,
}

fn fit(lhs: &QSeries, rhs: &QSeries, bound: QExponent) -> Fit {
    let lhs = lhs.truncate(bound);
    let rhs = rhs.truncate(bound);
    let support: BTreeSet<QExponent> = lhs.terms().chain(rhs.terms()).map(|(e, _)| e).collect();
    let terms_compared = support.len();
    let (Some(le), Some(re)) = (lhs.lowest_exponent(), rhs.lowest_exponent()) else {
        return Fit {
            constant: None,
            matched: false,
            first_mismatch: lhs.lowest_exponent().or(rhs.lowest_exponent()),
            terms_compared,
        };
    };
    if le != re {
        return Fit {
            constant: None,
            matched: false,
            first_mismatch: Some(le.min(re)),
            terms_compared,
        };
    }
    let c = rhs.leading_coefficient().unwrap() / lhs.leading_coefficient().unwrap();
    let first_mismatch = rhs.first_difference(&lhs.scale(&c), bound);
    Fit {
        constant: Some(c),
        matched: first_mismatch.is_none(),
        first_mismatch,
        terms_compared,
    }
}

fn require_precision(s: &QSeries, bound: QExponent) -> Result<()> {
    if s.precision() < bound {
        Err(Error::InsufficientPrecision {
            bound,
            available: s.precision(),
        })
    } else {
        Ok(())
    }
}

/// Fits `rhs = c * lhs` below `order`, with `c` taken from the leading
/// coefficients, and reports the first exponent where the fit fails.
pub fn empirical_constant(lhs: &QSeries, rhs: &QSeries, order: QExponent) -> Result<VerificationReport> {
    require_precision(lhs, order)?;
    require_precision(rhs, order)?;
    for s in [lhs, rhs] {
        if s.truncate(order).is_zero() {
            return Err(Error::ZeroSeries { precision: order });
        }
    }
    let f = fit(lhs, rhs, order);
    Ok(VerificationReport {
        identity: "empirical".into(),
        params: BTreeMap::new(),
        order,
        constant: f.constant,
        matched: f.matched,
        first_mismatch: f.first_mismatch,
        terms_compared: f.terms_compared,
    })
}

pub fn verify_identity(identity: Identity, order: QExponent) -> Result<VerificationReport> {
    verify_identity_with(identity, order, VerifyOptions::default())
}

/// Runs one identity. `order` is measured from the leading exponent `m/24` of
/// the eta power, so coefficients below `m/24 + order` are compared.
pub fn verify_identity_with(
    identity: Identity,
    order: QExponent,
    options: VerifyOptions,
) -> Result<VerificationReport> {
    if order <= QExponent::zero() {
        return Err(Error::InsufficientOrder {
            minimum: QExponent::zero(),
        });
    }
    let m = identity.eta_power()?;
    let bound = qexp(m as i64, 24) + order;
    let lhs = if m == 0 {
        QSeries::one(bound)
    } else {
        NamedSeriesId::EtaPower(m).build(bound)?
    };
    let mut audit: Option<QSeries> = None;
    let rhs = match identity {
        Identity::Euler => pentagonal_sum_series(bound)?,
        Identity::Jacobi => jacobi_cube_series(bound)?,
        Identity::Macdonald { k } => {
            if options.window_audit {
                audit = Some(macdonald_rhs_window(k, bound, 2)?);
            }
            macdonald_rhs(k, bound)?
        }
        Identity::Denominator { s, t } => {
            let model = MinimalModel::new(s, t)?;
            if options.window_audit {
                audit = Some(general_rhs_window(&model, bound, 2)?);
            }
            general_rhs(&model, bound)?
        }
        Identity::WronskianRaw { s, t } => {
            let model = MinimalModel::new(s, t)?;
            let lows = character_lows(&model, false)?;
            wronskian_to(bound, &lows, options.max_retries, |p| {
                Ok(character_vector(&model, false, p)?.entries().to_vec())
            })?
        }
        Identity::WronskianNormalized { s, t } => {
            let model = MinimalModel::new(s, t)?;
            let lows = character_lows(&model, true)?;
            wronskian_to(bound, &lows, options.max_retries, |p| {
                Ok(character_vector(&model, true, p)?.entries().to_vec())
            })?
        }
        Identity::Weber => {
            let kinds = [WeberKind::F, WeberKind::F1, WeberKind::F2];
            let lows: Vec<QExponent> = kinds.iter().map(|k| k.prefactor()).collect();
            wronskian_to(bound, &lows, options.max_retries, |p| {
                kinds.iter().map(|k| weber_series(*k, p)).collect()
            })?
        }
    };
    let required = (identity == Identity::Weber).then(|| BigRational::new(7.into(), 256.into()));
    finish(identity, order, &lhs, &rhs, bound, audit, required)
}

fn finish(
    identity: Identity,
    order: QExponent,
    lhs: &QSeries,
    rhs: &QSeries,
    bound: QExponent,
    audit: Option<QSeries>,
    required_constant: Option<BigRational>,
) -> Result<VerificationReport> {
    require_precision(lhs, bound)?;
    require_precision(rhs, bound)?;
    let mut f = fit(lhs, rhs, bound);
    if let Some(wide) = audit {
        if let Some(e) = rhs.first_difference(&wide, bound) {
            f.matched = false;
            f.first_mismatch = Some(f.first_mismatch.map_or(e, |x| x.min(e)));
        }
    }
    if let Some(req) = required_constant {
        if f.constant.as_ref() != Some(&req) {
            f.matched = false;
        }
    }
    Ok(VerificationReport {
        identity: identity.name().to_string(),
        params: identity.params(),
        order,
        constant: f.constant,
        matched: f.matched,
        first_mismatch: f.first_mismatch,
        terms_compared: f.terms_compared,
    })
}

/// Builds entries at a common precision chosen so the Wronskian is exact
/// below `bound`, raising it when elimination loses precision.
fn wronskian_to<F>(bound: QExponent, lows: &[QExponent], retries: u32, build: F) -> Result<QSeries>
where
    F: Fn(QExponent) -> Result<Vec<QSeries>>,
{
    let mut p = entry_precision_for(bound, lows);
    let mut last = None;
    for _ in 0..=retries {
        let w = wronskian(&SeriesVector::new(build(p)?)?);
        if w.precision() >= bound {
            return Ok(w);
        }
        p += bound - w.precision();
        last = Some(w.precision());
    }
    Err(Error::InsufficientPrecision {
        bound,
        available: last.unwrap(),
    })
}
