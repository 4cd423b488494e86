use thiserror::Error;

use crate::QExponent;

/// Errors produced by series arithmetic, model bookkeeping and identity drivers.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("term beyond precision: q^{exponent} is not below O(q^{precision})")]
    TermBeyondPrecision {
        exponent: QExponent,
        precision: QExponent,
    },

    #[error("not invertible: series is zero up to O(q^{precision})")]
    NotInvertible { precision: QExponent },

    #[error("insufficient precision: bound {bound} exceeds available precision {available}")]
    InsufficientPrecision {
        bound: QExponent,
        available: QExponent,
    },

    #[error("insufficient order: order must exceed {minimum}")]
    InsufficientOrder { minimum: QExponent },

    #[error("not a minimal model: (s, t) = ({s}, {t}) must satisfy s, t >= 2, s != t, gcd(s, t) = 1")]
    NotAMinimalModel { s: i64, t: i64 },

    #[error("label (m, n) = ({m}, {n}) is outside 1 <= m < {s}, 1 <= n < {t}")]
    LabelOutOfRange { m: i64, n: i64, s: i64, t: i64 },

    #[error("duplicate conformal weight {h} among the first k labels of ({s}, {t})")]
    DuplicateWeight { s: i64, t: i64, h: QExponent },

    #[error("degenerate chi: residue {r} lies in both the +1 and -1 classes")]
    DegenerateChi { r: u64 },

    #[error("degenerate fundamental system: Wronskian vanishes up to O(q^{precision})")]
    DegenerateFundamentalSystem { precision: QExponent },

    #[error("series is zero up to O(q^{precision}); no leading coefficient")]
    ZeroSeries { precision: QExponent },

    #[error("macdonald identity needs k >= 2 (got k = {k}); use the euler identity for k = 1")]
    MacdonaldNeedsK2 { k: i64 },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
