use std::collections::BTreeMap;
use std::fmt;

use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use crate::series::QExponent;

/// Outcome of comparing a right-hand side against a constant multiple of a
/// left-hand side. Rationals serialise as `"p/q"` strings in lowest terms.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub identity: String,
    pub params: BTreeMap<String, i64>,
    #[serde(with = "exponent_str")]
    pub order: QExponent,
    /// `rhs / lhs` from the leading coefficients; absent when a side vanishes
    /// or the leading exponents differ.
    #[serde(with = "opt_rational_str")]
    pub constant: Option<BigRational>,
    #[serde(rename = "match")]
    pub matched: bool,
    #[serde(with = "opt_exponent_str")]
    pub first_mismatch: Option<QExponent>,
    pub terms_compared: usize,
}

impl VerificationReport {
    /// One-line `key=value` rendering; `-` marks an absent value.
    pub fn text_line(&self) -> String {
        self.to_string()
    }

    /// `identity(p1,p2)` as used on the command line, e.g. `denominator(2,5)`.
    pub fn label(&self) -> String {
        if self.params.is_empty() {
            self.identity.clone()
        } else {
            let ps: Vec<String> = self.params.values().map(i64::to_string).collect();
            format!("{}({})", self.identity, ps.join(","))
        }
    }
}

impl fmt::Display for VerificationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "identity={}", self.identity)?;
        for (k, v) in &self.params {
            write!(f, " {k}={v}")?;
        }
        write!(f, " order={}", self.order)?;
        match &self.constant {
            Some(c) => write!(f, " constant={c}")?,
            None => write!(f, " constant=-")?,
        }
        write!(f, " match={}", self.matched)?;
        match &self.first_mismatch {
            Some(e) => write!(f, " first_mismatch={e}")?,
            None => write!(f, " first_mismatch=-")?,
        }
        write!(f, " terms_compared={}", self.terms_compared)
    }
}

mod exponent_str {
    use super::*;
    use serde::{de::Error, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(e: &QExponent, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&e.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<QExponent, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(|_| D::Error::custom(format!("bad rational `{s}`")))
    }
}

mod opt_exponent_str {
    use super::*;
    use serde::{de::Error, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(e: &Option<QExponent>, s: S) -> Result<S::Ok, S::Error> {
        match e {
            Some(e) => s.serialize_str(&e.to_string()),
            None => s.serialize_none(),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<QExponent>, D::Error> {
        Option::<String>::deserialize(d)?
            .map(|s| s.parse().map_err(|_| D::Error::custom(format!("bad rational `{s}`"))))
            .transpose()
    }
}

mod opt_rational_str {
    use super::*;
    use serde::{de::Error, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(c: &Option<BigRational>, s: S) -> Result<S::Ok, S::Error> {
        match c {
            Some(c) => s.serialize_str(&c.to_string()),
            None => s.serialize_none(),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<BigRational>, D::Error> {
        Option::<String>::deserialize(d)?
            .map(|s| s.parse().map_err(|_| D::Error::custom(format!("bad rational `{s}`"))))
            .transpose()
    }
}
