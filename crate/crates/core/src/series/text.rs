//! Line-oriented text form used for golden files and CLI output.
//!
//! ```text
//! D=24 P=5
//! 1/24 1
//! 25/24 -1
//! ```
//!
//! The header gives the exponent grid denominator and the precision; each
//! following line is `<exponent> <coefficient>` in increasing exponent order,
//! rationals written `p/q` in lowest terms (`p` alone when `q = 1`).

use std::fmt::Write;

use num_rational::BigRational;

use super::{QExponent, QSeries};
use crate::error::{Error, Result};

impl QSeries {
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let d = if self.is_zero() { 1 } else { self.grid_denominator() };
        writeln!(out, "D={} P={}", d, self.precision()).unwrap();
        for (e, c) in self.terms() {
            writeln!(out, "{e} {c}").unwrap();
        }
        out
    }

    pub fn from_text(text: &str) -> Result<QSeries> {
        let mut lines = text.lines().filter(|l| !l.trim().is_empty());
        let header = lines
            .next()
            .ok_or_else(|| Error::Parse("missing header line".into()))?;
        let (d, precision) = parse_header(header)?;
        let mut terms = Vec::new();
        let mut last: Option<QExponent> = None;
        for line in lines {
            let mut parts = line.split_whitespace();
            let (Some(e), Some(c), None) = (parts.next(), parts.next(), parts.next()) else {
                return Err(Error::Parse(format!("malformed term line `{line}`")));
            };
            let e: QExponent = e
                .parse()
                .map_err(|_| Error::Parse(format!("bad exponent `{e}`")))?;
            let c: BigRational = c
                .parse()
                .map_err(|_| Error::Parse(format!("bad coefficient `{c}`")))?;
            if !(e * d).is_integer() {
                return Err(Error::Parse(format!("exponent {e} is off the 1/{d} grid")));
            }
            if last.is_some_and(|l| l >= e) {
                return Err(Error::Parse(format!("exponent {e} out of order")));
            }
            last = Some(e);
            terms.push((e, c));
        }
        QSeries::from_terms(terms, precision)
    }
}

fn parse_header(line: &str) -> Result<(i64, QExponent)> {
    let mut d = None;
    let mut p = None;
    for field in line.split_whitespace() {
        if let Some(v) = field.strip_prefix("D=") {
            d = v.parse::<i64>().ok().filter(|d| *d > 0);
        } else if let Some(v) = field.strip_prefix("P=") {
            p = v.parse::<QExponent>().ok();
        }
    }
    match (d, p) {
        (Some(d), Some(p)) => Ok((d, p)),
        _ => Err(Error::Parse(format!("bad header `{line}`"))),
    }
}
