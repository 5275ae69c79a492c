//! Parsing and rendering of exact rationals and spectrum documents.
//!
//! Spectrum file format (JSON):
//! `{"type":"finite","values":["1/2","0.25",...]}` — the `type` field may
//! be omitted; values may be unsorted (the parser rearranges); entries are
//! rational strings `n/d`, decimal strings, or JSON integers. JSON floats
//! are rejected: decimal strings keep the input exact.

use super::SpectraError;
use crate::Spectrum;
use num::{BigInt, BigRational, One, Signed, Zero};
use std::fmt;
use std::str::FromStr;

/// Where in a document a parse error happened.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ParsePosition {
    Document,
    Entry(usize),
}

impl fmt::Display for ParsePosition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ParsePosition::Document => write!(f, "document"),
            ParsePosition::Entry(i) => write!(f, "values[{i}]"),
        }
    }
}

/// Exact rational in lowest terms: `"3/4"`, integers as `"3"`.
pub fn render_rational(r: &BigRational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Parse `n/d`, a plain integer, or a decimal string, exactly.
pub fn parse_rational(text: &str) -> Result<BigRational, String> {
    let s = text.trim();
    if s.is_empty() {
        return Err("empty number".into());
    }
    if let Some((num, den)) = s.split_once('/') {
        let n = BigInt::from_str(num.trim()).map_err(|e| format!("bad numerator {num:?}: {e}"))?;
        let d = BigInt::from_str(den.trim()).map_err(|e| format!("bad denominator {den:?}: {e}"))?;
        if d.is_zero() {
            return Err("zero denominator".into());
        }
        return Ok(BigRational::new(n, d));
    }
    if let Some((int_part, frac_part)) = s.split_once('.') {
        let (sign, int_digits) = match int_part.strip_prefix('-') {
            Some(rest) => (-1, rest),
            None => (1, int_part.strip_prefix('+').unwrap_or(int_part)),
        };
        if !int_digits.chars().all(|c| c.is_ascii_digit())
            || frac_part.is_empty()
            || !frac_part.chars().all(|c| c.is_ascii_digit())
        {
            return Err(format!("bad decimal {s:?}"));
        }
        let digits = format!("{int_digits}{frac_part}");
        let numer = BigInt::from_str(&digits).map_err(|e| format!("bad decimal {s:?}: {e}"))?;
        let denom = BigInt::from(10).pow(frac_part.len() as u32);
        return Ok(BigRational::new(numer * BigInt::from(sign), denom));
    }
    BigInt::from_str(s)
        .map(BigRational::from_integer)
        .map_err(|e| format!("bad number {s:?}: {e}"))
}

/// Parse a spectrum document. Entries are validated (nonnegative, exact)
/// and rearranged into nonincreasing order; errors carry the offending
/// entry position.
pub fn parse_spectrum_json(doc: &serde_json::Value) -> Result<Spectrum, SpectraError> {
    let obj = doc.as_object().ok_or_else(|| SpectraError::Parse {
        position: ParsePosition::Document,
        message: "expected a JSON object".into(),
    })?;
    if let Some(kind) = obj.get("type") {
        if kind.as_str() != Some("finite") {
            return Err(SpectraError::Parse {
                position: ParsePosition::Document,
                message: format!("expected type \"finite\", got {kind}"),
            });
        }
    }
    let values = obj
        .get("values")
        .and_then(|v| v.as_array())
        .ok_or_else(|| SpectraError::Parse {
            position: ParsePosition::Document,
            message: "missing \"values\" array".into(),
        })?;
    let mut parsed = Vec::with_capacity(values.len());
    for (i, entry) in values.iter().enumerate() {
        let r = match entry {
            serde_json::Value::String(s) => {
                parse_rational(s).map_err(|message| SpectraError::Parse {
                    position: ParsePosition::Entry(i),
                    message,
                })?
            }
            serde_json::Value::Number(n) if n.is_i64() => {
                BigRational::from_integer(BigInt::from(n.as_i64().expect("checked i64")))
            }
            serde_json::Value::Number(n) if n.is_u64() => {
                BigRational::from_integer(BigInt::from(n.as_u64().expect("checked u64")))
            }
            serde_json::Value::Number(_) => {
                return Err(SpectraError::Parse {
                    position: ParsePosition::Entry(i),
                    message: "JSON floats are inexact; use a decimal or n/d string".into(),
                })
            }
            other => {
                return Err(SpectraError::Parse {
                    position: ParsePosition::Entry(i),
                    message: format!("expected a string, got {other}"),
                })
            }
        };
        if r.is_negative() {
            return Err(SpectraError::Negative { position: i });
        }
        parsed.push(r);
    }
    Spectrum::rearranged(parsed)
}

/// Parse from raw JSON text.
pub fn parse_spectrum_str(text: &str) -> Result<Spectrum, SpectraError> {
    let doc: serde_json::Value = serde_json::from_str(text).map_err(|e| SpectraError::Parse {
        position: ParsePosition::Document,
        message: e.to_string(),
    })?;
    parse_spectrum_json(&doc)
}
