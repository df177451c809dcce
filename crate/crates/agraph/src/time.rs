//! Exact decimal time values.
//!
//! Time references are decimal strings in source files. Reading them into
//! binary floats and printing them back out is exactly how cross-file
//! identities get destroyed, so a [`TimePoint`] keeps the text it was read
//! from and an exact decimal value, and never touches `f32`/`f64`.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use rust_decimal::Decimal;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TimeError {
    #[error("invalid decimal time {0:?}")]
    InvalidDecimal(String),
    #[error("decimal overflow computing {0} + {1}")]
    Overflow(String, String),
}

/// An exact decimal number of seconds, remembering its source spelling.
///
/// Equality and ordering are numeric: `"0.10"` and `"0.100000"` are the same
/// instant. The canonical text is preserved verbatim for re-serialization
/// and diagnostics, trailing zeros included.
#[derive(Debug, Clone)]
pub struct TimePoint {
    text: String,
    value: Decimal,
}

impl TimePoint {
    /// Parse a plain decimal string: optional sign, digits, optional
    /// fraction. Exponents and other float spellings are rejected.
    pub fn parse(text: &str) -> Result<TimePoint, TimeError> {
        if !valid_decimal_text(text) {
            return Err(TimeError::InvalidDecimal(text.to_string()));
        }
        let value =
            Decimal::from_str(text).map_err(|_| TimeError::InvalidDecimal(text.to_string()))?;
        Ok(TimePoint {
            text: text.to_string(),
            value,
        })
    }

    /// The source spelling, unchanged.
    pub fn canonical_text(&self) -> &str {
        &self.text
    }

    pub fn value(&self) -> Decimal {
        self.value
    }

    /// Exact decimal sum. The result's canonical text is the canonical
    /// rendering of the sum (scale = max of the operand scales).
    pub fn checked_add(&self, other: &TimePoint) -> Result<TimePoint, TimeError> {
        let sum = self
            .value
            .checked_add(other.value)
            .ok_or_else(|| TimeError::Overflow(self.text.clone(), other.text.clone()))?;
        Ok(TimePoint {
            text: sum.to_string(),
            value: sum,
        })
    }
}

fn valid_decimal_text(s: &str) -> bool {
    let body = s.strip_prefix(['+', '-']).unwrap_or(s);
    if body.is_empty() {
        return false;
    }
    let (int_part, frac_part) = match body.split_once('.') {
        Some((i, f)) => (i, Some(f)),
        None => (body, None),
    };
    if int_part.is_empty() && frac_part.is_none_or(str::is_empty) {
        return false;
    }
    if let Some(f) = frac_part {
        if f.is_empty() {
            return false; // "1." is not a time we ever see; reject it
        }
        if !f.bytes().all(|b| b.is_ascii_digit()) {
            return false;
        }
    }
    int_part.bytes().all(|b| b.is_ascii_digit())
}

impl PartialEq for TimePoint {
    fn eq(&self, other: &Self) -> bool {
        self.value == other.value
    }
}

impl Eq for TimePoint {}

impl PartialOrd for TimePoint {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for TimePoint {
    fn cmp(&self, other: &Self) -> Ordering {
        self.value.cmp(&other.value)
    }
}

impl fmt::Display for TimePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.text)
    }
}

impl FromStr for TimePoint {
    type Err = TimeError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        TimePoint::parse(s)
    }
}
