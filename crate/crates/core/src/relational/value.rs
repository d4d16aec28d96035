use std::collections::BTreeMap;
use std::fmt;

use chrono::{NaiveDate, NaiveDateTime};

/// A column value, already coerced to the column's SQL type.
#[derive(Debug, Clone, PartialEq)]
pub enum Value {
    Null,
    Integer(i64),
    /// Canonical decimal lexical form (see [`canonical_decimal`]).
    Decimal(String),
    Float(f64),
    Text(String),
    Date(NaiveDate),
    Timestamp(NaiveDateTime),
    Boolean(bool),
}

impl Value {
    pub fn is_null(&self) -> bool {
        matches!(self, Value::Null)
    }

    /// XSD lexical form. `None` for NULL.
    pub fn lexical(&self) -> Option<String> {
        Some(match self {
            Value::Null => return None,
            Value::Integer(i) => i.to_string(),
            Value::Decimal(d) => d.clone(),
            Value::Float(f) => format_double(*f),
            Value::Text(s) => s.clone(),
            Value::Date(d) => d.format("%Y-%m-%d").to_string(),
            Value::Timestamp(t) => t.format("%Y-%m-%dT%H:%M:%S%.f").to_string(),
            Value::Boolean(b) => b.to_string(),
        })
    }
}

fn format_double(f: f64) -> String {
    if f.is_nan() {
        "NaN".into()
    } else if f.is_infinite() {
        if f > 0.0 { "INF".into() } else { "-INF".into() }
    } else {
        format!("{f:?}")
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.lexical() {
            Some(s) => f.write_str(&s),
            None => f.write_str("NULL"),
        }
    }
}

/// Normalizes a decimal literal: no leading `+`, no redundant leading zeros,
/// no trailing fractional zeros, no trailing point, and `0` instead of `-0`.
/// Returns `None` if `text` is not `[+-]digits[.digits]`.
pub fn canonical_decimal(text: &str) -> Option<String> {
    let (negative, body) = match text.as_bytes().first()? {
        b'-' => (true, &text[1..]),
        b'+' => (false, &text[1..]),
        _ => (false, text),
    };
    let (int_part, frac_part) = match body.split_once('.') {
        Some((i, f)) => (i, f),
        None => (body, ""),
    };
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    if !int_part.bytes().all(|b| b.is_ascii_digit()) || !frac_part.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    let int_part = int_part.trim_start_matches('0');
    let frac_part = frac_part.trim_end_matches('0');
    let mut out = String::new();
    if negative && !(int_part.is_empty() && frac_part.is_empty()) {
        out.push('-');
    }
    out.push_str(if int_part.is_empty() { "0" } else { int_part });
    if !frac_part.is_empty() {
        out.push('.');
        out.push_str(frac_part);
    }
    Some(out)
}

/// One row bound to a table. Every column of the table has an entry; columns
/// omitted from an INSERT hold [`Value::Null`].
#[derive(Debug, Clone, PartialEq)]
pub struct Tuple {
    pub table: String,
    pub values: BTreeMap<String, Value>,
}

impl Tuple {
    pub fn new(table: impl Into<String>) -> Self {
        Tuple { table: table.into(), values: BTreeMap::new() }
    }

    pub fn with(mut self, column: &str, value: Value) -> Self {
        self.values.insert(column.to_string(), value);
        self
    }

    /// Case-insensitive value lookup.
    pub fn get(&self, column: &str) -> Option<&Value> {
        self.values.get(column).or_else(|| {
            self.values.iter().find(|(k, _)| super::ident_eq(k, column)).map(|(_, v)| v)
        })
    }
}
