//! Artifact emission: decimal-string formatting, JSON and CSV writers with
//! bit-stable output (fixed field order, LF line endings).

use std::io::Write;
use std::path::Path;

use rug::{Complex, Float};

use crate::error::{Error, Result};

/// Render a float as a decimal string carrying `digits` significant digits.
///
/// Plain positional notation for moderate exponents, scientific otherwise.
/// The output is deterministic for identical inputs.
pub fn decimal_string(x: &Float, digits: u32) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x.is_sign_positive() { "inf".into() } else { "-inf".into() };
    }
    if x.is_zero() {
        return "0".into();
    }
    let (sign, mantissa, exp) = to_decimal_parts(x, digits as usize);
    let s = if exp >= -4 && exp <= digits as i64 + 6 {
        format_positional(&mantissa, exp)
    } else {
        format_scientific(&mantissa, exp)
    };
    if sign {
        format!("-{s}")
    } else {
        s
    }
}

/// `(negative, digit-string, power-of-ten of the leading digit + 1)`.
fn to_decimal_parts(x: &Float, digits: usize) -> (bool, String, i64) {
    let (s, e) = x.to_string_radix(10, Some(digits.max(1))).split_once('e').map_or_else(
        || (x.to_string_radix(10, Some(digits.max(1))), 0i64),
        |(m, ex)| (m.to_string(), ex.parse::<i64>().unwrap_or(0)),
    );
    let neg = s.starts_with('-');
    let body: String = s.chars().filter(|c| c.is_ascii_digit()).collect();
    // mantissa is printed as d.ddd, so the decimal point sits after one digit
    let point = s.find('.').map_or(body.len() as i64, |p| {
        let lead = &s[..p];
        lead.chars().filter(|c| c.is_ascii_digit()).count() as i64
    });
    let trimmed = body.trim_end_matches('0');
    let m = if trimmed.is_empty() { "0".to_string() } else { trimmed.to_string() };
    (neg, m, point + e)
}

fn format_positional(mantissa: &str, exp: i64) -> String {
    if exp <= 0 {
        let zeros = "0".repeat((-exp) as usize);
        format!("0.{zeros}{mantissa}")
    } else if (exp as usize) >= mantissa.len() {
        let zeros = "0".repeat(exp as usize - mantissa.len());
        format!("{mantissa}{zeros}")
    } else {
        let (int, frac) = mantissa.split_at(exp as usize);
        format!("{int}.{frac}")
    }
}

fn format_scientific(mantissa: &str, exp: i64) -> String {
    let (head, tail) = mantissa.split_at(1);
    if tail.is_empty() {
        format!("{head}e{}", exp - 1)
    } else {
        format!("{head}.{tail}e{}", exp - 1)
    }
}

/// `re+imi` pair of decimal strings.
pub fn complex_strings(z: &Complex, digits: u32) -> (String, String) {
    (decimal_string(z.real(), digits), decimal_string(z.imag(), digits))
}

/// A CSV table with a fixed header.
#[derive(Debug, Clone)]
pub struct CsvTable {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl CsvTable {
    pub fn new(header: &[&str]) -> Self {
        CsvTable { header: header.iter().map(|s| s.to_string()).collect(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<String>) {
        assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        out.push_str(&self.header.join(","));
        out.push('\n');
        for row in &self.rows {
            out.push_str(&row.join(","));
            out.push('\n');
        }
        out
    }
}

/// Write `content` to `path`, or to stdout when no path is given.
pub fn emit(content: &str, path: Option<&Path>) -> Result<()> {
    match path {
        Some(p) => {
            let mut f = std::fs::File::create(p)?;
            f.write_all(content.as_bytes())?;
            Ok(())
        }
        None => {
            std::io::stdout().write_all(content.as_bytes())?;
            Ok(())
        }
    }
}

/// Serialize a JSON value with a trailing newline.
pub fn json_string<T: serde::Serialize>(value: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(value)
        .map_err(|e| Error::Serialization(e.to_string()))?;
    s.push('\n');
    Ok(s)
}
