//! Output rows and their JSON/CSV encodings.

use std::io::Write;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::TurnKind;

/// Significant digits in `average_decimal`.
pub const DECIMAL_DIGITS: usize = 12;

/// One `(k, N, s, kind)` result. Exact values are decimal strings.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ReportRow {
    pub k: u32,
    #[serde(rename = "N")]
    pub n: u32,
    pub s: u32,
    pub kind: TurnKind,
    pub sum: String,
    pub count: String,
    pub average_exact: String,
    pub average_decimal: String,
}

impl ReportRow {
    pub fn new(k: u32, n: u32, s: u32, kind: TurnKind, sum: &BigUint, count: &BigUint) -> Self {
        let avg = BigRational::new(BigInt::from(sum.clone()), BigInt::from(count.clone()));
        ReportRow {
            k,
            n,
            s,
            kind,
            sum: sum.to_string(),
            count: count.to_string(),
            average_exact: format_rational(&avg),
            average_decimal: format_decimal(&avg, DECIMAL_DIGITS),
        }
    }
}

/// `p/q` in lowest terms, or just `p` when the denominator is 1.
pub fn format_rational(x: &BigRational) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

/// Positional decimal rounded (half away from zero) to `digits` significant
/// digits, with trailing zeros after the point removed.
pub fn format_decimal(x: &BigRational, digits: usize) -> String {
    assert!(digits > 0);
    if x.is_zero() {
        return "0".to_string();
    }
    let negative = x.is_negative();
    let x = x.abs();
    // exponent e with 10^e <= x < 10^(e+1)
    let mut e = x.numer().to_string().len() as i64 - x.denom().to_string().len() as i64;
    while pow10(e) > x {
        e -= 1;
    }
    while pow10(e + 1) <= x {
        e += 1;
    }
    let shift = digits as i64 - 1 - e;
    let mut scaled = (&x * pow10(shift)).round().to_integer();
    if scaled.to_string().len() > digits {
        scaled /= 10;
        e += 1;
    }
    let mut body = scaled.to_string();
    let point = e + 1;
    let mut out = if point <= 0 {
        format!("0.{}{}", "0".repeat((-point) as usize), body)
    } else if point as usize >= body.len() {
        body.push_str(&"0".repeat(point as usize - body.len()));
        body
    } else {
        format!("{}.{}", &body[..point as usize], &body[point as usize..])
    };
    if out.contains('.') {
        let trimmed = out.trim_end_matches('0').trim_end_matches('.').len();
        out.truncate(trimmed);
    }
    if negative {
        out.insert(0, '-');
    }
    out
}

fn pow10(e: i64) -> BigRational {
    let p = BigInt::from(10).pow(e.unsigned_abs() as u32);
    if e >= 0 {
        BigRational::from_integer(p)
    } else {
        BigRational::new(BigInt::one(), p)
    }
}

pub fn write_json<W: Write, T: Serialize>(mut out: W, rows: &[T]) -> std::io::Result<()> {
    serde_json::to_writer_pretty(&mut out, rows)?;
    out.write_all(b"\n")
}

pub fn write_csv<W: Write, T: Serialize>(out: W, rows: &[T]) -> std::io::Result<()> {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(out);
    for row in rows {
        w.serialize(row)?;
    }
    w.flush()
}
