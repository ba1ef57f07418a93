//! Output records and their JSON-lines / CSV serialization.

use std::collections::BTreeMap;
use std::io::Write;

use clap::ValueEnum;
use commat_core::analytic::{BigFloat, RealBall};
use commat_core::ExactRational;
use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed, ToPrimitive};
use serde::Serialize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct OutputRecord {
    pub command: String,
    pub params: BTreeMap<String, String>,
    pub label: String,
    /// Decimal rendering, or `pass` / `fail` for checks.
    pub value: String,
    /// `numerator/denominator` for exact results.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub exact: Option<String>,
    /// Upper bound on `|value - true value|`, `exact`, or `n/a` for checks.
    pub certified_error: String,
    pub elapsed_ms: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

impl OutputRecord {
    pub fn new(command: &str, params: &BTreeMap<String, String>, label: &str) -> Self {
        OutputRecord {
            command: command.to_string(),
            params: params.clone(),
            label: label.to_string(),
            value: String::new(),
            exact: None,
            certified_error: "exact".into(),
            elapsed_ms: 0,
            detail: None,
        }
    }

    pub fn integer(mut self, v: &BigUint) -> Self {
        self.value = v.to_string();
        self.exact = Some(format!("{v}/1"));
        self.certified_error = "exact".into();
        self
    }

    pub fn rational(mut self, v: &ExactRational, digits: u32) -> Self {
        self.value = rational_decimal(v, digits);
        self.exact = Some(format!("{}/{}", v.numer(), v.denom()));
        self.certified_error = "exact".into();
        self
    }

    pub fn ball(mut self, b: &RealBall, digits: u32) -> Self {
        let (value, err) = ball_decimal(b, digits);
        self.value = value;
        self.exact = None;
        self.certified_error = err;
        self
    }

    pub fn with_param(mut self, key: &str, value: impl ToString) -> Self {
        self.params.insert(key.to_string(), value.to_string());
        self
    }
}

fn rational_decimal(v: &ExactRational, digits: u32) -> String {
    if v.denom().is_one() {
        return v.numer().to_string();
    }
    let bits = (digits as f64 * std::f64::consts::LOG2_10).ceil() as u32 + 16;
    BigFloat::from_ratio(v.numer(), v.denom(), bits)
        .0
        .to_decimal(digits)
}

/// Rounds `x > 0` up to two significant digits.
pub fn format_error(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return "inf".into();
    }
    let x = x * (1.0 + 1e-12);
    let mut e = x.log10().floor() as i32;
    let mut mant = (x / 10f64.powi(e - 1)).ceil() as u64;
    if mant >= 100 {
        mant = mant.div_ceil(10);
        e += 1;
    }
    format!("{}.{}e{}", mant / 10, mant % 10, e)
}

/// Decimal rendering of the midpoint and a bound covering both the ball
/// radius and the decimal rounding.
fn ball_decimal(b: &RealBall, digits: u32) -> (String, String) {
    let s = b.mid.to_decimal(digits);
    let err = match parse_decimal(&s) {
        Some(shown) => {
            let diff = (shown - b.mid.to_rational()).abs();
            b.rad + diff.to_f64().unwrap_or(f64::INFINITY) * (1.0 + 1e-12)
        }
        None => b.rad + b.mid.abs_upper() * 10f64.powi(1 - digits as i32),
    };
    (s, format_error(err))
}

/// Parses `-d.ddd` or `-d.ddde-13` style decimals.
pub fn parse_decimal(s: &str) -> Option<ExactRational> {
    let (body, exp) = match s.split_once('e') {
        Some((b, e)) => (b, e.parse::<i32>().ok()?),
        None => (s, 0),
    };
    let neg = body.starts_with('-');
    let body = body.trim_start_matches('-');
    let (int, frac) = body.split_once('.').unwrap_or((body, ""));
    let num: BigInt = format!("{int}{frac}").parse().ok()?;
    let shift = exp - frac.len() as i32;
    let ten = BigInt::from(10u32);
    let v = if shift >= 0 {
        ExactRational::from_integer(num * ten.pow(shift as u32))
    } else {
        ExactRational::new(num, ten.pow((-shift) as u32))
    };
    Some(if neg { -v } else { v })
}

/// Writes records in the selected format, in the order given.
pub enum Emitter<'a> {
    Json(&'a mut dyn Write),
    Csv(Box<csv::Writer<&'a mut dyn Write>>),
}

#[derive(Serialize)]
struct CsvRow<'r> {
    command: &'r str,
    params: String,
    label: &'r str,
    value: &'r str,
    exact: &'r str,
    certified_error: &'r str,
    elapsed_ms: u64,
    detail: &'r str,
}

impl<'a> Emitter<'a> {
    pub fn new(format: Format, out: &'a mut dyn Write) -> Self {
        match format {
            Format::Json => Emitter::Json(out),
            Format::Csv => Emitter::Csv(Box::new(csv::Writer::from_writer(out))),
        }
    }

    pub fn emit(&mut self, r: &OutputRecord) -> std::io::Result<()> {
        match self {
            Emitter::Json(w) => {
                serde_json::to_writer(&mut *w, r)?;
                w.write_all(b"\n")
            }
            Emitter::Csv(w) => {
                let params = r
                    .params
                    .iter()
                    .map(|(k, v)| format!("{k}={v}"))
                    .collect::<Vec<_>>()
                    .join(";");
                w.serialize(CsvRow {
                    command: &r.command,
                    params,
                    label: &r.label,
                    value: &r.value,
                    exact: r.exact.as_deref().unwrap_or(""),
                    certified_error: &r.certified_error,
                    elapsed_ms: r.elapsed_ms,
                    detail: r.detail.as_deref().unwrap_or(""),
                })
                .map_err(std::io::Error::other)?;
                w.flush()
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn error_rounds_up() {
        assert_eq!(format_error(1.234e-21), "1.3e-21");
        assert_eq!(format_error(9.96e-5), "1.0e-4");
        assert_eq!(format_error(0.0), "0");
        for x in [3.0, 1e-300, 7.77e12, 0.1, 123.0] {
            let shown: f64 = format_error(x).parse().unwrap();
            assert!(shown >= x && shown <= x * 1.1 + 1e-300, "{x} -> {shown}");
        }
    }

    #[test]
    fn decimal_round_trip() {
        let v = parse_decimal("-1.25e-3").unwrap();
        assert_eq!(v, ExactRational::new(BigInt::from(-1), BigInt::from(800)));
        assert_eq!(
            parse_decimal("42").unwrap(),
            ExactRational::from_integer(BigInt::from(42))
        );
        assert!(parse_decimal("abc").is_none());
    }

    #[test]
    fn rational_rendering() {
        let r = ExactRational::new(BigInt::from(8), BigInt::from(21));
        let rec = OutputRecord::new("x", &BTreeMap::new(), "l").rational(&r, 10);
        assert_eq!(rec.value, "0.3809523810");
        assert_eq!(rec.exact.as_deref(), Some("8/21"));
    }

    #[test]
    fn ball_error_covers_rounding() {
        let b = RealBall::from_ratio(&BigInt::from(1), &BigInt::from(3), 200);
        let rec = OutputRecord::new("x", &BTreeMap::new(), "l").ball(&b, 5);
        assert_eq!(rec.value, "0.33333");
        let err: f64 = rec.certified_error.parse().unwrap();
        assert!((1.0 / 3.0 - 0.33333..1e-5).contains(&err));
    }
}
