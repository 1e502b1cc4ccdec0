//! Exact time values.
//!
//! Every quantity that feeds a scheduling decision is an exact rational so
//! argmin/argmax selections never depend on floating rounding.

use std::fmt;
use std::iter::Sum;
use std::ops::Add;
use std::str::FromStr;

use num_integer::Integer;
use num_traits::{CheckedAdd, CheckedMul, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Exact rational number used for durations and ratios.
pub type Rational = num_rational::Ratio<i128>;

/// Largest number of fractional digits accepted in decimal input.
const MAX_FRACTION_DIGITS: usize = 30;

/// A non-negative exact amount of abstract time units.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Duration(Rational);

impl Duration {
    pub const ZERO: Duration = Duration(Rational::new_raw(0, 1));

    /// Wraps a rational, rejecting negative values.
    pub fn new(value: Rational) -> Result<Self> {
        if value.is_negative() {
            return Err(Error::NegativeValue {
                location: "duration".into(),
                value: format_exact(&value),
            });
        }
        Ok(Duration(value))
    }

    pub fn from_integer(value: u64) -> Self {
        Duration(Rational::from_integer(value as i128))
    }

    /// `numer / denom`; fails on a zero denominator or a negative result.
    pub fn from_fraction(numer: i128, denom: i128) -> Result<Self> {
        if denom == 0 {
            return Err(Error::parse("duration", "zero denominator"));
        }
        Duration::new(Rational::new(numer, denom))
    }

    pub fn value(&self) -> Rational {
        self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    pub fn checked_add(&self, other: &Duration) -> Option<Duration> {
        self.0.checked_add(&other.0).map(Duration)
    }

    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().unwrap_or(f64::NAN)
    }

    /// Integer, finite decimal, or `p/q` form; parses back to the same value.
    pub fn to_exact_string(&self) -> String {
        format_exact(&self.0)
    }

    /// Integer when integral, else a decimal rounded to at most six places.
    pub fn to_display_string(&self) -> String {
        format_approx(&self.0, 6)
    }
}

impl Add for Duration {
    type Output = Duration;

    fn add(self, rhs: Duration) -> Duration {
        self.checked_add(&rhs).expect("duration overflow")
    }
}

impl Sum for Duration {
    fn sum<I: Iterator<Item = Duration>>(iter: I) -> Duration {
        iter.fold(Duration::ZERO, |acc, d| acc + d)
    }
}

impl<'a> Sum<&'a Duration> for Duration {
    fn sum<I: Iterator<Item = &'a Duration>>(iter: I) -> Duration {
        iter.copied().sum()
    }
}

impl From<u32> for Duration {
    fn from(value: u32) -> Self {
        Duration::from_integer(value as u64)
    }
}

impl fmt::Display for Duration {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_exact_string())
    }
}

impl FromStr for Duration {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let value = parse_rational(s)?;
        Duration::new(value)
    }
}

impl Serialize for Duration {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        rational_to_json(&self.0).serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Duration {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let value = serde_json::Value::deserialize(deserializer)?;
        let rational = rational_from_json(&value).map_err(serde::de::Error::custom)?;
        Duration::new(rational).map_err(serde::de::Error::custom)
    }
}

/// Parses an integer, a decimal (optionally with exponent) or a `p/q` fraction.
pub fn parse_rational(text: &str) -> Result<Rational> {
    let s = text.trim();
    let bad = |msg: &str| Error::parse(format!("number {s:?}"), msg.to_string());
    if let Some((p, q)) = s.split_once('/') {
        let numer: i128 = p.trim().parse().map_err(|_| bad("invalid numerator"))?;
        let denom: i128 = q.trim().parse().map_err(|_| bad("invalid denominator"))?;
        if denom == 0 {
            return Err(bad("zero denominator"));
        }
        return Ok(Rational::new(numer, denom));
    }

    let (mantissa, exponent) = match s.find(['e', 'E']) {
        Some(pos) => {
            let exp: i32 = s[pos + 1..].parse().map_err(|_| bad("invalid exponent"))?;
            (&s[..pos], exp)
        }
        None => (s, 0),
    };
    let (negative, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = digits.split_once('.').unwrap_or((digits, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(bad("missing digits"));
    }
    if !int_part.bytes().chain(frac_part.bytes()).all(|b| b.is_ascii_digit()) {
        return Err(bad("invalid digit"));
    }
    if frac_part.len() > MAX_FRACTION_DIGITS || exponent.unsigned_abs() as usize > MAX_FRACTION_DIGITS {
        return Err(bad("too many digits for exact representation"));
    }

    let all_digits = format!("{int_part}{frac_part}");
    let numer: i128 = if all_digits.is_empty() {
        0
    } else {
        all_digits.parse().map_err(|_| bad("value too large"))?
    };
    let scale = exponent - frac_part.len() as i32;
    let ten = |k: u32| 10i128.checked_pow(k).ok_or_else(|| bad("value too large"));
    let mut value = if scale >= 0 {
        Rational::from_integer(numer)
            .checked_mul(&Rational::from_integer(ten(scale as u32)?))
            .ok_or_else(|| bad("value too large"))?
    } else {
        Rational::new(numer, ten(scale.unsigned_abs())?)
    };
    if negative {
        value = -value;
    }
    Ok(value)
}

/// True when the reduced denominator has no prime factors besides 2 and 5.
fn is_finite_decimal(value: &Rational) -> bool {
    let mut d = *value.denom();
    while d % 2 == 0 {
        d /= 2;
    }
    while d % 5 == 0 {
        d /= 5;
    }
    d == 1
}

fn decimal_digits(value: &Rational) -> Option<String> {
    if !is_finite_decimal(value) {
        return None;
    }
    let mut places = 0u32;
    let mut scaled = *value;
    while !scaled.is_integer() {
        scaled = scaled.checked_mul(&Rational::from_integer(10))?;
        places += 1;
    }
    Some(insert_point(scaled.to_integer(), places))
}

fn insert_point(scaled: i128, places: u32) -> String {
    let sign = if scaled < 0 { "-" } else { "" };
    let digits = scaled.unsigned_abs().to_string();
    if places == 0 {
        return format!("{sign}{digits}");
    }
    let places = places as usize;
    let padded = format!("{digits:0>width$}", width = places + 1);
    let (int_part, frac_part) = padded.split_at(padded.len() - places);
    let frac_part = frac_part.trim_end_matches('0');
    if frac_part.is_empty() {
        format!("{sign}{int_part}")
    } else {
        format!("{sign}{int_part}.{frac_part}")
    }
}

/// Lossless text form: integer, finite decimal, or `p/q`.
pub fn format_exact(value: &Rational) -> String {
    if value.is_integer() {
        return value.to_integer().to_string();
    }
    decimal_digits(value).unwrap_or_else(|| format!("{}/{}", value.numer(), value.denom()))
}

/// Integer when integral, otherwise rounded half away from zero to `places` decimals.
pub fn format_approx(value: &Rational, places: u32) -> String {
    if value.is_integer() {
        return value.to_integer().to_string();
    }
    let factor = Rational::from_integer(10i128.pow(places));
    match value.checked_mul(&factor) {
        Some(scaled) => insert_point(scaled.round().to_integer(), places),
        None => format!("{:.*}", places as usize, value.to_f64().unwrap_or(f64::NAN)),
    }
}

/// JSON form used by scenario files: integers and finite decimals as numbers,
/// everything else as a `"p/q"` string.
pub fn rational_to_json(value: &Rational) -> serde_json::Value {
    let text = format_exact(value);
    if text.contains('/') {
        serde_json::Value::String(text)
    } else {
        serde_json::Number::from_str(&text)
            .map(serde_json::Value::Number)
            .unwrap_or(serde_json::Value::String(text))
    }
}

/// Report form: like [`format_approx`] but as a JSON number.
pub fn rational_to_json_approx(value: &Rational) -> serde_json::Value {
    let text = format_approx(value, 6);
    serde_json::Number::from_str(&text)
        .map(serde_json::Value::Number)
        .unwrap_or(serde_json::Value::String(text))
}

pub fn rational_from_json(value: &serde_json::Value) -> Result<Rational> {
    match value {
        // arbitrary_precision keeps the literal text, so decimals stay exact.
        serde_json::Value::Number(n) => parse_rational(&n.to_string()),
        serde_json::Value::String(s) => parse_rational(s),
        other => Err(Error::parse(
            "number",
            format!("expected number or \"p/q\" string, found {other}"),
        )),
    }
}

/// Least common multiple of the denominators, if it fits.
pub(crate) fn common_denominator<'a>(values: impl IntoIterator<Item = &'a Rational>) -> Option<i128> {
    let mut lcm = 1i128;
    for v in values {
        let d = *v.denom();
        let g = lcm.gcd(&d);
        lcm = (lcm / g).checked_mul(d)?;
    }
    Some(lcm)
}

pub(crate) fn ratio_or_zero(numer: Rational, denom: Rational) -> Rational {
    if denom.is_zero() {
        Rational::zero()
    } else {
        numer / denom
    }
}
