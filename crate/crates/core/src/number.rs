//! Exact and floating-point scalars used in results and inputs.
//!
//! Exact solvers report [`BigRational`]s. Inputs (imputations, ε) may be
//! written either as JSON numbers or as strings such as `"1/3"` or `"0.25"`;
//! both are converted to rationals without rounding, so a float input is
//! taken at its exact binary value.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

/// Absolute tolerance for sums and comparisons of user-supplied reals.
pub const TOLERANCE: f64 = 1e-9;

/// [`TOLERANCE`] as an exact rational (10⁻⁹).
pub fn tolerance() -> BigRational {
    BigRational::new(BigInt::one(), BigInt::from(1_000_000_000u64))
}

pub fn ratio(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

pub fn to_f64(r: &BigRational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

/// A result value: exact when an exact solver produced it.
#[derive(Clone, Debug, PartialEq)]
pub enum Number {
    Exact(BigRational),
    Float(f64),
}

impl Number {
    pub fn to_f64(&self) -> f64 {
        match self {
            Number::Exact(r) => to_f64(r),
            Number::Float(x) => *x,
        }
    }

    pub fn as_exact(&self) -> Option<&BigRational> {
        match self {
            Number::Exact(r) => Some(r),
            Number::Float(_) => None,
        }
    }

    /// `"num/den"` for exact values, `None` for floats.
    pub fn rational_string(&self) -> Option<String> {
        self.as_exact().map(format_ratio)
    }
}

impl fmt::Display for Number {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Number::Exact(r) => f.write_str(&format_ratio(r)),
            Number::Float(x) => write!(f, "{x}"),
        }
    }
}

/// Formats as `num/den`, or just `num` for integers.
pub fn format_ratio(r: &BigRational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Parses `"3"`, `"-1/3"`, `"0.25"` or `"1.5e-3"` exactly.
pub fn parse_ratio(s: &str) -> Option<BigRational> {
    let s = s.trim();
    if s.is_empty() {
        return None;
    }
    if let Some((n, d)) = s.split_once('/') {
        let n = BigInt::from_str(n.trim()).ok()?;
        let d = BigInt::from_str(d.trim()).ok()?;
        if d.is_zero() {
            return None;
        }
        return Some(BigRational::new(n, d));
    }
    let (mantissa, exponent) = match s.find(['e', 'E']) {
        Some(i) => (&s[..i], s[i + 1..].parse::<i32>().ok()?),
        None => (s, 0),
    };
    let (negative, mantissa) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = mantissa.split_once('.').unwrap_or((mantissa, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    if !int_part
        .chars()
        .chain(frac_part.chars())
        .all(|c| c.is_ascii_digit())
    {
        return None;
    }
    let digits = format!("{int_part}{frac_part}");
    let mut value = BigRational::from_integer(BigInt::from_str(&digits).ok()?);
    let scale = exponent - frac_part.len() as i32;
    let ten = BigRational::from_integer(BigInt::from(10));
    let power = num_traits::pow(ten, scale.unsigned_abs() as usize);
    if scale >= 0 {
        value *= power;
    } else {
        value /= power;
    }
    Some(if negative { -value } else { value })
}

/// A real read from JSON: either a number or a string accepted by
/// [`parse_ratio`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Real(pub BigRational);

impl Serialize for Real {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&format_ratio(&self.0))
    }
}

impl<'de> Deserialize<'de> for Real {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        use serde::de::Error;
        match serde_json::Value::deserialize(d)? {
            serde_json::Value::String(s) => parse_ratio(&s)
                .map(Real)
                .ok_or_else(|| D::Error::custom(format!("not a real number: {s:?}"))),
            serde_json::Value::Number(n) => {
                if let Some(i) = n.as_i64() {
                    Ok(Real(BigRational::from_integer(i.into())))
                } else if let Some(u) = n.as_u64() {
                    Ok(Real(BigRational::from_integer(u.into())))
                } else {
                    let x = n.as_f64().ok_or_else(|| D::Error::custom("bad number"))?;
                    BigRational::from_float(x)
                        .map(Real)
                        .ok_or_else(|| D::Error::custom("non-finite number"))
                }
            }
            other => Err(D::Error::custom(format!("expected a number, got {other}"))),
        }
    }
}

pub(crate) fn is_nonneg_within_tol(r: &BigRational) -> bool {
    !r.is_negative() || -r <= tolerance()
}

pub(crate) fn approx_eq(a: &BigRational, b: &BigRational) -> bool {
    (a - b).abs() <= tolerance()
}
