//! Exact rational scalars.
//!
//! Every cost, price, and ratio in the game is an exact rational; stability
//! decisions are never made in floating point because equilibrium membership
//! can flip on exact ties.

use alloc::string::{String, ToString};

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::error::Error;

/// Exact rational number (reduced big-integer fraction).
pub type Scalar = num_rational::BigRational;

/// Scalar from an integer.
pub fn scalar(v: i64) -> Scalar {
    Scalar::from_integer(BigInt::from(v))
}

/// Scalar from an unsigned count.
pub fn scalar_u(v: u64) -> Scalar {
    Scalar::from_integer(BigInt::from(v))
}

/// Scalar `p/q`. Panics if `q == 0`.
pub fn ratio(p: i64, q: i64) -> Scalar {
    Scalar::new(BigInt::from(p), BigInt::from(q))
}

/// Parses a scalar from `"p/q"`, an integer string, or a decimal string
/// (`"2.75"` becomes `11/4` exactly).
pub fn parse_scalar(s: &str) -> Result<Scalar, Error> {
    let s = s.trim();
    let bad = |why: &str| Error::Parse(alloc::format!("invalid rational {s:?}: {why}"));
    if let Some((p, q)) = s.split_once('/') {
        let p: BigInt = p.trim().parse().map_err(|_| bad("bad numerator"))?;
        let q: BigInt = q.trim().parse().map_err(|_| bad("bad denominator"))?;
        if q.is_zero() {
            return Err(bad("zero denominator"));
        }
        return Ok(Scalar::new(p, q));
    }
    if let Some((int, frac)) = s.split_once('.') {
        let negative = int.trim_start().starts_with('-');
        let int: BigInt = if int.is_empty() || int == "-" {
            BigInt::zero()
        } else {
            int.parse().map_err(|_| bad("bad integer part"))?
        };
        if frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad("bad fractional part"));
        }
        let digits: BigInt = frac.parse().map_err(|_| bad("bad fractional part"))?;
        let scale = BigInt::from(10u32).pow(frac.len() as u32);
        let frac_part = Scalar::new(digits, scale);
        let int_part = Scalar::from_integer(int);
        return Ok(if negative { int_part - frac_part } else { int_part + frac_part });
    }
    let p: BigInt = s.parse().map_err(|_| bad("not an integer"))?;
    Ok(Scalar::from_integer(p))
}

/// `"p/q"` for non-integers, plain integer string otherwise.
pub fn format_scalar(v: &Scalar) -> String {
    v.to_string()
}

/// Best-effort conversion to `f64` (used only on the float side of
/// log-based bound checks, never for stability decisions).
pub fn to_f64(v: &Scalar) -> f64 {
    v.to_f64().unwrap_or_else(|| {
        if v.is_negative() {
            f64::NEG_INFINITY
        } else {
            f64::INFINITY
        }
    })
}

/// Serde adapter for optional scalars in `"p/q"` string form.
pub mod serde_option_string {
    use super::*;
    use serde::{de, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &Option<Scalar>, ser: S) -> Result<S::Ok, S::Error> {
        match v {
            Some(v) => ser.serialize_some(&format_scalar(v)),
            None => ser.serialize_none(),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(de: D) -> Result<Option<Scalar>, D::Error> {
        let s = Option::<String>::deserialize(de)?;
        s.map(|s| parse_scalar(&s).map_err(de::Error::custom)).transpose()
    }
}

/// Serde adapter storing scalars as their `"p/q"` string form.
pub mod serde_string {
    use super::*;
    use serde::{de, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &Scalar, ser: S) -> Result<S::Ok, S::Error> {
        ser.serialize_str(&format_scalar(v))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(de: D) -> Result<Scalar, D::Error> {
        let s = String::deserialize(de)?;
        parse_scalar(&s).map_err(de::Error::custom)
    }
}
