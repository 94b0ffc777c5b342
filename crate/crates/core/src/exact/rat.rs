//! Arbitrary-precision rationals.
//!
//! `Rat` is `num_rational::BigRational`, which already keeps
//! `gcd(num, den) = 1` with a positive denominator and represents zero as
//! `0/1`. This module only adds constructors and the `"num/den"` string form.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

pub type Rat = num_rational::BigRational;

/// `n/d` as a canonical rational. Panics if `d == 0`.
pub fn rat(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

pub fn zero() -> Rat {
    Rat::zero()
}

pub fn one() -> Rat {
    Rat::one()
}

/// Serializes as `"num/den"`, omitting the denominator when it is 1.
pub fn to_string(r: &Rat) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Parses `"-3/4"`, `"5"`, or a finite decimal such as `"0.25"`.
pub fn parse(s: &str) -> Result<Rat> {
    let s = s.trim();
    let bad = || Error::Parse(format!("not a rational: {s:?}"));
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.trim().parse().map_err(|_| bad())?;
        let d: BigInt = d.trim().parse().map_err(|_| bad())?;
        if d.is_zero() {
            return Err(bad());
        }
        return Ok(Rat::new(n, d));
    }
    if let Some((ip, fp)) = s.split_once('.') {
        let neg = ip.starts_with('-');
        let digits = format!("{}{}", ip.trim_start_matches(['-', '+']), fp);
        let n: BigInt = digits.parse().map_err(|_| bad())?;
        let d = num_traits::pow(BigInt::from(10), fp.len());
        let r = Rat::new(n, d);
        return Ok(if neg { -r } else { r });
    }
    let n: BigInt = s.parse().map_err(|_| bad())?;
    Ok(Rat::from_integer(n))
}

/// Nearest `f64`, for diagnostics only.
pub fn to_f64(r: &Rat) -> f64 {
    use num_traits::ToPrimitive;
    r.to_f64().unwrap_or(f64::NAN)
}

/// `x(x-1)...(x-k+1)/k!`, defined for any rational `x`.
pub fn binomial(x: &Rat, k: usize) -> Rat {
    let mut acc = one();
    for i in 0..k {
        acc = acc * (x - int(i as i64)) / int(i as i64 + 1);
    }
    acc
}

pub fn factorial(n: usize) -> BigInt {
    (1..=n).fold(BigInt::one(), |a, k| a * BigInt::from(k))
}

/// Returns `Some(k)` when `r` is an integer that fits in `i64`.
pub fn as_integer(r: &Rat) -> Option<i64> {
    use num_traits::ToPrimitive;
    if r.is_integer() {
        r.numer().to_i64()
    } else {
        None
    }
}

pub fn abs(r: &Rat) -> Rat {
    r.abs()
}

pub mod serde_rat {
    //! `#[serde(with = "serde_rat")]` helpers for a single `Rat`.
    use super::Rat;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(r: &Rat, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&super::to_string(r))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rat, D::Error> {
        let v = serde_json::Value::deserialize(d)?;
        super::from_json(&v).map_err(serde::de::Error::custom)
    }
}

/// Accepts a JSON string (`"-3/4"`) or a JSON integer.
pub fn from_json(v: &serde_json::Value) -> Result<Rat> {
    match v {
        serde_json::Value::String(s) => parse(s),
        serde_json::Value::Number(n) => parse(&n.to_string()),
        other => Err(Error::Parse(format!("expected rational, got {other}"))),
    }
}
