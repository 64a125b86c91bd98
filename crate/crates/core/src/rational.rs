//! Exact rational numbers and their JSON / text encodings.
//!
//! Every weight, bound and LP value in the crate is a [`Rational`]. On the
//! wire a rational is `{"num": "<int>", "den": "<int>"}` with both parts as
//! decimal strings so arbitrarily large values survive JSON round-trips.

use std::fmt;
use std::str::FromStr;

use num::{BigInt, BigRational, One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

pub type Rational = BigRational;

pub fn int(v: i64) -> Rational {
    Rational::from_integer(BigInt::from(v))
}

pub fn ratio(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn zero() -> Rational {
    Rational::zero()
}

pub fn one() -> Rational {
    Rational::one()
}

pub fn to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

/// Round `x` to the nearest multiple of `1/den`.
pub fn snap(x: f64, den: i64) -> Rational {
    let scaled = (x * den as f64).round() as i64;
    Rational::new(BigInt::from(scaled), BigInt::from(den))
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("cannot parse rational `{0}`")]
pub struct ParseRationalError(pub String);

/// Parses `"p/q"`, `"p"` or a finite decimal such as `"0.25"`.
pub fn parse(s: &str) -> Result<Rational, ParseRationalError> {
    let err = || ParseRationalError(s.to_string());
    let s = s.trim();
    if let Some((p, q)) = s.split_once('/') {
        let p = BigInt::from_str(p.trim()).map_err(|_| err())?;
        let q = BigInt::from_str(q.trim()).map_err(|_| err())?;
        if q.is_zero() {
            return Err(err());
        }
        return Ok(Rational::new(p, q));
    }
    if let Some((ip, fp)) = s.split_once('.') {
        if fp.is_empty() || !fp.chars().all(|c| c.is_ascii_digit()) {
            return Err(err());
        }
        let neg = ip.starts_with('-');
        let ip = if ip.is_empty() || ip == "-" { "0" } else { ip.trim_start_matches('-') };
        let whole = BigInt::from_str(ip).map_err(|_| err())?;
        let frac = BigInt::from_str(fp).map_err(|_| err())?;
        let den = num::pow(BigInt::from(10), fp.len());
        let mut r = Rational::new(whole * &den + frac, den);
        if neg {
            r = -r;
        }
        return Ok(r);
    }
    BigInt::from_str(s).map(Rational::from_integer).map_err(|_| err())
}

/// Wire form of a rational.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RationalJson {
    pub num: String,
    pub den: String,
}

impl From<&Rational> for RationalJson {
    fn from(r: &Rational) -> Self {
        RationalJson {
            num: r.numer().to_string(),
            den: r.denom().to_string(),
        }
    }
}

impl TryFrom<&RationalJson> for Rational {
    type Error = ParseRationalError;

    fn try_from(j: &RationalJson) -> Result<Self, Self::Error> {
        let err = || ParseRationalError(format!("{}/{}", j.num, j.den));
        let num = BigInt::from_str(&j.num).map_err(|_| err())?;
        let den = BigInt::from_str(&j.den).map_err(|_| err())?;
        if den.is_zero() {
            return Err(err());
        }
        Ok(Rational::new(num, den))
    }
}

/// `#[serde(with = "crate::rational::serde_rational")]`
pub mod serde_rational {
    use super::*;

    pub fn serialize<S: Serializer>(r: &Rational, s: S) -> Result<S::Ok, S::Error> {
        RationalJson::from(r).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
        let j = RationalJson::deserialize(d)?;
        Rational::try_from(&j).map_err(serde::de::Error::custom)
    }
}

/// `#[serde(with = "crate::rational::serde_rational_vec")]`
pub mod serde_rational_vec {
    use super::*;

    pub fn serialize<S: Serializer>(v: &[Rational], s: S) -> Result<S::Ok, S::Error> {
        let js: Vec<RationalJson> = v.iter().map(RationalJson::from).collect();
        js.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Rational>, D::Error> {
        let js = Vec::<RationalJson>::deserialize(d)?;
        js.iter()
            .map(|j| Rational::try_from(j).map_err(serde::de::Error::custom))
            .collect()
    }
}

/// Display helper producing `p/q` (or `p` for integers).
pub struct Show<'a>(pub &'a Rational);

impl fmt::Display for Show<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.denom().is_one() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

pub fn is_nonnegative(r: &Rational) -> bool {
    !r.is_negative()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_fraction_integer_and_decimal() {
        assert_eq!(parse("3/6").unwrap(), ratio(1, 2));
        assert_eq!(parse(" 7 ").unwrap(), int(7));
        assert_eq!(parse("0.25").unwrap(), ratio(1, 4));
        assert_eq!(parse("-1.5").unwrap(), ratio(-3, 2));
        assert!(parse("1/0").is_err());
        assert!(parse("x").is_err());
    }

    #[test]
    fn json_shape() {
        let j = serde_json::to_string(&RationalJson::from(&ratio(2, 6))).unwrap();
        assert_eq!(j, r#"{"num":"1","den":"3"}"#);
    }

    #[test]
    fn snapping() {
        assert_eq!(snap(0.5, 1_000_000), ratio(1, 2));
        assert_eq!(snap(1.0 / 3.0, 1_000_000), ratio(333_333, 1_000_000));
    }
}
