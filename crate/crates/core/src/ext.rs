//! Coordinate values of the atomic model: exact rationals extended by `+inf`.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::Error;

pub type Rational = BigRational;

/// Builds `num / den` as an exact rational. Panics if `den == 0`.
pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// A member of `(-inf, +inf]`. There is no `-inf`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum ExtValue {
    Finite(Rational),
    Infinity,
}

impl ExtValue {
    pub fn zero() -> Self {
        ExtValue::Finite(Rational::zero())
    }

    pub fn one() -> Self {
        ExtValue::Finite(Rational::one())
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, ExtValue::Infinity)
    }

    pub fn is_finite(&self) -> bool {
        !self.is_infinite()
    }

    pub fn as_finite(&self) -> Option<&Rational> {
        match self {
            ExtValue::Finite(r) => Some(r),
            ExtValue::Infinity => None,
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, ExtValue::Finite(r) if r.is_zero())
    }

    pub fn is_negative(&self) -> bool {
        matches!(self, ExtValue::Finite(r) if r.is_negative())
    }

    /// Strictly positive, `+inf` included.
    pub fn is_positive(&self) -> bool {
        match self {
            ExtValue::Finite(r) => r.is_positive(),
            ExtValue::Infinity => true,
        }
    }

    pub fn is_nonnegative(&self) -> bool {
        !self.is_negative()
    }

    /// `a + b` with `+inf` absorbing, including `(-r) + inf = inf`.
    pub fn add(&self, other: &ExtValue) -> ExtValue {
        match (self, other) {
            (ExtValue::Finite(a), ExtValue::Finite(b)) => ExtValue::Finite(a + b),
            _ => ExtValue::Infinity,
        }
    }

    /// Product under `0 * inf = 0`, `r * inf = inf` for `r > 0`. Returns `None`
    /// for a negative value times infinity.
    pub fn mul(&self, other: &ExtValue) -> Option<ExtValue> {
        match (self, other) {
            (ExtValue::Finite(a), ExtValue::Finite(b)) => Some(ExtValue::Finite(a * b)),
            (ExtValue::Infinity, ExtValue::Infinity) => Some(ExtValue::Infinity),
            (ExtValue::Finite(r), ExtValue::Infinity) | (ExtValue::Infinity, ExtValue::Finite(r)) => {
                if r.is_zero() {
                    Some(ExtValue::zero())
                } else if r.is_positive() {
                    Some(ExtValue::Infinity)
                } else {
                    None
                }
            }
        }
    }

    pub fn max(&self, other: &ExtValue) -> ExtValue {
        if self >= other { self.clone() } else { other.clone() }
    }

    pub fn min(&self, other: &ExtValue) -> ExtValue {
        if self <= other { self.clone() } else { other.clone() }
    }

    /// Lossy conversion for diagnostics only.
    pub fn to_f64(&self) -> f64 {
        match self {
            ExtValue::Finite(r) => rational_to_f64(r),
            ExtValue::Infinity => f64::INFINITY,
        }
    }
}

pub fn rational_to_f64(r: &Rational) -> f64 {
    use num_traits::ToPrimitive;
    r.to_f64().unwrap_or_else(|| {
        // Huge numerator/denominator: fall back to a ratio of scaled parts.
        let n = r.numer().to_f64().unwrap_or(f64::MAX);
        let d = r.denom().to_f64().unwrap_or(f64::MAX);
        n / d
    })
}

impl From<Rational> for ExtValue {
    fn from(r: Rational) -> Self {
        ExtValue::Finite(r)
    }
}

impl From<i64> for ExtValue {
    fn from(n: i64) -> Self {
        ExtValue::Finite(int(n))
    }
}

impl PartialOrd for ExtValue {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for ExtValue {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (ExtValue::Finite(a), ExtValue::Finite(b)) => a.cmp(b),
            (ExtValue::Finite(_), ExtValue::Infinity) => Ordering::Less,
            (ExtValue::Infinity, ExtValue::Finite(_)) => Ordering::Greater,
            (ExtValue::Infinity, ExtValue::Infinity) => Ordering::Equal,
        }
    }
}

impl fmt::Display for ExtValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtValue::Finite(r) => write!(f, "{}", r),
            ExtValue::Infinity => f.write_str("inf"),
        }
    }
}

/// Parses `"p/q"`, `"n"` or `"inf"`. Rejects zero denominators and `-inf`.
pub fn parse_rational(s: &str) -> Result<Rational, Error> {
    let t = s.trim();
    let bad = || Error::Parse(format!("`{}` is not a rational", s));
    match t.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(|_| bad())?;
            let d: BigInt = d.trim().parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(Error::Parse(format!("`{}` has a zero denominator", s)));
            }
            Ok(Rational::new(n, d))
        }
        None => {
            let n: BigInt = t.parse().map_err(|_| bad())?;
            Ok(Rational::from_integer(n))
        }
    }
}

impl FromStr for ExtValue {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim() {
            "inf" | "+inf" | "∞" => Ok(ExtValue::Infinity),
            "-inf" => Err(Error::Parse("-inf is not representable".into())),
            t => parse_rational(t).map(ExtValue::Finite),
        }
    }
}

impl Serialize for ExtValue {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for ExtValue {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Serde adapter for a bare `Rational` in `"p/q"` form.
pub mod rational_str {
    use super::*;

    pub fn serialize<S: Serializer>(r: &Rational, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(r)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
        let s = String::deserialize(d)?;
        parse_rational(&s).map_err(serde::de::Error::custom)
    }
}

pub mod rational_vec_str {
    use super::*;

    pub fn serialize<S: Serializer>(v: &[Rational], s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(v.iter().map(|r| r.to_string()))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Rational>, D::Error> {
        let v = Vec::<String>::deserialize(d)?;
        v.iter()
            .map(|s| parse_rational(s).map_err(serde::de::Error::custom))
            .collect()
    }
}
