//! Numeric backends for weights and tau values.
//!
//! Everything in the dynamics is subtraction-free, so the same code runs on
//! exact rationals (`BigRational`) and on binary64 floats.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Num, One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Rational = BigRational;

/// Arithmetic needed by the dynamics and by tau evaluation.
pub trait Scalar:
    Clone + fmt::Debug + PartialEq + PartialOrd + Num + Signed + Send + Sync + 'static
{
    fn from_i64(v: i64) -> Self;
    fn to_f64(&self) -> f64;
    fn parse(s: &str) -> Result<Self>;
    fn render(&self) -> String;
    /// `true` for exact arithmetic.
    fn is_exact() -> bool;

    fn is_positive_strict(&self) -> bool {
        *self > Self::zero()
    }

    /// Integer power, negative exponents allowed.
    fn powi(&self, exp: i64) -> Self {
        let mut base = if exp < 0 { Self::one() / self.clone() } else { self.clone() };
        let mut e = exp.unsigned_abs();
        let mut acc = Self::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base.clone();
            }
            e >>= 1;
            if e > 0 {
                base = base.clone() * base;
            }
        }
        acc
    }
}

impl Scalar for f64 {
    fn from_i64(v: i64) -> Self {
        v as f64
    }

    fn to_f64(&self) -> f64 {
        *self
    }

    fn parse(s: &str) -> Result<Self> {
        let s = s.trim();
        if let Some((p, q)) = s.split_once('/') {
            let p: f64 = p.trim().parse().map_err(|_| Error::ParseScalar(s.to_string()))?;
            let q: f64 = q.trim().parse().map_err(|_| Error::ParseScalar(s.to_string()))?;
            return Ok(p / q);
        }
        s.parse().map_err(|_| Error::ParseScalar(s.to_string()))
    }

    fn render(&self) -> String {
        format!("{self:?}")
    }

    fn is_exact() -> bool {
        false
    }

    fn powi(&self, exp: i64) -> Self {
        f64::powi(*self, exp as i32)
    }
}

impl Scalar for BigRational {
    fn from_i64(v: i64) -> Self {
        BigRational::from_integer(BigInt::from(v))
    }

    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }

    fn parse(s: &str) -> Result<Self> {
        parse_rational(s)
    }

    fn render(&self) -> String {
        if self.denom().is_one() {
            self.numer().to_string()
        } else {
            format!("{}/{}", self.numer(), self.denom())
        }
    }

    fn is_exact() -> bool {
        true
    }
}

/// Parses `p/q`, an integer, or a finite decimal such as `-1.25` exactly.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::ParseScalar(s.to_string());
    if let Some((p, q)) = s.split_once('/') {
        let p = BigInt::from_str(p.trim()).map_err(|_| bad())?;
        let q = BigInt::from_str(q.trim()).map_err(|_| bad())?;
        if q.is_zero() {
            return Err(bad());
        }
        return Ok(BigRational::new(p, q));
    }
    if let Some((int, frac)) = s.split_once('.') {
        if frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        let negative = int.starts_with('-');
        let int_part = if int.is_empty() || int == "-" || int == "+" {
            BigInt::zero()
        } else {
            BigInt::from_str(int).map_err(|_| bad())?
        };
        let scale = BigInt::from(10u32).pow(frac.len() as u32);
        let frac_part = BigInt::from_str(frac).map_err(|_| bad())?;
        let mag = int_part.abs() * &scale + frac_part;
        let numer = if negative { -mag } else { mag };
        return Ok(BigRational::new(numer, scale));
    }
    BigInt::from_str(s).map(BigRational::from_integer).map_err(|_| bad())
}

/// Convenience constructor used throughout tests and examples.
pub fn rat(p: i64, q: i64) -> Rational {
    BigRational::new(BigInt::from(p), BigInt::from(q))
}

/// Converts a slice of scalars to floats.
pub fn to_f64_vec<S: Scalar>(xs: &[S]) -> Vec<f64> {
    xs.iter().map(Scalar::to_f64).collect()
}

/// Maximum of `|a_i - b_i| / (1 + |b_i|)` over two equal-length vectors.
pub fn max_rel_diff<S: Scalar>(a: &[S], b: &[S]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| {
            let (x, y) = (x.to_f64(), y.to_f64());
            (x - y).abs() / (1.0 + y.abs())
        })
        .fold(0.0, f64::max)
}

/// Serde adapter: exact scalars as strings, floats as numbers; both
/// forms are accepted on input.
pub mod serde_scalar {
    use serde::de::Error as _;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    use super::Scalar;

    #[derive(Serialize, Deserialize)]
    #[serde(untagged)]
    enum Raw {
        Number(f64),
        Text(String),
    }

    pub fn serialize<S: Scalar, Ser: Serializer>(v: &S, ser: Ser) -> Result<Ser::Ok, Ser::Error> {
        if S::is_exact() {
            ser.serialize_str(&v.render())
        } else {
            ser.serialize_f64(v.to_f64())
        }
    }

    pub fn deserialize<'de, S: Scalar, D: Deserializer<'de>>(de: D) -> Result<S, D::Error> {
        let text = match Raw::deserialize(de)? {
            Raw::Number(x) => format!("{x:?}"),
            Raw::Text(t) => t,
        };
        S::parse(&text).map_err(D::Error::custom)
    }

    pub mod vec {
        use serde::ser::SerializeSeq;
        use serde::{Deserialize, Deserializer, Serializer};

        use crate::scalar::Scalar;

        #[derive(Deserialize)]
        struct Item<S: Scalar>(#[serde(with = "super")] S);

        pub fn serialize<S: Scalar, Ser: Serializer>(v: &[S], ser: Ser) -> Result<Ser::Ok, Ser::Error> {
            let mut seq = ser.serialize_seq(Some(v.len()))?;
            for x in v {
                if S::is_exact() {
                    seq.serialize_element(&x.render())?;
                } else {
                    seq.serialize_element(&x.to_f64())?;
                }
            }
            seq.end()
        }

        pub fn deserialize<'de, S: Scalar, D: Deserializer<'de>>(de: D) -> Result<Vec<S>, D::Error> {
            let items: Vec<Item<S>> = Vec::deserialize(de)?;
            Ok(items.into_iter().map(|i| i.0).collect())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_rationals() {
        assert_eq!(parse_rational("3/6").unwrap(), rat(1, 2));
        assert_eq!(parse_rational("-1.25").unwrap(), rat(-5, 4));
        assert_eq!(parse_rational("-0.5").unwrap(), rat(-1, 2));
        assert_eq!(parse_rational("7").unwrap(), rat(7, 1));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("abc").is_err());
        assert_eq!(<f64 as Scalar>::parse("1/4").unwrap(), 0.25);
    }

    #[test]
    fn integer_powers() {
        assert_eq!(rat(2, 3).powi(-2), rat(9, 4));
        assert_eq!(rat(2, 3).powi(0), rat(1, 1));
        assert_eq!(Scalar::powi(&2.0f64, -3), 0.125);
        assert_eq!(rat(-1, 2).render(), "-1/2");
    }
}
