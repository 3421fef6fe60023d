//! JSON encodings for arbitrary-precision integers and rationals.
//!
//! Integers that fit in an `i64` are written as JSON numbers, anything larger
//! as a decimal string. Both forms are accepted on input. Rationals are written
//! as integers when integral and as `"p/q"` strings otherwise.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use serde::de::{self, Visitor};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::IntMatrix;

/// Transparent wrapper carrying the number-or-string encoding.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JsonInt(pub BigInt);

impl Serialize for JsonInt {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self.0.to_i64() {
            Some(x) => s.serialize_i64(x),
            None => s.serialize_str(&self.0.to_string()),
        }
    }
}

struct JsonIntVisitor;

impl<'de> Visitor<'de> for JsonIntVisitor {
    type Value = JsonInt;

    fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("an integer or a decimal integer string")
    }

    fn visit_i64<E: de::Error>(self, v: i64) -> Result<JsonInt, E> {
        Ok(JsonInt(v.into()))
    }

    fn visit_u64<E: de::Error>(self, v: u64) -> Result<JsonInt, E> {
        Ok(JsonInt(v.into()))
    }

    fn visit_f64<E: de::Error>(self, v: f64) -> Result<JsonInt, E> {
        Err(E::custom(format!("{v} is not an integer; write large integers as decimal strings")))
    }

    fn visit_str<E: de::Error>(self, v: &str) -> Result<JsonInt, E> {
        BigInt::from_str(v.trim()).map(JsonInt).map_err(|_| E::custom(format!("{v:?} is not a decimal integer")))
    }
}

impl<'de> Deserialize<'de> for JsonInt {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        d.deserialize_any(JsonIntVisitor)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JsonRational(pub BigRational);

impl Serialize for JsonRational {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        if self.0.is_integer() {
            JsonInt(self.0.to_integer()).serialize(s)
        } else {
            s.serialize_str(&format!("{}/{}", self.0.numer(), self.0.denom()))
        }
    }
}

impl<'de> Deserialize<'de> for JsonRational {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Int(JsonInt),
            Text(String),
        }
        match Raw::deserialize(d)? {
            Raw::Int(JsonInt(n)) => Ok(JsonRational(BigRational::from_integer(n))),
            Raw::Text(t) => parse_rational(&t).map(JsonRational).ok_or_else(|| de::Error::custom(format!("{t:?} is not a rational"))),
        }
    }
}

fn parse_rational(t: &str) -> Option<BigRational> {
    match t.split_once('/') {
        Some((p, q)) => {
            let q = BigInt::from_str(q.trim()).ok()?;
            if q == BigInt::from(0) {
                return None;
            }
            Some(BigRational::new(BigInt::from_str(p.trim()).ok()?, q))
        }
        None => BigInt::from_str(t.trim()).ok().map(BigRational::from_integer),
    }
}

pub mod big {
    use super::*;

    pub fn serialize<S: Serializer>(v: &BigInt, s: S) -> Result<S::Ok, S::Error> {
        JsonInt(v.clone()).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigInt, D::Error> {
        Ok(JsonInt::deserialize(d)?.0)
    }
}

pub mod big_vec {
    use super::*;

    pub fn serialize<S: Serializer>(v: &[BigInt], s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(v.iter().map(|x| JsonInt(x.clone())))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<BigInt>, D::Error> {
        Ok(Vec::<JsonInt>::deserialize(d)?.into_iter().map(|x| x.0).collect())
    }
}

pub mod big_rows {
    use super::*;

    pub fn serialize<S: Serializer>(v: &[Vec<BigInt>], s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(v.iter().map(|r| r.iter().map(|x| JsonInt(x.clone())).collect::<Vec<_>>()))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Vec<BigInt>>, D::Error> {
        Ok(Vec::<Vec<JsonInt>>::deserialize(d)?.into_iter().map(|r| r.into_iter().map(|x| x.0).collect()).collect())
    }
}

pub mod opt_big_vec {
    use super::*;

    pub fn serialize<S: Serializer>(v: &Option<Vec<BigInt>>, s: S) -> Result<S::Ok, S::Error> {
        match v {
            Some(v) => s.collect_seq(v.iter().map(|x| JsonInt(x.clone()))),
            None => s.serialize_none(),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<Vec<BigInt>>, D::Error> {
        Ok(Option::<Vec<JsonInt>>::deserialize(d)?.map(|v| v.into_iter().map(|x| x.0).collect()))
    }
}

/// A matrix as a list of rows.
pub mod matrix {
    use super::*;

    pub fn serialize<S: Serializer>(m: &IntMatrix, s: S) -> Result<S::Ok, S::Error> {
        big_rows::serialize(&m.to_rows(), s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<IntMatrix, D::Error> {
        let rows = big_rows::deserialize(d)?;
        IntMatrix::from_rows(rows).map_err(de::Error::custom)
    }
}

pub mod opt_matrix {
    use super::*;

    pub fn serialize<S: Serializer>(m: &Option<IntMatrix>, s: S) -> Result<S::Ok, S::Error> {
        match m {
            Some(m) => matrix::serialize(m, s),
            None => s.serialize_none(),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<IntMatrix>, D::Error> {
        match Option::<Vec<Vec<JsonInt>>>::deserialize(d)? {
            None => Ok(None),
            Some(rows) => {
                let rows = rows.into_iter().map(|r| r.into_iter().map(|x| x.0).collect()).collect();
                IntMatrix::from_rows(rows).map(Some).map_err(de::Error::custom)
            }
        }
    }
}

pub mod rat_vec {
    use super::*;

    pub fn serialize<S: Serializer>(v: &[BigRational], s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(v.iter().map(|x| JsonRational(x.clone())))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<BigRational>, D::Error> {
        Ok(Vec::<JsonRational>::deserialize(d)?.into_iter().map(|x| x.0).collect())
    }
}
