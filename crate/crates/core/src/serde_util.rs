//! Serde adapters for big numbers: integers that fit in `i64` are written as
//! JSON numbers, everything else as decimal strings (`"3/4"` for rationals).

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use serde::de::{self, Visitor};
use serde::{Deserializer, Serializer};
use std::fmt;

pub fn write_int<S: Serializer>(n: &BigInt, s: S) -> Result<S::Ok, S::Error> {
    match n.to_i64() {
        Some(v) => s.serialize_i64(v),
        None => s.serialize_str(&n.to_string()),
    }
}

pub fn write_rational<S: Serializer>(q: &BigRational, s: S) -> Result<S::Ok, S::Error> {
    if q.is_integer() {
        write_int(q.numer(), s)
    } else {
        s.serialize_str(&q.to_string())
    }
}

struct NumVisitor;

impl<'de> Visitor<'de> for NumVisitor {
    type Value = BigRational;

    fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
        f.write_str("an integer or a rational string such as \"3/4\"")
    }

    fn visit_i64<E: de::Error>(self, v: i64) -> Result<BigRational, E> {
        Ok(BigRational::from_integer(v.into()))
    }

    fn visit_u64<E: de::Error>(self, v: u64) -> Result<BigRational, E> {
        Ok(BigRational::from_integer(v.into()))
    }

    fn visit_str<E: de::Error>(self, v: &str) -> Result<BigRational, E> {
        let (n, d) = match v.split_once('/') {
            Some((n, d)) => (n.trim(), d.trim()),
            None => (v.trim(), "1"),
        };
        let n: BigInt = n.parse().map_err(|_| E::custom(format!("bad number `{v}`")))?;
        let d: BigInt = d.parse().map_err(|_| E::custom(format!("bad number `{v}`")))?;
        if d.is_zero() {
            return Err(E::custom("zero denominator"));
        }
        Ok(BigRational::new(n, d))
    }
}

pub fn read_rational<'de, D: Deserializer<'de>>(d: D) -> Result<BigRational, D::Error> {
    d.deserialize_any(NumVisitor)
}

pub fn read_int<'de, D: Deserializer<'de>>(d: D) -> Result<BigInt, D::Error> {
    let q = read_rational(d)?;
    if !q.is_integer() {
        return Err(de::Error::custom("expected an integer"));
    }
    Ok(q.to_integer())
}

/// `#[serde(with = "int")]` for a single `BigInt`.
pub mod int {
    pub use super::read_int as deserialize;
    pub use super::write_int as serialize;
}

/// `#[serde(with = "rational")]` for a single `BigRational`.
pub mod rational {
    pub use super::read_rational as deserialize;
    pub use super::write_rational as serialize;
}

macro_rules! seq_adapter {
    ($name:ident, $ty:ty, $write:path, $read:path) => {
        pub mod $name {
            use super::*;
            use serde::ser::SerializeSeq;
            use serde::Deserialize;

            struct W<'a>(&'a $ty);
            impl serde::Serialize for W<'_> {
                fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
                    $write(self.0, s)
                }
            }
            struct R($ty);
            impl<'de> Deserialize<'de> for R {
                fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
                    $read(d).map(R)
                }
            }

            pub fn serialize<S: Serializer>(v: &[$ty], s: S) -> Result<S::Ok, S::Error> {
                let mut seq = s.serialize_seq(Some(v.len()))?;
                for x in v {
                    seq.serialize_element(&W(x))?;
                }
                seq.end()
            }

            pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<$ty>, D::Error> {
                let v: Vec<R> = Vec::deserialize(d)?;
                Ok(v.into_iter().map(|r| r.0).collect())
            }
        }
    };
}

seq_adapter!(int_vec, BigInt, write_int, read_int);
seq_adapter!(rational_vec, BigRational, write_rational, read_rational);

/// Row-major integer matrices.
pub mod int_rows {
    use super::*;
    use serde::ser::SerializeSeq;
    use serde::{Deserialize, Serialize};

    #[derive(Serialize, Deserialize)]
    struct Row(#[serde(with = "super::int_vec")] Vec<BigInt>);

    pub fn serialize<S: Serializer>(rows: &[Vec<BigInt>], s: S) -> Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(rows.len()))?;
        for r in rows {
            seq.serialize_element(&Row(r.clone()))?;
        }
        seq.end()
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Vec<BigInt>>, D::Error> {
        let v: Vec<Row> = Vec::deserialize(d)?;
        Ok(v.into_iter().map(|r| r.0).collect())
    }
}
