//! Decimal-string serialization: integers and rationals as strings
//! (`"-12"`, `"7/5"`), intervals as `["lo", "hi"]`.

use serde::de::Error as _;
use serde::ser::SerializeTuple;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::{BigInt, Interval, Rational};

pub fn bigint<S: Serializer>(n: &BigInt, s: S) -> Result<S::Ok, S::Error> {
    s.collect_str(n)
}

pub fn rational<S: Serializer>(q: &Rational, s: S) -> Result<S::Ok, S::Error> {
    s.collect_str(q)
}

pub fn bigint_vec<S: Serializer>(v: &[BigInt], s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(|n| n.to_string()))
}

pub fn rational_vec<S: Serializer>(v: &[Rational], s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(|q| q.to_string()))
}

pub fn bigint_from_str<'de, D: Deserializer<'de>>(d: D) -> Result<BigInt, D::Error> {
    let s = String::deserialize(d)?;
    s.parse().map_err(D::Error::custom)
}

pub fn rational_from_str<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
    let s = String::deserialize(d)?;
    s.parse().map_err(D::Error::custom)
}

impl Serialize for Interval {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut t = s.serialize_tuple(2)?;
        t.serialize_element(&self.lo().to_string())?;
        t.serialize_element(&self.hi().to_string())?;
        t.end()
    }
}

impl<'de> Deserialize<'de> for Interval {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let [lo, hi] = <[String; 2]>::deserialize(d)?;
        let lo: Rational = lo.parse().map_err(D::Error::custom)?;
        let hi: Rational = hi.parse().map_err(D::Error::custom)?;
        if lo > hi {
            return Err(D::Error::custom("interval endpoints out of order"));
        }
        Ok(Interval::new(lo, hi))
    }
}
