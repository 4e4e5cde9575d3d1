//! Exact rationals and the extended value type used for valuations.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Rat = BigRational;

pub fn rat(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

pub fn ri(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

/// Canonical text form `a/b`, always with an explicit denominator.
pub fn rat_to_string(r: &Rat) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

pub fn parse_rat(s: &str) -> Result<Rat> {
    let s = s.trim();
    let bad = || Error::Invalid(format!("not a rational: {s:?}"));
    match s.split_once('/') {
        Some((a, b)) => {
            let a: BigInt = a.trim().parse().map_err(|_| bad())?;
            let b: BigInt = b.trim().parse().map_err(|_| bad())?;
            if b.is_zero() {
                return Err(bad());
            }
            Ok(Rat::new(a, b))
        }
        None => Ok(Rat::from_integer(s.parse().map_err(|_| bad())?)),
    }
}

/// p-adic valuation of a nonzero integer.
pub fn vp_int(p: u64, n: &BigInt) -> Option<u32> {
    if n.is_zero() {
        return None;
    }
    let p = BigInt::from(p);
    let mut n = n.abs();
    let mut k = 0;
    loop {
        let (q, r) = n.div_rem(&p);
        if !r.is_zero() {
            return Some(k);
        }
        n = q;
        k += 1;
    }
}

pub fn vp_rat(p: u64, r: &Rat) -> Option<i64> {
    if r.is_zero() {
        return None;
    }
    Some(vp_int(p, r.numer())? as i64 - vp_int(p, r.denom())? as i64)
}

pub fn ceil_i64(r: &Rat) -> i64 {
    r.ceil().to_integer().to_i64().expect("ceil out of i64 range")
}

pub fn floor_i64(r: &Rat) -> i64 {
    r.floor().to_integer().to_i64().expect("floor out of i64 range")
}

pub fn rat_pow_p(p: u64, k: u32) -> Rat {
    Rat::from_integer(BigInt::from(p).pow(k))
}

pub fn is_p_integral(p: u64, r: &Rat) -> bool {
    vp_int(p, r.denom()) == Some(0) || r.denom().is_one()
}

/// A rational or +infinity; the value of zero.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum ExtRat {
    Finite(Rat),
    Infinity,
}

impl ExtRat {
    pub fn finite(&self) -> Option<&Rat> {
        match self {
            ExtRat::Finite(r) => Some(r),
            ExtRat::Infinity => None,
        }
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, ExtRat::Infinity)
    }

    pub fn min(self, other: ExtRat) -> ExtRat {
        if self <= other {
            self
        } else {
            other
        }
    }

    pub fn add_rat(&self, r: &Rat) -> ExtRat {
        match self {
            ExtRat::Finite(a) => ExtRat::Finite(a + r),
            ExtRat::Infinity => ExtRat::Infinity,
        }
    }

    pub fn scale(&self, r: &Rat) -> ExtRat {
        match self {
            ExtRat::Finite(a) => ExtRat::Finite(a * r),
            ExtRat::Infinity => ExtRat::Infinity,
        }
    }

    pub fn to_json_string(&self) -> String {
        match self {
            ExtRat::Finite(r) => rat_to_string(r),
            ExtRat::Infinity => "inf".to_string(),
        }
    }

    pub fn parse(s: &str) -> Result<ExtRat> {
        if s.trim() == "inf" {
            Ok(ExtRat::Infinity)
        } else {
            parse_rat(s).map(ExtRat::Finite)
        }
    }
}

impl From<Rat> for ExtRat {
    fn from(r: Rat) -> Self {
        ExtRat::Finite(r)
    }
}

impl PartialOrd for ExtRat {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for ExtRat {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (ExtRat::Finite(a), ExtRat::Finite(b)) => a.cmp(b),
            (ExtRat::Finite(_), ExtRat::Infinity) => Ordering::Less,
            (ExtRat::Infinity, ExtRat::Finite(_)) => Ordering::Greater,
            (ExtRat::Infinity, ExtRat::Infinity) => Ordering::Equal,
        }
    }
}

impl fmt::Display for ExtRat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_json_string())
    }
}

/// Serde adapters for `Rat` as `"a/b"` strings.
pub mod serde_rat {
    use super::*;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(r: &Rat, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&rat_to_string(r))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Rat, D::Error> {
        let s = String::deserialize(d)?;
        parse_rat(&s).map_err(serde::de::Error::custom)
    }
}

pub mod serde_rat_vec {
    use super::*;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(v: &[Rat], s: S) -> std::result::Result<S::Ok, S::Error> {
        v.iter().map(rat_to_string).collect::<Vec<_>>().serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Vec<Rat>, D::Error> {
        let v = Vec::<String>::deserialize(d)?;
        v.iter()
            .map(|s| parse_rat(s).map_err(serde::de::Error::custom))
            .collect()
    }
}

pub mod serde_ext {
    use super::*;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(r: &ExtRat, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&r.to_json_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<ExtRat, D::Error> {
        let s = String::deserialize(d)?;
        ExtRat::parse(&s).map_err(serde::de::Error::custom)
    }
}
