use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Sub};

use num_traits::{Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::arith::rat::{parse_rat, rat_to_string, Rat};
use crate::error::{Error, Result};

/// An element of J_r, compared lexicographically; a longer vector exceeds
/// every shorter one.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct LexIndex(pub Vec<Rat>);

impl LexIndex {
    pub fn new(coords: Vec<Rat>) -> LexIndex {
        assert!(!coords.is_empty(), "LexIndex needs r >= 1");
        LexIndex(coords)
    }

    pub fn zero(r: usize) -> LexIndex {
        LexIndex(vec![Rat::zero(); r])
    }

    pub fn from_ints(v: &[i64]) -> LexIndex {
        LexIndex(v.iter().map(|&x| Rat::from_integer(x.into())).collect())
    }

    /// (0, ..., 0, 1) in dimension r.
    pub fn last_unit(r: usize) -> LexIndex {
        let mut v = vec![Rat::zero(); r];
        v[r - 1] = Rat::from_integer(1.into());
        LexIndex(v)
    }

    pub fn r(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[Rat] {
        &self.0
    }

    pub fn first(&self) -> &Rat {
        &self.0[0]
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|x| x.is_zero())
    }

    /// Membership in J_r: lexicographically at least zero.
    pub fn in_j(&self) -> bool {
        self.lex_cmp(&LexIndex::zero(self.r())) != Ordering::Less
    }

    pub fn lex_cmp(&self, other: &LexIndex) -> Ordering {
        self.cmp(other)
    }

    pub fn check_dim(&self, other: &LexIndex) -> Result<()> {
        if self.r() != other.r() {
            return Err(Error::DimMismatch(format!("r = {} vs r = {}", self.r(), other.r())));
        }
        Ok(())
    }

    pub fn scale(&self, s: &Rat) -> LexIndex {
        LexIndex(self.0.iter().map(|x| x * s).collect())
    }

    /// Componentwise product with a diagonal.
    pub fn diag_mul(&self, diag: &[Rat]) -> LexIndex {
        LexIndex(self.0.iter().zip(diag).map(|(x, d)| x * d).collect())
    }

    pub fn max(self, other: LexIndex) -> LexIndex {
        if self >= other {
            self
        } else {
            other
        }
    }

    pub fn min(self, other: LexIndex) -> LexIndex {
        if self <= other {
            self
        } else {
            other
        }
    }

    pub fn is_negative(&self) -> bool {
        self.0.iter().find(|x| !x.is_zero()).is_some_and(|x| x.is_negative())
    }
}

impl Ord for LexIndex {
    fn cmp(&self, other: &Self) -> Ordering {
        match self.r().cmp(&other.r()) {
            Ordering::Equal => self.0.cmp(&other.0),
            o => o,
        }
    }
}

impl PartialOrd for LexIndex {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Add for &LexIndex {
    type Output = LexIndex;
    fn add(self, rhs: &LexIndex) -> LexIndex {
        assert_eq!(self.r(), rhs.r(), "adding LexIndex of different dimensions");
        LexIndex(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }
}

impl Sub for &LexIndex {
    type Output = LexIndex;
    fn sub(self, rhs: &LexIndex) -> LexIndex {
        assert_eq!(self.r(), rhs.r(), "subtracting LexIndex of different dimensions");
        LexIndex(self.0.iter().zip(&rhs.0).map(|(a, b)| a - b).collect())
    }
}

impl fmt::Debug for LexIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, x) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, ")")
    }
}

impl fmt::Display for LexIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

/// Parses "a, b, ..." with optional surrounding parentheses.
impl std::str::FromStr for LexIndex {
    type Err = crate::error::Error;

    fn from_str(s: &str) -> Result<LexIndex> {
        let inner = s.trim().trim_start_matches('(').trim_end_matches(')');
        let coords = inner.split(',').map(parse_rat).collect::<Result<Vec<_>>>()?;
        Ok(LexIndex(coords))
    }
}

impl Serialize for LexIndex {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.0.iter().map(rat_to_string).collect::<Vec<_>>().serialize(s)
    }
}

impl<'de> Deserialize<'de> for LexIndex {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let v = Vec::<String>::deserialize(d)?;
        if v.is_empty() {
            return Err(serde::de::Error::custom("LexIndex needs at least one coordinate"));
        }
        let coords = v.iter().map(|s| parse_rat(s)).collect::<Result<Vec<_>>>().map_err(serde::de::Error::custom)?;
        Ok(LexIndex(coords))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat::rat;

    #[test]
    fn lexicographic_and_cross_dimension_order() {
        let a = LexIndex::from_ints(&[1, 5]);
        let b = LexIndex::from_ints(&[2, -7]);
        assert!(a < b);
        assert!(LexIndex::from_ints(&[0, 0]) > LexIndex::from_ints(&[1000]));
        assert!(LexIndex::new(vec![rat(1, 2), rat(0, 1)]) < LexIndex::new(vec![rat(1, 2), rat(1, 3)]));
    }

    #[test]
    fn j_membership() {
        assert!(LexIndex::from_ints(&[0, 3]).in_j());
        assert!(LexIndex::from_ints(&[1, -3]).in_j());
        assert!(!LexIndex::from_ints(&[0, -1]).in_j());
        assert!(LexIndex::from_ints(&[0, -1]).is_negative());
    }

    #[test]
    fn json_round_trip() {
        let a = LexIndex::new(vec![rat(3, 2), rat(-1, 1)]);
        let s = serde_json::to_string(&a).unwrap();
        assert_eq!(s, r#"["3/2","-1/1"]"#);
        assert_eq!(serde_json::from_str::<LexIndex>(&s).unwrap(), a);
        assert_eq!("(3/2, -1)".parse::<LexIndex>().unwrap(), a);
        assert_eq!("3/2,-1".parse::<LexIndex>().unwrap(), a);
        assert!("1,x".parse::<LexIndex>().is_err());
    }
}
