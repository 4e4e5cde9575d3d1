use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use super::vector::{WittArith, WittVec};
use crate::arith::fq::{Fq, FqField};
use crate::arith::padic::PadicTrunc;
use crate::arith::rat::{parse_rat, rat_to_string, Rat};
use crate::arith::ring::Ring;
use crate::error::{invalid, Error, Result};

/// JSON form of a Witt vector: the component array plus a tag naming the
/// coefficient ring.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "ring", rename_all = "lowercase")]
pub enum WittJson {
    /// Integer components as decimal strings.
    Int { p: u64, comps: Vec<String> },
    /// Rational components as "a/b" strings.
    Rat { p: u64, comps: Vec<String> },
    /// Components in Z/p^M.
    Zp {
        p: u64,
        #[serde(rename = "M")]
        m: u32,
        comps: Vec<u64>,
    },
    /// Components in F_{p^m} as coordinate arrays.
    Fq { p: u64, m: u32, comps: Vec<Vec<u32>> },
}

/// A parsed Witt vector over one of the supported rings.
#[derive(Clone, Debug, PartialEq)]
pub enum AnyWitt {
    Int(WittVec<BigInt>),
    Rat(WittVec<Rat>),
    Zp(WittVec<PadicTrunc>),
    Fq(WittVec<Fq>),
}

fn parse_int(s: &str) -> Result<BigInt> {
    s.parse().map_err(|e| Error::Invalid(format!("integer {s:?}: {e}")))
}

impl WittJson {
    pub fn parse(&self) -> Result<AnyWitt> {
        Ok(match self {
            WittJson::Int { p, comps } => AnyWitt::Int(WittVec::new(*p, comps.iter().map(|s| parse_int(s)).collect::<Result<_>>()?)?),
            WittJson::Rat { p, comps } => AnyWitt::Rat(WittVec::new(*p, comps.iter().map(|s| parse_rat(s)).collect::<Result<_>>()?)?),
            WittJson::Zp { p, m, comps } => {
                let xs = comps
                    .iter()
                    .map(|&v| {
                        let x = PadicTrunc::from_i64(*p, *m, 0)?;
                        if v >= x.modulus() {
                            return invalid(format!("component {v} out of range mod {p}^{m}"));
                        }
                        PadicTrunc::new(*p, *m, &BigInt::from(v))
                    })
                    .collect::<Result<_>>()?;
                AnyWitt::Zp(WittVec::new(*p, xs)?)
            }
            WittJson::Fq { p, m, comps } => {
                let k = FqField::new(*p, *m)?;
                AnyWitt::Fq(WittVec::new(*p, comps.iter().map(|c| Fq::from_coords(&k, c)).collect::<Result<_>>()?)?)
            }
        })
    }
}

impl AnyWitt {
    pub fn p(&self) -> u64 {
        match self {
            AnyWitt::Int(w) => w.p,
            AnyWitt::Rat(w) => w.p,
            AnyWitt::Zp(w) => w.p,
            AnyWitt::Fq(w) => w.p,
        }
    }

    pub fn len(&self) -> usize {
        match self {
            AnyWitt::Int(w) => w.len(),
            AnyWitt::Rat(w) => w.len(),
            AnyWitt::Zp(w) => w.len(),
            AnyWitt::Fq(w) => w.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn to_json(&self) -> WittJson {
        match self {
            AnyWitt::Int(w) => WittJson::Int { p: w.p, comps: w.comps.iter().map(|c| c.to_string()).collect() },
            AnyWitt::Rat(w) => WittJson::Rat { p: w.p, comps: w.comps.iter().map(rat_to_string).collect() },
            AnyWitt::Zp(w) => WittJson::Zp { p: w.p, m: w.comps[0].m, comps: w.comps.iter().map(|c| c.value()).collect() },
            AnyWitt::Fq(w) => WittJson::Fq { p: w.p, m: w.comps[0].field.m, comps: w.comps.iter().map(|c| c.coords()).collect() },
        }
    }

    /// Ghost components in the same encoding as the components.
    pub fn ghost_json(&self) -> serde_json::Value {
        match self {
            AnyWitt::Int(w) => serde_json::json!(w.ghost().iter().map(|c| c.to_string()).collect::<Vec<_>>()),
            AnyWitt::Rat(w) => serde_json::json!(w.ghost().iter().map(rat_to_string).collect::<Vec<_>>()),
            AnyWitt::Zp(w) => serde_json::json!(w.ghost().iter().map(|c| c.value()).collect::<Vec<_>>()),
            AnyWitt::Fq(w) => serde_json::json!(w.ghost().iter().map(|c| c.coords()).collect::<Vec<_>>()),
        }
    }

    fn binop(&self, other: &AnyWitt, mul: bool) -> Result<AnyWitt> {
        if self.p() != other.p() || self.len() != other.len() {
            return Err(Error::ShapeMismatch("operands need the same p and length".into()));
        }
        let w = WittArith::new(self.p(), self.len())?;
        fn go<C: Ring>(w: &WittArith, a: &WittVec<C>, b: &WittVec<C>, mul: bool) -> Result<WittVec<C>> {
            if a.comps[0].zero_like() != b.comps[0].zero_like() {
                return Err(Error::ShapeMismatch("operands live in different rings".into()));
            }
            if mul {
                w.mul(a, b)
            } else {
                w.add(a, b)
            }
        }
        Ok(match (self, other) {
            (AnyWitt::Int(a), AnyWitt::Int(b)) => AnyWitt::Int(go(&w, a, b, mul)?),
            (AnyWitt::Rat(a), AnyWitt::Rat(b)) => AnyWitt::Rat(go(&w, a, b, mul)?),
            (AnyWitt::Zp(a), AnyWitt::Zp(b)) => AnyWitt::Zp(go(&w, a, b, mul)?),
            (AnyWitt::Fq(a), AnyWitt::Fq(b)) => AnyWitt::Fq(go(&w, a, b, mul)?),
            _ => return Err(Error::ShapeMismatch("operands carry different ring tags".into())),
        })
    }

    /// ghost(result) = ghost(self) + ghost(other), or the product for `mul`.
    pub fn ghost_respects(&self, other: &AnyWitt, result: &AnyWitt, mul: bool) -> bool {
        fn go<C: Ring>(a: &WittVec<C>, b: &WittVec<C>, c: &WittVec<C>, mul: bool) -> bool {
            let want: Vec<C> = a
                .ghost()
                .into_iter()
                .zip(b.ghost())
                .map(|(x, y)| if mul { x * y } else { x + y })
                .collect();
            c.ghost() == want
        }
        match (self, other, result) {
            (AnyWitt::Int(a), AnyWitt::Int(b), AnyWitt::Int(c)) => go(a, b, c, mul),
            (AnyWitt::Rat(a), AnyWitt::Rat(b), AnyWitt::Rat(c)) => go(a, b, c, mul),
            (AnyWitt::Zp(a), AnyWitt::Zp(b), AnyWitt::Zp(c)) => go(a, b, c, mul),
            (AnyWitt::Fq(a), AnyWitt::Fq(b), AnyWitt::Fq(c)) => go(a, b, c, mul),
            _ => false,
        }
    }

    pub fn add(&self, other: &AnyWitt) -> Result<AnyWitt> {
        self.binop(other, false)
    }

    pub fn mul(&self, other: &AnyWitt) -> Result<AnyWitt> {
        self.binop(other, true)
    }
}
