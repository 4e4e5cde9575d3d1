//! Truncated iterated Laurent series k((t_N))...((t_1)) with exponents in
//! (1/D)Z^N.
//!
//! A [`TruncBox`] `[lo, hi]` describes what is known about a series, read
//! coordinate by coordinate: for an exponent vector `a`, find the first
//! coordinate `k` outside `[lo_k, hi_k]`. If `a_k < lo_k` the coefficient is
//! zero; if `a_k > hi_k` it is unknown (truncated). If there is no such
//! coordinate the coefficient is stored exactly. Every operation computes
//! the largest box on which its output is still exact.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::arith::fq::{Fq, FqField};
use crate::arith::padic::{from_teichmueller_digits, teichmueller_digits, PadicTrunc};
use crate::arith::rat::{rat, Rat};
use crate::arith::ring::Ring;
use crate::error::{invalid, Error, Result};
use crate::herbrand::LexIndex;

#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TruncBox {
    /// Common exponent denominator D.
    #[serde(rename = "D")]
    pub denom: i64,
    /// Lower window ends, as numerators over D.
    pub lo: Vec<i64>,
    /// Upper window ends, as numerators over D.
    pub hi: Vec<i64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Region {
    Known,
    Zero,
    Unknown,
}

impl fmt::Debug for TruncBox {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "box{:?}..{:?}/{}", self.lo, self.hi, self.denom)
    }
}

impl TruncBox {
    pub fn new(denom: i64, lo: Vec<i64>, hi: Vec<i64>) -> Result<TruncBox> {
        if denom < 1 {
            return invalid("exponent denominator must be >= 1");
        }
        if lo.is_empty() || lo.len() != hi.len() {
            return invalid("box bounds must have the same positive length");
        }
        if lo.iter().zip(&hi).any(|(l, h)| l > h) {
            return Err(Error::BoxExhausted(format!("empty window {lo:?}..{hi:?}")));
        }
        Ok(TruncBox { denom, lo, hi })
    }

    /// Integer exponents, the same window in every variable.
    pub fn cube(n: usize, lo: i64, hi: i64) -> Result<TruncBox> {
        Self::new(1, vec![lo; n], vec![hi; n])
    }

    pub fn n(&self) -> usize {
        self.lo.len()
    }

    pub fn region(&self, e: &[i64]) -> Region {
        for ((x, l), h) in e.iter().zip(&self.lo).zip(&self.hi) {
            if x < l {
                return Region::Zero;
            }
            if x > h {
                return Region::Unknown;
            }
        }
        Region::Known
    }

    pub fn contains(&self, e: &[i64]) -> bool {
        self.region(e) == Region::Known
    }

    pub fn is_empty(&self) -> bool {
        self.lo.iter().zip(&self.hi).any(|(l, h)| l > h)
    }

    fn compatible(&self, other: &TruncBox) -> Result<()> {
        if self.n() != other.n() || self.denom != other.denom {
            return Err(Error::BoxMismatch(format!("{self:?} vs {other:?}")));
        }
        Ok(())
    }

    /// Guarantee window of a sum.
    pub fn sum_box(&self, other: &TruncBox) -> Result<TruncBox> {
        self.compatible(other)?;
        Ok(TruncBox {
            denom: self.denom,
            lo: self.lo.iter().zip(&other.lo).map(|(a, b)| *a.min(b)).collect(),
            hi: self.hi.iter().zip(&other.hi).map(|(a, b)| *a.min(b)).collect(),
        })
    }

    /// Guarantee window of a product.
    pub fn product_box(&self, other: &TruncBox) -> Result<TruncBox> {
        self.compatible(other)?;
        let lo: Vec<i64> = self.lo.iter().zip(&other.lo).map(|(a, b)| a + b).collect();
        let hi = (0..self.n()).map(|k| (self.hi[k] + other.lo[k]).min(other.hi[k] + self.lo[k])).collect();
        Ok(TruncBox { denom: self.denom, lo, hi })
    }

    pub fn shift(&self, e: &[i64]) -> TruncBox {
        TruncBox {
            denom: self.denom,
            lo: self.lo.iter().zip(e).map(|(a, b)| a + b).collect(),
            hi: self.hi.iter().zip(e).map(|(a, b)| a + b).collect(),
        }
    }

    /// The same window over the denominator D*k.
    pub fn refine(&self, k: i64) -> TruncBox {
        TruncBox {
            denom: self.denom * k,
            lo: self.lo.iter().map(|x| x * k).collect(),
            hi: self.hi.iter().map(|x| x * k).collect(),
        }
    }
}

/// A truncated series with coefficients in `C`.
#[derive(Clone, PartialEq)]
pub struct MLaurent<C: Ring> {
    bx: TruncBox,
    terms: BTreeMap<Vec<i64>, C>,
    proto: C,
}

impl<C: Ring> fmt::Debug for MLaurent<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?} {{", self.bx)?;
        for (i, (e, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "{c:?}*t^{e:?}")?;
        }
        write!(f, "}}")
    }
}

impl<C: Ring> MLaurent<C> {
    /// The zero series; `proto` fixes the coefficient ring.
    pub fn zero(proto: &C, bx: TruncBox) -> Self {
        MLaurent { bx, terms: BTreeMap::new(), proto: proto.zero_like() }
    }

    pub fn one(proto: &C, bx: TruncBox) -> Self {
        let n = bx.n();
        Self::monomial(proto, bx, vec![0; n], proto.one_like())
    }

    /// `c * t^e`; terms beyond the window are truncated away.
    pub fn monomial(proto: &C, bx: TruncBox, e: Vec<i64>, c: C) -> Self {
        let mut s = Self::zero(proto, bx);
        s.push(e, c);
        s
    }

    /// Builds a series from terms; terms in the zero region are rejected,
    /// terms beyond the window are truncated.
    pub fn from_terms(proto: &C, bx: TruncBox, terms: impl IntoIterator<Item = (Vec<i64>, C)>) -> Result<Self> {
        let mut s = Self::zero(proto, bx);
        for (e, c) in terms {
            if e.len() != s.n() {
                return Err(Error::DimMismatch(format!("exponent {e:?} for N = {}", s.n())));
            }
            if s.bx.region(&e) == Region::Zero && !c.is_zero_elem() {
                return Err(Error::BoxExhausted(format!("term t^{e:?} lies below the window {:?}", s.bx)));
            }
            s.push(e, c);
        }
        Ok(s)
    }

    /// Adds `c * t^e` if the exponent is in the known window.
    fn push(&mut self, e: Vec<i64>, c: C) {
        if !self.bx.contains(&e) || c.is_zero_elem() {
            return;
        }
        match self.terms.entry(e) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let s = o.get().clone() + c;
                if s.is_zero_elem() {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    pub fn n(&self) -> usize {
        self.bx.n()
    }

    pub fn denom(&self) -> i64 {
        self.bx.denom
    }

    pub fn bx(&self) -> &TruncBox {
        &self.bx
    }

    pub fn proto(&self) -> &C {
        &self.proto
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<i64>, &C)> {
        self.terms.iter()
    }

    pub fn coeff(&self, e: &[i64]) -> C {
        self.terms.get(e).cloned().unwrap_or_else(|| self.proto.zero_like())
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// The same series with a narrower window.
    pub fn restrict(&self, bx: TruncBox) -> Result<Self> {
        self.bx.compatible(&bx)?;
        let mut s = Self::zero(&self.proto, bx);
        for (e, c) in &self.terms {
            s.push(e.clone(), c.clone());
        }
        Ok(s)
    }

    /// Re-expresses exponents over the denominator D*k.
    pub fn refine(&self, k: i64) -> Self {
        let bx = self.bx.refine(k);
        let terms = self.terms.iter().map(|(e, c)| (e.iter().map(|x| x * k).collect(), c.clone())).collect();
        MLaurent { bx, terms, proto: self.proto.clone() }
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        let bx = self.bx.sum_box(&other.bx)?;
        let mut s = Self::zero(&self.proto, bx);
        for (e, c) in self.terms.iter().chain(other.terms.iter()) {
            s.push(e.clone(), c.clone());
        }
        Ok(s)
    }

    pub fn negated(&self) -> Self {
        MLaurent {
            bx: self.bx.clone(),
            terms: self.terms.iter().map(|(e, c)| (e.clone(), -c.clone())).collect(),
            proto: self.proto.clone(),
        }
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.try_add(&other.negated())
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        let bx = self.bx.product_box(&other.bx)?;
        Ok(self.mul_into(other, bx))
    }

    /// Product restricted to `bx`, which the caller guarantees is a valid window.
    fn mul_into(&self, other: &Self, bx: TruncBox) -> Self {
        let mut s = Self::zero(&self.proto, bx);
        for (a, x) in &self.terms {
            for (b, y) in &other.terms {
                let e: Vec<i64> = a.iter().zip(b).map(|(i, j)| i + j).collect();
                if s.bx.contains(&e) {
                    s.push(e, x.clone() * y.clone());
                }
            }
        }
        s
    }

    pub fn scale(&self, c: &C) -> Self {
        let mut s = Self::zero(&self.proto, self.bx.clone());
        for (e, x) in &self.terms {
            s.push(e.clone(), x.clone() * c.clone());
        }
        s
    }

    /// Multiplication by `t^e`, shifting the window with it.
    pub fn shift(&self, e: &[i64]) -> Self {
        MLaurent {
            bx: self.bx.shift(e),
            terms: self.terms.iter().map(|(a, c)| (a.iter().zip(e).map(|(x, y)| x + y).collect(), c.clone())).collect(),
            proto: self.proto.clone(),
        }
    }

    /// The lexicographically least term.
    pub fn leading(&self) -> Option<(&Vec<i64>, &C)> {
        self.terms.iter().next()
    }

    /// Lexicographic valuation: the least exponent vector in the support.
    pub fn nvaluation(&self) -> Result<LexIndex> {
        let (e, _) = self.leading().ok_or(Error::ZeroSeries)?;
        Ok(LexIndex::new(e.iter().map(|&x| rat(x, self.denom())).collect()))
    }

    /// First coordinate of the valuation.
    pub fn v1(&self) -> Result<Rat> {
        Ok(self.nvaluation()?.first().clone())
    }

    /// Inverse of a series whose least term has a unit coefficient.
    ///
    /// After dividing by the leading term, the series is 1 + h with h
    /// lexicographically positive. The window of the inverse is the set of
    /// exponents whose coefficient in sum (-h)^k only involves known
    /// coefficients of h; it shrinks in the later variables by the most
    /// negative exponent h can contribute there.
    pub fn inv(&self) -> Result<Self> {
        let (v, c) = self.leading().ok_or(Error::ZeroSeries)?;
        let v = v.clone();
        let cinv = c.inv_elem().ok_or_else(|| Error::Invalid("leading coefficient is not a unit".into()))?;
        let n = self.n();
        let (lo, hi) = (&self.bx.lo, &self.bx.hi);
        let mut wlo = vec![0i64; n];
        let mut whi = vec![0i64; n];
        whi[0] = hi[0] - v[0];
        // bound on the number of factors whose leading coordinate precedes k
        let mut count = whi[0];
        for k in 1..n {
            // the last coordinate of an unknown term of h is never below the
            // known support, so there the support bound suffices
            let m = if k + 1 == n {
                self.terms.keys().map(|e| e[k] - v[k]).min().unwrap_or(0).min(0)
            } else {
                (lo[k] - v[k]).min(0)
            };
            wlo[k] = count * m;
            whi[k] = hi[k] - v[k] + count * m;
            if whi[k] < 0 {
                return Err(Error::BoxExhausted(format!(
                    "window {:?} too small to invert a series with leading exponent {v:?}",
                    self.bx
                )));
            }
            count += hi[k] - v[k];
        }
        let window = TruncBox { denom: self.denom(), lo: wlo, hi: whi };
        let neg_v: Vec<i64> = v.iter().map(|x| -x).collect();
        let mut h = Self::zero(&self.proto, window.clone());
        for (e, x) in &self.terms {
            let e: Vec<i64> = e.iter().zip(&v).map(|(a, b)| a - b).collect();
            if e.iter().all(|&x| x == 0) {
                continue;
            }
            if window.region(&e) == Region::Known {
                h.push(e, -(x.clone() * cinv.clone()));
            }
        }
        let mut power = Self::one(&self.proto, window.clone());
        let mut sum = power.clone();
        let cap = count.max(0) as usize + 2;
        for _ in 0..=cap {
            let mut next = Self::zero(&self.proto, window.clone());
            for (a, x) in &power.terms {
                for (b, y) in &h.terms {
                    let e: Vec<i64> = a.iter().zip(b).map(|(i, j)| i + j).collect();
                    match window.region(&e) {
                        Region::Known => next.push(e, x.clone() * y.clone()),
                        Region::Unknown => {}
                        Region::Zero => {
                            return Err(Error::BoxExhausted("geometric series left its window".into()));
                        }
                    }
                }
            }
            if next.is_zero() {
                let scaled = sum.scale(&cinv);
                return Ok(scaled.shift(&neg_v));
            }
            sum = sum.try_add(&next)?;
            power = next;
        }
        Err(Error::BoxExhausted("geometric series did not terminate inside its window".into()))
    }

    /// Nonnegative integer power, by repeated squaring.
    pub fn pow(&self, e: u64) -> Result<Self> {
        let mut acc = Self::one(&self.proto, self.bx.clone());
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.try_mul(&base)?;
            }
            e >>= 1;
            if e > 0 {
                base = base.try_mul(&base)?;
            }
        }
        Ok(acc)
    }

    pub fn map_coeffs<D: Ring>(&self, proto: &D, f: impl Fn(&C) -> D) -> MLaurent<D> {
        let mut s = MLaurent::zero(proto, self.bx.clone());
        for (e, c) in &self.terms {
            s.push(e.clone(), f(c));
        }
        s
    }
}

fn lex_sign(e: &[i64]) -> std::cmp::Ordering {
    e.iter().map(|x| x.cmp(&0)).find(|o| o.is_ne()).unwrap_or(std::cmp::Ordering::Equal)
}

impl MLaurent<PadicTrunc> {
    /// Each coefficient as its stack of Teichmueller digits, lowest p-power
    /// first; the unique presentation used for mixed-characteristic fixtures.
    pub fn teichmueller_form(&self) -> BTreeMap<Vec<i64>, Vec<u64>> {
        self.terms.iter().map(|(e, c)| (e.clone(), teichmueller_digits(c))).collect()
    }

    /// Rebuilds a series from its digit stacks.
    pub fn from_teichmueller_form(
        proto: &PadicTrunc,
        bx: TruncBox,
        form: &BTreeMap<Vec<i64>, Vec<u64>>,
    ) -> Result<Self> {
        let terms = form
            .iter()
            .map(|(e, d)| Ok((e.clone(), from_teichmueller_digits(proto.p, proto.m, d)?)))
            .collect::<Result<Vec<_>>>()?;
        Self::from_terms(proto, bx, terms)
    }
}

impl MLaurent<Fq> {
    pub fn field(&self) -> &std::sync::Arc<FqField> {
        &self.proto.field
    }

    pub fn p(&self) -> u64 {
        self.proto.field.p
    }

    /// Coefficients to the p-th power, exponents times p.
    pub fn frobenius(&self) -> Self {
        let p = self.p() as i64;
        let bx = TruncBox {
            denom: self.denom(),
            lo: self.bx.lo.iter().map(|x| x * p).collect(),
            hi: self.bx.hi.iter().map(|x| x * p).collect(),
        };
        let terms = self.terms.iter().map(|(e, c)| (e.iter().map(|x| x * p).collect(), c.frobenius())).collect();
        MLaurent { bx, terms, proto: self.proto.clone() }
    }

    /// Inverse of [`frobenius`](Self::frobenius).
    pub fn pth_root(&self) -> Result<Self> {
        let p = self.p() as i64;
        if let Some((e, _)) = self.terms.iter().find(|(e, _)| e.iter().any(|x| x % p != 0)) {
            return Err(Error::NotAPthPower(format!("exponent {e:?} is not divisible by {p}")));
        }
        let bx = TruncBox {
            denom: self.denom(),
            lo: self.bx.lo.iter().map(|x| x.div_euclid(p) + (x.rem_euclid(p) != 0) as i64).collect(),
            hi: self.bx.hi.iter().map(|x| x.div_euclid(p)).collect(),
        };
        let terms = self.terms.iter().map(|(e, c)| (e.iter().map(|x| x / p).collect(), c.pth_root())).collect();
        Ok(MLaurent { bx, terms, proto: self.proto.clone() })
    }

    /// Normal form modulo x^p - x and the maximal ideal: positive terms are
    /// dropped, p-th power terms below zero are replaced by their p-th roots
    /// until none remain, and the constant is reduced to a fixed coset
    /// representative.
    pub fn artin_schreier_reduce(&self) -> Self {
        let p = self.p() as i64;
        let mut terms = self.terms.clone();
        loop {
            let mut out = Self::zero(&self.proto, self.bx.clone());
            let mut changed = false;
            for (e, c) in terms {
                match lex_sign(&e) {
                    std::cmp::Ordering::Greater => changed = true,
                    std::cmp::Ordering::Equal => {
                        let rep = c.wp_coset_rep();
                        changed |= rep != c;
                        out.push(e, rep);
                    }
                    std::cmp::Ordering::Less => {
                        if e.iter().all(|x| x % p == 0) {
                            changed = true;
                            let e = e.iter().map(|x| x / p).collect();
                            out.force_push(e, c.pth_root());
                        } else {
                            out.push(e, c);
                        }
                    }
                }
            }
            if !changed {
                return out;
            }
            terms = out.terms;
        }
    }

    /// Like `push`, but keeps terms that a rewrite moved inside [a, 0].
    fn force_push(&mut self, e: Vec<i64>, c: Fq) {
        if self.bx.region(&e) == Region::Unknown {
            // a/p lies between a and 0; only reachable when the window excludes 0
            for (k, x) in e.iter().enumerate() {
                self.bx.hi[k] = self.bx.hi[k].max(*x);
            }
        }
        self.push(e, c);
    }

    /// Support is in Artin-Schreier normal form: nothing above zero and no
    /// exponent divisible by p other than zero.
    pub fn is_as_normal(&self) -> bool {
        let p = self.p() as i64;
        self.terms.iter().all(|(e, c)| match lex_sign(e) {
            std::cmp::Ordering::Greater => false,
            std::cmp::Ordering::Equal => c.wp_coset_rep() == *c,
            std::cmp::Ordering::Less => e.iter().any(|x| x % p != 0),
        })
    }

    pub fn to_json(&self) -> LaurentJson {
        LaurentJson {
            n: self.n(),
            p: self.p(),
            m: self.field().m,
            bx: self.bx.clone(),
            terms: self.terms.iter().map(|(e, c)| TermJson { exp: e.clone(), coeff: c.coords() }).collect(),
        }
    }
}

/// JSON form of a series over F_q: exponents are numerators over `box.D`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LaurentJson {
    #[serde(rename = "N")]
    pub n: usize,
    pub p: u64,
    #[serde(default = "one_u32")]
    pub m: u32,
    #[serde(rename = "box")]
    pub bx: TruncBox,
    pub terms: Vec<TermJson>,
}

fn one_u32() -> u32 {
    1
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TermJson {
    pub exp: Vec<i64>,
    pub coeff: Vec<u32>,
}

impl LaurentJson {
    pub fn to_series(&self) -> Result<MLaurent<Fq>> {
        let field = FqField::new(self.p, self.m)?;
        let bx = TruncBox::new(self.bx.denom, self.bx.lo.clone(), self.bx.hi.clone())?;
        if bx.n() != self.n {
            return Err(Error::DimMismatch(format!("N = {} but the box has {} variables", self.n, bx.n())));
        }
        let mut seen = std::collections::BTreeSet::new();
        let mut terms = Vec::new();
        for t in &self.terms {
            if !seen.insert(t.exp.clone()) {
                return invalid(format!("duplicate exponent {:?}", t.exp));
            }
            if !bx.contains(&t.exp) {
                return invalid(format!("term {:?} outside its box", t.exp));
            }
            terms.push((t.exp.clone(), Fq::from_coords(&field, &t.coeff)?));
        }
        MLaurent::from_terms(&Fq::zero(&field), bx, terms)
    }
}

impl<C: Ring> Add for MLaurent<C> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        MLaurent::try_add(&self, &rhs).expect("incompatible series")
    }
}

impl<C: Ring> Sub for MLaurent<C> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        MLaurent::try_sub(&self, &rhs).expect("incompatible series")
    }
}

impl<C: Ring> Mul for MLaurent<C> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        MLaurent::try_mul(&self, &rhs).expect("incompatible series")
    }
}

impl<C: Ring> Neg for MLaurent<C> {
    type Output = Self;
    fn neg(self) -> Self {
        self.negated()
    }
}

impl<C: Ring> Ring for MLaurent<C> {
    fn zero_like(&self) -> Self {
        Self::zero(&self.proto, self.bx.clone())
    }
    fn one_like(&self) -> Self {
        Self::one(&self.proto, self.bx.clone())
    }
    fn int_like(&self, n: &BigInt) -> Self {
        let c = self.proto.int_like(n);
        Self::monomial(&self.proto, self.bx.clone(), vec![0; self.n()], c)
    }
    fn is_zero_elem(&self) -> bool {
        self.is_zero()
    }
    fn inv_elem(&self) -> Option<Self> {
        self.inv().ok()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat::ri;

    fn f(p: u64) -> std::sync::Arc<FqField> {
        FqField::new(p, 1).unwrap()
    }

    #[test]
    fn teichmueller_stacks_round_trip() {
        let bx = TruncBox::new(1, vec![-2, 0], vec![4, 4]).unwrap();
        let z = PadicTrunc::from_i64(3, 4, 0).unwrap();
        let a = MLaurent::from_terms(
            &z,
            bx.clone(),
            [(vec![-1, 2], PadicTrunc::from_i64(3, 4, 17).unwrap()), (vec![0, 1], PadicTrunc::from_i64(3, 4, -1).unwrap())],
        )
        .unwrap();
        let sq = a.try_mul(&a).unwrap();
        let form = sq.teichmueller_form();
        assert!(form.values().all(|d| d.len() == 4 && d.iter().all(|&x| x < 3)));
        let back = MLaurent::from_teichmueller_form(&z, sq.bx().clone(), &form).unwrap();
        assert_eq!(back, sq);
    }

    fn series(p: u64, bx: &TruncBox, terms: &[(&[i64], i64)]) -> MLaurent<Fq> {
        let k = f(p);
        MLaurent::from_terms(&Fq::zero(&k), bx.clone(), terms.iter().map(|(e, c)| (e.to_vec(), Fq::from_int(&k, *c)))).unwrap()
    }

    #[test]
    fn add_examples() {
        let bx = TruncBox::cube(2, -8, 8).unwrap();
        let a = series(5, &bx, &[(&[-1, 0], 1), (&[0, 1], 1)]);
        let b = series(5, &bx, &[(&[-1, 0], 1)]);
        let s = a.try_add(&b).unwrap();
        assert_eq!(s, series(5, &bx, &[(&[-1, 0], 2), (&[0, 1], 1)]));
        assert!(a.try_add(&a.negated()).unwrap().is_zero());
        assert_eq!(a.try_add(&MLaurent::zero(a.proto(), bx.clone())).unwrap(), a);
        let other = TruncBox::new(2, vec![-8, -8], vec![8, 8]).unwrap();
        assert!(matches!(a.try_add(&series(5, &other, &[])), Err(Error::BoxMismatch(_))));
    }

    #[test]
    fn inverse_of_one_minus_t() {
        let bx = TruncBox::cube(1, 0, 12).unwrap();
        let g = series(3, &bx, &[(&[0], 1), (&[1], -1)]);
        let u = g.inv().unwrap();
        let expect: Vec<(&[i64], i64)> = vec![];
        let _ = expect;
        for k in 0..=12 {
            assert_eq!(u.coeff(&[k]).prime_value(), Some(1), "coefficient {k}");
        }
        assert_eq!(g.try_mul(&u).unwrap(), MLaurent::one(g.proto(), g.try_mul(&u).unwrap().bx().clone()));
        let t = series(3, &TruncBox::cube(1, -5, 5).unwrap(), &[(&[1], 1)]);
        let ti = t.inv().unwrap();
        assert_eq!(ti.len(), 1);
        assert_eq!(ti.coeff(&[-1]).prime_value(), Some(1));
    }

    #[test]
    fn two_variable_inverse() {
        let bx = TruncBox::new(1, vec![-1, -3], vec![3, 20]).unwrap();
        let g = series(5, &bx, &[(&[-1, -1], 2), (&[0, 2], 1), (&[1, -3], 3)]);
        assert!(matches!(g.restrict(TruncBox::cube(2, -6, 6).unwrap()).unwrap().inv(), Err(Error::BoxExhausted(_))));
        let u = g.inv().unwrap();
        let prod = g.try_mul(&u).unwrap();
        assert_eq!(prod, MLaurent::one(g.proto(), prod.bx().clone()));
        assert!(prod.bx().contains(&[0, 0]));
    }

    #[test]
    fn nvaluation_examples() {
        let bx = TruncBox::cube(2, -8, 8).unwrap();
        let t1 = series(3, &bx, &[(&[1, 0], 1)]);
        assert_eq!(t1.nvaluation().unwrap(), LexIndex::from_ints(&[1, 0]));
        let t2 = series(3, &bx, &[(&[0, 1], 1)]);
        assert_eq!(t2.nvaluation().unwrap(), LexIndex::from_ints(&[0, 1]));
        let g = series(3, &bx, &[(&[-5, -1], 1), (&[-2, 0], 1)]);
        assert_eq!(g.nvaluation().unwrap(), LexIndex::from_ints(&[-5, -1]));
        assert_eq!(g.v1().unwrap(), ri(-5));
        assert!(matches!(MLaurent::zero(g.proto(), bx).nvaluation(), Err(Error::ZeroSeries)));
    }

    #[test]
    fn frobenius_and_roots() {
        let bx = TruncBox::cube(1, -10, 10).unwrap();
        let t = series(3, &bx, &[(&[1], 1)]);
        assert_eq!(t.frobenius().coeff(&[3]).prime_value(), Some(1));
        let k9 = FqField::new(3, 2).unwrap();
        let a = Fq::generator(&k9);
        let s = MLaurent::monomial(&a, TruncBox::cube(1, -20, 20).unwrap(), vec![9], a.pow(3));
        let r = s.pth_root().unwrap();
        assert_eq!(r.coeff(&[3]), a);
        assert!(matches!(t.pth_root(), Err(Error::NotAPthPower(_))));
    }

    #[test]
    fn artin_schreier_examples() {
        let bx = TruncBox::cube(1, -20, 5).unwrap();
        let k = FqField::new(5, 2).unwrap();
        let a = Fq::generator(&k);
        let s = MLaurent::monomial(&a, bx.clone(), vec![-15], a.pow(5));
        let r = s.artin_schreier_reduce();
        assert_eq!(r.len(), 1);
        assert_eq!(r.coeff(&[-3]), a);
        // for p = 3 the exponent -3 is itself reducible
        let k9 = FqField::new(3, 2).unwrap();
        let b = Fq::generator(&k9);
        let r = MLaurent::monomial(&b, bx.clone(), vec![-9], b.pow(3)).artin_schreier_reduce();
        assert_eq!(r.coeff(&[-1]), b.pth_root());
        let pos = series(3, &bx, &[(&[2], 1)]);
        assert!(pos.artin_schreier_reduce().is_zero());
        let normal = series(3, &bx, &[(&[-4], 1), (&[-2], 2)]);
        assert_eq!(normal.artin_schreier_reduce(), normal);
        // t^-9 -> t^-3 -> t^-1 merges with an existing t^-1 term
        let chain = series(3, &bx, &[(&[-9], 1), (&[-1], 1)]);
        let red = chain.artin_schreier_reduce();
        assert_eq!(red.len(), 1);
        assert_eq!(red.coeff(&[-1]).prime_value(), Some(2));
    }

    #[test]
    fn json_round_trip() {
        let bx = TruncBox::cube(2, -4, 4).unwrap();
        let s = series(3, &bx, &[(&[-2, 0], 1), (&[-1, -1], 2)]);
        let j = serde_json::to_string(&s.to_json()).unwrap();
        let back: LaurentJson = serde_json::from_str(&j).unwrap();
        assert_eq!(back.to_series().unwrap(), s);
    }
}
