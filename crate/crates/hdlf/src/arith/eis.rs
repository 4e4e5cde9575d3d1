//! Totally ramified extensions Z_p[pi] = (Z/p^M)[x]/(f), f Eisenstein.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::binomial;
use num_traits::{One, Zero};

use super::padic::{inv_mod_u64, modulus_for, mulmod, reduce_big, vp_u64, PadicTrunc};
use super::rat::{rat, ExtRat, Rat};
use super::ring::Ring;
use crate::error::{invalid, Error, Result};

/// The ring context: precision, degree and the Eisenstein modulus.
pub struct EisRing {
    pub p: u64,
    /// p-adic precision: coordinates are kept modulo p^M.
    pub m: u32,
    pub d: usize,
    modulus: u64,
    /// Exact integer coefficients of the monic minimal polynomial,
    /// lowest first, including the leading 1.
    minpoly: Vec<BigInt>,
    /// Negated lower coefficients reduced mod p^M.
    neg_lower: Vec<u64>,
}

impl fmt::Debug for EisRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "EisRing(p={}, M={}, d={})", self.p, self.m, self.d)
    }
}

impl PartialEq for EisRing {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.m == other.m && self.minpoly == other.minpoly
    }
}

/// Coefficients of Phi_{p^k}(1 + x), the minimal polynomial of zeta_{p^k} - 1.
pub fn cyclotomic_minpoly(p: u64, k: u32) -> Vec<BigInt> {
    assert!(k >= 1);
    let step = p.pow(k - 1) as usize;
    let deg = (p as usize - 1) * step;
    let mut c = vec![BigInt::zero(); deg + 1];
    for j in 0..p as usize {
        let n = j * step;
        for (i, ci) in c.iter_mut().enumerate().take(n + 1) {
            *ci += binomial(BigInt::from(n), BigInt::from(i));
        }
    }
    c
}

impl EisRing {
    /// `minpoly` lists all coefficients lowest first; the last must be 1.
    pub fn new(p: u64, m: u32, minpoly: Vec<BigInt>) -> Result<Arc<EisRing>> {
        let modulus = modulus_for(p, m)?;
        if minpoly.len() < 2 || !minpoly.last().unwrap().is_one() {
            return invalid("minimal polynomial must be monic of degree >= 1");
        }
        if m < 2 {
            return invalid("precision M >= 2 is needed to certify the Eisenstein condition");
        }
        let d = minpoly.len() - 1;
        let lower: Vec<u64> = minpoly[..d].iter().map(|c| reduce_big(c, modulus)).collect();
        if lower.iter().any(|&c| c % p != 0) || lower[0].is_multiple_of(p * p) {
            return invalid(format!("polynomial is not Eisenstein at p = {p}"));
        }
        let neg_lower = lower.iter().map(|&c| (modulus - c) % modulus).collect();
        Ok(Arc::new(EisRing { p, m, d, modulus, minpoly, neg_lower }))
    }

    /// Z_p itself, presented with uniformizer p.
    pub fn zp(p: u64, m: u32) -> Result<Arc<EisRing>> {
        Self::new(p, m, vec![BigInt::from(-(p as i64)), BigInt::one()])
    }

    /// Z_p[zeta_{p^k}] with uniformizer zeta_{p^k} - 1.
    pub fn cyclotomic(p: u64, k: u32, m: u32) -> Result<Arc<EisRing>> {
        if k == 0 {
            return invalid("cyclotomic level k must be >= 1");
        }
        Self::new(p, m, cyclotomic_minpoly(p, k))
    }

    /// The same extension at another precision.
    pub fn with_precision(&self, m: u32) -> Result<Arc<EisRing>> {
        Self::new(self.p, m, self.minpoly.clone())
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn minpoly(&self) -> &[BigInt] {
        &self.minpoly
    }

    /// The valuation of a uniformizer, 1/d.
    pub fn pi_valuation(&self) -> Rat {
        rat(1, self.d as i64)
    }
}

/// An element of an `EisRing`, as coordinates in the basis 1, pi, ..., pi^(d-1).
#[derive(Clone)]
pub struct EisElem {
    pub ring: Arc<EisRing>,
    c: Vec<u64>,
}

impl EisElem {
    pub fn zero(ring: &Arc<EisRing>) -> EisElem {
        EisElem { ring: ring.clone(), c: vec![0; ring.d] }
    }

    pub fn one(ring: &Arc<EisRing>) -> EisElem {
        Self::from_u64(ring, 1)
    }

    fn from_u64(ring: &Arc<EisRing>, n: u64) -> EisElem {
        let mut e = Self::zero(ring);
        e.c[0] = n % ring.modulus;
        e
    }

    pub fn from_int(ring: &Arc<EisRing>, n: &BigInt) -> EisElem {
        Self::from_u64(ring, reduce_big(n, ring.modulus))
    }

    pub fn from_i64(ring: &Arc<EisRing>, n: i64) -> EisElem {
        Self::from_int(ring, &BigInt::from(n))
    }

    pub fn from_padic(ring: &Arc<EisRing>, a: &PadicTrunc) -> Result<EisElem> {
        if a.p != ring.p || a.m < ring.m {
            return invalid(format!("{a:?} does not embed into {:?}", ring));
        }
        Ok(Self::from_u64(ring, a.value()))
    }

    pub fn pi(ring: &Arc<EisRing>) -> EisElem {
        let mut e = Self::zero(ring);
        if ring.d == 1 {
            e.c[0] = ring.neg_lower[0];
        } else {
            e.c[1] = 1;
        }
        e
    }

    pub fn from_coords(ring: &Arc<EisRing>, coords: &[BigInt]) -> Result<EisElem> {
        if coords.len() > ring.d {
            return invalid(format!("{} coordinates for a degree-{} ring", coords.len(), ring.d));
        }
        let mut e = Self::zero(ring);
        for (i, x) in coords.iter().enumerate() {
            e.c[i] = reduce_big(x, ring.modulus);
        }
        Ok(e)
    }

    pub fn from_u64_coords(ring: &Arc<EisRing>, coords: &[u64]) -> Result<EisElem> {
        if coords.len() > ring.d {
            return invalid(format!("{} coordinates for a degree-{} ring", coords.len(), ring.d));
        }
        let mut e = Self::zero(ring);
        for (i, &x) in coords.iter().enumerate() {
            e.c[i] = x % ring.modulus;
        }
        Ok(e)
    }

    pub fn coords(&self) -> &[u64] {
        &self.c
    }

    pub fn is_zero(&self) -> bool {
        self.c.iter().all(|&x| x == 0)
    }

    /// Valuation with v(p) = 1 and v(pi) = 1/d; `Infinity` when the element
    /// vanishes at the working precision.
    pub fn valuation(&self) -> ExtRat {
        let d = self.ring.d as i64;
        self.c
            .iter()
            .enumerate()
            .filter_map(|(i, &x)| vp_u64(self.ring.p, x).map(|v| rat(v as i64 * d + i as i64, d)))
            .min()
            .map_or(ExtRat::Infinity, ExtRat::Finite)
    }

    /// Valuation of an element the caller knows to be nonzero.
    pub fn valuation_nonzero(&self) -> Result<Rat> {
        match self.valuation() {
            ExtRat::Finite(v) => Ok(v),
            ExtRat::Infinity => Err(Error::PrecisionExhausted(format!(
                "element vanishes modulo p^{} in {:?}",
                self.ring.m, self.ring
            ))),
        }
    }

    /// The element's valuation is at least `bound` (exact, using precision M).
    pub fn valuation_at_least(&self, bound: &Rat) -> bool {
        self.valuation() >= ExtRat::Finite(bound.clone())
    }

    pub fn is_unit(&self) -> bool {
        !self.c[0].is_multiple_of(self.ring.p)
    }

    pub fn scale(&self, k: u64) -> EisElem {
        let q = self.ring.modulus;
        EisElem { ring: self.ring.clone(), c: self.c.iter().map(|&x| mulmod(x, k % q, q)).collect() }
    }

    pub fn pow(&self, mut e: u64) -> EisElem {
        let mut base = self.clone();
        let mut acc = Self::one(&self.ring);
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Inverse of a unit by Newton iteration.
    pub fn inv(&self) -> Result<EisElem> {
        if !self.is_unit() {
            return invalid("element is not a unit");
        }
        let q = self.ring.modulus;
        let y0 = inv_mod_u64(self.c[0], q).unwrap();
        let mut y = Self::from_u64(&self.ring, y0);
        let two = Self::from_u64(&self.ring, 2);
        for _ in 0..128 {
            let uy = self * &y;
            if uy == Self::one(&self.ring) {
                return Ok(y);
            }
            y = &y * &(&two - &uy);
        }
        Err(Error::PrecisionExhausted("Newton inversion did not converge".into()))
    }

    /// Exact division by p. The quotient is only known modulo p^(M-1), so
    /// it is returned in the ring of precision M - 1.
    pub fn div_p(&self) -> Result<EisElem> {
        let p = self.ring.p;
        if self.c.iter().any(|&x| x % p != 0) {
            return invalid("element is not divisible by p");
        }
        let lower = self.ring.with_precision(self.ring.m - 1)?;
        let q = lower.modulus;
        Ok(EisElem { ring: lower, c: self.c.iter().map(|&x| (x / p) % q).collect() })
    }

    /// Move to a ring with the same modulus polynomial and another precision.
    /// Lifting picks the canonical representatives in [0, p^M).
    pub fn change_precision(&self, ring: &Arc<EisRing>) -> Result<EisElem> {
        if ring.p != self.ring.p || ring.minpoly != self.ring.minpoly {
            return invalid("target ring has a different modulus polynomial");
        }
        Ok(EisElem { ring: ring.clone(), c: self.c.iter().map(|&x| x % ring.modulus).collect() })
    }

    /// Reduction mod p (coordinate 0), the image in the residue field F_p.
    pub fn residue(&self) -> u64 {
        self.c[0] % self.ring.p
    }

    /// Horner evaluation of sum coeffs[i] x^i.
    pub fn eval_poly(coeffs: &[EisElem], x: &EisElem) -> EisElem {
        let mut acc = EisElem::zero(&x.ring);
        for c in coeffs.iter().rev() {
            acc = &(&acc * x) + c;
        }
        acc
    }

    fn check(&self, other: &EisElem) {
        assert!(
            Arc::ptr_eq(&self.ring, &other.ring) || *self.ring == *other.ring,
            "mixing elements of {:?} and {:?}",
            self.ring,
            other.ring
        );
    }
}

impl PartialEq for EisElem {
    fn eq(&self, other: &Self) -> bool {
        self.c == other.c && (Arc::ptr_eq(&self.ring, &other.ring) || *self.ring == *other.ring)
    }
}

impl Eq for EisElem {}

impl fmt::Debug for EisElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.c)
    }
}

impl<'a> Add<&'a EisElem> for &'a EisElem {
    type Output = EisElem;
    fn add(self, rhs: &EisElem) -> EisElem {
        self.check(rhs);
        let q = self.ring.modulus;
        let c = self.c.iter().zip(&rhs.c).map(|(&a, &b)| ((a as u128 + b as u128) % q as u128) as u64).collect();
        EisElem { ring: self.ring.clone(), c }
    }
}

impl<'a> Sub<&'a EisElem> for &'a EisElem {
    type Output = EisElem;
    fn sub(self, rhs: &EisElem) -> EisElem {
        self.check(rhs);
        let q = self.ring.modulus;
        let c = self.c.iter().zip(&rhs.c).map(|(&a, &b)| ((a as u128 + (q - b) as u128) % q as u128) as u64).collect();
        EisElem { ring: self.ring.clone(), c }
    }
}

impl<'a> Mul<&'a EisElem> for &'a EisElem {
    type Output = EisElem;
    fn mul(self, rhs: &EisElem) -> EisElem {
        self.check(rhs);
        let ring = &self.ring;
        let (d, q) = (ring.d, ring.modulus);
        let small = q <= u32::MAX as u64;
        let mut acc = vec![0u128; 2 * d - 1];
        for (i, &a) in self.c.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in rhs.c.iter().enumerate() {
                if small {
                    acc[i + j] += (a * b) as u128;
                } else {
                    acc[i + j] += mulmod(a, b, q) as u128;
                }
            }
        }
        // x^d = -(c_0 + ... + c_{d-1} x^{d-1}); fold the top down.
        for k in (d..2 * d - 1).rev() {
            let h = (acc[k] % q as u128) as u64;
            if h == 0 {
                continue;
            }
            for (i, &nc) in ring.neg_lower.iter().enumerate() {
                acc[k - d + i] += mulmod(h, nc, q) as u128;
            }
        }
        let c = acc[..d].iter().map(|&x| (x % q as u128) as u64).collect();
        EisElem { ring: ring.clone(), c }
    }
}

impl Neg for &EisElem {
    type Output = EisElem;
    fn neg(self) -> EisElem {
        let q = self.ring.modulus;
        EisElem { ring: self.ring.clone(), c: self.c.iter().map(|&a| (q - a) % q).collect() }
    }
}

impl Add for EisElem {
    type Output = EisElem;
    fn add(self, rhs: EisElem) -> EisElem {
        &self + &rhs
    }
}

impl Sub for EisElem {
    type Output = EisElem;
    fn sub(self, rhs: EisElem) -> EisElem {
        &self - &rhs
    }
}

impl Mul for EisElem {
    type Output = EisElem;
    fn mul(self, rhs: EisElem) -> EisElem {
        &self * &rhs
    }
}

impl Neg for EisElem {
    type Output = EisElem;
    fn neg(self) -> EisElem {
        -&self
    }
}

impl Ring for EisElem {
    fn zero_like(&self) -> Self {
        EisElem::zero(&self.ring)
    }
    fn one_like(&self) -> Self {
        EisElem::one(&self.ring)
    }
    fn int_like(&self, n: &BigInt) -> Self {
        EisElem::from_int(&self.ring, n)
    }
    fn is_zero_elem(&self) -> bool {
        self.is_zero()
    }
    fn pow_u(&self, e: u64) -> Self {
        self.pow(e)
    }
    fn inv_elem(&self) -> Option<Self> {
        self.inv().ok()
    }
}
