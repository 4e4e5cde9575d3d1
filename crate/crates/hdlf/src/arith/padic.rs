//! Truncated p-adic integers Z/p^M and Teichmueller lifts.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use super::fq::{is_prime, Fq, MAX_P};
use super::ring::Ring;
use crate::error::{invalid, Error, Result};

/// Largest supported modulus p^M; products are formed in u128.
pub const MAX_MODULUS: u64 = 1 << 62;

#[inline]
pub(crate) fn mulmod(a: u64, b: u64, m: u64) -> u64 {
    if m <= u32::MAX as u64 {
        a * b % m
    } else {
        (a as u128 * b as u128 % m as u128) as u64
    }
}

pub(crate) fn powmod(mut a: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    while e > 0 {
        if e & 1 == 1 {
            acc = mulmod(acc, a, m);
        }
        a = mulmod(a, a, m);
        e >>= 1;
    }
    acc
}

pub fn modulus_for(p: u64, m: u32) -> Result<u64> {
    if !is_prime(p) || p > MAX_P {
        return invalid(format!("p = {p} must be a prime <= {MAX_P}"));
    }
    if m == 0 {
        return invalid("precision M must be >= 1");
    }
    match p.checked_pow(m) {
        Some(q) if q <= MAX_MODULUS => Ok(q),
        _ => invalid(format!("modulus {p}^{m} exceeds 2^62")),
    }
}

pub(crate) fn reduce_big(n: &BigInt, modulus: u64) -> u64 {
    n.mod_floor(&BigInt::from(modulus)).to_u64().unwrap()
}

pub(crate) fn inv_mod_u64(a: u64, m: u64) -> Option<u64> {
    let g = BigInt::from(a).extended_gcd(&BigInt::from(m));
    if g.gcd != BigInt::from(1) {
        return None;
    }
    Some(reduce_big(&g.x, m))
}

/// v_p of a residue mod p^M; `None` for zero.
pub(crate) fn vp_u64(p: u64, mut x: u64) -> Option<u32> {
    if x == 0 {
        return None;
    }
    let mut k = 0;
    while x.is_multiple_of(p) {
        x /= p;
        k += 1;
    }
    Some(k)
}

/// An integer modulo p^M.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct PadicTrunc {
    pub p: u64,
    pub m: u32,
    value: u64,
}

impl PadicTrunc {
    pub fn new(p: u64, m: u32, value: &BigInt) -> Result<PadicTrunc> {
        let q = modulus_for(p, m)?;
        Ok(PadicTrunc { p, m, value: reduce_big(value, q) })
    }

    pub fn from_i64(p: u64, m: u32, value: i64) -> Result<PadicTrunc> {
        Self::new(p, m, &BigInt::from(value))
    }

    pub fn modulus(&self) -> u64 {
        self.p.pow(self.m)
    }

    pub fn value(&self) -> u64 {
        self.value
    }

    pub fn is_zero(&self) -> bool {
        self.value == 0
    }

    /// v_p of the value, `None` when it is zero modulo p^M.
    pub fn valuation(&self) -> Option<u32> {
        vp_u64(self.p, self.value)
    }

    pub fn inv(&self) -> Result<PadicTrunc> {
        match inv_mod_u64(self.value, self.modulus()) {
            Some(v) => Ok(PadicTrunc { value: v, ..*self }),
            None => invalid(format!("{self:?} is not a unit")),
        }
    }

    pub fn pow(&self, e: u64) -> PadicTrunc {
        PadicTrunc { value: powmod(self.value, e, self.modulus()), ..*self }
    }

    /// Reduction to a lower precision.
    pub fn truncate(&self, m: u32) -> Result<PadicTrunc> {
        if m > self.m || m == 0 {
            return invalid(format!("cannot truncate precision {} to {m}", self.m));
        }
        Ok(PadicTrunc { m, value: self.value % self.p.pow(m), ..*self })
    }

    fn check(&self, other: &PadicTrunc) {
        assert!(self.p == other.p && self.m == other.m, "mixing Z/{}^{} with Z/{}^{}", self.p, self.m, other.p, other.m);
    }
}

impl fmt::Debug for PadicTrunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} mod {}^{}", self.value, self.p, self.m)
    }
}

impl Add for PadicTrunc {
    type Output = PadicTrunc;
    fn add(self, rhs: Self) -> Self {
        self.check(&rhs);
        let q = self.modulus();
        PadicTrunc { value: ((self.value as u128 + rhs.value as u128) % q as u128) as u64, ..self }
    }
}

impl Sub for PadicTrunc {
    type Output = PadicTrunc;
    fn sub(self, rhs: Self) -> Self {
        self + (-rhs)
    }
}

impl Neg for PadicTrunc {
    type Output = PadicTrunc;
    fn neg(self) -> Self {
        let q = self.modulus();
        PadicTrunc { value: (q - self.value) % q, ..self }
    }
}

impl Mul for PadicTrunc {
    type Output = PadicTrunc;
    fn mul(self, rhs: Self) -> Self {
        self.check(&rhs);
        PadicTrunc { value: mulmod(self.value, rhs.value, self.modulus()), ..self }
    }
}

impl Ring for PadicTrunc {
    fn zero_like(&self) -> Self {
        PadicTrunc { value: 0, ..*self }
    }
    fn one_like(&self) -> Self {
        PadicTrunc { value: 1 % self.modulus(), ..*self }
    }
    fn int_like(&self, n: &BigInt) -> Self {
        PadicTrunc { value: reduce_big(n, self.modulus()), ..*self }
    }
    fn is_zero_elem(&self) -> bool {
        self.value == 0
    }
    fn pow_u(&self, e: u64) -> Self {
        self.pow(e)
    }
    fn inv_elem(&self) -> Option<Self> {
        self.inv().ok()
    }
}

/// JSON form `{p, M, value}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PadicJson {
    pub p: u64,
    #[serde(rename = "M")]
    pub m: u32,
    pub value: u64,
}

impl From<&PadicTrunc> for PadicJson {
    fn from(a: &PadicTrunc) -> Self {
        PadicJson { p: a.p, m: a.m, value: a.value }
    }
}

impl PadicJson {
    pub fn to_padic(&self) -> Result<PadicTrunc> {
        PadicTrunc::from_i64(self.p, self.m, 0)?;
        if self.value >= self.p.pow(self.m) {
            return invalid(format!("value {} out of range mod {}^{}", self.value, self.p, self.m));
        }
        Ok(PadicTrunc { p: self.p, m: self.m, value: self.value })
    }
}

/// The Teichmueller lift of a prime-field element to Z/p^M, found by
/// iterating x -> x^p until it stops moving.
pub fn teichmueller(a: &Fq, m: u32) -> Result<PadicTrunc> {
    if a.field.m != 1 {
        return Err(Error::Invalid("Teichmueller lifts to Z/p^M need a prime-field element".into()));
    }
    let p = a.p();
    let q = modulus_for(p, m)?;
    let mut t = a.prime_value().unwrap() as u64;
    loop {
        let next = powmod(t, p, q);
        if next == t {
            return Ok(PadicTrunc { p, m, value: t });
        }
        t = next;
    }
}

/// Teichmueller digits d_0, ..., d_{M-1} in [0, p) with
/// x = sum_k p^k [d_k], the unique presentation by lifted residues.
pub fn teichmueller_digits(x: &PadicTrunc) -> Vec<u64> {
    let (p, q) = (x.p, x.modulus());
    let mut rest = x.value;
    let mut scale = 1u64;
    let mut out = Vec::with_capacity(x.m as usize);
    for _ in 0..x.m {
        // rest is divisible by scale = p^k
        let d = (rest / scale) % p;
        out.push(d);
        let t = teich_u64(d, p, q);
        rest = (rest + q - mulmod(t, scale, q)) % q;
        scale = scale.saturating_mul(p);
    }
    out
}

/// Inverse of [`teichmueller_digits`].
pub fn from_teichmueller_digits(p: u64, m: u32, digits: &[u64]) -> Result<PadicTrunc> {
    let q = modulus_for(p, m)?;
    if digits.len() > m as usize || digits.iter().any(|&d| d >= p) {
        return invalid(format!("digits {digits:?} do not describe an element mod {p}^{m}"));
    }
    let mut acc = 0u64;
    let mut scale = 1u64;
    for &d in digits {
        acc = (acc + mulmod(teich_u64(d, p, q), scale, q)) % q;
        scale = scale.saturating_mul(p) % q.max(1);
    }
    Ok(PadicTrunc { p, m, value: acc })
}

fn teich_u64(d: u64, p: u64, q: u64) -> u64 {
    let mut t = d;
    loop {
        let next = powmod(t, p, q);
        if next == t {
            return t;
        }
        t = next;
    }
}

#[cfg(test)]
mod tests {
    #[test]
    fn teichmueller_digit_round_trip() {
        for v in 0..625u64 {
            let x = PadicTrunc::from_i64(5, 4, v as i64).unwrap();
            let d = teichmueller_digits(&x);
            assert_eq!(from_teichmueller_digits(5, 4, &d).unwrap(), x);
        }
        // -1 is itself a Teichmueller lift for odd p
        let m1 = PadicTrunc::from_i64(3, 5, -1).unwrap();
        assert_eq!(teichmueller_digits(&m1), vec![2, 0, 0, 0, 0]);
    }

    use super::*;
    use crate::arith::fq::FqField;

    #[test]
    fn teichmueller_examples() {
        let f3 = FqField::new(3, 1).unwrap();
        assert_eq!(teichmueller(&Fq::from_int(&f3, 0), 4).unwrap().value(), 0);
        assert_eq!(teichmueller(&Fq::from_int(&f3, 1), 4).unwrap().value(), 1);
        let t = teichmueller(&Fq::from_int(&f3, 2), 3).unwrap();
        // brute force over residues mod 27
        let fixed: Vec<u64> = (0..27u64).filter(|x| x % 3 == 2 && x.pow(3) % 27 == *x).collect();
        assert_eq!(fixed, vec![t.value()]);
        assert_eq!(t.value(), 26);
    }

    #[test]
    fn teichmueller_rejects_extension_fields() {
        let f9 = FqField::new(3, 2).unwrap();
        assert!(teichmueller(&Fq::generator(&f9), 3).is_err());
    }

    #[test]
    fn teichmueller_fixed_points() {
        for p in [2u64, 3, 5, 7, 11, 97] {
            let f = FqField::new(p, 1).unwrap();
            for a in Fq::all(&f) {
                let t = teichmueller(&a, 5).unwrap();
                assert_eq!(t.pow(p), t);
                assert_eq!(t.value() % p, a.prime_value().unwrap() as u64);
            }
        }
    }

    #[test]
    fn unit_inverse_and_valuation() {
        let x = PadicTrunc::from_i64(5, 4, 7).unwrap();
        assert_eq!((x * x.inv().unwrap()).value(), 1);
        let y = PadicTrunc::from_i64(5, 4, 50).unwrap();
        assert_eq!(y.valuation(), Some(2));
        assert!(y.inv().is_err());
        assert_eq!(PadicTrunc::from_i64(5, 4, 625).unwrap().valuation(), None);
        assert_eq!(PadicTrunc::from_i64(5, 4, -1).unwrap().value(), 624);
    }
}
