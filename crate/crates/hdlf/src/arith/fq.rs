//! Finite fields F_q, q = p^m, with log/exp tables.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use super::ring::Ring;
use crate::error::{invalid, Result};

pub const MAX_P: u64 = 97;
const MAX_Q: u64 = 1 << 16;

/// Fixed moduli for p^m <= 64, lowest coefficient first, monic.
fn conway(p: u64, m: u32) -> Option<Vec<u32>> {
    let v: &[u32] = match (p, m) {
        (2, 1) => &[1, 1],
        (2, 2) => &[1, 1, 1],
        (2, 3) => &[1, 1, 0, 1],
        (2, 4) => &[1, 1, 0, 0, 1],
        (2, 5) => &[1, 0, 1, 0, 0, 1],
        (2, 6) => &[1, 1, 0, 1, 1, 0, 1],
        (3, 1) => &[1, 1],
        (3, 2) => &[2, 2, 1],
        (3, 3) => &[1, 2, 0, 1],
        (5, 1) => &[3, 1],
        (5, 2) => &[2, 4, 1],
        (7, 1) => &[4, 1],
        (7, 2) => &[3, 6, 1],
        _ => return None,
    };
    Some(v.to_vec())
}

pub fn is_prime(n: u64) -> bool {
    n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| !n.is_multiple_of(d))
}

// Dense polynomials over F_p, lowest coefficient first.
fn ptrim(mut a: Vec<u32>) -> Vec<u32> {
    while a.last() == Some(&0) {
        a.pop();
    }
    a
}

fn pmod(a: &[u32], f: &[u32], p: u32) -> Vec<u32> {
    let mut r = ptrim(a.to_vec());
    let df = f.len() - 1;
    let inv_lead = inv_mod(f[df], p);
    while r.len() > df {
        let k = r.len() - 1 - df;
        let c = (r[r.len() - 1] as u64 * inv_lead as u64 % p as u64) as u32;
        for (i, &fi) in f.iter().enumerate() {
            let sub = (c as u64 * fi as u64 % p as u64) as u32;
            r[k + i] = (r[k + i] + p - sub) % p;
        }
        r = ptrim(r);
    }
    r
}

fn pmulmod(a: &[u32], b: &[u32], f: &[u32], p: u32) -> Vec<u32> {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    let mut r = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            r[i + j] = (r[i + j] + x as u64 * y as u64) % p as u64;
        }
    }
    pmod(&r.into_iter().map(|x| x as u32).collect::<Vec<_>>(), f, p)
}

fn ppowmod(a: &[u32], mut e: u64, f: &[u32], p: u32) -> Vec<u32> {
    let mut acc = vec![1u32];
    let mut b = pmod(a, f, p);
    while e > 0 {
        if e & 1 == 1 {
            acc = pmulmod(&acc, &b, f, p);
        }
        b = pmulmod(&b, &b, f, p);
        e >>= 1;
    }
    acc
}

fn pgcd(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
    let (mut a, mut b) = (ptrim(a.to_vec()), ptrim(b.to_vec()));
    while !b.is_empty() {
        let r = pmod(&a, &b, p);
        a = b;
        b = r;
    }
    a
}

fn inv_mod(a: u32, p: u32) -> u32 {
    let e = BigInt::from(a).extended_gcd(&BigInt::from(p));
    e.x.mod_floor(&BigInt::from(p)).to_u32().unwrap()
}

/// Rabin's irreducibility test for a monic polynomial over F_p.
pub fn is_irreducible(f: &[u32], p: u32) -> bool {
    let m = f.len() - 1;
    if m == 0 || f[m] != 1 {
        return false;
    }
    if m == 1 {
        return true;
    }
    let x = vec![0u32, 1];
    let pm = |k: usize| (p as u64).pow(k as u32);
    let xq = ppowmod(&x, pm(m), f, p);
    if pmod(&xq, f, p) != pmod(&x, f, p) {
        return false;
    }
    for r in (2..=m).filter(|r| m.is_multiple_of(*r) && is_prime(*r as u64)) {
        let mut h = ppowmod(&x, pm(m / r), f, p);
        // h - x
        if h.len() < 2 {
            h.resize(2, 0);
        }
        h[1] = (h[1] + p - 1) % p;
        let g = pgcd(f, &h, p);
        if g.len() != 1 {
            return false;
        }
    }
    true
}

/// Shared context of a finite field.
pub struct FqField {
    pub p: u64,
    pub m: u32,
    pub q: u64,
    /// Monic modulus, lowest coefficient first.
    pub modulus: Vec<u32>,
    exp: Vec<u32>,
    log: Vec<u32>,
    trace_one: u32,
}

impl fmt::Debug for FqField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F_{}^{}", self.p, self.m)
    }
}

impl PartialEq for FqField {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.modulus == other.modulus
    }
}

impl FqField {
    /// The field with the fixed table modulus, or the first irreducible
    /// polynomial in lexicographic order outside the table.
    pub fn new(p: u64, m: u32) -> Result<Arc<FqField>> {
        if !is_prime(p) || p > MAX_P {
            return invalid(format!("p = {p} must be a prime <= {MAX_P}"));
        }
        if m == 0 {
            return invalid("extension degree must be >= 1");
        }
        let modulus = match conway(p, m) {
            Some(f) => f,
            None if m == 1 => {
                let g = (1..p as u32).find(|&g| is_primitive_root(g, p)).unwrap();
                vec![(p as u32 - g) % p as u32, 1]
            }
            None => first_irreducible(p as u32, m)?,
        };
        Self::with_modulus(p, modulus)
    }

    pub fn with_modulus(p: u64, modulus: Vec<u32>) -> Result<Arc<FqField>> {
        if !is_prime(p) || p > MAX_P {
            return invalid(format!("p = {p} must be a prime <= {MAX_P}"));
        }
        let m = modulus.len() as u32 - 1;
        let q = p.checked_pow(m).filter(|&q| q <= MAX_Q);
        let Some(q) = q else {
            return invalid(format!("field size {p}^{m} exceeds the table bound"));
        };
        if modulus.iter().any(|&c| c as u64 >= p) || !is_irreducible(&modulus, p as u32) {
            return invalid(format!("modulus {modulus:?} is not irreducible over F_{p}"));
        }
        let mut field = FqField { p, m, q, modulus, exp: vec![], log: vec![], trace_one: 0 };
        field.build_tables()?;
        Ok(Arc::new(field))
    }

    fn unpack(&self, v: u32) -> Vec<u32> {
        let mut out = Vec::with_capacity(self.m as usize);
        let mut v = v;
        for _ in 0..self.m {
            out.push(v % self.p as u32);
            v /= self.p as u32;
        }
        out
    }

    fn pack(&self, c: &[u32]) -> u32 {
        c.iter().rev().fold(0u32, |acc, &d| acc * self.p as u32 + d)
    }

    fn slow_mul(&self, a: u32, b: u32) -> u32 {
        let r = pmulmod(&self.unpack(a), &self.unpack(b), &self.modulus, self.p as u32);
        self.pack(&r)
    }

    fn build_tables(&mut self) -> Result<()> {
        let n = (self.q - 1) as usize;
        let mut log = vec![0u32; self.q as usize];
        let mut exp = vec![0u32; n];
        let mut found = false;
        'gen: for g in 1..self.q as u32 {
            let mut x = 1u32;
            for (i, e) in exp.iter_mut().enumerate() {
                if i > 0 && x == 1 {
                    continue 'gen;
                }
                *e = x;
                x = self.slow_mul(x, g);
            }
            if x == 1 {
                found = true;
                break;
            }
        }
        if !found {
            return invalid("no multiplicative generator found");
        }
        for (i, &e) in exp.iter().enumerate() {
            log[e as usize] = i as u32;
        }
        self.exp = exp;
        self.log = log;
        // smallest element of trace 1, used as the fixed coset representative
        self.trace_one = (0..self.q as u32).find(|&v| raw_trace(self, v) == 1).unwrap_or(1);
        Ok(())
    }

    fn add_raw(&self, a: u32, b: u32) -> u32 {
        if self.m == 1 {
            return ((a as u64 + b as u64) % self.p) as u32;
        }
        let p = self.p as u32;
        let (mut a, mut b, mut out, mut scale) = (a, b, 0u32, 1u32);
        for _ in 0..self.m {
            out += ((a % p + b % p) % p) * scale;
            a /= p;
            b /= p;
            scale *= p;
        }
        out
    }

    fn neg_raw(&self, a: u32) -> u32 {
        let p = self.p as u32;
        let (mut a, mut out, mut scale) = (a, 0u32, 1u32);
        for _ in 0..self.m {
            out += ((p - a % p) % p) * scale;
            a /= p;
            scale *= p;
        }
        out
    }

    fn mul_raw(&self, a: u32, b: u32) -> u32 {
        if a == 0 || b == 0 {
            return 0;
        }
        let n = self.q - 1;
        let s = (self.log[a as usize] as u64 + self.log[b as usize] as u64) % n;
        self.exp[s as usize]
    }

    fn pow_raw(&self, a: u32, e: u64) -> u32 {
        if e == 0 {
            return 1;
        }
        if a == 0 {
            return 0;
        }
        let n = self.q - 1;
        let s = (self.log[a as usize] as u64 % n) * (e % n) % n;
        self.exp[s as usize]
    }
}

fn raw_trace(f: &FqField, v: u32) -> u32 {
    let mut acc = 0u32;
    let mut x = v;
    for _ in 0..f.m {
        acc = f.add_raw(acc, x);
        x = if x == 0 { 0 } else { f.slow_mul_pow_p(x) };
    }
    acc
}

impl FqField {
    fn slow_mul_pow_p(&self, x: u32) -> u32 {
        let r = ppowmod(&self.unpack(x), self.p, &self.modulus, self.p as u32);
        self.pack(&r)
    }
}

fn is_primitive_root(g: u32, p: u64) -> bool {
    let n = p - 1;
    (1..=n).filter(|d| n.is_multiple_of(*d) && *d < n).all(|d| {
        let mut x = 1u64;
        for _ in 0..d {
            x = x * g as u64 % p;
        }
        x != 1
    })
}

fn first_irreducible(p: u32, m: u32) -> Result<Vec<u32>> {
    let total = (p as u64).pow(m);
    for k in 0..total {
        let mut f = Vec::with_capacity(m as usize + 1);
        let mut k = k;
        for _ in 0..m {
            f.push((k % p as u64) as u32);
            k /= p as u64;
        }
        f.push(1);
        if f[0] != 0 && is_irreducible(&f, p) {
            return Ok(f);
        }
    }
    invalid(format!("no irreducible polynomial of degree {m} over F_{p}"))
}

/// An element of F_q, packed as a base-p integer over the modulus basis.
#[derive(Clone)]
pub struct Fq {
    pub field: Arc<FqField>,
    v: u32,
}

impl Fq {
    pub fn new(field: &Arc<FqField>, packed: u32) -> Fq {
        assert!((packed as u64) < field.q, "packed value out of range");
        Fq { field: field.clone(), v: packed }
    }

    pub fn zero(field: &Arc<FqField>) -> Fq {
        Fq { field: field.clone(), v: 0 }
    }

    pub fn one(field: &Arc<FqField>) -> Fq {
        Fq { field: field.clone(), v: 1 }
    }

    pub fn from_int(field: &Arc<FqField>, n: i64) -> Fq {
        let r = n.rem_euclid(field.p as i64) as u32;
        Fq { field: field.clone(), v: r }
    }

    pub fn from_coords(field: &Arc<FqField>, coords: &[u32]) -> Result<Fq> {
        if coords.len() != field.m as usize || coords.iter().any(|&c| c as u64 >= field.p) {
            return invalid(format!("bad coordinates {coords:?} for {:?}", field));
        }
        Ok(Fq { field: field.clone(), v: field.pack(coords) })
    }

    /// A generator of the multiplicative group.
    pub fn generator(field: &Arc<FqField>) -> Fq {
        let g = if field.q > 2 { field.exp[1] } else { 1 };
        Fq { field: field.clone(), v: g }
    }

    pub fn packed(&self) -> u32 {
        self.v
    }

    pub fn coords(&self) -> Vec<u32> {
        self.field.unpack(self.v)
    }

    pub fn p(&self) -> u64 {
        self.field.p
    }

    pub fn is_zero(&self) -> bool {
        self.v == 0
    }

    pub fn is_one(&self) -> bool {
        self.v == 1
    }

    /// Value in the prime field, if the element lies there.
    pub fn prime_value(&self) -> Option<u32> {
        (self.v < self.field.p as u32).then_some(self.v)
    }

    pub fn pow(&self, e: u64) -> Fq {
        Fq { field: self.field.clone(), v: self.field.pow_raw(self.v, e) }
    }

    pub fn inv(&self) -> Option<Fq> {
        if self.v == 0 {
            return None;
        }
        Some(self.pow(self.field.q - 2))
    }

    pub fn frobenius(&self) -> Fq {
        self.pow(self.field.p)
    }

    /// The unique p-th root (inverse Frobenius).
    pub fn pth_root(&self) -> Fq {
        self.pow(self.field.q / self.field.p)
    }

    /// Absolute trace to F_p.
    pub fn trace(&self) -> u32 {
        raw_trace(&self.field, self.v)
    }

    /// Fixed representative of the class of `self` modulo the image of x^p - x.
    pub fn wp_coset_rep(&self) -> Fq {
        let t = self.trace();
        let base = Fq { field: self.field.clone(), v: self.field.trace_one };
        base * Fq::from_int(&self.field, t as i64)
    }

    pub fn all(field: &Arc<FqField>) -> impl Iterator<Item = Fq> + '_ {
        (0..field.q as u32).map(move |v| Fq { field: field.clone(), v })
    }
}

impl PartialEq for Fq {
    fn eq(&self, other: &Self) -> bool {
        self.v == other.v && (Arc::ptr_eq(&self.field, &other.field) || *self.field == *other.field)
    }
}

impl Eq for Fq {}

impl std::hash::Hash for Fq {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.v.hash(state);
    }
}

impl fmt::Debug for Fq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.field.m == 1 {
            write!(f, "{}", self.v)
        } else {
            write!(f, "{:?}", self.coords())
        }
    }
}

fn check_same(a: &Fq, b: &Fq) {
    assert!(
        Arc::ptr_eq(&a.field, &b.field) || *a.field == *b.field,
        "mixing elements of different finite fields"
    );
}

impl Add for Fq {
    type Output = Fq;
    fn add(self, rhs: Fq) -> Fq {
        check_same(&self, &rhs);
        let v = self.field.add_raw(self.v, rhs.v);
        Fq { field: self.field, v }
    }
}

impl Sub for Fq {
    type Output = Fq;
    fn sub(self, rhs: Fq) -> Fq {
        check_same(&self, &rhs);
        let v = self.field.add_raw(self.v, self.field.neg_raw(rhs.v));
        Fq { field: self.field, v }
    }
}

impl Neg for Fq {
    type Output = Fq;
    fn neg(self) -> Fq {
        let v = self.field.neg_raw(self.v);
        Fq { field: self.field, v }
    }
}

impl Mul for Fq {
    type Output = Fq;
    fn mul(self, rhs: Fq) -> Fq {
        check_same(&self, &rhs);
        let v = self.field.mul_raw(self.v, rhs.v);
        Fq { field: self.field, v }
    }
}

impl Ring for Fq {
    fn zero_like(&self) -> Self {
        Fq::zero(&self.field)
    }
    fn one_like(&self) -> Self {
        Fq::one(&self.field)
    }
    fn int_like(&self, n: &BigInt) -> Self {
        let r = n.mod_floor(&BigInt::from(self.field.p)).to_i64().unwrap();
        Fq::from_int(&self.field, r)
    }
    fn is_zero_elem(&self) -> bool {
        self.v == 0
    }
    fn pow_u(&self, e: u64) -> Self {
        self.pow(e)
    }
    fn inv_elem(&self) -> Option<Self> {
        self.inv()
    }
}

/// JSON form `{p, m, coords}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FqJson {
    pub p: u64,
    pub m: u32,
    pub coords: Vec<u32>,
}

impl From<&Fq> for FqJson {
    fn from(a: &Fq) -> Self {
        FqJson { p: a.field.p, m: a.field.m, coords: a.coords() }
    }
}

impl FqJson {
    pub fn to_fq(&self) -> Result<Fq> {
        let field = FqField::new(self.p, self.m)?;
        Fq::from_coords(&field, &self.coords)
    }
}
