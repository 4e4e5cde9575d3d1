use num_bigint::BigInt;
use num_traits::One;

use super::poly::IntPoly;
use crate::arith::ring::Ring;
use crate::error::{invalid, Result};

/// Universal sum, product and Frobenius polynomials of length-M Witt
/// vectors, solved from the ghost equations.
///
/// Variables are X_0..X_{M-1} followed by Y_0..Y_{M-1} (Frobenius uses
/// X_0..X_M only).
#[derive(Clone, Debug)]
pub struct WittArith {
    pub p: u64,
    pub m: usize,
    sum: Vec<IntPoly>,
    prod: Vec<IntPoly>,
    frob: Vec<IntPoly>,
}

/// Largest supported length.
pub const MAX_LEN: usize = 4;

fn ghost_poly(p: u64, n: usize, vars: &[IntPoly]) -> IntPoly {
    let mut acc = IntPoly::zero(vars[0].nvars());
    for (i, v) in vars.iter().enumerate().take(n + 1) {
        let term = v.pow(p.pow((n - i) as u32)).scale(&BigInt::from(p).pow(i as u32));
        acc = acc.add(&term);
    }
    acc
}

/// Solves phi_n = sum_i p^i Q_i^{p^{n-i}} for Q_n given the targets phi_n.
fn solve(p: u64, targets: &[IntPoly]) -> Result<Vec<IntPoly>> {
    let mut out: Vec<IntPoly> = Vec::new();
    for (n, t) in targets.iter().enumerate() {
        let mut rest = t.clone();
        for (i, q) in out.iter().enumerate() {
            let term = q.pow(p.pow((n - i) as u32)).scale(&BigInt::from(p).pow(i as u32));
            rest = rest.sub(&term);
        }
        out.push(rest.div_exact(&BigInt::from(p).pow(n as u32))?);
    }
    Ok(out)
}

impl WittArith {
    pub fn new(p: u64, m: usize) -> Result<WittArith> {
        if !crate::arith::fq::is_prime(p) {
            return invalid(format!("p = {p} is not prime"));
        }
        if m == 0 || m > MAX_LEN {
            return invalid(format!("Witt length must be in 1..={MAX_LEN}"));
        }
        let nv = 2 * m;
        let xs: Vec<IntPoly> = (0..m).map(|i| IntPoly::var(nv, i)).collect();
        let ys: Vec<IntPoly> = (0..m).map(|i| IntPoly::var(nv, m + i)).collect();
        let gx: Vec<IntPoly> = (0..m).map(|n| ghost_poly(p, n, &xs)).collect();
        let gy: Vec<IntPoly> = (0..m).map(|n| ghost_poly(p, n, &ys)).collect();
        let sum = solve(p, &gx.iter().zip(&gy).map(|(a, b)| a.add(b)).collect::<Vec<_>>())?;
        let prod = solve(p, &gx.iter().zip(&gy).map(|(a, b)| a.mul(b)).collect::<Vec<_>>())?;
        let fv = m + 1;
        let fx: Vec<IntPoly> = (0..fv).map(|i| IntPoly::var(fv, i)).collect();
        let frob = solve(p, &(0..m).map(|n| ghost_poly(p, n + 1, &fx)).collect::<Vec<_>>())?;
        Ok(WittArith { p, m, sum, prod, frob })
    }

    pub fn sum_poly(&self, n: usize) -> &IntPoly {
        &self.sum[n]
    }

    pub fn prod_poly(&self, n: usize) -> &IntPoly {
        &self.prod[n]
    }

    fn check<C: Ring>(&self, a: &WittVec<C>) -> Result<()> {
        if a.p != self.p || a.len() != self.m {
            return invalid(format!("Witt vector (p = {}, M = {}) for W_{} at p = {}", a.p, a.len(), self.m, self.p));
        }
        Ok(())
    }

    fn apply<C: Ring>(&self, polys: &[IntPoly], a: &WittVec<C>, b: &WittVec<C>) -> Result<WittVec<C>> {
        self.check(a)?;
        self.check(b)?;
        let vals: Vec<C> = a.comps.iter().chain(&b.comps).cloned().collect();
        Ok(WittVec { p: self.p, comps: polys.iter().map(|f| f.eval(&vals)).collect() })
    }

    pub fn add<C: Ring>(&self, a: &WittVec<C>, b: &WittVec<C>) -> Result<WittVec<C>> {
        self.apply(&self.sum, a, b)
    }

    pub fn mul<C: Ring>(&self, a: &WittVec<C>, b: &WittVec<C>) -> Result<WittVec<C>> {
        self.apply(&self.prod, a, b)
    }

    pub fn neg<C: Ring>(&self, a: &WittVec<C>) -> Result<WittVec<C>> {
        let minus_one = self.from_int(&a.comps[0], -1)?;
        self.mul(&minus_one, a)
    }

    pub fn sub<C: Ring>(&self, a: &WittVec<C>, b: &WittVec<C>) -> Result<WittVec<C>> {
        self.add(a, &self.neg(b)?)
    }

    /// The image of an integer n: the unique vector with ghost components all n.
    pub fn from_int<C: Ring>(&self, proto: &C, n: i64) -> Result<WittVec<C>> {
        let targets: Vec<IntPoly> = (0..self.m).map(|_| IntPoly::constant(1, BigInt::from(n))).collect();
        let comps = solve(self.p, &targets)?;
        let vals = [proto.zero_like()];
        Ok(WittVec { p: self.p, comps: comps.iter().map(|f| f.eval(&vals)).collect() })
    }

    /// General Frobenius W_{M+1} -> W_M, characterized by F(x)_n-ghost = x_{n+1}-ghost.
    pub fn frobenius_general<C: Ring>(&self, a: &WittVec<C>) -> Result<WittVec<C>> {
        if a.p != self.p || a.len() != self.m + 1 {
            return invalid(format!("Frobenius on W_{} needs a vector of length {}", self.m, self.m + 1));
        }
        Ok(WittVec { p: self.p, comps: self.frob.iter().map(|f| f.eval(&a.comps)).collect() })
    }
}

/// A Witt vector (r_0, ..., r_{M-1}).
#[derive(Clone, Debug, PartialEq)]
pub struct WittVec<C: Ring> {
    pub p: u64,
    pub comps: Vec<C>,
}

impl<C: Ring> WittVec<C> {
    pub fn new(p: u64, comps: Vec<C>) -> Result<WittVec<C>> {
        if comps.is_empty() {
            return invalid("Witt vectors need length >= 1");
        }
        Ok(WittVec { p, comps })
    }

    pub fn zero(p: u64, proto: &C, m: usize) -> WittVec<C> {
        WittVec { p, comps: vec![proto.zero_like(); m] }
    }

    /// Teichmueller representative [r] = (r, 0, ..., 0).
    pub fn teichmueller(p: u64, r: &C, m: usize) -> WittVec<C> {
        let mut comps = vec![r.zero_like(); m];
        comps[0] = r.clone();
        WittVec { p, comps }
    }

    pub fn len(&self) -> usize {
        self.comps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.comps.is_empty()
    }

    /// Ghost components w_n = sum_{i <= n} p^i r_i^{p^{n-i}}.
    pub fn ghost(&self) -> Vec<C> {
        let proto = &self.comps[0];
        let pp = proto.int_like(&BigInt::from(self.p));
        (0..self.len())
            .map(|n| {
                let mut acc = proto.zero_like();
                let mut pi = proto.one_like();
                for (i, r) in self.comps.iter().enumerate().take(n + 1) {
                    acc = acc + pi.clone() * r.pow_u(self.p.pow((n - i) as u32));
                    pi = pi * pp.clone();
                }
                acc
            })
            .collect()
    }

    /// Componentwise p-th powers: the Frobenius over rings of characteristic p.
    pub fn frobenius(&self) -> WittVec<C> {
        WittVec { p: self.p, comps: self.comps.iter().map(|r| r.pow_u(self.p)).collect() }
    }

    /// V(r_0, ..., r_{M-1}) = (0, r_0, ..., r_{M-1}); the length grows by one.
    pub fn verschiebung(&self) -> WittVec<C> {
        let mut comps = vec![self.comps[0].zero_like()];
        comps.extend(self.comps.iter().cloned());
        WittVec { p: self.p, comps }
    }

    pub fn truncate(&self, m: usize) -> WittVec<C> {
        WittVec { p: self.p, comps: self.comps[..m.min(self.len())].to_vec() }
    }

    pub fn map<D: Ring>(&self, f: impl Fn(&C) -> D) -> WittVec<D> {
        WittVec { p: self.p, comps: self.comps.iter().map(f).collect() }
    }
}

/// The integer p as a Witt vector over Z, for tests and the CLI.
pub fn p_as_witt(w: &WittArith) -> Result<WittVec<BigInt>> {
    w.from_int(&BigInt::one(), w.p as i64)
}
