use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::arith::ring::Ring;
use crate::error::{invalid, Result};

/// Integer polynomial in a fixed number of variables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntPoly {
    nvars: usize,
    terms: BTreeMap<Vec<u32>, BigInt>,
}

impl IntPoly {
    pub fn zero(nvars: usize) -> IntPoly {
        IntPoly { nvars, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, c: BigInt) -> IntPoly {
        let mut p = Self::zero(nvars);
        p.add_term(vec![0; nvars], c);
        p
    }

    pub fn var(nvars: usize, i: usize) -> IntPoly {
        let mut e = vec![0; nvars];
        e[i] = 1;
        let mut p = Self::zero(nvars);
        p.add_term(e, BigInt::one());
        p
    }

    fn add_term(&mut self, e: Vec<u32>, c: BigInt) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(e.clone()).or_insert_with(BigInt::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&e);
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, o: &IntPoly) -> IntPoly {
        let mut r = self.clone();
        for (e, c) in &o.terms {
            r.add_term(e.clone(), c.clone());
        }
        r
    }

    pub fn sub(&self, o: &IntPoly) -> IntPoly {
        let mut r = self.clone();
        for (e, c) in &o.terms {
            r.add_term(e.clone(), -c);
        }
        r
    }

    pub fn mul(&self, o: &IntPoly) -> IntPoly {
        let mut r = Self::zero(self.nvars);
        for (a, x) in &self.terms {
            for (b, y) in &o.terms {
                let e = a.iter().zip(b).map(|(i, j)| i + j).collect();
                r.add_term(e, x * y);
            }
        }
        r
    }

    pub fn scale(&self, k: &BigInt) -> IntPoly {
        let mut r = Self::zero(self.nvars);
        for (e, c) in &self.terms {
            r.add_term(e.clone(), c * k);
        }
        r
    }

    pub fn pow(&self, mut e: u64) -> IntPoly {
        let mut acc = Self::constant(self.nvars, BigInt::one());
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// Exact division; fails if some coefficient is not divisible.
    pub fn div_exact(&self, k: &BigInt) -> Result<IntPoly> {
        let mut r = Self::zero(self.nvars);
        for (e, c) in &self.terms {
            let (q, rem) = c.div_rem(k);
            if !rem.is_zero() {
                return invalid(format!("coefficient {c} of {e:?} is not divisible by {k}"));
            }
            r.add_term(e.clone(), q);
        }
        Ok(r)
    }

    /// Substitutes ring elements for the variables.
    pub fn eval<C: Ring>(&self, vals: &[C]) -> C {
        assert_eq!(vals.len(), self.nvars);
        let proto = &vals[0];
        let mut cache: Vec<Vec<C>> = vals.iter().map(|v| vec![v.one_like(), v.clone()]).collect();
        let mut acc = proto.zero_like();
        for (e, c) in &self.terms {
            let mut m = proto.int_like(c);
            for (i, &k) in e.iter().enumerate() {
                if k == 0 {
                    continue;
                }
                let k = k as usize;
                while cache[i].len() <= k {
                    let next = cache[i].last().unwrap().clone() * vals[i].clone();
                    cache[i].push(next);
                }
                m = m * cache[i][k].clone();
            }
            acc = acc + m;
        }
        acc
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn arithmetic_and_eval() {
        let x = IntPoly::var(2, 0);
        let y = IntPoly::var(2, 1);
        let f = x.add(&y).pow(3);
        assert_eq!(f.len(), 4);
        let v = f.eval(&[BigInt::from(2), BigInt::from(5)]);
        assert_eq!(v, BigInt::from(343));
        assert!(f.div_exact(&BigInt::from(3)).is_err());
        let g = f.sub(&x.pow(3)).sub(&y.pow(3)).div_exact(&BigInt::from(3)).unwrap();
        assert_eq!(g.eval(&[BigInt::from(1), BigInt::from(1)]), BigInt::from(2));
    }
}
