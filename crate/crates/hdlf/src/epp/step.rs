use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::{overflow, window_top, ASDatum, AsCase, Phase};
use crate::arith::fq::Fq;
use crate::arith::padic::powmod;
use crate::arith::rat::rat;
use crate::error::{invalid, Result};
use crate::laurent::{MLaurent, TruncBox};

/// δ as a polynomial in the new t_1 with F_p coefficients, exponents raw.
#[derive(Clone, Debug, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct Perturbation {
    pub terms: Vec<(i64, u64)>,
}

impl Perturbation {
    pub fn zero() -> Perturbation {
        Perturbation { terms: Vec::new() }
    }

    pub fn monomial(m: i64, coeff: u64) -> Perturbation {
        Perturbation { terms: vec![(m, coeff)] }
    }

    fn reduced(&self, p: u64) -> BTreeMap<i64, u64> {
        let mut out = BTreeMap::new();
        for &(e, c) in &self.terms {
            let v = out.entry(e).or_insert(0);
            *v = (*v + c) % p;
        }
        out.retain(|_, c| *c != 0);
        out
    }
}

/// binom(n, k) mod p for any integer n, by Lucas.
pub(crate) fn binom_mod_p(n: i64, k: u64, p: u64) -> u64 {
    if n < 0 {
        let m = (k as i64 - n - 1) as u64;
        let b = lucas(m, k, p);
        return if k % 2 == 1 { (p - b) % p } else { b };
    }
    lucas(n as u64, k, p)
}

fn lucas(mut n: u64, mut k: u64, p: u64) -> u64 {
    let mut r = 1;
    while k > 0 {
        let (ni, ki) = (n % p, k % p);
        if ki > ni {
            return 0;
        }
        let mut num = 1;
        let mut den = 1;
        for i in 0..ki {
            num = num * ((ni - i) % p) % p;
            den = den * ((i + 1) % p) % p;
        }
        r = r * num % p * powmod(den, p - 2, p) % p;
        n /= p;
        k /= p;
    }
    r
}

/// Truncated powers δ^0, δ^1, ... with exponents <= limit.
fn delta_powers(delta: &BTreeMap<i64, u64>, p: u64, limit: i64) -> Vec<BTreeMap<i64, u64>> {
    let mut pows = vec![BTreeMap::from([(0, 1)])];
    if delta.is_empty() {
        return pows;
    }
    loop {
        let last = pows.last().unwrap();
        let mut next: BTreeMap<i64, u64> = BTreeMap::new();
        for (&e1, &c1) in last {
            for (&e2, &c2) in delta {
                let e = e1 + e2;
                if e <= limit {
                    let v = next.entry(e).or_insert(0);
                    *v = (*v + c1 * c2) % p;
                }
            }
        }
        next.retain(|_, c| *c != 0);
        if next.is_empty() {
            return pows;
        }
        pows.push(next);
    }
}

/// Substitutes t_1,old = t_1,new^k (1 + δ) with k = 1 (tilde) or p (plain),
/// expands inside the window and returns the reduced datum.
pub fn rewrite_step(d: &ASDatum, phase: Phase, delta: &Perturbation) -> Result<ASDatum> {
    let p = d.p();
    let pi = p as i64;
    let k = match phase {
        Phase::Tilde => 1,
        Phase::Plain => pi,
    };
    let e_new = d.e_scale.checked_mul(k).ok_or_else(overflow)?;
    let delta = delta.reduced(p);
    if let Some((&m, _)) = delta.iter().next() {
        if rat(m, e_new) < d.c {
            return invalid(format!("v¹(δ) = {} is below c = {}", rat(m, e_new), d.c));
        }
    }
    let top = window_top(d.case, &d.c, e_new);
    let bx = d.xi.bx();
    let lo1 = bx.lo[0].checked_mul(k).ok_or_else(overflow)?;
    let pows = delta_powers(&delta, p, top.checked_sub(lo1).ok_or_else(overflow)?);
    let field = d.xi.field().clone();
    let mut acc: BTreeMap<(i64, i64), Fq> = BTreeMap::new();
    let mut expansions: BTreeMap<i64, Vec<(i64, u64)>> = BTreeMap::new();
    for (e, alpha) in d.xi.terms() {
        let (a1, a2) = (e[0], e[1]);
        let base = a1.checked_mul(k).ok_or_else(overflow)?;
        let exp = expansions.entry(a1).or_insert_with(|| {
            let mut out: BTreeMap<i64, u64> = BTreeMap::new();
            for (j, pw) in pows.iter().enumerate() {
                let b = binom_mod_p(a1, j as u64, p);
                if b == 0 {
                    continue;
                }
                for (&off, &c) in pw {
                    let v = out.entry(off).or_insert(0);
                    *v = (*v + b * c) % p;
                }
            }
            out.into_iter().filter(|&(_, c)| c != 0).collect()
        });
        for &(off, c) in exp.iter() {
            let n1 = base + off;
            if n1 > top {
                continue;
            }
            let term = alpha.clone() * Fq::from_int(&field, c as i64);
            let slot = acc.entry((n1, a2)).or_insert_with(|| Fq::zero(&field));
            *slot = slot.clone() + term;
        }
    }
    let new_box = TruncBox::new(1, vec![lo1, bx.lo[1]], vec![top, bx.hi[1]])?;
    let terms = acc.into_iter().filter(|(_, c)| !c.is_zero()).map(|((a, b), c)| (vec![a, b], c));
    let raw = MLaurent::from_terms(&Fq::zero(&field), new_box, terms)?;
    let xi = match d.case {
        AsCase::B2 => raw.artin_schreier_reduce(),
        AsCase::C => {
            let kept = raw.terms().filter(|(e, _)| e.iter().any(|x| x % pi != 0)).map(|(e, c)| (e.clone(), c.clone()));
            MLaurent::from_terms(&Fq::zero(&field), raw.bx().clone(), kept.collect::<Vec<_>>())?
        }
    };
    ASDatum::new(xi, d.case, d.c.clone(), e_new)
}
