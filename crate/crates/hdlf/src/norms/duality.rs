use num_traits::One;
use serde::Serialize;

use super::compat::CompatSeq;
use crate::arith::eis::EisElem;
use crate::arith::rat::{ri, serde_ext, serde_rat, ExtRat, Rat};
use crate::error::{invalid, Error, Result};
use crate::witt::gamma::{fontaine_gamma, sigma_inv_witt};
use crate::witt::WittVec;

#[derive(Clone, Debug)]
pub struct DualityValue {
    pub value: EisElem,
    pub log_arg: EisElem,
    pub level: usize,
    pub precision: Rat,
}

/// Summary printed by the CLI.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DualityReport {
    pub level: usize,
    #[serde(with = "serde_ext")]
    pub log_arg_valuation: ExtRat,
    #[serde(with = "serde_rat")]
    pub precision: Rat,
    pub in_one_plus_p: bool,
    pub value: Vec<u64>,
}

impl DualityValue {
    /// v(value - 1) >= 1, certified below the precision.
    pub fn in_one_plus_p(&self) -> bool {
        let one = EisElem::one(&self.value.ring);
        self.precision > Rat::one() && (&self.value - &one).valuation() >= ExtRat::Finite(Rat::one())
    }

    pub fn report(&self) -> DualityReport {
        DualityReport {
            level: self.level,
            log_arg_valuation: self.log_arg.valuation(),
            precision: self.precision.clone(),
            in_one_plus_p: self.in_one_plus_p(),
            value: self.value.coords().to_vec(),
        }
    }
}

fn vp_factorial(p: u64, k: u64) -> u64 {
    let (mut s, mut q) = (0, p);
    while q <= k {
        s += k / q;
        q *= p;
    }
    s
}

/// exp(x) for v(x) > 1/(p - 1), computed at extra precision so that the
/// divisions by k! lose nothing at the ring's precision.
pub fn exp_converging(x: &EisElem) -> Result<EisElem> {
    let ring = x.ring.clone();
    let p = ring.p;
    let v = match x.valuation() {
        ExtRat::Infinity => return Ok(EisElem::one(&ring)),
        ExtRat::Finite(v) => v,
    };
    let floor = Rat::new(1.into(), (p - 1).into());
    if v <= floor {
        return Err(Error::DivergentExponent(format!("v(x) = {v} <= 1/(p-1)")));
    }
    // k v - v_p(k!) >= k (v - 1/(p-1)) >= M once k >= M / (v - 1/(p-1))
    let m = ri(ring.m as i64);
    let bound = (&m / (&v - &floor)).ceil().to_integer();
    let kmax: u64 = bound.try_into().map_err(|_| Error::PrecisionExhausted("exponential needs too many terms".into()))?;
    let extra = vp_factorial(p, kmax) as u32;
    let work = ring.with_precision(ring.m + extra)?;
    let xw = x.change_precision(&work)?;
    let mut acc = EisElem::one(&ring);
    let mut power = EisElem::one(&work);
    for k in 1..=kmax {
        power = &power * &xw;
        let s = vp_factorial(p, k);
        let mut unit = 1u64;
        for i in 1..=k {
            let mut j = i;
            while j % p == 0 {
                j /= p;
            }
            unit = ((unit as u128 * j as u128) % work.modulus() as u128) as u64;
        }
        let mut term = &power * &EisElem::from_i64(&work, unit as i64).inv()?;
        for _ in 0..s {
            term = term.div_p()?;
        }
        acc = &acc + &term.change_precision(&ring)?;
    }
    Ok(acc)
}

/// [ε] - 1 of the given Witt length.
pub fn epsilon_minus_one(t: &std::sync::Arc<super::CycTower>, len: usize) -> Result<WittVec<CompatSeq>> {
    let e = super::epsilon(t)?;
    let w = crate::witt::WittArith::new(t.p, len)?;
    w.sub(&WittVec::teichmueller(t.p, &e, len), &w.from_int(&e, 1)?)
}

/// exp(-p gamma(sigma^{-1} f) - ... - p^M gamma(sigma^{-M} f)).
pub fn duality_map(f: &WittVec<CompatSeq>, m: usize) -> Result<DualityValue> {
    if m == 0 {
        return invalid("M must be >= 1");
    }
    let t = f.comps[0].tower().clone();
    let p = t.p;
    let mut parts = Vec::new();
    let mut precision = ri(t.m as i64);
    for k in 1..=m {
        let g = fontaine_gamma(&sigma_inv_witt(f, k)?, None)?;
        precision = precision.min(ri(k as i64) + &g.precision);
        parts.push(g);
    }
    let level = parts.iter().map(|g| g.level).max().unwrap();
    let mut arg = EisElem::zero(t.ring(level));
    for (k, g) in parts.iter().enumerate() {
        let pk = p.pow(k as u32 + 1);
        arg = &arg - &t.embed(&g.value, level)?.scale(pk);
    }
    // the argument is only known below `precision`; so is its exponential
    let floor = Rat::new(1.into(), (p - 1).into());
    if precision <= floor {
        return Err(Error::PrecisionExhausted(format!("exponential argument known only to {precision}")));
    }
    let value = exp_converging(&arg)?;
    Ok(DualityValue { value, log_arg: arg, level, precision })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat::rat;
    use crate::arith::ring::Ring;
    use crate::arith::eis::EisRing;
    use crate::norms::{epsilon, CycTower};

    #[test]
    fn exp_matches_series_identity() {
        let ring = EisRing::cyclotomic(3, 1, 8).unwrap();
        let x = EisElem::from_i64(&ring, 3);
        let y = &EisElem::pi(&ring) * &EisElem::from_i64(&ring, 3);
        let lhs = exp_converging(&(&x + &y)).unwrap();
        let rhs = &exp_converging(&x).unwrap() * &exp_converging(&y).unwrap();
        assert_eq!(lhs, rhs);
        assert!(matches!(exp_converging(&EisElem::pi(&ring)), Err(Error::DivergentExponent(_))));
    }

    #[test]
    fn epsilon_minus_one_lands_in_one_plus_p() {
        for (p, m) in [(3u64, 8u32), (2, 16)] {
            let t = CycTower::new(p, 4, m).unwrap();
            let f = epsilon_minus_one(&t, 2).unwrap();
            let d = duality_map(&f, 1).unwrap();
            let want = Rat::one() + rat(1, p as i64 - 1);
            assert_eq!(d.log_arg.valuation(), ExtRat::Finite(want.clone()));
            assert!(d.precision > want);
            assert!(d.in_one_plus_p());
        }
    }

    #[test]
    fn zero_maps_to_one() {
        let t = CycTower::new(3, 3, 6).unwrap();
        let e = epsilon(&t).unwrap();
        let z = WittVec::zero(3, &e.zero_like(), 2);
        let d = duality_map(&z, 1).unwrap();
        assert_eq!(d.value, EisElem::one(&d.value.ring));
    }
}
