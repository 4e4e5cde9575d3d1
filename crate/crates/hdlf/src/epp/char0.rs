use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::arith::eis::{EisElem, EisRing};
use crate::arith::rat::{ri, serde_rat, ExtRat, Rat};
use crate::error::{invalid, Error, Result};
use crate::herbrand::{LexIndex, RamJumps};
use crate::krasner::disc_valuation;
use crate::witt::artin_hasse;

/// An element π_1 with π_1^(p-1) = -p, found by Newton iteration on the
/// unit part.
pub fn find_pi1(ring: &Arc<EisRing>) -> Result<EisElem> {
    let p = ring.p;
    let d = ring.d;
    let minus_p = EisElem::from_i64(ring, -(p as i64));
    if p == 2 {
        return Ok(minus_p);
    }
    if !d.is_multiple_of(p as usize - 1) {
        return Err(Error::RingLacksPi1);
    }
    // pi^d = p * eta with eta = -sum (a_i / p) pi^i
    let mp = ring.minpoly();
    let lower: Vec<BigInt> = mp[..d].iter().map(|a| -(a / BigInt::from(p))).collect();
    let eta = EisElem::from_coords(ring, &lower)?;
    let target = -&eta.inv()?;
    if target.residue() != 1 {
        return Err(Error::RingLacksPi1);
    }
    // u^(p-1) = target
    let k = p - 1;
    let mut u = EisElem::one(ring);
    for _ in 0..128 {
        let g = &u.pow(k) - &target;
        if g.is_zero() {
            let pi1 = &EisElem::pi(ring).pow((d / k as usize) as u64) * &u;
            if pi1.pow(k) != minus_p {
                return Err(Error::PrecisionExhausted("pi_1 does not satisfy its equation".into()));
            }
            return Ok(pi1);
        }
        let dg = u.pow(k - 1).scale(k);
        u = &u - &(&g * &dg.inv()?);
    }
    Err(Error::PrecisionExhausted("Newton iteration for pi_1 did not converge".into()))
}

/// v ↦ w for the correspondence between Kummer and Artin-Schreier
/// presentations of a degree-p extension.
#[derive(Clone, Debug)]
pub struct Char0Translation {
    pub pi1: EisElem,
    /// v = E(π_1 V).
    pub v: EisElem,
    /// p·w; the Artin-Schreier constant is w = -V/p.
    pub p_times_w: EisElem,
    pub oracle: Option<JumpOracle>,
}

/// Both presentations' ramification data in v_K units.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct JumpOracle {
    /// -v_K(w).
    #[serde(with = "serde_rat")]
    pub as_jump: Rat,
    /// p e / (p - 1) - v_K(v - 1).
    #[serde(with = "serde_rat")]
    pub kummer_jump: Rat,
    /// (p - 1)(m + 1) from the Artin-Schreier side.
    #[serde(with = "serde_rat")]
    pub disc_as: Rat,
    /// The closed form for one jump m, checked against root distances.
    #[serde(with = "serde_rat")]
    pub disc_closed_form: Rat,
    pub agree: bool,
}

/// E(x) in the ring; all terms beyond the precision vanish.
fn artin_hasse_at(x: &EisElem) -> Result<EisElem> {
    let ring = &x.ring;
    let vx = match x.valuation() {
        ExtRat::Infinity => return Ok(EisElem::one(ring)),
        ExtRat::Finite(v) => v,
    };
    if !vx.is_positive() {
        return invalid("the Artin-Hasse argument must lie in the maximal ideal");
    }
    let deg = usize::try_from((ri(ring.m as i64) / vx).ceil().to_integer())
        .map_err(|_| Error::Invalid("Artin-Hasse degree out of range".into()))?;
    let series = artin_hasse(ring.p, deg.max(1))?;
    let mut acc = EisElem::zero(ring);
    for c in series.coeffs.iter().rev() {
        let num = EisElem::from_int(ring, c.numer());
        let den = EisElem::from_int(ring, c.denom()).inv()?;
        acc = &(&acc * x) + &(&num * &den);
    }
    Ok(acc)
}

/// Translates v = E(π_1 V) into θ^p - θ = w with w = -V/p, and compares
/// the ramification jumps of both presentations.
pub fn char0_translate(big_v: &EisElem) -> Result<Char0Translation> {
    let ring = &big_v.ring;
    if big_v.is_unit() {
        return invalid("V must lie in the maximal ideal");
    }
    let pi1 = find_pi1(ring)?;
    let v = artin_hasse_at(&(&pi1 * big_v))?;
    let p_times_w = -big_v;
    let oracle = match big_v.valuation() {
        ExtRat::Infinity => None,
        ExtRat::Finite(val) => jump_oracle(ring, &val, &v)?,
    };
    Ok(Char0Translation { pi1, v, p_times_w, oracle })
}

fn jump_oracle(ring: &Arc<EisRing>, val_v: &Rat, v: &EisElem) -> Result<Option<JumpOracle>> {
    let p = ring.p as i64;
    let e = ri(ring.d as i64);
    let m = &e - val_v * &e;
    // only reduced presentations with a positive jump prime to p are compared
    if !m.is_positive() || !m.is_integer() || (m.to_integer() % BigInt::from(p)).is_zero() {
        return Ok(None);
    }
    let b = (v - &EisElem::one(ring)).valuation_nonzero()? * &e;
    let kummer_jump = ri(p) * &e / ri(p - 1) - b;
    let disc_as = ri(p - 1) * (&m + Rat::one());
    let m_int: i64 = m.to_integer().try_into().map_err(|_| Error::Invalid("jump out of range".into()))?;
    let rj = RamJumps::new(vec![p as u64], vec![LexIndex::from_ints(&[m_int])], vec![p as u64, 1])?;
    let closed = disc_valuation(&rj, &LexIndex::from_ints(&[1]))?.first().clone();
    let agree = kummer_jump == m && closed == disc_as;
    Ok(Some(JumpOracle { as_jump: m, kummer_jump, disc_as, disc_closed_form: closed, agree }))
}
