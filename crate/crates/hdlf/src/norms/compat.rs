use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::Serialize;

use super::tower::CycTower;
use crate::arith::eis::EisElem;
use crate::arith::fq::Fq;
use crate::arith::padic::teichmueller;
use crate::arith::rat::{ri, serde_ext, serde_rat, ExtRat, Rat};
use crate::arith::ring::Ring;
use crate::error::{invalid, Error, Result};
use crate::laurent::MLaurent;

/// A p-power compatible sequence (x_0, x_1, ...) of tower elements with
/// x_{n+1}^p ≡ x_n modulo {v_T >= c}.
///
/// Position n may sit in any level of the tower; comparisons embed both
/// sides into the higher level.
#[derive(Clone)]
pub struct CompatSeq {
    tower: Arc<CycTower>,
    xs: Vec<EisElem>,
    c: Rat,
}

/// The measured compatibility at one position.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Certificate {
    pub level: usize,
    #[serde(with = "serde_ext")]
    pub measured_v1: ExtRat,
    #[serde(with = "serde_rat")]
    pub threshold: Rat,
    pub pass: bool,
}

impl fmt::Debug for CompatSeq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CompatSeq(c={}, {:?})", self.c, self.xs)
    }
}

impl PartialEq for CompatSeq {
    fn eq(&self, other: &Self) -> bool {
        self.xs == other.xs && self.c == other.c
    }
}

impl CompatSeq {
    /// Builds a sequence and verifies it at threshold `c`.
    pub fn new(tower: &Arc<CycTower>, xs: Vec<EisElem>, c: Rat) -> Result<CompatSeq> {
        let s = Self::unchecked(tower, xs, c)?;
        if let Some(bad) = s.certificates()?.iter().find(|x| !x.pass) {
            return Err(Error::Invalid(format!(
                "sequence is not compatible at position {}: measured {} < {}",
                bad.level, bad.measured_v1, bad.threshold
            )));
        }
        Ok(s)
    }

    /// Builds a sequence whose threshold is the measured minimum.
    pub fn measured(tower: &Arc<CycTower>, xs: Vec<EisElem>) -> Result<CompatSeq> {
        let s = Self::unchecked(tower, xs, tower.exact_threshold())?;
        let low = s.measure()?.into_iter().min().unwrap_or(ExtRat::Infinity);
        let c = match low {
            ExtRat::Finite(v) => v.min(tower.exact_threshold()),
            ExtRat::Infinity => tower.exact_threshold(),
        };
        if c <= Rat::zero() {
            return Err(Error::PrecisionExhausted("no positive compatibility threshold".into()));
        }
        Ok(CompatSeq { c, ..s })
    }

    fn unchecked(tower: &Arc<CycTower>, xs: Vec<EisElem>, c: Rat) -> Result<CompatSeq> {
        if xs.is_empty() {
            return invalid("compatible sequences need at least one position");
        }
        for x in &xs {
            tower.level_of(x)?;
        }
        Ok(CompatSeq { tower: tower.clone(), xs, c })
    }

    pub fn tower(&self) -> &Arc<CycTower> {
        &self.tower
    }

    pub fn p(&self) -> u64 {
        self.tower.p
    }

    pub fn threshold(&self) -> &Rat {
        &self.c
    }

    pub fn len(&self) -> usize {
        self.xs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.xs.is_empty()
    }

    pub fn value(&self, n: usize) -> &EisElem {
        &self.xs[n]
    }

    pub fn values(&self) -> &[EisElem] {
        &self.xs
    }

    /// v_T(x_{n+1}^p - x_n) for each n.
    pub fn measure(&self) -> Result<Vec<ExtRat>> {
        self.xs
            .windows(2)
            .map(|w| {
                let (hi, lo) = self.tower.common(&w[1].pow(self.p()), &w[0])?;
                Ok(self.tower.v_t(&(&hi - &lo)))
            })
            .collect()
    }

    pub fn certificates(&self) -> Result<Vec<Certificate>> {
        Ok(self
            .measure()?
            .into_iter()
            .enumerate()
            .map(|(n, m)| Certificate {
                level: n,
                pass: m >= ExtRat::Finite(self.c.clone()),
                measured_v1: m,
                threshold: self.c.clone(),
            })
            .collect())
    }

    /// The p-th root in R: position n takes the old position n + 1.
    pub fn sigma_inv(&self) -> Result<CompatSeq> {
        if self.len() < 2 {
            return Err(Error::PrecisionExhausted("no position left to shift".into()));
        }
        Ok(CompatSeq { xs: self.xs[1..].to_vec(), ..self.clone() })
    }

    pub fn sigma_inv_k(&self, k: usize) -> Result<CompatSeq> {
        let mut s = self.clone();
        for _ in 0..k {
            s = s.sigma_inv()?;
        }
        Ok(s)
    }

    fn zip_with(&self, o: &CompatSeq, c: Rat, f: impl Fn(&EisElem, &EisElem) -> EisElem) -> CompatSeq {
        assert!(Arc::ptr_eq(&self.tower, &o.tower), "sequences from different towers");
        let xs = self
            .xs
            .iter()
            .zip(&o.xs)
            .map(|(a, b)| {
                let (a, b) = self.tower.common(a, b).expect("levels of one tower");
                f(&a, &b)
            })
            .collect();
        CompatSeq { tower: self.tower.clone(), xs, c }
    }

    fn additive_cap(&self) -> Rat {
        ri(self.p() as i64 - 1)
    }

    /// The same sequence, sitting entirely in the top level it touches.
    pub fn lift_to(&self, level: usize) -> Result<CompatSeq> {
        let xs = self.xs.iter().map(|x| self.tower.embed(x, level)).collect::<Result<_>>()?;
        Ok(CompatSeq { xs, ..self.clone() })
    }

    pub fn top_level(&self) -> usize {
        self.xs.iter().map(|x| self.tower.level_of(x).unwrap()).max().unwrap()
    }

    fn constant(&self, n: &BigInt) -> CompatSeq {
        let xs = self.xs.iter().map(|x| EisElem::from_int(&x.ring, n)).collect();
        // n^p = n only for 0, 1 (and -1 when p is odd); otherwise mod p
        let exact = n.is_zero() || n.is_one() || (self.p() != 2 && *n == BigInt::from(-1));
        let c = if exact { self.tower.exact_threshold() } else { self.additive_cap() };
        CompatSeq { tower: self.tower.clone(), xs, c }
    }
}

impl Add for CompatSeq {
    type Output = CompatSeq;
    fn add(self, o: CompatSeq) -> CompatSeq {
        let c = self.c.clone().min(o.c.clone()).min(self.additive_cap());
        self.zip_with(&o, c, |a, b| a + b)
    }
}

impl Sub for CompatSeq {
    type Output = CompatSeq;
    fn sub(self, o: CompatSeq) -> CompatSeq {
        let c = self.c.clone().min(o.c.clone()).min(self.additive_cap());
        self.zip_with(&o, c, |a, b| a - b)
    }
}

impl Mul for CompatSeq {
    type Output = CompatSeq;
    fn mul(self, o: CompatSeq) -> CompatSeq {
        let c = self.c.clone().min(o.c.clone());
        self.zip_with(&o, c, |a, b| a * b)
    }
}

impl Neg for CompatSeq {
    type Output = CompatSeq;
    fn neg(self) -> CompatSeq {
        let c = if self.p() == 2 { self.c.clone().min(self.additive_cap()) } else { self.c.clone() };
        CompatSeq { xs: self.xs.iter().map(|x| -x).collect(), c, tower: self.tower }
    }
}

impl Ring for CompatSeq {
    fn zero_like(&self) -> Self {
        self.constant(&BigInt::zero())
    }
    fn one_like(&self) -> Self {
        self.constant(&BigInt::one())
    }
    fn int_like(&self, n: &BigInt) -> Self {
        self.constant(n)
    }
    fn is_zero_elem(&self) -> bool {
        self.xs.iter().all(|x| x.is_zero())
    }
}

/// epsilon = (1, zeta_p, zeta_{p^2}, ...): position n holds zeta_{p^n},
/// which lives in level n - 1 (position 0 holds 1 in level 0).
pub fn epsilon(t: &Arc<CycTower>) -> Result<CompatSeq> {
    if t.depth() < 2 {
        return invalid("epsilon needs tower depth >= 2");
    }
    let mut xs = vec![EisElem::one(t.ring(0))];
    xs.extend((0..t.depth()).map(|u| t.zeta(u)));
    CompatSeq::new(t, xs, t.exact_threshold())
}

/// The uniformizer sequence pi_u = zeta_{p^{u+1}} - 1 with its measured threshold.
pub fn build_pi_seq(t: &Arc<CycTower>) -> Result<CompatSeq> {
    if t.depth() < 2 {
        return invalid("the pi-sequence needs tower depth >= 2");
    }
    CompatSeq::measured(t, (0..t.depth()).map(|u| t.pi(u)).collect())
}

/// The zero sequence over every level.
pub fn zero_seq(t: &Arc<CycTower>) -> Result<CompatSeq> {
    CompatSeq::new(t, (0..t.depth()).map(|u| EisElem::zero(t.ring(u))).collect(), t.exact_threshold())
}

/// The image of a power series under T -> tau, with a per-position bound
/// for the terms cut off above the series' box.
#[derive(Clone, Debug)]
pub struct EmbeddedSeries {
    pub seq: CompatSeq,
    /// v_T of the unknown tail at each position.
    pub tail: Vec<ExtRat>,
}

impl EmbeddedSeries {
    /// Positionwise v_T at which this image is known to agree with the
    /// image of the untruncated series.
    pub fn guarantee(&self, n: usize) -> ExtRat {
        self.tail[n].clone().min(ExtRat::Finite(self.seq.c.clone()))
    }
}

/// Sum over the support of [alpha]^{p^{-u}} tau_u^a at each position u.
pub fn embed_series(params: &[CompatSeq], f: &MLaurent<Fq>) -> Result<EmbeddedSeries> {
    if params.len() != f.n() {
        return Err(Error::DimMismatch(format!("{} parameters for a series in {} variables", params.len(), f.n())));
    }
    if params.len() != 1 {
        return Err(Error::DimMismatch("the cyclotomic tower carries a single parameter".into()));
    }
    let tau = &params[0];
    let bx = f.bx();
    if bx.denom != 1 {
        return invalid("embedded series must have integral exponents");
    }
    if bx.lo[0] < 0 {
        return Err(Error::BoxExhausted("negative exponents leave the integral tower rings".into()));
    }
    if f.p() != tau.p() {
        return invalid("series and tower have different residue characteristic");
    }
    let t = tau.tower();
    let m = t.m;
    let lifts: Vec<(u64, u64)> = f
        .terms()
        .map(|(e, a)| Ok((e[0] as u64, teichmueller(a, m)?.value())))
        .collect::<Result<_>>()?;
    let mut xs = Vec::with_capacity(tau.len());
    let mut tail = Vec::with_capacity(tau.len());
    for x in tau.values() {
        let mut acc = EisElem::zero(&x.ring);
        for (e, a) in &lifts {
            // the residue field is F_p, so [a]^{p^{-u}} = [a]
            acc = &acc + &x.pow(*e).scale(*a);
        }
        xs.push(acc);
        tail.push(t.v_t(x).scale(&ri(bx.hi[0] + 1)));
    }
    let c = tau.c.clone().min(ri(t.p as i64 - 1));
    Ok(EmbeddedSeries { seq: CompatSeq::new(t, xs, c)?, tail })
}

/// Positionwise check that `lhs` and `rhs` agree to the given v_T bounds.
pub fn agree_within(lhs: &CompatSeq, rhs: &CompatSeq, bounds: &[ExtRat]) -> Result<bool> {
    let t = lhs.tower();
    for (n, b) in bounds.iter().enumerate().take(lhs.len().min(rhs.len())) {
        let (a, c) = t.common(lhs.value(n), rhs.value(n))?;
        if t.v_t(&(&a - &c)) < *b {
            return Ok(false);
        }
    }
    Ok(true)
}

/// A random element of the maximal ideal of R: a top-level element y with
/// positive valuation and positions y^{p^{top-n}}, exactly compatible.
pub fn random_maximal(t: &Arc<CycTower>, rng: &mut impl rand::Rng) -> Result<CompatSeq> {
    let top = t.depth() - 1;
    let ring = t.ring(top);
    let q = ring.modulus();
    let mut coords: Vec<u64> = (0..ring.d).map(|_| rng.gen_range(0..q)).collect();
    coords[0] = (coords[0] / t.p) * t.p;
    let y = EisElem::from_u64_coords(ring, &coords)?;
    let mut xs = vec![y];
    for _ in 0..top {
        let next = xs.last().unwrap().pow(t.p);
        xs.push(next);
    }
    xs.reverse();
    CompatSeq::new(t, xs, t.exact_threshold())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::fq::FqField;
    use crate::arith::rat::rat;
    use crate::laurent::TruncBox;

    fn tower() -> Arc<CycTower> {
        CycTower::new(3, 4, 8).unwrap()
    }

    #[test]
    fn epsilon_is_exact() {
        let t = tower();
        let e = epsilon(&t).unwrap();
        assert!(e.measure().unwrap().iter().all(|m| m.is_infinite()));
        assert_eq!(*e.value(0), EisElem::one(t.ring(0)));
        let z = e.value(1) - &EisElem::one(t.ring(0));
        assert_eq!(z.valuation(), ExtRat::Finite(rat(1, 2)));
    }

    #[test]
    fn pi_sequence_threshold() {
        let t = tower();
        let s = build_pi_seq(&t).unwrap();
        // v_T(pi_{u+1}^3 - pi_u) = 2 + 1/3^{u+1}
        let m = s.measure().unwrap();
        assert_eq!(m[0], ExtRat::Finite(rat(7, 3)));
        assert_eq!(*s.threshold(), rat(55, 27));
        assert!(zero_seq(&t).unwrap().is_zero_elem());
    }

    #[test]
    fn incompatible_sequences_are_rejected() {
        let t = tower();
        let xs = vec![t.pi(0), t.pi(1) + EisElem::one(t.ring(1))];
        assert!(CompatSeq::new(&t, xs, ri(1)).is_err());
    }

    #[test]
    fn ring_operations_keep_compatibility() {
        let t = tower();
        let pi = build_pi_seq(&t).unwrap();
        let e = epsilon(&t).unwrap().sigma_inv().unwrap();
        for s in [pi.clone() + e.clone(), pi.clone() * e.clone(), -pi.clone(), pi.clone() - e] {
            assert!(s.certificates().unwrap().iter().all(|c| c.pass), "{s:?}");
        }
    }

    #[test]
    fn embedding_parameter_and_polynomial() {
        let t = tower();
        let pi = build_pi_seq(&t).unwrap();
        let k = FqField::new(3, 1).unwrap();
        let bx = TruncBox::new(1, vec![0], vec![6]).unwrap();
        let f = MLaurent::monomial(&Fq::zero(&k), bx.clone(), vec![1], Fq::one(&k));
        assert_eq!(embed_series(std::slice::from_ref(&pi), &f).unwrap().seq.values(), pi.values());
        let g = MLaurent::from_terms(&Fq::zero(&k), bx, [(vec![1], Fq::one(&k)), (vec![2], Fq::one(&k))]).unwrap();
        let eg = embed_series(&[pi], &g).unwrap();
        for u in 0..4 {
            assert_eq!(*eg.seq.value(u), &t.pi(u) + &t.pi(u).pow(2));
        }
    }
}
