//! Krasner-type root localization and discriminant formulas, driven by
//! ramification jump data, plus resultant-based discriminants of concrete
//! Eisenstein polynomials.

use std::sync::Arc;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::eis::{EisElem, EisRing};
use crate::arith::rat::{ri, Rat};
use crate::error::{invalid, Error, Result};
use crate::herbrand::{HerbrandMap, LexIndex, RamJumps};

/// Both sides of the value identity, computed independently.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ValueCheck {
    /// e^{-1} * sum over all roots of min(v(alpha - theta_l)).
    pub distance_sum: LexIndex,
    /// phi(a) + (0, ..., 0, 1).
    pub herbrand_side: LexIndex,
}

fn require_last_ebar(d: &RamJumps) -> Result<()> {
    if *d.ebar.last().unwrap() != d.degree() {
        return Err(Error::ShapeMismatch(format!(
            "the last entry of ebar {:?} must equal the degree {}",
            d.ebar,
            d.degree()
        )));
    }
    Ok(())
}

/// Valuation of F(alpha) for alpha with v_L(alpha - theta) = a + (0, ..., 0, 1),
/// computed from the root distances and from the Herbrand function.
pub fn value_check(d: &RamJumps, a: &LexIndex) -> Result<ValueCheck> {
    d.validate()?;
    require_last_ebar(d)?;
    if a.r() != d.r {
        return Err(Error::DimMismatch(format!("a = {a} for r = {}", d.r)));
    }
    if !a.in_j() {
        return invalid(format!("a = {a} is negative"));
    }
    let u = LexIndex::last_unit(d.r);
    let v_theta = u.clone();
    // alpha - theta itself, then every other conjugate
    let mut sum = a + &u;
    let mut others = 0;
    for (dist, mult) in d.root_distances(&v_theta) {
        let near = (a + &u).min(dist);
        for _ in 0..mult {
            sum = &sum + &near;
        }
        others += mult;
    }
    debug_assert_eq!(others + 1, d.degree());
    let distance_sum = sum.diag_mul(&d.ebar_inv());
    let phi = HerbrandMap::from_jumps(d)?;
    let herbrand_side = &phi.evaluate(a)? + &u;
    Ok(ValueCheck { distance_sum, herbrand_side })
}

/// v_K(F(alpha)); fails if the two computations disagree.
pub fn value_valuation_synthetic(d: &RamJumps, a: &LexIndex) -> Result<LexIndex> {
    let c = value_check(d, a)?;
    if c.distance_sum != c.herbrand_side {
        return invalid(format!("distance sum {} differs from phi(a) + 1 = {}", c.distance_sum, c.herbrand_side));
    }
    Ok(c.herbrand_side)
}

/// Given v_K(F(alpha)) = A + (0, ..., 0, 1), returns a = phi^{-1}(A) with
/// v_L(alpha - theta) = a + (0, ..., 0, 1) for some root theta, and whether
/// that root is unique (A > j(L/K)).
pub fn locate_root(d: &RamJumps, big_a: &LexIndex) -> Result<(LexIndex, bool)> {
    d.validate()?;
    if big_a.r() != d.r {
        return Err(Error::DimMismatch(format!("A = {big_a} for r = {}", d.r)));
    }
    if *big_a <= LexIndex::zero(d.r) {
        return invalid(format!("A = {big_a} must be positive"));
    }
    let phi = HerbrandMap::from_jumps(d)?;
    let a = phi.preimage(big_a)?;
    let (_, j) = phi.last_edge();
    Ok((a, *big_a > j))
}

fn require_disc_shape(d: &RamJumps) -> Result<()> {
    let n = d.degree();
    let ok = d.ebar[..d.r - 1].iter().all(|&e| e == 1) && d.ebar[d.r - 1] == n;
    if !ok {
        return Err(Error::ShapeMismatch(format!("ebar {:?} is not (1, ..., 1, {n})", d.ebar)));
    }
    Ok(())
}

/// v_K of the discriminant from the last edge point:
/// (1, ..., 1, d) j - i + (0, ..., 0, d - 1).
pub fn disc_closed_form(d: &RamJumps) -> Result<LexIndex> {
    d.validate()?;
    require_disc_shape(d)?;
    let deg = d.degree() as i64;
    let (i, j) = HerbrandMap::from_jumps(d)?.last_edge();
    let mut w = vec![Rat::one(); d.r];
    w[d.r - 1] = ri(deg);
    let mut shift = LexIndex::zero(d.r);
    shift.0[d.r - 1] = ri(deg - 1);
    Ok(&(&j.diag_mul(&w) - &i) + &shift)
}

/// The same value from the different: sum of v_L(theta - theta_l) over the
/// other roots. With ebar = (1, ..., 1, d) the norm carries v_L to v_K
/// through (1, ..., 1, d) e^{-1}, the identity, so no rescaling remains.
pub fn disc_from_distances(d: &RamJumps, v_theta: &LexIndex) -> Result<LexIndex> {
    d.validate()?;
    require_disc_shape(d)?;
    let mut s = LexIndex::zero(d.r);
    for (dist, mult) in d.root_distances(v_theta) {
        s = &s + &dist.scale(&ri(mult as i64));
    }
    Ok(s)
}

/// The closed form, cross-checked against the different sum.
pub fn disc_valuation(d: &RamJumps, v_theta: &LexIndex) -> Result<LexIndex> {
    let closed = disc_closed_form(d)?;
    let oracle = disc_from_distances(d, v_theta)?;
    if closed != oracle {
        return invalid(format!("closed form {closed} differs from the different sum {oracle}"));
    }
    Ok(closed)
}

/// (1, ..., 1, d) j(L/K) <= 2 v_K(D(F)), which follows from the closed form
/// and i(L/K) <= v_K(D(F)). The unweighted j <= 2 v_K(D(F)) can fail when
/// the last coordinate of j is negative; see [`disc_bound_unweighted`].
pub fn disc_bound_check(d: &RamJumps) -> Result<bool> {
    let disc = disc_closed_form(d)?;
    let (_, j) = HerbrandMap::from_jumps(d)?.last_edge();
    let mut w = vec![Rat::one(); d.r];
    w[d.r - 1] = ri(d.degree() as i64);
    Ok(j.diag_mul(&w) <= disc.scale(&ri(2)))
}

/// The plain lex comparison j(L/K) <= 2 v_K(D(F)).
pub fn disc_bound_unweighted(d: &RamJumps) -> Result<bool> {
    let disc = disc_closed_form(d)?;
    let (_, j) = HerbrandMap::from_jumps(d)?.last_edge();
    Ok(j <= disc.scale(&ri(2)))
}

/// A monic polynomial T^d + a_1 T^{d-1} + ... + a_d over an Eisenstein ring.
#[derive(Clone, Debug, PartialEq)]
pub struct EisPoly {
    pub ring: Arc<EisRing>,
    /// a_1, ..., a_d.
    pub coeffs: Vec<EisElem>,
}

impl EisPoly {
    /// Any monic polynomial; see [`is_eisenstein`](Self::is_eisenstein).
    pub fn new(ring: &Arc<EisRing>, coeffs: Vec<EisElem>) -> Result<EisPoly> {
        if coeffs.is_empty() {
            return invalid("polynomial must have degree >= 1");
        }
        if coeffs.iter().any(|c| *c.ring != **ring) {
            return invalid("coefficients live in another ring");
        }
        Ok(EisPoly { ring: ring.clone(), coeffs })
    }

    /// Checks the Eisenstein condition on construction.
    pub fn eisenstein(ring: &Arc<EisRing>, coeffs: Vec<EisElem>) -> Result<EisPoly> {
        let f = Self::new(ring, coeffs)?;
        if !f.is_eisenstein() {
            return invalid("polynomial is not Eisenstein over its coefficient ring");
        }
        Ok(f)
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len()
    }

    /// Lower coefficients in the maximal ideal, constant term a uniformizer.
    pub fn is_eisenstein(&self) -> bool {
        let pi_v = self.ring.pi_valuation();
        self.coeffs.iter().all(|c| c.valuation_at_least(&pi_v))
            && self.coeffs.last().unwrap().valuation().finite() == Some(&pi_v)
    }

    /// Coefficients lowest first, including the leading 1.
    pub fn ascending(&self) -> Vec<EisElem> {
        let mut v: Vec<EisElem> = self.coeffs.iter().rev().cloned().collect();
        v.push(EisElem::one(&self.ring));
        v
    }

    pub fn eval(&self, x: &EisElem) -> EisElem {
        EisElem::eval_poly(&self.ascending(), x)
    }

    /// Derivative coefficients, lowest first.
    pub fn derivative(&self) -> Vec<EisElem> {
        self.ascending().iter().enumerate().skip(1).map(|(i, c)| c.scale(i as u64)).collect()
    }

    /// The minimal polynomial of
    /// zeta_{p^{k+1}} - 1 over Z_p[zeta_{p^k}]: (1 + T)^p - 1 - pi_{k-1}.
    pub fn cyclotomic_step(base: &Arc<EisRing>, p: u64) -> Result<EisPoly> {
        let pi = EisElem::pi(base);
        let mut coeffs = Vec::new();
        // (1+T)^p - (1 + pi): coefficient of T^{p-i} is binom(p, i)
        for i in 1..p {
            coeffs.push(EisElem::from_int(base, &num_integer::binomial(num_bigint::BigInt::from(p), i.into())));
        }
        coeffs.push(-pi);
        Self::new(base, coeffs)
    }

    /// Valuation of the discriminant (-1)^{d(d-1)/2} Res(F, F'), v(p) = 1.
    pub fn disc_valuation(&self) -> Result<Rat> {
        if self.degree() == 1 {
            return Ok(Rat::zero());
        }
        let res = resultant(&self.ascending(), &self.derivative())?;
        res.valuation_nonzero()
    }
}

/// Res(f, g) as the Sylvester determinant; coefficients lowest first.
pub fn resultant(f: &[EisElem], g: &[EisElem]) -> Result<EisElem> {
    let m = f.len() - 1;
    let n = g.len() - 1;
    let size = m + n;
    if size == 0 {
        return Ok(EisElem::one(&f[0].ring));
    }
    if size > 20 {
        return invalid("Sylvester matrix too large for the exact determinant");
    }
    let ring = f[0].ring.clone();
    let zero = EisElem::zero(&ring);
    let mut rows = vec![vec![zero.clone(); size]; size];
    for (i, row) in rows.iter_mut().take(n).enumerate() {
        for (k, c) in f.iter().rev().enumerate() {
            row[i + k] = c.clone();
        }
    }
    for (i, row) in rows.iter_mut().skip(n).take(m).enumerate() {
        for (k, c) in g.iter().rev().enumerate() {
            row[i + k] = c.clone();
        }
    }
    Ok(determinant(&rows))
}

/// Division-free determinant by Laplace expansion over column subsets.
fn determinant(rows: &[Vec<EisElem>]) -> EisElem {
    let n = rows.len();
    let ring = rows[0][0].ring.clone();
    // minors[mask] = determinant of the top |mask| rows restricted to columns in mask
    let mut minors = vec![EisElem::zero(&ring); 1 << n];
    minors[0] = EisElem::one(&ring);
    for mask in 1usize..(1 << n) {
        let row = mask.count_ones() as usize - 1;
        let mut acc = EisElem::zero(&ring);
        let mut sign_pos = true;
        for col in (0..n).rev() {
            if mask & (1 << col) == 0 {
                continue;
            }
            let term = &rows[row][col] * &minors[mask & !(1 << col)];
            acc = if sign_pos { &acc + &term } else { &acc - &term };
            sign_pos = !sign_pos;
        }
        minors[mask] = acc;
    }
    minors[(1 << n) - 1].clone()
}

/// JSON form of an Eisenstein polynomial over a ring given by its modulus.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EisPolyJson {
    pub p: u64,
    #[serde(rename = "M")]
    pub m: u32,
    /// Minimal polynomial of the base ring, lowest first, as decimal strings.
    pub minpoly: Vec<String>,
    /// a_1, ..., a_d as coordinate arrays.
    pub coeffs: Vec<Vec<u64>>,
}

impl EisPolyJson {
    pub fn to_poly(&self) -> Result<EisPoly> {
        let minpoly = self
            .minpoly
            .iter()
            .map(|s| s.parse::<num_bigint::BigInt>().map_err(|e| Error::Invalid(format!("minpoly entry {s:?}: {e}"))))
            .collect::<Result<Vec<_>>>()?;
        let ring = EisRing::new(self.p, self.m, minpoly)?;
        let coeffs = self.coeffs.iter().map(|c| EisElem::from_u64_coords(&ring, c)).collect::<Result<Vec<_>>>()?;
        EisPoly::new(&ring, coeffs)
    }

    pub fn from_poly(f: &EisPoly) -> EisPolyJson {
        EisPolyJson {
            p: f.ring.p,
            m: f.ring.m,
            minpoly: f.ring.minpoly().iter().map(|c| c.to_string()).collect(),
            coeffs: f.coeffs.iter().map(|c| c.coords().to_vec()).collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat::rat;

    fn li(v: &[i64]) -> LexIndex {
        LexIndex::from_ints(v)
    }

    fn single() -> RamJumps {
        RamJumps::new(vec![3], vec![li(&[2])], vec![3, 1]).unwrap()
    }

    #[test]
    fn value_identity_examples() {
        let d = single();
        // a = 5: the root itself contributes 6, the two others min(6, 3) = 3 each
        let c = value_check(&d, &li(&[5])).unwrap();
        assert_eq!(c.distance_sum, li(&[4]));
        assert_eq!(c.herbrand_side, li(&[4]));
        assert_eq!(value_valuation_synthetic(&d, &li(&[0])).unwrap(), li(&[1]));
        let bad = RamJumps::new(vec![2], vec![li(&[2])], vec![3, 1]).unwrap();
        assert!(matches!(value_check(&bad, &li(&[1])), Err(Error::ShapeMismatch(_))));
    }

    #[test]
    fn locate_examples() {
        let d = single();
        let (a, unique) = locate_root(&d, &LexIndex::new(vec![rat(5, 2)])).unwrap();
        assert_eq!(a, LexIndex::new(vec![rat(7, 2)]));
        assert!(unique);
        let (a, unique) = locate_root(&d, &LexIndex::new(vec![rat(3, 2)])).unwrap();
        assert_eq!(a, LexIndex::new(vec![rat(3, 2)]));
        assert!(!unique);
        assert!(!locate_root(&d, &li(&[2])).unwrap().1);
        assert!(locate_root(&d, &li(&[0])).is_err());
    }

    #[test]
    fn discriminant_examples() {
        let d = single();
        assert_eq!(disc_closed_form(&d).unwrap(), li(&[6]));
        assert_eq!(disc_from_distances(&d, &li(&[1])).unwrap(), li(&[6]));
        assert!(disc_bound_check(&d).unwrap());
        let t = RamJumps::trivial(1);
        assert_eq!(disc_valuation(&t, &li(&[1])).unwrap(), li(&[0]));
        assert!(disc_bound_check(&t).unwrap());
        let bad = RamJumps::new(vec![3, 3], vec![li(&[1, 0])], vec![3, 1]).unwrap();
        assert!(matches!(disc_closed_form(&bad), Err(Error::ShapeMismatch(_))));
    }

    #[test]
    fn unweighted_bound_fails_for_negative_last_coordinate() {
        let d = RamJumps::new(vec![1, 2], vec![LexIndex::new(vec![rat(7, 2), rat(-5, 2)])], vec![2, 1]).unwrap();
        assert_eq!(disc_closed_form(&d).unwrap(), LexIndex::new(vec![rat(7, 2), rat(-3, 2)]));
        // j = (7, -5/2) > (7, -3) = 2 v(D), while (1, 2) j = (7, -5) is below it
        assert!(!disc_bound_unweighted(&d).unwrap());
        assert!(disc_bound_check(&d).unwrap());
    }

    #[test]
    fn two_dimensional_discriminant() {
        let d = RamJumps::new(vec![1, 9], vec![li(&[1, -2]), li(&[2, 1])], vec![9, 3, 1]).unwrap();
        assert_eq!(disc_valuation(&d, &li(&[0, 1])).unwrap(), disc_from_distances(&d, &li(&[0, 1])).unwrap());
    }

    #[test]
    fn resultant_disc_examples() {
        for p in [2u64, 3, 5] {
            let zp = EisRing::zp(p, 8).unwrap();
            let f = EisPoly::eisenstein(&zp, vec![EisElem::zero(&zp), EisElem::from_i64(&zp, -(p as i64))]).unwrap();
            // disc(T^2 - p) = 4p
            let expect = 1 + if p == 2 { 2 } else { 0 };
            assert_eq!(f.disc_valuation().unwrap(), ri(expect));
        }
        let zp = EisRing::zp(3, 4).unwrap();
        let lin = EisPoly::new(&zp, vec![EisElem::from_i64(&zp, 5)]).unwrap();
        assert_eq!(lin.disc_valuation().unwrap(), ri(0));
    }

    #[test]
    fn cyclotomic_step_discriminant() {
        let base = EisRing::cyclotomic(3, 1, 8).unwrap();
        let f = EisPoly::cyclotomic_step(&base, 3).unwrap();
        assert!(f.is_eisenstein());
        // v(p) = 1 normalization; in v_K units (e = 2) this is 6
        assert_eq!(f.disc_valuation().unwrap(), ri(3));
    }

    #[test]
    fn determinant_small() {
        let r = EisRing::zp(5, 6).unwrap();
        let e = |x: i64| EisElem::from_i64(&r, x);
        let m = vec![vec![e(2), e(1), e(0)], vec![e(1), e(3), e(1)], vec![e(0), e(1), e(4)]];
        // 2(12 - 1) - 1(4 - 0) = 18
        assert_eq!(determinant(&m), e(18));
    }
}
