use num_traits::{One, Zero};
use serde::Serialize;

use super::tower::CycTower;
use crate::arith::eis::EisElem;
use crate::arith::rat::{ri, serde_ext, serde_rat, ExtRat, Rat};
use crate::error::{invalid, Error, Result};
use crate::herbrand::{HerbrandMap, LexIndex, RamJumps};
use crate::krasner::{locate_root, EisPoly};

/// Everything measured while descending a root from level u + 1 to level u.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DescentCertificate {
    pub level: usize,
    /// v_K(F(theta_{u+1}^p)) - 1, in units of the base level.
    #[serde(with = "serde_rat")]
    pub big_a: Rat,
    /// Krasner distance a = phi^{-1}(A), in units of level u.
    #[serde(with = "serde_rat")]
    pub a: Rat,
    #[serde(with = "serde_rat")]
    pub jump: Rat,
    pub unique: bool,
    #[serde(with = "serde_rat")]
    pub c1: Rat,
    /// v_T(theta_u - theta_{u+1}^p).
    #[serde(with = "serde_ext")]
    pub measured_v1: ExtRat,
    /// c*_2 = c*_1 / 2.
    #[serde(with = "serde_rat")]
    pub threshold: Rat,
    /// pr_1(j) + 1 < p^u c*_1 / 2.
    pub size_condition: bool,
    pub pass: bool,
}

#[derive(Clone, Debug)]
pub struct Descent {
    pub root: EisElem,
    pub certificate: DescentCertificate,
}

/// Roots of f among the Galois conjugates of pi_u, in level u.
fn conjugate_roots(t: &CycTower, u: usize, f: &EisPoly) -> Result<Vec<EisElem>> {
    let coeffs: Vec<EisElem> = f.ascending().iter().map(|c| t.embed(c, u)).collect::<Result<_>>()?;
    let modulus = t.p.pow(u as u32 + 1);
    let mut roots: Vec<EisElem> = Vec::new();
    for k in (1..modulus).filter(|k| k % t.p != 0) {
        let x = t.conjugate(&t.pi(u), k)?;
        if EisElem::eval_poly(&coeffs, &x).is_zero() && !roots.contains(&x) {
            roots.push(x);
        }
    }
    Ok(roots)
}

/// Ramification data of level u over level u - 1 read off the root distances
/// of f, in v_L units.
fn jumps_from_roots(t: &CycTower, u: usize, roots: &[EisElem]) -> Result<RamJumps> {
    let e_l = ri(t.ring(u).d as i64);
    let theta = &roots[0];
    let v_theta = theta.valuation_nonzero()? * &e_l;
    let mut dists: Vec<Rat> =
        roots[1..].iter().map(|r| Ok((r - theta).valuation_nonzero()? * &e_l)).collect::<Result<_>>()?;
    dists.sort();
    let d = roots.len() as u64;
    let mut levels: Vec<Rat> = dists.clone();
    levels.dedup();
    let jumps = levels.iter().map(|x| LexIndex::new(vec![x - &v_theta])).collect();
    let mut orders = vec![d];
    for x in &levels {
        orders.push(1 + dists.iter().filter(|y| *y > x).count() as u64);
    }
    RamJumps::new(vec![d], jumps, orders)
}

/// min over coefficients of v_T(a_{i,u+1}^p - a_{i,u}) for the cyclotomic
/// step polynomials.
pub fn step_coefficient_threshold(t: &CycTower, u: usize) -> Result<Rat> {
    let lo = t.step_poly(u)?;
    let hi = t.step_poly(u + 1)?;
    let mut best = ExtRat::Infinity;
    for (a, b) in lo.coeffs.iter().zip(&hi.coeffs) {
        let (x, y) = t.common(&b.pow(t.p), a)?;
        best = best.min(t.v_t(&(&x - &y)));
    }
    Ok(best.finite().cloned().unwrap_or_else(|| t.exact_threshold()))
}

/// Finds the unique root theta_u of f (over level u - 1) close to
/// seed^p, where the seed lives in level u + 1.
pub fn norm_descend(t: &CycTower, u: usize, f: &EisPoly, seed: &EisElem, c1: &Rat) -> Result<Descent> {
    if u == 0 || u + 1 >= t.depth() {
        return invalid(format!("descent to level {u} needs levels {}..={}", u - u.min(1), u + 1));
    }
    if t.level_of(&f.coeffs[0])? != u - 1 {
        return invalid("polynomial must have coefficients in level u - 1");
    }
    if t.level_of(seed)? != u + 1 {
        return invalid("seed must live in level u + 1");
    }
    let alpha = seed.pow(t.p);
    let threshold = c1 / ri(2);
    if f.degree() == 1 {
        let root = t.embed(&-&f.coeffs[0], u)?;
        let (r, s) = t.common(&root, &alpha)?;
        let measured = t.v_t(&(&r - &s));
        let certificate = DescentCertificate {
            level: u,
            big_a: Rat::one(),
            a: Rat::one(),
            jump: Rat::zero(),
            unique: true,
            c1: c1.clone(),
            pass: measured >= ExtRat::Finite(threshold.clone()),
            measured_v1: measured,
            threshold,
            size_condition: true,
        };
        return Ok(Descent { root, certificate });
    }
    let e_k = ri(t.ring(u - 1).d as i64);
    let e_l = ri(t.ring(u).d as i64);
    let coeffs_hi: Vec<EisElem> = f.ascending().iter().map(|c| t.embed(c, u + 1)).collect::<Result<_>>()?;
    let value = EisElem::eval_poly(&coeffs_hi, &alpha);
    let v_k = value.valuation_nonzero()? * &e_k;
    let big_a = &v_k - Rat::one();
    if big_a <= Rat::zero() {
        return Err(Error::NoCloseRoot(format!("v_K(F(alpha)) = {v_k}, so A = {big_a} is not positive")));
    }
    let roots = conjugate_roots(t, u, f)?;
    if roots.len() != f.degree() {
        return Err(Error::NoCloseRoot(format!("found {} of {} roots among the conjugates", roots.len(), f.degree())));
    }
    let rj = jumps_from_roots(t, u, &roots)?;
    let jump = HerbrandMap::from_jumps(&rj)?.last_edge().1.first().clone();
    let (a, unique) = locate_root(&rj, &LexIndex::new(vec![big_a.clone()]))?;
    if !unique {
        return Err(Error::NoCloseRoot(format!("A = {big_a} does not exceed the jump, the close root is not unique")));
    }
    let need = ExtRat::Finite(a.first() + Rat::one());
    let mut close = Vec::new();
    for r in &roots {
        let hi = t.embed(r, u + 1)?;
        if (&alpha - &hi).valuation().scale(&e_l) >= need {
            close.push(r.clone());
        }
    }
    if close.len() != 1 {
        return Err(Error::NoCloseRoot(format!("{} roots within distance {}", close.len(), a.first())));
    }
    let root = close.pop().unwrap();
    let measured = t.v_t(&(&t.embed(&root, u + 1)? - &alpha));
    // the size condition of the descent lemma, in v_K units
    let size_condition = &jump + Rat::one() < ri(t.p.pow(u as u32) as i64) * c1 / ri(2);
    Ok(Descent {
        root,
        certificate: DescentCertificate {
            level: u,
            big_a,
            a: a.first().clone(),
            jump,
            unique,
            c1: c1.clone(),
            pass: measured >= ExtRat::Finite(threshold.clone()),
            measured_v1: measured,
            threshold,
            size_condition,
        },
    })
}

/// The control polynomial (1 + T)^p - zeta^2 with zeta = 1 + pi_{u-1}:
/// its roots are far from pi_u.
pub fn perturbed_step(t: &CycTower, u: usize) -> Result<EisPoly> {
    let f = t.step_poly(u)?;
    let base = t.ring(u - 1);
    let mut coeffs = f.coeffs.clone();
    let z = t.zeta(u - 1);
    *coeffs.last_mut().unwrap() = &EisElem::one(base) - &(&z * &z);
    EisPoly::new(base, coeffs)
}
