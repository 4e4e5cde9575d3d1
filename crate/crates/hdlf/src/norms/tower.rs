use std::sync::Arc;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::eis::{EisElem, EisRing};
use crate::arith::rat::{rat, rat_pow_p, ri, serde_rat, ExtRat, Rat};
use crate::error::{invalid, Error, Result};
use crate::herbrand::LexIndex;
use crate::krasner::EisPoly;

/// The cyclotomic tower Z_p[zeta_p] ⊂ Z_p[zeta_{p^2}] ⊂ ..., truncated mod p^M.
///
/// Level u is Z_p[zeta_{p^{u+1}}] with uniformizer pi_u = zeta_{p^{u+1}} - 1.
pub struct CycTower {
    pub p: u64,
    pub m: u32,
    levels: Vec<Arc<EisRing>>,
    /// Image of pi_u in level u + 1, namely (1 + pi_{u+1})^p - 1.
    up: Vec<EisElem>,
}

impl std::fmt::Debug for CycTower {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "CycTower(p={}, M={}, depth={})", self.p, self.m, self.levels.len())
    }
}

impl CycTower {
    pub fn new(p: u64, depth: usize, m: u32) -> Result<Arc<CycTower>> {
        if depth == 0 {
            return invalid("tower depth must be >= 1");
        }
        let levels: Vec<Arc<EisRing>> =
            (0..depth).map(|u| EisRing::cyclotomic(p, u as u32 + 1, m)).collect::<Result<_>>()?;
        let up = (0..depth - 1)
            .map(|u| {
                let one = EisElem::one(&levels[u + 1]);
                &(&one + &EisElem::pi(&levels[u + 1])).pow(p) - &one
            })
            .collect();
        Ok(Arc::new(CycTower { p, m, levels, up }))
    }

    /// Reads a precision given as a modulus p^M.
    pub fn precision_exponent(p: u64, modulus: u64) -> Result<u32> {
        let (mut q, mut m) = (modulus, 0u32);
        while q > 1 && q % p == 0 {
            q /= p;
            m += 1;
        }
        if q != 1 || m < 2 {
            return invalid(format!("precision {modulus} is not p^M with M >= 2 for p = {p}"));
        }
        Ok(m)
    }

    pub fn depth(&self) -> usize {
        self.levels.len()
    }

    pub fn ring(&self, u: usize) -> &Arc<EisRing> {
        &self.levels[u]
    }

    pub fn pi(&self, u: usize) -> EisElem {
        EisElem::pi(&self.levels[u])
    }

    /// zeta_{p^{u+1}} in level u.
    pub fn zeta(&self, u: usize) -> EisElem {
        &EisElem::one(&self.levels[u]) + &self.pi(u)
    }

    pub fn level_of(&self, x: &EisElem) -> Result<usize> {
        self.levels
            .iter()
            .position(|r| Arc::ptr_eq(r, &x.ring) || **r == *x.ring)
            .ok_or_else(|| Error::Invalid(format!("{:?} is not a level of {:?}", x.ring, self)))
    }

    /// Maps a level element into a higher level.
    pub fn embed(&self, x: &EisElem, to: usize) -> Result<EisElem> {
        let mut u = self.level_of(x)?;
        if to < u || to >= self.depth() {
            return invalid(format!("cannot embed level {u} into level {to}"));
        }
        let mut y = x.clone();
        while u < to {
            let coeffs: Vec<EisElem> = y
                .coords()
                .iter()
                .map(|&c| EisElem::from_u64_coords(&self.levels[u + 1], &[c]))
                .collect::<Result<_>>()?;
            y = EisElem::eval_poly(&coeffs, &self.up[u]);
            u += 1;
        }
        Ok(y)
    }

    /// Both elements in the higher of their two levels.
    pub fn common(&self, a: &EisElem, b: &EisElem) -> Result<(EisElem, EisElem)> {
        let top = self.level_of(a)?.max(self.level_of(b)?);
        Ok((self.embed(a, top)?, self.embed(b, top)?))
    }

    /// Valuation in tower units, v_T = (p - 1) v with v(p) = 1, so that
    /// v_T(pi_u) = 1/p^u and v_T(p) = p - 1.
    pub fn v_t(&self, x: &EisElem) -> ExtRat {
        x.valuation().scale(&ri(self.p as i64 - 1))
    }

    /// The threshold that stands for exact equality at precision M.
    pub fn exact_threshold(&self) -> Rat {
        ri((self.p as i64 - 1) * self.m as i64)
    }

    /// The automorphism pi_u -> (1 + pi_u)^k - 1 of level u, k prime to p.
    pub fn conjugate(&self, x: &EisElem, k: u64) -> Result<EisElem> {
        let u = self.level_of(x)?;
        if k.is_multiple_of(self.p) {
            return invalid("conjugation exponent must be prime to p");
        }
        let ring = &self.levels[u];
        let one = EisElem::one(ring);
        let image = &(&one + &self.pi(u)).pow(k) - &one;
        let coeffs: Vec<EisElem> =
            x.coords().iter().map(|&c| EisElem::from_u64_coords(ring, &[c])).collect::<Result<_>>()?;
        Ok(EisElem::eval_poly(&coeffs, &image))
    }

    /// Norm from level u to level u - 1, as the product of the p conjugates
    /// fixing level u - 1; the result is left in level u.
    pub fn norm_down(&self, x: &EisElem) -> Result<EisElem> {
        let u = self.level_of(x)?;
        if u == 0 {
            return invalid("level 0 has no lower level in the tower");
        }
        let step = self.p.pow(u as u32);
        let mut acc = EisElem::one(&self.levels[u]);
        for j in 0..self.p {
            acc = &acc * &self.conjugate(x, 1 + j * step)?;
        }
        Ok(acc)
    }

    /// Minimal polynomial of pi_u over level u - 1: (1 + T)^p - 1 - pi_{u-1}.
    pub fn step_poly(&self, u: usize) -> Result<EisPoly> {
        if u == 0 || u >= self.depth() {
            return invalid(format!("step polynomial needs 1 <= u < {}", self.depth()));
        }
        EisPoly::cyclotomic_step(&self.levels[u - 1], self.p)
    }
}

/// One level of a tower datum: degree, ramification vector and the jump of
/// each constant subtower r = 1..N (the last entry is the full step).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LevelSpec {
    pub n: usize,
    pub degree: u64,
    pub ebar: Vec<u64>,
    pub jumps: Vec<LexIndex>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TowerSpec {
    #[serde(rename = "N")]
    pub n: usize,
    pub p: u64,
    pub n_star: usize,
    #[serde(with = "serde_rat")]
    pub c_star: Rat,
    pub levels: Vec<LevelSpec>,
}

/// Checks the degree, ramification and jump-growth conditions at every
/// recorded level n >= n_star.
pub fn verify_tower(spec: &TowerSpec) -> bool {
    if spec.c_star <= Rat::zero() {
        return false;
    }
    let want_degree = spec.p.checked_pow(spec.n as u32);
    spec.levels.iter().filter(|l| l.n >= spec.n_star).all(|l| {
        let bound = &spec.c_star * ri(spec.p.pow(l.n as u32) as i64);
        Some(l.degree) == want_degree
            && l.ebar.len() == spec.n
            && l.ebar.iter().all(|&e| e == spec.p)
            && l.jumps.len() == spec.n
            && l.jumps.iter().all(|j| *j.first() >= bound)
    })
}

/// The basic cyclotomic-Kummer tower spec, N = 2.
///
/// The r = 1 jump comes from the resultant discriminant of the cyclotomic
/// step: a degree-p step with one jump i has disc (p - 1)(i + 1). The
/// Kummer step t -> t^{1/p} has distance v(zeta_p - 1) between conjugate
/// roots, giving the jump (p e / (p - 1), -1) with e the absolute
/// ramification of the base level.
pub fn basic_tower_spec(p: u64, levels: usize, m: u32) -> Result<TowerSpec> {
    let tower = CycTower::new(p, levels + 1, m)?;
    let pm1 = ri(p as i64 - 1);
    let mut out = Vec::new();
    for n in 0..levels {
        let base = tower.ring(n);
        let e_base = ri(base.d as i64);
        let step = tower.step_poly(n + 1)?;
        let disc = step.disc_valuation()? * &e_base;
        let j1 = &disc / &pm1 - ri(1);
        // v(zeta_p - 1) read in the base level, then rescaled to v_{K_n}
        let zp = tower.embed(&tower.zeta(0), n)?;
        let dist = (&zp - &EisElem::one(base)).valuation_nonzero()? * &e_base;
        let j2_first = ri(p as i64) * dist;
        let j1 = LexIndex::new(vec![j1]);
        let j2 = LexIndex::new(vec![j2_first, ri(-1)]);
        out.push(LevelSpec { n, degree: p * p, ebar: vec![p, p], jumps: vec![j1, j2] });
    }
    Ok(TowerSpec { n: 2, p, n_star: 0, c_star: pm1, levels: out })
}

/// alpha_{m+1} = max(p alpha_m - (p - 1) j_m, alpha_m), the worst case of
/// the distance recursion.
pub fn alpha_recursion(alpha0: &LexIndex, jumps: &[LexIndex], p: u64) -> Result<Vec<LexIndex>> {
    let mut out = vec![alpha0.clone()];
    for j in jumps {
        let a = out.last().unwrap();
        if j.r() != a.r() {
            return invalid("alpha_0 and the jumps must live in the same J_r");
        }
        let cand = &a.scale(&ri(p as i64)) - &j.scale(&ri(p as i64 - 1));
        out.push(if cand > *a { cand } else { a.clone() });
    }
    Ok(out)
}

/// pr_1(alpha_m) / p^m along a sequence.
pub fn alpha_ratios(alphas: &[LexIndex], p: u64) -> Vec<Rat> {
    let mut scale = Rat::one();
    alphas
        .iter()
        .map(|a| {
            let r = a.first() / &scale;
            scale *= ri(p as i64);
            r
        })
        .collect()
}

/// The first step m at which pr_1(alpha_m)/p^m drops below `eps`.
pub fn alpha_steps_below(alpha0: &LexIndex, c_star: &Rat, p: u64, eps: &Rat, max_steps: usize) -> Result<Option<usize>> {
    let r = alpha0.r();
    let jumps: Vec<LexIndex> = (0..max_steps)
        .map(|m| {
            let mut v = vec![Rat::zero(); r];
            v[0] = c_star * rat_pow_p(p, m as u32);
            LexIndex::new(v)
        })
        .collect();
    let alphas = alpha_recursion(alpha0, &jumps, p)?;
    Ok(alpha_ratios(&alphas, p).iter().position(|x| x < eps))
}

/// Level n of the 2-dimensional basic tower: Z_p[zeta_{p^{n+1}}]{{t}} with
/// t-exponents in (1/p^n) Z.
pub struct BasicTower2D {
    pub tower: Arc<CycTower>,
}

/// Result of the p-th power projection check at one level.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ProjectionReport {
    pub level: usize,
    #[serde(with = "serde_rat")]
    pub threshold: Rat,
    #[serde(with = "crate::arith::rat::serde_ext")]
    pub measured_v1: ExtRat,
    pub monomials: usize,
    pub pass: bool,
}

impl BasicTower2D {
    pub fn new(p: u64, depth: usize, m: u32) -> Result<BasicTower2D> {
        Ok(BasicTower2D { tower: CycTower::new(p, depth + 1, m)? })
    }

    pub fn depth(&self) -> usize {
        self.tower.depth() - 1
    }

    /// c*_1 = c*/p for the basic tower, c* = p - 1.
    pub fn c1(&self) -> Rat {
        rat(self.tower.p as i64 - 1, self.tower.p as i64)
    }

    /// For each spanning monomial pi_n^i t^{a/p^n} of level n, the element
    /// pi_{n+1}^i t^{a/p^{n+1}} of level n + 1 has p-th power congruent to
    /// it modulo m(c*_1). Also checks zeta_{p^{n+1}} against zeta_{p^{n+2}}.
    pub fn pth_projection_check(&self, n: usize) -> Result<ProjectionReport> {
        use crate::laurent::{MLaurent, TruncBox};
        let t = &self.tower;
        if n + 1 >= t.depth() {
            return Err(Error::PrecisionExhausted(format!("level {} is beyond the tower", n + 1)));
        }
        let p = t.p as i64;
        let dn = p.pow(n as u32);
        let up = t.ring(n + 1);
        let threshold = self.c1();
        let mut measured = ExtRat::Infinity;
        let mut count = 0;
        let mut record = |x: ExtRat| measured = measured.clone().min(x);
        // zeta component
        let z = t.embed(&t.zeta(n), n + 1)?;
        record(t.v_t(&(&t.zeta(n + 1).pow(t.p) - &z)));
        count += 1;
        for i in 0..t.ring(n).d {
            for a in -2 * p..=2 * p {
                let coef_hi = t.pi(n + 1).pow(i as u64);
                let bx_hi = TruncBox::new(dn * p, vec![a], vec![a + 4 * p])?;
                let pre = MLaurent::monomial(&coef_hi, bx_hi, vec![a], coef_hi.clone());
                let img = pre.pow(t.p)?;
                let coef_lo = t.embed(&t.pi(n).pow(i as u64), n + 1)?;
                let bx_lo = TruncBox::new(dn, vec![a], vec![a + 4])?;
                let target = MLaurent::monomial(&EisElem::one(up), bx_lo, vec![a], coef_lo).refine(p);
                let diff = img.try_sub(&target.restrict(img.bx().clone())?)?;
                let mut v = ExtRat::Infinity;
                for (_, c) in diff.terms() {
                    v = v.min(t.v_t(c));
                }
                record(v);
                count += 1;
            }
        }
        let pass = measured >= ExtRat::Finite(threshold.clone());
        Ok(ProjectionReport { level: n, threshold, measured_v1: measured, monomials: count, pass })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn embedding_is_a_ring_map() {
        let t = CycTower::new(3, 3, 6).unwrap();
        let a = &t.pi(0) + &EisElem::from_i64(t.ring(0), 4);
        let b = t.pi(0).pow(3);
        let lhs = t.embed(&(&a * &b), 2).unwrap();
        let rhs = &t.embed(&a, 2).unwrap() * &t.embed(&b, 2).unwrap();
        assert_eq!(lhs, rhs);
        // zeta_{p^2}^p = zeta_p
        assert_eq!(t.zeta(1).pow(3), t.embed(&t.zeta(0), 1).unwrap());
    }

    #[test]
    fn norms_chain() {
        let t = CycTower::new(3, 3, 6).unwrap();
        for u in 1..3 {
            let n = t.norm_down(&t.pi(u)).unwrap();
            assert_eq!(n, t.embed(&t.pi(u - 1), u).unwrap());
        }
        // for p = 2 the norm of zeta_4 - 1 is 2 = -pi_0
        let t2 = CycTower::new(2, 2, 8).unwrap();
        assert_eq!(t2.norm_down(&t2.pi(1)).unwrap(), -&t2.embed(&t2.pi(0), 1).unwrap());
    }

    #[test]
    fn precision_parsing() {
        assert_eq!(CycTower::precision_exponent(3, 81).unwrap(), 4);
        assert!(CycTower::precision_exponent(3, 80).is_err());
    }

    #[test]
    fn alpha_example() {
        let a0 = LexIndex::from_ints(&[5]);
        let js: Vec<LexIndex> = (0..3).map(|m| LexIndex::from_ints(&[3i64.pow(m)])).collect();
        let al = alpha_recursion(&a0, &js, 3).unwrap();
        assert_eq!(al[1], LexIndex::from_ints(&[13]));
        let r = alpha_ratios(&al, 3);
        assert_eq!(r[1], rat(13, 3));
        let zero = alpha_recursion(&LexIndex::from_ints(&[0]), &js, 3).unwrap();
        assert!(zero.iter().all(|a| *a.first() == ri(0)));
    }

    #[test]
    fn alpha_steps_with_long_budgets() {
        // 3^60 is beyond u64; the jumps stay exact
        let a0 = LexIndex::from_ints(&[10]);
        assert_eq!(alpha_steps_below(&a0, &ri(1), 2, &rat(1, 1000), 60).unwrap(), Some(28));
        assert_eq!(alpha_steps_below(&a0, &ri(1), 2, &rat(1, 1000), 25).unwrap(), None);
        assert!(alpha_steps_below(&a0, &ri(1), 3, &rat(1, 1000), 60).unwrap().is_some());
    }

    #[test]
    fn basic_tower_verifies() {
        let spec = basic_tower_spec(3, 3, 6).unwrap();
        assert_eq!(spec.levels[1].jumps[0], LexIndex::from_ints(&[8]));
        assert_eq!(spec.levels[1].jumps[1], LexIndex::from_ints(&[9, -1]));
        assert!(verify_tower(&spec));
        let mut bad = spec.clone();
        bad.levels[2].degree = 3;
        assert!(!verify_tower(&bad));
        let mut greedy = spec.clone();
        greedy.c_star = ri(3);
        assert!(!verify_tower(&greedy));
    }

    #[test]
    fn projection_check_small() {
        let b = BasicTower2D::new(3, 2, 6).unwrap();
        let r = b.pth_projection_check(0).unwrap();
        assert!(r.pass, "{r:?}");
    }
}
