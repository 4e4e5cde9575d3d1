use num_traits::One;

use super::vector::WittVec;
use crate::arith::eis::EisElem;
use crate::arith::rat::{ri, Rat};
use crate::error::{invalid, Error, Result};
use crate::norms::CompatSeq;

/// A value of gamma, known modulo elements of valuation >= `precision`
/// (v(p) = 1).
#[derive(Clone, Debug)]
pub struct GammaValue {
    pub value: EisElem,
    pub level: usize,
    pub precision: Rat,
}

/// Guaranteed valuation of (a + delta)^{p^m} - a^{p^m} when v(delta) >= g0.
pub fn power_precision(p: u64, g0: &Rat, m: usize) -> Rat {
    let mut g = g0.clone();
    for _ in 0..m {
        g = (&g + Rat::one()).min(&g * ri(p as i64));
    }
    g
}

/// (r_0, r_1, ...) -> sum_n p^n r^{(n)}, with r^{(n)} approximated by
/// r_{top}^{p^{top - n}} from the last available position of r_n. The
/// precision is capped by the Witt length, the ring precision and the
/// compatibility thresholds.
///
/// `target_level` may only raise the level of the result.
pub fn fontaine_gamma(w: &WittVec<CompatSeq>, target_level: Option<usize>) -> Result<GammaValue> {
    let t = w.comps[0].tower().clone();
    let p = t.p;
    let m_ring = ri(t.m as i64);
    let mut parts = Vec::with_capacity(w.len());
    // the dropped components contribute p^M r^{(M)} + ...
    let mut precision = m_ring.clone().min(ri(w.len() as i64));
    for (n, r) in w.comps.iter().enumerate() {
        if !std::sync::Arc::ptr_eq(r.tower(), &t) {
            return invalid("Witt components come from different towers");
        }
        let top = r.len() - 1;
        if top < n {
            return Err(Error::PrecisionExhausted(format!("component {n} has only {} positions", r.len())));
        }
        let approx = r.value(top).pow(p.pow((top - n) as u32));
        let g0 = (r.threshold() / ri(p as i64 - 1)).min(m_ring.clone());
        precision = precision.min(ri(n as i64) + power_precision(p, &g0, top - n));
        parts.push(approx);
    }
    let mut level = parts.iter().map(|x| t.level_of(x)).collect::<Result<Vec<_>>>()?.into_iter().max().unwrap();
    if let Some(u) = target_level {
        if u < level {
            return invalid(format!("gamma lands in level {level}, above the requested level {u}"));
        }
        level = u;
    }
    let mut acc = EisElem::zero(t.ring(level));
    let mut pn = 1u64;
    for x in &parts {
        acc = &acc + &t.embed(x, level)?.scale(pn);
        pn = pn.saturating_mul(p);
    }
    Ok(GammaValue { value: acc, level, precision })
}

/// sigma^{-k} on W(R): componentwise p-th roots.
pub fn sigma_inv_witt(w: &WittVec<CompatSeq>, k: usize) -> Result<WittVec<CompatSeq>> {
    Ok(WittVec { p: w.p, comps: w.comps.iter().map(|r| r.sigma_inv_k(k)).collect::<Result<_>>()? })
}

/// 1 + [ε]^{1/p} + ... + [ε]^{(p-1)/p}, the generator of ker γ.
pub fn kernel_generator(t: &std::sync::Arc<crate::norms::CycTower>, len: usize) -> Result<WittVec<CompatSeq>> {
    let p = t.p;
    let root = crate::norms::epsilon(t)?.sigma_inv()?;
    let w = super::WittArith::new(p, len)?;
    let mut xi = w.from_int(&root, 1)?;
    let mut pw = root.clone();
    for _ in 1..p {
        xi = w.add(&xi, &WittVec::teichmueller(p, &pw, len))?;
        pw = pw * root.clone();
    }
    Ok(xi)
}
