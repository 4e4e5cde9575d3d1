use rand::Rng;

use super::{LexIndex, RamJumps};
use crate::arith::rat::{rat, Rat};

/// Bounds for [`random_jumps`].
#[derive(Clone, Copy, Debug)]
pub struct JumpParams {
    pub max_r: usize,
    pub max_s: usize,
    pub max_d: u64,
    /// Force ebar = (1, ..., 1, d), the shape the discriminant formulas need.
    pub unit_prefix: bool,
}

impl Default for JumpParams {
    fn default() -> Self {
        JumpParams { max_r: 2, max_s: 3, max_d: 27, unit_prefix: true }
    }
}

fn small_rat(rng: &mut impl Rng, lo: i64, hi: i64) -> Rat {
    let den = rng.gen_range(1..=3);
    rat(rng.gen_range(lo * den..=hi * den), den)
}

/// A random point of J_r with coordinates of denominator at most 3.
pub fn random_index(rng: &mut impl Rng, r: usize, lo: i64, hi: i64) -> LexIndex {
    LexIndex::new((0..r).map(|_| small_rat(rng, lo, hi)).collect())
}

/// A random nonnegative point of J_r.
pub fn random_nonneg(rng: &mut impl Rng, r: usize, hi: i64) -> LexIndex {
    loop {
        let mut a = random_index(rng, r, -hi, hi);
        a.0[0] = small_rat(rng, 0, hi);
        if a.in_j() {
            return a;
        }
    }
}

/// Random jump data of p-power degree: d = p^k <= max_d for p in {2, 3},
/// orders a strictly decreasing chain of powers of p, jumps strictly
/// increasing and positive.
pub fn random_jumps(rng: &mut impl Rng, params: &JumpParams) -> RamJumps {
    let r = rng.gen_range(1..=params.max_r.max(1));
    let p: u64 = if rng.gen_bool(0.5) { 2 } else { 3 };
    let mut k_max = 0;
    while p.pow(k_max + 1) <= params.max_d {
        k_max += 1;
    }
    let s = rng.gen_range(0..=params.max_s.min(k_max as usize));
    // without jumps the extension is trivial
    let k = if s == 0 { 0 } else { rng.gen_range(s as u32..=k_max) };
    let d = p.pow(k);
    // exponents k = e_0 > e_1 > ... > e_s = 0
    let mut exps: Vec<u32> = (1..k).collect();
    while exps.len() + 1 > s.max(1) {
        let i = rng.gen_range(0..exps.len());
        exps.remove(i);
    }
    let mut orders: Vec<u64> = vec![d];
    orders.extend(exps.iter().rev().map(|&e| p.pow(e)));
    if s > 0 {
        orders.push(1);
    }
    let mut jumps: Vec<LexIndex> = Vec::new();
    while jumps.len() < s {
        let mut j = random_index(rng, r, -4, 4);
        j.0[0] = small_rat(rng, 0, 8);
        if j > LexIndex::zero(r) && !jumps.contains(&j) {
            jumps.push(j);
        }
    }
    jumps.sort();
    let mut ebar: Vec<u64> =
        (0..r).map(|_| if params.unit_prefix { 1 } else { rng.gen_range(1..=3) }).collect();
    ebar[r - 1] = d;
    RamJumps::new(ebar, jumps, orders).expect("generated jump data is valid")
}
