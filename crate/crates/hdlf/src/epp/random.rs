use std::collections::BTreeMap;

use rand::Rng;

use super::{datum_from_terms, ASDatum, AsCase};
use crate::arith::fq::{Fq, FqField};
use crate::arith::rat::Rat;
use crate::error::Result;

/// A random normal-form datum over F_p. Terms of the second set (the ones
/// B reads) have a_1 in [-6, 0]; terms of the first set have a_1 in [-8, 0],
/// so A < B is common and runs take several steps. Last exponents lie in
/// [-6, 6]. One second-set term has a_1 < 0, which keeps B < 0.
pub fn random_datum(rng: &mut impl Rng, p: u64, case: AsCase, max_terms: usize, c: Rat) -> Result<ASDatum> {
    let pi = p as i64;
    let field = FqField::new(p, 1)?;
    let n_terms = rng.gen_range(1..=max_terms.max(1));
    let second = |a2: i64| match case {
        AsCase::B2 => a2 != 0,
        AsCase::C => a2 % pi != 0,
    };
    let mut terms: BTreeMap<(i64, i64), i64> = BTreeMap::new();
    let a2 = loop {
        let x = rng.gen_range(-6..=6);
        if x % pi != 0 {
            break x;
        }
    };
    terms.insert((rng.gen_range(-6..=-1), a2), rng.gen_range(1..pi));
    let mut tries = 0;
    while terms.len() < n_terms && tries < 1000 {
        tries += 1;
        let a2 = if rng.gen_bool(0.5) {
            match case {
                AsCase::B2 => 0,
                AsCase::C => pi * rng.gen_range(-6 / pi..=6 / pi),
            }
        } else {
            rng.gen_range(-6..=6)
        };
        let a1 = if second(a2) { rng.gen_range(-6..=0) } else { rng.gen_range(-8..=0) };
        let normal = (a1 % pi != 0 || a2 % pi != 0) && (a1 < 0 || a2 < 0);
        if normal {
            terms.insert((a1, a2), rng.gen_range(1..pi));
        }
    }
    if case == AsCase::B2 && terms.len() < max_terms && rng.gen_bool(0.3) {
        let k = Fq::from_int(&field, rng.gen_range(0..pi)).wp_coset_rep();
        if let Some(v) = k.prime_value().filter(|v| *v != 0) {
            terms.insert((0, 0), v as i64);
        }
    }
    let list: Vec<(i64, i64, i64)> = terms.into_iter().map(|((a, b), k)| (a, b, k)).collect();
    datum_from_terms(p, case, c, &list)
}
