//! Runs the elimination recursion on random Artin-Schreier data and checks
//! every step inequality.

use hdlf::arith::rat::ri;
use hdlf::epp::{case_c_bound, check_lemmas, invariants, random_datum, run, AsCase, Schedule};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> hdlf::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut flagged = 0;
    for k in 0..100 {
        let p = if k % 2 == 0 { 2 } else { 3 };
        let case = if k % 4 < 2 { AsCase::B2 } else { AsCase::C };
        let d = random_datum(&mut rng, p, case, 20, ri(1))?;
        let inv0 = invariants(&d)?;
        let t = run(&d, 50, &Schedule::default())?;
        let report = check_lemmas(&t);
        let max_terms = t.entries.iter().map(|e| e.terms).max().unwrap_or(0);
        let bound = (case == AsCase::C).then(|| case_c_bound(&inv0, d.c()));
        if t.n_star().is_none() {
            flagged += 1;
        }
        println!(
            "#{k:3} p={p} case={case:2} terms={:2} A0={} B={} n*={:?} bound={bound:?} peak_terms={max_terms} lemmas={}",
            d.xi().len(),
            inv0.a,
            inv0.b,
            t.n_star(),
            if report.pass { "ok" } else { "FAIL" }
        );
    }
    println!("flagged {flagged}/100");
    Ok(())
}
