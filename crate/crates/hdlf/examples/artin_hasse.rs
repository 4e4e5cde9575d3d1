//! Coefficients of the Artin-Hasse exponential and its integrality.

use hdlf::arith::rat::rat_to_string;
use hdlf::witt::{artin_hasse, artin_hasse_congruence_check};

fn main() -> hdlf::Result<()> {
    for p in [2, 3, 5] {
        let e = artin_hasse(p, 12)?;
        let cs: Vec<String> = e.coeffs.iter().map(rat_to_string).collect();
        let rep = artin_hasse_congruence_check(p, 3 * p as usize)?;
        println!("p={p}: {}", cs.join(" "));
        println!("  integral {} congruence {} identity {}", rep.integral, rep.congruence, rep.exact_identity);
    }
    Ok(())
}
