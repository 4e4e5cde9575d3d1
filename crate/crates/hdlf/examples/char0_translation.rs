//! Moves a Kummer-type equation over Z_3[zeta_9] to Artin-Schreier form
//! and compares the jumps of both presentations.

use hdlf::arith::eis::{EisElem, EisRing};
use hdlf::epp::char0_translate;

fn main() -> hdlf::Result<()> {
    let r = EisRing::cyclotomic(3, 2, 6)?;
    let pi = EisElem::pi(&r);
    for k in 1..=4 {
        let t = char0_translate(&pi.pow(k))?;
        println!("V = pi^{k}: p w = {:?}", t.p_times_w.coords());
        match t.oracle {
            Some(o) => println!("  jumps {} / {}, agree {}", o.as_jump, o.kummer_jump, o.agree),
            None => println!("  not a reduced presentation"),
        }
    }
    Ok(())
}
