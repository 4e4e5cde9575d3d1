//! The map gamma on W(R) and the exponential pairing built from it.

use hdlf::norms::{duality_map, epsilon, epsilon_minus_one, CycTower};
use hdlf::witt::{fontaine_gamma, kernel_generator, WittVec};

fn main() -> hdlf::Result<()> {
    for (p, m) in [(2, 16), (3, 8)] {
        let t = CycTower::new(p, 4, m)?;
        let eps = WittVec::teichmueller(p, &epsilon(&t)?, 2);
        let g = fontaine_gamma(&eps, None)?;
        println!("p={p}: gamma([eps]) = {:?}... at level {}, known to {}", &g.value.coords()[..2], g.level, g.precision);
        let k = fontaine_gamma(&kernel_generator(&t, 2)?, None)?;
        println!("  gamma(kernel generator) has valuation {:?}", k.value.valuation());
        let d = duality_map(&epsilon_minus_one(&t, 2)?, 1)?;
        let rep = d.report();
        println!("  duality([eps] - 1): v(log) = {:?}, in 1 + pO: {}", rep.log_arg_valuation, rep.in_one_plus_p);
    }
    Ok(())
}
