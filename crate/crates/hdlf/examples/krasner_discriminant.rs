//! Root distances, the value identity and discriminants from jump data,
//! checked against a resultant over Z_3[zeta_3].

use hdlf::arith::eis::EisRing;
use hdlf::arith::rat::ri;
use hdlf::herbrand::{LexIndex, RamJumps};
use hdlf::krasner::{disc_bound_check, disc_valuation, locate_root, value_check, EisPoly};

fn main() -> hdlf::Result<()> {
    let d = RamJumps::new(vec![3], vec![LexIndex::from_ints(&[2])], vec![3, 1])?;
    for a in [0, 1, 2, 5] {
        let c = value_check(&d, &LexIndex::from_ints(&[a]))?;
        println!("a = {a}: distance sum {} = phi(a) + 1 = {}", c.distance_sum, c.herbrand_side);
    }
    let (a, unique) = locate_root(&d, &LexIndex::new(vec![hdlf::arith::rat::rat(5, 2)]))?;
    println!("A = 5/2 puts alpha at distance {a} + 1 (unique: {unique})");
    let disc = disc_valuation(&d, &LexIndex::last_unit(1))?;
    println!("v(D) = {disc}, bound holds: {}", disc_bound_check(&d)?);

    let base = EisRing::cyclotomic(3, 1, 8)?;
    let f = EisPoly::cyclotomic_step(&base, 3)?;
    println!("resultant: v_K(D) = {}", f.disc_valuation()? * ri(base.d as i64));
    Ok(())
}
