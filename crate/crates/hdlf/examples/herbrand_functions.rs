//! Builds Herbrand functions from jump data, composes and inverts them.

use hdlf::arith::rat::rat;
use hdlf::herbrand::{HerbrandMap, LexIndex, RamJumps};

fn main() -> hdlf::Result<()> {
    // a degree 9 extension with lower jumps 1 and 4
    let d = RamJumps::new(vec![9], vec![LexIndex::from_ints(&[1]), LexIndex::from_ints(&[4])], vec![9, 3, 1])?;
    let phi = HerbrandMap::from_jumps(&d)?;
    for x in [0, 1, 2, 4, 6] {
        let x = LexIndex::from_ints(&[x]);
        println!("phi({x}) = {}", phi.evaluate(&x)?);
    }
    let (i, j) = phi.last_edge();
    println!("last edge ({i}, {j}), degree {}", phi.degree());

    let psi = phi.invert();
    println!("psi(phi(7/2)) = {}", psi.evaluate(&phi.evaluate(&LexIndex::new(vec![rat(7, 2)]))?)?);

    // two-dimensional data: the last coordinate carries the ramification
    let e = RamJumps::new(vec![1, 3], vec![LexIndex::from_ints(&[2, -1])], vec![3, 1])?;
    let chi = HerbrandMap::from_jumps(&e)?;
    let twice = HerbrandMap::compose(&chi, &chi)?;
    println!("chi: {}", serde_json::to_string(&chi).unwrap());
    println!("chi o chi has degree {} and breaks {:?}", twice.degree(), twice.breakpoints());
    Ok(())
}
