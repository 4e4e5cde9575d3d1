//! Norm-compatible sequences in the 3-cyclotomic tower: epsilon, the
//! uniformizers and the image of a power series.

use hdlf::arith::fq::{Fq, FqField};
use hdlf::laurent::{MLaurent, TruncBox};
use hdlf::norms::{build_pi_seq, embed_series, epsilon, CycTower};

fn main() -> hdlf::Result<()> {
    let t = CycTower::new(3, 4, 8)?;
    for c in epsilon(&t)?.certificates()? {
        println!("epsilon at {}: v = {:?}", c.level, c.measured_v1);
    }
    let pi = build_pi_seq(&t)?;
    println!("pi-sequence compatible to c = {}", pi.threshold());

    let k = FqField::new(3, 1)?;
    let bx = TruncBox::new(1, vec![0], vec![6])?;
    let f = MLaurent::from_terms(&Fq::zero(&k), bx, [(vec![1], Fq::one(&k)), (vec![2], Fq::from_int(&k, 2))])?;
    let e = embed_series(&[pi], &f)?;
    for n in 0..e.seq.len() {
        println!("T + 2T^2 at position {n}: {:?}, exact to {:?}", e.seq.value(n).coords(), e.guarantee(n));
    }
    Ok(())
}
