//! Two-variable Laurent series over F_3 with explicit truncation boxes.

use hdlf::arith::fq::{Fq, FqField};
use hdlf::laurent::{MLaurent, TruncBox};

fn main() -> hdlf::Result<()> {
    let k = FqField::new(3, 1)?;
    let bx = TruncBox::new(1, vec![-2, -2], vec![6, 6])?;
    let one = Fq::one(&k);
    let f = MLaurent::from_terms(&Fq::zero(&k), bx.clone(), [(vec![0, 0], one.clone()), (vec![0, 1], one.clone())])?;
    let g = MLaurent::from_terms(&Fq::zero(&k), bx, [(vec![-1, 2], one.clone()), (vec![1, -1], Fq::from_int(&k, 2))])?;
    println!("f g = {:?}", f.try_mul(&g)?);
    println!("1/f = {:?}", f.inv()?);
    println!("v(g) = {}", g.nvaluation()?);
    println!("g reduced mod x^p - x: {:?}", g.artin_schreier_reduce());
    Ok(())
}
