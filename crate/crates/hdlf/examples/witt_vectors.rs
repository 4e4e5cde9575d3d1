//! Witt vector sums and products over Z, Z/p^M and F_q, with ghost components.

use num_bigint::BigInt;

use hdlf::arith::fq::{Fq, FqField};
use hdlf::witt::{p_as_witt, WittArith, WittVec, WittJson};

fn main() -> hdlf::Result<()> {
    let w = WittArith::new(3, 3)?;
    let x = WittVec::new(3, vec![BigInt::from(2), BigInt::from(-1), BigInt::from(5)])?;
    let y = WittVec::new(3, vec![BigInt::from(1), BigInt::from(4), BigInt::from(0)])?;
    let s = w.add(&x, &y)?;
    let m = w.mul(&x, &y)?;
    println!("x + y = {:?}  ghost {:?}", s.comps, s.ghost());
    println!("x * y = {:?}  ghost {:?}", m.comps, m.ghost());
    println!("p = {:?}", p_as_witt(&w)?.comps);
    println!("F V x = {:?}", w.frobenius_general(&x.verschiebung())?.comps);

    // over F_9 the Frobenius is componentwise
    let k = FqField::new(3, 2)?;
    let g = Fq::generator(&k);
    let t = WittVec::teichmueller(3, &g, 2);
    println!("[g]^2 = {:?}", WittArith::new(3, 2)?.mul(&t, &t)?.comps);

    let j: WittJson = serde_json::from_str(r#"{"ring":"zp","p":5,"M":3,"comps":[7,2]}"#).unwrap();
    let z = j.parse()?;
    println!("{}", serde_json::to_string(&z.add(&z)?.to_json()).unwrap());
    Ok(())
}
