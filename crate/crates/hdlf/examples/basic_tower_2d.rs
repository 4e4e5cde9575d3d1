//! p-th power projections in the 2-dimensional basic tower, and the step
//! counts of the alpha recursion.

use hdlf::arith::rat::{rat, ri};
use hdlf::herbrand::LexIndex;
use hdlf::norms::{alpha_steps_below, BasicTower2D};

fn main() -> hdlf::Result<()> {
    let b = BasicTower2D::new(3, 3, 8)?;
    for n in 0..b.depth() {
        println!("{:?}", b.pth_projection_check(n)?);
    }
    for p in [2, 3] {
        let steps: Vec<String> = (0..=10)
            .map(|a| {
                let s = alpha_steps_below(&LexIndex::from_ints(&[a]), &ri(1), p, &rat(1, 1000), 40);
                format!("{a}:{}", s.ok().flatten().map_or("-".into(), |n| n.to_string()))
            })
            .collect();
        println!("p={p} steps below 1e-3: {}", steps.join(" "));
    }
    Ok(())
}
