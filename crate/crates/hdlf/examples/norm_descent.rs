//! Recovers pi_u from pi_{u+1} through the Krasner step, and shows the
//! perturbed polynomial that has no close root.

use hdlf::norms::{norm_descend, perturbed_step, step_coefficient_threshold, CycTower};
use hdlf::Error;

fn main() -> hdlf::Result<()> {
    let t = CycTower::new(3, 4, 8)?;
    for u in 1..=2 {
        let c1 = step_coefficient_threshold(&t, u)?;
        let d = norm_descend(&t, u, &t.step_poly(u)?, &t.pi(u + 1), &c1)?;
        println!("u={u}: recovered pi_u: {}  {:?}", d.root == t.pi(u), d.certificate);
        match norm_descend(&t, u, &perturbed_step(&t, u)?, &t.pi(u + 1), &c1) {
            Err(Error::NoCloseRoot(msg)) => println!("  control: {msg}"),
            other => println!("  control unexpectedly gave {:?}", other.map(|d| d.certificate)),
        }
    }
    Ok(())
}
