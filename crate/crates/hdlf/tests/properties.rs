//! Algebraic invariants under random inputs.

use num_bigint::BigInt;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use hdlf::arith::fq::{Fq, FqField};
use hdlf::arith::padic::PadicTrunc;
use hdlf::arith::rat::{ri, ExtRat};
use hdlf::epp::{case_c_bound, EppInvariants};
use hdlf::herbrand::{random_jumps, random_nonneg, HerbrandMap, JumpParams, RamJumps};
use hdlf::krasner::locate_root;
use hdlf::laurent::{MLaurent, TruncBox};
use hdlf::witt::{artin_hasse, WittArith, WittVec};

fn jumps(seed: u64, r: Option<usize>) -> RamJumps {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    loop {
        let d = random_jumps(&mut rng, &JumpParams::default());
        if r.is_none_or(|r| d.r == r) {
            return d;
        }
    }
}

fn series(p: u64, terms: &[(i64, i64, u32)]) -> MLaurent<Fq> {
    let k = FqField::new(p, 1).unwrap();
    let bx = TruncBox::new(1, vec![-3, -3], vec![6, 6]).unwrap();
    let ts = terms.iter().map(|&(a, b, c)| (vec![a, b], Fq::from_int(&k, c as i64)));
    MLaurent::from_terms(&Fq::zero(&k), bx, ts).unwrap()
}

fn terms() -> impl Strategy<Value = Vec<(i64, i64, u32)>> {
    prop::collection::vec((-3i64..=3, -3i64..=3, 0u32..5), 0..6)
}

fn zp_vec(p: u64, m: u32, xs: &[u64]) -> WittVec<PadicTrunc> {
    WittVec::new(p, xs.iter().map(|&x| PadicTrunc::new(p, m, &BigInt::from(x)).unwrap()).collect()).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn phi_preimage_inverts_evaluate(seed in any::<u64>(), pt in any::<u64>()) {
        let d = jumps(seed, None);
        let phi = HerbrandMap::from_jumps(&d).unwrap();
        let x = random_nonneg(&mut ChaCha8Rng::seed_from_u64(pt), d.r, 15);
        prop_assert_eq!(phi.preimage(&phi.evaluate(&x).unwrap()).unwrap(), x);
    }

    #[test]
    fn composition_is_associative(a in any::<u64>(), b in any::<u64>(), c in any::<u64>()) {
        let f = HerbrandMap::from_jumps(&jumps(a, Some(1))).unwrap();
        let g = HerbrandMap::from_jumps(&jumps(b, Some(1))).unwrap();
        let h = HerbrandMap::from_jumps(&jumps(c, Some(1))).unwrap();
        let left = HerbrandMap::compose(&HerbrandMap::compose(&f, &g).unwrap(), &h).unwrap();
        let right = HerbrandMap::compose(&f, &HerbrandMap::compose(&g, &h).unwrap()).unwrap();
        prop_assert_eq!(left, right);
    }

    #[test]
    fn locate_root_recovers_a(seed in any::<u64>(), pt in any::<u64>()) {
        let d = jumps(seed, None);
        let a = random_nonneg(&mut ChaCha8Rng::seed_from_u64(pt), d.r, 15);
        prop_assume!(a.first() > &ri(0));
        let big_a = HerbrandMap::from_jumps(&d).unwrap().evaluate(&a).unwrap();
        let (back, _) = locate_root(&d, &big_a).unwrap();
        prop_assert_eq!(back, a);
    }

    #[test]
    fn laurent_ring_laws(p in prop::sample::select(vec![2u64, 3, 5]), f in terms(), g in terms(), h in terms()) {
        let (f, g, h) = (series(p, &f), series(p, &g), series(p, &h));
        prop_assert_eq!(f.try_mul(&g).unwrap(), g.try_mul(&f).unwrap());
        prop_assert_eq!(f.try_add(&g).unwrap().try_add(&h).unwrap(), f.try_add(&g.try_add(&h).unwrap()).unwrap());
        prop_assert!(f.try_sub(&f).unwrap().is_zero());
    }

    #[test]
    fn frobenius_is_additive_in_char_p(p in prop::sample::select(vec![2u64, 3]), f in terms(), g in terms()) {
        let (f, g) = (series(p, &f), series(p, &g));
        prop_assert_eq!(f.try_add(&g).unwrap().frobenius(), f.frobenius().try_add(&g.frobenius()).unwrap());
    }

    #[test]
    fn witt_over_zp_is_a_commutative_ring(
        p in prop::sample::select(vec![2u64, 3, 5]),
        xs in prop::collection::vec(0u64..1000, 3),
        ys in prop::collection::vec(0u64..1000, 3),
        zs in prop::collection::vec(0u64..1000, 3),
    ) {
        let m = 4;
        let q = p.pow(m);
        let red = |v: &[u64]| v.iter().map(|x| x % q).collect::<Vec<_>>();
        let (x, y, z) = (zp_vec(p, m, &red(&xs)), zp_vec(p, m, &red(&ys)), zp_vec(p, m, &red(&zs)));
        let w = WittArith::new(p, 3).unwrap();
        prop_assert_eq!(w.add(&x, &y).unwrap(), w.add(&y, &x).unwrap());
        prop_assert_eq!(w.mul(&x, &y).unwrap(), w.mul(&y, &x).unwrap());
        let lhs = w.mul(&x, &w.add(&y, &z).unwrap()).unwrap();
        let rhs = w.add(&w.mul(&x, &y).unwrap(), &w.mul(&x, &z).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
        prop_assert!(w.sub(&x, &x).unwrap().comps.iter().all(|c| c.is_zero()));
    }

    #[test]
    fn artin_hasse_is_integral(p in prop::sample::select(vec![2u64, 3, 5, 7]), deg in 1usize..16) {
        let e = artin_hasse(p, deg).unwrap();
        prop_assert!(e.is_p_integral(p));
        prop_assert_eq!(&e.coeffs[0], &ri(1));
        prop_assert_eq!(&e.coeffs[1], &ri(1));
    }

    #[test]
    fn case_c_bound_is_the_least_strict_step(a0 in -40i64..40, gap in 0i64..60, den in 1i64..4) {
        let inv = EppInvariants { a: ExtRat::Finite(ri(a0)), b: ri(a0 + gap), b_s: vec![] };
        let c = hdlf::arith::rat::rat(1, den);
        let n = case_c_bound(&inv, &c) as i64;
        prop_assert!(ri(a0) + ri(n) * &c > inv.b);
        prop_assert!(ri(a0) + ri(n - 1) * &c <= inv.b);
    }
}
