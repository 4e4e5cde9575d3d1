use std::fmt::Debug;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::rat::Rat;

/// Commutative ring elements that carry their own context.
///
/// Constants are produced from an existing element so that context-bearing
/// rings (finite fields, truncated p-adic rings) need no global state.
pub trait Ring:
    Clone + PartialEq + Debug + Add<Output = Self> + Sub<Output = Self> + Mul<Output = Self> + Neg<Output = Self>
{
    fn zero_like(&self) -> Self;
    fn one_like(&self) -> Self;
    fn int_like(&self, n: &BigInt) -> Self;
    fn is_zero_elem(&self) -> bool;

    /// Multiplicative inverse, when the element is a unit.
    fn inv_elem(&self) -> Option<Self> {
        None
    }

    fn i64_like(&self, n: i64) -> Self {
        self.int_like(&BigInt::from(n))
    }

    fn pow_u(&self, mut e: u64) -> Self {
        let mut base = self.clone();
        let mut acc = self.one_like();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base.clone();
            }
            e >>= 1;
            if e > 0 {
                base = base.clone() * base;
            }
        }
        acc
    }
}

impl Ring for Rat {
    fn zero_like(&self) -> Self {
        Rat::zero()
    }
    fn one_like(&self) -> Self {
        Rat::one()
    }
    fn int_like(&self, n: &BigInt) -> Self {
        Rat::from_integer(n.clone())
    }
    fn is_zero_elem(&self) -> bool {
        self.is_zero()
    }
    fn inv_elem(&self) -> Option<Self> {
        (!self.is_zero()).then(|| self.recip())
    }
}

impl Ring for BigInt {
    fn zero_like(&self) -> Self {
        BigInt::zero()
    }
    fn one_like(&self) -> Self {
        BigInt::one()
    }
    fn int_like(&self, n: &BigInt) -> Self {
        n.clone()
    }
    fn is_zero_elem(&self) -> bool {
        self.is_zero()
    }
}
