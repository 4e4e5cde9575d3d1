//! Scalar arithmetic: rationals, finite fields, truncated p-adic integers,
//! Eisenstein extension rings and Teichmueller lifts.

pub mod eis;
pub mod fq;
pub mod padic;
pub mod rat;
pub mod ring;

pub use eis::{cyclotomic_minpoly, EisElem, EisRing};
pub use fq::{Fq, FqField, FqJson};
pub use padic::{teichmueller, PadicJson, PadicTrunc};
pub use rat::{parse_rat, rat, rat_to_string, ri, ExtRat, Rat};
pub use ring::Ring;

/// Valuation of an element of an Eisenstein ring, normalized by v(p) = 1.
pub fn ext_valuation(x: &EisElem) -> ExtRat {
    x.valuation()
}

pub fn frobenius_fq(a: &Fq) -> Fq {
    a.frobenius()
}
