//! Witt vectors over arbitrary commutative rings, Artin-Hasse series and
//! the ring map from W(R) of a tower to the base ring.

pub mod artin_hasse;
mod poly;
pub mod gamma;
mod json;
mod vector;

pub use artin_hasse::{artin_hasse, artin_hasse_congruence_check, ArtinHasseReport, PowerSeries1};
pub use gamma::{fontaine_gamma, kernel_generator, sigma_inv_witt, GammaValue};
pub use json::{AnyWitt, WittJson};
pub use poly::IntPoly;
pub use vector::{p_as_witt, WittArith, WittVec, MAX_LEN};
