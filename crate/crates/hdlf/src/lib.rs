//! Exact arithmetic for higher-dimensional local fields.
//!
//! The crate is organized bottom-up: [`arith`] provides scalars, [`laurent`]
//! iterated Laurent series, [`herbrand`] and [`krasner`] the ramification
//! calculus, [`witt`] Witt vectors, [`epp`] the Artin-Schreier elimination
//! recursion and [`norms`] towers, compatible sequences and the field of norms.

pub mod arith;
pub mod epp;
pub mod error;
pub mod herbrand;
pub mod krasner;
pub mod laurent;
pub mod norms;
pub mod witt;

pub use error::{Error, Result};
