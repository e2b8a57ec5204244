//! Exact-arithmetic laboratory for q-orbifold r-spin Hurwitz numbers.
//!
//! The crate is `no_std` (it needs `alloc`). It computes the same numbers along
//! three independent routes:
//!
//! - [`wedge`]: the semi-infinite wedge (free fermion) formula, plus a brute-force
//!   symmetric group oracle;
//! - [`cutjoin`]: the spin cut-and-join recursion on generating series;
//! - [`spectral`]: topological recursion on the curve `X = -z^{qr} + log z`, `y = z^q`,
//!   together with loop-equation and projection-property probes.
//!
//! [`chiodo`] carries the Bernoulli/Chiodo tables and the genus zero,
//! three-point closed form of the ELSV-type formula.
#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod arith;
pub mod chiodo;
pub mod cutjoin;
pub mod error;
pub mod spectral;
pub mod wedge;

pub use arith::{CriticalRingElem, Laurent, MultiSeries, Rational, Ring};
pub use error::{Error, Result};
