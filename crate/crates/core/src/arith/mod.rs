//! Exact arithmetic substrate: rationals, the critical-point quotient ring,
//! truncated Laurent series, truncated multivariate series and small exact
//! linear algebra.

mod critical;
mod laurent;
pub mod linalg;
mod multi;
mod rational;
mod ring;

pub use critical::CriticalRingElem;
pub use laurent::{Laurent, EXACT};
pub use multi::MultiSeries;
pub use rational::{binomial, factorial, format_rational, parse_rational, rat, rat_int, Rational};
pub use ring::Ring;
