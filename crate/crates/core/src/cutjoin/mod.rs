//! The spin cut-and-join equation on truncated generating series.
//!
//! Series are truncated by total degree. Terms containing the singular part
//! `log((ξ - x)/(ξ x))` of `H̃_{0,2}` are rational functions with poles on the
//! diagonals `x_k = x_j`; each full right-hand side is summed over a common
//! denominator and the poles are required to cancel exactly.

mod equation;
mod operator;
mod ratfn;

pub use equation::{
    cut_and_join_lhs, cut_and_join_rhs, cut_and_join_solve, shift_constant, verify_cut_and_join,
    verify_cut_and_join_with, FreeEnergySource, ShiftConvention, SolverSource, WedgeSource,
};
pub use operator::{q_operator, q_operator_terms, z_over_zeta, zeta_over_z};
