//! Topological recursion on `X(z) = -z^{qr} + log z`, `y = z^q`, with loop
//! equation and projection probes.
//!
//! Residues at the `qr` critical points are computed once at a generic root
//! `p` of `qr p^{qr} = 1`, i.e. with coefficients in `Q[p]/(qr p^{qr} - 1)`,
//! and summed with the trace. Spectator variables stay global: every
//! `1/(z_j - p)` is rewritten as `Q(z_j, p)/P(z_j)`, so correlators are
//! polynomials over products of powers of `P(z) = qr z^{qr} - 1`.

mod curve;
mod expand;
mod extended;
mod global;
mod local;
mod loops;
mod poly;
mod probes;
mod recursion;
mod restr;

pub use curve::{DeckSeries, LocalR, SpectralCurve};
pub use expand::{expand_at_zero, h02_from_curve, hurwitz_from_recursion, z_of_x};
pub use extended::{extended_qle_probe, extended_qle_to};
pub use global::GlobalRat;
pub use local::{d_local, expand_local, expand_product, local_pole_bound, LocalSeries, Slot};
pub use loops::{
    check_linear_loop, check_projection, check_quadratic_loop, check_quadratic_loop_to, project, regularized_delta_delta, LoopReport,
    QuadraticReport,
};
pub use poly::{PolyR, QPoly};
pub use probes::{
    delta_delta_singular_part, regularized_w02, symmetrization_probe, symmetrization_probe_w02, Bilocal,
    SymmetrizationReport, W02Combination,
};
pub use recursion::CorrelatorStore;
pub use restr::{restr_w02, w02, w02_derivative};
