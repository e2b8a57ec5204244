//! Hurwitz numbers through the semi-infinite wedge, a brute-force symmetric
//! group oracle, completed cycles and free energies.

mod characters;
mod fock;
mod partition;

pub use characters::{
    central_character, class_size, completed_cycle, evaluate_combination, shifted_power_sum, stable_coefficient,
    CharacterTable,
};
pub use fock::{apply_alpha_neg, apply_alpha_pos, border_strips, f_operator_eigenvalue, FockVector};
pub use partition::Partition;

mod hurwitz;
mod oracle;

pub use hurwitz::{connected_hurwitz, disconnected_hurwitz, HurwitzKey, HurwitzTable};
pub use oracle::{brute_force_hurwitz, DEFAULT_ORACLE_BOUND};

mod free_energy;
mod quasi;

pub use free_energy::{exponent_box, free_energy, free_energy_into};
pub use quasi::{quasi_polynomiality_check, QuasiReport, ResidueFit};
