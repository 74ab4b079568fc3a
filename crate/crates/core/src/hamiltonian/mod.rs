//! Spin operators and dense spin-Hamiltonian assembly, in MHz.
//!
//! Basis layout: electron factor first, then nuclear sites in declared order,
//! each factor in descending m.

mod build;
mod operators;
mod quadrupole;

pub use build::{
    build_hamiltonian, build_hamiltonian_capped, electron_sx, electron_zeeman_vector,
    HamiltonianMatrix, Terms, DEFAULT_EXACT_CAP,
};
pub use operators::{embed, kron, operators_for, spin_operators, OperatorTriple};
pub use quadrupole::efg_to_quadrupole;
