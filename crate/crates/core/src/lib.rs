//! Continuous-wave EPR/ODMR line statistics for spin-1/2 point defects, plus
//! charge-transition-level and binding-energy bookkeeping.
//!
//! The crate is organized bottom-up:
//!
//! - [`spincore`]: physical constants, the isotope registry, nuclear sites and
//!   the bundled carbon-defect dataset.
//! - [`hamiltonian`]: angular-momentum operators and dense spin Hamiltonians
//!   (electron Zeeman, hyperfine, nuclear Zeeman, nuclear quadrupole) in MHz.
//! - [`solvers`]: exact diagonalization, first/second-order perturbation
//!   theory, the hybrid exact/perturbative partition and Monte-Carlo sampling
//!   of nuclear configurations.
//! - [`isotopologues`]: multinomial isotope patterns over equivalent sites.
//! - [`spectrum`]: peak statistics, broadened spectra and plain-text export.
//! - [`energetics`]: charge transition levels and complex binding energies.
//!
//! All frequencies are in MHz, fields in Gauss and energies in eV.

pub mod energetics;
pub mod error;
pub mod hamiltonian;
pub mod isotopologues;
pub mod solvers;
pub mod spectrum;
pub mod spincore;

pub use error::{Error, Result};
pub use hamiltonian::{
    build_hamiltonian, spin_operators, HamiltonianMatrix, OperatorTriple, Terms,
};
pub use solvers::{LineList, SolverSettings, Transition};
pub use spectrum::{peak_stats, PeakStats, Spectrum};
pub use spincore::{
    constants, isotope, DefectRecord, Isotope, NuclearSite, Spin, SpinSite, SpinSystem,
};

/// Complex scalar used for all operator matrices.
pub type C64 = nalgebra::Complex<f64>;
/// Real 3×3 tensor (hyperfine, g, EFG, quadrupole).
pub type Tensor3 = nalgebra::Matrix3<f64>;
/// Real 3-vector (magnetic field in Gauss, directions).
pub type Vec3 = nalgebra::Vector3<f64>;
