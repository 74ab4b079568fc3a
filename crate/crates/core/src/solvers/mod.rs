//! Line-list solvers: exact diagonalization, perturbation theory, the hybrid
//! exact/perturbative partition and configuration sampling.

mod exact;
mod hybrid;
mod lines;
mod perturb;
mod sampling;

use serde::{Deserialize, Serialize};

pub use exact::{diagonalize, exact_transitions, Eigensystem};
pub use hybrid::{hybrid_solve, SiteSelector};
pub use lines::{LineList, Transition};
pub use perturb::{method_tag, perturb_lines, HyperfineMode, Order, ShiftModel};
pub use sampling::{sample_configurations, DEFAULT_ENUMERATION_THRESHOLD};

use crate::hamiltonian::DEFAULT_EXACT_CAP;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SolverSettings {
    /// Largest Hilbert-space dimension handed to the dense eigensolver.
    pub exact_cap: usize,
    /// Exact lines weaker than this fraction of the strongest are dropped.
    pub intensity_floor: f64,
    /// Perturbation order for perturbative sites.
    pub order: Order,
    pub mode: HyperfineMode,
    pub enumeration_threshold: u128,
}

impl Default for SolverSettings {
    fn default() -> Self {
        Self {
            exact_cap: DEFAULT_EXACT_CAP,
            intensity_floor: 1e-6,
            order: Order::Second,
            mode: HyperfineMode::FullTensor,
            enumeration_threshold: DEFAULT_ENUMERATION_THRESHOLD,
        }
    }
}
