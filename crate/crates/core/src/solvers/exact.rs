use nalgebra::{DMatrix, SymmetricEigen};

use super::{LineList, SolverSettings, Transition};
use crate::hamiltonian::HamiltonianMatrix;
use crate::{Error, Result, C64};

/// Dense Hermitian eigendecomposition, eigenvalues ascending.
#[derive(Clone, Debug)]
pub struct Eigensystem {
    pub values: Vec<f64>,
    /// Eigenvectors as columns, in the order of `values`.
    pub vectors: DMatrix<C64>,
}

pub fn diagonalize(h: &HamiltonianMatrix) -> Result<Eigensystem> {
    let herm = h.hermiticity_error();
    if herm > 1e-9 {
        return Err(Error::NonHermitian(herm));
    }
    let n = h.dimension();
    let norm = h.matrix.norm().max(1e-300);
    let eig = SymmetricEigen::try_new(h.matrix.clone(), f64::EPSILON, 1000 * n.max(10))
        .ok_or(Error::EigenNonConvergence)?;

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values: Vec<f64> = order.iter().map(|&k| eig.eigenvalues[k]).collect();
    let vectors = DMatrix::from_fn(n, n, |r, c| eig.eigenvectors[(r, order[c])]);

    // ‖Hv − λv‖ ≤ 1e-8·‖H‖ for every eigenpair
    let hv = &h.matrix * &vectors;
    for c in 0..n {
        let residual = (0..n)
            .map(|r| (hv[(r, c)] - vectors[(r, c)] * values[c]).norm_sqr())
            .sum::<f64>()
            .sqrt();
        if residual > 1e-8 * norm {
            return Err(Error::EigenNonConvergence);
        }
    }
    Ok(Eigensystem { values, vectors })
}

/// All transitions E_f > E_i with intensity |⟨f|S_x|i⟩|² above the relative
/// floor. Each line carries weight 1/Π(2I_k+1), the population of one nuclear
/// configuration in the high-temperature limit.
pub fn exact_transitions(h: &HamiltonianMatrix, settings: &SolverSettings) -> Result<LineList> {
    let eig = diagonalize(h)?;
    let n = h.dimension();
    let half = n / 2;
    // S_x flips the electron factor, which is the most significant digit
    let sx_v = DMatrix::from_fn(n, n, |r, c| {
        let partner = if r < half { r + half } else { r - half };
        eig.vectors[(partner, c)] * 0.5
    });
    let t = eig.vectors.adjoint() * sx_v;

    let scale = eig
        .values
        .iter()
        .fold(0.0f64, |m, v| m.max(v.abs()))
        .max(1.0);
    let degenerate = 1e-9 * scale;
    let weight = 2.0 / n as f64;
    let mut raw = Vec::new();
    let mut max_intensity = 0.0f64;
    for i in 0..n {
        for f in (i + 1)..n {
            let freq = eig.values[f] - eig.values[i];
            if freq <= degenerate {
                continue;
            }
            let intensity = t[(f, i)].norm_sqr();
            max_intensity = max_intensity.max(intensity);
            raw.push(Transition::new(freq, intensity, weight));
        }
    }
    let floor = settings.intensity_floor * max_intensity;
    raw.retain(|tr| tr.intensity > floor);
    Ok(LineList::new("exact", h.field, raw).sorted())
}
