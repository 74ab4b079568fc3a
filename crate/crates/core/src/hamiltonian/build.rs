use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use super::operators::{add_local, kron, operators_for, OperatorTriple};
use super::quadrupole::efg_to_quadrupole;
use crate::spincore::constants::ELECTRON_ZEEMAN_MHZ_PER_GAUSS;
use crate::spincore::{Spin, SpinSystem};
use crate::{Error, Result, Vec3, C64};

/// Default upper bound on the Hilbert-space dimension for dense diagonalization.
pub const DEFAULT_EXACT_CAP: usize = 4096;

/// Which interaction terms enter the Hamiltonian.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Terms {
    pub ezi: bool,
    pub hfi: bool,
    pub nzi: bool,
    pub nqi: bool,
}

impl Terms {
    pub const EZI: Terms = Terms {
        ezi: true,
        hfi: false,
        nzi: false,
        nqi: false,
    };
    /// Electron Zeeman plus hyperfine.
    pub const SIMPLIFIED: Terms = Terms {
        ezi: true,
        hfi: true,
        nzi: false,
        nqi: false,
    };
    pub const FULL: Terms = Terms {
        ezi: true,
        hfi: true,
        nzi: true,
        nqi: true,
    };

    pub fn with_nzi(self, on: bool) -> Self {
        Terms { nzi: on, ..self }
    }

    pub fn with_nqi(self, on: bool) -> Self {
        Terms { nqi: on, ..self }
    }
}

impl Default for Terms {
    fn default() -> Self {
        Terms::SIMPLIFIED
    }
}

/// Dense spin Hamiltonian in MHz.
#[derive(Clone, Debug)]
pub struct HamiltonianMatrix {
    /// Factor dimensions: electron first, then sites in declared order.
    pub dims: Vec<usize>,
    pub matrix: DMatrix<C64>,
    pub terms: Terms,
    pub field: Vec3,
}

impl HamiltonianMatrix {
    pub fn dimension(&self) -> usize {
        self.matrix.nrows()
    }

    /// max |H − H†| relative to max |H|.
    pub fn hermiticity_error(&self) -> f64 {
        let h = &self.matrix;
        let scale = h.iter().map(|v| v.norm()).fold(0.0, f64::max);
        if scale == 0.0 {
            return 0.0;
        }
        let dev = (h - h.adjoint())
            .iter()
            .map(|v| v.norm())
            .fold(0.0, f64::max);
        dev / scale
    }
}

fn electron_ops() -> OperatorTriple {
    operators_for(Spin::HALF)
}

/// Electron Zeeman vector gᵀB scaled to MHz, so that H_EZI = v·S.
pub fn electron_zeeman_vector(system: &SpinSystem, field: &Vec3) -> Vec3 {
    system.g_tensor.transpose() * field * ELECTRON_ZEEMAN_MHZ_PER_GAUSS
}

/// Assembles the selected terms of the spin Hamiltonian:
///
/// - EZI: (μ_B/h)·Bᵀ g S
/// - HFI: Sᵀ A(k) I_k with A in the crystal frame
/// - NZI: −(γ_k/2π)·B·I_k
/// - NQI: I_kᵀ Q(k) I_k
pub fn build_hamiltonian(
    system: &SpinSystem,
    field: &Vec3,
    terms: Terms,
) -> Result<HamiltonianMatrix> {
    build_hamiltonian_capped(system, field, terms, DEFAULT_EXACT_CAP)
}

pub fn build_hamiltonian_capped(
    system: &SpinSystem,
    field: &Vec3,
    terms: Terms,
    cap: usize,
) -> Result<HamiltonianMatrix> {
    let dimension = system.hilbert_dimension();
    if dimension > cap as u128 {
        return Err(Error::DimensionExceedsCap { dimension, cap });
    }
    if terms.nqi {
        for (k, s) in system.sites.iter().enumerate() {
            if s.isotope.is_quadrupolar() && s.site.efg.is_none() {
                return Err(Error::MissingEfg(k));
            }
        }
    }

    let mut dims = vec![2usize];
    dims.extend(system.sites.iter().map(|s| s.isotope.spin.multiplicity()));
    let n = dimension as usize;
    let mut h = DMatrix::<C64>::zeros(n, n);
    let s = electron_ops();

    if terms.ezi {
        let v = electron_zeeman_vector(system, field);
        let op = linear_combination(&s, &v);
        add_local(&mut h, &dims, &[0], &op);
    }

    for (k, site) in system.sites.iter().enumerate() {
        if !site.isotope.is_magnetic() {
            continue;
        }
        let factor = k + 1;
        let nuc = operators_for(site.isotope.spin);

        if terms.hfi {
            let a = site.hyperfine();
            let d = 2 * nuc.dimension;
            let mut pair = DMatrix::<C64>::zeros(d, d);
            for i in 0..3 {
                for j in 0..3 {
                    if a[(i, j)] != 0.0 {
                        pair += kron(s.component(i), nuc.component(j)).map(|v| v * a[(i, j)]);
                    }
                }
            }
            add_local(&mut h, &dims, &[0, factor], &pair);
        }

        if terms.nzi {
            let v = field * (-site.isotope.gamma_mhz_per_gauss());
            add_local(&mut h, &dims, &[factor], &linear_combination(&nuc, &v));
        }

        if terms.nqi && site.isotope.is_quadrupolar() {
            let efg = site.site.efg.as_ref().ok_or(Error::MissingEfg(k))?;
            let q = efg_to_quadrupole(efg, &site.isotope)?;
            let d = nuc.dimension;
            let mut op = DMatrix::<C64>::zeros(d, d);
            for i in 0..3 {
                for j in 0..3 {
                    if q[(i, j)] != 0.0 {
                        op += (nuc.component(i) * nuc.component(j)).map(|v| v * q[(i, j)]);
                    }
                }
            }
            add_local(&mut h, &dims, &[factor], &op);
        }
    }

    Ok(HamiltonianMatrix {
        dims,
        matrix: h,
        terms,
        field: *field,
    })
}

fn linear_combination(ops: &OperatorTriple, v: &Vec3) -> DMatrix<C64> {
    ops.x.map(|e| e * v.x) + ops.y.map(|e| e * v.y) + ops.z.map(|e| e * v.z)
}

/// Electron S_x embedded in the full space with the given factor dimensions.
pub fn electron_sx(dims: &[usize]) -> DMatrix<C64> {
    super::operators::embed(dims, 0, &electron_ops().x)
}
