//! Perturbative line positions for an S = 1/2 electron coupled to nuclei.
//!
//! With the electron quantized along l = gᵀB/|gᵀB| at Larmor frequency ν_e,
//! the secular hyperfine field seen by nucleus k is u_k = A_kᵀ l. To first
//! order every nuclear configuration m = (m_1 … m_K), with m_k quantized along
//! u_k, gives one allowed line at
//!
//! ```text
//! ν(m) = ν_e + Σ_k |u_k| m_k
//! ```
//!
//! The second-order correction comes from the terms of SᵀAI that flip the
//! electron. Writing them as S₊V† + S₋V with V = Σ_k c_k·I_k and
//! c_k = A_kᵀ(e₁ + i e₂)/2 for a transverse basis (e₁, e₂) of l, the shift is
//! (⟨V†V⟩ + ⟨VV†⟩)/ν_e evaluated in the product state:
//!
//! ```text
//! Δ²(m) = [ Σ_k (I_k(I_k+1) − m_k²)·(tr M_k − û_kᵀM_k û_k)/2 + 2·|Σ_k m_k (c_k·û_k)|² ] / ν_e
//! M_k   = A_kᵀ (1 − l lᵀ) A_k / 2
//! ```
//!
//! For an isotropic coupling a this reduces to (a²/2ν_e)(I(I+1) − m²). The
//! cross term vanishes whenever l is a principal axis of every A_kA_kᵀ, in
//! particular for the bundled tables with B along c.

use log::warn;
use serde::{Deserialize, Serialize};

use super::{LineList, Transition};
use crate::hamiltonian::electron_zeeman_vector;
use crate::spincore::SpinSystem;
use crate::{Error, Result, Tensor3, Vec3, C64};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Order {
    First,
    Second,
}

impl Order {
    pub fn from_number(n: u8) -> Result<Self> {
        match n {
            1 => Ok(Order::First),
            2 => Ok(Order::Second),
            _ => Err(Error::InvalidArgument(format!(
                "perturbation order must be 1 or 2, got {n}"
            ))),
        }
    }
}

/// How site tensors enter the perturbative expressions.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum HyperfineMode {
    /// Full crystal-frame tensors.
    FullTensor,
    /// (Axx, Ayy, Azz) used as a diagonal tensor in the crystal frame.
    AConstants,
}

#[derive(Clone, Debug)]
struct SiteCoupling {
    projections: Vec<f64>,
    /// |A_kᵀ l|, MHz
    first: f64,
    /// (I(I+1) − m²)·(tr M − ûᵀMû)/2 per projection, MHz²
    transverse: Vec<f64>,
    /// c_k·û_k, MHz
    pseudo: C64,
}

/// Precomputed per-site couplings for one field and a subset of sites.
#[derive(Clone, Debug)]
pub struct ShiftModel {
    nu_e: f64,
    order: Order,
    sites: Vec<SiteCoupling>,
}

fn transverse_basis(l: &Vec3) -> (Vec3, Vec3) {
    let trial = if l.x.abs() < 0.9 {
        Vec3::x()
    } else {
        Vec3::y()
    };
    let e1 = (trial - l * l.dot(&trial)).normalize();
    let e2 = l.cross(&e1);
    (e1, e2)
}

impl ShiftModel {
    pub fn new(
        system: &SpinSystem,
        sites: &[usize],
        field: &Vec3,
        order: Order,
        mode: HyperfineMode,
    ) -> Result<Self> {
        let ez = electron_zeeman_vector(system, field);
        let nu_e = ez.norm();
        if nu_e == 0.0 {
            return Err(Error::ZeroField);
        }
        let l = ez / nu_e;
        let (e1, e2) = transverse_basis(&l);
        let projector = Tensor3::identity() - l * l.transpose();

        let mut couplings = Vec::new();
        for &k in sites {
            let s = &system.sites[k];
            if !s.isotope.is_magnetic() {
                continue;
            }
            let a = match mode {
                HyperfineMode::FullTensor => s.hyperfine(),
                HyperfineMode::AConstants => Tensor3::from_diagonal(&s.principal_values()),
            };
            if a.norm() >= nu_e {
                warn!(
                    "site {k} ({}): hyperfine norm {:.1} MHz is not small against ν_e = {:.1} MHz; \
                     perturbative lines are unreliable",
                    s.isotope.symbol,
                    a.norm(),
                    nu_e
                );
            }
            let u = a.transpose() * l;
            let first = u.norm();
            let u_hat = if first > 0.0 { u / first } else { l };
            let m_mat = a.transpose() * projector * a * 0.5;
            let transverse_weight = (m_mat.trace() - u_hat.dot(&(m_mat * u_hat))) * 0.5;
            let c_re = a.transpose() * e1 * 0.5;
            let c_im = a.transpose() * e2 * 0.5;
            let pseudo = C64::new(c_re.dot(&u_hat), c_im.dot(&u_hat));
            let casimir = s.isotope.spin.casimir();
            let projections: Vec<f64> = s.isotope.spin.projections().collect();
            let transverse = projections
                .iter()
                .map(|m| (casimir - m * m) * transverse_weight)
                .collect();
            couplings.push(SiteCoupling {
                projections,
                first,
                transverse,
                pseudo,
            });
        }
        Ok(Self {
            nu_e,
            order,
            sites: couplings,
        })
    }

    pub fn larmor(&self) -> f64 {
        self.nu_e
    }

    /// Number of nuclear configurations, Π(2I_k+1) over magnetic sites.
    pub fn configurations(&self) -> u128 {
        self.sites
            .iter()
            .map(|s| s.projections.len() as u128)
            .fold(1u128, |a, b| a.saturating_mul(b))
    }

    pub fn multiplicities(&self) -> Vec<usize> {
        self.sites.iter().map(|s| s.projections.len()).collect()
    }

    /// First-order coupling constants |A_kᵀ l| of the magnetic sites.
    pub fn first_order_couplings(&self) -> Vec<f64> {
        self.sites.iter().map(|s| s.first).collect()
    }

    /// Frequency offset from ν_e for one configuration, given as projection
    /// indices (0 ↔ m = I).
    pub fn shift(&self, config: &[usize]) -> f64 {
        let mut first = 0.0;
        let mut transverse = 0.0;
        let mut pseudo = C64::new(0.0, 0.0);
        for (s, &idx) in self.sites.iter().zip(config) {
            let m = s.projections[idx];
            first += s.first * m;
            transverse += s.transverse[idx];
            pseudo += s.pseudo * m;
        }
        match self.order {
            Order::First => first,
            Order::Second => first + (transverse + 2.0 * pseudo.norm_sqr()) / self.nu_e,
        }
    }

    /// Every configuration with its shift and probability 1/Π(2I_k+1).
    pub fn distribution(&self) -> Vec<(f64, f64)> {
        let dims = self.multiplicities();
        let total = self.configurations() as usize;
        let weight = 1.0 / total as f64;
        let mut config = vec![0usize; dims.len()];
        let mut out = Vec::with_capacity(total);
        for _ in 0..total {
            out.push((self.shift(&config), weight));
            // odometer, last site fastest
            for pos in (0..dims.len()).rev() {
                config[pos] += 1;
                if config[pos] < dims[pos] {
                    break;
                }
                config[pos] = 0;
            }
        }
        out
    }
}

pub fn method_tag(order: Order, mode: HyperfineMode) -> &'static str {
    match (order, mode) {
        (Order::First, HyperfineMode::FullTensor) => "perturb1",
        (Order::Second, HyperfineMode::FullTensor) => "perturb2",
        (Order::First, HyperfineMode::AConstants) => "perturb1-a-constants",
        (Order::Second, HyperfineMode::AConstants) => "a-constants",
    }
}

/// One unit-intensity line per nuclear configuration, weight 1/Π(2I_k+1).
pub fn perturb_lines(
    system: &SpinSystem,
    field: &Vec3,
    order: Order,
    mode: HyperfineMode,
) -> Result<LineList> {
    let all: Vec<usize> = (0..system.sites.len()).collect();
    let model = ShiftModel::new(system, &all, field, order, mode)?;
    let nu_e = model.larmor();
    let lines = model
        .distribution()
        .into_iter()
        .map(|(d, w)| Transition::new(nu_e + d, 1.0, w))
        .collect();
    Ok(LineList::new(method_tag(order, mode), *field, lines).sorted())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spincore::isotope::lookup;
    use crate::spincore::{NuclearSite, SpinSite};
    use nalgebra::Rotation3;

    fn system(element: &str, iso: &str, pv: [f64; 3], frame: Rotation3<f64>) -> SpinSystem {
        let site =
            NuclearSite::new(element, 1.0, 1, 0.0, Vec3::from(pv), frame, None, "g").unwrap();
        SpinSystem::new(
            "s",
            vec![SpinSite::new(site, lookup(iso).unwrap().clone()).unwrap()],
        )
    }

    #[test]
    fn decoupled_nucleus_gives_single_frequency() {
        let sys = system("N", "14N", [0.0; 3], Rotation3::identity());
        for order in [Order::First, Order::Second] {
            let lines = perturb_lines(
                &sys,
                &Vec3::new(0.0, 0.0, 42.0),
                order,
                HyperfineMode::FullTensor,
            )
            .unwrap();
            assert_eq!(lines.len(), 3);
            for t in lines.transitions() {
                assert!((t.frequency - 117.568_466_4).abs() < 1e-9);
            }
            assert!((lines.total_weight() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn isotropic_breit_rabi_expansion() {
        let a = 12.0;
        let sys = system(
            "N",
            "14N",
            [a; 3],
            Rotation3::from_euler_angles(0.4, 0.2, -1.0),
        );
        let lines = perturb_lines(
            &sys,
            &Vec3::new(0.0, 0.0, 42.0),
            Order::Second,
            HyperfineMode::FullTensor,
        )
        .unwrap();
        let nu = 117.568_466_4;
        let mut expected: Vec<f64> = [1.0, 0.0, -1.0]
            .iter()
            .map(|m| nu + a * m + a * a / (2.0 * nu) * (2.0 - m * m))
            .collect();
        expected.sort_by(f64::total_cmp);
        for (t, e) in lines.transitions().iter().zip(expected) {
            assert!((t.frequency - e).abs() < 1e-9);
        }
    }

    #[test]
    fn isotropic_modes_agree() {
        let sys = system(
            "B",
            "11B",
            [7.5; 3],
            Rotation3::from_euler_angles(1.0, 0.5, 0.2),
        );
        let b = Vec3::new(0.0, 0.0, 42.0);
        let full = perturb_lines(&sys, &b, Order::Second, HyperfineMode::FullTensor).unwrap();
        let consts = perturb_lines(&sys, &b, Order::Second, HyperfineMode::AConstants).unwrap();
        for (x, y) in full.transitions().iter().zip(consts.transitions()) {
            assert!((x.frequency - y.frequency).abs() < 1e-9);
        }
    }

    #[test]
    fn zero_field_is_an_error() {
        let sys = system("B", "11B", [7.5; 3], Rotation3::identity());
        assert!(matches!(
            perturb_lines(
                &sys,
                &Vec3::zeros(),
                Order::First,
                HyperfineMode::FullTensor
            ),
            Err(Error::ZeroField)
        ));
    }
}
