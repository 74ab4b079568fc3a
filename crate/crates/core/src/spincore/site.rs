//! Nuclear sites around a defect and the spin systems built from them.

use nalgebra::Rotation3;
use serde::{Deserialize, Serialize};

use super::isotope::{self, Isotope};
use crate::{Error, Result, Tensor3, Vec3};

/// Which principal axis of a site tensor is parallel to the crystal c-axis.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CAxis {
    X,
    Y,
    #[default]
    Z,
}

/// Rotation taking principal-frame components to crystal-frame components.
///
/// The crystal z axis is the c-axis. The principal axis named by `c_axis`
/// points along crystal z; the next axis in cyclic order (x→y→z→x) points
/// along the in-plane bond from the paramagnetic atom to the site, and the
/// remaining axis completes a right-handed frame.
pub fn principal_frame(bond_azimuth: f64, c_axis: CAxis) -> Rotation3<f64> {
    let c = Vec3::z();
    let bond = Vec3::new(bond_azimuth.cos(), bond_azimuth.sin(), 0.0);
    let third = c.cross(&bond);
    // columns are the principal axes expressed in crystal coordinates
    let (x, y, z) = match c_axis {
        CAxis::Z => (bond.cross(&c), bond, c),
        CAxis::Y => (third, c, bond),
        CAxis::X => (c, bond, third),
    };
    Rotation3::from_matrix_unchecked(Tensor3::from_columns(&[x, y, z]))
}

fn check_rotation(r: &Tensor3) -> Result<()> {
    let err = (r.transpose() * r - Tensor3::identity()).abs().max();
    if err > 1e-10 || (r.determinant() - 1.0).abs() > 1e-10 {
        return Err(Error::InvalidTensor(format!(
            "frame is not a proper rotation (orthonormality error {err:e}, det {})",
            r.determinant()
        )));
    }
    Ok(())
}

fn check_efg(v: &Tensor3) -> Result<()> {
    let scale = v.abs().max().max(1e-300);
    if (v - v.transpose()).abs().max() > 1e-6 * scale {
        return Err(Error::InvalidTensor("EFG tensor is not symmetric".into()));
    }
    if v.trace().abs() > 1e-6 * scale {
        return Err(Error::InvalidTensor(format!(
            "EFG tensor is not traceless (trace {})",
            v.trace()
        )));
    }
    Ok(())
}

/// A lattice site near the defect with its hyperfine and EFG data.
///
/// Hyperfine principal values refer to `reference`, the isotope the data was
/// computed for; other isotopes of the element are obtained by g_n scaling.
#[derive(Clone, Debug, PartialEq)]
pub struct NuclearSite {
    pub element: String,
    pub reference: Isotope,
    /// Distance from the paramagnetic atom in ideal-lattice units.
    pub shell_distance: f64,
    /// Index of the shell among the record's distinct distances (0 = central atom).
    pub shell_index: usize,
    /// In-plane bond azimuth, radians.
    pub bond_azimuth: f64,
    /// (Axx, Ayy, Azz), MHz.
    pub principal_values: Vec3,
    pub frame: Rotation3<f64>,
    /// Crystal-frame EFG, V/Å².
    pub efg: Option<Tensor3>,
    /// Isotropic core-polarization contribution A_1c included in the principal values, MHz.
    pub core_contribution: Option<f64>,
    pub group_id: String,
}

impl NuclearSite {
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        element: &str,
        shell_distance: f64,
        shell_index: usize,
        bond_azimuth: f64,
        principal_values: Vec3,
        frame: Rotation3<f64>,
        efg: Option<Tensor3>,
        group_id: impl Into<String>,
    ) -> Result<Self> {
        check_rotation(frame.matrix())?;
        if let Some(v) = &efg {
            check_efg(v)?;
        }
        if !principal_values.iter().all(|a| a.is_finite()) {
            return Err(Error::InvalidTensor("non-finite hyperfine value".into()));
        }
        Ok(Self {
            element: element.to_string(),
            reference: isotope::reference_isotope(element)?.clone(),
            shell_distance,
            shell_index,
            bond_azimuth,
            principal_values,
            frame,
            efg,
            core_contribution: None,
            group_id: group_id.into(),
        })
    }

    /// Hyperfine tensor of the reference isotope in the crystal frame, MHz.
    pub fn hyperfine_crystal(&self) -> Tensor3 {
        let r = self.frame.matrix();
        r * Tensor3::from_diagonal(&self.principal_values) * r.transpose()
    }

    /// Principal values with the isotropic core contribution removed.
    pub fn principal_values_without_core(&self) -> Vec3 {
        let core = self.core_contribution.unwrap_or(0.0);
        self.principal_values.map(|a| a - core)
    }
}

/// A site together with the isotope occupying it.
#[derive(Clone, Debug, PartialEq)]
pub struct SpinSite {
    pub site: NuclearSite,
    pub isotope: Isotope,
}

impl SpinSite {
    pub fn new(site: NuclearSite, isotope: Isotope) -> Result<Self> {
        if isotope.element != site.element {
            return Err(Error::CrossElementRescale {
                from: site.reference.symbol.to_string(),
                to: isotope.symbol.to_string(),
            });
        }
        Ok(Self { site, isotope })
    }

    fn scale(&self) -> f64 {
        self.isotope.g_n / self.site.reference.g_n
    }

    /// Crystal-frame hyperfine tensor for the occupying isotope, MHz.
    pub fn hyperfine(&self) -> Tensor3 {
        self.site.hyperfine_crystal() * self.scale()
    }

    /// (Axx, Ayy, Azz) for the occupying isotope, MHz.
    pub fn principal_values(&self) -> Vec3 {
        self.site.principal_values * self.scale()
    }
}

/// One S = 1/2 electron coupled to a list of nuclear sites.
#[derive(Clone, Debug, PartialEq)]
pub struct SpinSystem {
    pub label: String,
    pub g_tensor: Tensor3,
    pub sites: Vec<SpinSite>,
}

impl SpinSystem {
    pub fn new(label: impl Into<String>, sites: Vec<SpinSite>) -> Self {
        Self {
            label: label.into(),
            g_tensor: Tensor3::identity() * 2.0,
            sites,
        }
    }

    /// A bare electron with g = 2.
    pub fn electron_only(label: impl Into<String>) -> Self {
        Self::new(label, Vec::new())
    }

    /// Π_k (2I_k + 1)
    pub fn nuclear_configurations(&self) -> u128 {
        self.sites
            .iter()
            .map(|s| s.isotope.spin.multiplicity() as u128)
            .fold(1u128, |acc, d| acc.saturating_mul(d))
    }

    /// 2·Π_k (2I_k + 1)
    pub fn hilbert_dimension(&self) -> u128 {
        self.nuclear_configurations().saturating_mul(2)
    }

    /// The same system restricted to the given site indices, in the given order.
    pub fn subsystem(&self, indices: &[usize]) -> Self {
        Self {
            label: self.label.clone(),
            g_tensor: self.g_tensor,
            sites: indices.iter().map(|&i| self.sites[i].clone()).collect(),
        }
    }

    /// Sites whose isotope carries a nuclear spin.
    pub fn magnetic_site_indices(&self) -> Vec<usize> {
        (0..self.sites.len())
            .filter(|&i| self.sites[i].isotope.is_magnetic())
            .collect()
    }

    /// Applies a rotation to every site frame, EFG and the g-tensor.
    pub fn rotated(&self, rotation: &Rotation3<f64>) -> Self {
        let r = rotation.matrix();
        let mut out = self.clone();
        out.g_tensor = r * self.g_tensor * r.transpose();
        for s in &mut out.sites {
            s.site.frame = rotation * s.site.frame;
            s.site.efg = s.site.efg.map(|v| r * v * r.transpose());
        }
        out
    }
}
