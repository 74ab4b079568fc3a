//! The defect dataset: per-shell hyperfine tables and ZPL metadata.
//!
//! The on-disk format is JSON:
//!
//! ```text
//! { "version": "...",
//!   "defects": [ { "label": "CB0", "zpl_eV": 1.695, "notes": "...",
//!                  "sites": [ { "element": "N", "count": 3, "shell": 1,
//!                               "Axx": -9.0, "Ayy": -5.1, "Azz": -9.0,
//!                               "c_axis": "y", "efg": [xx, yy, zz, xy, xz, yz] } ] } ] }
//! ```
//!
//! A shell entry with `count` n expands into n symmetry-equivalent sites at
//! azimuths `azimuth_offset_deg + 360°·k/n`. Principal values are placed with
//! [`principal_frame`]; an explicit `tensor` (nine crystal-frame components,
//! row-major) bypasses the convention. EFG components are given in the
//! principal frame of the site.

use std::collections::BTreeMap;
use std::path::Path;

use nalgebra::{Rotation3, SymmetricEigen};
use serde::{Deserialize, Serialize};

use super::isotope::{self, Isotope};
use super::site::{principal_frame, CAxis, NuclearSite, SpinSite, SpinSystem};
use crate::{Error, Result, Tensor3, Vec3};

const BUNDLED_DATASET: &str = include_str!("../../data/defects.json");

/// Name of the dataset file inside a data directory.
pub const DATASET_FILE: &str = "defects.json";

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DatasetDocument {
    pub version: String,
    pub defects: Vec<DefectEntry>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DefectEntry {
    pub label: String,
    #[serde(rename = "zpl_eV", default, skip_serializing_if = "Option::is_none")]
    pub zpl_ev: Option<f64>,
    #[serde(default, skip_serializing_if = "String::is_empty")]
    pub notes: String,
    pub sites: Vec<ShellEntry>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ShellEntry {
    pub element: String,
    pub count: usize,
    pub shell: f64,
    #[serde(rename = "Axx")]
    pub axx: f64,
    #[serde(rename = "Ayy")]
    pub ayy: f64,
    #[serde(rename = "Azz")]
    pub azz: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub core_contribution: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub efg: Option<[f64; 6]>,
    #[serde(default)]
    pub c_axis: CAxis,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub azimuth_offset_deg: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tensor: Option<[f64; 9]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub group: Option<String>,
}

/// A defect with its expanded site list.
#[derive(Clone, Debug, PartialEq)]
pub struct DefectRecord {
    pub label: String,
    /// Zero-phonon-line energy, eV. Metadata only.
    pub zpl_energy: Option<f64>,
    pub sites: Vec<NuclearSite>,
    pub notes: String,
}

/// A parsed dataset.
#[derive(Clone, Debug)]
pub struct Dataset {
    pub version: String,
    pub records: Vec<DefectRecord>,
}

impl Dataset {
    pub fn get(&self, label: &str) -> Result<&DefectRecord> {
        self.records
            .iter()
            .find(|r| r.label.eq_ignore_ascii_case(label))
            .ok_or_else(|| Error::UnknownDefect(label.to_string()))
    }

    pub fn labels(&self) -> Vec<&str> {
        self.records.iter().map(|r| r.label.as_str()).collect()
    }
}

/// Raw text of the dataset compiled into the crate.
pub fn bundled_dataset_json() -> &'static str {
    BUNDLED_DATASET
}

pub fn bundled_dataset() -> Dataset {
    parse_dataset(BUNDLED_DATASET).expect("bundled dataset is valid")
}

pub fn load_defect_dataset(path: impl AsRef<Path>) -> Result<Dataset> {
    let text = std::fs::read_to_string(path)?;
    parse_dataset(&text)
}

pub fn parse_dataset(text: &str) -> Result<Dataset> {
    let doc: DatasetDocument = serde_json::from_str(text).map_err(|e| Error::DatasetParse {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    let records = doc
        .defects
        .iter()
        .map(expand_entry)
        .collect::<Result<Vec<_>>>()?;
    Ok(Dataset {
        version: doc.version,
        records,
    })
}

fn efg_from_components(c: &[f64; 6]) -> Tensor3 {
    let [xx, yy, zz, xy, xz, yz] = *c;
    Tensor3::new(xx, xy, xz, xy, yy, yz, xz, yz, zz)
}

/// Builds a frame and principal values from an explicit crystal-frame tensor.
fn frame_from_tensor(t: &[f64; 9]) -> Result<(Vec3, Rotation3<f64>)> {
    let m = Tensor3::from_row_slice(t);
    if (m - m.transpose()).abs().max() > 1e-9 * m.abs().max().max(1.0) {
        return Err(Error::InvalidTensor(
            "explicit hyperfine tensor must be symmetric".into(),
        ));
    }
    let eig = SymmetricEigen::new(m);
    let mut vecs = eig.eigenvectors;
    if vecs.determinant() < 0.0 {
        vecs.column_mut(0).neg_mut();
    }
    Ok((eig.eigenvalues, Rotation3::from_matrix_unchecked(vecs)))
}

fn expand_entry(entry: &DefectEntry) -> Result<DefectRecord> {
    if let Some(z) = entry.zpl_ev {
        if z.is_nan() || z <= 0.0 {
            return Err(Error::Dataset(format!(
                "{}: zpl_eV must be positive",
                entry.label
            )));
        }
    }
    let mut distances: Vec<f64> = entry.sites.iter().map(|s| s.shell).collect();
    distances.sort_by(f64::total_cmp);
    distances.dedup_by(|a, b| (*a - *b).abs() < 1e-6);

    let mut sites = Vec::new();
    for shell in &entry.sites {
        isotope::reference_isotope(&shell.element)?;
        if shell.count == 0 {
            return Err(Error::Dataset(format!(
                "{}: shell with count 0",
                entry.label
            )));
        }
        let shell_index = distances
            .iter()
            .position(|d| (d - shell.shell).abs() < 1e-6)
            .expect("distance was collected above");
        let group = shell
            .group
            .clone()
            .unwrap_or_else(|| format!("{}-shell{}", shell.element, shell_index));
        let offset = shell.azimuth_offset_deg.unwrap_or(0.0).to_radians();
        let explicit = shell.tensor.as_ref().map(frame_from_tensor).transpose()?;
        for k in 0..shell.count {
            let azimuth = offset + std::f64::consts::TAU * k as f64 / shell.count as f64;
            let (pv, frame) = match explicit {
                // explicit tensors describe the first site; the rest follow by rotation about c
                Some((pv, frame)) => {
                    let about_c = Rotation3::from_axis_angle(&Vec3::z_axis(), azimuth - offset);
                    (pv, about_c * frame)
                }
                None => (
                    Vec3::new(shell.axx, shell.ayy, shell.azz),
                    principal_frame(azimuth, shell.c_axis),
                ),
            };
            let efg = shell.efg.as_ref().map(|c| {
                let r = frame.matrix();
                r * efg_from_components(c) * r.transpose()
            });
            let mut site = NuclearSite::new(
                &shell.element,
                shell.shell,
                shell_index,
                azimuth,
                pv,
                frame,
                efg,
                group.clone(),
            )?;
            site.core_contribution = shell.core_contribution;
            sites.push(site);
        }
    }
    Ok(DefectRecord {
        label: entry.label.clone(),
        zpl_energy: entry.zpl_ev,
        sites,
        notes: entry.notes.clone(),
    })
}

/// Element → isotope assignment used to turn a record into a spin system.
#[derive(Clone, Debug, Default)]
pub struct IsotopeChoice {
    per_element: BTreeMap<String, &'static Isotope>,
    per_site: BTreeMap<usize, &'static Isotope>,
}

impl IsotopeChoice {
    /// 11B, 14N and spinless 12C.
    pub fn natural_majority() -> Self {
        Self::default()
    }

    pub fn with_element(mut self, element: &str, iso: &'static Isotope) -> Self {
        self.per_element.insert(element.to_string(), iso);
        self
    }

    pub fn with_site(mut self, index: usize, iso: &'static Isotope) -> Self {
        self.per_site.insert(index, iso);
        self
    }

    fn resolve(&self, index: usize, element: &str) -> Result<&'static Isotope> {
        if let Some(iso) = self.per_site.get(&index) {
            return Ok(iso);
        }
        if let Some(iso) = self.per_element.get(element) {
            return Ok(iso);
        }
        isotope::default_isotope(element)
    }
}

impl DefectRecord {
    /// Spin system with every site occupied according to `choice`. Spinless
    /// sites are kept so site indices match the record.
    pub fn spin_system(&self, choice: &IsotopeChoice) -> Result<SpinSystem> {
        let sites = self
            .sites
            .iter()
            .enumerate()
            .map(|(i, site)| SpinSite::new(site.clone(), choice.resolve(i, &site.element)?.clone()))
            .collect::<Result<Vec<_>>>()?;
        Ok(SpinSystem::new(self.label.clone(), sites))
    }

    /// Index of the central atom (shell 0), if the record lists it.
    pub fn central_site(&self) -> Option<usize> {
        self.sites.iter().position(|s| s.shell_index == 0)
    }
}

/// Serialized form of a [`SpinSystem`].
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpinSystemDocument {
    pub label: String,
    pub g_tensor: [f64; 9],
    pub sites: Vec<SpinSiteDocument>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpinSiteDocument {
    pub element: String,
    pub isotope: String,
    pub shell: f64,
    pub shell_index: usize,
    pub azimuth: f64,
    pub principal_values: [f64; 3],
    pub frame: [f64; 9],
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub efg: Option<[f64; 9]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub core_contribution: Option<f64>,
    pub group: String,
}

fn row_major(m: &Tensor3) -> [f64; 9] {
    let mut out = [0.0; 9];
    for r in 0..3 {
        for c in 0..3 {
            out[3 * r + c] = m[(r, c)];
        }
    }
    out
}

impl From<&SpinSystem> for SpinSystemDocument {
    fn from(sys: &SpinSystem) -> Self {
        Self {
            label: sys.label.clone(),
            g_tensor: row_major(&sys.g_tensor),
            sites: sys
                .sites
                .iter()
                .map(|s| SpinSiteDocument {
                    element: s.site.element.clone(),
                    isotope: s.isotope.symbol.to_string(),
                    shell: s.site.shell_distance,
                    shell_index: s.site.shell_index,
                    azimuth: s.site.bond_azimuth,
                    principal_values: s.site.principal_values.into(),
                    frame: row_major(s.site.frame.matrix()),
                    efg: s.site.efg.as_ref().map(row_major),
                    core_contribution: s.site.core_contribution,
                    group: s.site.group_id.clone(),
                })
                .collect(),
        }
    }
}

impl TryFrom<SpinSystemDocument> for SpinSystem {
    type Error = Error;

    fn try_from(doc: SpinSystemDocument) -> Result<Self> {
        let sites = doc
            .sites
            .into_iter()
            .map(|s| {
                let frame = Rotation3::from_matrix_unchecked(Tensor3::from_row_slice(&s.frame));
                let mut site = NuclearSite::new(
                    &s.element,
                    s.shell,
                    s.shell_index,
                    s.azimuth,
                    Vec3::from(s.principal_values),
                    frame,
                    s.efg.map(|e| Tensor3::from_row_slice(&e)),
                    s.group,
                )?;
                site.core_contribution = s.core_contribution;
                SpinSite::new(site, isotope::lookup(&s.isotope)?.clone())
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(SpinSystem {
            label: doc.label,
            g_tensor: Tensor3::from_row_slice(&doc.g_tensor),
            sites,
        })
    }
}

impl SpinSystem {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&SpinSystemDocument::from(self)).expect("serializable")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let doc: SpinSystemDocument =
            serde_json::from_str(text).map_err(|e| Error::DatasetParse {
                line: e.line(),
                column: e.column(),
                message: e.to_string(),
            })?;
        doc.try_into()
    }
}
