//! Charge transition levels and complex binding energies from total energies.
//!
//! Levels are referenced to the valence band maximum:
//!
//! ```text
//! ε(+1|0) = E⁰ − E⁺¹ − Δ₊₁
//! ε(0|−1) = E⁻¹ − E⁰ + Δ₋₁
//! ```
//!
//! where Δ_q is an externally computed charge correction (dropped for
//! uncorrected levels). Records may carry an explicit ε_VBM, which is then
//! subtracted.

use std::fmt;
use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::spectrum::format_sig;
use crate::spincore::constants::HBN_INDIRECT_GAP_EV;
use crate::{Error, Result};

/// Flag value marking a record whose charge correction is unreliable.
pub const UNCLEAR_FLAG: &str = "unclear";

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EnergyRecord {
    pub label: String,
    #[serde(rename = "q")]
    pub charge: i32,
    /// Total energy E₀^q, eV.
    #[serde(rename = "E_eV")]
    pub total_energy: f64,
    /// Charge correction Δ_q, eV. Zero for neutral states.
    #[serde(rename = "delta_eV", default)]
    pub correction: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub flag: Option<String>,
    /// Explicit valence-band maximum, eV, when energies are not pre-aligned.
    #[serde(rename = "vbm_eV", default, skip_serializing_if = "Option::is_none")]
    pub vbm: Option<f64>,
}

impl EnergyRecord {
    pub fn new(label: impl Into<String>, charge: i32, total_energy: f64, correction: f64) -> Self {
        Self {
            label: label.into(),
            charge,
            total_energy,
            correction,
            flag: None,
            vbm: None,
        }
    }

    pub fn with_flag(mut self, flag: impl Into<String>) -> Self {
        self.flag = Some(flag.into());
        self
    }

    fn validate(&self) -> Result<()> {
        if !self.total_energy.is_finite() || !self.correction.is_finite() {
            return Err(Error::Energetics(format!(
                "{}: non-finite energy",
                self.label
            )));
        }
        if self.charge == 0 && self.correction != 0.0 {
            return Err(Error::Energetics(format!(
                "{}: neutral state must have zero correction",
                self.label
            )));
        }
        if self.correction < 0.0 {
            return Err(Error::Energetics(format!(
                "{}: negative charge correction",
                self.label
            )));
        }
        Ok(())
    }

    fn is_unclear(&self) -> bool {
        self.flag
            .as_deref()
            .is_some_and(|f| f.eq_ignore_ascii_case(UNCLEAR_FLAG))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Transition {
    /// (+1|0)
    PlusZero,
    /// (0|−1)
    ZeroMinus,
}

impl fmt::Display for Transition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Transition::PlusZero => "(+1|0)",
            Transition::ZeroMinus => "(0|-1)",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum LevelFlag {
    None,
    /// Above the conduction band minimum.
    AboveCbm,
    /// Correction deemed unreliable; no number is reported.
    Unclear,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CtlResult {
    pub label: String,
    pub transition: Transition,
    /// Level above the VBM, eV. `None` when the level is flagged unclear.
    pub level: Option<f64>,
    pub corrected: bool,
    pub flag: LevelFlag,
    pub band_gap: f64,
}

pub fn compute_ctl(
    neutral: &EnergyRecord,
    charged: &EnergyRecord,
    corrected: bool,
) -> Result<CtlResult> {
    neutral.validate()?;
    charged.validate()?;
    if neutral.label != charged.label {
        return Err(Error::Energetics(format!(
            "mismatched labels `{}` and `{}`",
            neutral.label, charged.label
        )));
    }
    if neutral.charge != 0 {
        return Err(Error::Energetics(format!(
            "{}: first record must be neutral",
            neutral.label
        )));
    }
    let (transition, raw, correction) = match charged.charge {
        1 => (
            Transition::PlusZero,
            neutral.total_energy - charged.total_energy,
            -charged.correction,
        ),
        -1 => (
            Transition::ZeroMinus,
            charged.total_energy - neutral.total_energy,
            charged.correction,
        ),
        q => return Err(Error::Energetics(format!("unsupported charge state {q}"))),
    };
    let vbm = match (neutral.vbm, charged.vbm) {
        (Some(a), Some(b)) if (a - b).abs() > 1e-12 => {
            return Err(Error::Energetics(format!(
                "{}: inconsistent VBM values",
                neutral.label
            )));
        }
        (Some(v), _) | (_, Some(v)) => v,
        _ => 0.0,
    };
    let unclear = corrected && charged.is_unclear();
    let level = if unclear {
        None
    } else {
        Some(raw + if corrected { correction } else { 0.0 } - vbm)
    };
    let flag = match level {
        None => LevelFlag::Unclear,
        Some(e) if e > HBN_INDIRECT_GAP_EV => LevelFlag::AboveCbm,
        Some(_) => LevelFlag::None,
    };
    Ok(CtlResult {
        label: neutral.label.clone(),
        transition,
        level,
        corrected,
        flag,
        band_gap: HBN_INDIRECT_GAP_EV,
    })
}

/// E_b = E(complex) + (m−1)·E(pristine) − Σ E(constituent); negative values
/// favor complex formation.
pub fn binding_energy(
    complex: &EnergyRecord,
    constituents: &[EnergyRecord],
    pristine: &EnergyRecord,
    multiplicity: usize,
) -> Result<f64> {
    for r in std::iter::once(complex)
        .chain(constituents)
        .chain(std::iter::once(pristine))
    {
        r.validate()?;
        if r.charge != 0 {
            return Err(Error::Energetics(format!(
                "binding energies need neutral records; `{}` has charge {}",
                r.label, r.charge
            )));
        }
    }
    if multiplicity == 0 {
        return Err(Error::Energetics("multiplicity must be at least 1".into()));
    }
    let sum: f64 = constituents.iter().map(|r| r.total_energy).sum();
    Ok(complex.total_energy + (multiplicity as f64 - 1.0) * pristine.total_energy - sum)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CtlDiagram {
    /// Defects in first-appearance order, each with up to four levels.
    pub rows: Vec<CtlResult>,
    pub warnings: Vec<String>,
    pub vbm: f64,
    pub cbm: f64,
}

/// Groups records by label and computes both transitions, corrected and
/// uncorrected. A missing charge state omits that transition with a warning.
pub fn ctl_diagram(records: &[EnergyRecord]) -> Result<CtlDiagram> {
    let mut labels: Vec<&str> = Vec::new();
    for r in records {
        if !labels.contains(&r.label.as_str()) {
            labels.push(&r.label);
        }
    }
    let mut rows = Vec::new();
    let mut warnings = Vec::new();
    for label in labels {
        let find = |q: i32| records.iter().find(|r| r.label == label && r.charge == q);
        let Some(neutral) = find(0) else {
            warnings.push(format!(
                "{label}: no neutral record; both transitions omitted"
            ));
            continue;
        };
        for q in [1, -1] {
            match find(q) {
                Some(charged) => {
                    for corrected in [true, false] {
                        rows.push(compute_ctl(neutral, charged, corrected)?);
                    }
                }
                None => warnings.push(format!(
                    "{label}: no q={q:+} record; {} omitted",
                    if q == 1 {
                        Transition::PlusZero
                    } else {
                        Transition::ZeroMinus
                    }
                )),
            }
        }
    }
    if rows.is_empty() {
        warnings.push("no complete charge-state pair; diagram is empty".into());
    }
    Ok(CtlDiagram {
        rows,
        warnings,
        vbm: 0.0,
        cbm: HBN_INDIRECT_GAP_EV,
    })
}

impl CtlDiagram {
    pub fn get(&self, label: &str, transition: Transition, corrected: bool) -> Option<&CtlResult> {
        self.rows
            .iter()
            .find(|r| r.label == label && r.transition == transition && r.corrected == corrected)
    }

    /// Plot-ready delimited text: one row per level plus VBM/CBM reference rows.
    pub fn write_delimited<W: Write + ?Sized>(&self, w: &mut W) -> std::io::Result<()> {
        writeln!(w, "defect,transition,corrected,level_eV,flag")?;
        writeln!(w, "VBM,reference,,{},", format_sig(self.vbm, 9))?;
        writeln!(w, "CBM,reference,,{},", format_sig(self.cbm, 9))?;
        for r in &self.rows {
            let level = r
                .level
                .map(|v| format!("{v:.2}"))
                .unwrap_or_else(|| UNCLEAR_FLAG.into());
            let flag = match r.flag {
                LevelFlag::None => "",
                LevelFlag::AboveCbm => "above-cbm",
                LevelFlag::Unclear => UNCLEAR_FLAG,
            };
            writeln!(
                w,
                "{},{},{},{},{}",
                r.label, r.transition, r.corrected, level, flag
            )?;
        }
        Ok(())
    }
}

fn parse_field<T: std::str::FromStr>(s: &str, line: usize, what: &str) -> Result<T> {
    s.trim().parse().map_err(|_| Error::RecordParse {
        line,
        message: format!("cannot parse {what} from `{}`", s.trim()),
    })
}

/// Parses `label,q,E_eV,delta_eV[,flag[,vbm_eV]]` lines. Blank lines, `#`
/// comments and a header line starting with `label` are skipped.
pub fn parse_energy_records(text: &str) -> Result<Vec<EnergyRecord>> {
    let mut out = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.trim();
        if content.is_empty() || content.starts_with('#') || content.starts_with("label,") {
            continue;
        }
        let cols: Vec<&str> = content.split(',').map(str::trim).collect();
        if cols.len() < 3 || cols.len() > 6 {
            return Err(Error::RecordParse {
                line,
                message: format!(
                    "expected 3 to 6 comma-separated fields, found {}",
                    cols.len()
                ),
            });
        }
        if cols[0].is_empty() {
            return Err(Error::RecordParse {
                line,
                message: "empty label".into(),
            });
        }
        let correction = match cols.get(3) {
            Some(s) if !s.is_empty() => parse_field(s, line, "delta_eV")?,
            _ => 0.0,
        };
        let record = EnergyRecord {
            label: cols[0].to_string(),
            charge: parse_field(cols[1], line, "charge")?,
            total_energy: parse_field(cols[2], line, "E_eV")?,
            correction,
            flag: cols.get(4).filter(|s| !s.is_empty()).map(|s| s.to_string()),
            vbm: match cols.get(5) {
                Some(s) if !s.is_empty() => Some(parse_field(s, line, "vbm_eV")?),
                _ => None,
            },
        };
        record.validate().map_err(|e| Error::RecordParse {
            line,
            message: e.to_string(),
        })?;
        out.push(record);
    }
    Ok(out)
}

/// Parses a JSON array of records with keys label, q, E_eV, delta_eV.
pub fn parse_energy_records_json(text: &str) -> Result<Vec<EnergyRecord>> {
    let records: Vec<EnergyRecord> =
        serde_json::from_str(text).map_err(|e| Error::RecordParse {
            line: e.line(),
            message: e.to_string(),
        })?;
    for r in &records {
        r.validate()?;
    }
    Ok(records)
}

/// Reference total energies reproducing the tabulated carbon-defect levels.
pub fn bundled_ctl_records() -> Vec<EnergyRecord> {
    parse_energy_records(include_str!("../data/ctl_records.csv"))
        .expect("bundled records are valid")
}

/// One complex for [`binding_energy`].
#[derive(Clone, Debug, PartialEq)]
pub struct BindingInput {
    pub complex: EnergyRecord,
    pub constituents: Vec<EnergyRecord>,
    pub pristine: EnergyRecord,
}

impl BindingInput {
    pub fn binding_energy(&self) -> Result<f64> {
        binding_energy(
            &self.complex,
            &self.constituents,
            &self.pristine,
            self.constituents.len(),
        )
    }
}

/// Parses `complex,role,q,E_eV` lines, role ∈ {complex, constituent,
/// pristine}. Complexes appear in first-appearance order.
pub fn parse_binding_inputs(text: &str) -> Result<Vec<BindingInput>> {
    struct Partial {
        name: String,
        complex: Option<EnergyRecord>,
        constituents: Vec<EnergyRecord>,
        pristine: Option<EnergyRecord>,
    }
    let mut partial: Vec<Partial> = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.trim();
        if content.is_empty() || content.starts_with('#') || content.starts_with("complex,role") {
            continue;
        }
        let cols: Vec<&str> = content.split(',').map(str::trim).collect();
        if cols.len() != 4 {
            return Err(Error::RecordParse {
                line,
                message: format!("expected complex,role,q,E_eV; found {} fields", cols.len()),
            });
        }
        let record = EnergyRecord::new(
            cols[0],
            parse_field(cols[2], line, "charge")?,
            parse_field(cols[3], line, "E_eV")?,
            0.0,
        );
        let pos = match partial.iter().position(|p| p.name == cols[0]) {
            Some(p) => p,
            None => {
                partial.push(Partial {
                    name: cols[0].to_string(),
                    complex: None,
                    constituents: Vec::new(),
                    pristine: None,
                });
                partial.len() - 1
            }
        };
        let entry = &mut partial[pos];
        match cols[1] {
            "complex" => entry.complex = Some(record),
            "constituent" => entry.constituents.push(record),
            "pristine" => entry.pristine = Some(record),
            other => {
                return Err(Error::RecordParse {
                    line,
                    message: format!("unknown role `{other}`"),
                })
            }
        }
    }
    partial
        .into_iter()
        .map(|p| {
            let missing = |what: &str| Error::Energetics(format!("{}: no {what} record", p.name));
            if p.constituents.is_empty() {
                return Err(missing("constituent"));
            }
            Ok(BindingInput {
                complex: p.complex.clone().ok_or_else(|| missing("complex"))?,
                pristine: p.pristine.clone().ok_or_else(|| missing("pristine"))?,
                constituents: p.constituents,
            })
        })
        .collect()
}

pub fn bundled_binding_inputs() -> Vec<BindingInput> {
    parse_binding_inputs(include_str!("../data/binding_records.csv"))
        .expect("bundled records are valid")
}
