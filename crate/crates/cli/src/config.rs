use std::path::{Path, PathBuf};

use hbnspin_core::constants::DEFAULT_FIELD_GAUSS;
use hbnspin_core::hamiltonian::DEFAULT_EXACT_CAP;
use hbnspin_core::solvers::DEFAULT_ENUMERATION_THRESHOLD;
use hbnspin_core::spectrum::DEFAULT_LINE_WIDTH_MHZ;
use hbnspin_core::Vec3;
use serde::{Deserialize, Serialize};

use crate::args::{IsotopeMode, Method, RunArgs, Term};
use crate::error::CliError;

/// Run configuration as read from a `--config` document.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct FileConfig {
    defect: Option<String>,
    system: Option<PathBuf>,
    #[serde(alias = "B")]
    field: Option<f64>,
    direction: Option<[f64; 3]>,
    method: Option<Method>,
    exact_shell: Option<Vec<usize>>,
    subset_terms: Option<Vec<Term>>,
    isotopes: Option<IsotopeMode>,
    pattern: Option<String>,
    c13: Option<bool>,
    samples: Option<usize>,
    enumeration_threshold: Option<u128>,
    seed: Option<u64>,
    window: Option<String>,
    shift: Option<f64>,
    line_width: Option<f64>,
    exact_cap: Option<usize>,
    out_spectrum: Option<PathBuf>,
    out_lines: Option<PathBuf>,
}

/// Fully resolved run configuration; serialized verbatim into output headers.
#[derive(Clone, Debug, Serialize)]
pub struct RunConfig {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub defect: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub system: Option<PathBuf>,
    pub field: f64,
    pub direction: [f64; 3],
    pub method: Method,
    pub exact_shell: Vec<usize>,
    pub subset_terms: Vec<Term>,
    pub isotopes: IsotopeMode,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub pattern: Option<String>,
    pub c13: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub samples: Option<usize>,
    pub enumeration_threshold: u128,
    pub seed: u64,
    pub window: String,
    pub shift: f64,
    pub line_width: f64,
    pub exact_cap: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub out_spectrum: Option<PathBuf>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub out_lines: Option<PathBuf>,
}

impl RunConfig {
    pub fn resolve(args: &RunArgs) -> Result<Self, CliError> {
        let file = match &args.config {
            Some(path) => read_config(path)?,
            None => FileConfig::default(),
        };
        let direction = match &args.direction {
            Some(v) if v.len() == 3 => [v[0], v[1], v[2]],
            Some(v) => {
                return Err(CliError::Usage(format!(
                    "--direction needs 3 components, got {}",
                    v.len()
                )))
            }
            None => file.direction.unwrap_or([0.0, 0.0, 1.0]),
        };
        let (defect, system) = match (&args.defect, &args.system) {
            (Some(d), _) => (Some(d.clone()), None),
            (_, Some(s)) => (None, Some(s.clone())),
            _ => (file.defect, file.system),
        };
        if defect.is_none() && system.is_none() {
            return Err(CliError::Usage(
                "either --defect or --system is required".into(),
            ));
        }
        if defect.is_some() && system.is_some() {
            return Err(CliError::Usage(
                "--defect and --system are mutually exclusive".into(),
            ));
        }
        let mut subset_terms = args
            .subset_terms
            .clone()
            .or(file.subset_terms)
            .unwrap_or_else(|| vec![Term::Nzi]);
        subset_terms.sort();
        subset_terms.dedup();
        let cfg = RunConfig {
            defect,
            system,
            field: args.field.or(file.field).unwrap_or(DEFAULT_FIELD_GAUSS),
            direction,
            method: args.method.or(file.method).unwrap_or(Method::Perturb2),
            exact_shell: args
                .exact_shell
                .clone()
                .or(file.exact_shell)
                .unwrap_or_else(|| vec![1]),
            subset_terms,
            isotopes: args
                .isotopes
                .or(file.isotopes)
                .unwrap_or(IsotopeMode::Fixed),
            pattern: args.pattern.clone().or(file.pattern),
            c13: args.c13 || file.c13.unwrap_or(false),
            samples: args.samples.or(file.samples),
            enumeration_threshold: args
                .enumeration_threshold
                .or(file.enumeration_threshold)
                .unwrap_or(DEFAULT_ENUMERATION_THRESHOLD),
            seed: args.seed.or(file.seed).unwrap_or(0),
            window: args
                .window
                .clone()
                .or(file.window)
                .unwrap_or_else(|| "30,inf".into()),
            shift: args.shift.or(file.shift).unwrap_or(0.0),
            line_width: args
                .line_width
                .or(file.line_width)
                .unwrap_or(DEFAULT_LINE_WIDTH_MHZ),
            exact_cap: args
                .exact_cap
                .or(file.exact_cap)
                .unwrap_or(DEFAULT_EXACT_CAP),
            out_spectrum: args.out_spectrum.clone().or(file.out_spectrum),
            out_lines: args.out_lines.clone().or(file.out_lines),
        };
        cfg.validate()?;
        Ok(cfg)
    }

    fn validate(&self) -> Result<(), CliError> {
        if !self.field.is_finite() || self.field < 0.0 {
            return Err(CliError::Usage(format!(
                "field magnitude must be finite and non-negative, got {}",
                self.field
            )));
        }
        if !self.direction.iter().all(|v| v.is_finite()) || Vec3::from(self.direction).norm() == 0.0
        {
            return Err(CliError::Usage(
                "field direction must be a non-zero finite vector".into(),
            ));
        }
        if self.samples == Some(0) {
            return Err(CliError::Usage("--samples must be at least 1".into()));
        }
        if self.line_width.is_nan() || self.line_width <= 0.0 {
            return Err(CliError::Usage("--line-width must be positive".into()));
        }
        if self.pattern.is_some() && self.isotopes == IsotopeMode::Natural {
            return Err(CliError::Usage(
                "--pattern selects one isotopologue and cannot be combined with --isotopes natural"
                    .into(),
            ));
        }
        self.window()?;
        Ok(())
    }

    pub fn field_vector(&self) -> Vec3 {
        Vec3::from(self.direction).normalize() * self.field
    }

    pub fn window(&self) -> Result<(f64, f64), CliError> {
        parse_window(&self.window)
    }

    /// One-line JSON echo for output headers.
    pub fn echo(&self) -> String {
        serde_json::to_string(self).expect("serializable")
    }
}

fn read_config(path: &Path) -> Result<FileConfig, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    serde_json::from_str(&text).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))
}

pub fn parse_window(s: &str) -> Result<(f64, f64), CliError> {
    let bad = || CliError::Usage(format!("invalid window `{s}`; expected LO,HI in MHz"));
    let mut parts = s.split(',').map(str::trim);
    let lo: f64 = parts.next().ok_or_else(bad)?.parse().map_err(|_| bad())?;
    let hi = match parts.next() {
        None => f64::INFINITY,
        Some(h) if h.eq_ignore_ascii_case("inf") => f64::INFINITY,
        Some(h) => h.parse().map_err(|_| bad())?,
    };
    if parts.next().is_some() || lo.partial_cmp(&hi) != Some(std::cmp::Ordering::Less) {
        return Err(bad());
    }
    Ok((lo, hi))
}

/// Parses `SYM=count[,SYM=count]`, e.g. `10B=2` or `11B=4,10B=2`.
pub fn parse_pattern(s: &str) -> Result<Vec<(String, usize)>, CliError> {
    s.split(',')
        .map(|item| {
            let (sym, n) = item.split_once('=').ok_or_else(|| {
                CliError::Usage(format!(
                    "invalid pattern item `{item}`; expected SYMBOL=COUNT"
                ))
            })?;
            let n = n
                .trim()
                .parse()
                .map_err(|_| CliError::Usage(format!("invalid count in pattern item `{item}`")))?;
            Ok((sym.trim().to_string(), n))
        })
        .collect()
}
