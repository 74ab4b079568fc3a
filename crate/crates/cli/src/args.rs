use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

#[derive(Debug, Parser)]
#[command(
    name = "hbnspin",
    version,
    about = "ODMR line statistics and defect energetics for carbon defects in hBN"
)]
pub struct Cli {
    /// Directory holding defects.json; overrides the bundled dataset.
    #[arg(long, global = true, env = "HBNSPIN_DATA_DIR")]
    pub data_dir: Option<PathBuf>,

    /// Table style on stdout.
    #[arg(long, global = true, value_enum, default_value_t = Format::Human)]
    pub format: Format,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Line statistics, spectrum and line list for one defect and method.
    Odmr(RunArgs),
    /// Every solver side by side on one defect.
    CompareMethods(RunArgs),
    /// Per-isotopologue statistics over the boron patterns.
    Isotopes(RunArgs),
    /// Charge transition levels from total-energy records.
    Ctl(CtlArgs),
    /// Binding energies of defect complexes.
    Binding(BindingArgs),
    /// Write the defect dataset, or one defect's spin system, as JSON.
    ExportDataset(ExportArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Human,
    Csv,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    Ezi,
    Perturb1,
    Perturb2,
    AConstants,
    Exact,
    Hybrid,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Term {
    Nzi,
    Nqi,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum IsotopeMode {
    /// Majority isotope on every site.
    Fixed,
    /// Probability-weighted sum over all boron patterns.
    Natural,
}

/// Options shared by odmr, compare-methods and isotopes. Every value may also
/// come from the `--config` JSON document; flags win.
#[derive(Clone, Debug, Default, Args)]
pub struct RunArgs {
    /// JSON run configuration with the same keys as the flags (snake_case).
    #[arg(long)]
    pub config: Option<PathBuf>,

    /// Defect label from the dataset, e.g. CB0 or CN0.
    #[arg(long)]
    pub defect: Option<String>,

    /// Spin-system JSON file used instead of a dataset defect.
    #[arg(long, conflicts_with = "defect")]
    pub system: Option<PathBuf>,

    /// Field magnitude, Gauss.
    #[arg(long = "B", value_name = "GAUSS")]
    pub field: Option<f64>,

    /// Field direction in the crystal frame (normalized internally).
    #[arg(
        long,
        value_delimiter = ',',
        value_name = "X,Y,Z",
        allow_hyphen_values = true
    )]
    pub direction: Option<Vec<f64>>,

    /// Solver; perturb2 when omitted.
    #[arg(long, value_enum)]
    pub method: Option<Method>,

    /// Shells treated exactly by the hybrid solver.
    #[arg(long = "exact-shell", value_delimiter = ',', value_name = "SHELL")]
    pub exact_shell: Option<Vec<usize>>,

    /// Extra terms in the exact block (hybrid and exact methods).
    #[arg(long = "subset-terms", value_enum, value_delimiter = ',')]
    pub subset_terms: Option<Vec<Term>>,

    #[arg(long, value_enum)]
    pub isotopes: Option<IsotopeMode>,

    /// Single boron pattern, e.g. `10B=2`.
    #[arg(long)]
    pub pattern: Option<String>,

    /// Put 13C on the central carbon site.
    #[arg(long)]
    pub c13: bool,

    /// Monte-Carlo sample count for perturbative methods.
    #[arg(long)]
    pub samples: Option<usize>,

    /// Configuration count above which perturbative methods sample.
    #[arg(long)]
    pub enumeration_threshold: Option<u128>,

    /// Seed for Monte-Carlo sampling.
    #[arg(long)]
    pub seed: Option<u64>,

    /// Analysis window `LO,HI` in MHz; `HI` may be `inf`.
    #[arg(long)]
    pub window: Option<String>,

    /// Constant frequency shift applied to all lines, MHz.
    #[arg(long, allow_negative_numbers = true)]
    pub shift: Option<f64>,

    /// Per-line Gaussian FWHM of the exported spectrum, MHz.
    #[arg(long)]
    pub line_width: Option<f64>,

    /// Largest Hilbert-space dimension for dense diagonalization.
    #[arg(long)]
    pub exact_cap: Option<usize>,

    #[arg(long)]
    pub out_spectrum: Option<PathBuf>,

    #[arg(long)]
    pub out_lines: Option<PathBuf>,
}

#[derive(Clone, Debug, Args)]
pub struct CtlArgs {
    /// Records as CSV (`label,q,E_eV,delta_eV[,flag[,vbm_eV]]`) or JSON; the
    /// bundled reference set when omitted.
    pub input: Option<PathBuf>,

    /// Write plot-ready diagram data here.
    #[arg(long)]
    pub diagram: Option<PathBuf>,
}

#[derive(Clone, Debug, Args)]
pub struct BindingArgs {
    /// Records as CSV (`complex,role,q,E_eV`); the bundled reference set when omitted.
    pub input: Option<PathBuf>,
}

#[derive(Clone, Debug, Args)]
pub struct ExportArgs {
    /// Export this defect's spin system (majority isotopes) instead of the dataset.
    #[arg(long)]
    pub defect: Option<String>,

    #[arg(long)]
    pub out: Option<PathBuf>,
}
