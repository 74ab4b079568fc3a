use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid spin quantum number {0}: 2I must be a non-negative integer")]
    InvalidSpin(f64),

    #[error("unknown isotope `{0}`")]
    UnknownIsotope(String),

    #[error("unknown element `{0}`")]
    UnknownElement(String),

    #[error("dataset error at line {line}, column {column}: {message}")]
    DatasetParse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("dataset error: {0}")]
    Dataset(String),

    #[error("unknown defect `{0}`")]
    UnknownDefect(String),

    #[error("invalid tensor: {0}")]
    InvalidTensor(String),

    #[error("{0} is not quadrupolar (I < 1); carbon and spin-1/2 nuclei carry no quadrupole term")]
    NonQuadrupolar(String),

    #[error("cannot rescale hyperfine tensor from {from} to {to}: different elements")]
    CrossElementRescale { from: String, to: String },

    #[error(
        "Hilbert-space dimension {dimension} exceeds the exact-diagonalization cap {cap}; \
         use the hybrid solver with a smaller exact subset"
    )]
    DimensionExceedsCap { dimension: u128, cap: usize },

    #[error("site {0} has no EFG tensor but the quadrupole term was requested")]
    MissingEfg(usize),

    #[error("matrix is not Hermitian (max deviation {0:e})")]
    NonHermitian(f64),

    #[error("eigensolver did not converge")]
    EigenNonConvergence,

    #[error("perturbation expansion is undefined at zero field; use the exact solver")]
    ZeroField,

    #[error("invalid site selector: {0}")]
    InvalidSelector(String),

    #[error("no line with positive weight inside the analysis window [{lo}, {hi}] MHz")]
    EmptyWindow { lo: f64, hi: f64 },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("energy records: {0}")]
    Energetics(String),

    #[error("energy record parse error at line {line}: {message}")]
    RecordParse { line: usize, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// True for failures of the numerical machinery itself rather than of the inputs.
    pub fn is_numerical(&self) -> bool {
        matches!(self, Error::EigenNonConvergence | Error::NonHermitian(_))
    }

    /// True for failures caused by dataset content or lookup.
    pub fn is_dataset(&self) -> bool {
        matches!(
            self,
            Error::DatasetParse { .. }
                | Error::Dataset(_)
                | Error::UnknownDefect(_)
                | Error::UnknownElement(_)
                | Error::UnknownIsotope(_)
        )
    }
}
