use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use hbnspin_core::spectrum::Header;
use hbnspin_core::spincore::dataset::{bundled_dataset_json, parse_dataset, Dataset, DATASET_FILE};
use hbnspin_core::Error;

use crate::args::Format;
use crate::error::CliError;

pub struct Context {
    pub format: Format,
    pub data_dir: Option<PathBuf>,
    dataset: Option<Dataset>,
}

impl Context {
    pub fn new(format: Format, data_dir: Option<PathBuf>) -> Self {
        Self {
            format,
            data_dir,
            dataset: None,
        }
    }

    /// Raw dataset document: `<data_dir>/defects.json` or the bundled copy.
    pub fn dataset_text(&self) -> Result<String, CliError> {
        match &self.data_dir {
            Some(dir) => {
                let path = dir.join(DATASET_FILE);
                std::fs::read_to_string(&path)
                    .map_err(|e| CliError::Core(Error::Dataset(format!("{}: {e}", path.display()))))
            }
            None => Ok(bundled_dataset_json().to_string()),
        }
    }

    pub fn dataset(&mut self) -> Result<&Dataset, CliError> {
        if self.dataset.is_none() {
            self.dataset = Some(parse_dataset(&self.dataset_text()?)?);
        }
        Ok(self.dataset.as_ref().expect("loaded"))
    }
}

pub fn header_lines(command: &str, config: &str, dataset: &str, seed: Option<u64>) -> Header {
    let mut h = vec![
        (
            "tool".to_string(),
            format!("hbnspin {}", env!("CARGO_PKG_VERSION")),
        ),
        ("command".to_string(), command.to_string()),
        ("config".to_string(), config.to_string()),
        ("dataset".to_string(), dataset.to_string()),
    ];
    if let Some(seed) = seed {
        h.push(("seed".to_string(), seed.to_string()));
    }
    h
}

pub fn write_header(w: &mut dyn Write, header: &Header) -> std::io::Result<()> {
    for (k, v) in header {
        writeln!(w, "# {k}: {v}")?;
    }
    Ok(())
}

pub fn create_file(path: &Path) -> Result<BufWriter<File>, CliError> {
    File::create(path)
        .map(BufWriter::new)
        .map_err(|e| CliError::io(path, e))
}
