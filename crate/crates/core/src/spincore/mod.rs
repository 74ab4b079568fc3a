//! Domain types, constants, the isotope registry and the defect dataset.

pub mod constants;
pub mod dataset;
pub mod isotope;
pub mod site;

pub use dataset::{
    bundled_dataset, load_defect_dataset, parse_dataset, Dataset, DefectRecord, IsotopeChoice,
};
pub use isotope::{load_isotope_registry, Isotope, Spin};
pub use site::{principal_frame, CAxis, NuclearSite, SpinSite, SpinSystem};
