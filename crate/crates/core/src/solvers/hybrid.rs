use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use super::exact::exact_transitions;
use super::perturb::{perturb_lines, ShiftModel};
use super::{LineList, SolverSettings};
use crate::hamiltonian::{build_hamiltonian_capped, Terms};
use crate::spincore::SpinSystem;
use crate::{Error, Result, Vec3};

/// Which sites are treated exactly.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SiteSelector {
    /// Sites whose shell index is listed (1 = first neighbours).
    Shells(Vec<usize>),
    /// Explicit site indices.
    Indices(Vec<usize>),
}

impl SiteSelector {
    pub fn none() -> Self {
        SiteSelector::Indices(Vec::new())
    }

    pub fn resolve(&self, system: &SpinSystem) -> Result<Vec<usize>> {
        let (items, what) = match self {
            SiteSelector::Shells(s) => (s, "shell"),
            SiteSelector::Indices(i) => (i, "site index"),
        };
        let mut seen = BTreeSet::new();
        for &v in items {
            if !seen.insert(v) {
                return Err(Error::InvalidSelector(format!(
                    "{what} {v} selected more than once"
                )));
            }
        }
        match self {
            SiteSelector::Shells(_) => Ok((0..system.sites.len())
                .filter(|&k| seen.contains(&system.sites[k].site.shell_index))
                .collect()),
            SiteSelector::Indices(_) => {
                if let Some(&bad) = seen.iter().find(|&&k| k >= system.sites.len()) {
                    return Err(Error::InvalidSelector(format!(
                        "site index {bad} out of range ({} sites)",
                        system.sites.len()
                    )));
                }
                Ok(seen.into_iter().collect())
            }
        }
    }
}

/// Exact diagonalization for the selected sites, perturbation theory for the
/// rest.
///
/// Every exact line is convolved with the shift distribution of the remaining
/// nuclei. `exact_terms` controls NZI/NQI inside the exact block; electron
/// Zeeman and hyperfine are always included there. Lines below 30 MHz stay in
/// the list and are excluded later by the analysis window.
pub fn hybrid_solve(
    system: &SpinSystem,
    selector: &SiteSelector,
    field: &Vec3,
    exact_terms: Terms,
    settings: &SolverSettings,
) -> Result<LineList> {
    let exact_sites = selector.resolve(system)?;
    if exact_sites.is_empty() {
        return perturb_lines(system, field, settings.order, settings.mode);
    }
    let rest: Vec<usize> = (0..system.sites.len())
        .filter(|k| !exact_sites.contains(k))
        .collect();

    let sub = system.subsystem(&exact_sites);
    let terms = Terms {
        ezi: true,
        hfi: true,
        ..exact_terms
    };
    let h = build_hamiltonian_capped(&sub, field, terms, settings.exact_cap)?;
    let exact = exact_transitions(&h, settings)?;

    let model = ShiftModel::new(system, &rest, field, settings.order, settings.mode)?;
    let mut dist = LineList::new(
        "shifts",
        *field,
        model
            .distribution()
            .into_iter()
            .map(|(d, w)| super::Transition::new(d, 1.0, w))
            .collect(),
    );
    dist.coalesce(1e-9);
    let shifts: Vec<(f64, f64)> = dist
        .transitions()
        .iter()
        .map(|t| (t.frequency, t.weight))
        .collect();

    let mut out = exact.convolve(&shifts);
    out.method = format!(
        "hybrid[{}{}{}]",
        "hfi",
        if terms.nzi { ",nzi" } else { "" },
        if terms.nqi { ",nqi" } else { "" }
    );
    Ok(out.sorted())
}
