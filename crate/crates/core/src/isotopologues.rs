//! Isotope patterns over symmetry-equivalent site groups.
//!
//! Within a group all sites are equivalent, so only the number of sites
//! carrying each isotope matters; a pattern's probability is the multinomial
//! coefficient times the product of abundances.

use rayon::prelude::*;
use serde::Serialize;

use crate::solvers::LineList;
use crate::spincore::isotope::{self, Isotope};
use crate::spincore::SpinSystem;
use crate::{Error, Result, Tensor3};

/// Isotope counts within one equivalence group.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GroupCounts {
    pub group_id: String,
    pub element: String,
    /// (isotope symbol, number of sites), most abundant isotope first.
    pub counts: Vec<(&'static str, usize)>,
}

impl GroupCounts {
    pub fn size(&self) -> usize {
        self.counts.iter().map(|(_, n)| n).sum()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct IsotopePattern {
    pub groups: Vec<GroupCounts>,
    pub probability: f64,
}

impl IsotopePattern {
    /// Total number of sites carrying `symbol` across all groups.
    pub fn count_of(&self, symbol: &str) -> usize {
        self.groups
            .iter()
            .flat_map(|g| g.counts.iter())
            .filter(|(s, _)| *s == symbol)
            .map(|(_, n)| n)
            .sum()
    }

    /// Assigns isotopes to the sites of each group in site order.
    pub fn apply(&self, system: &SpinSystem) -> Result<SpinSystem> {
        let mut out = system.clone();
        for group in &self.groups {
            let members: Vec<usize> = (0..out.sites.len())
                .filter(|&k| out.sites[k].site.group_id == group.group_id)
                .collect();
            if members.len() != group.size() {
                return Err(Error::InvalidArgument(format!(
                    "group {} has {} sites, pattern lists {}",
                    group.group_id,
                    members.len(),
                    group.size()
                )));
            }
            let mut it = members.into_iter();
            for &(symbol, n) in &group.counts {
                let iso = isotope::lookup(symbol)?;
                for k in it.by_ref().take(n) {
                    if iso.element != out.sites[k].site.element {
                        return Err(Error::CrossElementRescale {
                            from: out.sites[k].isotope.symbol.to_string(),
                            to: symbol.to_string(),
                        });
                    }
                    out.sites[k].isotope = iso.clone();
                }
            }
        }
        Ok(out)
    }
}

fn multinomial(counts: &[usize]) -> f64 {
    // product of binomials, exact for the small group sizes involved
    let mut total = 0usize;
    let mut result = 1.0f64;
    for &c in counts {
        for j in 1..=c {
            total += 1;
            result = result * total as f64 / j as f64;
        }
    }
    result
}

/// All compositions of `n` into `parts` non-negative parts, first part descending.
fn compositions(n: usize, parts: usize) -> Vec<Vec<usize>> {
    if parts == 1 {
        return vec![vec![n]];
    }
    let mut out = Vec::new();
    for first in (0..=n).rev() {
        for mut rest in compositions(n - first, parts - 1) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

/// Exhaustive count-level enumeration over the groups containing any of
/// `variable_elements`. Isotopes with zero abundance are skipped.
pub fn enumerate_patterns(
    system: &SpinSystem,
    variable_elements: &[&str],
) -> Result<Vec<IsotopePattern>> {
    let mut groups: Vec<(String, String, usize)> = Vec::new();
    for s in &system.sites {
        if !variable_elements.contains(&s.site.element.as_str()) {
            continue;
        }
        match groups.iter_mut().find(|g| g.0 == s.site.group_id) {
            Some(g) => g.2 += 1,
            None => groups.push((s.site.group_id.clone(), s.site.element.clone(), 1)),
        }
    }

    let mut patterns = vec![IsotopePattern {
        groups: Vec::new(),
        probability: 1.0,
    }];
    for (group_id, element, size) in groups {
        let isotopes: Vec<&'static Isotope> = isotope::isotopes_of(&element)?
            .into_iter()
            .filter(|i| i.abundance > 0.0)
            .collect();
        let mut next = Vec::new();
        for pattern in &patterns {
            for counts in compositions(size, isotopes.len()) {
                let p = multinomial(&counts)
                    * isotopes
                        .iter()
                        .zip(&counts)
                        .map(|(iso, &c)| iso.abundance.powi(c as i32))
                        .product::<f64>();
                let mut groups = pattern.groups.clone();
                groups.push(GroupCounts {
                    group_id: group_id.clone(),
                    element: element.clone(),
                    counts: isotopes.iter().map(|i| i.symbol).zip(counts).collect(),
                });
                next.push(IsotopePattern {
                    groups,
                    probability: pattern.probability * p,
                });
            }
        }
        patterns = next;
    }
    Ok(patterns)
}

/// Scales a hyperfine tensor between isotopes of one element by g_n(to)/g_n(from).
pub fn rescale_hyperfine(a: &Tensor3, from: &Isotope, to: &Isotope) -> Result<Tensor3> {
    if from.element != to.element {
        return Err(Error::CrossElementRescale {
            from: from.symbol.to_string(),
            to: to.symbol.to_string(),
        });
    }
    if from.symbol == to.symbol {
        return Ok(*a);
    }
    Ok(a * (to.g_n / from.g_n))
}

#[derive(Clone, Debug)]
pub struct CompositeResult {
    pub lines: LineList,
    /// Per solved pattern, in input order.
    pub per_pattern: Vec<(IsotopePattern, LineList)>,
    /// Total probability of patterns skipped by the floor.
    pub skipped_probability: f64,
}

/// Solves every pattern above `probability_floor` with `solve` and merges the
/// line lists with weights multiplied by the pattern probability. Patterns
/// run in parallel; the merged list is returned in canonical order.
pub fn composite_lines<F>(
    system: &SpinSystem,
    patterns: &[IsotopePattern],
    probability_floor: f64,
    solve: F,
) -> Result<CompositeResult>
where
    F: Fn(&SpinSystem) -> Result<LineList> + Sync,
{
    let total: f64 = patterns.iter().map(|p| p.probability).sum();
    if (total - 1.0).abs() > 1e-9 {
        return Err(Error::InvalidArgument(format!(
            "pattern probabilities sum to {total}, expected 1"
        )));
    }
    let (kept, skipped): (Vec<&IsotopePattern>, Vec<&IsotopePattern>) = patterns
        .iter()
        .partition(|p| p.probability >= probability_floor);
    let solved = kept
        .par_iter()
        .map(|p| {
            let sys = p.apply(system)?;
            Ok(((*p).clone(), solve(&sys)?))
        })
        .collect::<Result<Vec<_>>>()?;

    let field = solved.first().map(|(_, l)| l.field).unwrap_or_default();
    let method = solved
        .first()
        .map(|(_, l)| l.method.clone())
        .unwrap_or_default();
    let mut lines = LineList::new(method, field, Vec::new());
    for (p, l) in &solved {
        let mut l = l.clone();
        l.scale_weights(p.probability);
        lines.extend(l);
    }
    lines.sort_canonical();
    Ok(CompositeResult {
        lines,
        per_pattern: solved,
        skipped_probability: skipped.iter().map(|p| p.probability).sum(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spincore::isotope::lookup;

    #[test]
    fn multinomial_values() {
        assert_eq!(multinomial(&[5, 1]), 6.0);
        assert_eq!(multinomial(&[4, 2]), 15.0);
        assert_eq!(multinomial(&[2, 2, 2]), 90.0);
        assert_eq!(
            compositions(3, 2),
            vec![vec![3, 0], vec![2, 1], vec![1, 2], vec![0, 3]]
        );
    }

    #[test]
    fn rescale_rules() {
        let b11 = lookup("11B").unwrap();
        let b10 = lookup("10B").unwrap();
        let a = Tensor3::from_diagonal(&crate::Vec3::new(1.4, -0.9, 6.1));
        let r = rescale_hyperfine(&a, b11, b10).unwrap();
        assert!((r[(0, 0)] - 0.46875).abs() < 1e-12);
        assert!((r[(1, 1)] + 0.30134).abs() < 1e-5);
        assert!((r[(2, 2)] - 2.04241).abs() < 1e-5);
        assert_eq!(rescale_hyperfine(&a, b11, b11).unwrap(), a);
        assert_eq!(
            rescale_hyperfine(&Tensor3::zeros(), b11, b10).unwrap(),
            Tensor3::zeros()
        );
        assert!(rescale_hyperfine(&a, b11, lookup("14N").unwrap()).is_err());
    }
}
