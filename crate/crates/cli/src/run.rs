//! odmr, compare-methods and isotopes.

use std::io::Write;
use std::path::Path;

use hbnspin_core::hamiltonian::{build_hamiltonian_capped, Terms};
use hbnspin_core::isotope::lookup;
use hbnspin_core::isotopologues::{composite_lines, enumerate_patterns, IsotopePattern};
use hbnspin_core::solvers::{
    exact_transitions, hybrid_solve, sample_configurations, HyperfineMode, Order, SiteSelector,
};
use hbnspin_core::spectrum::{synthesize, write_lines, write_spectrum, Grid, Header};
use hbnspin_core::spincore::IsotopeChoice;
use hbnspin_core::{peak_stats, Error, LineList, PeakStats, SolverSettings, SpinSystem};

use crate::args::{Format, IsotopeMode, Method, Term};
use crate::config::{parse_pattern, RunConfig};
use crate::error::CliError;
use crate::output::{create_file, header_lines, Context};

/// Elements whose isotopes are varied for natural-abundance patterns.
const VARIABLE_ELEMENTS: &[&str] = &["B"];

/// Samples drawn when a perturbative system exceeds the enumeration threshold
/// and no count was given.
const DEFAULT_SAMPLES: usize = 100_000;

fn exact_terms(terms: &[Term]) -> Terms {
    Terms::SIMPLIFIED
        .with_nzi(terms.contains(&Term::Nzi))
        .with_nqi(terms.contains(&Term::Nqi))
}

/// Spin system for the configured defect with majority isotopes.
fn template(ctx: &mut Context, cfg: &RunConfig) -> Result<SpinSystem, CliError> {
    let c13 = lookup("13C")?;
    if let Some(path) = &cfg.system {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        let mut sys = SpinSystem::from_json(&text)?;
        if cfg.c13 {
            let k = sys
                .sites
                .iter()
                .position(|s| s.site.shell_index == 0 && s.site.element == "C")
                .ok_or_else(|| {
                    CliError::Usage("--c13 needs a central carbon site (shell 0)".into())
                })?;
            sys.sites[k].isotope = c13.clone();
        }
        return Ok(sys);
    }
    let label = cfg.defect.as_deref().expect("validated");
    let record = ctx.dataset()?.get(label)?;
    let mut choice = IsotopeChoice::natural_majority();
    if cfg.c13 {
        let k = record
            .central_site()
            .filter(|&k| record.sites[k].element == "C")
            .ok_or_else(|| {
                CliError::Usage(format!("{label} has no central carbon site for --c13"))
            })?;
        choice = choice.with_site(k, c13);
    }
    Ok(record.spin_system(&choice)?)
}

fn solve(
    cfg: &RunConfig,
    method: Method,
    terms: &[Term],
    sys: &SpinSystem,
) -> hbnspin_core::Result<LineList> {
    let field = cfg.field_vector();
    let settings = SolverSettings {
        exact_cap: cfg.exact_cap,
        enumeration_threshold: cfg.enumeration_threshold,
        ..SolverSettings::default()
    };
    let perturbative = |order, mode| {
        let n = cfg.samples.unwrap_or(DEFAULT_SAMPLES);
        sample_configurations(
            sys,
            &field,
            order,
            mode,
            n,
            cfg.seed,
            cfg.enumeration_threshold,
        )
    };
    match method {
        Method::Ezi => {
            let electron = SpinSystem {
                sites: Vec::new(),
                ..sys.clone()
            };
            let h = build_hamiltonian_capped(&electron, &field, Terms::EZI, cfg.exact_cap)?;
            let mut lines = exact_transitions(&h, &settings)?;
            lines.method = "ezi".into();
            Ok(lines)
        }
        Method::Perturb1 => perturbative(Order::First, HyperfineMode::FullTensor),
        Method::Perturb2 => perturbative(Order::Second, HyperfineMode::FullTensor),
        Method::AConstants => perturbative(Order::Second, HyperfineMode::AConstants),
        Method::Exact => {
            let h = build_hamiltonian_capped(sys, &field, exact_terms(terms), cfg.exact_cap)?;
            exact_transitions(&h, &settings)
        }
        Method::Hybrid => hybrid_solve(
            sys,
            &SiteSelector::Shells(cfg.exact_shell.clone()),
            &field,
            exact_terms(terms),
            &settings,
        ),
    }
}

fn select_pattern(patterns: Vec<IsotopePattern>, spec: &str) -> Result<IsotopePattern, CliError> {
    let wanted = parse_pattern(spec)?;
    let mut hits = patterns
        .into_iter()
        .filter(|p| wanted.iter().all(|(sym, n)| p.count_of(sym) == *n));
    let first = hits.next().ok_or_else(|| {
        CliError::Usage(format!(
            "pattern `{spec}` matches no isotopologue of this system"
        ))
    })?;
    if hits.next().is_some() {
        return Err(CliError::Usage(format!(
            "pattern `{spec}` is ambiguous; list every isotope count"
        )));
    }
    Ok(IsotopePattern {
        probability: 1.0,
        ..first
    })
}

/// Patterns to solve according to the isotope mode; `None` means the fixed
/// majority system.
fn patterns_for(
    cfg: &RunConfig,
    sys: &SpinSystem,
    all: bool,
) -> Result<Option<Vec<IsotopePattern>>, CliError> {
    if let Some(spec) = &cfg.pattern {
        let patterns = enumerate_patterns(sys, VARIABLE_ELEMENTS)?;
        return Ok(Some(vec![select_pattern(patterns, spec)?]));
    }
    if all || cfg.isotopes == IsotopeMode::Natural {
        return Ok(Some(enumerate_patterns(sys, VARIABLE_ELEMENTS)?));
    }
    Ok(None)
}

fn run_method(
    cfg: &RunConfig,
    sys: &SpinSystem,
    method: Method,
    terms: &[Term],
) -> Result<LineList, CliError> {
    let mut lines = match patterns_for(cfg, sys, false)? {
        None => solve(cfg, method, terms, sys)?,
        Some(patterns) => {
            composite_lines(sys, &patterns, 0.0, |s| solve(cfg, method, terms, s))?.lines
        }
    };
    lines.translate(cfg.shift);
    Ok(lines)
}

fn stats(cfg: &RunConfig, lines: &LineList) -> Result<PeakStats, CliError> {
    Ok(peak_stats(lines, cfg.window()?)?)
}

fn with_dimension_hint(e: CliError) -> CliError {
    match e {
        CliError::Core(Error::DimensionExceedsCap { dimension, cap }) => CliError::Usage(format!(
            "Hilbert-space dimension {dimension} exceeds the exact cap {cap}; \
             try --method hybrid --exact-shell 1"
        )),
        other => other,
    }
}

fn run_header(ctx: &mut Context, command: &str, cfg: &RunConfig) -> Result<Header, CliError> {
    let dataset = match &cfg.system {
        Some(p) => format!("inline {}", p.display()),
        None => ctx.dataset()?.version.clone(),
    };
    Ok(header_lines(command, &cfg.echo(), &dataset, Some(cfg.seed)))
}

fn label(cfg: &RunConfig, sys: &SpinSystem) -> String {
    cfg.defect.clone().unwrap_or_else(|| sys.label.clone())
}

pub fn odmr(ctx: &mut Context, cfg: &RunConfig, out: &mut dyn Write) -> Result<(), CliError> {
    let sys = template(ctx, cfg)?;
    let lines =
        run_method(cfg, &sys, cfg.method, &cfg.subset_terms).map_err(with_dimension_hint)?;
    let s = stats(cfg, &lines)?;
    let header = run_header(ctx, "odmr", cfg)?;

    if let Some(path) = &cfg.out_lines {
        let mut f = create_file(path)?;
        write_lines(&mut f, &lines, &header).map_err(|e| CliError::io(path, e))?;
    }
    if let Some(path) = &cfg.out_spectrum {
        let mut spectrum = synthesize(&lines, Grid::default(), cfg.line_width)?;
        spectrum.meta.seed = Some(cfg.seed);
        spectrum.meta.shift = cfg.shift;
        let mut f = create_file(path)?;
        write_spectrum(&mut f, &spectrum, &header).map_err(|e| CliError::io(path, e))?;
    }

    let w = |e| CliError::io(Path::new("<stdout>"), e);
    crate::output::write_header(out, &header).map_err(w)?;
    let name = label(cfg, &sys);
    match ctx.format {
        Format::Human => {
            writeln!(out, "defect              {name}").map_err(w)?;
            writeln!(out, "method              {}", lines.method).map_err(w)?;
            writeln!(out, "lines               {}", lines.len()).map_err(w)?;
            writeln!(out, "center_MHz          {:.2}", s.center).map_err(w)?;
            writeln!(out, "sigma_MHz           {:.2}", s.sigma).map_err(w)?;
            writeln!(out, "fwhm_MHz            {:.2}", s.fwhm_gauss).map_err(w)?;
            writeln!(out, "in_window_fraction  {:.4}", s.included_fraction).map_err(w)?;
            writeln!(
                out,
                "FWHM {:.2} MHz, center {:.2} MHz",
                s.fwhm_gauss, s.center
            )
            .map_err(w)?;
        }
        Format::Csv => {
            writeln!(
                out,
                "defect,method,lines,center_MHz,sigma_MHz,fwhm_MHz,in_window_fraction"
            )
            .map_err(w)?;
            writeln!(
                out,
                "{name},{},{},{:.6},{:.6},{:.6},{:.6}",
                lines.method,
                lines.len(),
                s.center,
                s.sigma,
                s.fwhm_gauss,
                s.included_fraction
            )
            .map_err(w)?;
        }
    }
    Ok(())
}

/// The six rows of the method comparison.
pub const COMPARISON: &[(&str, Method, &[Term])] = &[
    ("EZI only", Method::Ezi, &[]),
    ("perturb2 (A constants)", Method::AConstants, &[]),
    ("perturb2 (full A)", Method::Perturb2, &[]),
    ("perturb1 (full A)", Method::Perturb1, &[]),
    ("hybrid (1st: NZI)", Method::Hybrid, &[Term::Nzi]),
    (
        "hybrid (1st: NZI, NQI)",
        Method::Hybrid,
        &[Term::Nzi, Term::Nqi],
    ),
];

pub fn compare_methods(
    ctx: &mut Context,
    cfg: &RunConfig,
    out: &mut dyn Write,
) -> Result<(), CliError> {
    let sys = template(ctx, cfg)?;
    let mut rows = Vec::new();
    for &(name, method, terms) in COMPARISON {
        let lines = run_method(cfg, &sys, method, terms).map_err(with_dimension_hint)?;
        rows.push((name, stats(cfg, &lines)?));
    }
    let header = run_header(ctx, "compare-methods", cfg)?;
    let w = |e| CliError::io(Path::new("<stdout>"), e);
    crate::output::write_header(out, &header).map_err(w)?;
    match ctx.format {
        Format::Human => {
            writeln!(out, "{}: FWHM (center), MHz", label(cfg, &sys)).map_err(w)?;
            for (name, s) in &rows {
                writeln!(
                    out,
                    "{name:<24} {:>4.0} ({:.0})    {:.2} ({:.2})",
                    s.fwhm_gauss, s.center, s.fwhm_gauss, s.center
                )
                .map_err(w)?;
            }
        }
        Format::Csv => {
            writeln!(out, "method,fwhm_MHz,center_MHz").map_err(w)?;
            for (name, s) in &rows {
                writeln!(out, "\"{name}\",{:.6},{:.6}", s.fwhm_gauss, s.center).map_err(w)?;
            }
        }
    }
    Ok(())
}

pub fn isotopes(ctx: &mut Context, cfg: &RunConfig, out: &mut dyn Write) -> Result<(), CliError> {
    let sys = template(ctx, cfg)?;
    let patterns = patterns_for(cfg, &sys, true)?.expect("all patterns requested");
    let result = composite_lines(&sys, &patterns, 0.0, |s| {
        solve(cfg, cfg.method, &cfg.subset_terms, s)
    })
    .map_err(|e| with_dimension_hint(e.into()))?;
    let mut symbols: Vec<&'static str> = Vec::new();
    for p in &patterns {
        for g in &p.groups {
            for (sym, _) in &g.counts {
                if !symbols.contains(sym) {
                    symbols.push(sym);
                }
            }
        }
    }
    let mut rows = Vec::new();
    for (p, lines) in &result.per_pattern {
        let mut lines = lines.clone();
        lines.translate(cfg.shift);
        rows.push((p, stats(cfg, &lines)?));
    }

    let header = run_header(ctx, "isotopes", cfg)?;
    let w = |e| CliError::io(Path::new("<stdout>"), e);
    crate::output::write_header(out, &header).map_err(w)?;
    match ctx.format {
        Format::Human => {
            let cols: Vec<String> = symbols
                .iter()
                .map(|s| format!("{:>5}", format!("#{s}")))
                .collect();
            writeln!(
                out,
                "{} {:>8} {:>10} {:>9}",
                cols.join(" "),
                "p (%)",
                "center",
                "FWHM"
            )
            .map_err(w)?;
            for (p, s) in &rows {
                let counts: Vec<String> = symbols
                    .iter()
                    .map(|sym| format!("{:>5}", p.count_of(sym)))
                    .collect();
                writeln!(
                    out,
                    "{} {:>8.2} {:>10.2} {:>9.2}",
                    counts.join(" "),
                    p.probability * 100.0,
                    s.center,
                    s.fwhm_gauss
                )
                .map_err(w)?;
            }
        }
        Format::Csv => {
            let cols: Vec<String> = symbols.iter().map(|s| format!("n_{s}")).collect();
            writeln!(
                out,
                "{},probability_percent,center_MHz,fwhm_MHz",
                cols.join(",")
            )
            .map_err(w)?;
            for (p, s) in &rows {
                let counts: Vec<String> = symbols
                    .iter()
                    .map(|sym| p.count_of(sym).to_string())
                    .collect();
                writeln!(
                    out,
                    "{},{:.6},{:.6},{:.6}",
                    counts.join(","),
                    p.probability * 100.0,
                    s.center,
                    s.fwhm_gauss
                )
                .map_err(w)?;
            }
        }
    }
    Ok(())
}
