//! Peak statistics, broadened spectra and delimited-text export.
//!
//! Statistics are always computed from line lists; the grid-based spectrum is
//! for display only.

use std::io::Write;

use log::warn;
use serde::{Deserialize, Serialize};

use crate::solvers::LineList;
use crate::spincore::constants::{GAUSSIAN_FWHM_FACTOR, LOW_FREQUENCY_CUTOFF_MHZ};
use crate::{Error, Result, Vec3};

/// Default analysis window [30 MHz, ∞).
pub const DEFAULT_WINDOW: (f64, f64) = (LOW_FREQUENCY_CUTOFF_MHZ, f64::INFINITY);

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PeakStats {
    /// Strength-weighted mean frequency, MHz.
    pub center: f64,
    /// Strength-weighted standard deviation, MHz.
    pub sigma: f64,
    /// 2·sqrt(2·ln 2)·σ, MHz.
    pub fwhm_gauss: f64,
    pub window: (f64, f64),
    /// Fraction of Σ weight·intensity falling inside the window.
    pub included_fraction: f64,
}

pub fn peak_stats(lines: &LineList, window: (f64, f64)) -> Result<PeakStats> {
    let (lo, hi) = window;
    if lo.partial_cmp(&hi) != Some(std::cmp::Ordering::Less) {
        return Err(Error::InvalidArgument(format!(
            "analysis window [{lo}, {hi}] is empty"
        )));
    }
    let inside = |f: f64| f >= lo && f <= hi;
    let total: f64 = lines.transitions().iter().map(|t| t.strength()).sum();
    let mut s0 = 0.0;
    let mut s1 = 0.0;
    for t in lines.transitions().iter().filter(|t| inside(t.frequency)) {
        s0 += t.strength();
        s1 += t.strength() * t.frequency;
    }
    if s0.is_nan() || s0 <= 0.0 {
        return Err(Error::EmptyWindow { lo, hi });
    }
    let center = s1 / s0;
    let var = lines
        .transitions()
        .iter()
        .filter(|t| inside(t.frequency))
        .map(|t| t.strength() * (t.frequency - center).powi(2))
        .sum::<f64>()
        / s0;
    let sigma = var.max(0.0).sqrt();
    Ok(PeakStats {
        center,
        sigma,
        fwhm_gauss: GAUSSIAN_FWHM_FACTOR * sigma,
        window,
        included_fraction: s0 / total,
    })
}

/// Uniform frequency grid.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Grid {
    pub start: f64,
    pub step: f64,
    pub len: usize,
}

impl Grid {
    /// Points from `start` to `stop` inclusive.
    pub fn new(start: f64, stop: f64, step: f64) -> Result<Self> {
        if step.is_nan()
            || step <= 0.0
            || start.partial_cmp(&stop) != Some(std::cmp::Ordering::Less)
        {
            return Err(Error::InvalidArgument(format!(
                "bad grid {start}..{stop} step {step}"
            )));
        }
        let len = ((stop - start) / step + 1e-9).floor() as usize + 1;
        Ok(Self { start, step, len })
    }

    pub fn point(&self, k: usize) -> f64 {
        self.start + self.step * k as f64
    }

    pub fn end(&self) -> f64 {
        self.point(self.len - 1)
    }
}

impl Default for Grid {
    /// 0–300 MHz in 0.1 MHz steps.
    fn default() -> Self {
        Self {
            start: 0.0,
            step: 0.1,
            len: 3001,
        }
    }
}

pub const DEFAULT_LINE_WIDTH_MHZ: f64 = 1.0;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpectrumMeta {
    pub field: Vec3,
    pub method: String,
    pub seed: Option<u64>,
    /// Accumulated frequency shift, MHz.
    pub shift: f64,
    /// Per-line Gaussian FWHM, MHz.
    pub line_width: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Spectrum {
    pub grid: Grid,
    /// Peak-normalized, max = 1 (all zero for an empty line list).
    pub intensity: Vec<f64>,
    pub meta: SpectrumMeta,
}

impl Spectrum {
    pub fn frequencies(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.grid.len).map(|k| self.grid.point(k))
    }

    /// Intensity-weighted mean and standard deviation over the grid.
    pub fn moments(&self) -> (f64, f64) {
        let s0: f64 = self.intensity.iter().sum();
        let s1: f64 = self
            .frequencies()
            .zip(&self.intensity)
            .map(|(f, i)| f * i)
            .sum();
        let mean = s1 / s0;
        let s2: f64 = self
            .frequencies()
            .zip(&self.intensity)
            .map(|(f, i)| (f - mean).powi(2) * i)
            .sum();
        (mean, (s2 / s0).sqrt())
    }
}

/// Sum of Gaussians of FWHM `line_width`, one per line, each with area
/// proportional to weight·intensity, normalized to a maximum of 1.
pub fn synthesize(lines: &LineList, grid: Grid, line_width: f64) -> Result<Spectrum> {
    if line_width.is_nan() || line_width <= 0.0 {
        return Err(Error::InvalidArgument(
            "per-line width must be positive".into(),
        ));
    }
    let sigma = line_width / GAUSSIAN_FWHM_FACTOR;
    let reach = 8.0 * sigma;
    let norm = 1.0 / (sigma * (2.0 * std::f64::consts::PI).sqrt());
    let mut y = vec![0.0; grid.len];
    let mut uncovered = 0usize;
    for t in lines.transitions() {
        if t.frequency >= LOW_FREQUENCY_CUTOFF_MHZ
            && (t.frequency < grid.start || t.frequency > grid.end())
        {
            uncovered += 1;
        }
        let lo = ((t.frequency - reach - grid.start) / grid.step)
            .floor()
            .max(0.0) as usize;
        let hi_f = ((t.frequency + reach - grid.start) / grid.step).ceil();
        if hi_f < 0.0 {
            continue;
        }
        let hi = (hi_f as usize).min(grid.len.saturating_sub(1));
        let amp = t.strength() * norm;
        for (k, v) in y.iter_mut().enumerate().take(hi + 1).skip(lo) {
            let x = (grid.point(k) - t.frequency) / sigma;
            *v += amp * (-0.5 * x * x).exp();
        }
    }
    if uncovered > 0 {
        warn!(
            "{uncovered} in-window lines fall outside the grid [{}, {}] MHz",
            grid.start,
            grid.end()
        );
    }
    if lines.is_empty() {
        warn!("synthesizing a spectrum from an empty line list");
    }
    let max = y.iter().copied().fold(0.0, f64::max);
    if max > 0.0 {
        y.iter_mut().for_each(|v| *v /= max);
    }
    Ok(Spectrum {
        grid,
        intensity: y,
        meta: SpectrumMeta {
            field: lines.field,
            method: lines.method.clone(),
            seed: None,
            shift: 0.0,
            line_width,
        },
    })
}

/// Constant frequency translation, used to align calculated spectra with a
/// measured peak position.
pub trait Shift {
    fn shift(self, delta: f64) -> Self;
}

impl Shift for LineList {
    fn shift(mut self, delta: f64) -> Self {
        self.translate(delta);
        self
    }
}

impl Shift for Spectrum {
    fn shift(mut self, delta: f64) -> Self {
        self.grid.start += delta;
        self.meta.shift += delta;
        self
    }
}

/// Formats like C's `%.{digits}g`.
pub fn format_sig(x: f64, digits: usize) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let exp = x.abs().log10().floor() as i32;
    let digits = digits.max(1) as i32;
    if exp < -5 || exp >= digits {
        let s = format!("{:.*e}", (digits - 1) as usize, x);
        // trim mantissa zeros: 1.500000000e3 -> 1.5e3
        let (mant, e) = s.split_once('e').expect("scientific format");
        let mant = if mant.contains('.') {
            mant.trim_end_matches('0').trim_end_matches('.')
        } else {
            mant
        };
        format!("{mant}e{e}")
    } else {
        let decimals = (digits - 1 - exp).max(0) as usize;
        let s = format!("{:.*}", decimals, x);
        if s.contains('.') {
            s.trim_end_matches('0').trim_end_matches('.').to_string()
        } else {
            s
        }
    }
}

/// Ordered `# key: value` metadata lines.
pub type Header = Vec<(String, String)>;

fn write_header<W: Write>(w: &mut W, header: &Header) -> std::io::Result<()> {
    for (k, v) in header {
        writeln!(w, "# {k}: {v}")?;
    }
    Ok(())
}

/// Two columns, frequency_MHz and intensity, 9 significant digits.
pub fn write_spectrum<W: Write>(
    w: &mut W,
    spectrum: &Spectrum,
    header: &Header,
) -> std::io::Result<()> {
    write_header(w, header)?;
    writeln!(w, "frequency_MHz,intensity")?;
    for (f, i) in spectrum.frequencies().zip(&spectrum.intensity) {
        writeln!(w, "{},{}", format_sig(f, 9), format_sig(*i, 9))?;
    }
    Ok(())
}

/// Three columns, frequency_MHz, intensity and weight.
pub fn write_lines<W: Write>(w: &mut W, lines: &LineList, header: &Header) -> std::io::Result<()> {
    write_header(w, header)?;
    writeln!(w, "frequency_MHz,intensity,weight")?;
    for t in lines.transitions() {
        writeln!(
            w,
            "{},{},{}",
            format_sig(t.frequency, 9),
            format_sig(t.intensity, 9),
            format_sig(t.weight, 9)
        )?;
    }
    Ok(())
}
