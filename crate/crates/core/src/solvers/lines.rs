use serde::{Deserialize, Serialize};

use crate::spincore::constants::LOW_FREQUENCY_CUTOFF_MHZ;
use crate::Vec3;

/// One resonance line.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Transition {
    /// MHz
    pub frequency: f64,
    /// Transition strength |⟨f|S_x|i⟩|², or 1 for perturbative lines.
    pub intensity: f64,
    /// Configuration / isotopologue probability.
    pub weight: f64,
}

impl Transition {
    pub fn new(frequency: f64, intensity: f64, weight: f64) -> Self {
        debug_assert!(frequency.is_finite() && intensity >= 0.0 && weight >= 0.0);
        Self {
            frequency,
            intensity,
            weight,
        }
    }

    /// weight × intensity
    pub fn strength(&self) -> f64 {
        self.weight * self.intensity
    }

    /// Below the default analysis window (nuclear "core" transitions).
    pub fn is_low_frequency(&self) -> bool {
        self.frequency < LOW_FREQUENCY_CUTOFF_MHZ
    }
}

/// Weighted resonance lines produced by a solver.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LineList {
    pub method: String,
    pub field: Vec3,
    transitions: Vec<Transition>,
    total_weight: f64,
}

impl LineList {
    pub fn new(method: impl Into<String>, field: Vec3, transitions: Vec<Transition>) -> Self {
        let total_weight = transitions.iter().map(|t| t.weight).sum();
        Self {
            method: method.into(),
            field,
            transitions,
            total_weight,
        }
    }

    pub fn transitions(&self) -> &[Transition] {
        &self.transitions
    }

    pub fn into_transitions(self) -> Vec<Transition> {
        self.transitions
    }

    pub fn len(&self) -> usize {
        self.transitions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.transitions.is_empty()
    }

    pub fn total_weight(&self) -> f64 {
        self.total_weight
    }

    /// Σ weight·intensity
    pub fn total_strength(&self) -> f64 {
        self.transitions.iter().map(Transition::strength).sum()
    }

    pub fn low_frequency_count(&self) -> usize {
        self.transitions
            .iter()
            .filter(|t| t.is_low_frequency())
            .count()
    }

    /// Sorts by frequency, then weight, then intensity.
    pub fn sort_canonical(&mut self) {
        self.transitions.sort_by(|a, b| {
            a.frequency
                .total_cmp(&b.frequency)
                .then(a.weight.total_cmp(&b.weight))
                .then(a.intensity.total_cmp(&b.intensity))
        });
    }

    pub fn sorted(mut self) -> Self {
        self.sort_canonical();
        self
    }

    /// Multiplies every weight by `factor`.
    pub fn scale_weights(&mut self, factor: f64) {
        for t in &mut self.transitions {
            t.weight *= factor;
        }
        self.total_weight *= factor;
    }

    /// Translates every frequency by `delta` MHz.
    pub fn translate(&mut self, delta: f64) {
        for t in &mut self.transitions {
            t.frequency += delta;
        }
    }

    pub fn extend(&mut self, other: LineList) {
        self.total_weight += other.total_weight;
        self.transitions.extend(other.transitions);
    }

    /// Line-list convolution with a distribution of (shift, weight) pairs:
    /// frequencies add and weights multiply.
    pub fn convolve(&self, shifts: &[(f64, f64)]) -> LineList {
        let mut out = Vec::with_capacity(self.transitions.len() * shifts.len());
        for t in &self.transitions {
            for &(d, w) in shifts {
                out.push(Transition::new(t.frequency + d, t.intensity, t.weight * w));
            }
        }
        LineList::new(self.method.clone(), self.field, out)
    }

    /// Merges lines whose frequencies agree within `tol` MHz, preserving the
    /// total weight·intensity and the strength-weighted frequency of each
    /// merged group.
    pub fn coalesce(&mut self, tol: f64) {
        self.sort_canonical();
        let mut out: Vec<Transition> = Vec::with_capacity(self.transitions.len());
        let mut group: Vec<Transition> = Vec::new();
        let flush = |group: &mut Vec<Transition>, out: &mut Vec<Transition>| {
            if group.is_empty() {
                return;
            }
            let w: f64 = group.iter().map(|t| t.weight).sum();
            let s: f64 = group.iter().map(|t| t.strength()).sum();
            let f = if s > 0.0 {
                group
                    .iter()
                    .map(|t| t.strength() * t.frequency)
                    .sum::<f64>()
                    / s
            } else {
                group[0].frequency
            };
            let intensity = if w > 0.0 { s / w } else { 0.0 };
            out.push(Transition::new(f, intensity, w));
            group.clear();
        };
        for t in self.transitions.drain(..) {
            if let Some(first) = group.first() {
                if t.frequency - first.frequency > tol {
                    flush(&mut group, &mut out);
                }
            }
            group.push(t);
        }
        flush(&mut group, &mut out);
        self.transitions = out;
    }
}
