//! Nuclear isotopes and the built-in registry.

use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::constants::NUCLEAR_MAGNETON_HZ_PER_GAUSS;
use crate::{Error, Result};

/// A spin quantum number, stored as twice its value so half-integers are exact.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Spin(u32);

impl Spin {
    pub const ZERO: Spin = Spin(0);
    pub const HALF: Spin = Spin(1);

    pub const fn from_twice(twice: u32) -> Self {
        Spin(twice)
    }

    pub fn new(value: f64) -> Result<Self> {
        let twice = 2.0 * value;
        if !value.is_finite() || value < 0.0 || (twice - twice.round()).abs() > 1e-9 {
            return Err(Error::InvalidSpin(value));
        }
        Ok(Spin(twice.round() as u32))
    }

    pub fn twice(self) -> u32 {
        self.0
    }

    pub fn value(self) -> f64 {
        self.0 as f64 / 2.0
    }

    /// 2I + 1
    pub fn multiplicity(self) -> usize {
        self.0 as usize + 1
    }

    /// I(I + 1)
    pub fn casimir(self) -> f64 {
        let i = self.value();
        i * (i + 1.0)
    }

    /// Magnetic quantum numbers in basis order, I down to -I.
    pub fn projections(self) -> impl Iterator<Item = f64> {
        let i = self.value();
        (0..self.multiplicity()).map(move |k| i - k as f64)
    }
}

impl fmt::Display for Spin {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_multiple_of(2) {
            write!(f, "{}", self.0 / 2)
        } else {
            write!(f, "{}/2", self.0)
        }
    }
}

impl Serialize for Spin {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_f64(self.value())
    }
}

impl<'de> Deserialize<'de> for Spin {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let v = f64::deserialize(d)?;
        Spin::new(v).map_err(serde::de::Error::custom)
    }
}

/// A nuclear species.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Isotope {
    pub symbol: &'static str,
    pub element: &'static str,
    pub spin: Spin,
    /// Gyromagnetic ratio over 2π, Hz/Gauss.
    pub gamma_over_2pi: f64,
    /// Nuclear g-factor.
    pub g_n: f64,
    /// Natural abundance as a fraction.
    pub abundance: f64,
    /// EFG to quadrupole-matrix conversion, MHz per (V/Å²). Zero for I < 1.
    pub q_conversion: f64,
}

impl Isotope {
    /// Nuclear Zeeman frequency per Gauss in MHz.
    pub fn gamma_mhz_per_gauss(&self) -> f64 {
        self.gamma_over_2pi * 1e-6
    }

    pub fn is_quadrupolar(&self) -> bool {
        self.spin.twice() >= 2
    }

    pub fn is_magnetic(&self) -> bool {
        self.spin.twice() > 0
    }
}

impl fmt::Display for Isotope {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.symbol)
    }
}

static REGISTRY: [Isotope; 6] = [
    Isotope {
        symbol: "10B",
        element: "B",
        spin: Spin::from_twice(6),
        gamma_over_2pi: 457.5,
        g_n: 0.600,
        abundance: 0.199,
        q_conversion: 0.006818,
    },
    Isotope {
        symbol: "11B",
        element: "B",
        spin: Spin::from_twice(3),
        gamma_over_2pi: 1366.0,
        g_n: 1.792,
        abundance: 0.801,
        q_conversion: 0.01636,
    },
    Isotope {
        symbol: "12C",
        element: "C",
        spin: Spin::ZERO,
        gamma_over_2pi: 0.0,
        g_n: 0.0,
        abundance: 0.989,
        q_conversion: 0.0,
    },
    Isotope {
        symbol: "13C",
        element: "C",
        spin: Spin::HALF,
        gamma_over_2pi: 1071.0,
        g_n: 1.4048,
        abundance: 0.011,
        q_conversion: 0.0,
    },
    Isotope {
        symbol: "14N",
        element: "N",
        spin: Spin::from_twice(2),
        gamma_over_2pi: 308.0,
        g_n: 0.4038,
        abundance: 0.996,
        q_conversion: 0.02471,
    },
    Isotope {
        symbol: "15N",
        element: "N",
        spin: Spin::HALF,
        gamma_over_2pi: -431.7,
        g_n: -0.5664,
        abundance: 0.004,
        q_conversion: 0.0,
    },
];

/// Relative tolerance between γ/2π and g_n·μ_N/h for registry entries.
pub const GAMMA_CONSISTENCY_TOLERANCE: f64 = 5e-3;

/// All known isotopes.
pub fn load_isotope_registry() -> &'static [Isotope] {
    &REGISTRY
}

pub fn lookup(symbol: &str) -> Result<&'static Isotope> {
    REGISTRY
        .iter()
        .find(|iso| iso.symbol == symbol)
        .ok_or_else(|| Error::UnknownIsotope(symbol.to_string()))
}

/// Isotopes of one element, most abundant first.
pub fn isotopes_of(element: &str) -> Result<Vec<&'static Isotope>> {
    let mut found: Vec<_> = REGISTRY
        .iter()
        .filter(|iso| iso.element == element)
        .collect();
    if found.is_empty() {
        return Err(Error::UnknownElement(element.to_string()));
    }
    found.sort_by(|a, b| {
        b.abundance
            .total_cmp(&a.abundance)
            .then(a.symbol.cmp(b.symbol))
    });
    Ok(found)
}

/// The isotope whose hyperfine data is reported for an element: the most
/// abundant one carrying a nuclear spin.
pub fn reference_isotope(element: &str) -> Result<&'static Isotope> {
    isotopes_of(element)?
        .into_iter()
        .find(|iso| iso.is_magnetic())
        .ok_or_else(|| Error::UnknownElement(element.to_string()))
}

/// The isotope assigned to an element when no pattern is requested: the most
/// abundant isotope overall (spinless 12C for carbon).
pub fn default_isotope(element: &str) -> Result<&'static Isotope> {
    Ok(isotopes_of(element)?[0])
}

pub fn check_gamma_consistency(iso: &Isotope) -> bool {
    let from_g = iso.g_n * NUCLEAR_MAGNETON_HZ_PER_GAUSS;
    if iso.gamma_over_2pi == 0.0 {
        return from_g == 0.0;
    }
    ((from_g - iso.gamma_over_2pi) / iso.gamma_over_2pi).abs() <= GAMMA_CONSISTENCY_TOLERANCE
}
