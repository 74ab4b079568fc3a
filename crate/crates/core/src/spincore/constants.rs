//! Physical constants, expressed in the frequency units used throughout the crate.

/// Bohr magneton over Planck constant, MHz per Gauss per unit g.
pub const ELECTRON_ZEEMAN_MHZ_PER_GAUSS: f64 = 1.3996246;

/// Nuclear magneton over Planck constant, Hz per Gauss per unit g_n.
pub const NUCLEAR_MAGNETON_HZ_PER_GAUSS: f64 = 762.259_322_9;

/// 2·sqrt(2·ln 2): FWHM of a unit-variance Gaussian.
pub const GAUSSIAN_FWHM_FACTOR: f64 = 2.354_820_045_030_949_3;

/// Indirect band gap of bulk hBN used as the CBM reference, eV.
pub const HBN_INDIRECT_GAP_EV: f64 = 5.950;

/// Default external field magnitude, Gauss.
pub const DEFAULT_FIELD_GAUSS: f64 = 42.0;

/// Lines below this frequency are nuclear (core) transitions and are excluded
/// from peak statistics by default, MHz.
pub const LOW_FREQUENCY_CUTOFF_MHZ: f64 = 30.0;

/// Bundle of the constants above, for callers that prefer passing a value.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PhysicalConstants {
    pub electron_zeeman_factor: f64,
    pub gaussian_fwhm_factor: f64,
}

impl PhysicalConstants {
    pub const STANDARD: PhysicalConstants = PhysicalConstants {
        electron_zeeman_factor: ELECTRON_ZEEMAN_MHZ_PER_GAUSS,
        gaussian_fwhm_factor: GAUSSIAN_FWHM_FACTOR,
    };
}

impl Default for PhysicalConstants {
    fn default() -> Self {
        Self::STANDARD
    }
}

/// Electron Larmor frequency in MHz for an isotropic g-factor.
pub fn electron_larmor_mhz(g: f64, field_gauss: f64) -> f64 {
    g * ELECTRON_ZEEMAN_MHZ_PER_GAUSS * field_gauss
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fwhm_factor_squared_is_eight_ln2() {
        let f = PhysicalConstants::STANDARD.gaussian_fwhm_factor;
        let target = 8.0 * std::f64::consts::LN_2;
        assert!(((f * f - target) / target).abs() < 1e-12);
        assert!((f - 2.0 * (2.0 * std::f64::consts::LN_2).sqrt()).abs() < 1e-15);
    }

    #[test]
    fn larmor_at_42_gauss() {
        assert!((electron_larmor_mhz(2.0, 42.0) - 117.568_466_4).abs() < 1e-9);
    }
}
