use crate::spincore::Isotope;
use crate::{Error, Result, Tensor3};

/// Converts an electric-field-gradient tensor (V/Å²) into the quadrupole
/// coupling matrix Q (MHz) using the isotope's conversion constant
/// e·q_n / (2I(2I−1)·h).
pub fn efg_to_quadrupole(efg: &Tensor3, isotope: &Isotope) -> Result<Tensor3> {
    if !isotope.is_quadrupolar() {
        return Err(Error::NonQuadrupolar(isotope.symbol.to_string()));
    }
    let scale = efg.abs().max().max(1e-300);
    if (efg - efg.transpose()).abs().max() > 1e-9 * scale {
        return Err(Error::InvalidTensor("EFG tensor is not symmetric".into()));
    }
    Ok(efg * isotope.q_conversion)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spincore::isotope::lookup;
    use crate::Vec3;

    #[test]
    fn boron_and_nitrogen_constants() {
        let b11 = lookup("11B").unwrap();
        let q = efg_to_quadrupole(&(Tensor3::identity() * 3.0), b11).unwrap();
        assert!((q - Tensor3::identity() * 0.04908).abs().max() < 1e-15);

        let n14 = lookup("14N").unwrap();
        assert_eq!(
            efg_to_quadrupole(&Tensor3::zeros(), n14).unwrap(),
            Tensor3::zeros()
        );
    }

    #[test]
    fn traceless_input_gives_traceless_output() {
        let b11 = lookup("11B").unwrap();
        let v = Tensor3::from_diagonal(&Vec3::new(1.0, 1.0, -2.0));
        let q = efg_to_quadrupole(&v, b11).unwrap();
        let expected = Tensor3::from_diagonal(&Vec3::new(0.01636, 0.01636, -0.03272));
        assert!((q - expected).abs().max() < 1e-15);
        assert!(q.trace().abs() < 1e-15);
    }

    #[test]
    fn prefactor_from_quadrupole_moment() {
        // e·Q·(1 V/Å²) / (2I(2I−1)·h) with Q(11B) = 40.59 mb, I = 3/2
        let e = 1.602_176_634e-19;
        let h = 6.626_070_15e-34;
        let q_moment = 40.59e-31; // m²
        let per_v_per_a2 = 1e20; // V/m²
        let mhz = e * q_moment * per_v_per_a2 / (3.0 * 2.0 * h) * 1e-6;
        assert!((mhz - lookup("11B").unwrap().q_conversion).abs() < 5e-6);
        // 14N: Q = 20.44 mb, I = 1
        let mhz = e * 20.44e-31 * per_v_per_a2 / (2.0 * h) * 1e-6;
        assert!((mhz - lookup("14N").unwrap().q_conversion).abs() < 5e-6);
        // 10B: Q = 84.59 mb, I = 3
        let mhz = e * 84.59e-31 * per_v_per_a2 / (6.0 * 5.0 * h) * 1e-6;
        assert!((mhz - lookup("10B").unwrap().q_conversion).abs() < 5e-6);
    }

    #[test]
    fn rejects_spin_half_and_carbon() {
        for sym in ["13C", "12C", "15N"] {
            assert!(matches!(
                efg_to_quadrupole(&Tensor3::zeros(), lookup(sym).unwrap()),
                Err(Error::NonQuadrupolar(_))
            ));
        }
    }
}
