#![allow(dead_code)]

use hbnspin_core::spincore::isotope::lookup;
use hbnspin_core::spincore::{NuclearSite, SpinSite, SpinSystem};
use hbnspin_core::{Tensor3, Vec3};
use nalgebra::Rotation3;
use rand::Rng;

pub const NUCLEI: [(&str, &str); 4] = [("C", "13C"), ("N", "14N"), ("B", "11B"), ("B", "10B")];

pub fn field_z(b: f64) -> Vec3 {
    Vec3::new(0.0, 0.0, b)
}

pub fn random_rotation<R: Rng>(rng: &mut R) -> Rotation3<f64> {
    let axis = Vec3::new(
        rng.random_range(-1.0..1.0),
        rng.random_range(-1.0..1.0),
        rng.random_range(-1.0..1.0),
    );
    Rotation3::from_scaled_axis(axis.normalize() * rng.random_range(0.0..std::f64::consts::PI))
}

/// Random symmetric traceless tensor with entries up to `scale`, V/Å².
pub fn random_efg<R: Rng>(rng: &mut R, scale: f64) -> Tensor3 {
    let mut v = Tensor3::zeros();
    for r in 0..3 {
        for c in r..3 {
            let x = rng.random_range(-scale..scale);
            v[(r, c)] = x;
            v[(c, r)] = x;
        }
    }
    let t = v.trace() / 3.0;
    v - Tensor3::identity() * t
}

/// Random anisotropic tensor with Frobenius norm `norm` in a random frame.
pub fn random_site<R: Rng>(
    rng: &mut R,
    element: &str,
    iso: &str,
    norm: f64,
    index: usize,
) -> SpinSite {
    let pv = Vec3::new(
        rng.random_range(-1.0..1.0),
        rng.random_range(-1.0..1.0),
        rng.random_range(-1.0..1.0),
    );
    let pv = pv.normalize() * norm;
    let efg = random_efg(rng, 40.0);
    let site = NuclearSite::new(
        element,
        1.0,
        1,
        0.0,
        pv,
        random_rotation(rng),
        Some(efg),
        format!("g{index}"),
    )
    .unwrap();
    let reference_g = site.reference.g_n;
    let isotope = lookup(iso).unwrap().clone();
    // keep the requested norm for the isotope actually placed on the site
    let mut s = SpinSite::new(site, isotope).unwrap();
    s.site.principal_values *= reference_g / s.isotope.g_n;
    s
}

pub fn isotropic_site(element: &str, iso: &str, a: f64) -> SpinSite {
    let site = NuclearSite::new(
        element,
        1.0,
        1,
        0.0,
        Vec3::repeat(a),
        Rotation3::identity(),
        None,
        "iso",
    )
    .unwrap();
    let reference_g = site.reference.g_n;
    let mut s = SpinSite::new(site, lookup(iso).unwrap().clone()).unwrap();
    s.site.principal_values *= reference_g / s.isotope.g_n;
    s
}

pub fn random_system<R: Rng>(rng: &mut R, nuclei: usize, max_norm: f64) -> SpinSystem {
    let sites = (0..nuclei)
        .map(|k| {
            let (el, iso) = NUCLEI[rng.random_range(0..NUCLEI.len())];
            let norm = rng.random_range(1.0..=max_norm);
            random_site(rng, el, iso, norm, k)
        })
        .collect();
    SpinSystem::new("random", sites)
}
