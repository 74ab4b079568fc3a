mod common;

use common::*;
use hbnspin_core::hamiltonian::{build_hamiltonian, Terms};
use hbnspin_core::solvers::{
    exact_transitions, hybrid_solve, perturb_lines, HyperfineMode, Order, SiteSelector,
};
use hbnspin_core::{LineList, SolverSettings, SpinSystem};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const B: f64 = 42.0;

fn exact(sys: &SpinSystem, terms: Terms) -> LineList {
    let h = build_hamiltonian(sys, &field_z(B), terms).unwrap();
    exact_transitions(&h, &SolverSettings::default()).unwrap()
}

/// The N/2 strongest exact lines, sorted by frequency.
fn allowed(lines: &LineList, count: usize) -> Vec<f64> {
    let mut t = lines.transitions().to_vec();
    t.sort_by(|a, b| b.intensity.total_cmp(&a.intensity));
    let mut f: Vec<f64> = t.iter().take(count).map(|t| t.frequency).collect();
    f.sort_by(f64::total_cmp);
    f
}

fn spectral_norm(a: &hbnspin_core::Tensor3) -> f64 {
    a.singular_values().max()
}

#[test]
fn second_order_matches_exact_within_third_order_bound() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut checked = 0;
    for nuclei in [1, 1, 2, 2, 3] {
        for _ in 0..6 {
            let sys = loop {
                let s = random_system(&mut rng, nuclei, 30.0);
                if s.hilbert_dimension() <= 256 {
                    break s;
                }
            };
            let nu_e = 1.3996246 * 2.0 * B;
            // total hyperfine scale; equals ‖A‖ for a single nucleus
            let k: f64 = sys
                .sites
                .iter()
                .map(|s| spectral_norm(&s.hyperfine()))
                .sum();
            let tol = 10.0 * k.powi(3) / (nu_e * nu_e);
            let p =
                perturb_lines(&sys, &field_z(B), Order::Second, HyperfineMode::FullTensor).unwrap();
            let e = allowed(&exact(&sys, Terms::SIMPLIFIED), p.len());
            assert_eq!(e.len(), p.len());
            let mut worst = 0.0f64;
            for (pf, ef) in p.transitions().iter().map(|t| t.frequency).zip(&e) {
                worst = worst.max((pf - ef).abs());
            }
            assert!(worst <= tol, "deviation {worst} exceeds {tol}");
            checked += 1;
        }
    }
    assert!(checked >= 20);
}

#[test]
fn isotropic_exact_matches_breit_rabi() {
    // S = I = 1/2, H = ν S_z + a S·I: closed-form ESR frequencies
    let nu = 1.3996246 * 2.0 * B;
    for a in [-30.0, -5.0, 0.5, 12.0, 30.0] {
        let sys = SpinSystem::new("iso", vec![isotropic_site("C", "13C", a)]);
        let lines = exact(&sys, Terms::SIMPLIFIED);
        let got = allowed(&lines, 2);
        let root = (nu * nu + a * a).sqrt();
        let mut want = vec![
            nu / 2.0 - a / 2.0 + root / 2.0,
            nu / 2.0 + a / 2.0 + root / 2.0,
        ];
        want.sort_by(f64::total_cmp);
        for (g, w) in got.iter().zip(&want) {
            assert!((g - w).abs() < 1e-6, "{g} vs {w}");
        }
    }
}

#[test]
fn isotropic_second_order_formula() {
    let nu = 1.3996246 * 2.0 * B;
    for (el, iso) in NUCLEI {
        let a = 17.3;
        let sys = SpinSystem::new("iso", vec![isotropic_site(el, iso, a)]);
        let spin = sys.sites[0].isotope.spin;
        let ii = spin.value() * (spin.value() + 1.0);
        let p = perturb_lines(&sys, &field_z(B), Order::Second, HyperfineMode::FullTensor).unwrap();
        let mut want: Vec<f64> = spin
            .projections()
            .map(|m| nu + a * m + a * a / (2.0 * nu) * (ii - m * m))
            .collect();
        want.sort_by(f64::total_cmp);
        let got: Vec<f64> = p.transitions().iter().map(|t| t.frequency).collect();
        assert_eq!(got.len(), want.len());
        for (g, w) in got.iter().zip(&want) {
            assert!((g - w).abs() < 1e-6, "{iso}: {g} vs {w}");
        }
        let q = perturb_lines(&sys, &field_z(B), Order::Second, HyperfineMode::AConstants).unwrap();
        for (x, y) in p.transitions().iter().zip(q.transitions()) {
            assert!((x.frequency - y.frequency).abs() < 1e-9);
        }
    }
}

#[test]
fn exact_intensity_sum_rule_when_electron_zeeman_dominates() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for nuclei in 1..=3 {
        for _ in 0..4 {
            let sys = random_system(&mut rng, nuclei, 10.0);
            let h = build_hamiltonian(&sys, &field_z(B), Terms::FULL.with_nqi(false)).unwrap();
            let n = h.dimension() as f64;
            let settings = SolverSettings {
                intensity_floor: 0.0,
                ..SolverSettings::default()
            };
            let total: f64 = exact_transitions(&h, &settings)
                .unwrap()
                .transitions()
                .iter()
                .map(|t| t.intensity)
                .sum();
            assert!(
                (total / (n / 8.0) - 1.0).abs() < 0.05,
                "sum {total} vs {}",
                n / 8.0
            );
        }
    }
}

#[test]
fn hybrid_with_every_site_exact_equals_exact() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for nuclei in 1..=3 {
        let sys = random_system(&mut rng, nuclei, 30.0);
        let all: Vec<usize> = (0..nuclei).collect();
        let terms = Terms::SIMPLIFIED.with_nzi(true);
        let settings = SolverSettings::default();
        let hy = hybrid_solve(
            &sys,
            &SiteSelector::Indices(all),
            &field_z(B),
            terms,
            &settings,
        )
        .unwrap();
        let ex = exact(&sys, terms);
        assert_eq!(hy.len(), ex.len());
        for (a, b) in hy.transitions().iter().zip(ex.transitions()) {
            assert!((a.frequency - b.frequency).abs() < 1e-8);
            assert!((a.strength() - b.strength()).abs() < 1e-12);
        }
    }
}

#[test]
fn carbon13_center_splits_into_doublet() {
    let ds = hbnspin_core::spincore::bundled_dataset();
    let rec = ds.get("CB0").unwrap();
    let c = rec.central_site().unwrap();
    let iso = hbnspin_core::spincore::isotope::lookup("13C").unwrap();
    let choice = hbnspin_core::spincore::IsotopeChoice::natural_majority().with_site(c, iso);
    let sys = rec.spin_system(&choice).unwrap().subsystem(&[c]);
    let lines = exact(&sys, Terms::SIMPLIFIED.with_nzi(true));
    let f = allowed(&lines, 2);
    assert!(
        ((f[1] - f[0]) - 231.3).abs() < 5.0,
        "splitting {}",
        f[1] - f[0]
    );
}
