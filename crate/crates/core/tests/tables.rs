use hbnspin_core::energetics::{
    bundled_binding_inputs, bundled_ctl_records, ctl_diagram, LevelFlag, Transition as Ctl,
};
use hbnspin_core::isotopologues::enumerate_patterns;
use hbnspin_core::solvers::{perturb_lines, sample_configurations, HyperfineMode, Order};
use hbnspin_core::spectrum::DEFAULT_WINDOW;
use hbnspin_core::spincore::{bundled_dataset, IsotopeChoice};
use hbnspin_core::{peak_stats, PeakStats, SpinSystem, Vec3};

fn shipped(label: &str) -> SpinSystem {
    bundled_dataset()
        .get(label)
        .unwrap()
        .spin_system(&IsotopeChoice::natural_majority())
        .unwrap()
}

fn stats(sys: &SpinSystem, order: Order, mode: HyperfineMode) -> PeakStats {
    let lines = perturb_lines(sys, &Vec3::new(0.0, 0.0, 42.0), order, mode).unwrap();
    peak_stats(&lines, DEFAULT_WINDOW).unwrap()
}

#[test]
fn boron_pattern_probabilities() {
    let cases = [
        ("CB0", vec![26.41, 39.37, 24.45, 8.10, 1.51, 0.15, 0.01]),
        ("CN0", vec![51.39, 38.30, 9.52, 0.79]),
    ];
    for (label, want) in cases {
        let patterns = enumerate_patterns(&shipped(label), &["B"]).unwrap();
        assert_eq!(patterns.len(), want.len());
        let total: f64 = patterns.iter().map(|p| p.probability).sum();
        assert!((total - 1.0).abs() < 1e-9);
        for (k, (p, w)) in patterns.iter().zip(&want).enumerate() {
            assert_eq!(p.count_of("10B"), k);
            assert!(
                (p.probability * 100.0 - w).abs() <= 0.005 + 1e-9,
                "{label} {k}: {}",
                p.probability * 100.0
            );
        }
    }
}

#[test]
fn fwhm_shrinks_with_each_boron10() {
    for (label, want) in [
        ("CB0", vec![43.0, 41.0, 39.0, 37.0, 34.0, 32.0, 29.0]),
        ("CN0", vec![74.0, 66.0, 57.0, 45.0]),
    ] {
        let sys = shipped(label);
        let widths: Vec<f64> = enumerate_patterns(&sys, &["B"])
            .unwrap()
            .iter()
            .map(|p| {
                stats(
                    &p.apply(&sys).unwrap(),
                    Order::Second,
                    HyperfineMode::FullTensor,
                )
                .fwhm_gauss
            })
            .collect();
        for w in widths.windows(2) {
            assert!(w[1] < w[0], "{label}: {widths:?}");
        }
        for (got, w) in widths.iter().zip(&want) {
            assert!((got - w).abs() <= 0.15 * w, "{label}: {got} vs {w}");
        }
    }
}

#[test]
fn second_order_statistics() {
    let cb = stats(&shipped("CB0"), Order::Second, HyperfineMode::FullTensor);
    let cn = stats(&shipped("CN0"), Order::Second, HyperfineMode::FullTensor);
    assert!((cb.fwhm_gauss - 43.0).abs() < 0.15 * 43.0 && (cb.center - 119.0).abs() < 3.0);
    assert!((cn.fwhm_gauss - 74.0).abs() < 0.15 * 74.0 && (cn.center - 132.0).abs() < 3.0);
    let first = stats(&shipped("CN0"), Order::First, HyperfineMode::FullTensor);
    assert!((first.center - 117.568).abs() < 0.01);
    let constants = stats(&shipped("CN0"), Order::Second, HyperfineMode::AConstants);
    assert!(constants.fwhm_gauss > 1.4 * cn.fwhm_gauss);
}

#[test]
fn sampling_tracks_enumeration_and_is_reproducible() {
    let sys = shipped("CN0");
    let b = Vec3::new(0.0, 0.0, 42.0);
    let full = stats(&sys, Order::Second, HyperfineMode::FullTensor);
    let run = || {
        sample_configurations(
            &sys,
            &b,
            Order::Second,
            HyperfineMode::FullTensor,
            100_000,
            42,
            0,
        )
        .unwrap()
    };
    let a = run();
    let mc = peak_stats(&a, DEFAULT_WINDOW).unwrap();
    assert!((mc.fwhm_gauss / full.fwhm_gauss - 1.0).abs() < 0.02);
    assert_eq!(a.transitions(), run().transitions());
    let small = sample_configurations(
        &sys,
        &b,
        Order::Second,
        HyperfineMode::FullTensor,
        10,
        1,
        u128::MAX,
    )
    .unwrap();
    assert_eq!(
        small.transitions(),
        perturb_lines(&sys, &b, Order::Second, HyperfineMode::FullTensor)
            .unwrap()
            .transitions()
    );
}

#[test]
fn charge_transition_table() {
    let table = [
        ("CB", 3.81, 4.11, Some(6.39), 5.79),
        ("CN", 0.21, 0.47, Some(3.27), 2.72),
        ("CBCN-DAP-1", 0.85, 1.13, Some(5.99), 5.42),
        ("CBCN-DAP-2", 1.73, 2.01, Some(5.25), 4.68),
        ("CBCN-DAP-sqrt7", 2.02, 2.31, Some(5.10), 4.53),
        ("CBCN-DAP-sqrt13", 2.29, 2.57, Some(4.81), 4.23),
        ("CBCN-DAP-4", 2.37, 2.65, Some(4.77), 4.20),
        ("C2CB", 3.66, 3.94, None, 5.40),
        ("C2CN", 0.71, 0.98, Some(3.29), 2.72),
    ];
    let d = ctl_diagram(&bundled_ctl_records()).unwrap();
    assert_eq!(d.rows.len(), 36);
    for (label, cp, up, cm, um) in table {
        let close = |t, c, v: f64| (d.get(label, t, c).unwrap().level.unwrap() - v).abs() < 0.005;
        assert!(
            close(Ctl::PlusZero, true, cp) && close(Ctl::PlusZero, false, up),
            "{label}"
        );
        assert!(close(Ctl::ZeroMinus, false, um), "{label}");
        match cm {
            Some(v) => assert!(close(Ctl::ZeroMinus, true, v), "{label}"),
            None => assert_eq!(
                d.get(label, Ctl::ZeroMinus, true).unwrap().flag,
                LevelFlag::Unclear
            ),
        }
    }
    assert_eq!(
        d.get("CB", Ctl::ZeroMinus, true).unwrap().flag,
        LevelFlag::AboveCbm
    );
    let lowest_uncorrected = d
        .rows
        .iter()
        .filter(|r| !r.corrected)
        .min_by(|a, b| a.level.unwrap().total_cmp(&b.level.unwrap()))
        .unwrap();
    assert_eq!(
        (
            lowest_uncorrected.label.as_str(),
            lowest_uncorrected.transition
        ),
        ("CN", Ctl::PlusZero)
    );
}

#[test]
fn binding_energy_table() {
    let want = [
        ("CBCN-DAP-1", -3.93),
        ("CBCN-DAP-2", -2.04),
        ("CBCN-DAP-sqrt7", -1.90),
        ("CBCN-DAP-sqrt13", -1.52),
        ("CBCN-DAP-4", -1.49),
        ("C2CB", -5.31),
        ("C2CN", -5.28),
    ];
    let inputs = bundled_binding_inputs();
    assert_eq!(inputs.len(), want.len());
    for (input, (label, eb)) in inputs.iter().zip(want) {
        assert_eq!(input.complex.label, label);
        assert!(
            (input.binding_energy().unwrap() - eb).abs() < 0.005,
            "{label}"
        );
    }
}
