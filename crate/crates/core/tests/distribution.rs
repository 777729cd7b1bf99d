use apf::arithmetic::{gauss_spectrum, GaussNormalization};
use apf::distribution::*;
use apf::moments::{theoretical_moment, MomentOptions};
use apf::trigsum::eval_grid;
use apf::{CutoffSchedule, Spectrum};
use num_complex::Complex64;
use proptest::prelude::*;
use std::f64::consts::PI;

fn cosine() -> Spectrum {
    Spectrum::new(vec![1.0], vec![Complex64::new(1.0, 0.0)]).unwrap()
}

fn arcsine_estimate(bins: usize) -> DistributionEstimate {
    let y = 2000.0 * PI;
    let f = sample_for_distribution(&cosine(), y).unwrap();
    estimate_distribution(&f, y, bins).unwrap()
}

/// Mass of [s, 2] under the law of 2cos(θ), θ uniform.
fn arcsine_upper(s: f64) -> f64 {
    (s / 2.0).acos() / PI
}

#[test]
fn arcsine_law() {
    let est = arcsine_estimate(200);
    let total: f64 = est.masses.iter().sum();
    assert!((total - 1.0).abs() <= 1e-12);
    for s in [0.0, 0.5, 1.0, 1.5, 1.9] {
        assert!((est.mass_between(s, 2.0) - arcsine_upper(s)).abs() < 0.01, "S={s}");
    }
    assert!((est.mass_between(1.0, 2.0) - 1.0 / 3.0).abs() < 0.01);
    assert!((est.moment(2) - 2.0).abs() < 0.02);
    assert!(est.support_radius <= 2.0 + 1e-12);
}

#[test]
fn arcsine_moments_match_resonance_sums() {
    let est = arcsine_estimate(200);
    let reports: Vec<_> = (1..=4)
        .map(|n| theoretical_moment(&cosine(), n, &MomentOptions::exact()).unwrap())
        .collect();
    let cmp = compare_moments(&est, &reports);
    assert_eq!(cmp.len(), 4);
    for c in &cmp {
        assert!(c.gap.abs() <= 0.05, "{c:?}");
    }
}

#[test]
fn doubling_bins_is_stable() {
    let a = arcsine_estimate(200);
    let b = arcsine_estimate(400);
    for (lo, hi) in [(-2.0, -1.0), (-0.5, 0.5), (1.0, 2.0), (0.3, 1.7)] {
        assert!((a.mass_between(lo, hi) - b.mass_between(lo, hi)).abs() <= 0.01);
    }
}

#[test]
fn resonant_spectrum_distribution() {
    let s = Spectrum::new(vec![1.0, 2.0, 3.0], vec![Complex64::new(1.0, 0.0); 3]).unwrap();
    let f = sample_for_distribution(&s, 1e4).unwrap();
    let est = estimate_distribution(&f, 1e4, 200).unwrap();
    assert!(est.support_radius <= 6.0 + 1e-12);
    assert!((est.moment(3) - 18.0).abs() <= 1.0, "{}", est.moment(3));
}

#[test]
fn truncation_edge_cases() {
    let s = Spectrum::new(vec![1.0, 2.5], vec![Complex64::new(0.5, 0.1), Complex64::new(0.2, 0.0)]).unwrap();
    let below = truncated_distribution(&s, 0.5, 100.0, 50).unwrap();
    assert!(below.degenerate);
    assert_eq!(below.mass_between(-0.1, 0.1), 1.0);
    let above = truncated_distribution(&s, 10.0, 100.0, 50).unwrap();
    let f = sample_for_distribution(&s, 100.0).unwrap();
    let full = estimate_distribution(&f, 100.0, 50).unwrap();
    assert_eq!(above.masses, full.masses);
    assert_eq!(above.bin_edges, full.bin_edges);
}

#[test]
fn truncated_support_grows_like_square_root() {
    let s = gauss_spectrum(2000, GaussNormalization::Classical).unwrap();
    let ratios: Vec<f64> = [10.0, 20.0, 40.0, 80.0]
        .iter()
        .map(|&t| truncated_distribution(&s, t, 200.0, 50).unwrap().support_radius / t.sqrt())
        .collect();
    let (lo, hi) = ratios
        .iter()
        .fold((f64::INFINITY, 0.0f64), |(a, b), &r| (a.min(r), b.max(r)));
    assert!(hi / lo < 3.0, "{ratios:?}");
}

#[test]
fn finite_spectrum_tails_are_compact() {
    let s = Spectrum::new(
        vec![1.0, 2f64.sqrt()],
        vec![Complex64::new(0.7, 0.2), Complex64::new(-0.4, 0.3)],
    )
    .unwrap();
    let bound = 2.0 * s.coefficient_l1_up_to(f64::INFINITY);
    let f = sample_for_distribution(&s, 500.0).unwrap();
    let est = estimate_distribution(&f, 500.0, 100).unwrap();
    let grid: Vec<f64> = (1..=20).map(|k| bound * k as f64 / 20.0).collect();
    let fit = fit_tails(&est, &grid, Some(0.75)).unwrap();
    assert!(fit.compact_support);
    assert_eq!(fit.predicted_exponent, Some(1.0));
    assert!(fit.tail_masses.windows(2).all(|w| w[1] <= w[0]));
}

#[test]
fn heavy_tail_fit_recovers_exponent() {
    // v = 1/(1 − 0.99u) with u uniform: μ(v ≥ S) = (1/S − 0.01)/0.99 on [1, 100].
    let n = 200_000;
    let values: Vec<f64> = (0..=n).map(|k| 1.0 / (1.0 - 0.99 * k as f64 / n as f64)).collect();
    let f = apf::SampledFunction::new(0.0, 1.0, values).unwrap();
    let est = estimate_distribution(&f, n as f64, 5000).unwrap();
    let grid: Vec<f64> = (0..10).map(|k| 2.0 * 1.4f64.powi(k)).collect();
    let fit = fit_tails(&est, &grid, None).unwrap();
    let e = fit.exponent_hat.unwrap();
    let exact: Vec<f64> = grid.iter().map(|s| ((1.0 / s - 0.01) / 0.99).ln()).collect();
    let logs: Vec<f64> = grid.iter().map(|s| s.ln()).collect();
    let expected = -apf::numeric::linear_fit(&logs, &exact).unwrap().slope;
    assert!((e - expected).abs() < 0.02, "exponent {e} vs {expected}");
    assert!(!fit.compact_support);
}

proptest! {
    #[test]
    fn mass_and_support_invariants(
        coefs in prop::collection::vec((-1.0..1.0f64, -1.0..1.0f64), 1..5),
        t in 0.5..6.0f64,
    ) {
        let freqs: Vec<f64> = (1..=coefs.len()).map(|k| k as f64 * 1.3).collect();
        let s = Spectrum::new(freqs, coefs.iter().map(|&(a, b)| Complex64::new(a, b)).collect()).unwrap();
        let est = truncated_distribution(&s, t, 60.0, 40).unwrap();
        let total: f64 = est.masses.iter().sum();
        prop_assert!((total - 1.0).abs() <= 1e-12);
        prop_assert!(est.masses.iter().all(|&m| m >= 0.0));
        prop_assert!(est.bin_edges.windows(2).all(|w| w[0] < w[1]));
        prop_assert!(est.support_radius <= 2.0 * s.coefficient_l1_up_to(t) * (1.0 + 1e-12) + 1e-15);
    }

    #[test]
    fn tails_never_increase(s0 in 0.01..1.0f64, ratio in 1.01..1.5f64) {
        let s = Spectrum::new(vec![1.0, 3.1], vec![Complex64::new(0.6, 0.0), Complex64::new(0.3, 0.2)]).unwrap();
        let f = eval_grid(&s, 0.0, 100.0, 0.05, CutoffSchedule::constant(4.0), true).unwrap();
        let est = estimate_distribution(&f, 100.0, 64).unwrap();
        let grid: Vec<f64> = (0..12).map(|k| s0 * ratio.powi(k)).collect();
        let fit = fit_tails(&est, &grid, None).unwrap();
        prop_assert!(fit.tail_masses.windows(2).all(|w| w[1] <= w[0]));
    }
}
