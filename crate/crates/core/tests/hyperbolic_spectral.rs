use apf::hyperbolic::counting::DEFAULT_ORBIT_BUDGET;
use apf::hyperbolic::kernels::*;
use apf::hyperbolic::remainder::*;
use apf::hyperbolic::shc::*;
use apf::hyperbolic::*;
use num_complex::Complex64;
use proptest::prelude::*;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

#[test]
fn quarter_closed_form_in_every_exact_regime() {
    for r in [0.5, 1.0, 2.0, 4.0] {
        let exact = shc_quarter_closed(r);
        let a = shc_integral(r, c(0.0, 0.5)).unwrap();
        let b = shc_hypergeometric(r, c(0.0, 0.5)).unwrap();
        assert!((a.re - exact).abs() <= 1e-8, "R={r}");
        assert!((b.re - exact).abs() <= 1e-8 * exact.max(1.0), "R={r}");
    }
    assert!((shc_quarter_closed(1.0) - 3.412276265284902).abs() < 1e-12);
}

#[test]
fn zero_argument_gap_stays_under_envelope() {
    let consts: Vec<f64> = [4.0, 6.0, 8.0]
        .iter()
        .map(|&r| (shc_integral(r, c(0.0, 0.0)).unwrap().re - shc_zero_leading(r)).abs() * (0.5 * r).exp())
        .collect();
    assert!(consts.windows(2).all(|w| w[1] <= w[0]), "{consts:?}");
    assert!(consts[0].is_finite() && consts[0] < 1.0);
}

#[test]
fn asymptotic_regime_within_error_term() {
    for r in [4.0, 6.0, 8.0] {
        for t in [1.0, 5.0, 20.0] {
            let a = shc_integral(r, c(t, 0.0)).unwrap().re;
            let b = shc_asymptotic(r, c(t, 0.0)).unwrap().re;
            let env = (-1.5 * r).exp() / (t * (1.0 + t.sqrt()));
            assert!((a - b).abs() <= 3.0 * env, "R={r} t={t}");
        }
    }
}

#[test]
fn imaginary_regime_error_is_bounded() {
    // At |τ| = 1/2 the error term O((1+|τ|⁻¹) e^{R(1/2−|τ|)}) is a constant.
    let gaps: Vec<f64> = [1.0, 2.0, 4.0, 6.0, 8.0]
        .iter()
        .map(|&r| (shc_imag(r, c(0.0, 0.5)).unwrap().re - shc_quarter_closed(r)).abs() / 3.0)
        .collect();
    assert!(gaps.iter().all(|&g| g < 2.5), "{gaps:?}");
    // Away from 1/2 the relative error shrinks with R.
    let rel = |r: f64| {
        let a = shc_integral(r, c(0.0, 0.3)).unwrap().re;
        (shc_imag(r, c(0.0, 0.3)).unwrap().re - a).abs() / a
    };
    assert!(rel(8.0) < rel(4.0) && rel(4.0) < rel(2.0));
}

#[test]
fn small_radius_regime() {
    for d in [0.1, 0.05, 0.025] {
        let h = shc_small_r(d, c(0.0, 0.0)).unwrap().re / disc_area(d);
        assert!((h - 1.0).abs() <= d * d, "δ={d}");
    }
    for t in [1.0, 5.0] {
        let rel = |r: f64| {
            let a = shc_integral(r, c(t, 0.0)).unwrap();
            (shc_small_r(r, c(t, 0.0)).unwrap() - a).norm() / a.norm()
        };
        assert!(rel(0.1) < rel(0.2) && rel(0.2) < rel(0.4), "t={t}");
    }
}

#[test]
fn fourier_pair() {
    let f = fourier_consistency(1.0, 400.0).unwrap();
    assert!(f.relative_gap < 1e-3, "{f:?}");
    assert!(f.relative_gap <= f.tail_bound);
}

#[test]
fn kernel_sandwich_on_grids() {
    for s in [2.0, 3.0] {
        for delta in [0.1, 0.05] {
            let k = smoothed_kernels(s, delta, &default_u_grid(s, delta, 100)).unwrap();
            assert!(k.sandwich_violations().is_empty());
            let (hp, hm) = h_pm(s, delta, c(0.0, 0.5)).unwrap();
            let exact = shc_quarter_closed(s);
            assert!((hp.re - exact).abs() <= 10.0 * delta * s.exp());
            assert!((hm.re - exact).abs() <= 10.0 * delta * s.exp());
        }
    }
}

#[test]
fn kernel_mass_matches_ball_area() {
    // ∫ k^± dμ equals the area of the ball of radius s ± δ.
    let (s, delta) = (2.0, 0.1);
    let area = |r: f64| 4.0 * std::f64::consts::PI * (0.5_f64 * r).sinh().powi(2);
    for (k, r) in [(k_plus as fn(f64, f64, f64) -> _, s + delta), (k_minus, s - delta)] {
        // dμ = 4π du in terms of u around a fixed centre.
        let mass = apf::numeric::adaptive(
            |u| 4.0 * std::f64::consts::PI * k(s, delta, u).unwrap(),
            0.0,
            apf::hyperbolic::geometry::u_from_distance(s + 3.0 * delta),
            &[
                apf::hyperbolic::geometry::u_from_distance(s - 2.0 * delta),
                apf::hyperbolic::geometry::u_from_distance(s),
                apf::hyperbolic::geometry::u_from_distance(s + 2.0 * delta),
            ],
            apf::numeric::quad::Tolerance::relative(1e-8),
        )
        .unwrap();
        assert!((mass - area(r)).abs() <= 1e-6 * area(r), "{mass} vs {}", area(r));
    }
}

#[test]
fn variance_windows() {
    let sd = SpectralData::modular();
    let p = ModularScan
        .profile(7.0, HPoint::I, HPoint::I, DEFAULT_ORBIT_BUDGET)
        .unwrap();
    for t in [3.0, 4.0, 5.0, 6.0] {
        let v = variance_window(&p, &sd, t, 1e-3).unwrap();
        let naive = variance_window_naive(&p, &sd, t, 1e-4).unwrap();
        assert!((naive - v.h).abs() <= v.naive_error_bound(1e-4), "T={t}");
        assert!(v.h / t < 1.0);
    }
}

#[test]
fn variance_of_exact_main_term_is_zero() {
    // With M replaced by N the remainder vanishes identically; emulate it
    // with an orbit profile that has no points and zero main term.
    let mut p = ModularScan
        .profile(3.0, HPoint::I, HPoint::I, DEFAULT_ORBIT_BUDGET)
        .unwrap();
    p.distances.clear();
    p.elements.clear();
    let sd = SpectralData {
        volume: f64::INFINITY,
        ..SpectralData::modular()
    };
    assert_eq!(variance_window(&p, &sd, 1.0, 1e-2).unwrap().h, 0.0);
}

#[test]
fn remainder_sanity() {
    let sd = SpectralData::modular();
    let p = ModularScan
        .profile(8.0, HPoint::I, HPoint::I, DEFAULT_ORBIT_BUDGET)
        .unwrap();
    assert!((remainder_e(&p, &sd, 0.0).unwrap().e + 1.0).abs() < 1e-14);
    let mean = (0..=30)
        .map(|k| remainder_e(&p, &sd, 5.0 + 0.1 * k as f64).unwrap().e.abs())
        .sum::<f64>()
        / 31.0;
    assert!(mean < 10.0);
}

#[test]
fn integrated_remainder() {
    let sd = SpectralData::modular();
    let p = ModularScan
        .profile(8.0, HPoint::I, HPoint::I, DEFAULT_ORBIT_BUDGET)
        .unwrap();
    assert_eq!(integrated_remainder_g3(&p, &sd, 0.0).unwrap().value, 0.0);
    let g = integrated_remainder_g3(&p, &sd, 1.0).unwrap();
    let (f, bound) = g3_fixed_step(&p, &sd, 1.0, 1e-4).unwrap();
    assert!((g.value - f).abs() <= bound);
    // ∫_0^1 N = Σ_{d_k ≤ 1} (1 − d_k); the stabilizer contributes 2·1.
    let direct: f64 = p.distances.iter().filter(|&&d| d <= 1.0).map(|d| 1.0 - d).sum();
    assert!((g.integral_n - direct).abs() < 1e-14);
    assert!(g.integral_n >= 2.0);
    // Continuity across a jump.
    let j = p.distances.iter().copied().find(|&d| d > 1.0).unwrap();
    let a = integrated_remainder_g3(&p, &sd, j - 1e-9).unwrap().value;
    let b = integrated_remainder_g3(&p, &sd, j + 1e-9).unwrap().value;
    assert!((a - b).abs() < 1e-7);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn integral_transform_is_even(r in 0.2..5.0f64, t in 0.0..10.0f64) {
        let a = shc_integral(r, c(t, 0.0)).unwrap();
        let b = shc_integral(r, c(-t, 0.0)).unwrap();
        prop_assert!((a - b).norm() <= 1e-10 * a.norm().max(1.0));
        prop_assert!(a.im.abs() <= 1e-12 * a.norm().max(1.0));
    }

    #[test]
    fn hypergeometric_agrees_with_quadrature(r in 0.2..6.0f64, t in 0.3..15.0f64) {
        let a = shc_integral(r, c(t, 0.0)).unwrap();
        let b = shc_hypergeometric(r, c(t, 0.0)).unwrap();
        prop_assert!((a - b).norm() <= 1e-8 * a.norm().max(1.0), "{} vs {}", a, b);
    }

    #[test]
    fn sandwich_holds_pointwise(s in 0.5..4.0f64, delta in 0.01..0.2f64, frac in 0.0..1.0f64) {
        prop_assume!(s > delta);
        let u = frac * apf::hyperbolic::geometry::u_from_distance(s + 3.0 * delta);
        let one = ball_indicator(s, u);
        prop_assert!(k_minus(s, delta, u).unwrap() <= one && one <= k_plus(s, delta, u).unwrap());
    }
}
