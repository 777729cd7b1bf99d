use apf::arithmetic::*;
use apf::spectrum::{fit_beta, load_zero_table, window_coefficient_sums};
use proptest::prelude::*;
use std::path::PathBuf;

fn zeros_path() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/data/zeta_zeros_1000.txt")
}

/// Counts by testing every pair in the bounding square.
fn lattice_brute(n: i64) -> u64 {
    let s = (n as f64).sqrt() as i64 + 1;
    let mut c = 0;
    for a in -s..=s {
        for b in -s..=s {
            if (a, b) != (0, 0) && a * a + b * b <= n {
                c += 1;
            }
        }
    }
    c
}

fn divisor_brute(n: u64) -> u64 {
    (1..=n).map(|m| (1..=m).filter(|d| m % d == 0).count() as u64).sum()
}

#[test]
fn counts_match_brute_force() {
    for n in 0..=200 {
        assert_eq!(lattice_count_r(n as f64, 1000).unwrap(), lattice_brute(n), "R({n})");
    }
    for n in 1..=200 {
        assert_eq!(divisor_sums(n as f64, 1000).unwrap(), divisor_brute(n), "D({n})");
    }
}

#[test]
fn hyperbola_identity_against_divisor_table() {
    let lim = 1_000_000;
    let d = ArithmeticTable::divisor(lim);
    let mut running = 0u64;
    let mut next_check = 1u64;
    for n in 1..=lim {
        running += d.value(n).unwrap() as u64;
        if n == next_check || n == lim {
            assert_eq!(divisor_sums(n as f64, lim).unwrap(), running, "D({n})");
            next_check = next_check * 3 / 2 + 1;
        }
    }
}

#[test]
fn eightfold_symmetry_of_r2_table() {
    let lim = 5000;
    let r = ArithmeticTable::sum_two_squares(lim);
    let mut cumulative = 0u64;
    for n in 1..=lim {
        cumulative += r.value(n).unwrap() as u64;
        if n % 97 == 0 {
            assert_eq!(cumulative, lattice_count_r(n as f64, lim).unwrap());
        }
    }
}

#[test]
fn psi_increments_are_logs_of_primes() {
    let t = ChebyshevTable::new(2000);
    let mut prev = 0.0;
    for n in 2..=2000u64 {
        let v = t.psi(n as f64).unwrap();
        let inc = v - prev;
        if inc != 0.0 {
            let p = (2..=n).find(|p| n % p == 0).unwrap();
            let mut q = n;
            while q % p == 0 {
                q /= p;
            }
            assert_eq!(q, 1, "{n} is not a prime power");
            assert!((inc - (p as f64).ln()).abs() < 1e-9);
        }
        assert!(v >= prev);
        prev = v;
    }
}

#[test]
fn zeta_spectrum_from_table() {
    let zeros = load_zero_table(zeros_path()).unwrap();
    let s = zeta_spectrum(&zeros, 15.0).unwrap();
    assert_eq!(s.len(), 1);
    let g1 = s.frequencies()[0];
    assert!((g1 - 14.134725141734693).abs() < 1e-12);
    assert!((s.coefficients()[0].norm() - 1.0 / (0.25 + g1 * g1).sqrt()).abs() < 1e-15);
    assert!((s.coefficients()[0].norm() - 0.070703).abs() < 1e-6);
    assert!(zeta_spectrum(&zeros, 14.0).unwrap().is_empty());
    let s = zeta_spectrum(&zeros, 22.0).unwrap();
    assert_eq!(s.len(), 2);
    assert!((s.frequencies()[1] - 21.022).abs() < 1e-3);
    assert!(zeta_spectrum(&zeros, 1e6).is_err());
}

#[test]
fn gauss_spectrum_decay_rate() {
    let s = gauss_spectrum(10_000, GaussNormalization::Classical).unwrap();
    let lmax = s.max_frequency().unwrap();
    let fit = fit_beta(&window_coefficient_sums(&s, 10.0, lmax.floor()).unwrap()).unwrap();
    eprintln!("gauss beta_hat {}", fit.beta_hat);
    assert!((fit.beta_hat - 0.5).abs() <= 0.1, "beta_hat = {}", fit.beta_hat);
}

#[test]
fn gauss_mean_square_gap_decreases() {
    let gaps: Vec<f64> = [50, 200, 800]
        .iter()
        .map(|&x| {
            gauss_mean_square_gap(x, GaussNormalization::Classical, 1.0, 50.0, 2e-3, DEFAULT_COUNT_BUDGET).unwrap()
        })
        .collect();
    eprintln!("mean-square gaps {gaps:?}");
    assert!(gaps[0] > gaps[1] && gaps[1] > gaps[2], "{gaps:?}");
}

proptest! {
    #[test]
    fn divisor_remainder_stays_moderate(y in 2.0..300.0f64) {
        // |v(y)| is O(y^{1/6+ε}) in practice; this catches a wrong main term.
        prop_assert!(divisor_remainder(y, DEFAULT_COUNT_BUDGET).unwrap().abs() < 10.0);
    }

    #[test]
    fn gauss_remainder_stays_moderate(y in 1.0..500.0f64) {
        prop_assert!(gauss_remainder(y, DEFAULT_COUNT_BUDGET).unwrap().abs() < 10.0);
    }
}
