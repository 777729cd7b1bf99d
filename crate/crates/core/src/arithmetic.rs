//! Exact arithmetic counting functions (Chebyshev ψ, lattice points in
//! discs, divisor sums), their normalized remainders and the spectra of
//! their exponential-sum expansions.

use std::f64::consts::{FRAC_PI_4, PI};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use rayon::prelude::*;

use crate::numeric::{quad::simpson, CompensatedSum};
use crate::spectrum::{Spectrum, ZeroTable};
use crate::trigsum::eval_sum;

/// Default sieve limit for Chebyshev ψ.
pub const DEFAULT_PSI_BUDGET: u64 = 10_000_000;
/// Default limit on `x` for lattice and divisor counts.
pub const DEFAULT_COUNT_BUDGET: u64 = 1_000_000;

/// Euler's constant.
pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

/// Tabulated arithmetic functions on `0..=limit` (index 0 unused).
#[derive(Debug, Clone, PartialEq)]
pub enum ArithmeticTable {
    /// `Λ(n) = log p` for `n = p^k`, else 0.
    VonMangoldt { limit: u64, values: Vec<f64> },
    /// `r(n)`: representations as an ordered sum of two signed squares.
    SumTwoSquares { limit: u64, values: Vec<u32> },
    /// `d(n)`: number of divisors.
    Divisor { limit: u64, values: Vec<u32> },
}

impl ArithmeticTable {
    pub fn von_mangoldt(limit: u64) -> Self {
        let primes = prime_sieve(limit);
        let mut values = vec![0.0; limit as usize + 1];
        for (p, _) in primes.iter().enumerate().filter(|(_, &is_p)| is_p) {
            let lp = (p as f64).ln();
            let mut q = p as u64;
            while q <= limit {
                values[q as usize] = lp;
                match q.checked_mul(p as u64) {
                    Some(next) => q = next,
                    None => break,
                }
            }
        }
        Self::VonMangoldt { limit, values }
    }

    pub fn sum_two_squares(limit: u64) -> Self {
        Self::SumTwoSquares {
            limit,
            values: r2_table(limit),
        }
    }

    pub fn divisor(limit: u64) -> Self {
        let mut values = vec![0u32; limit as usize + 1];
        for k in 1..=limit as usize {
            for m in (k..=limit as usize).step_by(k) {
                values[m] += 1;
            }
        }
        Self::Divisor { limit, values }
    }

    pub fn limit(&self) -> u64 {
        match self {
            Self::VonMangoldt { limit, .. } | Self::SumTwoSquares { limit, .. } | Self::Divisor { limit, .. } => *limit,
        }
    }

    /// Value at `n` as a float.
    pub fn value(&self, n: u64) -> Option<f64> {
        let i = n as usize;
        match self {
            Self::VonMangoldt { values, .. } => values.get(i).copied(),
            Self::SumTwoSquares { values, .. } | Self::Divisor { values, .. } => values.get(i).map(|&v| v as f64),
        }
    }
}

fn prime_sieve(limit: u64) -> Vec<bool> {
    let n = limit as usize;
    let mut is_prime = vec![true; n + 1];
    is_prime[0] = false;
    if n >= 1 {
        is_prime[1] = false;
    }
    let mut p = 2;
    while p * p <= n {
        if is_prime[p] {
            for m in (p * p..=n).step_by(p) {
                is_prime[m] = false;
            }
        }
        p += 1;
    }
    is_prime
}

fn r2_table(limit: u64) -> Vec<u32> {
    let n = limit as usize;
    let mut r = vec![0u32; n + 1];
    let mut a = 0usize;
    while a * a <= n {
        let mut b = 0usize;
        while a * a + b * b <= n {
            let signs = match (a, b) {
                (0, 0) => 1,
                (0, _) | (_, 0) => 2,
                _ => 4,
            };
            r[a * a + b * b] += signs;
            b += 1;
        }
        a += 1;
    }
    r
}

fn check_budget(what: &str, x: f64, budget: u64) -> Result<()> {
    if x > budget as f64 {
        return Err(Error::BudgetExceeded(format!(
            "{what} at x = {x} exceeds the limit {budget}"
        )));
    }
    Ok(())
}

/// `ψ` at every prime power up to a limit, for repeated lookups.
#[derive(Debug, Clone)]
pub struct ChebyshevTable {
    limit: u64,
    /// Prime powers in increasing order with `ψ` just after each.
    steps: Vec<(u64, f64)>,
}

impl ChebyshevTable {
    pub fn new(limit: u64) -> Self {
        let primes = prime_sieve(limit);
        // Higher prime powers are few; merge them into the prime walk.
        let mut higher: Vec<(u64, f64)> = Vec::new();
        for (p, _) in primes.iter().enumerate().filter(|(_, &is_p)| is_p) {
            let p = p as u64;
            if p.saturating_mul(p) > limit {
                break;
            }
            let lp = (p as f64).ln();
            let mut q = p * p;
            while q <= limit {
                higher.push((q, lp));
                match q.checked_mul(p) {
                    Some(next) => q = next,
                    None => break,
                }
            }
        }
        higher.sort_unstable_by_key(|&(q, _)| q);
        let mut steps = Vec::new();
        let mut acc = CompensatedSum::new();
        let mut hi = higher.iter().peekable();
        for (p, _) in primes.iter().enumerate().filter(|(_, &is_p)| is_p) {
            let p = p as u64;
            while let Some(&&(q, lq)) = hi.peek() {
                if q >= p {
                    break;
                }
                acc.add(lq);
                steps.push((q, acc.value()));
                hi.next();
            }
            acc.add((p as f64).ln());
            steps.push((p, acc.value()));
        }
        for &(q, lq) in hi {
            acc.add(lq);
            steps.push((q, acc.value()));
        }
        Self { limit, steps }
    }

    pub fn limit(&self) -> u64 {
        self.limit
    }

    /// `ψ(x)` for `1 ≤ x ≤ limit`.
    pub fn psi(&self, x: f64) -> Result<f64> {
        if !(x >= 1.0) {
            return Err(Error::OutOfDomain {
                method: "chebyshev_psi",
                msg: format!("x must be at least 1, got {x}"),
            });
        }
        check_budget("chebyshev_psi", x.floor(), self.limit)?;
        let n = x.floor() as u64;
        let k = self.steps.partition_point(|&(q, _)| q <= n);
        Ok(if k == 0 { 0.0 } else { self.steps[k - 1].1 })
    }
}

/// `ψ(x) = Σ_{n ≤ x} Λ(n)` by sieving up to `x`.
pub fn chebyshev_psi(x: f64, budget: u64) -> Result<f64> {
    if !(x >= 1.0) {
        return Err(Error::OutOfDomain {
            method: "chebyshev_psi",
            msg: format!("x must be at least 1, got {x}"),
        });
    }
    check_budget("chebyshev_psi", x.floor(), budget)?;
    ChebyshevTable::new(x.floor() as u64).psi(x)
}

/// Integer part of `e^y`, nudged so that `y = ln n` lands on `n`.
fn exp_floor(y: f64) -> f64 {
    (y.exp() * (1.0 + 1e-12)).floor()
}

/// `q(y) = (ψ(e^y) − e^y) / e^{y/2}` using a prebuilt table.
pub fn pnt_remainder_with(table: &ChebyshevTable, y: f64) -> Result<f64> {
    if !(y >= 0.0) {
        return Err(Error::OutOfDomain {
            method: "pnt_remainder",
            msg: format!("y must be non-negative, got {y}"),
        });
    }
    let x = y.exp();
    let psi = table.psi(exp_floor(y).max(1.0))?;
    Ok((psi - x) / (0.5 * y).exp())
}

/// `q(y) = (ψ(e^y) − e^y) / e^{y/2}`.
pub fn pnt_remainder(y: f64, budget: u64) -> Result<f64> {
    if !(y >= 0.0) {
        return Err(Error::OutOfDomain {
            method: "pnt_remainder",
            msg: format!("y must be non-negative, got {y}"),
        });
    }
    let n = exp_floor(y).max(1.0);
    check_budget("pnt_remainder", n, budget)?;
    pnt_remainder_with(&ChebyshevTable::new(n as u64), y)
}

/// Zero-sum spectrum: `γ_k ≤ X`, `c_k = −1/(1/2 + iγ_k)`.
pub fn zeta_spectrum(zeros: &ZeroTable, x: f64) -> Result<Spectrum> {
    if x > zeros.max_ordinate() {
        return Err(Error::InvalidArgument(format!(
            "cutoff X = {x} exceeds the largest tabulated ordinate {}",
            zeros.max_ordinate()
        )));
    }
    let (freqs, coefs): (Vec<f64>, Vec<Complex64>) = zeros
        .ordinates()
        .iter()
        .take_while(|&&g| g <= x)
        .map(|&g| (g, -Complex64::new(0.5, g).inv()))
        .unzip();
    Spectrum::new(freqs, coefs)
}

fn isqrt(n: u64) -> u64 {
    let mut r = (n as f64).sqrt() as u64;
    while r * r > n {
        r -= 1;
    }
    while (r + 1) * (r + 1) <= n {
        r += 1;
    }
    r
}

/// `R(x)`: lattice points `(a, b) ≠ (0, 0)` with `a² + b² ≤ x`.
pub fn lattice_count_r(x: f64, budget: u64) -> Result<u64> {
    if !(x >= 0.0) {
        return Err(Error::OutOfDomain {
            method: "lattice_count_R",
            msg: format!("x must be non-negative, got {x}"),
        });
    }
    check_budget("lattice_count_R", x, budget)?;
    let n = x.floor() as u64;
    let s = isqrt(n);
    let mut quarter = 0u64;
    // Points with a ≥ 1, b ≥ 0; rotating by 90° covers the plane minus the origin.
    for a in 1..=s {
        quarter += isqrt(n - a * a) + 1;
    }
    Ok(4 * quarter)
}

/// `u(y) = (R(y²) − πy²) / y^{1/2}`.
pub fn gauss_remainder(y: f64, budget: u64) -> Result<f64> {
    if !(y > 0.0) {
        return Err(Error::OutOfDomain {
            method: "gauss_remainder",
            msg: format!("y must be positive, got {y}"),
        });
    }
    let x = y * y;
    Ok((lattice_count_r(x, budget)? as f64 - PI * x) / y.sqrt())
}

/// Normalization of the circle-problem expansion.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum GaussNormalization {
    /// Frequencies `2π√n`, coefficients `r(n) e^{−3πi/4} / (2π n^{3/4})`:
    /// the Voronoi-type expansion of `u(y)`.
    #[default]
    Classical,
    /// Frequencies `4π√n`, coefficients `r(n) e^{−iπ/4} / (2π√2 n^{3/4})`.
    Alternate,
}

impl std::str::FromStr for GaussNormalization {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "classical" => Ok(Self::Classical),
            "alternate" => Ok(Self::Alternate),
            other => Err(Error::InvalidArgument(format!(
                "unknown normalization {other:?} (expected classical or alternate)"
            ))),
        }
    }
}

/// Spectrum of the circle-problem expansion over `1 ≤ n ≤ n_max`, skipping
/// `n` with `r(n) = 0`.
pub fn gauss_spectrum(n_max: u64, norm: GaussNormalization) -> Result<Spectrum> {
    if n_max < 1 {
        return Err(Error::InvalidArgument("n_max must be at least 1".into()));
    }
    let r = r2_table(n_max);
    let (scale, phase, denom) = match norm {
        GaussNormalization::Classical => (2.0 * PI, -3.0 * FRAC_PI_4, 2.0 * PI),
        GaussNormalization::Alternate => (4.0 * PI, -FRAC_PI_4, 2.0 * PI * 2f64.sqrt()),
    };
    let rot = Complex64::from_polar(1.0, phase);
    let (freqs, coefs): (Vec<f64>, Vec<Complex64>) = (1..=n_max as usize)
        .filter(|&n| r[n] > 0)
        .map(|n| {
            let nf = n as f64;
            (scale * nf.sqrt(), rot * (r[n] as f64 / (denom * nf.powf(0.75))))
        })
        .unzip();
    Spectrum::new(freqs, coefs)
}

/// `(1/y1) ∫_{y0}^{y1} |u(y) − S(y)|² dy` for the circle expansion over
/// `n ≤ n_max`, by Simpson's rule on a grid of at most `step`.
pub fn gauss_mean_square_gap(
    n_max: u64,
    norm: GaussNormalization,
    y0: f64,
    y1: f64,
    step: f64,
    budget: u64,
) -> Result<f64> {
    if !(y0 > 0.0 && y1 > y0 && step > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "need 0 < y0 < y1 and step > 0, got [{y0}, {y1}] step {step}"
        )));
    }
    let spec = gauss_spectrum(n_max, norm)?;
    let mut intervals = ((y1 - y0) / step).ceil() as usize;
    intervals += intervals % 2;
    let h = (y1 - y0) / intervals as f64;
    let x = spec.max_frequency().unwrap_or(0.0);
    let values: Vec<f64> = (0..=intervals)
        .into_par_iter()
        .map(|k| {
            let y = y0 + h * k as f64;
            let u = gauss_remainder(y, budget)?;
            let d = u - eval_sum(&spec, y, x);
            Ok(d * d)
        })
        .collect::<Result<_>>()?;
    Ok(simpson(&values, h)? / y1)
}

/// `D(x) = Σ_{n ≤ x} d(n)` by the hyperbola method.
pub fn divisor_sums(x: f64, budget: u64) -> Result<u64> {
    if !(x >= 1.0) {
        return Err(Error::OutOfDomain {
            method: "divisor_sums",
            msg: format!("x must be at least 1, got {x}"),
        });
    }
    check_budget("divisor_sums", x, budget)?;
    let n = x.floor() as u64;
    let s = isqrt(n);
    let half: u64 = (1..=s).map(|k| n / k).sum();
    Ok(2 * half - s * s)
}

/// `v(y) = (D(y²) − (y² log y² + (2C − 1) y²)) / y^{1/2}`.
pub fn divisor_remainder(y: f64, budget: u64) -> Result<f64> {
    if !(y >= 1.0) {
        return Err(Error::OutOfDomain {
            method: "divisor_remainder",
            msg: format!("y must be at least 1, got {y}"),
        });
    }
    let x = y * y;
    let main = x * x.ln() + (2.0 * EULER_GAMMA - 1.0) * x;
    Ok((divisor_sums(x, budget)? as f64 - main) / y.sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_psi_values() {
        assert_eq!(chebyshev_psi(1.0, 100).unwrap(), 0.0);
        assert_eq!(chebyshev_psi(2.0, 100).unwrap(), 2f64.ln());
        let expect = 3.0 * 2f64.ln() + 2.0 * 3f64.ln() + 5f64.ln() + 7f64.ln();
        assert!((chebyshev_psi(10.0, 100).unwrap() - expect).abs() < 1e-12);
        assert!(chebyshev_psi(1e8, DEFAULT_PSI_BUDGET).unwrap_err().is_budget());
    }

    #[test]
    fn table_agrees_with_von_mangoldt_sum() {
        let lim = 5000;
        let table = ChebyshevTable::new(lim);
        let lambda = ArithmeticTable::von_mangoldt(lim);
        let mut acc = CompensatedSum::new();
        for n in 1..=lim {
            acc.add(lambda.value(n).unwrap());
            assert!((table.psi(n as f64).unwrap() - acc.value()).abs() < 1e-9, "n={n}");
        }
    }

    #[test]
    fn remainders_at_small_points() {
        assert_eq!(pnt_remainder(0.0, 10).unwrap(), -1.0);
        let psi10 = 3.0 * 2f64.ln() + 2.0 * 3f64.ln() + 5f64.ln() + 7f64.ln();
        let q10 = (psi10 - 10.0) / 10f64.sqrt();
        assert!((pnt_remainder(10f64.ln(), 100).unwrap() - q10).abs() < 1e-12);
        assert!((q10 + 0.68557).abs() < 1e-5);
        assert!((pnt_remainder(2f64.ln(), 100).unwrap() + 0.9240).abs() < 1e-4);
        assert!((gauss_remainder(10.0, 1000).unwrap() - (316.0 - 100.0 * PI) / 10f64.sqrt()).abs() < 1e-12);
        assert!((gauss_remainder(1.0, 1000).unwrap() - 0.8584).abs() < 1e-4);
        assert!((gauss_remainder(0.5, 1000).unwrap() + 1.1107).abs() < 1e-4);
    }

    #[test]
    fn lattice_and_divisor_counts() {
        assert_eq!(lattice_count_r(0.5, 10).unwrap(), 0);
        assert_eq!(lattice_count_r(1.0, 10).unwrap(), 4);
        assert_eq!(lattice_count_r(100.0, 1000).unwrap(), 316);
        assert_eq!(divisor_sums(1.0, 10).unwrap(), 1);
        assert_eq!(divisor_sums(6.0, 10).unwrap(), 14);
        assert_eq!(divisor_sums(10.0, 10).unwrap(), 27);
        assert!(divisor_sums(2e6, DEFAULT_COUNT_BUDGET).unwrap_err().is_budget());
    }

    #[test]
    fn gauss_spectrum_shapes() {
        let s = gauss_spectrum(1, GaussNormalization::Alternate).unwrap();
        assert_eq!(s.len(), 1);
        assert!((s.frequencies()[0] - 4.0 * PI).abs() < 1e-15);
        assert!((s.coefficients()[0].norm() - 0.4502).abs() < 1e-4);
        let s = gauss_spectrum(3, GaussNormalization::Classical).unwrap();
        assert_eq!(s.len(), 2);
        let s = gauss_spectrum(5, GaussNormalization::Classical).unwrap();
        let c5 = s.coefficients()[3].norm();
        assert!((c5 - 8.0 / (2.0 * PI * 5f64.powf(0.75))).abs() < 1e-15);
    }

    #[test]
    fn isqrt_edges() {
        for n in [0u64, 1, 3, 4, 15, 16, 17, 1 << 40, (1 << 40) - 1] {
            let r = isqrt(n);
            assert!(r * r <= n && (r + 1) * (r + 1) > n);
        }
    }
}
