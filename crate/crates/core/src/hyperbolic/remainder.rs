//! The remainder `e(s) = (N(s) − M(s)) e^{−s/2}`, its windowed mean square
//! and its radial integral.
//!
//! `N` is a step function with jumps at the orbit distances, so both
//! integrals are split at those points: between jumps the integrand is
//! smooth (and for `G_3` integrable in closed form).

use serde::Serialize;

use super::counting::OrbitProfile;
use super::spectral::{main_term, main_term_integral, SpectralData};
use crate::error::{Error, Result};
use crate::numeric::quad::simpson;
use crate::numeric::CompensatedSum;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RemainderPoint {
    pub s: f64,
    pub n: u64,
    pub m: f64,
    pub e: f64,
}

/// `N`, `M` and `e` at radius `s`.
pub fn remainder_e(profile: &OrbitProfile, sd: &SpectralData, s: f64) -> Result<RemainderPoint> {
    let n = profile.count(s)?;
    let m = main_term(sd, s);
    Ok(RemainderPoint {
        s,
        n,
        m,
        e: (n as f64 - m) * (-0.5 * s).exp(),
    })
}

/// `∫_T^{T+1} |e(s)|² ds` and diagnostics.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct VarianceWindow {
    pub t: f64,
    pub h: f64,
    /// Orbit distances inside `(T, T+1)`.
    pub jumps: usize,
    pub max_e_sq: f64,
    pub quad_step: f64,
}

impl VarianceWindow {
    /// Error bound for trapezoidal quadrature with step `h` that ignores
    /// the jumps: each cell containing a jump is off by at most
    /// `2 max|e|² h`.
    pub fn naive_error_bound(&self, h: f64) -> f64 {
        2.0 * self.jumps as f64 * self.max_e_sq * h
    }
}

fn check_window(profile: &OrbitProfile, t: f64, step: f64) -> Result<()> {
    if !(t >= 1.0) {
        return Err(Error::InvalidArgument(format!(
            "window start T must be at least 1, got {t}"
        )));
    }
    if !(step > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "quadrature step must be positive, got {step}"
        )));
    }
    if profile.s_max < t + 1.0 {
        return Err(Error::InvalidArgument(format!(
            "orbit enumerated to radius {} but the window ends at {}",
            profile.s_max,
            t + 1.0
        )));
    }
    Ok(())
}

/// Jump-aware quadrature of `|e|²` over `[T, T+1]`: composite Simpson with
/// spacing at most `quad_step` on each interval between consecutive jumps.
pub fn variance_window(profile: &OrbitProfile, sd: &SpectralData, t: f64, quad_step: f64) -> Result<VarianceWindow> {
    check_window(profile, t, quad_step)?;
    let jumps = profile.jumps_between(t, t + 1.0);
    let mut cuts = Vec::with_capacity(jumps.len() + 2);
    cuts.push(t);
    for &j in jumps {
        if j > *cuts.last().expect("non-empty") {
            cuts.push(j);
        }
    }
    cuts.push(t + 1.0);
    let mut total = CompensatedSum::new();
    let mut max_e_sq = 0.0f64;
    for w in cuts.windows(2) {
        let (a, b) = (w[0], w[1]);
        if b <= a {
            continue;
        }
        // N is constant on the open interval (a, b).
        let n = profile.distances.partition_point(|&d| d <= a) as f64;
        let mut cells = ((b - a) / quad_step).ceil().max(2.0) as usize;
        cells += cells % 2;
        let h = (b - a) / cells as f64;
        let vals: Vec<f64> = (0..=cells)
            .map(|k| {
                let s = if k == cells { b } else { a + h * k as f64 };
                let e = (n - main_term(sd, s)) * (-0.5 * s).exp();
                e * e
            })
            .collect();
        max_e_sq = vals.iter().copied().fold(max_e_sq, f64::max);
        total.add(simpson(&vals, h)?);
    }
    // Values just after each jump use the larger count.
    for &j in jumps {
        let e = remainder_e(profile, sd, j)?.e;
        max_e_sq = max_e_sq.max(e * e);
    }
    Ok(VarianceWindow {
        t,
        h: total.value(),
        jumps: jumps.len(),
        max_e_sq,
        quad_step,
    })
}

/// Trapezoidal quadrature of `|e|²` on `[T, T+1]` with a uniform step,
/// blind to the jumps.
pub fn variance_window_naive(profile: &OrbitProfile, sd: &SpectralData, t: f64, step: f64) -> Result<f64> {
    check_window(profile, t, step)?;
    let cells = (1.0 / step).round().max(1.0) as usize;
    let h = 1.0 / cells as f64;
    let mut acc = CompensatedSum::new();
    for k in 0..=cells {
        let e = remainder_e(profile, sd, t + h * k as f64)?.e;
        let w = if k == 0 || k == cells { 0.5 } else { 1.0 };
        acc.add(w * e * e);
    }
    Ok(acc.value() * h)
}

/// `G_3(s, z) = e^{−s/2} ∫_0^s (N(x, z, z) − M(x)) dx`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct IntegratedRemainder {
    pub s: f64,
    pub value: f64,
    /// `∫_0^s N = Σ_{d_k ≤ s} (s − d_k)`.
    pub integral_n: f64,
    pub integral_m: f64,
    /// Set when the group is not cocompact, where boundedness in `s` is not
    /// established.
    pub exploratory: bool,
}

fn check_g3(profile: &OrbitProfile, s: f64) -> Result<()> {
    if profile.z != profile.w {
        return Err(Error::InvalidArgument(
            "the radial integral needs an orbit profile with z = w".into(),
        ));
    }
    if !(s >= 0.0) {
        return Err(Error::InvalidArgument(format!("radius must be non-negative, got {s}")));
    }
    if s > profile.s_max {
        return Err(Error::InvalidArgument(format!(
            "radius {s} beyond the enumerated radius {}",
            profile.s_max
        )));
    }
    Ok(())
}

/// Exact step-function integral of `N` and closed-form integral of `M`.
pub fn integrated_remainder_g3(profile: &OrbitProfile, sd: &SpectralData, s: f64) -> Result<IntegratedRemainder> {
    check_g3(profile, s)?;
    let k = profile.distances.partition_point(|&d| d <= s);
    let integral_n = profile.distances[..k]
        .iter()
        .map(|&d| s - d)
        .collect::<CompensatedSum>()
        .value();
    let integral_m = main_term_integral(sd, s);
    Ok(IntegratedRemainder {
        s,
        value: (-0.5 * s).exp() * (integral_n - integral_m),
        integral_n,
        integral_m,
        exploratory: !profile.cocompact,
    })
}

/// `G_3` by the midpoint rule with a fixed step, and an error bound
/// `e^{−s/2}(N(s) + 1) step` covering one misplaced cell per jump.
pub fn g3_fixed_step(profile: &OrbitProfile, sd: &SpectralData, s: f64, step: f64) -> Result<(f64, f64)> {
    check_g3(profile, s)?;
    if !(step > 0.0) {
        return Err(Error::InvalidArgument(format!("step must be positive, got {step}")));
    }
    if s == 0.0 {
        return Ok((0.0, 0.0));
    }
    let cells = (s / step).ceil() as usize;
    let h = s / cells as f64;
    let mut acc = CompensatedSum::new();
    for k in 0..cells {
        let x = h * (k as f64 + 0.5);
        acc.add(profile.count(x)? as f64 - main_term(sd, x));
    }
    let scale = (-0.5 * s).exp();
    Ok((scale * acc.value() * h, scale * (profile.count(s)? as f64 + 1.0) * h))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hyperbolic::{HPoint, ModularScan, OrbitCounter};

    #[test]
    fn remainder_at_zero() {
        let p = ModularScan.profile(0.0, HPoint::I, HPoint::I, 1000).unwrap();
        let r = remainder_e(&p, &SpectralData::modular(), 0.0).unwrap();
        assert_eq!(r.n, 2);
        assert!((r.e + 1.0).abs() < 1e-14);
    }

    #[test]
    fn g3_vanishes_at_zero() {
        let p = ModularScan.profile(1.0, HPoint::I, HPoint::I, 1000).unwrap();
        let g = integrated_remainder_g3(&p, &SpectralData::modular(), 0.0).unwrap();
        assert_eq!(g.value, 0.0);
        assert!(g.exploratory);
    }
}
