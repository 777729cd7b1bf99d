//! Ball indicators smoothed by a small-ball mollifier.
//!
//! `k_δ` is the indicator of a ball of radius `δ` divided by its area
//! `4π sinh²(δ/2)`. Convolving the indicator of a ball of radius `Z` with it
//! gives, at a point at distance `d` from the centre, the fraction of the
//! `δ`-ball around that point lying inside the `Z`-ball. With `Z = s ± δ`
//! this yields kernels `k^− ≤ 𝟙_{[0,(cosh s−1)/2]} ≤ k^+`.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::Serialize;

use super::geometry::{distance_from_u, u_from_distance};
use super::shc::shc_integral;
use crate::error::{Error, Result};
use crate::numeric::quad::{adaptive, Tolerance};

/// Area of a hyperbolic disc of radius `delta`.
pub fn disc_area(delta: f64) -> f64 {
    let h = (0.5 * delta).sinh();
    4.0 * PI * h * h
}

/// `𝟙_{[0,(cosh s−1)/2]}(u)`.
pub fn ball_indicator(s: f64, u: f64) -> f64 {
    if u <= u_from_distance(s) {
        1.0
    } else {
        0.0
    }
}

/// Fraction of the `delta`-disc around a point at distance `d` from the
/// centre of a disc of radius `z` that lies inside that disc.
fn overlap_fraction(z: f64, delta: f64, d: f64) -> Result<f64> {
    if d < 1e-12 {
        let r = delta.min(z);
        return Ok((2.0 * PI * (r.cosh() - 1.0) / disc_area(delta)).clamp(0.0, 1.0));
    }
    let (cd, sd, cz) = (d.cosh(), d.sinh(), z.cosh());
    // Angle θ* from the direction of the centre within which the circle of
    // radius ρ stays inside: cos θ* = (cosh d cosh ρ − cosh Z)/(sinh d sinh ρ).
    let arc = |rho: f64| {
        let x = (cd * rho.cosh() - cz) / (sd * rho.sinh());
        let theta = if x <= -1.0 {
            PI
        } else if x >= 1.0 {
            0.0
        } else {
            x.acos()
        };
        2.0 * theta * rho.sinh()
    };
    let kink = (z - d).abs();
    let v = adaptive(arc, 0.0, delta, &[kink], Tolerance::relative(1e-11))?;
    Ok((v / disc_area(delta)).clamp(0.0, 1.0))
}

/// Smoothed indicator with exact plateaus: 1 for `u ≤ u(inner)`, 0 for
/// `u ≥ u(outer)`, where `outer − inner = 2δ`.
fn smoothed_band(inner: f64, outer: f64, delta: f64, u: f64) -> Result<f64> {
    if u <= u_from_distance(inner) {
        return Ok(1.0);
    }
    if u >= u_from_distance(outer) {
        return Ok(0.0);
    }
    overlap_fraction(0.5 * (inner + outer), delta, distance_from_u(u))
}

fn check(s: f64, delta: f64) -> Result<()> {
    if !(delta > 0.0 && delta < 1.0) {
        return Err(Error::InvalidArgument(format!("delta must lie in (0, 1), got {delta}")));
    }
    if !(s > delta) || !s.is_finite() {
        return Err(Error::InvalidArgument(format!(
            "need s > delta, got s = {s}, delta = {delta}"
        )));
    }
    Ok(())
}

/// `k^+(u)`: indicator of radius `s + δ` smoothed by `k_δ`.
pub fn k_plus(s: f64, delta: f64, u: f64) -> Result<f64> {
    check(s, delta)?;
    smoothed_band(s, s + 2.0 * delta, delta, u)
}

/// `k^−(u)`: indicator of radius `s − δ` smoothed by `k_δ`.
pub fn k_minus(s: f64, delta: f64, u: f64) -> Result<f64> {
    check(s, delta)?;
    smoothed_band(s - 2.0 * delta, s, delta, u)
}

/// `k^±` tabulated on a `u`-grid.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct KernelPair {
    pub s: f64,
    pub delta: f64,
    pub u_grid: Vec<f64>,
    pub k_plus: Vec<f64>,
    pub k_minus: Vec<f64>,
}

impl KernelPair {
    /// Points where `k^− ≤ 𝟙 ≤ k^+` fails (empty when the sandwich holds).
    pub fn sandwich_violations(&self) -> Vec<usize> {
        (0..self.u_grid.len())
            .filter(|&k| {
                let one = ball_indicator(self.s, self.u_grid[k]);
                !(self.k_minus[k] <= one && one <= self.k_plus[k])
            })
            .collect()
    }
}

pub fn smoothed_kernels(s: f64, delta: f64, u_grid: &[f64]) -> Result<KernelPair> {
    check(s, delta)?;
    let k_plus = u_grid.iter().map(|&u| k_plus(s, delta, u)).collect::<Result<_>>()?;
    let k_minus = u_grid.iter().map(|&u| k_minus(s, delta, u)).collect::<Result<_>>()?;
    Ok(KernelPair {
        s,
        delta,
        u_grid: u_grid.to_vec(),
        k_plus,
        k_minus,
    })
}

/// `n` equally spaced `u` values covering `[0, u(s + 3δ)]`.
pub fn default_u_grid(s: f64, delta: f64, n: usize) -> Vec<f64> {
    let top = u_from_distance(s + 3.0 * delta);
    let n = n.max(2);
    (0..n).map(|k| top * k as f64 / (n - 1) as f64).collect()
}

/// `(h^+(t), h^−(t)) = h_{s±δ}(t) h_δ(t) / (4π sinh²(δ/2))`.
pub fn h_pm(s: f64, delta: f64, t: Complex64) -> Result<(Complex64, Complex64)> {
    check(s, delta)?;
    let mollifier = shc_integral(delta, t)? / disc_area(delta);
    Ok((
        shc_integral(s + delta, t)? * mollifier,
        shc_integral(s - delta, t)? * mollifier,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn plateaus_are_exact() {
        let (s, d) = (2.0, 0.1);
        assert_eq!(k_plus(s, d, u_from_distance(s)).unwrap(), 1.0);
        assert_eq!(k_plus(s, d, u_from_distance(s + 2.0 * d) * 1.0001).unwrap(), 0.0);
        assert_eq!(k_minus(s, d, u_from_distance(s)).unwrap(), 0.0);
        assert_eq!(k_minus(s, d, 0.0).unwrap(), 1.0);
    }

    #[test]
    fn half_overlap_at_boundary() {
        // On the boundary of a large disc roughly half the small disc is inside.
        let v = overlap_fraction(3.0, 0.05, 3.0).unwrap();
        assert!((v - 0.5).abs() < 0.02, "{v}");
    }

    #[test]
    fn transition_is_monotone() {
        let (s, d) = (2.0, 0.1);
        let grid: Vec<f64> = (0..50)
            .map(|k| u_from_distance(s + 2.0 * d * k as f64 / 49.0))
            .collect();
        let vals: Vec<f64> = grid.iter().map(|&u| k_plus(s, d, u).unwrap()).collect();
        assert!(vals.windows(2).all(|w| w[1] <= w[0] + 1e-12));
    }
}
