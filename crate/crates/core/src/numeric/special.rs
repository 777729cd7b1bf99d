//! Special functions: complex log-gamma (Lanczos), Bessel `J₁`/`I₁`, and the
//! Gauss hypergeometric series.

use num_complex::Complex64;
use std::f64::consts::PI;

use crate::error::{Error, Result};

const LANCZOS_G: f64 = 7.0;
const LANCZOS_COEF: [f64; 9] = [
    0.999_999_999_999_809_9,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_1,
    -176.615_029_162_140_6,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_572e-6,
    1.505_632_735_149_311_6e-7,
];

/// Principal-branch-free `ln Γ(z)`: the imaginary part is only defined
/// modulo 2π, which is all that exponentiated ratios need.
pub fn ln_gamma(z: Complex64) -> Complex64 {
    if z.re < 0.5 {
        // Reflection: Γ(z)Γ(1-z) = π / sin(πz)
        let s = (z * PI).sin();
        return Complex64::new(PI.ln(), 0.0) - s.ln() - ln_gamma(Complex64::new(1.0, 0.0) - z);
    }
    let z = z - 1.0;
    let mut x = Complex64::new(LANCZOS_COEF[0], 0.0);
    for (i, &c) in LANCZOS_COEF.iter().enumerate().skip(1) {
        x += c / (z + i as f64);
    }
    let t = z + LANCZOS_G + 0.5;
    Complex64::new(0.5 * (2.0 * PI).ln(), 0.0) + (z + 0.5) * t.ln() - t + x.ln()
}

pub fn gamma(z: Complex64) -> Complex64 {
    ln_gamma(z).exp()
}

/// `Γ(a) / Γ(b)` without intermediate overflow.
pub fn gamma_ratio(a: Complex64, b: Complex64) -> Complex64 {
    (ln_gamma(a) - ln_gamma(b)).exp()
}

/// Real gamma function (poles excluded).
pub fn gamma_real(x: f64) -> f64 {
    gamma(Complex64::new(x, 0.0)).re
}

/// `J₁(x)/x` as a power series; valid for moderate complex arguments.
fn j1_over_x_series(z: Complex64) -> Complex64 {
    let q = -(z * z) * 0.25;
    let mut term = Complex64::new(0.5, 0.0);
    let mut sum = term;
    for k in 1..200 {
        let k = k as f64;
        term *= q / (k * (k + 1.0));
        sum += term;
        if term.norm() <= 1e-17 * sum.norm() {
            break;
        }
    }
    sum
}

/// Trapezoidal rule on Bessel's integral, exponentially convergent for
/// a periodic integrand: `J₁(x) = (1/2π)∫₀^{2π} cos(τ − x sin τ) dτ`.
fn j1_integral(x: f64) -> f64 {
    let n = 64usize.max((x.abs() as usize) + 48);
    let h = 2.0 * PI / n as f64;
    let mut s = 0.0;
    for k in 0..n {
        let tau = k as f64 * h;
        s += (tau - x * tau.sin()).cos();
    }
    s / n as f64
}

/// Hankel asymptotic expansion of `J₁` for large positive `x`.
fn j1_hankel(x: f64) -> f64 {
    let mu = 4.0;
    let mut p = 1.0;
    let mut q = 0.0;
    let mut term = 1.0;
    let mut last = f64::INFINITY;
    for k in 1..60 {
        let kf = k as f64;
        let odd = 2.0 * kf - 1.0;
        term *= (mu - odd * odd) / (kf * 8.0 * x);
        if term.abs() > last {
            break;
        }
        last = term.abs();
        match k % 4 {
            1 => q += term,
            2 => p -= term,
            3 => q -= term,
            _ => p += term,
        }
        if term.abs() < 1e-17 {
            break;
        }
    }
    let chi = x - 0.75 * PI;
    (2.0 / (PI * x)).sqrt() * (p * chi.cos() - q * chi.sin())
}

/// Bessel function of the first kind of order one.
///
/// Series below |x| = 8, Bessel's integral up to 25, Hankel's expansion
/// beyond.
pub fn bessel_j1(x: f64) -> f64 {
    let ax = x.abs();
    let v = if ax < 8.0 {
        return x * j1_over_x_series(Complex64::new(x, 0.0)).re;
    } else if ax < 25.0 {
        j1_integral(ax)
    } else {
        j1_hankel(ax)
    };
    if x < 0.0 {
        -v
    } else {
        v
    }
}

/// `J₁(z)/z` for complex `z`, with the removable singularity at 0 filled in
/// (value 1/2). Purely imaginary arguments give `I₁(|z|)/|z|`.
pub fn bessel_j1_over_x(z: Complex64) -> Complex64 {
    if z.norm() < 8.0 {
        j1_over_x_series(z)
    } else if z.im == 0.0 {
        Complex64::new(bessel_j1(z.re) / z.re, 0.0)
    } else {
        // Series still converges, only with cancellation; callers stay in
        // the small-argument regime.
        j1_over_x_series(z)
    }
}

/// Gauss hypergeometric series `₂F₁(a, b; c; z)` for `|z| < 1`.
pub fn hyp2f1(a: Complex64, b: Complex64, c: Complex64, z: Complex64) -> Result<Complex64> {
    if z.norm() >= 1.0 {
        return Err(Error::InvalidArgument(format!(
            "hypergeometric series needs |z| < 1, got {z}"
        )));
    }
    let mut term = Complex64::new(1.0, 0.0);
    let mut sum = term;
    let mut small = 0;
    for n in 0..200_000u32 {
        let nf = n as f64;
        let denom = (c + nf) * (nf + 1.0);
        if denom.norm() == 0.0 {
            return Err(Error::InvalidArgument(format!(
                "hypergeometric parameter c = {c} is a non-positive integer"
            )));
        }
        term *= (a + nf) * (b + nf) / denom * z;
        sum += term;
        if term.norm() <= 1e-17 * sum.norm().max(1e-300) {
            small += 1;
            if small >= 3 {
                return Ok(sum);
            }
        } else {
            small = 0;
        }
    }
    Err(Error::Quadrature {
        tolerance: 1e-17,
        estimate: term.norm(),
    })
}
