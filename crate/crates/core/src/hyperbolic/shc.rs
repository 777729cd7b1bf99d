//! Selberg/Harish-Chandra transform of the ball indicator,
//!
//! ```text
//! h_R(t) = 2^{3/2} ∫_{−R}^{R} (cosh R − cosh u)^{1/2} e^{itu} du,
//! ```
//!
//! in several evaluation regimes, plus its Fourier partner `g_R`.

use std::f64::consts::{LN_2, PI};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::numeric::quad::{adaptive_complex, Tolerance};
use crate::numeric::special::{bessel_j1_over_x, gamma_ratio, hyp2f1};
use crate::registry::{Named, Registry};

/// Cap on the number of oscillation breakpoints handed to the integrator.
const MAX_BREAKS: usize = 4000;

/// One way of evaluating `h_R(t)`.
pub trait ShcTransform: Named + Send + Sync {
    fn eval(&self, r: f64, t: Complex64) -> Result<Complex64>;

    /// Where the method is meant to be used.
    fn domain(&self) -> &'static str;
}

fn check_r(method: &'static str, r: f64) -> Result<()> {
    if !(r > 0.0) || !r.is_finite() {
        return Err(Error::OutOfDomain {
            method,
            msg: format!("radius must be positive and finite, got {r}"),
        });
    }
    Ok(())
}

/// `h_R(t)` by adaptive quadrature.
///
/// With `u = R − v²` the square-root endpoint singularity disappears:
/// `cosh R − cosh(R − v²) = 2 sinh(R − v²/2) sinh(v²/2)`, so
///
/// ```text
/// h_R(t) = 2^{5/2} ∫_0^{√R} 2v (2 sinh(R − v²/2) sinh(v²/2))^{1/2} cos(t(R − v²)) dv.
/// ```
pub fn shc_integral(r: f64, t: Complex64) -> Result<Complex64> {
    check_r("integral", r)?;
    let pref = 2f64.powf(2.5);
    let integrand = |v: f64| {
        let v2 = v * v;
        let root = (2.0 * (r - 0.5 * v2).sinh() * (0.5 * v2).sinh()).max(0.0).sqrt();
        (t * (r - v2)).cos() * (pref * 2.0 * v * root)
    };
    // Split where cos(Re t · u) completes half periods.
    let freq = t.re.abs();
    let mut breaks = Vec::new();
    if freq > 0.0 {
        let n = ((r * freq / PI).floor() as usize).min(MAX_BREAKS);
        let du = r / (n + 1) as f64;
        breaks.extend((1..=n).map(|k| (k as f64 * du).sqrt()));
    }
    let scale = pref * r * r.cosh().sqrt() * (t.im.abs() * r).cosh();
    let tol = Tolerance {
        abs: 1e-13 * scale,
        rel: 1e-12,
        max_segments: 4 * (breaks.len() + 1) + 20_000,
    };
    adaptive_complex(integrand, 0.0, r.sqrt(), &breaks, tol)
}

/// `e^{itR} Γ(it)/Γ(3/2 + it)`.
fn leading_factor(r: f64, t: Complex64) -> Complex64 {
    let it = Complex64::i() * t;
    (it * r).exp() * gamma_ratio(it, it + 1.5)
}

fn check_gamma_poles(method: &'static str, t: Complex64) -> Result<()> {
    // Γ(±it) has poles where ±it is a non-positive integer, t = ±ik.
    let k = t.im.abs().round();
    if t.re.abs() < 1e-6 && (t.im.abs() - k).abs() < 1e-6 {
        return Err(Error::OutOfDomain {
            method,
            msg: format!("t = {t} is at a pole of Γ(±it); use the integral regime"),
        });
    }
    Ok(())
}

/// `h_R(t)` from the exact hypergeometric representation
///
/// ```text
/// h_R(t) = √(2π sinh R) (g(t) + g(−t)),   g(t) = e^{itR} Γ(it)/Γ(3/2+it) F(t),
/// F(t) = ₂F₁(−1/2, 3/2; 1−it; −1/(e^{2R}−1))
///      = (1 − e^{−2R})^{−1/2} ₂F₁(−1/2, −1/2−it; 1−it; e^{−2R}).
/// ```
pub fn shc_hypergeometric(r: f64, t: Complex64) -> Result<Complex64> {
    check_r("hypergeometric", r)?;
    check_gamma_poles("hypergeometric", t)?;
    let q = (-2.0 * r).exp();
    let pre = (-(-2.0 * r).exp_m1()).powf(-0.5);
    let half = Complex64::new(-0.5, 0.0);
    let g = |t: Complex64| -> Result<Complex64> {
        let c = Complex64::new(1.0, 0.0) - Complex64::i() * t;
        let f = hyp2f1(half, c - 1.5, c, Complex64::new(q, 0.0))? * pre;
        Ok(leading_factor(r, t) * f)
    };
    Ok((g(t)? + g(-t)?) * (2.0 * PI * r.sinh()).sqrt())
}

/// Large-`R` form `2√π e^{R/2} Re(e^{itR} Γ(it)/Γ(3/2+it))`, with error
/// `O(e^{−3R/2}/(|t|(1+|t|^{1/2})))`. Complex `t` uses the even
/// continuation `√π e^{R/2} (f(t) + f(−t))`.
pub fn shc_asymptotic(r: f64, t: Complex64) -> Result<Complex64> {
    check_r("asymptotic", r)?;
    check_gamma_poles("asymptotic", t)?;
    Ok((leading_factor(r, t) + leading_factor(r, -t)) * (PI.sqrt() * (0.5 * r).exp()))
}

/// Imaginary argument `t = iτ`: `√(2π sinh R) e^{R|τ|} Γ(|τ|)/Γ(3/2+|τ|)`,
/// with error `O((1 + |τ|^{−1}) e^{R(1/2−|τ|)})`.
pub fn shc_imag(r: f64, t: Complex64) -> Result<Complex64> {
    check_r("imaginary", r)?;
    if t.re.abs() > 1e-12 * t.norm().max(1.0) || t.im == 0.0 {
        return Err(Error::OutOfDomain {
            method: "imaginary",
            msg: format!("t = {t} is not a nonzero imaginary number"),
        });
    }
    let tau = t.im.abs();
    let v = (2.0 * PI * r.sinh()).sqrt()
        * (r * tau).exp()
        * gamma_ratio(Complex64::new(tau, 0.0), Complex64::new(1.5 + tau, 0.0)).re;
    Ok(Complex64::new(v, 0.0))
}

/// Small-radius form `2πR² J₁(Rt)/(Rt) √(sinh R / R)`.
pub fn shc_small_r(r: f64, t: Complex64) -> Result<Complex64> {
    check_r("small-r", r)?;
    Ok(bessel_j1_over_x(t * r) * (2.0 * PI * r * r * (r.sinh() / r).sqrt()))
}

/// `h_R(i/2) = 2π(cosh R − 1)`.
pub fn shc_quarter_closed(r: f64) -> f64 {
    2.0 * PI * (r.cosh() - 1.0)
}

/// Leading behaviour `4(R + 2(log 2 − 1)) e^{R/2}` of `h_R(0)`.
pub fn shc_zero_leading(r: f64) -> f64 {
    4.0 * (r + 2.0 * (LN_2 - 1.0)) * (0.5 * r).exp()
}

/// `g_R(u) = 2^{3/2}(cosh R − cosh u)^{1/2}` for `|u| ≤ R`, else 0.
pub fn g_transform(r: f64, u: f64) -> Result<f64> {
    check_r("g_transform", r)?;
    if u.abs() >= r {
        return Ok(0.0);
    }
    let (a, b) = (0.5 * (r + u.abs()), 0.5 * (r - u.abs()));
    // cosh R − cosh u = 2 sinh((R+u)/2) sinh((R−u)/2)
    Ok(2f64.powf(1.5) * (2.0 * a.sinh() * b.sinh()).sqrt())
}

/// `∫_{−T}^{T} h_R(t) dt` against `2π g_R(0)`.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct FourierCheck {
    pub r: f64,
    pub t_max: f64,
    pub integral: f64,
    pub expected: f64,
    pub relative_gap: f64,
    /// Leading-order bound on the omitted tails `|t| > T`, relative to
    /// `expected`: `h_R(t) ≈ 2^{3/2}√(π sinh R) t^{−3/2} · 2cos(tR − 3π/4)`.
    pub tail_bound: f64,
}

/// Integrates `h_R` over `[−T, T]` (even integrand, so twice `[0, T]`).
pub fn fourier_consistency(r: f64, t_max: f64) -> Result<FourierCheck> {
    check_r("fourier_consistency", r)?;
    if !(t_max > 0.0) {
        return Err(Error::InvalidArgument(format!("t_max must be positive, got {t_max}")));
    }
    let h = |t: f64| shc_integral(r, Complex64::new(t, 0.0)).map(|v| v.re);
    // Breaks at the zeros of cos(tR − 3π/4) keep each panel to one lobe.
    let n = ((t_max * r / PI).floor() as usize).min(100_000);
    let breaks: Vec<f64> = (0..=n)
        .map(|k| (0.75 * PI + k as f64 * PI) / r)
        .filter(|&b| b < t_max)
        .collect();
    let failure = std::cell::Cell::new(None);
    let integrand = |t: f64| match h(t) {
        Ok(v) => Complex64::new(v, 0.0),
        Err(e) => {
            failure.set(Some(e.to_string()));
            Complex64::new(0.0, 0.0)
        }
    };
    let tol = Tolerance {
        abs: 1e-12,
        rel: 1e-10,
        max_segments: 4 * breaks.len() + 4000,
    };
    let half = adaptive_complex(integrand, 0.0, t_max, &breaks, tol)?.re;
    if let Some(msg) = failure.take() {
        return Err(Error::OutOfDomain {
            method: "fourier_consistency",
            msg,
        });
    }
    let integral = 2.0 * half;
    let expected = 2.0 * PI * g_transform(r, 0.0)?;
    let amp = 2f64.powf(1.5) * (PI * r.sinh()).sqrt();
    // |∫_T^∞ t^{−3/2} cos(tR + φ) dt| ≤ 2 T^{−3/2} / R, for each of two tails.
    let tail = 2.0 * amp * 2.0 * t_max.powf(-1.5) / r;
    Ok(FourierCheck {
        r,
        t_max,
        integral,
        expected,
        relative_gap: (integral - expected).abs() / expected,
        tail_bound: tail / expected,
    })
}

macro_rules! regime {
    ($ty:ident, $name:literal, $f:path, $domain:literal) => {
        #[derive(Debug, Default, Clone, Copy)]
        pub struct $ty;

        impl Named for $ty {
            fn name(&self) -> &'static str {
                $name
            }
        }

        impl ShcTransform for $ty {
            fn eval(&self, r: f64, t: Complex64) -> Result<Complex64> {
                $f(r, t)
            }

            fn domain(&self) -> &'static str {
                $domain
            }
        }
    };
}

regime!(
    IntegralRegime,
    "integral",
    shc_integral,
    "any R > 0, any t (oscillatory cost grows with |Re t|·R)"
);
regime!(
    HypergeometricRegime,
    "hypergeometric",
    shc_hypergeometric,
    "any R > 0, t away from 0 and ±i·k"
);
regime!(
    AsymptoticRegime,
    "asymptotic",
    shc_asymptotic,
    "R ≥ 1, real t away from 0"
);
regime!(
    ImaginaryRegime,
    "imaginary",
    shc_imag,
    "R ≥ 1, t = iτ with 0 < |τ| < 1/2"
);
regime!(SmallRadiusRegime, "small-r", shc_small_r, "0 < R ≤ 1");

/// All regimes by name.
pub fn shc_transforms() -> Registry<dyn ShcTransform> {
    let mut r: Registry<dyn ShcTransform> = Registry::new();
    r.register(Box::new(IntegralRegime))
        .register(Box::new(HypergeometricRegime))
        .register(Box::new(AsymptoticRegime))
        .register(Box::new(ImaginaryRegime))
        .register(Box::new(SmallRadiusRegime));
    r
}
