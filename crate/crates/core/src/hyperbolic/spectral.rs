//! Spectral input for the main term of the hyperbolic counting function.

use std::f64::consts::{FRAC_PI_3, LN_2, PI};
use std::path::Path;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numeric::special::gamma_ratio;

/// One small eigenvalue `λ_j = 1/4 + t_j²` with `t_j ∈ (0, 1/2)i`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SmallEigenvalue {
    /// `|t_j|`, in `(0, 1/2)`.
    pub t_abs: f64,
    /// `φ_j(z) conj(φ_j(w))`.
    pub phi_product: Complex64,
}

/// Covolume, small eigenvalues and the `λ = 1/4` contributions.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectralData {
    pub volume: f64,
    pub small_eigs: Vec<SmallEigenvalue>,
    /// `φ_j(z) conj(φ_j(w))` for eigenvalues with `t_j = 0`.
    pub quarter_eigs: Vec<Complex64>,
    /// `Σ_𝔞 E_𝔞(z, 1/2) conj(E_𝔞(w, 1/2))`, supplied by the user.
    pub eisenstein_const: f64,
}

impl Default for SpectralData {
    fn default() -> Self {
        Self::modular()
    }
}

impl SpectralData {
    /// PSL(2,ℤ): covolume π/3 and no exceptional terms.
    pub fn modular() -> Self {
        Self::with_volume(FRAC_PI_3).expect("π/3 is positive")
    }

    pub fn with_volume(volume: f64) -> Result<Self> {
        let sd = Self {
            volume,
            small_eigs: Vec::new(),
            quarter_eigs: Vec::new(),
            eisenstein_const: 0.0,
        };
        sd.validate()?;
        Ok(sd)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.volume > 0.0) || !self.volume.is_finite() {
            return Err(Error::InvalidArgument(format!(
                "volume must be positive, got {}",
                self.volume
            )));
        }
        for e in &self.small_eigs {
            if !(e.t_abs > 0.0 && e.t_abs < 0.5) {
                return Err(Error::InvalidArgument(format!(
                    "small eigenvalue |t| = {} not in (0, 1/2)",
                    e.t_abs
                )));
            }
        }
        if !self.eisenstein_const.is_finite() {
            return Err(Error::NonFinite("eisenstein_const".into()));
        }
        Ok(())
    }

    /// Parses `key = value` lines:
    ///
    /// ```text
    /// volume = 1.0471975511965976   # or pi/3
    /// small_eig = 0.25, 1.0, 0.0     # t_abs, Re, Im of φ(z)conj(φ(w))
    /// quarter_eig = 0.5, 0.0
    /// eisenstein_const = 0
    /// ```
    pub fn parse(text: &str, origin: &Path) -> Result<Self> {
        let mut sd = Self {
            volume: f64::NAN,
            small_eigs: Vec::new(),
            quarter_eigs: Vec::new(),
            eisenstein_const: 0.0,
        };
        for (k, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let err = |msg: String| Error::Parse {
                path: origin.to_path_buf(),
                line: k as u64 + 1,
                msg,
            };
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| err(format!("expected key = value, got {line:?}")))?;
            let nums = value
                .split(',')
                .map(|v| parse_scalar(v.trim()).ok_or_else(|| err(format!("bad number {:?}", v.trim()))))
                .collect::<Result<Vec<f64>>>()?;
            let want = |n: usize| {
                if nums.len() == n {
                    Ok(())
                } else {
                    Err(err(format!("{} expects {n} value(s), got {}", key.trim(), nums.len())))
                }
            };
            match key.trim() {
                "volume" => {
                    want(1)?;
                    sd.volume = nums[0];
                }
                "small_eig" => {
                    want(3)?;
                    sd.small_eigs.push(SmallEigenvalue {
                        t_abs: nums[0],
                        phi_product: Complex64::new(nums[1], nums[2]),
                    });
                }
                "quarter_eig" => {
                    want(2)?;
                    sd.quarter_eigs.push(Complex64::new(nums[0], nums[1]));
                }
                "eisenstein_const" => {
                    want(1)?;
                    sd.eisenstein_const = nums[0];
                }
                other => return Err(err(format!("unknown key {other:?}"))),
            }
        }
        if sd.volume.is_nan() {
            return Err(Error::Parse {
                path: origin.to_path_buf(),
                line: 0,
                msg: "missing volume".into(),
            });
        }
        sd.validate()?;
        Ok(sd)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        Self::parse(&std::fs::read_to_string(path)?, path)
    }

    fn quarter_sum(&self) -> f64 {
        self.quarter_eigs.iter().map(|p| p.re).sum()
    }
}

/// A float, `pi`, or `pi/N`.
fn parse_scalar(v: &str) -> Option<f64> {
    match v {
        "pi" => Some(PI),
        _ => match v.strip_prefix("pi/") {
            Some(den) => den.parse::<f64>().ok().map(|d| PI / d),
            None => v.parse().ok(),
        },
    }
}

/// `Γ(|t|)/Γ(3/2 + |t|)`.
fn small_eig_weight(t: f64) -> f64 {
    gamma_ratio(Complex64::new(t, 0.0), Complex64::new(1.5 + t, 0.0)).re
}

/// `M(s) = πe^s/vol + √π Σ Γ(t)/Γ(3/2+t) e^{s(1/2+t)} φφ̄
///        + 4(s + 2(log 2 − 1)) e^{s/2} Σ_{t=0} φφ̄ + e^{s/2} E`.
pub fn main_term(sd: &SpectralData, s: f64) -> f64 {
    let mut m = PI * s.exp() / sd.volume;
    for e in &sd.small_eigs {
        m += PI.sqrt() * small_eig_weight(e.t_abs) * (s * (0.5 + e.t_abs)).exp() * e.phi_product.re;
    }
    let half = (0.5 * s).exp();
    m += 4.0 * (s + 2.0 * (LN_2 - 1.0)) * half * sd.quarter_sum();
    m + half * sd.eisenstein_const
}

/// `∫_0^s M(x) dx` in closed form.
pub fn main_term_integral(sd: &SpectralData, s: f64) -> f64 {
    let mut acc = PI * s.exp_m1() / sd.volume;
    for e in &sd.small_eigs {
        let k = 0.5 + e.t_abs;
        acc += PI.sqrt() * small_eig_weight(e.t_abs) * (s * k).exp_m1() / k * e.phi_product.re;
    }
    let half = (0.5 * s).exp();
    let half_m1 = (0.5 * s).exp_m1();
    // ∫ 4(x + 2(log 2 − 1)) e^{x/2} dx = 4[(2x − 4) e^{x/2}] + 16(log 2 − 1)(e^{x/2} − 1)
    let poly = 4.0 * ((2.0 * s - 4.0) * half + 4.0) + 16.0 * (LN_2 - 1.0) * half_m1;
    acc += poly * sd.quarter_sum();
    acc + 2.0 * half_m1 * sd.eisenstein_const
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::quad::{adaptive, Tolerance};

    #[test]
    fn modular_main_term() {
        let sd = SpectralData::modular();
        assert!((main_term(&sd, 0.0) - 3.0).abs() < 1e-14);
        assert!((main_term(&sd, 1.0) - 3.0 * 1f64.exp()).abs() < 1e-13);
    }

    #[test]
    fn small_eigenvalue_block() {
        let mut sd = SpectralData::modular();
        sd.small_eigs.push(SmallEigenvalue {
            t_abs: 0.25,
            phi_product: Complex64::new(1.0, 0.0),
        });
        // Γ(1/4)/Γ(7/4) = 3.6256099082219083 / 0.9190625268488832
        let expect = 3.0 + PI.sqrt() * 3.625_609_908_221_908 / 0.9190625268488832;
        assert!((main_term(&sd, 0.0) - expect).abs() < 1e-12);
    }

    #[test]
    fn integral_matches_quadrature() {
        let sd = SpectralData {
            volume: 2.0,
            small_eigs: vec![SmallEigenvalue {
                t_abs: 0.3,
                phi_product: Complex64::new(0.7, 0.1),
            }],
            quarter_eigs: vec![Complex64::new(0.4, 0.0)],
            eisenstein_const: 1.3,
        };
        for s in [0.0, 0.5, 3.0, 7.0] {
            let q = if s == 0.0 {
                0.0
            } else {
                adaptive(|x| main_term(&sd, x), 0.0, s, &[], Tolerance::default()).unwrap()
            };
            let c = main_term_integral(&sd, s);
            assert!((q - c).abs() <= 1e-10 * c.abs().max(1.0), "s={s}: {q} vs {c}");
        }
        assert_eq!(main_term_integral(&sd, 0.0), 0.0);
    }

    #[test]
    fn parse_file() {
        let text = "# test\nvolume = pi/3\nsmall_eig = 0.25, 1.0, 0.0\nquarter_eig = 0.5, 0\neisenstein_const = 2\n";
        let sd = SpectralData::parse(text, Path::new("x")).unwrap();
        assert!((sd.volume - FRAC_PI_3).abs() < 1e-15);
        assert_eq!(sd.small_eigs.len(), 1);
        assert_eq!(sd.eisenstein_const, 2.0);
        assert!(SpectralData::parse("small_eig = 0.7, 1, 0\nvolume=1", Path::new("x")).is_err());
        assert!(SpectralData::parse("volume = 1\nfoo = 2", Path::new("x")).is_err());
        assert!(SpectralData::parse("eisenstein_const = 1", Path::new("x")).is_err());
    }
}
