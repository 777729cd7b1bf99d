//! Frequency/coefficient data model, file ingestion and coefficient-decay
//! estimation.
//!
//! A [`Spectrum`] stores strictly increasing positive frequencies `λ_n` with
//! complex coefficients `c_n` and always represents the real function
//!
//! ```text
//! Σ_n (c_n e^{iλ_n y} + conj(c_n) e^{-iλ_n y}) = 2 Re Σ_n c_n e^{iλ_n y}.
//! ```
//!
//! Expansions written as `Re Σ r_n e^{iλ_n y}` enter through
//! [`Spectrum::from_one_sided`], which stores `c_n = r_n / 2`.

use std::fmt;
use std::io::Write;
use std::path::Path;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::numeric::{linear_fit, CompensatedSum};

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Spectrum {
    frequencies: Vec<f64>,
    coefficients: Vec<Complex64>,
}

impl Spectrum {
    /// Builds a spectrum from already sorted data, validating every invariant.
    pub fn new(frequencies: Vec<f64>, coefficients: Vec<Complex64>) -> Result<Self> {
        if frequencies.len() != coefficients.len() {
            return Err(Error::InvalidArgument(format!(
                "{} frequencies but {} coefficients",
                frequencies.len(),
                coefficients.len()
            )));
        }
        for (i, &l) in frequencies.iter().enumerate() {
            if !l.is_finite() {
                return Err(Error::NonFinite(format!("frequency #{i}")));
            }
            if l <= 0.0 {
                return Err(Error::NonPositiveFrequency(l));
            }
            if i > 0 {
                let prev = frequencies[i - 1];
                if l == prev {
                    return Err(Error::DuplicateFrequency(l));
                }
                if l < prev {
                    return Err(Error::InvalidArgument(format!(
                        "frequencies not increasing at index {i} ({prev} then {l})"
                    )));
                }
            }
        }
        if let Some(i) = coefficients.iter().position(|c| !c.re.is_finite() || !c.im.is_finite()) {
            return Err(Error::NonFinite(format!("coefficient #{i}")));
        }
        Ok(Self {
            frequencies,
            coefficients,
        })
    }

    /// Sorts the pairs by frequency first; duplicates are still rejected.
    pub fn from_unsorted(mut pairs: Vec<(f64, Complex64)>) -> Result<Self> {
        if pairs.windows(2).any(|w| w[0].0 > w[1].0) {
            log::warn!("spectrum rows were not sorted by frequency; sorting");
            pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
        }
        let (f, c) = pairs.into_iter().unzip();
        Self::new(f, c)
    }

    /// Takes coefficients `r_n` of an expansion `Re Σ r_n e^{iλ_n y}`.
    pub fn from_one_sided(frequencies: Vec<f64>, r: Vec<Complex64>) -> Result<Self> {
        Self::new(frequencies, r.into_iter().map(|x| x * 0.5).collect())
    }

    pub fn empty() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.frequencies.len()
    }

    pub fn is_empty(&self) -> bool {
        self.frequencies.is_empty()
    }

    pub fn frequencies(&self) -> &[f64] {
        &self.frequencies
    }

    pub fn coefficients(&self) -> &[Complex64] {
        &self.coefficients
    }

    pub fn iter(&self) -> impl Iterator<Item = (f64, Complex64)> + '_ {
        self.frequencies.iter().copied().zip(self.coefficients.iter().copied())
    }

    pub fn max_frequency(&self) -> Option<f64> {
        self.frequencies.last().copied()
    }

    /// Number of frequencies `≤ x`.
    pub fn count_up_to(&self, x: f64) -> usize {
        self.frequencies.partition_point(|&l| l <= x)
    }

    /// Largest frequency `≤ x`, if any.
    pub fn max_frequency_up_to(&self, x: f64) -> Option<f64> {
        let n = self.count_up_to(x);
        (n > 0).then(|| self.frequencies[n - 1])
    }

    /// Sub-spectrum of the frequencies in the index range.
    pub fn slice(&self, range: std::ops::Range<usize>) -> Spectrum {
        Spectrum {
            frequencies: self.frequencies[range.clone()].to_vec(),
            coefficients: self.coefficients[range].to_vec(),
        }
    }

    pub fn truncated(&self, x: f64) -> Spectrum {
        self.slice(0..self.count_up_to(x))
    }

    /// `Σ |c_n|` over `λ_n ≤ x`, ascending order, compensated.
    pub fn coefficient_l1_up_to(&self, x: f64) -> f64 {
        let n = self.count_up_to(x);
        self.coefficients[..n]
            .iter()
            .map(|c| c.norm())
            .collect::<CompensatedSum>()
            .value()
    }

    /// `Σ |c_n|²` over the whole spectrum.
    pub fn coefficient_l2_squared(&self) -> f64 {
        self.coefficients
            .iter()
            .map(|c| c.norm_sqr())
            .collect::<CompensatedSum>()
            .value()
    }

    /// Multiplies every coefficient by a real factor.
    pub fn scaled(&self, t: f64) -> Spectrum {
        Spectrum {
            frequencies: self.frequencies.clone(),
            coefficients: self.coefficients.iter().map(|c| c * t).collect(),
        }
    }

    /// Writes the CSV form (`lambda,re_c,im_c`, 17 significant digits).
    pub fn write_csv<W: Write>(&self, mut out: W) -> Result<()> {
        writeln!(out, "lambda,re_c,im_c")?;
        for (l, c) in self.iter() {
            writeln!(out, "{:.16e},{:.16e},{:.16e}", l, c.re, c.im)?;
        }
        Ok(())
    }

    pub fn to_csv_string(&self) -> String {
        let mut buf = Vec::new();
        self.write_csv(&mut buf).expect("writing to a Vec cannot fail");
        String::from_utf8(buf).expect("CSV output is ASCII")
    }

    /// SHA-256 of the canonical CSV text, hex encoded.
    pub fn content_hash(&self) -> String {
        hex::encode(Sha256::digest(self.to_csv_string().as_bytes()))
    }
}

/// Parses spectrum CSV text. `origin` is used in error messages only.
///
/// Blank lines and lines starting with `#` are skipped; an optional
/// `lambda,re_c,im_c` header is accepted as the first data line.
pub fn parse_spectrum(text: &str, origin: &Path) -> Result<Spectrum> {
    let parse_err = |line: usize, msg: String| Error::Parse {
        path: origin.to_path_buf(),
        line: line as u64,
        msg,
    };
    let mut pairs = Vec::new();
    let mut seen_data = false;
    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = line.split(',').map(str::trim).collect();
        if !seen_data && fields.first() == Some(&"lambda") {
            seen_data = true;
            continue;
        }
        seen_data = true;
        if fields.len() != 3 {
            return Err(parse_err(line_no, format!("expected 3 fields, found {}", fields.len())));
        }
        let mut vals = [0.0f64; 3];
        for (v, field) in vals.iter_mut().zip(&fields) {
            *v = field
                .parse()
                .map_err(|_| parse_err(line_no, format!("cannot parse `{field}` as a number")))?;
        }
        if vals[0] <= 0.0 {
            return Err(Error::NonPositiveFrequency(vals[0]));
        }
        pairs.push((vals[0], Complex64::new(vals[1], vals[2])));
    }
    Spectrum::from_unsorted(pairs)
}

pub fn load_spectrum(path: impl AsRef<Path>) -> Result<Spectrum> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path)?;
    parse_spectrum(&text, path)
}

pub fn save_spectrum(spec: &Spectrum, path: impl AsRef<Path>) -> Result<()> {
    let file = std::fs::File::create(path)?;
    spec.write_csv(std::io::BufWriter::new(file))
}

/// Frequency cutoff as a function of the averaging horizon `Y`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum CutoffSchedule {
    /// `X(Y) = max(e^Y, x0)`
    Exponential { x0: f64 },
    /// `X(Y) = max(Y, x0)`
    Linear { x0: f64 },
    /// `X(Y) = x0`
    Constant { x0: f64 },
}

impl CutoffSchedule {
    pub fn constant(x0: f64) -> Self {
        CutoffSchedule::Constant { x0 }
    }

    pub fn cutoff(&self, y: f64) -> f64 {
        match *self {
            CutoffSchedule::Exponential { x0 } => y.exp().max(x0),
            CutoffSchedule::Linear { x0 } => y.max(x0),
            CutoffSchedule::Constant { x0 } => x0,
        }
    }

    fn floor(&self) -> f64 {
        match *self {
            CutoffSchedule::Exponential { x0 } | CutoffSchedule::Linear { x0 } | CutoffSchedule::Constant { x0 } => x0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let x0 = self.floor();
        if !(x0 > 0.0) || !x0.is_finite() {
            return Err(Error::InvalidArgument(format!(
                "cutoff floor must be positive, got {x0}"
            )));
        }
        Ok(())
    }
}

impl fmt::Display for CutoffSchedule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            CutoffSchedule::Exponential { x0 } => write!(f, "exp:{x0}"),
            CutoffSchedule::Linear { x0 } => write!(f, "linear:{x0}"),
            CutoffSchedule::Constant { x0 } => write!(f, "const:{x0}"),
        }
    }
}

impl FromStr for CutoffSchedule {
    type Err = Error;

    /// Accepts `exp`, `exp:X0`, `linear`, `linear:X0` and `const:X0`
    /// (a bare number is read as a constant).
    fn from_str(s: &str) -> Result<Self> {
        let (kind, arg) = match s.split_once(':') {
            Some((k, a)) => (k.trim(), Some(a.trim())),
            None => (s.trim(), None),
        };
        let num = |a: Option<&str>, default: Option<f64>| -> Result<f64> {
            match (a, default) {
                (Some(a), _) => a
                    .parse()
                    .map_err(|_| Error::InvalidArgument(format!("bad cutoff parameter `{a}`"))),
                (None, Some(d)) => Ok(d),
                (None, None) => Err(Error::InvalidArgument(format!("cutoff `{s}` needs a value"))),
            }
        };
        let sched = match kind {
            "exp" | "exponential" => CutoffSchedule::Exponential {
                x0: num(arg, Some(1.0))?,
            },
            "linear" => CutoffSchedule::Linear {
                x0: num(arg, Some(1.0))?,
            },
            "const" | "constant" => CutoffSchedule::Constant { x0: num(arg, None)? },
            other => match other.parse::<f64>() {
                Ok(x0) if arg.is_none() => CutoffSchedule::Constant { x0 },
                _ => return Err(Error::InvalidArgument(format!("unknown cutoff schedule `{s}`"))),
            },
        };
        sched.validate()?;
        Ok(sched)
    }
}

/// One window `[T, T+1)` and its coefficient mass `Σ |2 c_n|`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Window {
    pub t: f64,
    pub sum: f64,
}

/// Sums `|2 c_n|` (the one-sided `|r_n|`) over `λ_n ∈ [T, T+1)` for every
/// integer `T` with `t_min ≤ T < t_max`.
pub fn window_coefficient_sums(spec: &Spectrum, t_min: f64, t_max: f64) -> Result<Vec<Window>> {
    let first = t_min.ceil();
    if spec.is_empty() || !(t_min >= 1.0) || !(first < t_max) {
        return Err(Error::EmptyRange(format!(
            "no unit windows in [{t_min}, {t_max}) for a spectrum of {} frequencies",
            spec.len()
        )));
    }
    let freqs = spec.frequencies();
    let coefs = spec.coefficients();
    let mut out = Vec::new();
    let mut t = first;
    let mut idx = freqs.partition_point(|&l| l < t);
    while t < t_max {
        let mut acc = CompensatedSum::new();
        while idx < freqs.len() && freqs[idx] < t + 1.0 {
            acc.add(2.0 * coefs[idx].norm());
            idx += 1;
        }
        out.push(Window { t, sum: acc.value() });
        t += 1.0;
    }
    Ok(out)
}

/// Power-law fit `Σ_{window} |r_n| ≈ A·T^{-β}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecayFit {
    pub beta_hat: f64,
    pub amplitude: f64,
    pub r_squared: f64,
    /// Windows whose sum was zero and were left out of the fit.
    pub excluded_windows: usize,
    pub windows: Vec<Window>,
}

pub fn fit_beta(windows: &[Window]) -> Result<DecayFit> {
    let (xs, ys): (Vec<f64>, Vec<f64>) = windows
        .iter()
        .filter(|w| w.sum > 0.0 && w.t > 0.0)
        .map(|w| (w.t.ln(), w.sum.ln()))
        .unzip();
    if xs.len() < 5 {
        return Err(Error::InvalidArgument(format!(
            "need at least 5 non-empty windows to fit a decay exponent, got {}",
            xs.len()
        )));
    }
    let fit = linear_fit(&xs, &ys).ok_or_else(|| Error::InvalidArgument("degenerate window abscissae".into()))?;
    Ok(DecayFit {
        beta_hat: -fit.slope,
        amplitude: fit.intercept.exp(),
        r_squared: fit.r_squared,
        excluded_windows: windows.len() - xs.len(),
        windows: windows.to_vec(),
    })
}

/// Ordinates `γ_k` of the nontrivial zeta zeros above the real axis.
#[derive(Debug, Clone, PartialEq)]
pub struct ZeroTable {
    ordinates: Vec<f64>,
}

impl ZeroTable {
    pub fn new(ordinates: Vec<f64>) -> Result<Self> {
        if ordinates.is_empty() {
            return Err(Error::InvalidArgument("empty zero table".into()));
        }
        if let Some(w) = ordinates.windows(2).find(|w| !(w[0] < w[1])) {
            return Err(Error::InvalidArgument(format!(
                "zero ordinates not strictly increasing ({} then {})",
                w[0], w[1]
            )));
        }
        let first = ordinates[0];
        if !(14.1..=14.2).contains(&first) {
            return Err(Error::InvalidArgument(format!(
                "first zero ordinate {first} is not the expected 14.1347..."
            )));
        }
        Ok(Self { ordinates })
    }

    pub fn ordinates(&self) -> &[f64] {
        &self.ordinates
    }

    pub fn max_ordinate(&self) -> f64 {
        *self.ordinates.last().expect("non-empty by construction")
    }
}

/// One positive ordinate per line, `#` comments and blank lines ignored.
pub fn parse_zero_table(text: &str, origin: &Path) -> Result<ZeroTable> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let first = line.split_whitespace().next().unwrap_or(line);
        let v: f64 = first.parse().map_err(|_| Error::Parse {
            path: origin.to_path_buf(),
            line: i as u64 + 1,
            msg: format!("cannot parse `{first}` as a zero ordinate"),
        })?;
        if !(v > 0.0) {
            return Err(Error::NonPositiveFrequency(v));
        }
        out.push(v);
    }
    ZeroTable::new(out)
}

pub fn load_zero_table(path: impl AsRef<Path>) -> Result<ZeroTable> {
    let path = path.as_ref();
    parse_zero_table(&std::fs::read_to_string(path)?, path)
}
