//! Occupation-time estimates of limiting distributions, tail fits and the
//! comparison of histogram moments with asymptotic moments.

use std::io::Write;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::moments::MomentReport;
use crate::numeric::{linear_fit, CompensatedSum};
use crate::spectrum::{CutoffSchedule, Spectrum};
use crate::trigsum::{eval_grid, split_truncation, SampledFunction};

/// Grid cells handled per parallel work item.
const CELL_CHUNK: usize = 8192;

/// Minimum number of bins accepted by [`estimate_distribution`].
pub const MIN_BINS: usize = 10;

/// Histogram of the time a sampled function spends in each value bin.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DistributionEstimate {
    pub bin_edges: Vec<f64>,
    pub masses: Vec<f64>,
    /// End of the averaging interval actually used.
    pub y_used: f64,
    pub sample_count: usize,
    /// Largest `|φ|` among the samples.
    pub support_radius: f64,
    /// Set when the function was constant and the estimate is a point mass.
    pub degenerate: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl DistributionEstimate {
    fn point_mass(v: f64, y_used: f64, sample_count: usize) -> Self {
        Self {
            bin_edges: vec![v - 0.5, v + 0.5],
            masses: vec![1.0],
            y_used,
            sample_count,
            support_radius: v.abs(),
            degenerate: true,
            note: None,
        }
    }

    pub fn bins(&self) -> usize {
        self.masses.len()
    }

    pub fn midpoints(&self) -> impl Iterator<Item = f64> + '_ {
        self.bin_edges.windows(2).map(|w| 0.5 * (w[0] + w[1]))
    }

    /// Mass of `(-∞, x]`, spreading each bin's mass uniformly.
    pub fn cdf(&self, x: f64) -> f64 {
        self.mass_in(f64::NEG_INFINITY, x)
    }

    /// Mass of `[a, b]` under the same within-bin uniform spreading.
    /// A point mass is treated as an atom at its centre.
    pub fn mass_between(&self, a: f64, b: f64) -> f64 {
        self.mass_in(a, b)
    }

    fn mass_in(&self, a: f64, b: f64) -> f64 {
        if !(b > a) {
            return 0.0;
        }
        if self.degenerate {
            let v = 0.5 * (self.bin_edges[0] + self.bin_edges[1]);
            return if a <= v && v <= b { 1.0 } else { 0.0 };
        }
        let mut acc = CompensatedSum::new();
        for (w, &m) in self.bin_edges.windows(2).zip(&self.masses) {
            let (l, r) = (w[0], w[1]);
            let lo = a.max(l);
            let hi = b.min(r);
            if hi > lo {
                acc.add(if lo == l && hi == r { m } else { m * (hi - lo) / (r - l) });
            }
        }
        acc.value()
    }

    /// `μ(|x| ≥ s)`.
    pub fn tail_mass(&self, s: f64) -> f64 {
        if s <= 0.0 {
            return 1.0;
        }
        self.mass_in(f64::NEG_INFINITY, -s) + self.mass_in(s, f64::INFINITY)
    }

    /// `Σ masses · midpointⁿ`.
    pub fn moment(&self, n: u32) -> f64 {
        self.midpoints()
            .zip(&self.masses)
            .map(|(x, m)| m * x.powi(n as i32))
            .collect::<CompensatedSum>()
            .value()
    }

    /// CSV with header `bin_left,bin_right,mass`; `header` lines are
    /// written first as `# ` comments.
    pub fn write_csv<W: Write>(&self, mut out: W, header: &[String]) -> Result<()> {
        for h in header {
            writeln!(out, "# {h}")?;
        }
        if let Some(n) = &self.note {
            writeln!(out, "# note={n}")?;
        }
        writeln!(out, "# y_used={:.16e}", self.y_used)?;
        writeln!(out, "# sample_count={}", self.sample_count)?;
        writeln!(out, "# support_radius={:.16e}", self.support_radius)?;
        writeln!(out, "bin_left,bin_right,mass")?;
        for (w, m) in self.bin_edges.windows(2).zip(&self.masses) {
            writeln!(out, "{:.16e},{:.16e},{:.16e}", w[0], w[1], m)?;
        }
        Ok(())
    }
}

/// Adds the time the linear interpolant on one grid cell spends in each
/// bin. Values are expressed in bin units (`(φ - lo) / width`).
fn deposit(weights: &mut [f64], a: f64, b: f64, dt: f64) {
    let bins = weights.len();
    let clamp = |u: f64| (u.floor().max(0.0) as usize).min(bins - 1);
    let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
    let (i0, i1) = (clamp(lo), clamp(hi));
    if i0 == i1 {
        weights[i0] += dt;
        return;
    }
    let span = hi - lo;
    for (i, w) in weights.iter_mut().enumerate().take(i1 + 1).skip(i0) {
        let left = if i == i0 { lo } else { i as f64 };
        let right = if i == i1 { hi } else { (i + 1) as f64 };
        *w += dt * (right - left) / span;
    }
}

/// Occupation-time histogram of `f` over `[y0, Y]` with `bins` equal bins
/// spanning the observed range. `Y` is rounded down to the grid.
pub fn estimate_distribution(f: &SampledFunction, y_end: f64, bins: usize) -> Result<DistributionEstimate> {
    if bins < MIN_BINS {
        return Err(Error::InvalidArgument(format!(
            "need at least {MIN_BINS} bins, got {bins}"
        )));
    }
    if !(y_end > f.y0) || y_end > f.y_end() + 1e-9 * f.step {
        return Err(Error::InvalidArgument(format!(
            "Y = {y_end} outside the sampled range [{}, {}]",
            f.y0,
            f.y_end()
        )));
    }
    let k = f
        .index_of(y_end)
        .unwrap_or_else(|| ((y_end - f.y0) / f.step).floor() as usize);
    if k == 0 {
        return Err(Error::InvalidArgument(format!(
            "Y = {y_end} shorter than one grid step"
        )));
    }
    let samples = &f.values[..=k];
    let y_used = f.y_at(k);
    if samples.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFinite("sampled function".into()));
    }
    let (min, max) = samples.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| {
        (lo.min(v), hi.max(v))
    });
    let support_radius = min.abs().max(max.abs());
    let scale = 1.0f64.max(support_radius);
    if max - min <= 1e-14 * scale {
        let mut est = DistributionEstimate::point_mass(0.5 * (min + max), y_used, samples.len());
        est.support_radius = support_radius;
        return Ok(est);
    }

    let width = (max - min) / bins as f64;
    let to_units = |v: f64| (v - min) / width;
    let cells = samples.len() - 1;
    let chunks: Vec<Vec<f64>> = (0..cells.div_ceil(CELL_CHUNK))
        .into_par_iter()
        .map(|c| {
            let mut w = vec![0.0; bins];
            for i in c * CELL_CHUNK..((c + 1) * CELL_CHUNK).min(cells) {
                deposit(&mut w, to_units(samples[i]), to_units(samples[i + 1]), 1.0);
            }
            w
        })
        .collect();
    let mut totals = vec![CompensatedSum::new(); bins];
    for chunk in &chunks {
        for (t, &w) in totals.iter_mut().zip(chunk) {
            t.add(w);
        }
    }
    let weights: Vec<f64> = totals.iter().map(CompensatedSum::value).collect();
    let total: f64 = weights.iter().copied().collect::<CompensatedSum>().value();
    let masses = weights.iter().map(|w| w / total).collect();
    let mut bin_edges: Vec<f64> = (0..=bins).map(|i| min + width * i as f64).collect();
    bin_edges[bins] = max;
    Ok(DistributionEstimate {
        bin_edges,
        masses,
        y_used,
        sample_count: samples.len(),
        support_radius,
        degenerate: false,
        note: None,
    })
}

/// Grid step for distribution estimates: ten samples per radian of the
/// top frequency, never coarser than 0.1.
pub fn distribution_step(lambda_max: Option<f64>) -> f64 {
    match lambda_max {
        Some(lm) if lm > 0.0 => (0.1 / lm).min(0.1),
        _ => 0.1,
    }
}

/// Distribution of the truncation `φ_T = S(y; λ_n ≤ T)` over `[0, Y]`.
///
/// The measure `ν_T` is a `Y → ∞` limit; this estimate uses the same finite
/// horizon as the full-spectrum estimate, and says so in `note`.
pub fn truncated_distribution(spec: &Spectrum, t: f64, y_end: f64, bins: usize) -> Result<DistributionEstimate> {
    if !(t > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "truncation T must be positive, got {t}"
        )));
    }
    if !(y_end > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "horizon Y must be positive, got {y_end}"
        )));
    }
    let (head, _) = split_truncation(spec, t);
    let grid = sample_for_distribution(&head, y_end)?;
    let mut est = estimate_distribution(&grid, grid.y_end(), bins)?;
    est.note = Some(format!("truncation T={t} over the finite horizon Y={y_end}"));
    Ok(est)
}

/// Samples the full sum of `spec` on `[0, Y]` at [`distribution_step`].
pub fn sample_for_distribution(spec: &Spectrum, y_end: f64) -> Result<SampledFunction> {
    let lm = spec.max_frequency();
    let mut intervals = (y_end / distribution_step(lm)).ceil().max(2.0) as usize;
    intervals += intervals % 2;
    let x = lm.unwrap_or(1.0);
    eval_grid(
        spec,
        0.0,
        y_end,
        y_end / intervals as f64,
        CutoffSchedule::constant(x),
        true,
    )
}

/// Tail masses `μ(|x| ≥ S)` with a log–log slope fit.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TailFit {
    pub s_values: Vec<f64>,
    pub tail_masses: Vec<f64>,
    /// `−slope` of `log μ(|x|≥S)` against `log S`, when at least two
    /// thresholds carry enough mass.
    pub exponent_hat: Option<f64>,
    pub r_squared: Option<f64>,
    pub fitted_points: usize,
    pub compact_support: bool,
    /// `(2β−1)/(2−2β)` for the supplied `β`; infinite for `β ≥ 1`.
    pub predicted_exponent: Option<f64>,
    pub beta: Option<f64>,
}

impl TailFit {
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("tail fit is always serialisable")
    }
}

/// `(2β−1)/(2−2β)`, infinite when `β ≥ 1` (compactly supported measure).
pub fn predicted_tail_exponent(beta: f64) -> f64 {
    if beta >= 1.0 {
        f64::INFINITY
    } else {
        (2.0 * beta - 1.0) / (2.0 - 2.0 * beta)
    }
}

/// Tail masses on `s_grid`, forced non-increasing, and their power-law fit
/// over thresholds whose mass exceeds `10 / sample_count`.
pub fn fit_tails(est: &DistributionEstimate, s_grid: &[f64], beta: Option<f64>) -> Result<TailFit> {
    if s_grid.is_empty() {
        return Err(Error::InvalidArgument("empty threshold grid".into()));
    }
    if s_grid.iter().any(|&s| !(s > 0.0)) || s_grid.windows(2).any(|w| !(w[0] < w[1])) {
        return Err(Error::InvalidArgument(
            "thresholds must be positive and increasing".into(),
        ));
    }
    let mut running = f64::INFINITY;
    let tail_masses: Vec<f64> = s_grid
        .iter()
        .map(|&s| {
            running = running.min(est.tail_mass(s));
            running
        })
        .collect();
    let floor = 10.0 / est.sample_count.max(1) as f64;
    let (xs, ys): (Vec<f64>, Vec<f64>) = s_grid
        .iter()
        .zip(&tail_masses)
        .filter(|(_, &m)| m > floor)
        .map(|(&s, &m)| (s.ln(), m.ln()))
        .unzip();
    let fit = if xs.len() >= 2 { linear_fit(&xs, &ys) } else { None };
    Ok(TailFit {
        s_values: s_grid.to_vec(),
        compact_support: tail_masses.contains(&0.0),
        tail_masses,
        exponent_hat: fit.as_ref().map(|f| -f.slope),
        r_squared: fit.as_ref().map(|f| f.r_squared),
        fitted_points: xs.len(),
        predicted_exponent: beta.map(predicted_tail_exponent),
        beta,
    })
}

/// Histogram moment against the reference moment of one order.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MomentComparison {
    pub order: u32,
    pub histogram: f64,
    /// Asymptotic moment if available, otherwise the last empirical one.
    pub reference: f64,
    pub gap: f64,
}

/// Compares `Σ masses · midpointⁿ` with each report's moment.
pub fn compare_moments(est: &DistributionEstimate, reports: &[MomentReport]) -> Vec<MomentComparison> {
    reports
        .iter()
        .filter_map(|r| {
            let reference = r.theoretical.or_else(|| r.empirical.last().map(|&(_, v)| v))?;
            let histogram = est.moment(r.order);
            Some(MomentComparison {
                order: r.order,
                histogram,
                reference,
                gap: histogram - reference,
            })
        })
        .collect()
}
