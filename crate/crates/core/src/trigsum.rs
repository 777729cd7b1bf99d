//! Truncated exponential sums `S(y, X) = 2 Re Σ_{λ_n ≤ X} c_n e^{iλ_n y}`
//! and the low/high frequency split used for truncated distributions.

use std::io::Write;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::numeric::{unit_phasor, CompensatedSum};
use crate::spectrum::{CutoffSchedule, Spectrum};

/// Maximum allowed `step · λ_max` on a grid.
pub const ALIASING_LIMIT: f64 = 0.5;

/// A real function tabulated on `y0, y0 + step, …`.
#[derive(Debug, Clone, PartialEq)]
pub struct SampledFunction {
    pub y0: f64,
    pub step: f64,
    pub values: Vec<f64>,
    /// Schedule that produced the cutoff, when sampled from a spectrum.
    pub schedule: Option<CutoffSchedule>,
    /// Cutoff actually used (the schedule at the grid end for fixed-Y grids).
    pub cutoff: Option<f64>,
    /// Largest frequency that entered the sums, if any.
    pub max_frequency: Option<f64>,
}

impl SampledFunction {
    pub fn new(y0: f64, step: f64, values: Vec<f64>) -> Result<Self> {
        if !(step > 0.0) || !step.is_finite() {
            return Err(Error::InvalidArgument(format!(
                "grid step must be positive, got {step}"
            )));
        }
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite(format!("sample #{i}")));
        }
        Ok(Self {
            y0,
            step,
            values,
            schedule: None,
            cutoff: None,
            max_frequency: None,
        })
    }

    /// Tabulates an arbitrary function on `[y0, y1]`.
    pub fn from_fn<F>(y0: f64, y1: f64, step: f64, f: F) -> Result<Self>
    where
        F: Fn(f64) -> f64 + Sync,
    {
        let n = grid_intervals(y0, y1, step)?;
        let values = (0..=n).into_par_iter().map(|k| f(y0 + step * k as f64)).collect();
        Self::new(y0, step, values)
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn y_at(&self, k: usize) -> f64 {
        self.y0 + self.step * k as f64
    }

    pub fn y_end(&self) -> f64 {
        self.y_at(self.values.len().saturating_sub(1))
    }

    /// Index of the grid point equal to `y` (up to 1e-9 of a step).
    pub fn index_of(&self, y: f64) -> Option<usize> {
        let k = (y - self.y0) / self.step;
        let r = k.round();
        if (k - r).abs() > 1e-9 * k.abs().max(1.0) || r < 0.0 || r as usize >= self.values.len() {
            return None;
        }
        Some(r as usize)
    }

    /// Writes `y,value` rows preceded by `#` header lines.
    pub fn write_csv<W: Write>(&self, mut out: W, header: &[String]) -> Result<()> {
        for h in header {
            writeln!(out, "# {h}")?;
        }
        if let Some(x) = self.cutoff {
            writeln!(out, "# cutoff_X={x:e}")?;
        }
        writeln!(out, "# step={:e}", self.step)?;
        writeln!(out, "y,value")?;
        for (k, v) in self.values.iter().enumerate() {
            writeln!(out, "{:.16e},{:.16e}", self.y_at(k), v)?;
        }
        Ok(())
    }
}

/// Number of whole steps from `y0` to `y1`, tolerating rounding in the ratio.
pub fn grid_intervals(y0: f64, y1: f64, step: f64) -> Result<usize> {
    if !(y1 > y0) {
        return Err(Error::InvalidArgument(format!("empty grid [{y0}, {y1}]")));
    }
    if !(step > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "grid step must be positive, got {step}"
        )));
    }
    let ratio = (y1 - y0) / step;
    let r = ratio.round();
    let n = if (ratio - r).abs() <= 1e-9 * ratio.max(1.0) {
        r
    } else {
        ratio.floor()
    };
    if n < 1.0 {
        return Err(Error::InvalidArgument(format!("step {step} longer than [{y0}, {y1}]")));
    }
    Ok(n as usize)
}

/// `2 Re Σ_{λ_n ≤ x} c_n e^{iλ_n y}`, ascending order, compensated.
pub fn eval_sum(spec: &Spectrum, y: f64, x: f64) -> f64 {
    let n = spec.count_up_to(x);
    eval_prefix(spec, n, y)
}

fn eval_prefix(spec: &Spectrum, n: usize, y: f64) -> f64 {
    let mut acc = CompensatedSum::new();
    for (&l, c) in spec.frequencies()[..n].iter().zip(&spec.coefficients()[..n]) {
        // c e^{iθ} + conj(c e^{iθ}) has an identically zero imaginary part.
        acc.add(2.0 * (c * unit_phasor(l, y)).re);
    }
    acc.value()
}

/// Tabulates `S(y, X)` on `[y0, y1]`.
///
/// With `fixed_y` the cutoff is `X = schedule(y1)` for every point, the
/// form in which moments are averaged; otherwise each point uses
/// `X = schedule(y)`.
pub fn eval_grid(
    spec: &Spectrum,
    y0: f64,
    y1: f64,
    step: f64,
    schedule: CutoffSchedule,
    fixed_y: bool,
) -> Result<SampledFunction> {
    schedule.validate()?;
    let n = grid_intervals(y0, y1, step)?;
    let x_end = schedule.cutoff(y1);
    let lambda_max = spec.max_frequency_up_to(x_end);
    if let Some(lm) = lambda_max {
        if step * lm > ALIASING_LIMIT {
            return Err(Error::Aliasing {
                step,
                lambda_max: lm,
                limit: ALIASING_LIMIT,
            });
        }
    }
    let n_end = spec.count_up_to(x_end);
    let values: Vec<f64> = (0..=n)
        .into_par_iter()
        .map(|k| {
            let y = y0 + step * k as f64;
            let terms = if fixed_y {
                n_end
            } else {
                spec.count_up_to(schedule.cutoff(y))
            };
            eval_prefix(spec, terms, y)
        })
        .collect();
    let mut f = SampledFunction::new(y0, step, values)?;
    f.schedule = Some(schedule);
    f.cutoff = Some(x_end);
    f.max_frequency = lambda_max;
    Ok(f)
}

/// Largest step the aliasing guard allows for frequencies up to `lambda_max`.
pub fn max_step(lambda_max: f64) -> f64 {
    ALIASING_LIMIT / lambda_max
}

/// Splits into `λ_n ≤ t` and `λ_n > t`.
pub fn split_truncation(spec: &Spectrum, t: f64) -> (Spectrum, Spectrum) {
    let k = spec.count_up_to(t);
    (spec.slice(0..k), spec.slice(k..spec.len()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;
    use proptest::prelude::*;
    use std::f64::consts::PI;

    fn spec(freqs: &[f64], coefs: &[f64]) -> Spectrum {
        Spectrum::new(freqs.to_vec(), coefs.iter().map(|&c| Complex64::new(c, 0.0)).collect()).unwrap()
    }

    #[test]
    fn point_values() {
        let s = spec(&[1.0], &[1.0]);
        assert_eq!(eval_sum(&s, 0.0, 10.0), 2.0);
        assert!(eval_sum(&s, PI / 2.0, 10.0).abs() < 1e-12);
        let s3 = spec(&[1.0, 2.0, 3.0], &[1.0, 1.0, 1.0]);
        assert_eq!(eval_sum(&s3, 0.0, 2.5), 4.0);
        assert_eq!(eval_sum(&Spectrum::empty(), 1.0, 10.0), 0.0);
    }

    #[test]
    fn grid_matches_cosine() {
        let s = spec(&[1.0], &[1.0]);
        let g = eval_grid(&s, 0.0, 2.0 * PI, PI / 100.0, CutoffSchedule::constant(10.0), true).unwrap();
        assert_eq!(g.len(), 201);
        for (k, v) in g.values.iter().enumerate() {
            assert!((v - 2.0 * g.y_at(k).cos()).abs() < 1e-12);
        }
    }

    #[test]
    fn empty_spectrum_grid_is_zero() {
        let g = eval_grid(&Spectrum::empty(), 0.0, 1.0, 0.1, CutoffSchedule::constant(5.0), true).unwrap();
        assert!(g.values.iter().all(|&v| v == 0.0));
    }

    #[test]
    fn aliasing_guard() {
        let s = spec(&[1000.0], &[1.0]);
        let err = eval_grid(&s, 0.0, 1.0, 0.01, CutoffSchedule::constant(2000.0), true).unwrap_err();
        assert!(err.to_string().contains("aliasing guard"));
        // Frequencies beyond the cutoff do not count.
        assert!(eval_grid(&s, 0.0, 1.0, 0.01, CutoffSchedule::constant(10.0), true).is_ok());
    }

    #[test]
    fn moving_cutoff_adds_terms_along_the_grid() {
        let s = spec(&[1.0, 5.0], &[1.0, 1.0]);
        let g = eval_grid(&s, 0.0, 10.0, 0.05, CutoffSchedule::Linear { x0: 1.0 }, false).unwrap();
        // y < 5 uses only λ = 1
        assert!((g.values[20] - 2.0 * 1.0f64.cos()).abs() < 1e-12);
        let y = g.y_at(180);
        assert!((g.values[180] - 2.0 * (y.cos() + (5.0 * y).cos())).abs() < 1e-12);
    }

    #[test]
    fn split_cases() {
        let s = spec(&[1.0, 2.0, 3.0], &[1.0, 1.0, 1.0]);
        let (lo, hi) = split_truncation(&s, 2.0);
        assert_eq!(lo.frequencies(), &[1.0, 2.0]);
        assert_eq!(hi.frequencies(), &[3.0]);
        let (lo, hi) = split_truncation(&s, 0.5);
        assert!(lo.is_empty() && hi.len() == 3);
        let (lo, hi) = split_truncation(&s, 9.0);
        assert!(lo.len() == 3 && hi.is_empty());
    }

    #[test]
    fn periodicity_probe() {
        let s = spec(&[1.0], &[1.0]);
        for &y in &[0.3, 17.0, 1234.5] {
            assert!((eval_sum(&s, y, 10.0) - eval_sum(&s, y + 2.0 * PI, 10.0)).abs() < 1e-12);
        }
    }

    fn arb_spectrum() -> impl Strategy<Value = Spectrum> {
        proptest::collection::btree_set(1u32..10_000, 1..25).prop_flat_map(|fs| {
            let n = fs.len();
            let freqs: Vec<f64> = fs.into_iter().map(|k| k as f64 * 0.013).collect();
            proptest::collection::vec((-3.0f64..3.0, -3.0f64..3.0), n).prop_map(move |cs| {
                Spectrum::new(
                    freqs.clone(),
                    cs.into_iter().map(|(a, b)| Complex64::new(a, b)).collect(),
                )
                .unwrap()
            })
        })
    }

    proptest! {
        #[test]
        fn split_is_linear(s in arb_spectrum(), t in 0.0f64..140.0, y in -500.0f64..500.0) {
            let (lo, hi) = split_truncation(&s, t);
            let whole = eval_sum(&s, y, f64::INFINITY);
            let parts = eval_sum(&lo, y, f64::INFINITY) + eval_sum(&hi, y, f64::INFINITY);
            prop_assert!((whole - parts).abs() < 1e-12 * (1.0 + s.coefficient_l1_up_to(f64::INFINITY)));
        }

        #[test]
        fn uniform_bound(s in arb_spectrum(), x in 0.0f64..140.0, y in -1e4f64..1e4) {
            let v = eval_sum(&s, y, x);
            prop_assert!(v.abs() <= 2.0 * s.coefficient_l1_up_to(x) * (1.0 + 1e-14) + 1e-300);
        }
    }
}
