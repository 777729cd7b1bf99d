//! Quadrature rules: composite Simpson on tabulated samples and globally
//! adaptive Gauss–Kronrod (7/15) for real and complex integrands.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::numeric::sum::{CompensatedSum, ComplexSum};

/// Composite Simpson rule over equally spaced samples.
///
/// Requires an odd number of samples (an even number of intervals), at
/// least three.
pub fn simpson(values: &[f64], step: f64) -> Result<f64> {
    let n = values.len();
    if n < 3 || n.is_multiple_of(2) {
        return Err(Error::InvalidArgument(format!(
            "Simpson rule needs an odd sample count >= 3, got {n}"
        )));
    }
    let mut acc = CompensatedSum::new();
    acc.add(values[0]);
    acc.add(values[n - 1]);
    for (i, &v) in values.iter().enumerate().take(n - 1).skip(1) {
        acc.add(if i % 2 == 1 { 4.0 * v } else { 2.0 * v });
    }
    Ok(acc.value() * step / 3.0)
}

/// Composite Simpson of `f` on `[a, b]` with at least `min_intervals`
/// intervals (rounded up to even).
pub fn simpson_fn<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, min_intervals: usize) -> f64 {
    let mut n = min_intervals.max(2);
    if n % 2 == 1 {
        n += 1;
    }
    let h = (b - a) / n as f64;
    let mut acc = CompensatedSum::new();
    acc.add(f(a));
    acc.add(f(b));
    for i in 1..n {
        let x = a + h * i as f64;
        let w = if i % 2 == 1 { 4.0 } else { 2.0 };
        acc.add(w * f(x));
    }
    acc.value() * h / 3.0
}

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_5,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_48,
    0.0,
];

const WGK: [f64; 8] = [
    0.022_935_322_010_529_224,
    0.063_092_092_629_978_56,
    0.104_790_010_322_250_19,
    0.140_653_259_715_525_92,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_42,
    0.204_432_940_075_298_89,
    0.209_482_141_084_727_82,
];

/// Gauss weights for the nodes XGK[1], XGK[3], XGK[5], XGK[7].
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_64,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

fn gk15<F: Fn(f64) -> Complex64>(f: &F, a: f64, b: f64) -> (Complex64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut kronrod = fc * WGK[7];
    let mut gauss = fc * WG[3];
    for j in 0..7 {
        let dx = h * XGK[j];
        let s = f(c - dx) + f(c + dx);
        kronrod += s * WGK[j];
        if j % 2 == 1 {
            gauss += s * WG[j / 2];
        }
    }
    let k = kronrod * h;
    let g = gauss * h;
    (k, (k - g).norm())
}

struct Segment {
    a: f64,
    b: f64,
    value: Complex64,
    error: f64,
}

impl PartialEq for Segment {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}
impl Eq for Segment {}
impl PartialOrd for Segment {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Segment {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

/// Settings for the adaptive integrator.
#[derive(Debug, Clone, Copy)]
pub struct Tolerance {
    pub abs: f64,
    pub rel: f64,
    pub max_segments: usize,
}

impl Default for Tolerance {
    fn default() -> Self {
        Self {
            abs: 1e-13,
            rel: 1e-11,
            max_segments: 4000,
        }
    }
}

impl Tolerance {
    pub fn relative(rel: f64) -> Self {
        Self { rel, ..Self::default() }
    }
}

/// Globally adaptive Gauss–Kronrod integration of a complex integrand.
///
/// `breaks` are interior points where the integrand may be non-smooth; the
/// interval is split there before adaptation starts.
pub fn adaptive_complex<F>(f: F, a: f64, b: f64, breaks: &[f64], tol: Tolerance) -> Result<Complex64>
where
    F: Fn(f64) -> Complex64,
{
    if a == b {
        return Ok(Complex64::new(0.0, 0.0));
    }
    let (lo, hi, sign) = if a < b { (a, b, 1.0) } else { (b, a, -1.0) };
    let mut cuts: Vec<f64> = breaks.iter().copied().filter(|&x| x > lo && x < hi).collect();
    cuts.sort_by(f64::total_cmp);
    cuts.dedup();
    let mut points = Vec::with_capacity(cuts.len() + 2);
    points.push(lo);
    points.extend(cuts);
    points.push(hi);

    let mut heap = BinaryHeap::new();
    for w in points.windows(2) {
        let (value, error) = gk15(&f, w[0], w[1]);
        heap.push(Segment {
            a: w[0],
            b: w[1],
            value,
            error,
        });
    }

    let exact_totals = |heap: &BinaryHeap<Segment>| {
        let mut total = ComplexSum::new();
        let mut err = CompensatedSum::new();
        for s in heap.iter() {
            total.add(s.value);
            err.add(s.error);
        }
        (total.value(), err.value())
    };
    // Running totals steer the loop; they are recomputed exactly before
    // any decision to stop.
    let (mut value, mut err) = exact_totals(&heap);
    loop {
        let target = tol.abs.max(tol.rel * value.norm());
        if err <= target || heap.len() >= tol.max_segments {
            (value, err) = exact_totals(&heap);
            let target = tol.abs.max(tol.rel * value.norm());
            if err <= target {
                return Ok(value * sign);
            }
            if heap.len() >= tol.max_segments {
                return Err(Error::Quadrature {
                    tolerance: target,
                    estimate: err,
                });
            }
        }
        let worst = heap.pop().expect("heap is never empty");
        let mid = 0.5 * (worst.a + worst.b);
        if mid <= worst.a || mid >= worst.b {
            // Cannot bisect further at double precision.
            return Err(Error::Quadrature {
                tolerance: target,
                estimate: err,
            });
        }
        value -= worst.value;
        err -= worst.error;
        for (a, b) in [(worst.a, mid), (mid, worst.b)] {
            let (v, e) = gk15(&f, a, b);
            value += v;
            err += e;
            heap.push(Segment {
                a,
                b,
                value: v,
                error: e,
            });
        }
    }
}

/// Real-valued counterpart of [`adaptive_complex`].
pub fn adaptive<F>(f: F, a: f64, b: f64, breaks: &[f64], tol: Tolerance) -> Result<f64>
where
    F: Fn(f64) -> f64,
{
    adaptive_complex(|x| Complex64::new(f(x), 0.0), a, b, breaks, tol).map(|z| z.re)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn simpson_is_exact_for_cubics() {
        let h = 0.25;
        let vals: Vec<f64> = (0..=8).map(|i| (i as f64 * h).powi(3)).collect();
        let got = simpson(&vals, h).unwrap();
        assert!((got - 2.0f64.powi(4) / 4.0).abs() < 1e-13);
    }

    #[test]
    fn simpson_rejects_even_counts() {
        assert!(simpson(&[1.0, 2.0], 0.1).is_err());
        assert!(simpson(&[1.0, 2.0, 3.0, 4.0], 0.1).is_err());
    }

    #[test]
    fn gauss_kronrod_smooth_integrals() {
        let v = adaptive(|x| x.sin(), 0.0, PI, &[], Tolerance::default()).unwrap();
        assert!((v - 2.0).abs() < 1e-13);
        let v = adaptive(|x| (-x * x).exp(), -10.0, 10.0, &[], Tolerance::default()).unwrap();
        assert!((v - PI.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn endpoint_square_root_singularity_converges() {
        // ∫_0^1 sqrt(1-x) dx = 2/3
        let v = adaptive(|x| (1.0 - x).sqrt(), 0.0, 1.0, &[], Tolerance::relative(1e-10)).unwrap();
        assert!((v - 2.0 / 3.0).abs() < 1e-10);
    }

    #[test]
    fn reversed_limits_flip_sign() {
        let v = adaptive(|x| x, 1.0, 0.0, &[], Tolerance::default()).unwrap();
        assert!((v + 0.5).abs() < 1e-15);
    }

    #[test]
    fn kinks_at_breakpoints() {
        let v = adaptive(|x| (x - 0.3).abs(), 0.0, 1.0, &[0.3], Tolerance::default()).unwrap();
        assert!((v - (0.045 + 0.245)).abs() < 1e-14);
    }
}
