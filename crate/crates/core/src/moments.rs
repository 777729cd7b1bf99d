//! Empirical moments of sampled functions and asymptotic moments from
//! sign-resonant frequency tuples.
//!
//! With the two-sided convention every power `S(y)^n` expands into terms
//! `A_g(c_J) e^{iϑ_g(λ_J) y}` indexed by a multi-index `J` and a sign vector
//! `g ∈ {±1}^n`, where
//!
//! ```text
//! ϑ_g(λ_J) = Σ_s g_s λ_{j_s},      A_g(c_J) = Π_s g_s(c_{j_s}),
//! ```
//!
//! and `g_s(c)` is `c` for `+1` and `conj(c)` for `-1`. Only tuples with
//! `ϑ_g = 0` survive the long-time average, so
//! `L_n = Σ_{ϑ_g(λ_J)=0} A_g(c_J)`.
//!
//! The resonant tuples are found by splitting each tuple into a prefix and a
//! suffix: all suffixes are tabulated and sorted by their partial phase sum,
//! and every prefix is matched by binary search against the negated sum.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_complex::{Complex, Complex64};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numeric::{quad::simpson, CompensatedSum, ComplexSum};
use crate::spectrum::{CutoffSchedule, Spectrum};
use crate::trigsum::{eval_grid, SampledFunction, ALIASING_LIMIT};

/// Relative resonance tolerance used when none is given: `1e-9 · λ_max`.
pub const DEFAULT_RELATIVE_TOLERANCE: f64 = 1e-9;

/// Default cap on enumerated half-tuples.
pub const DEFAULT_MAX_TERMS: u64 = 1_000_000_000;

/// Prefix tuples handled per parallel work item; fixed so the reduction
/// order does not depend on the thread count.
const CHUNK: u64 = 4096;

/// Signs `g_s ∈ {+1, −1}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SignVector(Vec<i8>);

impl SignVector {
    pub fn new(entries: Vec<i8>) -> Result<Self> {
        if entries.is_empty() || entries.iter().any(|&e| e != 1 && e != -1) {
            return Err(Error::InvalidArgument(format!("invalid sign vector {entries:?}")));
        }
        Ok(Self(entries))
    }

    pub fn entries(&self) -> &[i8] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// One member of the resonant set.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResonantTuple {
    pub indices: Vec<usize>,
    pub signs: SignVector,
    /// Residual `ϑ_g(λ_J)`; zero in exact mode.
    pub theta: f64,
    pub amplitude: Complex64,
}

impl ResonantTuple {
    /// Recomputes `A_g(c_J)` from the spectrum.
    pub fn recompute_amplitude(&self, spec: &Spectrum) -> Complex64 {
        self.indices
            .iter()
            .zip(self.signs.entries())
            .fold(Complex64::new(1.0, 0.0), |acc, (&j, &g)| {
                let c = spec.coefficients()[j];
                acc * if g > 0 { c } else { c.conj() }
            })
    }
}

/// Empirical and asymptotic moments of one order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MomentReport {
    pub order: u32,
    /// Resonance tolerance (0 in exact mode).
    pub tolerance: f64,
    pub exact: bool,
    pub resonance_count: u64,
    /// Present only when the enumeration ran to completion.
    pub theoretical: Option<f64>,
    /// Exact value as a reduced fraction, in exact mode.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub theoretical_exact: Option<String>,
    /// Set when the term budget stopped the enumeration.
    pub budget_exceeded: bool,
    /// `|Im Σ A_g|`, which cancels between conjugate tuples.
    pub imaginary_residual: f64,
    /// `Σ |A_g|` over the resonant tuples.
    pub amplitude_mass: f64,
    /// `(Y, (1/Y) ∫_{y_start}^Y φ^n)` pairs.
    pub empirical: Vec<(f64, f64)>,
    pub y_start: f64,
}

impl MomentReport {
    fn empty(order: u32, tolerance: f64, exact: bool) -> Self {
        Self {
            order,
            tolerance,
            exact,
            resonance_count: 0,
            theoretical: None,
            theoretical_exact: None,
            budget_exceeded: false,
            imaginary_residual: 0.0,
            amplitude_mass: 0.0,
            empirical: Vec::new(),
            y_start: 0.0,
        }
    }

    /// JSON object `{order, tolerance, resonance_count, theoretical, empirical, …}`.
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("report is always serialisable")
    }
}

/// `(1/Y) ∫_{y0}^{Y} f(y)^n dy` by composite Simpson on the stored grid.
pub fn empirical_moment(f: &SampledFunction, n: u32, y_end: f64) -> Result<f64> {
    if n == 0 {
        return Err(Error::InvalidArgument("moment order must be at least 1".into()));
    }
    if let Some(lm) = f.max_frequency {
        if f.step * lm > ALIASING_LIMIT * (1.0 + 1e-12) {
            return Err(Error::Aliasing {
                step: f.step,
                lambda_max: lm,
                limit: ALIASING_LIMIT,
            });
        }
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
        .ok_or_else(|| Error::InvalidArgument(format!("Y = {y_end} is not a grid point")))?;
    if k % 2 != 0 {
        return Err(Error::InvalidArgument(format!(
            "Simpson rule needs an even number of intervals up to Y = {y_end}, got {k}"
        )));
    }
    let powered: Vec<f64> = f.values[..=k].iter().map(|v| v.powi(n as i32)).collect();
    Ok(simpson(&powered, f.step)? / y_end)
}

/// Enumeration settings for [`theoretical_moment`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MomentOptions {
    /// Absolute resonance tolerance; `None` picks `1e-9 · λ_max`.
    pub tolerance: Option<f64>,
    /// Use exact rational arithmetic on the (dyadic) inputs, tolerance 0.
    pub exact: bool,
    pub max_terms: u64,
}

impl Default for MomentOptions {
    fn default() -> Self {
        Self {
            tolerance: None,
            exact: false,
            max_terms: DEFAULT_MAX_TERMS,
        }
    }
}

impl MomentOptions {
    pub fn exact() -> Self {
        Self {
            exact: true,
            ..Self::default()
        }
    }

    pub fn with_tolerance(tolerance: f64) -> Self {
        Self {
            tolerance: Some(tolerance),
            ..Self::default()
        }
    }

    fn resolved_tolerance(&self, spec: &Spectrum) -> f64 {
        if self.exact {
            0.0
        } else {
            self.tolerance
                .unwrap_or_else(|| DEFAULT_RELATIVE_TOLERANCE * spec.max_frequency().unwrap_or(0.0))
        }
    }
}

/// Arithmetic used by the resonance matcher: phase-sum keys, amplitudes and
/// an accumulator for the products.
trait ResonanceArith: Sync {
    type Key: Clone + Send + Sync;
    type Amp: Clone + Send + Sync;
    type Acc: Send;

    fn atom_count(&self) -> usize;
    fn atom_key(&self, atom: usize) -> &Self::Key;
    fn atom_amp(&self, atom: usize) -> &Self::Amp;
    fn zero_key(&self) -> Self::Key;
    fn add_key(&self, a: &Self::Key, b: &Self::Key) -> Self::Key;
    fn cmp_key(&self, a: &Self::Key, b: &Self::Key) -> Ordering;
    /// Inclusive bounds on suffix keys that resonate with a prefix key.
    fn window(&self, prefix: &Self::Key) -> (Self::Key, Self::Key);
    fn key_to_f64(&self, k: &Self::Key) -> f64;
    fn one(&self) -> Self::Amp;
    fn mul(&self, a: &Self::Amp, b: &Self::Amp) -> Self::Amp;
    fn to_c64(&self, a: &Self::Amp) -> Complex64;
    fn new_acc(&self) -> Self::Acc;
    fn acc_add(&self, acc: &mut Self::Acc, a: &Self::Amp);
    fn acc_merge(&self, acc: &mut Self::Acc, other: Self::Acc);
}

/// Atoms are `2j` (sign +1, coefficient `c_j`) and `2j + 1` (sign −1,
/// coefficient `conj(c_j)`).
fn atom_parts(atom: usize) -> (usize, i8) {
    (atom / 2, if atom.is_multiple_of(2) { 1 } else { -1 })
}

struct FloatArith {
    keys: Vec<f64>,
    amps: Vec<Complex64>,
    tol: f64,
}

#[derive(Default)]
struct FloatAcc {
    sum: ComplexSum,
    mass: CompensatedSum,
}

impl FloatArith {
    fn new(spec: &Spectrum, tol: f64) -> Self {
        let mut keys = Vec::with_capacity(2 * spec.len());
        let mut amps = Vec::with_capacity(2 * spec.len());
        for (l, c) in spec.iter() {
            keys.push(l);
            amps.push(c);
            keys.push(-l);
            amps.push(c.conj());
        }
        Self { keys, amps, tol }
    }
}

impl ResonanceArith for FloatArith {
    type Key = f64;
    type Amp = Complex64;
    type Acc = FloatAcc;

    fn atom_count(&self) -> usize {
        self.keys.len()
    }
    fn atom_key(&self, atom: usize) -> &f64 {
        &self.keys[atom]
    }
    fn atom_amp(&self, atom: usize) -> &Complex64 {
        &self.amps[atom]
    }
    fn zero_key(&self) -> f64 {
        0.0
    }
    fn add_key(&self, a: &f64, b: &f64) -> f64 {
        a + b
    }
    fn cmp_key(&self, a: &f64, b: &f64) -> Ordering {
        a.total_cmp(b)
    }
    fn window(&self, prefix: &f64) -> (f64, f64) {
        (-prefix - self.tol, -prefix + self.tol)
    }
    fn key_to_f64(&self, k: &f64) -> f64 {
        *k
    }
    fn one(&self) -> Complex64 {
        Complex64::new(1.0, 0.0)
    }
    fn mul(&self, a: &Complex64, b: &Complex64) -> Complex64 {
        a * b
    }
    fn to_c64(&self, a: &Complex64) -> Complex64 {
        *a
    }
    fn new_acc(&self) -> FloatAcc {
        FloatAcc::default()
    }
    fn acc_add(&self, acc: &mut FloatAcc, a: &Complex64) {
        acc.sum.add(*a);
        acc.mass.add(a.norm());
    }
    fn acc_merge(&self, acc: &mut FloatAcc, other: FloatAcc) {
        acc.sum.add(other.sum.value());
        acc.mass.add(other.mass.value());
    }
}

type ExactComplex = Complex<BigRational>;

/// Exact arithmetic on the binary values of the inputs: frequencies become
/// integers after scaling by a common power of two, coefficients become
/// Gaussian dyadic rationals.
struct ExactArith {
    keys: Vec<BigInt>,
    amps: Vec<ExactComplex>,
    scale: f64,
}

#[derive(Default)]
struct ExactAcc {
    sum: Option<ExactComplex>,
    mass: CompensatedSum,
}

fn exact_rational(x: f64) -> BigRational {
    BigRational::from_float(x).expect("finite by Spectrum invariant")
}

impl ExactArith {
    fn new(spec: &Spectrum) -> Self {
        let freqs: Vec<BigRational> = spec.frequencies().iter().map(|&l| exact_rational(l)).collect();
        // Denominators are powers of two, so the largest is a common multiple.
        let denom = freqs
            .iter()
            .map(|f| f.denom().clone())
            .max()
            .unwrap_or_else(BigInt::one);
        let scale = denom.to_f64().unwrap_or(f64::INFINITY);
        let mut keys = Vec::with_capacity(2 * freqs.len());
        let mut amps = Vec::with_capacity(2 * freqs.len());
        for (f, c) in freqs.iter().zip(spec.coefficients()) {
            let k = f.numer() * (&denom / f.denom());
            let re = exact_rational(c.re);
            let im = exact_rational(c.im);
            keys.push(k.clone());
            amps.push(Complex::new(re.clone(), im.clone()));
            keys.push(-k);
            amps.push(Complex::new(re, -im));
        }
        Self { keys, amps, scale }
    }
}

impl ResonanceArith for ExactArith {
    type Key = BigInt;
    type Amp = ExactComplex;
    type Acc = ExactAcc;

    fn atom_count(&self) -> usize {
        self.keys.len()
    }
    fn atom_key(&self, atom: usize) -> &BigInt {
        &self.keys[atom]
    }
    fn atom_amp(&self, atom: usize) -> &ExactComplex {
        &self.amps[atom]
    }
    fn zero_key(&self) -> BigInt {
        BigInt::zero()
    }
    fn add_key(&self, a: &BigInt, b: &BigInt) -> BigInt {
        a + b
    }
    fn cmp_key(&self, a: &BigInt, b: &BigInt) -> Ordering {
        a.cmp(b)
    }
    fn window(&self, prefix: &BigInt) -> (BigInt, BigInt) {
        (-prefix, -prefix)
    }
    fn key_to_f64(&self, k: &BigInt) -> f64 {
        k.to_f64().unwrap_or(f64::NAN) / self.scale
    }
    fn one(&self) -> ExactComplex {
        Complex::new(BigRational::one(), BigRational::zero())
    }
    fn mul(&self, a: &ExactComplex, b: &ExactComplex) -> ExactComplex {
        a * b
    }
    fn to_c64(&self, a: &ExactComplex) -> Complex64 {
        Complex64::new(a.re.to_f64().unwrap_or(f64::NAN), a.im.to_f64().unwrap_or(f64::NAN))
    }
    fn new_acc(&self) -> ExactAcc {
        ExactAcc::default()
    }
    fn acc_add(&self, acc: &mut ExactAcc, a: &ExactComplex) {
        acc.mass.add(self.to_c64(a).norm());
        acc.sum = Some(match acc.sum.take() {
            Some(s) => s + a,
            None => a.clone(),
        });
    }
    fn acc_merge(&self, acc: &mut ExactAcc, other: ExactAcc) {
        acc.mass.add(other.mass.value());
        if let Some(o) = other.sum {
            acc.sum = Some(match acc.sum.take() {
                Some(s) => s + o,
                None => o,
            });
        }
    }
}

/// Base-`radix` digits of `index`, most significant first.
fn decode(mut index: u64, radix: u64, len: usize, out: &mut [usize]) {
    for slot in out[..len].iter_mut().rev() {
        *slot = (index % radix) as usize;
        index /= radix;
    }
}

fn checked_pow(base: u64, exp: u32) -> Option<u64> {
    base.checked_pow(exp)
}

struct Enumeration<A: ResonanceArith> {
    acc: A::Acc,
    count: u64,
    tuples: Vec<(Vec<usize>, A::Key, A::Amp)>,
}

/// Core matcher. Returns `None` if the half-tuple budget would be exceeded.
fn enumerate<A: ResonanceArith>(arith: &A, order: usize, max_terms: u64, collect: bool) -> Option<Enumeration<A>> {
    let radix = arith.atom_count() as u64;
    let suffix_len = order / 2;
    let prefix_len = order - suffix_len;
    let n_suffix = checked_pow(radix, suffix_len as u32)?;
    let n_prefix = checked_pow(radix, prefix_len as u32)?;
    if n_suffix.checked_add(n_prefix)? > max_terms {
        return None;
    }
    if radix == 0 {
        return Some(Enumeration {
            acc: arith.new_acc(),
            count: 0,
            tuples: Vec::new(),
        });
    }

    let tuple_value = |index: u64, len: usize| -> (A::Key, A::Amp) {
        let mut digits = [0usize; 32];
        decode(index, radix, len, &mut digits);
        let mut key = arith.zero_key();
        let mut amp = arith.one();
        for &a in &digits[..len] {
            key = arith.add_key(&key, arith.atom_key(a));
            amp = arith.mul(&amp, arith.atom_amp(a));
        }
        (key, amp)
    };

    // Suffix table sorted by phase sum; ties keep lexicographic order.
    let mut suffixes: Vec<(A::Key, A::Amp, u64)> = (0..n_suffix)
        .into_par_iter()
        .map(|i| {
            let (k, a) = tuple_value(i, suffix_len);
            (k, a, i)
        })
        .collect();
    suffixes.par_sort_by(|a, b| arith.cmp_key(&a.0, &b.0).then(a.2.cmp(&b.2)));

    let n_chunks = n_prefix.div_ceil(CHUNK);
    let partials: Vec<Enumeration<A>> = (0..n_chunks)
        .into_par_iter()
        .map(|chunk| {
            let mut part = Enumeration::<A> {
                acc: arith.new_acc(),
                count: 0,
                tuples: Vec::new(),
            };
            let end = ((chunk + 1) * CHUNK).min(n_prefix);
            for p in chunk * CHUNK..end {
                let (pk, pa) = tuple_value(p, prefix_len);
                let (lo, hi) = arith.window(&pk);
                let start = suffixes.partition_point(|s| arith.cmp_key(&s.0, &lo) == Ordering::Less);
                for s in suffixes[start..].iter() {
                    if arith.cmp_key(&s.0, &hi) == Ordering::Greater {
                        break;
                    }
                    let amp = arith.mul(&pa, &s.1);
                    arith.acc_add(&mut part.acc, &amp);
                    part.count += 1;
                    if collect {
                        let mut atoms = vec![0usize; order];
                        decode(p, radix, prefix_len, &mut atoms[..prefix_len]);
                        decode(s.2, radix, suffix_len, &mut atoms[prefix_len..]);
                        let key = arith.add_key(&pk, &s.0);
                        part.tuples.push((atoms, key, amp));
                    }
                }
            }
            part
        })
        .collect();

    let mut total = Enumeration::<A> {
        acc: arith.new_acc(),
        count: 0,
        tuples: Vec::new(),
    };
    for part in partials {
        arith.acc_merge(&mut total.acc, part.acc);
        total.count += part.count;
        total.tuples.extend(part.tuples);
    }
    Some(total)
}

fn validate_order(n: u32) -> Result<()> {
    if n == 0 || n > 32 {
        return Err(Error::InvalidArgument(format!(
            "moment order must be in 1..=32, got {n}"
        )));
    }
    Ok(())
}

/// Asymptotic moment `L_n` as the sum over resonant tuples of the stored
/// (finite) spectrum.
///
/// A report with `budget_exceeded` set and no `theoretical` value is
/// returned when the enumeration would need more than `max_terms`
/// half-tuples.
pub fn theoretical_moment(spec: &Spectrum, n: u32, opts: &MomentOptions) -> Result<MomentReport> {
    validate_order(n)?;
    let tol = opts.resolved_tolerance(spec);
    if !(tol >= 0.0) {
        return Err(Error::InvalidArgument(format!(
            "tolerance must be non-negative, got {tol}"
        )));
    }
    let mut report = MomentReport::empty(n, tol, opts.exact);
    if opts.exact {
        let arith = ExactArith::new(spec);
        match enumerate(&arith, n as usize, opts.max_terms, false) {
            None => report.budget_exceeded = true,
            Some(e) => {
                let sum = e.acc.sum.unwrap_or_else(|| arith.one() - arith.one());
                report.resonance_count = e.count;
                report.amplitude_mass = e.acc.mass.value();
                report.imaginary_residual = sum.im.abs().to_f64().unwrap_or(f64::NAN);
                report.theoretical = sum.re.to_f64();
                report.theoretical_exact = Some(sum.re.to_string());
            }
        }
    } else {
        let arith = FloatArith::new(spec, tol);
        match enumerate(&arith, n as usize, opts.max_terms, false) {
            None => report.budget_exceeded = true,
            Some(e) => {
                let sum = e.acc.sum.value();
                report.resonance_count = e.count;
                report.amplitude_mass = e.acc.mass.value();
                report.imaginary_residual = sum.im.abs();
                report.theoretical = Some(sum.re);
            }
        }
    }
    if report.budget_exceeded {
        log::warn!(
            "order-{n} resonance enumeration exceeds the budget of {} terms",
            opts.max_terms
        );
    }
    Ok(report)
}

/// Exact `L_n` as a complex dyadic rational (imaginary part zero for any
/// valid spectrum). Used where bit-exact comparisons are needed.
pub fn theoretical_moment_exact(spec: &Spectrum, n: u32, max_terms: u64) -> Result<Complex<BigRational>> {
    validate_order(n)?;
    let arith = ExactArith::new(spec);
    let e = enumerate(&arith, n as usize, max_terms, false)
        .ok_or_else(|| Error::BudgetExceeded(format!("order-{n} resonance enumeration over {max_terms} terms")))?;
    Ok(e.acc
        .sum
        .unwrap_or_else(|| Complex::new(BigRational::zero(), BigRational::zero())))
}

/// Lists every resonant tuple (intended for small spectra and inspection).
pub fn resonant_tuples(spec: &Spectrum, n: u32, opts: &MomentOptions) -> Result<Vec<ResonantTuple>> {
    validate_order(n)?;
    let budget_err = || Error::BudgetExceeded(format!("order-{n} resonance enumeration over {} terms", opts.max_terms));
    fn convert<A: ResonanceArith>(arith: &A, raw: Vec<(Vec<usize>, A::Key, A::Amp)>) -> Vec<ResonantTuple> {
        raw.into_iter()
            .map(|(atoms, key, amp)| {
                let (indices, signs): (Vec<usize>, Vec<i8>) = atoms.into_iter().map(atom_parts).unzip();
                ResonantTuple {
                    indices,
                    signs: SignVector(signs),
                    theta: arith.key_to_f64(&key),
                    amplitude: arith.to_c64(&amp),
                }
            })
            .collect()
    }
    if opts.exact {
        let arith = ExactArith::new(spec);
        let e = enumerate(&arith, n as usize, opts.max_terms, true).ok_or_else(budget_err)?;
        Ok(convert(&arith, e.tuples))
    } else {
        let arith = FloatArith::new(spec, opts.resolved_tolerance(spec));
        let e = enumerate(&arith, n as usize, opts.max_terms, true).ok_or_else(budget_err)?;
        Ok(convert(&arith, e.tuples))
    }
}

/// Grid step used for averaging an order-`n` power of a sum with top
/// frequency `lambda_max`: within the aliasing guard and with
/// `n · λ_max · step ≤ 1`.
pub fn averaging_step(lambda_max: Option<f64>, n: u32) -> f64 {
    match lambda_max {
        Some(lm) if lm > 0.0 => (ALIASING_LIMIT / lm).min(1.0 / (n.max(1) as f64 * lm)),
        _ => 0.1,
    }
}

/// Builds `[0, Y]` grids with `X = schedule(Y)` and records the empirical
/// moment for every `Y`; the asymptotic moment of the spectrum truncated at
/// `schedule(max Y)` is attached when the enumeration fits the budget.
pub fn moment_convergence(
    spec: &Spectrum,
    n: u32,
    schedule: CutoffSchedule,
    y_list: &[f64],
    opts: &MomentOptions,
) -> Result<MomentReport> {
    validate_order(n)?;
    if y_list.is_empty() {
        return Err(Error::InvalidArgument("empty list of horizons".into()));
    }
    if y_list.windows(2).any(|w| !(w[0] < w[1])) || !(y_list[0] > 0.0) {
        return Err(Error::InvalidArgument(
            "horizons must be positive and increasing".into(),
        ));
    }
    let y_last = *y_list.last().expect("non-empty");
    let truncated = spec.truncated(schedule.cutoff(y_last));
    let mut report = theoretical_moment(&truncated, n, opts)?;
    report.y_start = 0.0;
    for &y in y_list {
        let lm = spec.max_frequency_up_to(schedule.cutoff(y));
        let target = averaging_step(lm, n);
        let mut intervals = (y / target).ceil() as usize;
        intervals += intervals % 2;
        let step = y / intervals as f64;
        let grid = eval_grid(spec, 0.0, y, step, schedule, true)?;
        let value = empirical_moment(&grid, n, grid.y_end())?;
        report.empirical.push((y, value));
    }
    Ok(report)
}

/// `|a − b|` relative to `max(1, |b|)`.
pub fn relative_gap(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(1.0)
}

/// Exact `|c|²` of an f64 complex number as a rational.
pub fn exact_norm_sqr(c: Complex64) -> BigRational {
    let re = exact_rational(c.re);
    let im = exact_rational(c.im);
    &re * &re + &im * &im
}

/// Sign of an exact rational as -1, 0, 1.
pub fn rational_sign(x: &BigRational) -> i8 {
    if x.is_zero() {
        0
    } else if x.is_positive() {
        1
    } else {
        -1
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn real_spec(freqs: &[f64], coefs: &[f64]) -> Spectrum {
        Spectrum::new(freqs.to_vec(), coefs.iter().map(|&c| Complex64::new(c, 0.0)).collect()).unwrap()
    }

    fn cosine_grid() -> SampledFunction {
        let s = real_spec(&[1.0], &[1.0]);
        eval_grid(&s, 0.0, 2000.0 * PI, PI / 100.0, CutoffSchedule::constant(10.0), true).unwrap()
    }

    #[test]
    fn cosine_empirical_moments() {
        let g = cosine_grid();
        let y = g.y_end();
        assert!((empirical_moment(&g, 1, y).unwrap()).abs() < 1e-6);
        assert!((empirical_moment(&g, 2, y).unwrap() - 2.0).abs() < 1e-6);
        // mean of 16 cos⁴ = 16 · 3/8
        assert!((empirical_moment(&g, 4, y).unwrap() - 6.0).abs() < 1e-5);
    }

    #[test]
    fn empirical_moment_errors() {
        let g = cosine_grid();
        assert!(empirical_moment(&g, 2, g.y_end() + 1.0).is_err());
        assert!(empirical_moment(&g, 2, g.y_at(3)).is_err());
        assert!(empirical_moment(&g, 2, g.y_at(3) + 0.001).is_err());
        assert!(empirical_moment(&g, 0, g.y_end()).is_err());
    }

    #[test]
    fn resonant_spectrum_moments() {
        let s = real_spec(&[1.0, 2.0, 3.0], &[1.0, 1.0, 1.0]);
        let r2 = theoretical_moment(&s, 2, &MomentOptions::exact()).unwrap();
        assert_eq!(r2.theoretical, Some(6.0));
        assert_eq!(r2.resonance_count, 6);
        let r3 = theoretical_moment(&s, 3, &MomentOptions::exact()).unwrap();
        assert_eq!(r3.theoretical, Some(18.0));
        assert_eq!(r3.resonance_count, 18);
        let f3 = theoretical_moment(&s, 3, &MomentOptions::default()).unwrap();
        assert_eq!(f3.theoretical, Some(18.0));
    }

    #[test]
    fn first_moment_vanishes() {
        let s = real_spec(&[0.5, 1.7, 2.9], &[0.3, -1.0, 2.0]);
        for opts in [MomentOptions::exact(), MomentOptions::default()] {
            let r = theoretical_moment(&s, 1, &opts).unwrap();
            assert_eq!(r.theoretical, Some(0.0));
            assert_eq!(r.resonance_count, 0);
        }
    }

    #[test]
    fn third_moment_tuples_have_expected_types() {
        let s = real_spec(&[1.0, 2.0, 3.0], &[1.0, 1.0, 1.0]);
        let tuples = resonant_tuples(&s, 3, &MomentOptions::exact()).unwrap();
        assert_eq!(tuples.len(), 18);
        for t in &tuples {
            assert_eq!(t.theta, 0.0);
            assert_eq!(t.recompute_amplitude(&s), t.amplitude);
            let signed: f64 = t
                .indices
                .iter()
                .zip(t.signs.entries())
                .map(|(&j, &g)| g as f64 * s.frequencies()[j])
                .sum();
            assert_eq!(signed, 0.0);
        }
    }

    #[test]
    fn diagonal_law_for_independent_frequencies() {
        let s = Spectrum::new(
            vec![1.0, 2f64.sqrt(), 3f64.sqrt()],
            vec![
                Complex64::new(0.5, 0.2),
                Complex64::new(-0.3, 0.0),
                Complex64::new(0.1, 0.7),
            ],
        )
        .unwrap();
        let l2 = theoretical_moment(&s, 2, &MomentOptions::default())
            .unwrap()
            .theoretical
            .unwrap();
        assert!((l2 - 2.0 * s.coefficient_l2_squared()).abs() < 1e-15);
        let l3 = theoretical_moment(&s, 3, &MomentOptions::default()).unwrap();
        assert_eq!(l3.theoretical, Some(0.0));
        assert_eq!(l3.resonance_count, 0);
    }

    #[test]
    fn budget_is_flagged() {
        let s = real_spec(&[1.0, 2.0, 3.0], &[1.0, 1.0, 1.0]);
        let opts = MomentOptions {
            max_terms: 10,
            ..MomentOptions::default()
        };
        let r = theoretical_moment(&s, 4, &opts).unwrap();
        assert!(r.budget_exceeded);
        assert!(r.theoretical.is_none());
        assert!(theoretical_moment_exact(&s, 4, 10).unwrap_err().is_budget());
    }

    #[test]
    fn empty_spectrum_moments_are_zero() {
        let r = theoretical_moment(&Spectrum::empty(), 3, &MomentOptions::default()).unwrap();
        assert_eq!(r.theoretical, Some(0.0));
    }

    #[test]
    fn convergence_of_single_cosine() {
        let s = real_spec(&[1.0], &[1.0]);
        let r = moment_convergence(
            &s,
            2,
            CutoffSchedule::constant(10.0),
            &[100.0, 1000.0, 10000.0],
            &MomentOptions::default(),
        )
        .unwrap();
        assert_eq!(r.theoretical, Some(2.0));
        let errs: Vec<f64> = r.empirical.iter().map(|&(_, v)| (v - 2.0).abs()).collect();
        assert!(errs.windows(2).all(|w| w[1] < w[0]), "{errs:?}");
        for (&(y, _), e) in r.empirical.iter().zip(&errs) {
            assert!(*e <= 1.0 / y, "Y={y} err={e}");
        }
    }

    #[test]
    fn json_shape() {
        let s = real_spec(&[1.0], &[1.0]);
        let mut r = theoretical_moment(&s, 2, &MomentOptions::default()).unwrap();
        r.empirical.push((10.0, 2.01));
        let v = r.to_json();
        for key in ["order", "tolerance", "resonance_count", "theoretical", "empirical"] {
            assert!(v.get(key).is_some(), "missing {key}");
        }
        assert_eq!(v["empirical"][0][0], 10.0);
    }
}
