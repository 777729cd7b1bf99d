//! Numerical toolkit for almost periodic expansions of arithmetic remainders.
//!
//! The crate is organised around a [`Spectrum`](spectrum::Spectrum): a finite
//! list of positive frequencies with complex coefficients, read in the
//! two-sided convention `2 Re Σ c_n e^{iλ_n y}`. On top of it sit
//!
//! - [`trigsum`]: evaluation of truncated exponential sums on points and grids,
//! - [`moments`]: empirical moments and resonance-sum asymptotic moments,
//! - [`distribution`]: occupation-time histograms and tail fits,
//! - [`arithmetic`]: the prime, circle and divisor remainders and their spectra,
//! - [`hyperbolic`]: orbit counting in the hyperbolic plane, the complete main
//!   term, windowed variance, the Selberg/Harish-Chandra transform family and
//!   smoothed kernels.
//!
//! Interchangeable algorithms (transform regimes, orbit enumerators) are
//! exposed through small trait-object registries so callers can pick a
//! strategy by name at run time.

// Range checks are written `!(x >= a)` so that NaN is rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod arithmetic;
pub mod distribution;
pub mod error;
pub mod hyperbolic;
pub mod moments;
pub mod numeric;
pub mod registry;
pub mod spectrum;
pub mod trigsum;

pub use error::{Error, Result};
pub use spectrum::{CutoffSchedule, DecayFit, Spectrum};
pub use trigsum::SampledFunction;
