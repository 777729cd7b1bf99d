//! Numerical building blocks shared by the higher-level modules.

pub mod fit;
pub mod phase;
pub mod quad;
pub mod special;
pub mod sum;

pub use fit::{linear_fit, LinearFit};
pub use phase::{reduce_phase, unit_phasor};
pub use quad::{adaptive, adaptive_complex, simpson};
pub use sum::{CompensatedSum, ComplexSum};
