//! Lattice point counting in the hyperbolic plane: orbit counts, the main
//! term and its remainder, smoothing kernels and spectral transforms.

pub mod counting;
pub mod geometry;
pub mod kernels;
pub mod remainder;
pub mod shc;
pub mod spectral;

pub use counting::{orbit_counters, GeneratorSearch, ModularScan, OrbitCounter, OrbitProfile};
pub use geometry::{hyperbolic_distance, point_pair_invariant, HPoint, MoebiusMap, RealMoebiusMap};
pub use spectral::{main_term, SpectralData};
