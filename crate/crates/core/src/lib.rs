//! # qsrm
//!
//! Symbol error probabilities of coherent-state (laser) data transmission in
//! the presence of thermal noise, evaluated with the square root measurement
//! (SRM) on finite-dimensional Glauber density operators.
//!
//! The pipeline is:
//!
//! 1. [`constellation`] builds the transmitted amplitudes (QAM or PSK) for a
//!    photon budget `Ns`.
//! 2. [`glauber`] turns every amplitude into a thermal-noise density matrix in
//!    the photon-number basis, truncated with the quasi-unitary trace rule.
//! 3. [`hermitian`] factors each density matrix as `ρ ≈ γγ*`, keeping only the
//!    numerically relevant eigenvalues.
//! 4. [`srm`] (any constellation) or [`gus`] (PSK, block-circulant Gram matrix)
//!    computes the transition probabilities `p(j|i)` of the SRM.
//! 5. [`baseline`] supplies the classical homodyne error probability and the
//!    exact binary (Helstrom) optimum for comparison.
//!
//! [`system`] wires the steps together for a single operating point and
//! [`sweep`] evaluates whole error-probability curves. [`worked`] reproduces
//! the classic worked examples with golden values.
//!
//! All matrices are dense `nalgebra` complex matrices ([`ComplexMatrix`]).

#![forbid(unsafe_code)]

pub mod baseline;
pub mod constellation;
pub mod glauber;
pub mod gus;
pub mod hermitian;
pub mod srm;
pub mod sweep;
pub mod system;
pub mod worked;

mod error;

pub use error::{Error, Result};

pub use baseline::{helstrom_binary_pe, homodyne_pe, HomodyneModel};
pub use constellation::{Constellation, Modulation};
pub use glauber::{CoherentAmplitude, DensityMatrix, ThermalNoise};
pub use gus::GusSpectrum;
pub use hermitian::{HermEig, RankMetric, StateFactor};
pub use srm::{DetectionResult, Route, StateMatrix};
pub use system::{evaluate, PointConfig};

/// Complex scalar used throughout.
pub type C64 = num_complex::Complex64;

/// Dense complex matrix. Kets are `n × 1`, state factors `n × r`.
pub type ComplexMatrix = nalgebra::DMatrix<C64>;

/// Largest entry magnitude, the norm used for all tolerance contracts.
pub fn max_abs(a: &ComplexMatrix) -> f64 {
    a.iter().fold(0.0, |m, z| m.max(z.norm()))
}
