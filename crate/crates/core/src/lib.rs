//! Contact interactions on a ring: exact spectra of the δ and ε zero-range
//! models, their finite-width local and separable realizations, truncated
//! plane-wave Hamiltonians, second-order perturbation theory with coupling
//! renormalization, and the slowly convergent sums behind it.
//!
//! Units are `ħ = 2m = 1`, so energies are `k²`; δ strengths `v` carry
//! 1/length and ε strengths `c` carry length.
//!
//! Everything is generic over [`Real`] (`f32` or `f64`); the aliases at the
//! crate root fix `f64`.

pub mod basis_matrix;
pub mod error;
pub mod exact_spectrum;
pub mod perturbation;
pub mod ring_model;
pub mod roots;
pub mod scalar;
pub mod series_kernels;

pub use error::{Error, Result};
pub use scalar::Real;

pub type Ring = ring_model::RingConfig<f64>;
pub type Delta = ring_model::DeltaCoupling<f64>;
pub type Epsilon = ring_model::EpsilonCoupling<f64>;
pub type Bare = ring_model::BareCoupling<f64>;
pub type Width = ring_model::Regularization<f64>;
pub type Spectrum = exact_spectrum::SpectrumResult<f64>;
pub type System = exact_spectrum::PiecewiseSystem<f64>;
