//! Regular majorants, h-Beurling-Carleson sets, Joukowski-Privalov domains
//! and the harmonic-measure and moment estimates that connect them.
//!
//! The crate is organised bottom-up:
//!
//! - [`quadrature`]: adaptive Gauss-Kronrod and Gauss-Legendre rules.
//! - [`majorants`]: the functions `h`, the growth `λ_h`, positive sequences,
//!   least concave majorants and the Legendre-type infimum `inf nx + h(x)/x`.
//! - [`circle_sets`]: closed subsets of the unit circle stored by their gaps,
//!   Carleson sums and a Cantor-type construction.
//! - [`conformal`]: the Joukowski and Cayley maps, hyperbolic geodesics over
//!   gaps and the Joukowski-Privalov domain `𝔻_E`.
//! - [`harmonic_measure`]: closed-form half-plane measures, walk-on-spheres
//!   estimates and the verification engines built on them.
//! - [`spectral_moments`]: the weight `G`, its moments, weighted Bergman norms
//!   and the sub-mean-value estimate.
//! - [`cli`]: the command-line driver.

pub mod circle_sets;
pub mod cli;
pub mod conformal;
pub mod error;
pub mod harmonic_measure;
pub mod majorants;
pub mod quadrature;
pub mod spectral_moments;

pub use error::{Error, Result};

pub use num_complex::Complex64;
