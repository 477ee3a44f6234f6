//! Numerical laboratory for open multi-agent linear consensus on random
//! graphs sampled from graphons.
//!
//! The crate provides:
//!
//! * [`graphon`] — graphon kernels (stochastic block models in particular),
//!   expected graphs at deterministic latent points, and Bernoulli sampling
//!   of simple graphs;
//! * [`spectral`] — Laplacian spectra, the block-level reduction that yields
//!   the normalized algebraic connectivity of an SBM expected graph, and
//!   exact / Monte Carlo estimation of `E[e^{-2 gamma mu2}]`;
//! * [`consensus`] — exact continuous-time propagation of `x' = -L x`
//!   between events and the disagreement descriptor;
//! * [`openmas`] — the open-system event layer: replacements, the bounded
//!   arrival/departure size process, and full simulation loops;
//! * [`bounds`] — closed-form steady-state disagreement bounds (`thm1`,
//!   `thm2`), the spectral estimate bound (`thm3`) with its `psi` correction
//!   term, and the large-`n` precondition checker.
//!
//! All numerical code is generic over the scalar type through [`Scalar`]
//! (`f32` or `f64`); the `*64` aliases at the crate root fix the default
//! double-precision instantiations used by the command-line tools.

pub mod bounds;
pub mod consensus;
pub mod error;
pub mod graphon;
pub mod openmas;
pub mod rng;
pub mod scalar;
pub mod spectral;

pub use error::{Error, Result};
pub use scalar::Scalar;

/// Default scalar type for the command-line tools and experiment harness.
pub type Real = f64;

pub type Sbm64 = graphon::SbmGraphon<Real>;
pub type ExpectedGraph64 = graphon::ExpectedGraph<Real>;
pub type Spectrum64 = spectral::LaplacianSpectrum<Real>;
pub type SbmReduction64 = spectral::SbmReduction<Real>;
pub type ExpMu2Estimate64 = spectral::ExpMu2Estimate<Real>;
pub type BoundReport64 = bounds::BoundReport<Real>;
pub type Trajectory64 = openmas::Trajectory<Real>;
pub type States64 = nalgebra::DVector<Real>;
