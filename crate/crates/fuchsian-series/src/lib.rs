//! Fuchsian series of holomorphic quadratic differentials on the hyperbolic
//! unit disc.
//!
//! The disc carries the metric `|dz|^2 / (1 - |z|^2)^2` (constant curvature
//! -4; ball volume `pi sinh^2 R`). Every constant in this crate follows that
//! normalization; renormalizing to curvature -1 rescales all of them.
//!
//! A quadratic differential value `c dz^2` prescribed at a point of the disc
//! has a unique holomorphic extension of minimal L1 norm, with the closed
//! form `c (1-|t|^2)^4 / (1 - conj(t) z)^4` and hyperbolic-norm profile
//! `sech^4(distance)`. Summing minimal extensions over an r-separated support
//! gives a Fuchsian series: a bounded holomorphic quadratic differential that
//! almost interpolates its data. The crate provides
//!
//! - [`hypgeo`]: disc geometry, automorphisms, hyperbolic quadrature;
//! - [`quaddiff`]: samples, minimal extensions, norms and tail masses;
//! - [`fuchsian`]: series over separated sets and the explicit constants
//!   `A`, `B`, `C`, `D` with their sup and residual bounds;
//! - [`extend`]: the interpolation solver (geometric Neumann iteration,
//!   cross-checked by a dense linear solve) with certified sup bounds;
//! - [`theta`]: classical Poincare theta series over Fuchsian group orbits,
//!   truncated by word length;
//! - [`perturb`]: the L1 distance between prescribed values, neighborhoods of
//!   supported data, and a measured continuity modulus for the series map.
//!
//! The crate is `no_std`-compatible (requires `alloc`); the `std` feature
//! (default) only switches float intrinsics and error-trait plumbing.

#![cfg_attr(not(feature = "std"), no_std)]

extern crate alloc;

pub mod error;
pub mod extend;
pub mod fuchsian;
pub mod hypgeo;
pub(crate) mod math;
pub mod perturb;
pub mod quaddiff;
pub mod theta;

pub use error::Error;
pub use extend::{extend_direct, extend_neumann, extension_sup_certificate, ExtensionResult};
pub use fuchsian::{
    cauchy_constant_A, constant_table, make_separated_set, separation_threshold,
    truncation_bound, ConstantTable, FuchsianSeries, QDData, SeparatedSet, SetKind,
};
pub use hypgeo::{ball_volume, integrate_radial, DiscAutomorphism, DiscPoint, PolarQuadratureGrid};
pub use quaddiff::{extension_hyp_norm_profile, tail_mass, MinimalExtension, QDSample};
pub use theta::{enumerate_group, theta_series, DiscPolynomial, FuchsianGroup, OrbitEnumeration};

/// Radial cutoff standing in for infinity in improper integrals. The
/// integrands at hand decay like `exp(-2 d)` or faster, so truncation at 30
/// is far below double-precision resolution.
pub const RADIAL_CUTOFF: f64 = 30.0;

/// Result alias used throughout the crate.
pub type Result<T> = core::result::Result<T, Error>;
