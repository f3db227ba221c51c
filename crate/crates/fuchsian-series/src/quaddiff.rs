//! Quadratic-differential values at points of the disc and their minimal-L1
//! holomorphic extensions.
//!
//! A value `q = c dz^2` at `t` has hyperbolic norm `|c| (1 - |t|^2)^2`. Its
//! minimal extension is `c (1 - |t|^2)^4 / (1 - conj(t) z)^4 dz^2`: the
//! pullback of the constant differential under the automorphism sending `t`
//! to the origin, where the minimizer is `dz^2` itself. The extension's
//! hyperbolic norm depends only on the distance `d` to `t`, through the
//! profile `sech^4 d`, which integrates to total mass `pi` per unit norm and
//! tail mass `pi sech^2 R` outside radius `R`.

use crate::error::Error;
use crate::hypgeo::{DiscAutomorphism, DiscPoint, PolarQuadratureGrid};
use crate::math::{self, Complex64};
use crate::Result;
use core::f64::consts::PI;

/// A quadratic-differential value `coeff * dz^2` attached to a disc point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QDSample {
    base: DiscPoint,
    coeff: Complex64,
}

impl QDSample {
    pub fn new(base: DiscPoint, coeff: Complex64) -> Self {
        Self { base, coeff }
    }

    #[inline]
    pub fn base(&self) -> &DiscPoint {
        &self.base
    }

    #[inline]
    pub fn coeff(&self) -> Complex64 {
        self.coeff
    }

    /// Hyperbolic norm `|coeff| (1 - |base|^2)^2`.
    pub fn hyp_norm(&self) -> f64 {
        self.coeff.norm() * math::sq(self.base.one_minus_abs2())
    }

    /// The holomorphic extension minimizing the L1 norm.
    pub fn minimal_extension(&self) -> MinimalExtension {
        MinimalExtension::new(self)
    }

    /// The sample transported by the automorphism `phi`, so that minimal
    /// extensions pull back to minimal extensions: the value of
    /// `phi^*(ext)` at `phi^{-1}(base)`.
    pub fn pullback(&self, phi: &DiscAutomorphism) -> Result<QDSample> {
        let new_base = phi.inverse().apply_point(&self.base)?;
        let dphi = phi.derivative(new_base.z());
        Ok(QDSample::new(new_base, self.coeff * dphi * dphi))
    }
}

/// Closed-form evaluator of the minimal-L1 holomorphic extension of a sample.
#[derive(Debug, Clone, Copy)]
pub struct MinimalExtension {
    source: QDSample,
    /// Cached numerator `coeff * (1 - |t|^2)^4`.
    numerator: Complex64,
    t_conj: Complex64,
}

impl MinimalExtension {
    pub fn new(source: &QDSample) -> Self {
        let m = source.base.one_minus_abs2();
        Self {
            source: *source,
            numerator: source.coeff * math::pow4(m),
            t_conj: source.base.z().conj(),
        }
    }

    #[inline]
    pub fn source(&self) -> &QDSample {
        &self.source
    }

    /// Coefficient of `dz^2` at `z`.
    #[inline]
    pub fn eval(&self, z: Complex64) -> Complex64 {
        let den = Complex64::new(1.0, 0.0) - self.t_conj * z;
        self.numerator / math::cpow4(den)
    }

    /// Hyperbolic norm of the extension at `z`.
    #[inline]
    pub fn eval_hyp_norm(&self, z: Complex64) -> f64 {
        self.eval(z).norm() * math::sq(1.0 - z.norm_sqr())
    }
}

/// Hyperbolic norm at distance `d` of the minimal extension of a sample of
/// unit hyperbolic norm: `sech^4 d`.
pub fn extension_hyp_norm_profile(d: f64) -> f64 {
    math::sech4(d)
}

/// L1 norm of a minimal extension: `pi * hyp_norm(source)`.
pub fn l1_norm(e: &MinimalExtension) -> f64 {
    PI * e.source.hyp_norm()
}

/// Oracle-mode L1 norm by two-dimensional quadrature of the hyperbolic norm
/// against the hyperbolic volume, on the given grid.
pub fn l1_norm_quadrature(e: &MinimalExtension, grid: &PolarQuadratureGrid) -> f64 {
    grid.integrate(|z| e.eval_hyp_norm(z))
}

/// Mass of a unit-norm minimal extension outside the ball of radius `R`
/// around its base point: `pi sech^2 R`.
pub fn tail_mass(radius: f64) -> f64 {
    PI * math::sech2(radius.max(0.0))
}

/// The symmetry ratios `|ext(q1) at base2| / |q1|` and `|ext(q2) at base1| / |q2|`
/// (hyperbolic norms); the two agree for any pair of nonzero samples.
pub fn symmetry_check(s1: &QDSample, s2: &QDSample) -> Result<(f64, f64)> {
    let h1 = s1.hyp_norm();
    let h2 = s2.hyp_norm();
    if h1 == 0.0 || h2 == 0.0 {
        return Err(Error::ZeroCoefficient);
    }
    let r12 = s1.minimal_extension().eval_hyp_norm(s2.base.z()) / h1;
    let r21 = s2.minimal_extension().eval_hyp_norm(s1.base.z()) / h2;
    Ok((r12, r21))
}

/// Weight-4 pullback of an arbitrary coefficient field under an automorphism:
/// `(phi^* tau)(z) = tau(phi(z)) * phi'(z)^2`.
pub fn pullback_value<F: Fn(Complex64) -> Complex64>(
    phi: &DiscAutomorphism,
    tau: F,
    z: Complex64,
) -> Complex64 {
    let d = phi.derivative(z);
    tau(phi.apply(z)) * d * d
}
