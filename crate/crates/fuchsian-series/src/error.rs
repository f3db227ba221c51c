//! Crate error type.

use core::fmt;

/// Errors reported by the geometry, series and solver operations.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// A chart coordinate left the representable part of the open disc
    /// (|z| must stay below 1 - 1e-12; this is a domain restriction, not an
    /// approximation).
    PointOutsideDisc { abs: f64 },
    /// Two support points violate the claimed separation.
    SeparationViolated { i: usize, j: usize, dist: f64, r: f64 },
    /// Coefficient and support lengths disagree.
    LengthMismatch { points: usize, coeffs: usize },
    /// A parameter failed validation; the message names the constraint.
    InvalidParameter(&'static str),
    /// The separation is too small for the Neumann iteration: the residual
    /// contraction factor D(r) = 1/sinh^2(r/2) is >= 1. `r_star` is the
    /// threshold 2 asinh(1) that r must exceed.
    SeparationBelowThreshold { r: f64, d_r: f64, r_star: f64 },
    /// Adaptive quadrature could not reach the requested tolerance; carries
    /// the estimated absolute error of the best value.
    QuadratureDidNotConverge { estimate: f64 },
    /// The interpolation matrix is numerically singular or too ill
    /// conditioned to trust; carries a rough condition estimate.
    IllConditioned { condition_estimate: f64 },
    /// Group enumeration would exceed the configured element cap.
    EnumerationCapExceeded { count: usize, cap: usize },
    /// Two distinct group elements were too close for fingerprint
    /// deduplication to separate at desk scale.
    DedupCollision,
    /// Polynomial degree above the supported maximum.
    PolynomialDegreeTooHigh { degree: usize, max: usize },
    /// An operation that divides by a coefficient received zero.
    ZeroCoefficient,
    /// The sup-measurement grid does not cover the required ball.
    GridTooSmall { r_max: f64, required: f64 },
    /// The operation needs a converged extension result.
    NotConverged,
    /// The two data sets are not in the same (r, C) class.
    ClassMismatch,
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::PointOutsideDisc { abs } => {
                write!(f, "point with |z| = {abs} is outside the representable disc")
            }
            Error::SeparationViolated { i, j, dist, r } => write!(
                f,
                "points {i} and {j} are at distance {dist} < required separation {r}"
            ),
            Error::LengthMismatch { points, coeffs } => {
                write!(f, "support has {points} points but {coeffs} coefficients")
            }
            Error::InvalidParameter(what) => write!(f, "invalid parameter: {what}"),
            Error::SeparationBelowThreshold { r, d_r, r_star } => write!(
                f,
                "separation r = {r} gives contraction D(r) = {d_r} >= 1; \
                 the iteration needs r > 2 asinh(1) = {r_star}"
            ),
            Error::QuadratureDidNotConverge { estimate } => {
                write!(f, "quadrature did not converge (error estimate {estimate})")
            }
            Error::IllConditioned { condition_estimate } => write!(
                f,
                "interpolation system ill conditioned (estimate {condition_estimate})"
            ),
            Error::EnumerationCapExceeded { count, cap } => {
                write!(f, "group enumeration reached {count} elements (cap {cap})")
            }
            Error::DedupCollision => write!(
                f,
                "two distinct group elements are too close for desk-scale deduplication"
            ),
            Error::PolynomialDegreeTooHigh { degree, max } => {
                write!(f, "polynomial degree {degree} exceeds the maximum {max}")
            }
            Error::ZeroCoefficient => write!(f, "operation undefined for zero coefficient"),
            Error::GridTooSmall { r_max, required } => {
                write!(f, "grid covers radius {r_max} but {required} is required")
            }
            Error::NotConverged => write!(f, "extension result is not converged"),
            Error::ClassMismatch => write!(f, "data sets are not in the same (r, C) class"),
        }
    }
}

impl core::error::Error for Error {}
