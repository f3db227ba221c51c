//! Hyperbolic geometry of the unit disc.
//!
//! Metric convention: `g = |dz|^2 / (1 - |z|^2)^2`, i.e. constant curvature
//! -4. Under this normalization `d(0, z) = atanh |z|`, a ball of hyperbolic
//! radius `R` has volume `pi sinh^2 R` and circumference `pi sinh 2R`.

use crate::error::Error;
use crate::math::{self, Complex64};
use crate::Result;
use alloc::vec::Vec;
use core::f64::consts::PI;

/// Hard bound on |z|: coordinates this close to the unit circle overflow the
/// conformal factor 1/(1-|z|^2), so construction rejects them outright.
pub const MAX_POINT_ABS: f64 = 1.0 - 1e-12;

/// A point of the open unit disc.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiscPoint {
    z: Complex64,
}

impl DiscPoint {
    /// Validates |z| < 1 - 1e-12.
    pub fn new(z: Complex64) -> Result<Self> {
        let abs = z.norm();
        if !(abs < MAX_POINT_ABS) {
            return Err(Error::PointOutsideDisc { abs });
        }
        Ok(Self { z })
    }

    pub fn from_coords(re: f64, im: f64) -> Result<Self> {
        Self::new(Complex64::new(re, im))
    }

    pub fn origin() -> Self {
        Self { z: Complex64::new(0.0, 0.0) }
    }

    /// The point at hyperbolic distance `d` from the origin in direction
    /// `theta`.
    pub fn polar(d: f64, theta: f64) -> Result<Self> {
        if d < 0.0 {
            return Err(Error::InvalidParameter("polar distance must be nonnegative"));
        }
        let rho = math::tanh(d);
        Self::new(Complex64::from_polar(rho, theta))
    }

    #[inline]
    pub fn z(&self) -> Complex64 {
        self.z
    }

    /// `1 - |z|^2`, the inverse conformal factor of the metric at the point.
    #[inline]
    pub fn one_minus_abs2(&self) -> f64 {
        1.0 - self.z.norm_sqr()
    }

    /// Hyperbolic distance to the origin, `atanh |z|`.
    pub fn dist_origin(&self) -> f64 {
        math::atanh(self.z.norm())
    }

    /// Hyperbolic distance `atanh |(p - q) / (1 - conj(q) p)|`.
    pub fn hyp_distance(&self, other: &DiscPoint) -> f64 {
        hyp_distance_raw(self.z, other.z)
    }
}

/// Distance helper on raw chart coordinates (both assumed inside the disc).
pub(crate) fn hyp_distance_raw(p: Complex64, q: Complex64) -> f64 {
    let num = (p - q).norm();
    let den = (Complex64::new(1.0, 0.0) - q.conj() * p).norm();
    math::atanh((num / den).min(MAX_POINT_ABS))
}

/// A holomorphic automorphism of the disc, `z -> e^{i theta} (z - a) / (1 - conj(a) z)`.
///
/// These are exactly the orientation-preserving isometries of the hyperbolic
/// metric.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiscAutomorphism {
    a: Complex64,
    theta: f64,
}

impl DiscAutomorphism {
    pub fn new(a: Complex64, theta: f64) -> Result<Self> {
        let abs = a.norm();
        if !(abs < MAX_POINT_ABS) {
            return Err(Error::PointOutsideDisc { abs });
        }
        Ok(Self { a, theta })
    }

    pub fn identity() -> Self {
        Self { a: Complex64::new(0.0, 0.0), theta: 0.0 }
    }

    /// The automorphism sending `x` to the origin with no post-rotation.
    pub fn to_zero(x: &DiscPoint) -> Self {
        Self { a: x.z(), theta: 0.0 }
    }

    /// A rotation about the origin.
    pub fn rotation(theta: f64) -> Self {
        Self { a: Complex64::new(0.0, 0.0), theta }
    }

    /// Hyperbolic translation along the ray of direction `direction`, moving
    /// the origin to hyperbolic distance `length` along it.
    pub fn translation(direction: f64, length: f64) -> Result<Self> {
        if length < 0.0 {
            return Err(Error::InvalidParameter("translation length must be nonnegative"));
        }
        let s = math::tanh(length);
        if !(s < MAX_POINT_ABS) {
            return Err(Error::InvalidParameter("translation length too large to represent"));
        }
        // z -> (z + s e^{i phi}) / (1 + s e^{-i phi} z), written in (a, theta) form.
        let a = -Complex64::from_polar(s, direction);
        Ok(Self { a, theta: 0.0 })
    }

    #[inline]
    pub fn a(&self) -> Complex64 {
        self.a
    }

    #[inline]
    pub fn theta(&self) -> f64 {
        self.theta
    }

    /// Applies the map to a raw chart coordinate.
    #[inline]
    pub fn apply(&self, z: Complex64) -> Complex64 {
        let rot = Complex64::from_polar(1.0, self.theta);
        rot * (z - self.a) / (Complex64::new(1.0, 0.0) - self.a.conj() * z)
    }

    /// Applies the map to a disc point.
    pub fn apply_point(&self, p: &DiscPoint) -> Result<DiscPoint> {
        DiscPoint::new(self.apply(p.z()))
    }

    /// Complex derivative `e^{i theta} (1 - |a|^2) / (1 - conj(a) z)^2`.
    #[inline]
    pub fn derivative(&self, z: Complex64) -> Complex64 {
        let rot = Complex64::from_polar(1.0, self.theta);
        let den = Complex64::new(1.0, 0.0) - self.a.conj() * z;
        rot * (1.0 - self.a.norm_sqr()) / (den * den)
    }

    pub fn inverse(&self) -> Self {
        let rot = Complex64::from_polar(1.0, self.theta);
        Self { a: -self.a * rot, theta: -self.theta }
    }

    /// SU(1,1)-style matrix entries (a, b) with the map acting as
    /// `z -> (a z + b) / (conj(b) z + conj(a))`, normalized to |a|^2 - |b|^2 = 1.
    pub(crate) fn matrix(&self) -> (Complex64, Complex64) {
        let half = Complex64::from_polar(1.0, self.theta / 2.0);
        let norm = math::sqrt(1.0 - self.a.norm_sqr());
        (half / norm, -half * self.a / norm)
    }

    pub(crate) fn from_matrix(ma: Complex64, mb: Complex64) -> Result<Self> {
        let a = -mb / ma;
        let theta = (ma / ma.conj()).arg();
        Self::new(a, theta)
    }
}

impl core::ops::Mul for DiscAutomorphism {
    type Output = DiscAutomorphism;

    /// Composition: `(f * g)(z) = f(g(z))`.
    fn mul(self, rhs: DiscAutomorphism) -> DiscAutomorphism {
        let (fa, fb) = self.matrix();
        let (ga, gb) = rhs.matrix();
        let ma = fa * ga + fb * gb.conj();
        let mb = fa * gb + fb * ga.conj();
        // |a| < 1 is preserved by composition; the guard can only trip at the
        // representational boundary.
        DiscAutomorphism::from_matrix(ma, mb)
            .expect("composition of disc automorphisms stays in the disc")
    }
}

/// Volume of the hyperbolic ball of radius `R`: `pi sinh^2 R`.
pub fn ball_volume(radius: f64) -> f64 {
    let s = math::sinh(radius.max(0.0));
    PI * s * s
}

/// Integrates a radial profile against the hyperbolic volume element:
/// `int_{lo}^{hi} f(t) 2 pi sinh(t) cosh(t) dt`, by adaptive Gauss-Legendre
/// bisection to relative accuracy 1e-9.
pub fn integrate_radial<F: Fn(f64) -> f64>(f: F, lo: f64, hi: f64) -> Result<f64> {
    if !(lo <= hi) {
        return Err(Error::InvalidParameter("integration bounds must satisfy lo <= hi"));
    }
    adaptive_quadrature(&|t| f(t) * 2.0 * PI * math::sinh(t) * math::cosh(t), lo, hi, 1e-9)
}

/// Adaptive GL16/GL32 bisection on [lo, hi] with relative target `rel_tol`.
pub(crate) fn adaptive_quadrature(
    f: &dyn Fn(f64) -> f64,
    lo: f64,
    hi: f64,
    rel_tol: f64,
) -> Result<f64> {
    if lo == hi {
        return Ok(0.0);
    }
    let coarse = math::gauss_legendre(16);
    let fine = math::gauss_legendre(32);
    let panel = |a: f64, b: f64| -> (f64, f64) {
        let mid = 0.5 * (a + b);
        let half = 0.5 * (b - a);
        let mut i16 = 0.0;
        for &(x, w) in &coarse {
            i16 += w * f(mid + half * x);
        }
        let mut i32v = 0.0;
        for &(x, w) in &fine {
            i32v += w * f(mid + half * x);
        }
        (half * i32v, math::abs(half * (i32v - i16)))
    };

    // First global estimate sets the absolute error budget.
    let (whole, _) = panel(lo, hi);
    let scale = math::abs(whole).max(1e-300);
    let total_len = hi - lo;

    let mut stack: Vec<(f64, f64, u32)> = alloc::vec![(lo, hi, 0)];
    let mut acc = math::Accumulator::new();
    let mut err_acc = 0.0;
    while let Some((a, b, depth)) = stack.pop() {
        let (val, err) = panel(a, b);
        let budget = rel_tol * scale * ((b - a) / total_len).max(1e-6);
        if err <= budget || depth >= 48 {
            if depth >= 48 && err > budget {
                return Err(Error::QuadratureDidNotConverge { estimate: err });
            }
            acc.add(val);
            err_acc += err;
        } else {
            let mid = 0.5 * (a + b);
            stack.push((a, mid, depth + 1));
            stack.push((mid, b, depth + 1));
        }
    }
    let value = acc.value();
    if err_acc > rel_tol * math::abs(value).max(scale) * 4.0 {
        return Err(Error::QuadratureDidNotConverge { estimate: err_acc });
    }
    Ok(value)
}

/// Quadrature grid for the hyperbolic ball `B(0, r_max)` in polar form:
/// composite Gauss-Legendre panels in the radial hyperbolic coordinate,
/// uniform (trapezoid) nodes in angle.
///
/// The radial weights already include the circumference factor
/// `2 pi sinh(d) cosh(d)`, so the weight of node `(d_i, theta_j)` is
/// `w_i / n_theta` and all weights sum to the ball volume `pi sinh^2(r_max)`.
#[derive(Debug, Clone)]
pub struct PolarQuadratureGrid {
    radial: Vec<(f64, f64)>,
    n_theta: usize,
    r_max: f64,
}

impl PolarQuadratureGrid {
    /// Panels of width <= 1 with 16 radial nodes each.
    pub fn new(r_max: f64, n_theta: usize) -> Result<Self> {
        Self::with_radial_order(r_max, n_theta, 16)
    }

    pub fn with_radial_order(r_max: f64, n_theta: usize, order: usize) -> Result<Self> {
        if !(r_max > 0.0) {
            return Err(Error::InvalidParameter("grid radius must be positive"));
        }
        if n_theta < 4 {
            return Err(Error::InvalidParameter("grid needs at least 4 angular nodes"));
        }
        let rule = math::gauss_legendre(order.max(4));
        let n_panels = libm::ceil(r_max).max(1.0) as usize;
        let width = r_max / n_panels as f64;
        let mut radial = Vec::with_capacity(n_panels * rule.len());
        for p in 0..n_panels {
            let a = p as f64 * width;
            let mid = a + 0.5 * width;
            let half = 0.5 * width;
            for &(x, w) in &rule {
                let d = mid + half * x;
                let circ = 2.0 * PI * math::sinh(d) * math::cosh(d);
                radial.push((d, w * half * circ));
            }
        }
        Ok(Self { radial, n_theta, r_max })
    }

    #[inline]
    pub fn r_max(&self) -> f64 {
        self.r_max
    }

    #[inline]
    pub fn n_theta(&self) -> usize {
        self.n_theta
    }

    /// Radial nodes with their ring weights (angular factor not yet divided
    /// out).
    pub fn radial_nodes(&self) -> &[(f64, f64)] {
        &self.radial
    }

    /// Sum of all node weights; equals the ball volume up to quadrature
    /// accuracy.
    pub fn total_weight(&self) -> f64 {
        let mut acc = math::Accumulator::new();
        for &(_, w) in &self.radial {
            acc.add(w);
        }
        acc.value()
    }

    /// Integrates a scalar field over the ball against the hyperbolic volume.
    pub fn integrate<F: Fn(Complex64) -> f64>(&self, f: F) -> f64 {
        let mut acc = math::Accumulator::new();
        let dth = 2.0 * PI / self.n_theta as f64;
        for &(d, w) in &self.radial {
            let rho = math::tanh(d);
            let mut ring = 0.0;
            for j in 0..self.n_theta {
                let th = j as f64 * dth;
                ring += f(Complex64::from_polar(rho, th));
            }
            acc.add(ring * w / self.n_theta as f64);
        }
        acc.value()
    }

    /// Visits every node `(d, theta, weight)`.
    pub fn for_each_node<F: FnMut(f64, f64, f64)>(&self, mut f: F) {
        let dth = 2.0 * PI / self.n_theta as f64;
        for &(d, w) in &self.radial {
            for j in 0..self.n_theta {
                f(d, j as f64 * dth, w / self.n_theta as f64);
            }
        }
    }
}
