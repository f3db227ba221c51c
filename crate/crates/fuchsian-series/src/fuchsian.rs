//! Fuchsian series over r-separated supports and their explicit constants.
//!
//! For data `q = {q_t}` on an r-separated set `T`, the series
//! `sigma(q) = sum_t ext(q_t)` of minimal extensions is a bounded holomorphic
//! quadratic differential. With the area-mean-value constant
//! `A(r) = 1 / (pi tanh^2 r)` one gets the two bounds
//!
//! - sup bound: `|sigma(q)| <= C(r) |q|` with `C(r) = pi A(r/2) = 1/tanh^2(r/2)`,
//! - residual bound: `|sigma(q) - q| on T <= D(r) |q|` with
//!   `D(r) = A(r/2) B(r/2) = 1/sinh^2(r/2)`,
//!
//! where `B(R) = pi sech^2 R` is the tail mass of a unit minimal extension.
//! `D(r) < 1` exactly when `r > 2 asinh(1)`, which is what the extension
//! solver needs. Sharper choices of `A` exist; every downstream threshold is
//! derived from [`constant_table`], never hard-coded.

use crate::error::Error;
use crate::hypgeo::{DiscAutomorphism, DiscPoint, PolarQuadratureGrid};
use crate::math::{self, Complex64};
use crate::quaddiff::{tail_mass, MinimalExtension, QDSample};
use crate::Result;
use alloc::vec::Vec;
use core::f64::consts::PI;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Absolute slack allowed when certifying pairwise separation, to keep
/// isometry-transported sets constructible.
pub const SEPARATION_SLACK: f64 = 1e-9;

/// A finite list of disc points with certified pairwise hyperbolic
/// separation >= r.
#[derive(Debug, Clone)]
pub struct SeparatedSet {
    points: Vec<DiscPoint>,
    r: f64,
}

impl SeparatedSet {
    /// Certifies the separation with the O(n^2) pairwise check.
    pub fn new(points: Vec<DiscPoint>, r: f64) -> Result<Self> {
        if !(r > 0.0) {
            return Err(Error::InvalidParameter("separation r must be positive"));
        }
        for i in 0..points.len() {
            for j in (i + 1)..points.len() {
                let dist = points[i].hyp_distance(&points[j]);
                if dist < r - SEPARATION_SLACK {
                    return Err(Error::SeparationViolated { i, j, dist, r });
                }
            }
        }
        Ok(Self { points, r })
    }

    #[inline]
    pub fn points(&self) -> &[DiscPoint] {
        &self.points
    }

    #[inline]
    pub fn r(&self) -> f64 {
        self.r
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.points.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Keeps the first `n` points; separation is inherited.
    pub fn truncated(&self, n: usize) -> SeparatedSet {
        SeparatedSet {
            points: self.points.iter().take(n).copied().collect(),
            r: self.r,
        }
    }

    pub fn min_pairwise_distance(&self) -> Option<f64> {
        let mut best: Option<f64> = None;
        for i in 0..self.points.len() {
            for j in (i + 1)..self.points.len() {
                let d = self.points[i].hyp_distance(&self.points[j]);
                best = Some(best.map_or(d, |b: f64| b.min(d)));
            }
        }
        best
    }
}

/// Quadratic-differential data on a separated support, with the cached
/// hyperbolic sup norm over the support.
#[derive(Debug, Clone)]
pub struct QDData {
    support: SeparatedSet,
    coeffs: Vec<Complex64>,
    sup_norm: f64,
}

impl QDData {
    pub fn new(support: SeparatedSet, coeffs: Vec<Complex64>) -> Result<Self> {
        if support.len() != coeffs.len() {
            return Err(Error::LengthMismatch {
                points: support.len(),
                coeffs: coeffs.len(),
            });
        }
        let sup_norm = support
            .points()
            .iter()
            .zip(&coeffs)
            .map(|(p, c)| c.norm() * math::sq(p.one_minus_abs2()))
            .fold(0.0, f64::max);
        Ok(Self { support, coeffs, sup_norm })
    }

    /// Data of unit hyperbolic norm at every support point.
    pub fn with_unit_hyp_norm(support: SeparatedSet) -> Result<Self> {
        let coeffs = support
            .points()
            .iter()
            .map(|p| Complex64::new(1.0 / math::sq(p.one_minus_abs2()), 0.0))
            .collect();
        Self::new(support, coeffs)
    }

    #[inline]
    pub fn support(&self) -> &SeparatedSet {
        &self.support
    }

    #[inline]
    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    /// Cached `max_t |q_t|` in hyperbolic norm.
    #[inline]
    pub fn sup_norm(&self) -> f64 {
        self.sup_norm
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn sample(&self, i: usize) -> QDSample {
        QDSample::new(self.support.points()[i], self.coeffs[i])
    }

    /// Transports support and coefficients by the pullback under `phi`
    /// (support points move by `phi^{-1}`).
    pub fn pullback(&self, phi: &DiscAutomorphism) -> Result<QDData> {
        let inv = phi.inverse();
        let mut points = Vec::with_capacity(self.len());
        let mut coeffs = Vec::with_capacity(self.len());
        for (p, c) in self.support.points().iter().zip(&self.coeffs) {
            let moved = inv.apply_point(p)?;
            let d = phi.derivative(moved.z());
            points.push(moved);
            coeffs.push(c * d * d);
        }
        let support = SeparatedSet::new(points, self.support.r())?;
        QDData::new(support, coeffs)
    }
}

/// The explicit constants of the sup and residual bounds at separation `r`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConstantTable {
    pub r: f64,
    /// Area-mean-value constant at half separation, `A(r/2)`.
    pub a_half: f64,
    /// Tail mass at half separation, `B(r/2) = pi sech^2(r/2)`.
    pub b_half: f64,
    /// Sup-bound constant `C(r) = pi A(r/2) = 1/tanh^2(r/2)`.
    pub c: f64,
    /// Residual-bound constant `D(r) = A(r/2) B(r/2) = 1/sinh^2(r/2)`.
    pub d: f64,
}

impl ConstantTable {
    /// Certified sup bound for the solved extension, `E(r) = C(r)/(1 - D(r))`;
    /// infinite when `D(r) >= 1`.
    pub fn extension_bound(&self) -> f64 {
        if self.d < 1.0 {
            self.c / (1.0 - self.d)
        } else {
            f64::INFINITY
        }
    }
}

/// Area-mean-value constant: `|tau(x)| <= A(r) int_{B(x,r)} |tau| dv` for
/// holomorphic quadratic differentials, with `A(r) = 1/(pi tanh^2 r)`.
/// Decreasing in `r`, with limit `1/pi`.
#[allow(non_snake_case)]
pub fn cauchy_constant_A(r: f64) -> f64 {
    1.0 / (PI * math::sq(math::tanh(r)))
}

pub fn constant_table(r: f64) -> Result<ConstantTable> {
    if !(r > 0.0) {
        return Err(Error::InvalidParameter("separation r must be positive"));
    }
    let a_half = cauchy_constant_A(0.5 * r);
    let b_half = tail_mass(0.5 * r);
    Ok(ConstantTable { r, a_half, b_half, c: PI * a_half, d: a_half * b_half })
}

/// The separation above which the residual contraction wins: `2 asinh(1)`,
/// the unique root of `D(r) = 1`.
pub fn separation_threshold() -> f64 {
    2.0 * math::asinh(1.0)
}

/// Certified bound, per unit data norm, on the hyperbolic norm at `x` of the
/// sum over support points farther than `R` from `x`:
/// `A(r/2) * tail_mass(R - r/2)`. Requires `R > r/2`.
pub fn truncation_bound(r: f64, radius: f64) -> Result<f64> {
    if !(r > 0.0) {
        return Err(Error::InvalidParameter("separation r must be positive"));
    }
    if !(radius > 0.5 * r) {
        return Err(Error::InvalidParameter("truncation radius must exceed r/2"));
    }
    Ok(cauchy_constant_A(0.5 * r) * tail_mass(radius - 0.5 * r))
}

/// The Fuchsian series `sigma(q)`: the finite sum of the minimal extensions
/// of the data. Evaluation is exact up to rounding (no truncation).
#[derive(Debug, Clone)]
pub struct FuchsianSeries {
    data: QDData,
    extensions: Vec<MinimalExtension>,
}

impl FuchsianSeries {
    pub fn new(data: QDData) -> Self {
        let extensions = (0..data.len()).map(|i| data.sample(i).minimal_extension()).collect();
        Self { data, extensions }
    }

    #[inline]
    pub fn data(&self) -> &QDData {
        &self.data
    }

    /// Coefficient of `dz^2` at `z`. Terms are sorted by distance to the
    /// evaluation point and combined by pairwise tree summation.
    pub fn evaluate(&self, z: Complex64) -> Complex64 {
        let mut terms: Vec<(f64, Complex64)> = self
            .extensions
            .iter()
            .map(|e| {
                let t = e.source().base().z();
                let pseudo = ((z - t) / (Complex64::new(1.0, 0.0) - t.conj() * z)).norm_sqr();
                (pseudo, e.eval(z))
            })
            .collect();
        terms.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap_or(core::cmp::Ordering::Equal));
        let mut vals: Vec<Complex64> = terms.into_iter().map(|(_, v)| v).collect();
        math::pairwise_sum(&mut vals)
    }

    /// Hyperbolic norm of the series at `z`.
    pub fn evaluate_hyp_norm(&self, z: Complex64) -> f64 {
        self.evaluate(z).norm() * math::sq(1.0 - z.norm_sqr())
    }

    /// Sum of only the terms with base within hyperbolic distance `radius`
    /// of `z`; the discarded mass is controlled by [`truncation_bound`].
    pub fn evaluate_truncated(&self, z: Complex64, radius: f64) -> Complex64 {
        let mut vals: Vec<Complex64> = self
            .extensions
            .iter()
            .filter(|e| crate::hypgeo::hyp_distance_raw(e.source().base().z(), z) <= radius)
            .map(|e| e.eval(z))
            .collect();
        math::pairwise_sum(&mut vals)
    }

    /// Measured grid sup of the hyperbolic norm against the theorem bound
    /// `C(r) |q|`. The grid must cover a ball of radius >= 2r. The
    /// measurement samples the grid nodes, equispaced rings of step 0.05,
    /// and local patches around every support point; it is reported as a
    /// measured value, not an exact sup.
    pub fn sup_bound_check(&self, grid: &PolarQuadratureGrid) -> Result<SupBoundReport> {
        let ct = constant_table(self.data.support.r())?;
        let required = 2.0 * self.data.support.r();
        if grid.r_max() < required {
            return Err(Error::GridTooSmall { r_max: grid.r_max(), required });
        }
        let mut sup = 0.0f64;
        // Quadrature-grid nodes.
        grid.for_each_node(|d, th, _| {
            let z = Complex64::from_polar(math::tanh(d), th);
            sup = sup.max(self.evaluate_hyp_norm(z));
        });
        // Equispaced rings, radial step 0.05.
        sup = sup.max(self.ring_sup(grid.r_max(), 0.05, grid.n_theta()));
        // Local refinement around the support.
        sup = sup.max(self.support_patch_sup(grid.r_max()));
        Ok(SupBoundReport {
            measured_sup: sup,
            bound: ct.c * self.data.sup_norm,
            data_sup_norm: self.data.sup_norm,
        })
    }

    fn ring_sup(&self, r_max: f64, step: f64, n_theta: usize) -> f64 {
        let mut sup = self.evaluate_hyp_norm(Complex64::new(0.0, 0.0));
        let rings = libm::ceil(r_max / step) as usize;
        for k in 1..=rings {
            let rho = math::tanh(k as f64 * step);
            for j in 0..n_theta {
                let th = 2.0 * PI * j as f64 / n_theta as f64;
                sup = sup.max(self.evaluate_hyp_norm(Complex64::from_polar(rho, th)));
            }
        }
        sup
    }

    fn support_patch_sup(&self, r_max: f64) -> f64 {
        let mut sup = 0.0f64;
        for p in self.data.support.points() {
            if p.dist_origin() > r_max + 1.0 {
                continue;
            }
            let back = DiscAutomorphism::to_zero(p).inverse();
            for i in 0..=12 {
                let delta = 0.05 * i as f64;
                let rho = math::tanh(delta);
                for j in 0..24 {
                    let th = 2.0 * PI * j as f64 / 24.0;
                    let z = back.apply(Complex64::from_polar(rho, th));
                    if z.norm() < crate::hypgeo::MAX_POINT_ABS {
                        sup = sup.max(self.evaluate_hyp_norm(z));
                    }
                }
            }
        }
        sup
    }

    /// Max over the support of the hyperbolic norm of `sigma(q) - q`,
    /// against the theorem bound `D(r) |q|`.
    pub fn residual_check(&self) -> Result<ResidualReport> {
        let ct = constant_table(self.data.support.r())?;
        let mut measured = 0.0f64;
        for (i, p) in self.data.support.points().iter().enumerate() {
            let diff = self.evaluate(p.z()) - self.data.coeffs[i];
            measured = measured.max(diff.norm() * math::sq(p.one_minus_abs2()));
        }
        Ok(ResidualReport {
            measured,
            bound: ct.d * self.data.sup_norm,
            data_sup_norm: self.data.sup_norm,
        })
    }
}

/// Outcome of [`FuchsianSeries::sup_bound_check`]. A violation would be an
/// implementation bug: the bound is a theorem.
#[derive(Debug, Clone, Copy)]
pub struct SupBoundReport {
    pub measured_sup: f64,
    pub bound: f64,
    pub data_sup_norm: f64,
}

impl SupBoundReport {
    pub fn within_bound(&self) -> bool {
        self.measured_sup <= self.bound * (1.0 + 1e-12) + 1e-300
    }
}

/// Outcome of [`FuchsianSeries::residual_check`].
#[derive(Debug, Clone, Copy)]
pub struct ResidualReport {
    pub measured: f64,
    pub bound: f64,
    pub data_sup_norm: f64,
}

impl ResidualReport {
    pub fn within_bound(&self) -> bool {
        self.measured <= self.bound * (1.0 + 1e-12) + 1e-300
    }
}

/// Test-data generators for separated sets.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SetKind {
    /// Hyperbolic-area-uniform Poisson proposals inside `B(0, radius)`,
    /// processed in seeded order with first-fit acceptance.
    GreedyRandom,
    /// Orbit of the origin under the genus-2 octagon group, restricted to
    /// `B(0, radius)` and greedily thinned to separation `r`. Deterministic
    /// for every seed.
    LatticeOrbit,
}

/// Builds an r-separated set inside `B(0, radius)`, deterministic given the
/// seed. May return small sets when the ball is tight for the separation.
pub fn make_separated_set(kind: SetKind, r: f64, radius: f64, seed: u64) -> Result<SeparatedSet> {
    if !(r > 0.0) {
        return Err(Error::InvalidParameter("separation r must be positive"));
    }
    if !(radius > 0.0) {
        return Err(Error::InvalidParameter("ball radius must be positive"));
    }
    match kind {
        SetKind::GreedyRandom => greedy_random_set(r, radius, seed),
        SetKind::LatticeOrbit => lattice_orbit_set(r, radius),
    }
}

fn greedy_random_set(r: f64, radius: f64, seed: u64) -> Result<SeparatedSet> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    // Disjoint-ball packing bound for the proposal budget.
    let capacity = math::sq(math::sinh(radius + 0.5 * r) / math::sinh(0.5 * r));
    let proposals = (4.0 * capacity).clamp(64.0, 20_000.0) as usize;
    let sinh_r = math::sinh(radius);
    let mut accepted: Vec<DiscPoint> = Vec::new();
    for _ in 0..proposals {
        let u: f64 = rng.random_range(0.0..1.0);
        let th: f64 = rng.random_range(0.0..(2.0 * PI));
        // Area-uniform radial law: P(d <= s) = sinh^2 s / sinh^2 radius.
        let d = math::asinh(math::sqrt(u) * sinh_r);
        let cand = match DiscPoint::polar(d, th) {
            Ok(p) => p,
            Err(_) => continue,
        };
        if accepted.iter().all(|p| p.hyp_distance(&cand) >= r) {
            accepted.push(cand);
        }
    }
    SeparatedSet::new(accepted, r)
}

fn lattice_orbit_set(r: f64, radius: f64) -> Result<SeparatedSet> {
    let orbit = crate::theta::octagon_orbit_points(radius, 200_000)?;
    let mut pts: Vec<Complex64> = orbit;
    // Sort by distance from the origin, angle as tie break, for determinism.
    pts.sort_by(|a, b| {
        (a.norm(), a.arg())
            .partial_cmp(&(b.norm(), b.arg()))
            .unwrap_or(core::cmp::Ordering::Equal)
    });
    let mut accepted: Vec<DiscPoint> = Vec::new();
    for z in pts {
        let cand = match DiscPoint::new(z) {
            Ok(p) => p,
            Err(_) => continue,
        };
        if accepted.iter().all(|p| p.hyp_distance(&cand) >= r) {
            accepted.push(cand);
        }
    }
    SeparatedSet::new(accepted, r)
}

/// Grid sup of a nonnegative field over the ball `B(0, r_max)`: equispaced
/// rings of the given radial step. Shared measurement convention for the
/// series and perturbation modules.
pub(crate) fn ring_grid_sup<F: Fn(Complex64) -> f64>(
    f: F,
    r_max: f64,
    step: f64,
    n_theta: usize,
) -> f64 {
    let mut sup = f(Complex64::new(0.0, 0.0));
    let rings = libm::ceil(r_max / step) as usize;
    for k in 1..=rings {
        let d = (k as f64 * step).min(r_max);
        let rho = math::tanh(d);
        for j in 0..n_theta {
            let th = 2.0 * PI * j as f64 / n_theta as f64;
            sup = sup.max(f(Complex64::from_polar(rho, th)));
        }
    }
    sup
}
