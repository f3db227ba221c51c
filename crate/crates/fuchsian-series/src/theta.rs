//! Classical Poincare theta series over Fuchsian group orbits.
//!
//! For a discrete group of disc automorphisms and a bounded holomorphic `f`,
//! the weight-4 series `sum_gamma f(gamma z) gamma'(z)^2` defines (modulo
//! convergence) a group-invariant quadratic differential. This module ships
//! two concrete groups — the genus-2 surface group of the regular hyperbolic
//! octagon, and a free Schottky group on two orthogonal translations — plus a
//! breadth-first word enumerator with fingerprint deduplication, truncated
//! evaluation by word length, automorphy-defect measurement, and heuristic
//! tail estimates adapted from the minimal-extension packing bound.

use crate::error::Error;
use crate::fuchsian::cauchy_constant_A;
use crate::hypgeo::{hyp_distance_raw, DiscAutomorphism, DiscPoint};
use crate::math::{self, Complex64};
use crate::quaddiff::tail_mass;
use crate::Result;
use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;
use core::f64::consts::PI;

/// Default cap on the number of distinct enumerated elements.
pub const DEFAULT_ELEMENT_CAP: usize = 12_000_000;

/// Maximum polynomial degree accepted for theta integrands.
pub const MAX_POLY_DEGREE: usize = 8;

/// A finitely generated group of disc automorphisms.
#[derive(Debug, Clone)]
pub struct FuchsianGroup {
    generators: Vec<DiscAutomorphism>,
    label: String,
    element_cap: usize,
}

impl FuchsianGroup {
    pub fn new(generators: Vec<DiscAutomorphism>) -> Self {
        Self {
            generators,
            label: String::from("custom"),
            element_cap: DEFAULT_ELEMENT_CAP,
        }
    }

    /// The genus-2 surface group of the regular hyperbolic octagon with
    /// vertex angle pi/4, generated by the four opposite-side-pairing
    /// translations. Side midpoints sit at distance `acosh(1+sqrt 2)/2` from
    /// the center, so each pairing translates by `acosh(1+sqrt 2)` along a
    /// direction `k pi/4`.
    pub fn genus2_octagon() -> Self {
        let length = math::acosh(1.0 + math::sqrt(2.0));
        let generators = (0..4)
            .map(|k| {
                DiscAutomorphism::translation(k as f64 * PI / 4.0, length)
                    .expect("octagon translation length is representable")
            })
            .collect();
        Self {
            generators,
            label: String::from("octagon-genus2"),
            element_cap: DEFAULT_ELEMENT_CAP,
        }
    }

    /// Free group on two hyperbolic translations along orthogonal axes.
    /// Translation length must exceed `asinh(1)`, which keeps the isometric
    /// circles of the four letters disjoint (classical Schottky position, so
    /// the group is free and discrete).
    pub fn schottky(translation_length: f64) -> Result<Self> {
        if !(translation_length > math::asinh(1.0)) {
            return Err(Error::InvalidParameter(
                "schottky translation length must exceed asinh(1)",
            ));
        }
        let generators = alloc::vec![
            DiscAutomorphism::translation(0.0, translation_length)?,
            DiscAutomorphism::translation(PI / 2.0, translation_length)?,
        ];
        Ok(Self {
            generators,
            label: String::from("schottky"),
            element_cap: DEFAULT_ELEMENT_CAP,
        })
    }

    pub fn with_element_cap(mut self, cap: usize) -> Self {
        self.element_cap = cap;
        self
    }

    #[inline]
    pub fn generators(&self) -> &[DiscAutomorphism] {
        &self.generators
    }

    #[inline]
    pub fn label(&self) -> &str {
        &self.label
    }

    #[inline]
    pub fn element_cap(&self) -> usize {
        self.element_cap
    }
}

/// A polynomial integrand `f(z) = sum a_k z^k`, degree at most 8 (the
/// bounded-holomorphic case; poles are out of scope).
#[derive(Debug, Clone)]
pub struct DiscPolynomial {
    coeffs: Vec<Complex64>,
}

impl DiscPolynomial {
    pub fn new(coeffs: Vec<Complex64>) -> Result<Self> {
        if coeffs.len() > MAX_POLY_DEGREE + 1 {
            return Err(Error::PolynomialDegreeTooHigh {
                degree: coeffs.len() - 1,
                max: MAX_POLY_DEGREE,
            });
        }
        Ok(Self { coeffs })
    }

    pub fn constant(c: Complex64) -> Self {
        Self { coeffs: alloc::vec![c] }
    }

    pub fn one() -> Self {
        Self::constant(Complex64::new(1.0, 0.0))
    }

    #[inline]
    pub fn eval(&self, z: Complex64) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for &c in self.coeffs.iter().rev() {
            acc = acc * z + c;
        }
        acc
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    /// `sum |a_k|`, an upper bound for |f| on the closed disc.
    pub fn coeff_bound(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).sum()
    }
}

/// SU(1,1)-style matrix representative `z -> (a z + b) / (conj(b) z + conj(a))`.
/// The representation is scale-invariant, so products are never renormalized;
/// the determinant `|a|^2 - |b|^2` is carried explicitly where the derivative
/// needs it.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Moeb {
    a: Complex64,
    b: Complex64,
}

impl Moeb {
    pub(crate) fn identity() -> Self {
        Self { a: Complex64::new(1.0, 0.0), b: Complex64::new(0.0, 0.0) }
    }

    pub(crate) fn from_auto(f: &DiscAutomorphism) -> Self {
        let (a, b) = f.matrix();
        Self { a, b }
    }

    pub(crate) fn to_auto(&self) -> Result<DiscAutomorphism> {
        DiscAutomorphism::from_matrix(self.a, self.b)
    }

    /// `self` after `rhs`: `(self . rhs)(z) = self(rhs(z))`.
    #[inline]
    pub(crate) fn compose(&self, rhs: &Moeb) -> Moeb {
        Moeb {
            a: self.a * rhs.a + self.b * rhs.b.conj(),
            b: self.a * rhs.b + self.b * rhs.a.conj(),
        }
    }

    #[inline]
    pub(crate) fn det(&self) -> f64 {
        self.a.norm_sqr() - self.b.norm_sqr()
    }

    #[inline]
    pub(crate) fn apply(&self, z: Complex64) -> Complex64 {
        (self.a * z + self.b) / (self.b.conj() * z + self.a.conj())
    }

    #[inline]
    pub(crate) fn derivative(&self, z: Complex64) -> Complex64 {
        let den = self.b.conj() * z + self.a.conj();
        Complex64::new(self.det(), 0.0) / (den * den)
    }

    #[inline]
    pub(crate) fn orbit_of_zero(&self) -> Complex64 {
        self.b / self.a.conj()
    }
}

// Fingerprint deduplication. Elements are identified by the image of a fixed
// generic probe point, binned by (distance band, angular cell) where the
// angular cell width corresponds to a fixed hyperbolic arc. Distinct elements
// of a discrete group with displacement above MATCH_TOL at the probe points
// can never collide; rounding noise stays far below the match tolerance for
// word lengths at desk scale.
const BAND_WIDTH: f64 = 0.1;
const ARC_STEP: f64 = 0.05;
const MATCH_TOL: f64 = 0.2;

struct ElementSet {
    map: BTreeMap<u64, (f64, f64)>,
    probes: [Complex64; 3],
}

enum InsertOutcome {
    New,
    Duplicate,
}

impl ElementSet {
    fn new() -> Self {
        Self {
            map: BTreeMap::new(),
            // Fixed generic probe points (asymmetric, away from the origin).
            probes: [
                Complex64::new(0.137, 0.219),
                Complex64::new(-0.341, 0.052),
                Complex64::new(0.063, -0.472),
            ],
        }
    }

    fn theta_step(band: i64) -> f64 {
        let d_lo = band as f64 * BAND_WIDTH;
        (2.0 * ARC_STEP / math::sinh(2.0 * d_lo).max(0.5)).min(PI / 8.0)
    }

    fn n_cells(step: f64) -> i64 {
        (libm::floor(2.0 * PI / step) as i64).max(1)
    }

    fn pack(band: i64, idx: i64) -> u64 {
        ((band as u64) << 48) | ((idx as u64) & 0x0000_FFFF_FFFF_FFFF)
    }

    fn insert(&mut self, m: &Moeb) -> Result<InsertOutcome> {
        let z = m.apply(self.probes[0]);
        let d = math::atanh(z.norm().min(1.0 - 1e-16));
        let mut theta = z.arg();
        if theta < 0.0 {
            theta += 2.0 * PI;
        }
        let band = libm::floor(d / BAND_WIDTH) as i64;
        for pb in (band - 1).max(0)..=(band + 1) {
            let step = Self::theta_step(pb);
            let n = Self::n_cells(step);
            let idx = libm::floor(theta / step) as i64;
            for di in -1..=1 {
                let cell = Self::pack(pb, (idx + di).rem_euclid(n));
                if let Some(&(re, im)) = self.map.get(&cell) {
                    if hyp_distance_raw(z, Complex64::new(re, im)) <= MATCH_TOL {
                        return Ok(InsertOutcome::Duplicate);
                    }
                }
            }
        }
        let step = Self::theta_step(band);
        let n = Self::n_cells(step);
        let cell = Self::pack(band, (libm::floor(theta / step) as i64).rem_euclid(n));
        if self.map.insert(cell, (z.re, z.im)).is_some() {
            return Err(Error::DedupCollision);
        }
        Ok(InsertOutcome::New)
    }
}

/// Breadth-first walk over all distinct group elements of word length at
/// most `max_len`, in deterministic order. `expand_radius`, when set, stops
/// expanding elements whose orbit point of the origin lies beyond it.
/// Returns the count of distinct elements per word length.
fn bfs_walk(
    generators: &[DiscAutomorphism],
    max_len: usize,
    cap: usize,
    expand_radius: Option<f64>,
    visit: &mut dyn FnMut(usize, &Moeb),
) -> Result<Vec<usize>> {
    // Letters: generator 2j, its inverse 2j+1; inverse letter is l ^ 1.
    let mut letters: Vec<Moeb> = Vec::with_capacity(2 * generators.len());
    for g in generators {
        letters.push(Moeb::from_auto(g));
        letters.push(Moeb::from_auto(&g.inverse()));
    }

    let mut set = ElementSet::new();
    let id = Moeb::identity();
    set.insert(&id)?;
    visit(0, &id);
    let mut counts = alloc::vec![1usize];
    let mut total = 1usize;

    let mut frontier: Vec<(Moeb, u8)> = alloc::vec![(id, u8::MAX)];
    for level in 1..=max_len {
        if letters.is_empty() {
            break;
        }
        let mut next: Vec<(Moeb, u8)> = Vec::new();
        let mut level_count = 0usize;
        for &(ref m, last) in &frontier {
            if let Some(radius) = expand_radius {
                if math::atanh(m.orbit_of_zero().norm().min(1.0 - 1e-16)) > radius {
                    continue;
                }
            }
            for (l, letter) in letters.iter().enumerate() {
                // Skipping the inverse of the last letter only ever re-derives
                // the parent element.
                if last != u8::MAX && (l as u8) == (last ^ 1) {
                    continue;
                }
                let cand = m.compose(letter);
                match set.insert(&cand)? {
                    InsertOutcome::Duplicate => {}
                    InsertOutcome::New => {
                        total += 1;
                        if total > cap {
                            return Err(Error::EnumerationCapExceeded { count: total, cap });
                        }
                        level_count += 1;
                        visit(level, &cand);
                        if level < max_len {
                            next.push((cand, l as u8));
                        }
                    }
                }
            }
        }
        counts.push(level_count);
        if level < max_len {
            frontier = next;
        }
        if level_count == 0 {
            break;
        }
    }
    Ok(counts)
}

/// All distinct group elements of word length at most `max_length`,
/// materialized as automorphisms with a desk-scale discreteness witness.
#[derive(Debug, Clone)]
pub struct OrbitEnumeration {
    elements: Vec<DiscAutomorphism>,
    word_lengths: Vec<usize>,
    counts: Vec<usize>,
    orbit_separation: f64,
}

impl OrbitEnumeration {
    pub fn elements(&self) -> &[DiscAutomorphism] {
        &self.elements
    }

    pub fn word_lengths(&self) -> &[usize] {
        &self.word_lengths
    }

    /// Distinct elements per word length, index 0 = identity.
    pub fn counts(&self) -> &[usize] {
        &self.counts
    }

    pub fn total(&self) -> usize {
        self.elements.len()
    }

    /// Minimum displacement `d(0, gamma 0)` over enumerated non-identity
    /// elements of word length <= 4: the orbit of the origin is separated by
    /// at least this much at desk scale.
    pub fn orbit_separation(&self) -> f64 {
        self.orbit_separation
    }

    /// O(n^2) certificate that no two elements agree on the three probe
    /// points to within `tol` (hyperbolic). Intended for small enumerations.
    pub fn dedup_certificate(&self, tol: f64) -> bool {
        let probes = [
            Complex64::new(0.137, 0.219),
            Complex64::new(-0.341, 0.052),
            Complex64::new(0.063, -0.472),
        ];
        for i in 0..self.elements.len() {
            for j in (i + 1)..self.elements.len() {
                let agree = probes.iter().all(|&p| {
                    hyp_distance_raw(self.elements[i].apply(p), self.elements[j].apply(p)) <= tol
                });
                if agree {
                    return false;
                }
            }
        }
        true
    }
}

/// Enumerates the ball of word length `max_length`, deduplicated, honoring
/// the group's element cap.
pub fn enumerate_group(group: &FuchsianGroup, max_length: usize) -> Result<OrbitEnumeration> {
    let mut elements = Vec::new();
    let mut word_lengths = Vec::new();
    let mut err: Option<Error> = None;
    let counts = bfs_walk(
        group.generators(),
        max_length,
        group.element_cap(),
        None,
        &mut |level, m| {
            if err.is_none() {
                match m.to_auto() {
                    Ok(a) => {
                        elements.push(a);
                        word_lengths.push(level);
                    }
                    Err(e) => err = Some(e),
                }
            }
        },
    )?;
    if let Some(e) = err {
        return Err(e);
    }
    let mut sep = f64::INFINITY;
    for (a, &len) in elements.iter().zip(&word_lengths) {
        if len == 0 || len > 4 {
            continue;
        }
        let moved = a.apply(Complex64::new(0.0, 0.0));
        sep = sep.min(math::atanh(moved.norm().min(1.0 - 1e-16)));
    }
    Ok(OrbitEnumeration { elements, word_lengths, counts, orbit_separation: sep })
}

/// Orbit points of the origin under the octagon group inside `B(0, radius)`,
/// deduplicated and deterministic. Radius is clamped to 7 to keep the
/// enumeration at desk scale.
pub(crate) fn octagon_orbit_points(radius: f64, cap: usize) -> Result<Vec<Complex64>> {
    let group = FuchsianGroup::genus2_octagon();
    let r_eff = radius.min(7.0);
    let step = math::acosh(1.0 + math::sqrt(2.0));
    let max_len = (libm::ceil(r_eff / step) as usize) + 3;
    let mut points = Vec::new();
    bfs_walk(
        group.generators(),
        max_len,
        cap,
        Some(r_eff + step + 0.1),
        &mut |_, m| {
            let z = m.orbit_of_zero();
            if math::atanh(z.norm().min(1.0 - 1e-16)) <= r_eff {
                points.push(z);
            }
        },
    )?;
    Ok(points)
}

/// Per-level theta data for a batch of evaluation points, gathered in a
/// single breadth-first pass up to `max_length`.
#[derive(Debug, Clone)]
pub struct ThetaBatch {
    level_counts: Vec<usize>,
    /// [point][level] partial sums of `f(gamma z) gamma'(z)^2`.
    partials: Vec<Vec<Complex64>>,
    /// [point][level] sums of `|gamma'(z)|^2`.
    deriv_sums: Vec<Vec<f64>>,
    /// [point][level] min over the level of `d(z, gamma z)`.
    min_dist: Vec<Vec<f64>>,
    coeff_bound: f64,
    orbit_separation: f64,
}

impl ThetaBatch {
    /// Truncated series value `theta_L(z)` for the batch point `idx`.
    pub fn theta(&self, idx: usize, length: usize) -> Complex64 {
        self.partials[idx][..=length.min(self.level_counts.len() - 1)]
            .iter()
            .sum()
    }

    /// Per-length sum of `|gamma'(z)|^2` at level `length`.
    pub fn deriv_sum(&self, idx: usize, length: usize) -> f64 {
        self.deriv_sums[idx].get(length).copied().unwrap_or(0.0)
    }

    /// Heuristic tail estimate for `theta_L`: the packing bound
    /// `A(r0/2) * tail_mass(R_L) * sum|a_k|` where `R_L` is the minimum
    /// distance from `z` to its orbit points of word length exactly `L`.
    /// Labeled heuristic: deeper shells are presumed at least as far.
    pub fn tail_estimate(&self, idx: usize, length: usize) -> f64 {
        let level = length.min(self.level_counts.len() - 1);
        let r_l = self.min_dist[idx][level];
        if !r_l.is_finite() {
            return 0.0;
        }
        cauchy_constant_A(0.5 * self.orbit_separation) * tail_mass(r_l) * self.coeff_bound
    }

    pub fn level_counts(&self) -> &[usize] {
        &self.level_counts
    }

    /// Minimum displacement witness over short words (length <= 4).
    pub fn orbit_separation(&self) -> f64 {
        self.orbit_separation
    }
}

/// Accumulates theta data for all evaluation points in one deterministic
/// breadth-first pass of word length `max_length`.
pub fn theta_batch(
    group: &FuchsianGroup,
    f: &DiscPolynomial,
    points: &[DiscPoint],
    max_length: usize,
) -> Result<ThetaBatch> {
    let zs: Vec<Complex64> = points.iter().map(|p| p.z()).collect();
    let n = zs.len();
    let levels = max_length + 1;
    let mut partials = alloc::vec![alloc::vec![Complex64::new(0.0, 0.0); levels]; n];
    let mut deriv_sums = alloc::vec![alloc::vec![0.0f64; levels]; n];
    let mut min_dist = alloc::vec![alloc::vec![f64::INFINITY; levels]; n];
    let mut sep = f64::INFINITY;

    let counts = bfs_walk(
        group.generators(),
        max_length,
        group.element_cap(),
        None,
        &mut |level, m| {
            if level >= 1 && level <= 4 {
                let moved = m.orbit_of_zero();
                sep = sep.min(math::atanh(moved.norm().min(1.0 - 1e-16)));
            }
            for (i, &z) in zs.iter().enumerate() {
                let gz = m.apply(z);
                let der = m.derivative(z);
                partials[i][level] += f.eval(gz) * der * der;
                deriv_sums[i][level] += der.norm_sqr();
                let d = hyp_distance_raw(z, gz);
                if d < min_dist[i][level] {
                    min_dist[i][level] = d;
                }
            }
        },
    )?;

    Ok(ThetaBatch {
        level_counts: counts,
        partials,
        deriv_sums,
        min_dist,
        coeff_bound: f.coeff_bound(),
        orbit_separation: sep,
    })
}

/// A truncated theta value with its heuristic tail estimate.
#[derive(Debug, Clone, Copy)]
pub struct ThetaEval {
    pub value: Complex64,
    /// Heuristic certificate for the omitted terms (packing bound applied to
    /// the orbit of the evaluation point); not a rigorous error bound.
    pub tail_estimate: f64,
}

/// Truncated Poincare series `sum_{|gamma| <= L} f(gamma z) gamma'(z)^2`.
pub fn theta_series(
    group: &FuchsianGroup,
    f: &DiscPolynomial,
    z: &DiscPoint,
    max_length: usize,
) -> Result<ThetaEval> {
    let batch = theta_batch(group, f, core::slice::from_ref(z), max_length)?;
    Ok(ThetaEval {
        value: batch.theta(0, max_length),
        tail_estimate: batch.tail_estimate(0, max_length),
    })
}

/// Automorphy defect of the truncated series under a group element.
#[derive(Debug, Clone, Copy)]
pub struct AutomorphyReport {
    /// `|theta_L(gamma z) gamma'(z)^2 - theta_L(z)|`.
    pub defect: f64,
    pub theta_at_z: Complex64,
    pub theta_at_gz: Complex64,
    pub tail_at_z: f64,
    pub tail_at_gz: f64,
}

/// Measures how far the truncation is from exact weight-4 invariance under
/// `gamma`; the two truncated sums differ by boundary words only, so the
/// defect must sink with the word length.
pub fn automorphy_check(
    group: &FuchsianGroup,
    f: &DiscPolynomial,
    z: &DiscPoint,
    gamma: &DiscAutomorphism,
    max_length: usize,
) -> Result<AutomorphyReport> {
    let gz = gamma.apply_point(z)?;
    let batch = theta_batch(group, f, &[*z, gz], max_length)?;
    let theta_z = batch.theta(0, max_length);
    let theta_gz = batch.theta(1, max_length);
    let der = gamma.derivative(z.z());
    let defect = (theta_gz * der * der - theta_z).norm();
    Ok(AutomorphyReport {
        defect,
        theta_at_z: theta_z,
        theta_at_gz: theta_gz,
        tail_at_z: batch.tail_estimate(0, max_length),
        tail_at_gz: batch.tail_estimate(1, max_length),
    })
}
