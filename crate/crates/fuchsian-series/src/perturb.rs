//! Quantitative continuity of the series map: the L1 distance between
//! prescribed values, neighborhoods of supported data, and a measured
//! modulus against a certified bound.
//!
//! Data sets live in the class of r-separated supports with hyperbolic norm
//! bounded by `C`. A perturbation `p` of `q` is admissible at scale
//! `(K, alpha)` (here `K` is the closed ball of radius `R`) when every
//! support point of either set inside `K` has at most one alpha-close
//! partner in the other, matched values are alpha-close in the L1 distance
//! `d(q1, q2) = |ext(q1) - ext(q2)|_L1`, and unmatched points carry norm
//! below alpha. For such `p` the sup difference of the two series over the
//! unit ball is controlled by one term linear in alpha (matched pairs, via
//! the packing count) plus two tail terms; both are assembled here in closed
//! form and reported separately.

use crate::error::Error;
use crate::fuchsian::{ring_grid_sup, FuchsianSeries, QDData, SeparatedSet, SEPARATION_SLACK};
use crate::hypgeo::{ball_volume, DiscAutomorphism, DiscPoint, PolarQuadratureGrid};
use crate::math::{self, Complex64};
use crate::quaddiff::{tail_mass, QDSample};
use crate::Result;
use alloc::vec::Vec;
use core::f64::consts::PI;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Supported quadratic-differential data with a certified uniform norm bound.
#[derive(Debug, Clone)]
pub struct DQElement {
    data: QDData,
    c_bound: f64,
}

impl DQElement {
    pub fn new(data: QDData, c_bound: f64) -> Result<Self> {
        if !(c_bound > 0.0) {
            return Err(Error::InvalidParameter("norm bound C must be positive"));
        }
        if data.sup_norm() > c_bound * (1.0 + 1e-12) {
            return Err(Error::InvalidParameter("data exceeds the claimed norm bound"));
        }
        Ok(Self { data, c_bound })
    }

    #[inline]
    pub fn data(&self) -> &QDData {
        &self.data
    }

    #[inline]
    pub fn c_bound(&self) -> f64 {
        self.c_bound
    }

    pub fn r(&self) -> f64 {
        self.data.support().r()
    }
}

/// Perturbation scale: `K` is the closed ball of radius `radius`, `alpha`
/// the matching tolerance (must stay below r/2 of the data it is used with).
#[derive(Debug, Clone, Copy)]
pub struct PerturbationSpec {
    radius: f64,
    alpha: f64,
}

impl PerturbationSpec {
    pub fn new(radius: f64, alpha: f64) -> Result<Self> {
        if !(radius > 0.0) {
            return Err(Error::InvalidParameter("neighborhood radius must be positive"));
        }
        if !(alpha > 0.0) {
            return Err(Error::InvalidParameter("alpha must be positive"));
        }
        Ok(Self { radius, alpha })
    }

    #[inline]
    pub fn radius(&self) -> f64 {
        self.radius
    }

    #[inline]
    pub fn alpha(&self) -> f64 {
        self.alpha
    }
}

/// L1 distance between the minimal extensions of two prescribed values,
/// by 2D quadrature after transporting the first base point to the origin
/// (the distance is automorphism invariant). Relative target 1e-6, verified
/// by comparing two grid resolutions.
pub fn qd_distance(s1: &QDSample, s2: &QDSample) -> Result<f64> {
    let fine = PolarQuadratureGrid::with_radial_order(crate::RADIAL_CUTOFF, 512, 16)?;
    let coarse = PolarQuadratureGrid::with_radial_order(crate::RADIAL_CUTOFF, 256, 8)?;
    qd_distance_on(s1, s2, &fine, &coarse)
}

fn qd_distance_on(
    s1: &QDSample,
    s2: &QDSample,
    fine: &PolarQuadratureGrid,
    coarse: &PolarQuadratureGrid,
) -> Result<f64> {
    let back = DiscAutomorphism::to_zero(s1.base()).inverse();
    let t1 = s1.pullback(&back)?;
    let t2 = s2.pullback(&back)?;
    let e1 = t1.minimal_extension();
    let e2 = t2.minimal_extension();
    let integrand =
        |z: Complex64| (e1.eval(z) - e2.eval(z)).norm() * math::sq(1.0 - z.norm_sqr());
    let v_fine = fine.integrate(integrand);
    let v_coarse = coarse.integrate(integrand);
    let scale = PI * (s1.hyp_norm() + s2.hyp_norm());
    let err = math::abs(v_fine - v_coarse);
    if err > 1e-6 * v_fine.max(0.0) + 1e-9 * scale {
        return Err(Error::QuadratureDidNotConverge { estimate: err });
    }
    Ok(v_fine)
}

/// Which data set a violation refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Reference,
    Perturbed,
}

/// First failed clause of the neighborhood conditions.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum NeighborhoodViolation {
    /// More than one alpha-close partner.
    MultipleClose { side: Side, index: usize },
    /// An unmatched point inside K carries norm >= alpha.
    UnmatchedNormTooLarge { side: Side, index: usize, norm: f64 },
    /// A matched pair is not alpha-close in the L1 distance.
    PairTooFar { q_index: usize, p_index: usize, distance: f64 },
}

/// Witness report for the neighborhood membership check.
#[derive(Debug, Clone)]
pub struct NeighborhoodReport {
    pub holds: bool,
    /// For each reference support point inside K: its matched partner index
    /// in the perturbed support, if any.
    pub matching: Vec<(usize, Option<usize>)>,
    pub violation: Option<NeighborhoodViolation>,
}

/// Checks whether `p` lies in the `(K, alpha)` neighborhood of `q`
/// (conditions on both sides), returning a matching witness or the first
/// violated clause.
pub fn in_neighborhood(
    p: &DQElement,
    q: &DQElement,
    spec: &PerturbationSpec,
) -> Result<NeighborhoodReport> {
    let r = q.r();
    if math::abs(p.r() - r) > 1e-12 * r || math::abs(p.c_bound - q.c_bound) > 1e-12 * q.c_bound {
        return Err(Error::ClassMismatch);
    }
    if !(spec.alpha < 0.5 * r) {
        return Err(Error::InvalidParameter("alpha must be below r/2"));
    }
    let fine = PolarQuadratureGrid::with_radial_order(crate::RADIAL_CUTOFF, 512, 16)?;
    let coarse = PolarQuadratureGrid::with_radial_order(crate::RADIAL_CUTOFF, 256, 8)?;

    let mut matching = Vec::new();
    // Reference side: every q point in K needs a unique close partner with a
    // close value, or a small norm if unmatched.
    for (i, t) in q.data.support().points().iter().enumerate() {
        if t.dist_origin() > spec.radius {
            continue;
        }
        let near: Vec<usize> = p
            .data
            .support()
            .points()
            .iter()
            .enumerate()
            .filter(|(_, s)| s.hyp_distance(t) < spec.alpha)
            .map(|(j, _)| j)
            .collect();
        if near.len() > 1 {
            return Ok(NeighborhoodReport {
                holds: false,
                matching,
                violation: Some(NeighborhoodViolation::MultipleClose { side: Side::Reference, index: i }),
            });
        }
        if let Some(&j) = near.first() {
            let d = qd_distance_on(&q.data.sample(i), &p.data.sample(j), &fine, &coarse)?;
            if d >= spec.alpha {
                return Ok(NeighborhoodReport {
                    holds: false,
                    matching,
                    violation: Some(NeighborhoodViolation::PairTooFar {
                        q_index: i,
                        p_index: j,
                        distance: d,
                    }),
                });
            }
            matching.push((i, Some(j)));
        } else {
            let norm = q.data.sample(i).hyp_norm();
            if norm >= spec.alpha {
                return Ok(NeighborhoodReport {
                    holds: false,
                    matching,
                    violation: Some(NeighborhoodViolation::UnmatchedNormTooLarge {
                        side: Side::Reference,
                        index: i,
                        norm,
                    }),
                });
            }
            matching.push((i, None));
        }
    }
    // Perturbed side: symmetric clauses.
    for (j, s) in p.data.support().points().iter().enumerate() {
        if s.dist_origin() > spec.radius {
            continue;
        }
        let near: Vec<usize> = q
            .data
            .support()
            .points()
            .iter()
            .enumerate()
            .filter(|(_, t)| t.hyp_distance(s) < spec.alpha)
            .map(|(i, _)| i)
            .collect();
        if near.len() > 1 {
            return Ok(NeighborhoodReport {
                holds: false,
                matching,
                violation: Some(NeighborhoodViolation::MultipleClose { side: Side::Perturbed, index: j }),
            });
        }
        if let Some(&i) = near.first() {
            let d = qd_distance_on(&q.data.sample(i), &p.data.sample(j), &fine, &coarse)?;
            if d >= spec.alpha {
                return Ok(NeighborhoodReport {
                    holds: false,
                    matching,
                    violation: Some(NeighborhoodViolation::PairTooFar {
                        q_index: i,
                        p_index: j,
                        distance: d,
                    }),
                });
            }
        } else {
            let norm = p.data.sample(j).hyp_norm();
            if norm >= spec.alpha {
                return Ok(NeighborhoodReport {
                    holds: false,
                    matching,
                    violation: Some(NeighborhoodViolation::UnmatchedNormTooLarge {
                        side: Side::Perturbed,
                        index: j,
                        norm,
                    }),
                });
            }
        }
    }
    Ok(NeighborhoodReport { holds: true, matching, violation: None })
}

/// The certified sup bound over the unit ball for an admissible perturbation
/// at scale `(R, alpha)`, per the proof estimates, scaled by the class bound
/// `C`: matched-pair term `2 A(inf) alpha vol(B(0, R + r/2)) / vol(B(0, r/2))`
/// plus tail terms `A(r/2) (B(R - alpha - 1) + B(R - 2 alpha - 1))`.
/// Returns `(total, alpha_term, tail_term)`.
pub fn certified_modulus_bound(
    r: f64,
    c_bound: f64,
    radius: f64,
    alpha: f64,
) -> Result<(f64, f64, f64)> {
    if !(r > 0.0) {
        return Err(Error::InvalidParameter("separation r must be positive"));
    }
    if !(radius > 1.0 + 2.0 * alpha) {
        return Err(Error::InvalidParameter("radius must exceed 1 + 2 alpha"));
    }
    let a_inf = 1.0 / PI;
    let alpha_term =
        c_bound * 2.0 * a_inf * alpha * ball_volume(radius + 0.5 * r) / ball_volume(0.5 * r);
    let tail_term = c_bound
        * crate::fuchsian::cauchy_constant_A(0.5 * r)
        * (tail_mass(radius - alpha - 1.0) + tail_mass(radius - 2.0 * alpha - 1.0));
    Ok((alpha_term + tail_term, alpha_term, tail_term))
}

/// Measured continuity modulus of the series map over random admissible
/// perturbations.
#[derive(Debug, Clone)]
pub struct ModulusReport {
    pub alpha: f64,
    pub radius: f64,
    pub measured_max: f64,
    pub certified_bound: f64,
    pub alpha_term: f64,
    pub tail_term: f64,
    pub trials: usize,
    pub seed: u64,
    /// Measured sup difference per trial, in trial order.
    pub per_trial: Vec<f64>,
}

/// Generates `trials` random perturbations inside the `(B(0,R), alpha)`
/// neighborhood of `q` by construction (position jitter within hyperbolic
/// radius `alpha/(4 pi max(1, C))` capped by the support's separation
/// margin, value jitter of L1 size below `alpha/4`, and sub-alpha-norm
/// points added near the boundary sphere of K), measures the sup of the
/// hyperbolic norm of `sigma(p) - sigma(q)` over the unit ball for each, and
/// reports the max against the certified closed-form bound.
pub fn perturbation_modulus(
    q: &DQElement,
    spec: &PerturbationSpec,
    trials: usize,
    seed: u64,
) -> Result<ModulusReport> {
    if trials == 0 {
        return Err(Error::InvalidParameter("at least one trial is required"));
    }
    let r = q.r();
    if !(spec.alpha < 0.5 * r) {
        return Err(Error::InvalidParameter("alpha must be below r/2"));
    }
    let (certified, alpha_term, tail_term) =
        certified_modulus_bound(r, q.c_bound, spec.radius, spec.alpha)?;

    let reference = FuchsianSeries::new(q.data.clone());
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut per_trial = Vec::with_capacity(trials);
    let mut measured_max = 0.0f64;
    for _ in 0..trials {
        let p = perturbed_element(q, spec, &mut rng)?;
        let series = FuchsianSeries::new(p.data.clone());
        let sup = ring_grid_sup(
            |z| (series.evaluate(z) - reference.evaluate(z)).norm() * math::sq(1.0 - z.norm_sqr()),
            1.0,
            0.025,
            128,
        );
        measured_max = measured_max.max(sup);
        per_trial.push(sup);
    }
    Ok(ModulusReport {
        alpha: spec.alpha,
        radius: spec.radius,
        measured_max,
        certified_bound: certified,
        alpha_term,
        tail_term,
        trials,
        seed,
        per_trial,
    })
}

/// One random admissible perturbation; stays inside the neighborhood by
/// construction so the certified bound applies.
fn perturbed_element(
    q: &DQElement,
    spec: &PerturbationSpec,
    rng: &mut ChaCha8Rng,
) -> Result<DQElement> {
    let r = q.r();
    let alpha = spec.alpha;
    let c_bound = q.c_bound;
    let pts = q.data.support().points();

    // Position jitter: base radius alpha/(4 pi max(1, C)) keeps the L1 shift
    // of a transported value below ~0.7 alpha; additionally capped by half
    // the separation margin so the jittered set stays r-separated.
    let margin = q
        .data
        .support()
        .min_pairwise_distance()
        .map_or(f64::INFINITY, |m| (m - r).max(0.0));
    let pos_radius = (alpha / (4.0 * PI * c_bound.max(1.0))).min(0.45 * margin);
    // Value jitter: hyperbolic-norm radius alpha/(4 pi^2), i.e. L1 radius
    // alpha/(4 pi); together with the position shift this stays below alpha.
    let coeff_radius = alpha / (4.0 * PI * PI);

    let mut new_points: Vec<DiscPoint> = Vec::with_capacity(pts.len() + 2);
    let mut new_coeffs: Vec<Complex64> = Vec::with_capacity(pts.len() + 2);
    for (t, c) in pts.iter().zip(q.data.coeffs()) {
        let ang = rng.random_range(0.0..(2.0 * PI));
        let u: f64 = rng.random_range(0.0..1.0);
        let d = pos_radius * math::sqrt(u);
        let back = DiscAutomorphism::to_zero(t).inverse();
        let moved_raw = back.apply(Complex64::from_polar(math::tanh(d), ang));
        let moved = DiscPoint::new(moved_raw).unwrap_or(*t);
        // Transport the value with its hyperbolic norm and chart phase, then
        // jitter it within the L1 budget, clamped to the class bound.
        let s_old = math::sq(t.one_minus_abs2());
        let s_new = math::sq(moved.one_minus_abs2());
        let mut coeff = c * (s_old / s_new);
        let jang = rng.random_range(0.0..(2.0 * PI));
        let ju: f64 = rng.random_range(0.0..1.0);
        coeff += Complex64::from_polar(coeff_radius * math::sqrt(ju), jang) / s_new;
        let hyp = coeff.norm() * s_new;
        if hyp > c_bound {
            coeff *= c_bound / hyp;
        }
        new_points.push(moved);
        new_coeffs.push(coeff);
    }

    // A few sub-alpha-norm points near the boundary sphere of K.
    let extra = rng.random_range(0..=2usize);
    for _ in 0..extra {
        let mut placed = false;
        for _ in 0..8 {
            let d = rng.random_range((spec.radius - 0.5)..(spec.radius + 0.5));
            let ang = rng.random_range(0.0..(2.0 * PI));
            let cand = match DiscPoint::polar(d, ang) {
                Ok(p) => p,
                Err(_) => continue,
            };
            if new_points
                .iter()
                .all(|p| p.hyp_distance(&cand) >= r + 2.0 * SEPARATION_SLACK)
            {
                let norm = (0.5 * alpha).min(c_bound);
                let s = math::sq(cand.one_minus_abs2());
                new_points.push(cand);
                new_coeffs.push(Complex64::from_polar(
                    norm / s,
                    rng.random_range(0.0..(2.0 * PI)),
                ));
                placed = true;
                break;
            }
        }
        if !placed {
            break;
        }
    }

    let support = SeparatedSet::new(new_points, r)?;
    DQElement::new(QDData::new(support, new_coeffs)?, c_bound)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fuchsian::{make_separated_set, SetKind};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn sample(re: f64, im: f64, cr: f64, ci: f64) -> QDSample {
        QDSample::new(DiscPoint::from_coords(re, im).unwrap(), c(cr, ci))
    }

    fn element(r: f64, radius: f64, seed: u64, n: usize, c_bound: f64) -> DQElement {
        let set = make_separated_set(SetKind::GreedyRandom, r, radius, seed)
            .unwrap()
            .truncated(n);
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5a5a);
        let coeffs = set
            .points()
            .iter()
            .map(|p| {
                Complex64::from_polar(
                    rng.random_range(0.2..0.9) * c_bound / math::sq(p.one_minus_abs2()),
                    rng.random_range(0.0..6.28),
                )
            })
            .collect();
        DQElement::new(QDData::new(set, coeffs).unwrap(), c_bound).unwrap()
    }

    #[test]
    fn qd_distance_is_zero_on_equal_samples() {
        let s = sample(0.2, 0.1, 1.0, -0.5);
        let d = qd_distance(&s, &s).unwrap();
        assert!(d.abs() < 1e-12, "got {d}");
    }

    #[test]
    fn qd_distance_same_base_closed_form() {
        // For samples at the same base the difference is itself a minimal
        // extension, so the distance is pi (1-|t|^2)^2 |c1 - c2|.
        let s1 = sample(0.4, 0.1, 1.0, 0.2);
        let s2 = sample(0.4, 0.1, 0.3, -0.6);
        let d = qd_distance(&s1, &s2).unwrap();
        let m = 1.0 - (0.4f64 * 0.4 + 0.1 * 0.1);
        let expected = PI * m * m * (c(1.0, 0.2) - c(0.3, -0.6)).norm();
        assert!(
            ((d - expected) / expected).abs() < 1e-6,
            "quad {d} vs closed {expected}"
        );
    }

    #[test]
    fn qd_distance_is_symmetric_and_bounded_by_mass() {
        let s1 = sample(0.0, 0.0, 1.0, 0.0);
        let s2 = sample(0.5, 0.0, 1.0, 0.0);
        let d12 = qd_distance(&s1, &s2).unwrap();
        let d21 = qd_distance(&s2, &s1).unwrap();
        assert!(d12 > 0.0);
        assert!(d12 <= PI * (s1.hyp_norm() + s2.hyp_norm()) * (1.0 + 1e-9));
        assert!(((d12 - d21) / d12).abs() < 1e-6);
    }

    #[test]
    fn qd_distance_triangle_inequality_on_random_triples() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for _ in 0..5 {
            let mk = |rng: &mut ChaCha8Rng| {
                sample(
                    rng.random_range(-0.5..0.5),
                    rng.random_range(-0.5..0.5),
                    rng.random_range(-1.0..1.0),
                    rng.random_range(-1.0..1.0),
                )
            };
            let a = mk(&mut rng);
            let b = mk(&mut rng);
            let cc = mk(&mut rng);
            let dab = qd_distance(&a, &b).unwrap();
            let dbc = qd_distance(&b, &cc).unwrap();
            let dac = qd_distance(&a, &cc).unwrap();
            assert!(dac <= dab + dbc + 1e-6 * (dab + dbc + 1.0));
        }
    }

    #[test]
    fn neighborhood_identity_matching() {
        let q = element(4.0, 6.0, 1, 12, 1.0);
        let spec = PerturbationSpec::new(6.0, 0.5).unwrap();
        let report = in_neighborhood(&q, &q, &spec).unwrap();
        assert!(report.holds);
        for &(i, j) in &report.matching {
            assert_eq!(Some(i), j);
        }
    }

    #[test]
    fn neighborhood_tolerates_small_value_change() {
        let q = element(4.0, 6.0, 2, 10, 1.0);
        let spec = PerturbationSpec::new(6.0, 0.05).unwrap();
        let mut coeffs = q.data().coeffs().to_vec();
        // Change one value by much less than alpha in L1 distance.
        let s0 = math::sq(q.data().support().points()[0].one_minus_abs2());
        coeffs[0] += c(0.002 / (PI * s0), 0.0);
        let p = DQElement::new(
            QDData::new(q.data().support().clone(), coeffs).unwrap(),
            q.c_bound(),
        )
        .unwrap();
        let report = in_neighborhood(&p, &q, &spec).unwrap();
        assert!(report.holds, "violation: {:?}", report.violation);
    }

    #[test]
    fn neighborhood_rejects_large_unmatched_point() {
        let q = element(4.0, 6.0, 3, 8, 1.0);
        let spec = PerturbationSpec::new(6.0, 0.05).unwrap();
        // Add an interior point, far from the support, with norm 2 alpha.
        let mut points = q.data().support().points().to_vec();
        let mut coeffs = q.data().coeffs().to_vec();
        let mut added = false;
        'outer: for k in 0..400 {
            let d = 0.3 + 0.011 * k as f64;
            if d > 4.5 {
                break;
            }
            for a in 0..16 {
                let cand = DiscPoint::polar(d, a as f64 * PI / 8.0).unwrap();
                if points.iter().all(|p| p.hyp_distance(&cand) >= 4.0 + 1e-6) {
                    let s = math::sq(cand.one_minus_abs2());
                    points.push(cand);
                    coeffs.push(c(2.0 * spec.alpha() / s, 0.0));
                    added = true;
                    break 'outer;
                }
            }
        }
        assert!(added, "could not place the extra point");
        let p = DQElement::new(
            QDData::new(SeparatedSet::new(points, 4.0).unwrap(), coeffs).unwrap(),
            q.c_bound(),
        )
        .unwrap();
        let report = in_neighborhood(&p, &q, &spec).unwrap();
        assert!(!report.holds);
        assert!(matches!(
            report.violation,
            Some(NeighborhoodViolation::UnmatchedNormTooLarge { side: Side::Perturbed, .. })
        ));
    }

    #[test]
    fn class_mismatch_is_rejected() {
        let q = element(4.0, 6.0, 4, 8, 1.0);
        let p = element(3.0, 6.0, 4, 8, 1.0);
        let spec = PerturbationSpec::new(6.0, 0.05).unwrap();
        assert!(matches!(in_neighborhood(&p, &q, &spec), Err(Error::ClassMismatch)));
    }

    #[test]
    fn generated_perturbations_stay_in_the_neighborhood() {
        let q = element(4.0, 8.0, 5, 15, 1.0);
        for &alpha in &[1e-2, 1e-3] {
            let spec = PerturbationSpec::new(8.0, alpha).unwrap();
            let mut rng = ChaCha8Rng::seed_from_u64(99);
            let p = perturbed_element(&q, &spec, &mut rng).unwrap();
            let report = in_neighborhood(&p, &q, &spec).unwrap();
            assert!(report.holds, "alpha {alpha}: {:?}", report.violation);
        }
    }

    #[test]
    fn jitter_budget_keeps_pairs_well_inside_alpha() {
        let q = element(4.0, 6.0, 6, 10, 1.0);
        let alpha = 1e-2;
        let spec = PerturbationSpec::new(6.0, alpha).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let p = perturbed_element(&q, &spec, &mut rng).unwrap();
        for i in 0..q.data().len() {
            let d = qd_distance(&q.data().sample(i), &p.data().sample(i)).unwrap();
            assert!(d < 0.9 * alpha, "pair {i}: distance {d} vs alpha {alpha}");
        }
    }

    #[test]
    fn modulus_is_dominated_by_the_certified_bound() {
        let q = element(4.0, 7.0, 8, 20, 1.0);
        let spec = PerturbationSpec::new(6.0, 1e-3).unwrap();
        let report = perturbation_modulus(&q, &spec, 10, 42).unwrap();
        assert!(report.per_trial.iter().all(|&m| m <= report.certified_bound));
        assert!(report.measured_max <= report.certified_bound);
        assert!(report.alpha_term > 0.0 && report.tail_term > 0.0);
        assert!(
            (report.certified_bound - report.alpha_term - report.tail_term).abs()
                < 1e-12 * report.certified_bound
        );
    }

    #[test]
    fn modulus_vanishes_for_vanishing_alpha() {
        let q = element(4.0, 7.0, 9, 12, 1.0);
        let spec = PerturbationSpec::new(6.0, 1e-300).unwrap();
        let report = perturbation_modulus(&q, &spec, 3, 5).unwrap();
        assert_eq!(report.measured_max, 0.0);
    }

    #[test]
    fn modulus_grows_with_alpha_on_matched_seeds() {
        let q = element(4.0, 7.0, 10, 15, 1.0);
        let small = perturbation_modulus(&q, &PerturbationSpec::new(6.0, 1e-4).unwrap(), 5, 77)
            .unwrap();
        let large = perturbation_modulus(&q, &PerturbationSpec::new(6.0, 1e-2).unwrap(), 5, 77)
            .unwrap();
        assert!(large.measured_max >= small.measured_max);
    }

    #[test]
    fn alpha_term_vanishes_in_the_limit() {
        let (_, a1, t1) = certified_modulus_bound(4.0, 1.0, 10.0, 1e-6).unwrap();
        let (_, a2, t2) = certified_modulus_bound(4.0, 1.0, 10.0, 1e-9).unwrap();
        assert!(a2 < a1 * 1e-2);
        assert!((t1 - t2).abs() < 1e-6 * t1);
    }
}
