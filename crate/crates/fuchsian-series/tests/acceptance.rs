//! Acceptance suite: one pass/fail line per criterion.
//!
//! Run with `cargo test -p fuchsian-series --test acceptance -- --nocapture`
//! to see the lines; each criterion also asserts, so a plain test run fails
//! loudly on any violation.

use fuchsian_series::extend::{extend_direct, extend_neumann, extension_sup_certificate};
use fuchsian_series::fuchsian::{
    constant_table, make_separated_set, separation_threshold, FuchsianSeries, QDData,
    SeparatedSet, SetKind,
};
use fuchsian_series::hypgeo::{integrate_radial, DiscAutomorphism, DiscPoint, PolarQuadratureGrid};
use fuchsian_series::perturb::{perturbation_modulus, DQElement, PerturbationSpec};
use fuchsian_series::quaddiff::{
    extension_hyp_norm_profile, l1_norm_quadrature, tail_mass, QDSample,
};
use fuchsian_series::theta::{theta_batch, DiscPolynomial, FuchsianGroup};
use fuchsian_series::{Error, RADIAL_CUTOFF};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::f64::consts::PI;
use std::time::Instant;

fn report(n: usize, name: &str, ok: bool, detail: &str) {
    println!(
        "acceptance criterion {n} ({name}): {} [{detail}]",
        if ok { "PASS" } else { "FAIL" }
    );
    assert!(ok, "acceptance criterion {n} ({name}) failed: {detail}");
}

fn c64(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn sq(x: f64) -> f64 {
    x * x
}

fn random_sample(rng: &mut ChaCha8Rng) -> QDSample {
    let base = DiscPoint::from_coords(
        rng.random_range(-0.85..0.85),
        rng.random_range(-0.45..0.45),
    )
    .unwrap();
    let coeff = Complex64::from_polar(
        rng.random_range(0.05..2.0),
        rng.random_range(0.0..(2.0 * PI)),
    );
    QDSample::new(base, coeff)
}

fn unit_data(set: SeparatedSet) -> QDData {
    QDData::with_unit_hyp_norm(set).unwrap()
}

fn random_data(r: f64, radius: f64, seed: u64, max_points: usize) -> QDData {
    let set = make_separated_set(SetKind::GreedyRandom, r, radius, seed)
        .unwrap()
        .truncated(max_points);
    let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_mul(977) ^ 0x51f0);
    let coeffs = set
        .points()
        .iter()
        .map(|p| {
            Complex64::from_polar(
                rng.random_range(0.1..0.95) / sq(p.one_minus_abs2()),
                rng.random_range(0.0..(2.0 * PI)),
            )
        })
        .collect();
    QDData::new(set, coeffs).unwrap()
}

#[test]
fn criterion_1_mass_identity() {
    let start = Instant::now();
    let grid = PolarQuadratureGrid::new(RADIAL_CUTOFF, 512).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(101);
    let mut worst = 0.0f64;
    for _ in 0..20 {
        let s = random_sample(&mut rng);
        let e = s.minimal_extension();
        let quad = l1_norm_quadrature(&e, &grid);
        let closed = PI * s.hyp_norm();
        worst = worst.max(((quad - closed) / closed).abs());
    }
    let elapsed = start.elapsed().as_secs_f64();
    report(
        1,
        "mass identity",
        worst < 1e-7 && elapsed < 10.0,
        &format!("worst relative error {worst:.3e}, {elapsed:.2} s"),
    );
}

#[test]
fn criterion_2_radial_law_and_tail() {
    let mut rng = ChaCha8Rng::seed_from_u64(202);
    let mut worst_profile = 0.0f64;
    for _ in 0..200 {
        let s = random_sample(&mut rng);
        let z = DiscPoint::from_coords(
            rng.random_range(-0.85..0.85),
            rng.random_range(-0.45..0.45),
        )
        .unwrap();
        let d = s.base().hyp_distance(&z);
        let expected = s.hyp_norm() * extension_hyp_norm_profile(d);
        let got = s.minimal_extension().eval_hyp_norm(z.z());
        worst_profile = worst_profile.max((got - expected).abs() / expected.max(1e-30));
    }
    let mut worst_tail = 0.0f64;
    for &radius in &[0.5, 1.0, 2.0, 4.0] {
        let quad = integrate_radial(
            |t| {
                let s = 1.0 / t.cosh();
                s * s * s * s
            },
            radius,
            RADIAL_CUTOFF,
        )
        .unwrap();
        let closed = PI / sq(radius.cosh());
        worst_tail = worst_tail.max(((quad - closed) / closed).abs());
    }
    report(
        2,
        "radial law and tail",
        worst_profile < 1e-10 && worst_tail < 1e-7,
        &format!("profile error {worst_profile:.3e}, tail error {worst_tail:.3e}"),
    );
}

#[test]
fn criterion_3_poincare_bounds() {
    let start = Instant::now();
    let mut violations = 0usize;
    let mut checked = 0usize;
    let mut rng = ChaCha8Rng::seed_from_u64(303);
    for &r in &[2.0f64, 3.0, 4.0, 6.0] {
        let ct = constant_table(r).unwrap();
        let grid = PolarQuadratureGrid::new(2.0 * r, 48).unwrap();
        for k in 0..25 {
            let seed = 1000 + 100 * (r as u64) + k;
            let set = make_separated_set(SetKind::GreedyRandom, r, r + 2.5, seed)
                .unwrap()
                .truncated(40);
            let coeffs = set
                .points()
                .iter()
                .map(|p| {
                    Complex64::from_polar(
                        rng.random_range(0.05..1.0) / sq(p.one_minus_abs2()),
                        rng.random_range(0.0..(2.0 * PI)),
                    )
                })
                .collect();
            let data = QDData::new(set, coeffs).unwrap();
            let series = FuchsianSeries::new(data);
            let sup = series.sup_bound_check(&grid).unwrap();
            let res = series.residual_check().unwrap();
            checked += 1;
            if !sup.within_bound() || !res.within_bound() {
                violations += 1;
            }
            // The stated D(r) really is 1/sinh^2(r/2) for the shipped A.
            assert!((ct.d - 1.0 / sq((0.5 * r).sinh())).abs() < 1e-15);
        }
    }
    let elapsed = start.elapsed().as_secs_f64();
    report(
        3,
        "series bounds",
        violations == 0 && checked == 100 && elapsed < 60.0,
        &format!("{checked} configurations, {violations} violations, {elapsed:.2} s"),
    );
}

#[test]
fn criterion_4_geometric_convergence() {
    let d4 = constant_table(4.0).unwrap().d;
    let mut worst_ratio = 0.0f64;
    let mut worst_agree = 0.0f64;
    let mut max_iters = 0usize;
    for seed in 0..50u64 {
        let data = random_data(4.0, 7.0, 7000 + seed, 30);
        assert!(data.len() >= 5, "seed {seed} produced a degenerate set");
        let result = extend_neumann(&data, 1e-10, 200).unwrap();
        assert!(result.converged(), "seed {seed} did not converge");
        max_iters = max_iters.max(result.iterations());
        let h = result.residual_history();
        for w in h.windows(2) {
            if w[0] > 1e-13 * data.sup_norm() {
                worst_ratio = worst_ratio.max(w[1] / w[0]);
            }
        }
        let direct = extend_direct(&data).unwrap();
        for ((a, b), p) in result
            .solved_coeffs()
            .iter()
            .zip(direct.solved_coeffs())
            .zip(data.support().points())
        {
            worst_agree = worst_agree.max((a - b).norm() * sq(p.one_minus_abs2()));
        }
    }
    // Refusal must fire exactly at the contraction threshold.
    let r_star = separation_threshold();
    let mut refusal_ok = true;
    for &(r, expect_refusal) in &[
        (1.5, true),
        (r_star - 0.05, true),
        (r_star - 0.001, true),
        (r_star + 0.001, false),
        (r_star + 0.05, false),
        (4.0, false),
    ] {
        let x = (0.5 * r as f64).tanh();
        let set = SeparatedSet::new(
            vec![
                DiscPoint::from_coords(-x, 0.0).unwrap(),
                DiscPoint::from_coords(x, 0.0).unwrap(),
            ],
            r,
        )
        .unwrap();
        let data = QDData::with_unit_hyp_norm(set).unwrap();
        let refused = matches!(
            extend_neumann(&data, 1e-10, 100),
            Err(Error::SeparationBelowThreshold { .. })
        );
        if refused != expect_refusal {
            refusal_ok = false;
        }
    }
    report(
        4,
        "geometric convergence",
        worst_ratio <= d4 + 1e-9 && worst_agree <= 1e-8 && refusal_ok && max_iters <= 9,
        &format!(
            "worst ratio {worst_ratio:.4} (D = {d4:.4}), method agreement {worst_agree:.3e}, \
             max iterations {max_iters}, refusal boundary ok: {refusal_ok}"
        ),
    );
}

#[test]
fn criterion_5_extension_certificate() {
    let grid = PolarQuadratureGrid::new(8.0, 48).unwrap();
    let mut violations = 0usize;
    let mut worst_margin = 0.0f64;
    for seed in 0..50u64 {
        let data = random_data(4.0, 7.0, 7000 + seed, 30);
        let result = extend_neumann(&data, 1e-10, 200).unwrap();
        let cert = extension_sup_certificate(&result).unwrap();
        let series = result.series();
        let sup = series.sup_bound_check(&grid).unwrap();
        if sup.measured_sup > cert {
            violations += 1;
        }
        worst_margin = worst_margin.max(sup.measured_sup / cert);
    }
    report(
        5,
        "extension sup certificate",
        violations == 0,
        &format!("50 extensions, {violations} violations, worst measured/certified {worst_margin:.4}"),
    );
}

#[test]
fn criterion_6_perturbation_modulus() {
    let data = random_data(4.0, 12.0, 606, 40);
    assert!(data.len() >= 25, "support too small: {}", data.len());
    let q = DQElement::new(data, 1.0).unwrap();

    let spec = PerturbationSpec::new(10.0, 1e-6).unwrap();
    let rep = perturbation_modulus(&q, &spec, 100, 4242).unwrap();
    let all_dominated = rep.per_trial.iter().all(|&m| m <= rep.certified_bound);

    let spec_small = PerturbationSpec::new(10.0, 1e-7).unwrap();
    let rep_small = perturbation_modulus(&q, &spec_small, 100, 4242).unwrap();
    let within_floor = rep_small.measured_max <= rep_small.tail_term;

    report(
        6,
        "perturbation modulus",
        all_dominated && within_floor,
        &format!(
            "alpha 1e-6: measured {:.3e} <= certified {:.3e} on {} trials; \
             alpha 1e-7: measured {:.3e} <= tail floor {:.3e}",
            rep.measured_max, rep.certified_bound, rep.trials, rep_small.measured_max,
            rep_small.tail_term
        ),
    );
}

#[test]
fn criterion_7_theta_series() {
    let start = Instant::now();
    let group = FuchsianGroup::genus2_octagon();
    let f = DiscPolynomial::new(vec![c64(1.0, 0.0), c64(0.0, 0.0), c64(0.4, 0.25)]).unwrap();
    let test_points = [
        DiscPoint::from_coords(0.1, 0.2).unwrap(),
        DiscPoint::from_coords(-0.3, 0.05).unwrap(),
        DiscPoint::from_coords(0.15, -0.25).unwrap(),
    ];

    // One breadth-first pass at L = 8 serves every (z, gamma z) pair.
    let mut points: Vec<DiscPoint> = test_points.to_vec();
    for gamma in group.generators() {
        for z in &test_points {
            points.push(gamma.apply_point(z).unwrap());
        }
    }
    let batch = theta_batch(&group, &f, &points, 8).unwrap();

    let mut monotone_ok = true;
    let mut tail_ok = true;
    let mut worst_final_defect = 0.0f64;
    for (gi, gamma) in group.generators().iter().enumerate() {
        for (zi, z) in test_points.iter().enumerate() {
            let z_idx = zi;
            let gz_idx = 3 + gi * 3 + zi;
            let der = gamma.derivative(z.z());
            let defect = |length: usize| {
                (batch.theta(gz_idx, length) * der * der - batch.theta(z_idx, length)).norm()
            };
            let (d4, d6, d8) = (defect(4), defect(6), defect(8));
            // Monotone trend with 10% slack on the last step.
            if !(d6 <= d4 && d8 <= 1.1 * d6) {
                monotone_ok = false;
            }
            let tails = batch.tail_estimate(z_idx, 8) + batch.tail_estimate(gz_idx, 8);
            if d8 > tails {
                tail_ok = false;
            }
            worst_final_defect = worst_final_defect.max(d8);
        }
    }

    // Schottky case: geometric per-length decay of sum |gamma'(z)|^2.
    let schottky = FuchsianGroup::schottky(4.0).unwrap();
    let sbatch = theta_batch(
        &schottky,
        &DiscPolynomial::one(),
        &[DiscPoint::from_coords(0.1, 0.2).unwrap()],
        8,
    )
    .unwrap();
    let mut schottky_ok = true;
    for l in 1..8 {
        let cur = sbatch.deriv_sum(0, l);
        let next = sbatch.deriv_sum(0, l + 1);
        if !(next <= 0.5 * cur || next == 0.0) {
            schottky_ok = false;
        }
    }
    let elapsed = start.elapsed().as_secs_f64();
    report(
        7,
        "theta series",
        monotone_ok && tail_ok && schottky_ok && elapsed < 300.0,
        &format!(
            "defect trend ok: {monotone_ok}, final defect {worst_final_defect:.3e} under tail \
             estimates: {tail_ok}, schottky decay ok: {schottky_ok}, {elapsed:.1} s"
        ),
    );
}

#[test]
fn criterion_8_equivariance() {
    let data = random_data(2.5, 4.0, 808, 15);
    assert!(data.len() >= 8);
    let series = FuchsianSeries::new(data.clone());
    let mut rng = ChaCha8Rng::seed_from_u64(808);
    let mut worst = 0.0f64;
    for _ in 0..20 {
        let phi = DiscAutomorphism::new(
            Complex64::from_polar(rng.random_range(0.0..0.5), rng.random_range(0.0..(2.0 * PI))),
            rng.random_range(0.0..(2.0 * PI)),
        )
        .unwrap();
        let moved = FuchsianSeries::new(data.pullback(&phi).unwrap());
        // 100-point polar grid in the unit chart.
        for i in 0..10 {
            for j in 0..10 {
                let rho = 0.085 * (i as f64 + 1.0);
                let th = 2.0 * PI * j as f64 / 10.0;
                let z = Complex64::from_polar(rho, th);
                let lhs = moved.evaluate(z);
                let der = phi.derivative(z);
                let rhs = series.evaluate(phi.apply(z)) * der * der;
                worst = worst.max((lhs - rhs).norm() * sq(1.0 - z.norm_sqr()));
            }
        }
    }
    report(
        8,
        "equivariance",
        worst < 1e-10,
        &format!("worst pointwise defect {worst:.3e} over 20 automorphisms x 100 grid points"),
    );
}
