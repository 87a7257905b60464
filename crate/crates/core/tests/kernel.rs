mod common;

use std::sync::Arc;

use common::*;
use nalgebra::{DMatrix, DVector, SymmetricEigen};
use vpdk::kernel::*;
use vpdk::metric::{BirthDeath, BirthDeathSpace, Label, LabelSpace, QuotientPoint};
use vpdk::rng::RngCursor;
use vpdk::vpd::{covering_number, grothendieck_rho, CoverMode, SignedDiagram};
use vpdk::Error;

fn dataset(space: &BirthDeathSpace, cur: &mut RngCursor, count: usize) -> Vec<SignedDiagram> {
    (0..count).map(|_| random_signed(space, cur, 3)).collect()
}

fn config_for(space: BirthDeathSpace, data: &[SignedDiagram], dim: usize, t: f64) -> KernelConfig {
    KernelConfig::geometric(space, t, default_norming_family(&space, data, dim, 11)).unwrap()
}

#[test]
fn default_family_is_one_lipschitz_and_vanishes_at_the_basepoint() {
    let mut cur = cursor(30);
    for space in example_spaces(16) {
        let data = dataset(&space, &mut cur, 10);
        let family = default_norming_family(&space, &data, 32, 5);
        assert_eq!(family.len(), 32);
        for f in &family {
            f.validate(&space).unwrap();
            assert_eq!(f.evaluate(&space, &QuotientPoint::Basepoint), 0.0);
            for (a, v) in f.anchors().iter().zip(f.values()) {
                assert!((f.evaluate_point(&space, a) - v).abs() < 1e-12);
            }
        }
        for _ in 0..200 {
            let g = random_signed(&space, &mut cur, 3);
            let h = random_signed(&space, &mut cur, 3);
            let rho = grothendieck_rho(&g, &h).unwrap();
            for f in &family {
                let gap = (f.evaluate_diagram(&g) - f.evaluate_diagram(&h)).abs();
                assert!(gap <= rho + 1e-9 * rho.max(1.0));
            }
        }
    }
}

#[test]
fn non_lipschitz_anchors_are_rejected() {
    let s = real_space();
    let anchors: Arc<[BirthDeath]> = Arc::from(vec![BirthDeath::real(0.0, 1.0)]);
    assert!(matches!(
        LipschitzFunctional::new(&s, anchors, vec![3.0]),
        Err(Error::Precondition(_))
    ));
}

#[test]
fn kernel_values_and_feature_metric() {
    let mut cur = cursor(31);
    for space in example_spaces(16) {
        let data = dataset(&space, &mut cur, 12);
        let c = config_for(space, &data, 32, 1.5);
        let lip = c.lipschitz_factor();
        assert!((lip * lip - 1.5 * c.trace_weight()).abs() < 1e-12);
        for g in &data {
            assert_eq!(c.kernel(g, g).unwrap(), 1.0);
            for h in &data {
                let k = c.kernel(g, h).unwrap();
                assert!(k > 0.0 && k <= 1.0);
                assert_eq!(k, c.kernel(h, g).unwrap());
                let d = c.feature_metric(g, h).unwrap();
                assert!((d * d - (2.0 - 2.0 * k)).abs() < 1e-12);
                assert!(d <= lip * grothendieck_rho(g, h).unwrap() + 1e-12);
            }
        }
    }
}

#[test]
fn gram_matrices_are_positive_semidefinite() {
    let mut cur = cursor(32);
    for space in example_spaces(16) {
        let data = dataset(&space, &mut cur, 20);
        for t in [0.1, 1.0, 10.0] {
            let c = config_for(space, &data, 32, t);
            let gram = c.gram_matrix(&data).unwrap();
            for i in 0..20 {
                for j in 0..20 {
                    assert!((gram[(i, j)] - c.kernel(&data[i], &data[j]).unwrap()).abs() < 1e-12);
                }
            }
            let low = SymmetricEigen::new(gram).eigenvalues.min();
            assert!(low >= -1e-10, "min eigenvalue {low} at t = {t}");
        }
    }
}

#[test]
fn rkhs_functions_obey_the_lipschitz_bound() {
    let mut cur = cursor(33);
    let space = real_space();
    let centres = dataset(&space, &mut cur, 6);
    let c = config_for(space, &centres, 32, 1.0);
    let gram = c.gram_matrix(&centres).unwrap();
    for _ in 0..20 {
        let coeffs = DVector::from_fn(6, |_, _| cur.normal());
        let norm = (coeffs.transpose() * &gram * &coeffs)[(0, 0)].sqrt();
        let coeffs = coeffs / norm;
        let f = |g: &SignedDiagram| -> f64 {
            centres.iter().zip(coeffs.iter()).map(|(z, a)| a * c.kernel(g, z).unwrap()).sum()
        };
        let lip = c.lipschitz_bound(1.0).unwrap();
        for _ in 0..50 {
            let g = random_signed(&space, &mut cur, 3);
            let h = random_signed(&space, &mut cur, 3);
            assert!((f(&g) - f(&h)).abs() <= lip * grothendieck_rho(&g, &h).unwrap() + 1e-10);
        }
    }
}

#[test]
fn entropy_bound_dominates_exact_feature_covers() {
    let mut cur = cursor(34);
    for space in example_spaces(16) {
        let pts = dataset(&space, &mut cur, 9);
        let c = config_for(space, &pts, 32, 1.0);
        for eps in [0.05, 0.2, 0.5, 1.0] {
            let bound = entropy_bound(&c, &pts, eps, CoverMode::Exact).unwrap();
            let exact = exhaustive_cover(9, eps, |i, j| c.feature_metric(&pts[i], &pts[j]).unwrap());
            assert!(exact <= bound, "N_δ = {exact} > {bound} at ε = {eps}");
            let direct = covering_number(&pts, eps / c.lipschitz_factor(), CoverMode::Exact).unwrap();
            assert_eq!(bound, direct);
        }
    }
}

#[test]
fn feature_metric_example() {
    let s = real_space();
    let g = SignedDiagram::singleton(s, BirthDeath::real(0.0, 1.0)).unwrap();
    let c = KernelConfig::explicit(s, 1.0, vec![LipschitzFunctional::basepoint_distance()], vec![1.0], vec![1.0])
        .unwrap();
    let k = c.kernel(&g, &SignedDiagram::zero(s)).unwrap();
    assert!((k - (-0.5f64).exp()).abs() < 1e-15);
    let d = c.feature_metric(&g, &SignedDiagram::zero(s)).unwrap();
    assert!((d - 0.887_096).abs() < 1e-6);
}

/// Basepoint-separated targets: far-apart points with dyadic lifetimes.
fn separated_target(cur: &mut RngCursor) -> SignedDiagram {
    let s = real_space();
    let n = 1 + cur.below(3);
    let entries: Vec<(BirthDeath, i64)> = (0..n)
        .map(|i| {
            let b = 10.0 * i as f64;
            let life = (1 + cur.below(4)) as f64 * 0.5;
            let m = (1 + cur.below(2)) as i64 * if cur.bernoulli(0.5) { 1 } else { -1 };
            (BirthDeath::real(b, b + life), m)
        })
        .collect();
    SignedDiagram::from_entries(s, entries).unwrap()
}

#[test]
fn mass_certificate_bounds_the_mass() {
    let mut cur = cursor(35);
    let params = CertificateParams::default();
    for _ in 0..40 {
        let g = separated_target(&mut cur);
        let inst = CertificateInstance::new(g.clone(), params).unwrap();
        let report = inst.evaluate().unwrap();
        assert!(report.witness_in_lattice);
        assert!(report.kraft_sum <= 1.0 + 1e-12);
        assert!(g.mass() <= report.bound + 1e-9, "M = {} > {}", g.mass(), report.bound);
        assert!(report.lattice_max_rhs <= report.bound + 1e-12);
        if report.lattice_size > MAX_MATERIALIZED_FUNCTIONALS {
            continue;
        }
        // independent evaluation of log 1/k(g, 0) through the explicit family
        let family = inst.kernel_config().unwrap();
        family.validate_functionals().unwrap();
        assert_eq!(family.dimension(), report.lattice_size);
        let q = family.embedding_norm_sq(&g).unwrap();
        assert!((0.5 * params.t * q - report.log_inv_kernel).abs() <= 1e-9 * report.log_inv_kernel.max(1.0));
    }
}

#[test]
fn certificate_rejects_bad_targets() {
    let s = real_space();
    let p = CertificateParams::default();
    assert!(matches!(
        CertificateInstance::new(SignedDiagram::zero(s), p),
        Err(Error::Precondition(_))
    ));
    let close = SignedDiagram::from_entries(s, [(BirthDeath::real(0.0, 4.0), 1), (BirthDeath::real(0.5, 4.0), -1)]).unwrap();
    assert!(matches!(CertificateInstance::new(close, p), Err(Error::Precondition(_))));
    let wide = SignedDiagram::from_points(s, (0..7).map(|i| BirthDeath::real(10.0 * i as f64, 10.0 * i as f64 + 1.0)))
        .unwrap();
    assert!(matches!(CertificateInstance::new(wide, p), Err(Error::Capacity(_))));
    let bad = CertificateParams { epsilon: 1.0, ..p };
    let g = SignedDiagram::singleton(s, BirthDeath::real(0.0, 1.0)).unwrap();
    assert!(matches!(CertificateInstance::new(g, bad), Err(Error::Argument(_))));
}

#[test]
fn code_lengths() {
    assert_eq!(code_length(&[0]), 2);
    assert_eq!(code_length(&[1, -1]), 8);
    assert_eq!(code_length(&[3]), 6);
    assert!(short_code_length(&[3]) <= code_length(&[3]));
}

#[test]
fn rayleigh_scaling_recovers_the_factor() {
    let mut cur = cursor(36);
    for space in example_spaces(16) {
        let data = dataset(&space, &mut cur, 10);
        let c1 = config_for(space, &data, 32, 1.0);
        let c2 = c1.with_scaled_spectrum(3.0).unwrap();
        let rep = rayleigh_compare(&c1, &c2, &data).unwrap();
        assert!((rep.alpha_hat - 3.0).abs() < 1e-9 && (rep.beta_hat - 3.0).abs() < 1e-9);
        assert!(rep.kernels_match || rep.null_spaces_match);
        assert!(rep.span_alpha <= rep.alpha_hat + 1e-9 && rep.span_beta >= rep.beta_hat - 1e-9);
    }
}

#[test]
fn sandwich_holds_on_held_out_differences() {
    let mut cur = cursor(37);
    let space = real_space();
    let pool_points: Vec<BirthDeath> = (0..6).map(|_| dyadic_point(&mut cur)).collect();
    let on_pool = |cur: &mut RngCursor| {
        let entries: Vec<(BirthDeath, i64)> = (0..3)
            .map(|_| (pool_points[cur.below(6) as usize].clone(), if cur.bernoulli(0.5) { 1 } else { -1 }))
            .collect();
        SignedDiagram::from_entries(space, entries).unwrap()
    };
    let mut sample: Vec<SignedDiagram> =
        pool_points.iter().map(|p| SignedDiagram::singleton(space, p.clone()).unwrap()).collect();
    sample.extend((0..6).map(|_| on_pool(&mut cur)));
    let c1 = KernelConfig::geometric(space, 1.0, default_norming_family(&space, &sample, 24, 1)).unwrap();
    let c2 = KernelConfig::geometric(space, 1.0, default_norming_family(&space, &sample, 24, 2)).unwrap();
    let rep = rayleigh_compare(&c1, &c2, &sample).unwrap();
    let held: Vec<SignedDiagram> = (0..20).map(|_| on_pool(&mut cur)).collect();
    let check = rep.check_sandwich(&c1, &c2, &held).unwrap();
    assert!(check.checked > 0);
    assert_eq!(check.span_violations, 0);
    let stray = [SignedDiagram::singleton(space, BirthDeath::real(100.0, 101.0)).unwrap()];
    assert!(matches!(rep.check_sandwich(&c1, &c2, &stray), Err(Error::Argument(_))));
}

#[test]
fn stability_under_small_label_perturbations() {
    let mut cur = cursor(38);
    for space in example_spaces(16) {
        let p = space.labels();
        let data = dataset(&space, &mut cur, 6);
        let c = config_for(space, &data, 32, 1.0);
        for g in &data {
            for eta in [1e-3, 1e-2, 1e-1] {
                let moved: Vec<(BirthDeath, i64)> = g
                    .entries()
                    .iter()
                    .map(|(x, m)| {
                        let mut unit = || cur.uniform_range(-1.0, 1.0);
                        let b = p.perturb(&x.birth, eta, &mut unit);
                        let d = p.perturb(&x.death, eta, &mut unit);
                        (BirthDeath::new(b, d), *m)
                    })
                    .collect();
                let Ok(h) = SignedDiagram::from_entries(space, moved) else { continue };
                let rho = grothendieck_rho(g, &h).unwrap();
                assert!(c.feature_metric(g, &h).unwrap() <= c.lipschitz_factor() * rho + 1e-12);
            }
        }
    }
}

#[test]
fn config_json_round_trip() {
    let mut cur = cursor(39);
    let space = BirthDeathSpace::new(LabelSpace::Euclidean { dim: 3 });
    let data = dataset(&space, &mut cur, 5);
    let c = config_for(space, &data, 16, 0.7);
    let back: KernelConfig = serde_json::from_str(&serde_json::to_string(&c).unwrap()).unwrap();
    for g in &data {
        assert_eq!(back.kernel(g, &data[0]).unwrap(), c.kernel(g, &data[0]).unwrap());
    }
    let _ = Label::real(0.0);
    let _ = DMatrix::<f64>::zeros(1, 1);
}
