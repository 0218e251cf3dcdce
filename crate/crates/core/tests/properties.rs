use std::f64::consts::PI;

use nalgebra::DVector;
use num_complex::Complex64;
use proptest::prelude::*;

use sdl_core::bergman::{self, phi_fn, CMatrix, Domain, Weight};
use sdl_core::division::{self, DivisionProblem};
use sdl_core::extension::{self, CalcLimitCase, ExtensionCase};
use sdl_core::positivity::{self, BetaTensor, HermitianTensorForm};
use sdl_core::quad::{self, BallIntegrandN, BallMode, Integrand1D};
use sdl_core::suite;
use sdl_core::triples::{self, real_fn, TripleBuilderSpec};
use sdl_core::MultiPoly;

fn cx(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

fn horner(c: &[f64], x: f64) -> f64 {
    c.iter().rev().fold(0.0, |acc, &a| acc * x + a)
}

fn coeffs() -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-3.0..3.0f64, 1..=7)
}

fn diag(d: &[f64]) -> CMatrix {
    CMatrix::from_diagonal(&DVector::from_iterator(d.len(), d.iter().map(|&x| cx(x))))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn quadrature_is_linear(f in coeffs(), g in coeffs(), a in -2.0..2.0f64, b in -2.0..2.0f64, lo in -1.0..0.0f64, len in 0.1..3.0f64) {
        let hi = lo + len;
        let tol = quad::DEFAULT_REL_TOL;
        let int = |h: &dyn Fn(f64) -> f64| quad::integrate_1d(&Integrand1D::new(h, lo, hi), tol, quad::DEFAULT_MAX_DEPTH).unwrap();
        let combined = int(&|x| a * horner(&f, x) + b * horner(&g, x));
        let (if_, ig) = (int(&|x| horner(&f, x)), int(&|x| horner(&g, x)));
        let abs_f = int(&|x| horner(&f, x).abs());
        let abs_g = int(&|x| horner(&g, x).abs());
        let scale = a.abs() * abs_f + b.abs() * abs_g + quad::ABS_FLOOR;
        prop_assert!((combined - (a * if_ + b * ig)).abs() <= 10.0 * tol * scale);
    }

    #[test]
    fn quadrature_is_deterministic(f in coeffs(), seed in 0u64..1000) {
        let h = |x: f64| horner(&f, x) * (-x * x).exp();
        let once = quad::integrate(h, -1.0, 2.0).unwrap();
        prop_assert_eq!(once.to_bits(), quad::integrate(h, -1.0, 2.0).unwrap().to_bits());
        let ball = |z: &[Complex64]| horner(&f, z[0].re) + z[1].norm_sqr();
        let mode = BallMode::MonteCarlo { samples: 5_000, seed };
        let a = quad::integrate_ball(&BallIntegrandN::new(2, ball, mode), 8).unwrap();
        let b = quad::integrate_ball(&BallIntegrandN::new(2, ball, mode), 8).unwrap();
        prop_assert_eq!(a.value.to_bits(), b.value.to_bits());
    }

    #[test]
    fn rank_minimum_is_monotone_and_scales(seed in 0u64..500, c in 0.1..10.0f64) {
        let beta = BetaTensor::random(2, 2, 2, seed);
        let b = beta.gap_form(1).sub(&HermitianTensorForm::identity((2, 2)).scaled(0.5)).unwrap();
        let (one, _) = positivity::rank_m_min(&b, 1, 4, seed).unwrap();
        let (two, _) = positivity::rank_m_min(&b, 2, 4, seed).unwrap();
        prop_assert!(two <= one + 1e-9, "{two} > {one}");
        let (scaled, _) = positivity::rank_m_min(&b.scaled(c), 1, 4, seed).unwrap();
        prop_assert!((scaled - c * one).abs() <= 1e-9 * (c * one).abs().max(1.0));
    }

    #[test]
    fn skoda_gap_is_nonnegative(seed in 0u64..10_000, size in 0usize..16) {
        let (r_q, r_s, n, q) = suite::lemma_sizes()[size];
        let gap = positivity::lemma_skoda_gap(&BetaTensor::random(r_q, r_s, n, seed), q, 2, seed).unwrap();
        prop_assert!(gap >= -1e-9, "{gap}");
    }

    #[test]
    fn built_triples_hit_alpha(lambda in 0.5..3.0f64, a in -1.0..1.0f64, alpha in 0.1..2.0f64) {
        let spec = TripleBuilderSpec { c_profile: real_fn(move |t| (lambda * t).exp()), a, alpha };
        let grid = triples::linear_grid(a - 6.0, a - 1e-3, 40);
        let (tr, rep) = triples::build_from_c(&spec, &grid).unwrap();
        prop_assert!((tr.s(a) - alpha).abs() < 1e-9 * (1.0 + alpha));
        if rep.passed() {
            prop_assert!(grid.iter().all(|&t| tr.ds(t) < 0.0));
        }
    }

    #[test]
    fn mean_value_ignores_affine_terms(re in -2.0..2.0f64, im in -2.0..2.0f64, b in -2.0..2.0f64, c in 0.1..1.0f64) {
        let x = [cx(0.1), Complex64::new(0.0, -0.2)];
        let a = diag(&[1.0, 3.0]);
        let eps = [0.2, 0.6];
        let base = phi_fn(move |z| c * (z[0].norm_sqr() - 0.5 * z[1].norm_sqr()));
        let plus = phi_fn(move |z| {
            c * (z[0].norm_sqr() - 0.5 * z[1].norm_sqr()) + (Complex64::new(re, im) * z[0]).re + b
        });
        let diffs = |phi| {
            let rep = extension::mean_value_test(&phi, &x, &a, &eps, 1.0).unwrap();
            rep.params["differences"].as_array().unwrap().iter().map(|v| v.as_f64().unwrap()).collect::<Vec<_>>()
        };
        for (u, v) in diffs(base).iter().zip(diffs(plus)) {
            prop_assert!((u - v).abs() < 1e-9, "{u} vs {v}");
        }
    }

    #[test]
    fn division_is_feasible_and_truncation_monotone(theta in 0.2..1.3f64, f1 in -1.0..1.0f64, f2 in -1.0..1.0f64) {
        let f = MultiPoly::from_terms(1, [(vec![0], cx(1.0)), (vec![1], cx(f1)), (vec![2], cx(f2))]).unwrap();
        let g = vec![MultiPoly::constant(1, cx(theta.cos())), MultiPoly::var(1, 0).scale(cx(theta.sin()))];
        let mut last = f64::INFINITY;
        for degree in [2, 4, 6, 8] {
            let p = DivisionProblem::new(Domain::ball(1), g.clone(), f.clone(), triples::skoda(0.5), degree).unwrap();
            let sol = p.minimal_solution().unwrap();
            prop_assert!(sol.residual < 1e-10);
            prop_assert!(sol.energy <= last + 1e-12, "{} > {last}", sol.energy);
            last = sol.energy;
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn gram_matrices_are_positive_definite(p in 0.0..3.0f64, n in 1usize..=2) {
        let max_degree = if n == 1 { 12 } else { 6 };
        let w = Weight::radial(real_fn(move |s| (1.0 - s).powf(p)));
        let gram = bergman::monomial_gram(&Domain::ball(n), &w, max_degree).unwrap();
        prop_assert!(bergman::min_eigenvalue(&gram.matrix) > 0.0);
        let tilted = Weight::unit().with_phi(phi_fn(move |z| p * z[0].re));
        let gram = bergman::monomial_gram(&Domain::ball(n), &tilted, max_degree.min(6)).unwrap();
        prop_assert!(bergman::min_eigenvalue(&gram.matrix) > 0.0);
    }

    #[test]
    fn radial_and_grid_gram_agree(p in 0.0..2.0f64) {
        let rho = real_fn(move |s| (-p * s).exp() + (1.0 + s).powf(-p));
        let radial = bergman::monomial_gram(&Domain::ball(1), &Weight::radial(rho.clone()), 6).unwrap();
        let grid = bergman::monomial_gram(&Domain::ball(1), &Weight::radial(rho).with_phi(phi_fn(|_| 0.0)), 6).unwrap();
        prop_assert!(radial.diagonal && !grid.diagonal);
        let scale = radial.matrix.norm();
        prop_assert!((&radial.matrix - &grid.matrix).norm() <= 1e-6 * scale);
    }

    #[test]
    fn tensor_rule_matches_monte_carlo(f in coeffs(), g in coeffs(), seed in 0u64..100) {
        let h = |z: &[Complex64]| horner(&f, z[0].re) * horner(&g, z[1].im);
        let exact = quad::integrate_ball(&BallIntegrandN::new(2, h, BallMode::TensorPolar), 24).unwrap();
        let mc = quad::integrate_ball(&BallIntegrandN::new(2, h, BallMode::MonteCarlo { samples: 1_000_000, seed }), 8).unwrap();
        let se = mc.std_error.unwrap();
        prop_assert!((exact.value - mc.value).abs() <= 3.0 * se + 1e-12, "{} vs {} ± {se}", exact.value, mc.value);
    }

    #[test]
    fn estimate_holds_for_convex_exponents(c in 0.0..1.5f64, theta in 0.2..1.3f64) {
        let p = suite::two_generator_disk(theta, 10).unwrap().with_phi(phi_fn(move |z| c * z[0].norm_sqr()));
        let s = p.estimate_sides().unwrap();
        prop_assert!(s.ratio <= 1.0 + 5e-3, "{s:?}");
    }
}

#[test]
fn equality_family_over_sharp_triples() {
    for tr in triples::sharp_instances() {
        let name = tr.name.clone();
        let s = suite::linear_ellipsoid([1.0, 2.0], tr, 8).unwrap().estimate_sides().unwrap();
        assert!((s.ratio - 1.0).abs() < 2e-3, "{name}: {s:?}");
    }
}

#[test]
fn calc_limit_is_monotone_with_vanishing_error() {
    let ts = vec![1e2, 1e3, 1e4, 1e5, 1e6];
    for k in 1..=3 {
        for b in [0.0, 0.5] {
            let out = extension::calc_limit(&CalcLimitCase { k, b, t_values: ts.clone() }).unwrap();
            assert!(out.monotone);
            let errs: Vec<f64> = out.values.iter().map(|(_, v)| (v - out.target).abs()).collect();
            assert!(errs.windows(2).all(|w| w[1] <= w[0] + 1e-12), "k = {k}, B = {b}: {errs:?}");
            // error times t^{1/k} stays bounded
            let scaled: Vec<f64> = out.values.iter().zip(&errs).map(|((t, _), e)| e * t.powf(1.0 / k as f64)).collect();
            assert!(scaled.iter().all(|&x| x <= 10.0 * scaled[0] + 1e-9), "k = {k}, B = {b}: {scaled:?}");
        }
    }
}

#[test]
fn extension_energy_decreases_in_t() {
    let mut last = f64::INFINITY;
    for t in [1e2, 1e3, 1e4] {
        let case = ExtensionCase { c_profile: real_fn(|_| 1.0), c_label: "one".into(), f0: cx(1.0), t };
        let e = extension::extend_via_division(&case, 10).unwrap().energy;
        assert!(e <= last + 1e-6, "t = {t}: {e} > {last}");
        assert!(e >= PI * (1.0 - 1e-9));
        last = e;
    }
}

#[test]
fn catalog_triples_give_equality_for_the_dbar_estimate() {
    for tr in triples::catalog_instances() {
        assert!(sdl_core::dbar::apriori_equality(&tr, 1e-7).unwrap().passed(), "{}", tr.name);
    }
}

#[test]
fn converse_ratio_grows_with_the_saddle() {
    let a = division::squeezed_ellipsoid(0.5, 0.2);
    let mut last = 0.0;
    for c in [0.0, 0.15, 0.3] {
        let phi = if c == 0.0 { None } else { Some(division::saddle_phi(c)) };
        let r = division::division_ratio(phi, &a, 6, &triples::qexp(1.0)).unwrap().sides.ratio;
        assert!(r >= last - 1e-9, "c = {c}: {r} < {last}");
        last = r;
    }
}
