mod common;

use std::sync::Arc;

use num_complex::Complex64;
use proptest::prelude::*;

use pullback::calculus::{standard_family, ContourSpec, FAMILY_OMEGA};
use pullback::evolution::{max_reg_ratio, sample_forcing, TimeGrid};
use pullback::geometry::{BoundaryGraph, CatalogGraph};
use pullback::operators::{
    assemble_laplacian, assemble_perturbation, perturbation_coefficients, perturbation_ratio,
    smooth_trials, BoundaryCondition, OperatorLabel,
};
use pullback::spaces::{hardy_check, hardy_constant, sobolev_norm, GridFunction, NormSpec};

use common::{bump_map, grid1, grid2};

fn config() -> ProptestConfig {
    ProptestConfig::with_cases(48)
}

proptest! {
    #![proptest_config(config())]

    #[test]
    fn fixed_point_converges_and_contracts(eps in 0.0..0.05f64, x1 in 1e-3..3.0f64, x2 in -2.0..2.0f64) {
        let p = bump_map(eps);
        prop_assume!(p.seminorm() <= 1.0);
        let x1 = x1 + p.graph().eval(&[x2]);
        let r = p.regularized_distance_report(&[x1, x2]).unwrap();
        prop_assert!(r.residual <= p.fp_tol());
        prop_assert!((r.value + p.h2(r.value, &[x2]) - x1).abs() <= p.fp_tol());
        prop_assert!(r.max_contraction <= 0.6, "{}", r.max_contraction);
    }

    #[test]
    fn psi_round_trips(y1 in 1e-3..3.0f64, y2 in -2.0..2.0f64) {
        let p = bump_map(0.1);
        let tol = 10.0 * p.fp_tol();
        let x = p.psi_inverse(&[y1, y2]).unwrap();
        let y = p.psi(&x).unwrap();
        prop_assert!((y[0] - y1).abs() <= tol && (y[1] - y2).abs() <= tol);
        let back = p.psi_inverse(&y).unwrap();
        prop_assert!((back[0] - x[0]).abs() <= tol);
    }

    #[test]
    fn h1_is_h2_at_the_image(x1 in 1e-3..3.0f64, x2 in -2.0..2.0f64) {
        let p = bump_map(0.1);
        let x = [x1 + p.graph().eval(&[x2]), x2];
        let y = p.psi(&x).unwrap();
        prop_assert!((p.h1(&x).unwrap() - p.h2(y[0], &y[1..])).abs() <= 10.0 * p.fp_tol());
    }

    #[test]
    fn even_boundary_gives_even_distance(x1 in 1e-2..3.0f64, x2 in 0.0..2.0f64) {
        let p = bump_map(0.1);
        let x1 = x1 + p.graph().eval(&[x2]);
        let a = p.regularized_distance(&[x1, x2]).unwrap();
        let b = p.regularized_distance(&[x1, -x2]).unwrap();
        prop_assert!((a - b).abs() <= p.fp_tol());
    }

    #[test]
    fn gradient_matches_differences(y1 in 0.1..3.0f64, y2 in -1.5..1.5f64) {
        let p = bump_map(0.1);
        let x = p.psi_inverse(&[y1, y2]).unwrap();
        let g = p.rho_gradient(&x).unwrap();
        let h = 1e-5;
        let norm = g.iter().map(|v| v * v).sum::<f64>().sqrt();
        for k in 0..2 {
            let (mut a, mut b) = (x.clone(), x.clone());
            a[k] += h;
            b[k] -= h;
            let fd = (p.regularized_distance(&a).unwrap() - p.regularized_distance(&b).unwrap()) / (2.0 * h);
            prop_assert!((g[k] - fd).abs() <= 1e-5 * norm, "{k}: {} vs {fd}", g[k]);
        }
    }

    #[test]
    fn graphs_vanish_outside_their_support(eps in 0.0..0.3f64, x in 1.0..10.0f64, sign in prop::bool::ANY) {
        let x = if sign { x } else { -x };
        for g in [CatalogGraph::bump(2, eps, 1.0).unwrap(), CatalogGraph::cone_smoothed(2, eps, 0.5, 1.0).unwrap()] {
            let r = g.support_radius();
            if x.abs() > r {
                prop_assert_eq!(g.eval(&[x]), 0.0);
            }
            prop_assert_eq!(g.deriv(&[0], &[x / 10.0]), g.eval(&[x / 10.0]));
        }
    }

    #[test]
    fn mollifier_is_even(t in 0.0..0.8f64) {
        let p = bump_map(0.0);
        prop_assert_eq!(p.mollifier().eta(t), p.mollifier().eta(-t));
    }

    #[test]
    fn sobolev_norm_grows_with_order(a in 0.2..3.0f64, b in 0.5..4.0f64, gamma in -0.5..2.0f64) {
        let g = grid1(128);
        let f = GridFunction::from_real_fn(Arc::clone(&g), |x| x[0] * (-a * x[0]).exp() * (b * x[0]).cos());
        let mut prev = 0.0;
        for k in 0..3 {
            let Ok(spec) = NormSpec::new(k, 2.0, gamma) else { continue };
            let n = sobolev_norm(&f, spec).unwrap();
            prop_assert!(n >= prev);
            prev = n;
        }
    }

    #[test]
    fn hardy_ratio_respects_the_constant(m in 1i32..4, b in 0.5..3.0f64, gamma in -0.5..0.8f64) {
        let g = grid1(512);
        let u = GridFunction::from_real_fn(Arc::clone(&g), |x| x[0].powi(m) * (-b * x[0]).exp());
        let r = hardy_check(&u, 2.0, gamma, true).unwrap();
        prop_assert!(r.ratio <= hardy_constant(2.0, gamma) + 0.05, "{}", r.ratio);
    }

    #[test]
    fn sector_functions_respect_their_bounds(t in -1.0..1.0f64, lr in -6.0..6.0f64) {
        let z = Complex64::from_polar(10f64.powf(lr), t * FAMILY_OMEGA);
        for f in standard_family(FAMILY_OMEGA).unwrap() {
            prop_assert!(f.eval(z).norm() <= 1.05 * f.hinf_norm(), "{} at {z}", f.label());
            let (a, b) = f.decay();
            let r = z.norm();
            prop_assert!(f.eval(z).norm() <= 2.0 * f.hinf_norm().max(1.0) * r.powf(a).min(r.powf(-b)));
        }
    }

    #[test]
    fn contour_nodes_are_log_spaced(per_decade in 2usize..30, lo in -8.0..-1.0f64, hi in 1.0..10.0f64) {
        let spec = ContourSpec { r_min: 10f64.powf(lo), r_max: 10f64.powf(hi), nodes_per_decade: per_decade, ..ContourSpec::default() };
        let nodes = spec.nodes();
        for w in nodes.windows(2) {
            prop_assert!(((w[1].norm() / w[0].norm()).ln() - spec.step()).abs() < 1e-10);
            prop_assert!((w[0].arg() + spec.nu).abs() < 1e-12);
        }
    }

    #[test]
    fn temporal_weight_range_is_enforced(a in -2.0..3.0f64, q in 1.5..3.0f64) {
        let ok = TimeGrid::uniform(1.0, 8, q, a).is_ok();
        prop_assert_eq!(ok, a > -1.0 && a < q - 1.0);
    }

    #[test]
    fn excluded_weights_are_rejected(j in 1usize..4, p in 1.5..3.0f64) {
        prop_assert!(NormSpec::new(1, p, j as f64 * p - 1.0).is_err());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn perturbation_ratio_is_scale_invariant(seed in 0u64..1000) {
        let g = grid2(48, 16);
        let dir = BoundaryCondition::Dirichlet;
        let a = assemble_laplacian(Arc::clone(&g), dir);
        let coeffs = perturbation_coefficients(&g, &bump_map(0.05)).unwrap();
        let b = assemble_perturbation(Arc::clone(&g), &coeffs, dir, OperatorLabel::PullbackLaplacian).unwrap();
        let spec = NormSpec::lebesgue(2.0, 0.5).unwrap();
        for u in smooth_trials(Arc::clone(&g), dir, 2, seed) {
            let one = perturbation_ratio(&b, &a, std::slice::from_ref(&u), spec).unwrap();
            let three = perturbation_ratio(&b, &a, &[u.scale(Complex64::new(3.0, 0.0))], spec).unwrap();
            prop_assert!((one - three).abs() <= 1e-12 * one);
        }
    }

    #[test]
    fn max_reg_ratio_is_homogeneous(re in -3.0..3.0f64, im in -3.0..3.0f64, w in 0.0..0.9f64) {
        prop_assume!(re.abs() + im.abs() > 1e-3);
        let g = grid1(64);
        let a = assemble_laplacian(Arc::clone(&g), BoundaryCondition::Dirichlet);
        let tg = TimeGrid::uniform(1.0, 16, 2.0, w).unwrap();
        let f = sample_forcing(&tg, &g, |t, x| Complex64::new(t * x[0] * (-x[0]).exp(), 0.0));
        let s = Complex64::new(re, im);
        let cf: Vec<Vec<Complex64>> = f.iter().map(|v| v.iter().map(|z| z * s).collect()).collect();
        let spec = NormSpec::lebesgue(2.0, 0.0).unwrap();
        let (r1, r2) = (max_reg_ratio(&a, &f, &tg, spec).unwrap(), max_reg_ratio(&a, &cf, &tg, spec).unwrap());
        prop_assert!((r1 - r2).abs() <= 1e-10 * r1);
    }
}
