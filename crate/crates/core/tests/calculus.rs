mod common;

use std::sync::Arc;

use pullback::calculus::{
    apply_function, apply_function_checked, apply_functions, bip_sweep, hinfty_bound_estimate,
    rational_family, riesz_transform_norm, shifted_inverse, standard_family, ContourSpec,
    FractionalPowers, FAMILY_OMEGA,
};
use pullback::operators::{
    assemble_laplacian, assemble_pullback_laplacian, probe_set, resolvent_solve, BoundaryCondition,
    NormOptions,
};
use pullback::spaces::{GridFunction, NormSpec};

use common::{bump_map, c, grid1, grid2, rel_err, riesz_dense_norm, WeightedEigen};

const DIR: BoundaryCondition = BoundaryCondition::Dirichlet;

fn l2() -> NormSpec {
    NormSpec::lebesgue(2.0, 0.0).unwrap()
}

#[test]
fn rational_functions_match_the_spectral_theorem() {
    let g = grid1(96);
    let b = assemble_laplacian(Arc::clone(&g), DIR).shifted(1.0).unwrap();
    let e = WeightedEigen::new(&b);
    let fam = rational_family(FAMILY_OMEGA).unwrap();
    let probes = probe_set(&g, 3, 7);
    let out = apply_functions(&b, &fam, &ContourSpec::default(), &probes).unwrap();
    for (f, per_v) in fam.iter().zip(&out) {
        for (v, got) in probes.iter().zip(per_v) {
            let want = e.apply(|l| f.eval(c(l)), v);
            assert!(rel_err(got, &want) < 1e-6, "{}", f.label());
        }
    }
}

#[test]
fn self_adjoint_calculus_constant_is_one() {
    let g = grid2(48, 16);
    let b = assemble_laplacian(Arc::clone(&g), DIR).shifted(1.0).unwrap();
    let fam = standard_family(FAMILY_OMEGA).unwrap();
    let probes = probe_set(&g, 8, 1);
    let r = hinfty_bound_estimate(&b, &fam, &ContourSpec::default(), &probes, l2()).unwrap();
    assert!(r.constant > 0.3 && r.constant <= 1.05, "{}", r.constant);
    assert!(r.skipped.is_empty());
}

#[test]
fn small_perturbation_keeps_the_calculus_constant() {
    let g = grid2(48, 16);
    let fam = standard_family(FAMILY_OMEGA).unwrap();
    let probes = probe_set(&g, 8, 1);
    let spec = NormSpec::lebesgue(2.0, 0.5).unwrap();
    let flat = assemble_laplacian(Arc::clone(&g), DIR).shifted(1.0).unwrap();
    let (curved, _) = assemble_pullback_laplacian(Arc::clone(&g), &bump_map(0.05), DIR).unwrap();
    let curved = curved.shifted(1.0).unwrap();
    let k0 = hinfty_bound_estimate(&flat, &fam, &ContourSpec::default(), &probes, spec).unwrap().constant;
    let k1 = hinfty_bound_estimate(&curved, &fam, &ContourSpec::default(), &probes, spec).unwrap().constant;
    assert!(k1 <= 2.0 * k0 && k0 <= 2.0 * k1, "{k0} {k1}");
}

#[test]
fn fractional_powers_match_the_oracle() {
    let g = grid1(96);
    let b = assemble_laplacian(Arc::clone(&g), DIR).shifted(0.5).unwrap();
    let e = WeightedEigen::new(&b);
    let pw = FractionalPowers::new(&b).unwrap();
    let v = probe_set(&g, 1, 4).pop().unwrap();
    let got = pw.inverse_apply(0.5, &v).unwrap();
    assert!(rel_err(&got, &e.apply(|l| c(l.powf(-0.5)), &v)) < 1e-6);

    let quarter = pw.inverse_apply(0.25, &pw.inverse_apply(0.25, &v).unwrap()).unwrap();
    assert!(rel_err(&quarter, &got) < 1e-6);
    let half = pw.apply(0.5, &pw.apply(0.5, &v).unwrap()).unwrap();
    assert!(rel_err(&half, &b.apply_values(&v)) < 1e-6);
}

#[test]
fn imaginary_powers_of_a_self_adjoint_operator_are_contractions() {
    let g = grid2(48, 16);
    let b = assemble_laplacian(Arc::clone(&g), DIR).shifted(1.0).unwrap();
    let probes = probe_set(&g, 8, 2);
    let sweep = bip_sweep(&b, &[0.0, 1.0, 3.0, -3.0], &ContourSpec::default(), &probes, l2()).unwrap();
    assert!((sweep.points[0].1 - 1.0).abs() < 1e-2, "{:?}", sweep.points);
    for &(s, n) in &sweep.points {
        assert!(n <= 1.05, "s={s}: {n}");
    }
    assert!(sweep.log_slope().abs() < 0.02);
}

#[test]
fn riesz_norm_matches_the_dense_oracle() {
    let opts = NormOptions { power_iterations: 100, tolerance: 1e-8, ..NormOptions::default() };
    let est = |n1: usize| {
        let a = assemble_laplacian(grid1(n1), DIR);
        (riesz_transform_norm(&a, l2(), &opts).unwrap().value, riesz_dense_norm(&a))
    };
    let (coarse, oracle) = est(96);
    assert!((coarse - oracle).abs() <= 0.05 * oracle, "{coarse} vs {oracle}");
    let (fine, _) = est(192);
    assert!((fine - coarse).abs() <= 0.25 * fine, "{coarse} {fine}");
}

#[test]
fn contour_refinement_is_converged() {
    let g = grid1(96);
    let b = assemble_laplacian(Arc::clone(&g), DIR).shifted(1.0).unwrap();
    let v = GridFunction::from_real_fn(Arc::clone(&g), |x| x[0] * (-x[0]).exp());
    for f in standard_family(FAMILY_OMEGA).unwrap() {
        apply_function_checked(&b, &f, &ContourSpec::default(), &v).unwrap();
    }
}

#[test]
fn shifted_inverse_is_the_resolvent() {
    let g = grid1(96);
    let lap = assemble_laplacian(Arc::clone(&g), DIR);
    let mu = 1.0;
    let b = lap.shifted(mu).unwrap();
    let v = GridFunction::from_real_fn(Arc::clone(&g), |x| x[0] * (-0.5 * x[0]).exp());
    for l0 in [0.5, 2.0, 10.0] {
        let got = apply_function(&b, &shifted_inverse(l0, FAMILY_OMEGA).unwrap(), &ContourSpec::default(), &v).unwrap();
        // (λ₀ + μ − Δ)⁻¹ v
        let want = resolvent_solve(&lap, c(l0 + mu), &v).unwrap();
        assert!(rel_err(got.values(), want.values()) < 1e-6, "λ₀={l0}");
    }
}
