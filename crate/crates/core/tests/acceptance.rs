//! Acceptance suite: one line per criterion, nonzero exit on any failure.

mod common;

use std::f64::consts::PI;
use std::sync::Arc;
use std::time::Instant;

use pullback::calculus::{
    apply_functions, bip_sweep, hinfty_bound_estimate, hinfty_bound_estimates, rational_family,
    riesz_transform_norm, standard_family, ContourSpec, FractionalPowers, FAMILY_OMEGA,
};
use pullback::evolution::{forcing_catalog, max_reg_ratio, TimeGrid};
use pullback::geometry::{
    distance_ratios, sample_domain_points, verify_blowup_bounds, BoundaryGraph, CatalogGraph,
    PullbackMap, DEFAULT_LATTICE,
};
use pullback::operators::{
    assemble_laplacian, assemble_perturbation, assemble_pullback_laplacian, log_spaced,
    perturbation_coefficients, perturbation_ratio, probe_set, resolvent_solve, sectoriality_scan,
    smooth_trials, BoundaryCondition, DiscreteOperator, NormOptions, OperatorLabel,
};
use pullback::spaces::{
    hardy_check, GridFunction, GridSpec, HalfSpaceGrid, HardyCase, NormSpec,
};

use common::{bump_map, c, grid1, grid2, modal_max_reg_ratio, rel_err, riesz_dense_norm, WeightedEigen};

const DIR: BoundaryCondition = BoundaryCondition::Dirichlet;

type Outcome = (bool, String);

fn l2(gamma: f64) -> NormSpec {
    NormSpec::lebesgue(2.0, gamma).unwrap()
}

fn desk_grid() -> Arc<HalfSpaceGrid> {
    grid2(48, 16)
}

fn pullback_op(grid: &Arc<HalfSpaceGrid>, eps: f64) -> DiscreteOperator {
    assemble_pullback_laplacian(Arc::clone(grid), &bump_map(eps), DIR).unwrap().0
}

fn identity_collapse() -> Outcome {
    let p = PullbackMap::new(Arc::new(CatalogGraph::zero(2).unwrap())).unwrap();
    let mut rho_err = 0.0f64;
    let mut psi_ok = true;
    for x in sample_domain_points(&p, 1000, 1e-3, 21).unwrap() {
        rho_err = rho_err.max((p.regularized_distance(&x).unwrap() - x[0]).abs());
        psi_ok &= p.psi(&x).unwrap() == x;
    }
    let g = desk_grid();
    let (pb, _) = assemble_pullback_laplacian(Arc::clone(&g), &p, DIR).unwrap();
    let lap = assemble_laplacian(Arc::clone(&g), DIR);
    let mut mat_err = 0.0f64;
    for i in 0..g.len() {
        for (j, v) in pb.matrix().row(i) {
            mat_err = mat_err.max((v - lap.matrix().get(i, j)).norm());
        }
        for (j, v) in lap.matrix().row(i) {
            mat_err = mat_err.max((v - pb.matrix().get(i, j)).norm());
        }
    }
    (
        rho_err <= 1e-12 && psi_ok && mat_err <= 1e-12,
        format!("max|ρ−x₁| {rho_err:.1e}, Ψ identity {psi_ok}, matrix diff {mat_err:.1e}"),
    )
}

fn contraction_certificate() -> Outcome {
    let catalog: Vec<Arc<dyn BoundaryGraph>> = vec![
        Arc::new(CatalogGraph::zero(2).unwrap()),
        Arc::new(CatalogGraph::bump(2, 0.02, 1.0).unwrap()),
        Arc::new(CatalogGraph::bump(2, 0.05, 1.0).unwrap()),
        Arc::new(CatalogGraph::bump(2, 0.1, 1.0).unwrap()),
        Arc::new(CatalogGraph::cone_smoothed(2, 0.05, 0.5, 1.0).unwrap()),
        Arc::new(CatalogGraph::cone_smoothed(2, 0.1, 0.5, 1.0).unwrap()),
    ];
    let mut worst = 0.0f64;
    let mut used = 0;
    for g in catalog {
        let p = PullbackMap::new(g).unwrap();
        if p.seminorm() > 1.0 {
            continue;
        }
        used += 1;
        for x in sample_domain_points(&p, 1000, 1e-3, 5).unwrap() {
            worst = worst.max(p.regularized_distance_report(&x).unwrap().max_contraction);
        }
    }
    (used >= 3 && worst <= 0.6, format!("{used} boundaries, worst ratio {worst:.4}"))
}

fn distance_equivalence() -> Outcome {
    let p = bump_map(0.1);
    let samples = sample_domain_points(&p, 1000, 1e-3, 11).unwrap();
    let coarse = distance_ratios(&p, &samples, DEFAULT_LATTICE).unwrap();
    let fine = distance_ratios(&p, &samples, DEFAULT_LATTICE / 2.0).unwrap();
    let lo = coarse.iter().cloned().fold(f64::INFINITY, f64::min);
    let hi = coarse.iter().cloned().fold(0.0, f64::max);
    let drift = coarse.iter().zip(&fine).map(|(a, b)| (a - b).abs() / b).fold(0.0, f64::max);
    (
        lo > 0.0 && hi.is_finite() && drift <= 0.05,
        format!("band [{lo:.4}, {hi:.4}], lattice drift {:.2}%", 100.0 * drift),
    )
}

fn blowup_exponents() -> Outcome {
    let cone = PullbackMap::new(Arc::new(CatalogGraph::cone_smoothed(2, 0.1, 0.5, 1.0).unwrap())).unwrap();
    let rough = verify_blowup_bounds(&cone, &[2, 0], 1, 0.5, 8).unwrap();
    let smooth = verify_blowup_bounds(&bump_map(0.1), &[2, 0], 1, 1.0, 8).unwrap();
    let s1 = rough.worst_slope.unwrap_or(0.0);
    let s2 = smooth.worst_slope.unwrap_or(0.0);
    (
        s1 >= -0.7 && s2 >= -0.2,
        format!("C^{{1,1/2}} slope {s1:.3} (≥ −0.7), C^{{1,1}} slope {s2:.3} (≥ −0.2)"),
    )
}

fn hardy() -> Outcome {
    let g = grid1(512);
    let u = GridFunction::from_real_fn(Arc::clone(&g), |x| x[0] * (-x[0]).exp());
    let r = hardy_check(&u, 2.0, 0.0, true).unwrap();
    let closed = (r.lhs - 0.7071).abs() < 1e-3 && (r.rhs - 0.5).abs() < 1e-3 && (r.ratio - 1.4142).abs() < 1e-3;
    let catalog: [fn(f64) -> f64; 10] = [
        |t| t * (-t).exp(),
        |t| t * t * (-t).exp(),
        |t| t.sin() * (-t).exp(),
        |t| t / (1.0 + t).powi(3),
        |t| t * (-t * t).exp(),
        |t| (2.0 * t).sin() * (-0.5 * t).exp(),
        |t| t.powi(3) * (-t).exp(),
        |t| (1.0 - (-t).exp()) * (-t).exp(),
        |t| t * (-(t - 2.0) * (t - 2.0)).exp(),
        |t| t.atan() * (-t).exp(),
    ];
    let worst = catalog
        .iter()
        .map(|f| {
            let u = GridFunction::from_real_fn(Arc::clone(&g), |x| f(x[0]));
            let r = hardy_check(&u, 2.0, 0.0, true).unwrap();
            assert_eq!(r.case, HardyCase::VanishingTrace);
            r.ratio
        })
        .fold(0.0, f64::max);
    (
        closed && worst <= 2.05,
        format!("(lhs, rhs, ratio) = ({:.4}, {:.4}, {:.4}), catalog max {worst:.4}", r.lhs, r.rhs, r.ratio),
    )
}

fn resolvent_exactness() -> Outcome {
    let err = |g: &HalfSpaceGrid, bc: BoundaryCondition| {
        let g = Arc::new(g.clone());
        let a = assemble_laplacian(Arc::clone(&g), bc);
        let f = GridFunction::from_real_fn(Arc::clone(&g), |x| (-x[0]).exp());
        let u = resolvent_solve(&a, c(1.0), &f).unwrap();
        let exact = |t: f64| match bc {
            BoundaryCondition::Dirichlet => 0.5 * t * (-t).exp(),
            BoundaryCondition::Neumann => 0.5 * (t + 1.0) * (-t).exp(),
        };
        (0..g.len()).map(|k| (u.values()[k].re - exact(g.x1(k))).abs()).fold(0.0, f64::max)
    };
    let mut ok = true;
    let mut parts = Vec::new();
    for bc in [DIR, BoundaryCondition::Neumann] {
        let g1 = HalfSpaceGrid::new(GridSpec { n1: 128, ..GridSpec::default() }).unwrap();
        let g2 = g1.refine().unwrap();
        let g3 = g2.refine().unwrap();
        let e = [err(&g1, bc), err(&g2, bc), err(&g3, bc)];
        let r = [e[0] / e[1], e[1] / e[2]];
        ok &= r.iter().all(|x| (3.4..=4.6).contains(x));
        parts.push(format!("{} ratios {:.2}, {:.2}", bc.name(), r[0], r[1]));
    }
    (ok, parts.join("; "))
}

fn sectoriality() -> Outcome {
    let angles = [PI / 2.0, 3.0 * PI / 4.0, PI - 0.1];
    let radii = log_spaced(1e-2, 1e4, 12);
    let opts = NormOptions::default();
    let base = desk_grid();
    let fine = Arc::new(base.refine().unwrap());
    let mut ok = true;
    let mut parts = Vec::new();
    for eps in [0.0, 0.05] {
        for gamma in [0.5, 2.5] {
            let sup = |g: &Arc<HalfSpaceGrid>| {
                sectoriality_scan(&pullback_op(g, eps), 1.0, &angles, &radii, l2(gamma), &opts)
                    .unwrap()
                    .overall_supremum()
            };
            let (s0, s1) = (sup(&base), sup(&fine));
            ok &= s0.is_finite() && s1.is_finite() && (s0 - s1).abs() <= 0.2 * s1;
            parts.push(format!("ε={eps} γ={gamma}: {s0:.3}→{s1:.3}"));
        }
    }
    (ok, parts.join("; "))
}

fn self_adjoint_calibration() -> Outcome {
    let g = desk_grid();
    let b = assemble_laplacian(Arc::clone(&g), DIR).shifted(1.0).unwrap();
    let probes = probe_set(&g, 8, 1);
    let k = hinfty_bound_estimate(&b, &standard_family(FAMILY_OMEGA).unwrap(), &ContourSpec::default(), &probes, l2(0.0))
        .unwrap()
        .constant;
    let g1 = grid1(96);
    let b1 = assemble_laplacian(Arc::clone(&g1), DIR).shifted(1.0).unwrap();
    let e = WeightedEigen::new(&b1);
    let fam = rational_family(FAMILY_OMEGA).unwrap();
    let vs = probe_set(&g1, 3, 7);
    let out = apply_functions(&b1, &fam, &ContourSpec::default(), &vs).unwrap();
    let mut worst = 0.0f64;
    for (f, per_v) in fam.iter().zip(&out) {
        for (v, got) in vs.iter().zip(per_v) {
            worst = worst.max(rel_err(got, &e.apply(|l| f.eval(c(l)), v)));
        }
    }
    (k <= 1.05 && worst <= 1e-6, format!("constant {k:.4}, oracle error {worst:.1e}"))
}

fn rough_hinfty() -> Outcome {
    let g = desk_grid();
    let fam = standard_family(FAMILY_OMEGA).unwrap();
    let probes = probe_set(&g, 8, 1);
    let specs: Vec<NormSpec> = [(0, 0.5), (0, 1.5), (1, 0.5), (1, 1.5)]
        .iter()
        .map(|&(k, gm)| NormSpec::new(k, 2.0, gm).unwrap())
        .collect();
    let consts = |eps: f64| -> Vec<f64> {
        let b = pullback_op(&g, eps).shifted(1.0).unwrap();
        hinfty_bound_estimates(&b, &fam, &ContourSpec::default(), &probes, &specs)
            .unwrap()
            .iter()
            .map(|r| r.constant)
            .collect()
    };
    let (k0, k1) = (consts(0.0), consts(0.05));
    let mut ok = true;
    let mut parts = Vec::new();
    for ((s, a), b) in specs.iter().zip(&k0).zip(&k1) {
        ok &= *b <= 2.0 * a && *a <= 2.0 * b;
        parts.push(format!("k={} γ={}: {a:.3}/{b:.3}", s.k, s.gamma));
    }
    (ok, parts.join("; "))
}

fn perturbation_linearity() -> Outcome {
    let g = grid2(48, 32);
    let a = assemble_laplacian(Arc::clone(&g), DIR).shifted(1.0).unwrap();
    let trials = smooth_trials(Arc::clone(&g), DIR, 16, 1);
    let eta = |eps: f64| {
        let coeffs = perturbation_coefficients(&g, &bump_map(eps)).unwrap();
        let b = assemble_perturbation(Arc::clone(&g), &coeffs, DIR, OperatorLabel::PullbackLaplacian).unwrap();
        perturbation_ratio(&b, &a, &trials, l2(0.5)).unwrap()
    };
    let mut ok = true;
    let mut parts = Vec::new();
    for eps in [0.0125, 0.025, 0.05] {
        let r = eta(2.0 * eps) / eta(eps);
        ok &= (1.5..=2.5).contains(&r);
        parts.push(format!("ε={eps}: {r:.3}"));
    }
    (ok, parts.join("; "))
}

fn fractional_algebra() -> Outcome {
    let g = grid1(96);
    let b = assemble_laplacian(Arc::clone(&g), DIR).shifted(0.5).unwrap();
    let e = WeightedEigen::new(&b);
    let pw = FractionalPowers::new(&b).unwrap();
    let v = probe_set(&g, 1, 4).pop().unwrap();
    let half_inv = pw.inverse_apply(0.5, &v).unwrap();
    let oracle = rel_err(&half_inv, &e.apply(|l| c(l.powf(-0.5)), &v));
    let quarter = rel_err(&pw.inverse_apply(0.25, &pw.inverse_apply(0.25, &v).unwrap()).unwrap(), &half_inv);
    let square = rel_err(&pw.apply(0.5, &pw.apply(0.5, &v).unwrap()).unwrap(), &b.apply_values(&v));
    (
        oracle <= 1e-6 && quarter <= 1e-5 && square <= 1e-5,
        format!("oracle {oracle:.1e}, quarter-squared {quarter:.1e}, half-squared {square:.1e}"),
    )
}

fn riesz() -> Outcome {
    let opts = NormOptions { power_iterations: 100, tolerance: 1e-8, ..NormOptions::default() };
    let norms = |gamma: f64| -> Vec<f64> {
        [96, 192, 384]
            .iter()
            .map(|&n| riesz_transform_norm(&assemble_laplacian(grid1(n), DIR), l2(gamma), &opts).unwrap().value)
            .collect()
    };
    let mut ok = true;
    let mut parts = Vec::new();
    for gamma in [0.0, 2.5] {
        let v = norms(gamma);
        let stable = v.iter().all(|x| x.is_finite()) && v.windows(2).all(|w| (w[0] - w[1]).abs() <= 0.25 * w[1]);
        ok &= stable;
        parts.push(format!("γ={gamma}: {:.3}, {:.3}, {:.3}", v[0], v[1], v[2]));
    }
    let a = assemble_laplacian(grid1(96), DIR);
    let (est, dense) = (riesz_transform_norm(&a, l2(0.0), &opts).unwrap().value, riesz_dense_norm(&a));
    ok &= (est - dense).abs() <= 0.05 * dense;
    parts.push(format!("oracle {dense:.4} vs {est:.4}"));
    (ok, parts.join("; "))
}

fn maximal_regularity() -> Outcome {
    let mut ok = true;
    let mut parts = Vec::new();
    for a_w in [0.0, 0.5] {
        let tg = TimeGrid::uniform(1.0, 32, 2.0, a_w).unwrap();
        let worst = |n1: usize, tg: &TimeGrid| {
            let g = grid1(n1);
            let a = assemble_laplacian(Arc::clone(&g), DIR);
            forcing_catalog(tg, &g)
                .iter()
                .map(|cf| max_reg_ratio(&a, &cf.samples, tg, l2(0.0)).unwrap())
                .fold(0.0, f64::max)
        };
        let (r0, r1) = (worst(64, &tg), worst(128, &tg.refine()));
        ok &= (r0 - r1).abs() <= 0.15 * r1;
        let g = grid1(64);
        let a = assemble_laplacian(Arc::clone(&g), DIR);
        let e = WeightedEigen::new(&a);
        let mut dev = 0.0f64;
        for cf in forcing_catalog(&tg, &g) {
            let r = max_reg_ratio(&a, &cf.samples, &tg, l2(0.0)).unwrap();
            let m = modal_max_reg_ratio(&e, &cf.samples, &tg);
            dev = dev.max((r - m).abs() / m);
        }
        ok &= dev <= 0.05;
        parts.push(format!("a={a_w}: {r0:.3}→{r1:.3}, oracle dev {:.1e}", dev));
    }
    (ok, parts.join("; "))
}

fn bip_growth() -> Outcome {
    let g = desk_grid();
    let b = pullback_op(&g, 0.05).shifted(1.0).unwrap();
    let probes = probe_set(&g, 8, 1);
    let s: Vec<f64> = (-5..=5).map(|k| k as f64).collect();
    let sweep = bip_sweep(&b, &s, &ContourSpec::default(), &probes, l2(0.5)).unwrap();
    let slope = sweep.log_slope();
    let max = sweep.points.iter().map(|p| p.1).fold(0.0, f64::max);
    (slope <= 0.2 && max.is_finite(), format!("slope {slope:.4}, max ‖A^is‖ {max:.3}"))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 14] = [
        ("identity collapse", identity_collapse),
        ("contraction certificate", contraction_certificate),
        ("distance equivalence", distance_equivalence),
        ("blow-up exponents", blowup_exponents),
        ("Hardy inequality", hardy),
        ("resolvent exactness", resolvent_exactness),
        ("sectoriality scan", sectoriality),
        ("self-adjoint calculus calibration", self_adjoint_calibration),
        ("rough-boundary H∞ constant", rough_hinfty),
        ("perturbation linearity", perturbation_linearity),
        ("fractional-power algebra", fractional_algebra),
        ("Riesz transform", riesz),
        ("maximal regularity", maximal_regularity),
        ("imaginary-power growth", bip_growth),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let (ok, detail) = run();
        if !ok {
            failed += 1;
        }
        println!(
            "criterion {:>2} {}: {name}: {detail} ({:.2}s)",
            i + 1,
            if ok { "PASS" } else { "FAIL" },
            start.elapsed().as_secs_f64()
        );
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
