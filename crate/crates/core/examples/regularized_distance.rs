//! Regularised distance above a bump and a cone-tipped profile: fixed-point
//! statistics, distance comparability and derivative blow-up slopes.

use std::sync::Arc;

use pullback::geometry::{
    sample_domain_points, verify_blowup_bounds, verify_distance_equivalence, CatalogGraph,
    PullbackMap,
};

fn main() -> pullback::Result<()> {
    let graphs = [
        CatalogGraph::bump(2, 0.1, 1.0)?,
        CatalogGraph::cone_smoothed(2, 0.1, 0.5, 1.0)?,
    ];
    for g in graphs {
        let label = pullback::geometry::BoundaryGraph::label(&g);
        let p = PullbackMap::new(Arc::new(g))?;
        println!("{label}: [O] ≈ {:.4}, L = {:.4}", p.seminorm(), p.lipschitz_scale());

        let r = p.regularized_distance_report(&[0.5, 0.0])?;
        println!(
            "  rho(0.5, 0) = {:.12}  iterations {}  contraction {:.3e}  residual {:.1e}",
            r.value, r.iterations, r.max_contraction, r.residual
        );

        let samples = sample_domain_points(&p, 200, 1e-4, 7)?;
        let (lo, hi) = verify_distance_equivalence(&p, &samples)?;
        println!("  rho / dist in [{lo:.4}, {hi:.4}]");

        let lambda0 = p.graph().holder();
        let rep = verify_blowup_bounds(&p, &[2, 0], 1, lambda0, 8)?;
        for line in &rep.lines {
            println!(
                "  x̃ = {:>4}: h2 slope {:>8.4?}  h1 slope {:>8.4?}",
                line.lateral[0], line.h2_slope, line.h1_slope
            );
        }
        println!(
            "  worst slope {:?} (required ≥ {:.2}): {}",
            rep.worst_slope, rep.required_slope, rep.status()
        );
    }
    Ok(())
}
