//! Power-weighted norms on the half-line: closed forms, Hardy ratios and traces.

use std::sync::Arc;

use pullback::spaces::{
    embedding_check, hardy_check, hardy_constant, lp_norm, normal_trace_eval, sobolev_norm,
    trace_eval, GridFunction, GridSpec, HalfSpaceGrid, NormSpec,
};

fn main() -> pullback::Result<()> {
    let g = Arc::new(HalfSpaceGrid::new(GridSpec { n1: 512, ..GridSpec::default() })?);
    let exp = GridFunction::from_real_fn(Arc::clone(&g), |x| (-x[0]).exp());
    let texp = GridFunction::from_real_fn(Arc::clone(&g), |x| x[0] * (-x[0]).exp());

    for gamma in [0.0, 0.5, 4.0] {
        println!("‖e^-t‖ in L2(t^{gamma}) = {:.6}", lp_norm(&exp, 2.0, gamma)?);
    }
    for k in 0..3 {
        let spec = NormSpec::new(k, 2.0, 0.5)?;
        println!("‖t e^-t‖ in W^({k},2)(t^0.5) = {:.6}", sobolev_norm(&texp, spec)?);
    }

    let (lhs, rhs) = embedding_check(&texp, NormSpec::new(1, 2.0, 2.0)?, 1)?;
    println!("embedding W^(1,2)(t^2) into L2(t^0): {lhs:.6} ≤ C·{rhs:.6}");

    for gamma in [0.0, 0.5, -0.5] {
        let r = hardy_check(&texp, 2.0, gamma, true)?;
        println!(
            "Hardy γ = {gamma:>4}: {:.4} / {:.4} = {:.4} (sharp {:.4})",
            r.lhs, r.rhs, r.ratio, hardy_constant(2.0, gamma)
        );
    }
    let r = hardy_check(&exp, 2.0, 4.0, false)?;
    println!("Hardy γ = 4 without trace condition: ratio {:.4}", r.ratio);

    let cos = GridFunction::from_real_fn(Arc::clone(&g), |x| x[0].cos());
    println!(
        "cos: trace {:.6}, normal trace {:.2e}",
        trace_eval(&cos)?[0].re,
        normal_trace_eval(&cos)?[0].norm()
    );
    Ok(())
}
