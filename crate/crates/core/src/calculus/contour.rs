//! Sector-boundary contour quadrature of `f(A)`.
//!
//! `f(A)v = (1/2πi) ∫ [f(z) z R(z) − f(z̄) z̄ R(z̄)] v du` with `z = e^{u − iν}`,
//! discretised by the trapezoid rule in `u = ln r`. Beyond the truncation radii
//! the sum continues on the same lattice with `z R(z)` replaced by
//! `I + A/z + A²/z²` (large `r`) or `−zA⁻¹ − z²A⁻²` (small `r`), which leaves
//! only scalar series.

use std::f64::consts::{LN_10, PI};
use std::sync::Arc;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::operators::{BandedLu, DiscreteOperator};
use crate::spaces::GridFunction;

use super::functions::SectorFunction;

const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };
/// Contour nodes handled per parallel batch.
const BATCH: usize = 16;
/// Tail series stop once the declared decay has shrunk terms by `e^{-46}`.
const TAIL_DECAY: f64 = 46.0;
/// Relative change accepted by [`apply_function_checked`].
pub const CONTOUR_CHECK_TOL: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ContourSpec {
    /// ray angle `ν ∈ (0, π)`
    pub nu: f64,
    pub r_min: f64,
    pub r_max: f64,
    pub nodes_per_decade: usize,
}

impl Default for ContourSpec {
    fn default() -> Self {
        ContourSpec {
            nu: PI / 4.0,
            r_min: 1e-6,
            r_max: 1e10,
            nodes_per_decade: 12,
        }
    }
}

impl ContourSpec {
    pub fn validate(&self) -> Result<()> {
        if !(self.nu > 0.0 && self.nu < PI) {
            return Err(Error::invalid("nu", "contour angle must lie in (0, π)"));
        }
        if !(self.r_min > 0.0 && self.r_min < self.r_max && self.r_max.is_finite()) {
            return Err(Error::invalid("r_min", "need 0 < r_min < r_max < ∞"));
        }
        if self.nodes_per_decade < 2 {
            return Err(Error::invalid("nodes_per_decade", "at least 2 nodes per decade"));
        }
        Ok(())
    }

    /// Lattice spacing in `ln r`.
    pub fn step(&self) -> f64 {
        LN_10 / self.nodes_per_decade as f64
    }

    /// Nodes on the lower ray `r e^{−iν}`; the upper ray holds their conjugates.
    pub fn nodes(&self) -> Vec<Complex64> {
        let h = self.step();
        let u0 = self.r_min.ln();
        let m = ((self.r_max.ln() - u0) / h).round() as usize;
        (0..=m)
            .map(|j| Complex64::from_polar((u0 + j as f64 * h).exp(), -self.nu))
            .collect()
    }

    /// Twice the nodes per decade and the truncation radii pushed out by two decades.
    pub fn refined(&self) -> Self {
        ContourSpec {
            nu: self.nu,
            r_min: self.r_min / 100.0,
            r_max: self.r_max * 100.0,
            nodes_per_decade: 2 * self.nodes_per_decade,
        }
    }
}

fn two_pi_i() -> Complex64 {
    Complex64::new(0.0, 2.0 * PI)
}

/// Lattice points summed directly before a declared power tail takes over.
const POWER_TAIL_OFFSET: f64 = 60.0;
/// `ln r` beyond which `r` is not representable.
const LN_R_LIMIT: f64 = 700.0;

/// `(1/2πi) Σ h [f(z) z^k − f(z̄) z̄^k]` over lattice points beyond one end.
fn tail_series(
    f: &SectorFunction,
    spec: &ContourSpec,
    upper: bool,
    k: i32,
    edge_u: f64,
) -> Result<Complex64> {
    let h = spec.step();
    let nu = spec.nu;
    let (a, b) = f.decay();
    let rate = if upper { b - k as f64 } else { a + k as f64 };
    let power = if upper { f.power_tail() } else { None };
    let terms = match power {
        Some(_) => (POWER_TAIL_OFFSET / h).ceil() as usize,
        None => {
            let t = ((TAIL_DECAY / (rate * h)).ceil() as usize).max(10);
            if upper && edge_u + t as f64 * h > LN_R_LIMIT {
                return Err(Error::Unsupported(format!(
                    "{} decays too slowly at infinity for the contour tail",
                    f.label()
                )));
            }
            t
        }
    };
    let mut acc = ZERO;
    for m in 1..=terms {
        let u = if upper {
            edge_u + m as f64 * h
        } else {
            edge_u - m as f64 * h
        };
        let z = Complex64::from_polar(u.exp(), -nu);
        let zb = z.conj();
        acc += f.eval(z) * z.powi(k) - f.eval(zb) * zb.powi(k);
    }
    if let Some((c, w)) = power {
        // Σ_{m > terms} c [e^{(w+k)(u_m − iν)} − e^{(w+k)(u_m + iν)}]
        let e = w + k as f64;
        let i = Complex64::new(0.0, 1.0);
        let u1 = edge_u + (terms + 1) as f64 * h;
        let first = (e * u1).exp();
        let ratio = (e * h).exp();
        acc += c * first / (1.0 - ratio) * ((-i * e * nu).exp() - (i * e * nu).exp());
    }
    Ok(acc * h / two_pi_i())
}

fn is_real(a: &DiscreteOperator) -> bool {
    let m = a.matrix();
    (0..m.dim()).all(|i| m.row(i).all(|(_, v)| v.im == 0.0))
}

/// `f(A)v` for every function and vector, sharing one factorization per node.
///
/// Returns `out[f][v]`. The reduction runs in node order regardless of the
/// thread count.
pub fn apply_functions(
    a: &DiscreteOperator,
    fs: &[SectorFunction],
    contour: &ContourSpec,
    vs: &[Vec<Complex64>],
) -> Result<Vec<Vec<Vec<Complex64>>>> {
    contour.validate()?;
    let n = a.grid().len();
    for f in fs {
        if !(contour.nu < f.omega()) {
            return Err(Error::invalid(
                "contour",
                format!("ν = {} not inside the sector of {}", contour.nu, f.label()),
            ));
        }
    }
    if vs.iter().any(|v| v.len() != n) {
        return Err(Error::invalid("v", "vector length differs from the grid"));
    }
    let nodes = contour.nodes();
    let h = contour.step();
    let real = is_real(a);
    let mut out = vec![vec![vec![ZERO; n]; vs.len()]; fs.len()];
    if fs.is_empty() || vs.is_empty() {
        return Ok(out);
    }
    let conj_vs: Vec<Vec<Complex64>> = vs.iter().map(|v| v.iter().map(|z| z.conj()).collect()).collect();
    for batch in nodes.chunks(BATCH) {
        let solved: Result<Vec<Vec<(Vec<Complex64>, Vec<Complex64>)>>> = batch
            .par_iter()
            .map(|&z| {
                let lu = BandedLu::factor(&a.matrix().shifted_negation(z))
                    .ok_or(Error::NearSpectrum { z })?;
                if real {
                    Ok(vs
                        .iter()
                        .zip(&conj_vs)
                        .map(|(v, cv)| {
                            let lower = lu.solve(v);
                            let upper = lu.solve(cv).into_iter().map(|w| w.conj()).collect();
                            (lower, upper)
                        })
                        .collect())
                } else {
                    let lub = BandedLu::factor(&a.matrix().shifted_negation(z.conj()))
                        .ok_or(Error::NearSpectrum { z: z.conj() })?;
                    Ok(vs.iter().map(|v| (lu.solve(v), lub.solve(v))).collect())
                }
            })
            .collect();
        for (z, per_v) in batch.iter().zip(solved?) {
            let zb = z.conj();
            for (fi, f) in fs.iter().enumerate() {
                let wl = f.eval(*z) * z * h / two_pi_i();
                let wu = -f.eval(zb) * zb * h / two_pi_i();
                for (vi, (lo, up)) in per_v.iter().enumerate() {
                    let acc = &mut out[fi][vi];
                    for k in 0..n {
                        acc[k] += wl * lo[k] + wu * up[k];
                    }
                }
            }
        }
    }
    // asymptotic tails
    let u_lo = nodes[0].norm().ln();
    let u_hi = nodes[nodes.len() - 1].norm().ln();
    let m = a.matrix();
    let inv = BandedLu::factor(m).ok_or(Error::NearSpectrum { z: ZERO })?;
    let tails: Result<Vec<[Complex64; 5]>> = fs
        .par_iter()
        .map(|f| {
            Ok([
                tail_series(f, contour, true, 0, u_hi)?,
                tail_series(f, contour, true, -1, u_hi)?,
                tail_series(f, contour, true, -2, u_hi)?,
                tail_series(f, contour, false, 1, u_lo)?,
                tail_series(f, contour, false, 2, u_lo)?,
            ])
        })
        .collect();
    let tails = tails?;
    for (vi, v) in vs.iter().enumerate() {
        let av = m.matvec(v);
        let aav = m.matvec(&av);
        let iv = inv.solve(v);
        let iiv = inv.solve(&iv);
        for (fi, &[c0, c1, c2, d1, d2]) in tails.iter().enumerate() {
            let acc = &mut out[fi][vi];
            for k in 0..n {
                acc[k] += c0 * v[k] + c1 * av[k] + c2 * aav[k] - d1 * iv[k] - d2 * iiv[k];
            }
        }
    }
    Ok(out)
}

/// `f(A)v` by contour quadrature.
pub fn apply_function(
    a: &DiscreteOperator,
    f: &SectorFunction,
    contour: &ContourSpec,
    v: &GridFunction,
) -> Result<GridFunction> {
    let mut out = apply_functions(a, std::slice::from_ref(f), contour, std::slice::from_ref(&v.values().to_vec()))?;
    GridFunction::new(Arc::clone(v.grid()), out.pop().unwrap().pop().unwrap())
}

/// [`apply_function`] with a convergence check against [`ContourSpec::refined`].
pub fn apply_function_checked(
    a: &DiscreteOperator,
    f: &SectorFunction,
    contour: &ContourSpec,
    v: &GridFunction,
) -> Result<GridFunction> {
    let coarse = apply_function(a, f, contour, v)?;
    let fine = apply_function(a, f, &contour.refined(), v)?;
    let diff: f64 = coarse
        .values()
        .iter()
        .zip(fine.values())
        .map(|(x, y)| (x - y).norm_sqr())
        .sum::<f64>()
        .sqrt();
    let scale: f64 = fine.values().iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    let rel = if scale > 0.0 { diff / scale } else { diff };
    if rel > CONTOUR_CHECK_TOL {
        return Err(Error::NoConvergence {
            iterations: contour.nodes().len(),
            residual: rel,
        });
    }
    Ok(fine)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::calculus::functions::{rational_family, shifted_inverse, FAMILY_OMEGA};
    use crate::operators::{
        assemble_laplacian, resolvent_solve, BoundaryCondition, CsrMatrix, OperatorLabel,
    };
    use crate::spaces::{GridSpec, HalfSpaceGrid};

    fn grid(n1: usize) -> Arc<HalfSpaceGrid> {
        Arc::new(
            HalfSpaceGrid::new(GridSpec {
                n1,
                ..GridSpec::default()
            })
            .unwrap(),
        )
    }

    #[test]
    fn identity_operator_gives_scalar_values() {
        let g = grid(64);
        let a = DiscreteOperator::from_parts(
            Arc::clone(&g),
            CsrMatrix::identity(g.len()),
            BoundaryCondition::Dirichlet,
            OperatorLabel::Laplacian,
        )
        .unwrap();
        let f = &rational_family(FAMILY_OMEGA).unwrap()[0];
        let v = GridFunction::from_real_fn(Arc::clone(&g), |x| x[0].cos());
        let u = apply_function(&a, f, &ContourSpec::default(), &v).unwrap();
        for (x, y) in u.values().iter().zip(v.values()) {
            assert!((x - y * 0.25).norm() < 1e-9);
        }
    }

    #[test]
    fn shifted_inverse_reproduces_the_resolvent() {
        let g = grid(64);
        let a = assemble_laplacian(Arc::clone(&g), BoundaryCondition::Dirichlet)
            .shifted(1.0)
            .unwrap();
        let v = GridFunction::from_real_fn(Arc::clone(&g), |x| x[0] * (-x[0]).exp());
        let f = shifted_inverse(2.0, FAMILY_OMEGA).unwrap();
        let u = apply_function_checked(&a, &f, &ContourSpec::default(), &v).unwrap();
        // (2 + A)⁻¹ = −R(−2, A)
        let w = resolvent_solve(&a, Complex64::new(-2.0, 0.0), &v).unwrap();
        let scale = w.values().iter().map(|z| z.norm()).fold(0.0, f64::max);
        for (x, y) in u.values().iter().zip(w.values()) {
            assert!((x + y).norm() < 1e-6 * scale);
        }
    }
}
