//! The boundary-flattening map `Ψ(x) = (ρ(x), x̃)` built from a regularised distance.

use std::sync::Arc;

use crate::error::{Error, Result};

use super::graph::BoundaryGraph;
use super::mollifier::{MollifierSpec, DEFAULT_ORDER, HALF_WIDTH};
use super::seminorm::{multi_indices, seminorm_parts};

/// Construction parameters for [`PullbackMap`].
#[derive(Debug, Clone)]
pub struct PullbackOptions {
    /// Gauss–Legendre nodes per axis (and per smooth piece in `d = 2`).
    pub quad_order: usize,
    pub fp_tol: f64,
    pub fp_max_iter: usize,
    /// Picard relaxation `ω ∈ (0, 1]`.
    pub damping: f64,
    pub seminorm_samples: usize,
    /// Overrides the automatic choice of `L`; must still satisfy the Lipschitz bound.
    pub lipschitz_scale: Option<f64>,
    /// Smallest normal coordinate at which derivatives are evaluated.
    pub min_normal: f64,
}

impl Default for PullbackOptions {
    fn default() -> Self {
        PullbackOptions {
            quad_order: DEFAULT_ORDER,
            fp_tol: 1e-12,
            fp_max_iter: 200,
            damping: 1.0,
            seminorm_samples: 4096,
            lipschitz_scale: None,
            min_normal: 1e-10,
        }
    }
}

/// Outcome of one fixed-point solve for `ρ(x)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FixedPointReport {
    pub value: f64,
    pub iterations: usize,
    /// Largest observed ratio of successive Picard steps (0 if fewer than two steps).
    pub max_contraction: f64,
    /// `|ρ + h₂(ρ, x̃) − x₁|` at the returned value.
    pub residual: f64,
}

/// First and second derivatives of `ρ` in the original coordinates.
#[derive(Debug, Clone, PartialEq)]
pub struct RhoDerivatives {
    pub gradient: Vec<f64>,
    pub hessian: Vec<Vec<f64>>,
}

impl RhoDerivatives {
    /// `∇h₁ = e₁ − ∇ρ`.
    pub fn h1_gradient(&self) -> Vec<f64> {
        let mut g: Vec<f64> = self.gradient.iter().map(|v| -v).collect();
        g[0] += 1.0;
        g
    }

    /// `Δh₁ = −Δρ`.
    pub fn h1_laplacian(&self) -> f64 {
        -(0..self.hessian.len()).map(|i| self.hessian[i][i]).sum::<f64>()
    }
}

/// `Ψ`, `Ψ⁻¹`, `ρ`, `h₁` and `h₂` for a special domain above a boundary graph.
#[derive(Debug, Clone)]
pub struct PullbackMap {
    graph: Arc<dyn BoundaryGraph>,
    mollifier: MollifierSpec,
    l: f64,
    fp_tol: f64,
    fp_max_iter: usize,
    damping: f64,
    min_normal: f64,
    ell: usize,
    seminorm: f64,
    lipschitz_norm: f64,
}

fn binomial(n: usize, k: usize) -> f64 {
    let mut b = 1.0;
    for i in 0..k {
        b = b * (n - i) as f64 / (i + 1) as f64;
    }
    b
}

fn factorial(n: usize) -> f64 {
    (1..=n).map(|k| k as f64).product()
}

/// A term `c · w^p · ψ^{(j)}(w)` of a transferred kernel.
#[derive(Debug, Clone, Copy)]
struct KernelTerm {
    coeff: f64,
    power: usize,
    deriv: usize,
}

/// Kernel for `∂_s^{b1} ∂_x^{b2}` of `∫ g(x − s z) ψ(z) dz`, written as
/// `s^{-(b1+b2)} ∫ g(x − s w) Θ(w) dw`.
fn transfer_kernel(b1: usize, b2: usize) -> Vec<KernelTerm> {
    let mut terms = vec![KernelTerm {
        coeff: 1.0,
        power: 0,
        deriv: b2,
    }];
    let mut k = 1 + b2;
    for _ in 0..b1 {
        let mut next = Vec::with_capacity(2 * terms.len());
        for t in &terms {
            next.push(KernelTerm {
                coeff: -((k + t.power) as f64) * t.coeff,
                ..*t
            });
            next.push(KernelTerm {
                coeff: -t.coeff,
                power: t.power + 1,
                deriv: t.deriv + 1,
            });
        }
        // merge equal (power, deriv) pairs
        next.sort_by_key(|t| (t.power, t.deriv));
        let mut merged: Vec<KernelTerm> = Vec::with_capacity(next.len());
        for t in next {
            match merged.last_mut() {
                Some(m) if m.power == t.power && m.deriv == t.deriv => m.coeff += t.coeff,
                _ => merged.push(t),
            }
        }
        terms = merged;
        k += 1;
    }
    terms
}

impl PullbackMap {
    pub fn new(graph: Arc<dyn BoundaryGraph>) -> Result<Self> {
        Self::with_options(graph, PullbackOptions::default())
    }

    pub fn with_options(graph: Arc<dyn BoundaryGraph>, opts: PullbackOptions) -> Result<Self> {
        let d = graph.dim();
        if d < 2 {
            return Err(Error::invalid("dim", "boundary graphs need d ≥ 2"));
        }
        if !(opts.fp_tol > 0.0) {
            return Err(Error::invalid("fp_tol", "must be positive"));
        }
        if opts.fp_max_iter == 0 {
            return Err(Error::invalid("fp_max_iter", "must be positive"));
        }
        if !(opts.damping > 0.0 && opts.damping <= 1.0) {
            return Err(Error::invalid("damping", "must lie in (0, 1]"));
        }
        let mollifier = MollifierSpec::new(d - 1, opts.quad_order)?;
        let ell = graph.smoothness().min(graph.max_deriv_order()).min(4);
        let parts = seminorm_parts(graph.as_ref(), ell, graph.holder(), opts.seminorm_samples)?;
        let seminorm = parts.total();
        // ‖h‖_{C^{0,1}}: sup |h| plus the Lipschitz constant
        let lipschitz_norm = if ell >= 1 {
            seminorm_parts(graph.as_ref(), 1, 0.0, opts.seminorm_samples)?.sup_part
        } else if graph.holder() >= 1.0 {
            seminorm_parts(graph.as_ref(), 0, 1.0, opts.seminorm_samples)?.total()
        } else {
            return Err(Error::invalid("graph", "the boundary graph must be Lipschitz"));
        };
        let floor = 2.0 * std::f64::consts::SQRT_2 * (1.0 + lipschitz_norm);
        let l = match opts.lipschitz_scale {
            Some(l) => {
                if !(l >= floor * (1.0 - 1e-12)) {
                    return Err(Error::invalid(
                        "lipschitz_scale",
                        format!("L = {l} is below 2√2(1 + [O]_C^(0,1)) = {floor:.6}"),
                    ));
                }
                l
            }
            None if seminorm <= 1.0 => 4.0 * std::f64::consts::SQRT_2,
            None => 2.0 * std::f64::consts::SQRT_2 * (1.0 + seminorm.max(lipschitz_norm)) * 1.05,
        };
        Ok(PullbackMap {
            graph,
            mollifier,
            l,
            fp_tol: opts.fp_tol,
            fp_max_iter: opts.fp_max_iter,
            damping: opts.damping,
            min_normal: opts.min_normal,
            ell,
            seminorm,
            lipschitz_norm,
        })
    }

    pub fn graph(&self) -> &dyn BoundaryGraph {
        self.graph.as_ref()
    }

    pub fn graph_arc(&self) -> Arc<dyn BoundaryGraph> {
        Arc::clone(&self.graph)
    }

    pub fn mollifier(&self) -> &MollifierSpec {
        &self.mollifier
    }

    pub fn dim(&self) -> usize {
        self.graph.dim()
    }

    /// The scale `L` in `h₂(τ, x̃) = ∫ h(x̃ − (τ/L) z̃) ϕ(z̃) dz̃`.
    pub fn lipschitz_scale(&self) -> f64 {
        self.l
    }

    pub fn fp_tol(&self) -> f64 {
        self.fp_tol
    }

    pub fn min_normal(&self) -> f64 {
        self.min_normal
    }

    /// Cached `[O]_{C^{ℓ,λ}}` estimate used for the choice of `L`.
    pub fn seminorm(&self) -> f64 {
        self.seminorm
    }

    /// Cached `[O]_{C^{0,1}}` estimate.
    pub fn lipschitz_seminorm(&self) -> f64 {
        self.lipschitz_norm
    }

    /// `∫ g(x − s w) k(w) dw` over `|w| < 1/√2`, split at the kinks of `g`.
    fn integrate_1d(&self, x: f64, s: f64, g: &dyn Fn(f64) -> f64, k: &dyn Fn(f64) -> f64) -> f64 {
        let a = HALF_WIDTH;
        if x.abs() - a * s.abs() > self.graph.support_radius() {
            return 0.0;
        }
        let mut cuts = vec![-a, a];
        if s != 0.0 {
            for p in self.graph.breakpoints() {
                for q in [p, -p] {
                    let z = (x - q) / s;
                    if z.abs() < a {
                        cuts.push(z);
                    }
                }
            }
        }
        cuts.sort_by(|u, v| u.partial_cmp(v).unwrap());
        cuts.dedup_by(|u, v| (*u - *v).abs() < 1e-15);
        let (nodes, weights) = self.mollifier.base_rule();
        let mut acc = 0.0;
        for piece in cuts.windows(2) {
            let (lo, hi) = (piece[0], piece[1]);
            let half = 0.5 * (hi - lo);
            let mid = 0.5 * (hi + lo);
            if half <= 0.0 {
                continue;
            }
            let mut part = 0.0;
            for (t, w) in nodes.iter().zip(weights) {
                let z = mid + half * t;
                let kv = k(z);
                if kv != 0.0 {
                    part += w * g(x - s * z) * kv;
                }
            }
            acc += half * part;
        }
        acc
    }

    /// `h₂(τ, x̃)`.
    pub fn h2(&self, tau: f64, xt: &[f64]) -> f64 {
        debug_assert_eq!(xt.len(), self.dim() - 1);
        let s = tau / self.l;
        if xt.len() == 1 {
            let g = |u: f64| self.graph.eval(&[u]);
            let k = |z: f64| self.mollifier.phi(&[z]);
            return self.integrate_1d(xt[0], s, &g, &k);
        }
        let (pts, wts) = self.mollifier.lateral_rule();
        let n = xt.len();
        let mut buf = vec![0.0; n];
        let mut acc = 0.0;
        for (z, w) in pts.chunks_exact(n).zip(wts) {
            for k in 0..n {
                buf[k] = xt[k] - s * z[k];
            }
            acc += w * self.graph.eval(&buf);
        }
        acc
    }

    /// `∂_τ^{a} ∂_{x̃}^{lat} h₂(τ, x̃)`, all derivatives placed on `h` (valid up to order `ℓ`).
    fn h2_partial_direct(&self, a: usize, lat: &[usize], tau: f64, xt: &[f64]) -> f64 {
        let s = tau / self.l;
        let pref = (-1.0 / self.l).powi(a as i32);
        if xt.len() == 1 {
            let order = a + lat[0];
            let g = |u: f64| self.graph.deriv(&[order], &[u]);
            let k = |z: f64| z.powi(a as i32) * self.mollifier.phi(&[z]);
            return pref * self.integrate_1d(xt[0], s, &g, &k);
        }
        let n = xt.len();
        let (pts, wts) = self.mollifier.lateral_rule();
        let mut buf = vec![0.0; n];
        let mut total = 0.0;
        let fa = factorial(a);
        for nu in multi_indices(n, a) {
            let coeff = fa / nu.iter().map(|&v| factorial(v)).product::<f64>();
            let beta: Vec<usize> = nu.iter().zip(lat).map(|(p, q)| p + q).collect();
            let mut acc = 0.0;
            for (z, w) in pts.chunks_exact(n).zip(wts) {
                let mut mono = 1.0;
                for k in 0..n {
                    buf[k] = xt[k] - s * z[k];
                    mono *= z[k].powi(nu[k] as i32);
                }
                if mono != 0.0 {
                    acc += w * mono * self.graph.deriv(&beta, &buf);
                }
            }
            total += coeff * acc;
        }
        pref * total
    }

    /// Derivatives beyond order `ℓ` for `d = 2`: the excess is moved onto the kernel.
    fn h2_partial_transfer(&self, a: usize, b: usize, tau: f64, x: f64) -> f64 {
        let ell = self.ell;
        let beta2 = b.min(ell);
        let beta1 = a.min(ell - beta2);
        let (b1, b2) = (a - beta1, b - beta2);
        if b1 == 0 && b2 == 0 {
            return self.h2_partial_direct(a, &[b], tau, &[x]);
        }
        let s = tau / self.l;
        let terms = transfer_kernel(b1, b2);
        let max_deriv = terms.iter().map(|t| t.deriv).max().unwrap_or(0);
        let order = beta1 + beta2;
        let g = |u: f64| self.graph.deriv(&[order], &[u]);
        let kern = |w: f64| -> f64 {
            let jet = self.mollifier.phi_jet(w, max_deriv);
            if jet[0] == 0.0 {
                return 0.0;
            }
            // ψ(w) = w^{β₁} ϕ(w), derivatives by Leibniz
            let psi = |j: usize| -> f64 {
                let mut acc = 0.0;
                for i in 0..=j.min(beta1) {
                    let mono = factorial(beta1) / factorial(beta1 - i) * w.powi((beta1 - i) as i32);
                    acc += binomial(j, i) * mono * jet[j - i];
                }
                acc
            };
            terms
                .iter()
                .map(|t| t.coeff * w.powi(t.power as i32) * psi(t.deriv))
                .sum()
        };
        let pref = (-1.0 / self.l).powi(beta1 as i32)
            * self.l.powi(-(b1 as i32))
            * s.powi(-((b1 + b2) as i32));
        pref * self.integrate_1d(x, s, &g, &kern)
    }

    fn h2_partial(&self, a: usize, lat: &[usize], tau: f64, xt: &[f64]) -> Result<f64> {
        let order = a + lat.iter().sum::<usize>();
        if order <= self.ell {
            return Ok(self.h2_partial_direct(a, lat, tau, xt));
        }
        if !(tau > 0.0) {
            return Err(Error::OutsideDomain(format!(
                "derivatives of order {order} > ℓ need τ > 0, got {tau}"
            )));
        }
        if xt.len() != 1 {
            return Err(Error::Unsupported(format!(
                "derivatives of h₂ beyond order ℓ = {} are implemented for d = 2 only",
                self.ell
            )));
        }
        Ok(self.h2_partial_transfer(a, lat[0], tau, xt[0]))
    }

    /// `∂^α h₂(y)` with `α = (α₁, α̃)` and `y₁ > 0`.
    pub fn h2_deriv(&self, alpha: &[usize], y: &[f64]) -> Result<f64> {
        self.check_point(y)?;
        if alpha.len() != self.dim() {
            return Err(Error::invalid("alpha", "multi-index length must equal d"));
        }
        if !(y[0] > 0.0) {
            return Err(Error::OutsideDomain(format!("y₁ = {} must be positive", y[0])));
        }
        self.h2_partial(alpha[0], &alpha[1..], y[0], &y[1..])
    }

    fn check_point(&self, x: &[f64]) -> Result<()> {
        if x.len() != self.dim() {
            return Err(Error::invalid(
                "point",
                format!("expected {} coordinates, got {}", self.dim(), x.len()),
            ));
        }
        if x.iter().any(|v| !v.is_finite()) {
            return Err(Error::invalid("point", "coordinates must be finite"));
        }
        Ok(())
    }

    /// Solve `ρ = x₁ − h₂(ρ, x̃)` and report iteration statistics.
    pub fn regularized_distance_report(&self, x: &[f64]) -> Result<FixedPointReport> {
        self.check_point(x)?;
        let x1 = x[0];
        let xt = &x[1..];
        let lat0 = vec![0usize; xt.len()];
        let newton = self.ell >= 1;
        let mut tau = x1 - self.graph.eval(xt);
        let mut residual = (tau + self.h2(tau, xt) - x1).abs();
        let mut max_ratio: f64 = 0.0;
        let mut prev_step: Option<f64> = None;
        let mut it = 0;
        while residual > self.fp_tol && it < self.fp_max_iter {
            it += 1;
            let next = (1.0 - self.damping) * tau + self.damping * (x1 - self.h2(tau, xt));
            let step = (next - tau).abs();
            if let Some(p) = prev_step {
                if p > 1e-13 {
                    max_ratio = max_ratio.max(step / p);
                }
            }
            prev_step = Some(step);
            tau = next;
            residual = (tau + self.h2(tau, xt) - x1).abs();
            if newton && step < 1e-8 {
                break;
            }
        }
        while residual > self.fp_tol && it < self.fp_max_iter {
            it += 1;
            let e = tau + self.h2(tau, xt) - x1;
            let de = 1.0 + self.h2_partial_direct(1, &lat0, tau, xt);
            tau -= e / de;
            residual = (tau + self.h2(tau, xt) - x1).abs();
        }
        if residual > self.fp_tol {
            return Err(Error::NoConvergence {
                iterations: it,
                residual,
            });
        }
        Ok(FixedPointReport {
            value: tau,
            iterations: it,
            max_contraction: max_ratio,
            residual,
        })
    }

    /// The regularised distance `ρ(x)`, signed like the distance to the boundary.
    pub fn regularized_distance(&self, x: &[f64]) -> Result<f64> {
        self.regularized_distance_report(x).map(|r| r.value)
    }

    /// `G(x, τ) = ∫ g(x − (τ/L) z) φ(z) dz` with `g(x) = x₁ − h(x̃)` by full `d`-dimensional quadrature.
    pub fn mollified_g(&self, x: &[f64], tau: f64) -> Result<f64> {
        self.check_point(x)?;
        let s = tau / self.l;
        let n = self.dim() - 1;
        let (nodes, weights) = self.mollifier.base_rule();
        let (pts, wts) = self.mollifier.lateral_rule();
        let mut buf = vec![0.0; n];
        let mut acc = 0.0;
        for (t, wt) in nodes.iter().zip(weights) {
            let z1 = t * HALF_WIDTH;
            let we = wt * HALF_WIDTH * self.mollifier.eta(z1);
            if we == 0.0 {
                continue;
            }
            for (z, w) in pts.chunks_exact(n).zip(wts) {
                for k in 0..n {
                    buf[k] = x[1 + k] - s * z[k];
                }
                acc += we * w * ((x[0] - s * z1) - self.graph.eval(&buf));
            }
        }
        Ok(acc)
    }

    /// `Ψ(x) = (ρ(x), x̃)` for `x` above the graph.
    pub fn psi(&self, x: &[f64]) -> Result<Vec<f64>> {
        self.check_point(x)?;
        if !(x[0] > self.graph.eval(&x[1..])) {
            return Err(Error::OutsideDomain(format!(
                "x₁ = {} is not above the boundary value {}",
                x[0],
                self.graph.eval(&x[1..])
            )));
        }
        let rho = self.regularized_distance(x)?;
        let mut y = x.to_vec();
        y[0] = rho;
        Ok(y)
    }

    /// `Ψ⁻¹(y) = (y₁ + h₂(y), ỹ)` for `y₁ > 0`.
    pub fn psi_inverse(&self, y: &[f64]) -> Result<Vec<f64>> {
        self.check_point(y)?;
        if !(y[0] > 0.0) {
            return Err(Error::OutsideDomain(format!("y₁ = {} must be positive", y[0])));
        }
        let mut x = y.to_vec();
        x[0] = y[0] + self.h2(y[0], &y[1..]);
        Ok(x)
    }

    /// `h₁(x) = x₁ − ρ(x)`.
    pub fn h1(&self, x: &[f64]) -> Result<f64> {
        Ok(x[0] - self.regularized_distance(x)?)
    }

    /// Derivatives of `ρ` at `x = Ψ⁻¹(y)`, using `ρ(x) = y₁` (no fixed-point solve).
    pub fn rho_derivatives_at_image(&self, y: &[f64]) -> Result<RhoDerivatives> {
        self.check_point(y)?;
        if !(y[0] >= self.min_normal) {
            return Err(Error::OutsideDomain(format!(
                "y₁ = {:e} is below the evaluation floor {:e}",
                y[0], self.min_normal
            )));
        }
        let d = self.dim();
        let n = d - 1;
        let tau = y[0];
        let xt = &y[1..];
        let unit = |j: usize, extra: usize| -> Vec<usize> {
            let mut v = vec![0usize; n];
            if j < n {
                v[j] += 1;
            }
            if extra < n {
                v[extra] += 1;
            }
            v
        };
        let none = n;
        let e_tau = 1.0 + self.h2_partial(1, &vec![0; n], tau, xt)?;
        let e_tautau = self.h2_partial(2, &vec![0; n], tau, xt)?;
        // E_j for j = 0 (the x₁ slot) is −1; lateral E_j = ∂_j h₂
        let mut e_j = vec![-1.0; d];
        let mut e_jtau = vec![0.0; d];
        for j in 0..n {
            e_j[j + 1] = self.h2_partial(0, &unit(j, none), tau, xt)?;
            e_jtau[j + 1] = self.h2_partial(1, &unit(j, none), tau, xt)?;
        }
        let grad: Vec<f64> = e_j.iter().map(|ej| -ej / e_tau).collect();
        let mut hess = vec![vec![0.0; d]; d];
        for j in 0..d {
            for k in j..d {
                let e_jk = if j == 0 || k == 0 {
                    0.0
                } else {
                    self.h2_partial(0, &unit(j - 1, k - 1), tau, xt)?
                };
                let v = -(e_jk
                    + e_jtau[j] * grad[k]
                    + e_jtau[k] * grad[j]
                    + e_tautau * grad[j] * grad[k])
                    / e_tau;
                hess[j][k] = v;
                hess[k][j] = v;
            }
        }
        Ok(RhoDerivatives {
            gradient: grad,
            hessian: hess,
        })
    }

    fn rho_derivatives(&self, x: &[f64]) -> Result<RhoDerivatives> {
        let y = self.psi(x)?;
        self.rho_derivatives_at_image(&y)
    }

    /// `∇ρ(x)` for `x` inside the domain.
    pub fn rho_gradient(&self, x: &[f64]) -> Result<Vec<f64>> {
        self.rho_derivatives(x).map(|r| r.gradient)
    }

    /// `∇²ρ(x)` for `x` inside the domain.
    pub fn rho_hessian(&self, x: &[f64]) -> Result<Vec<Vec<f64>>> {
        self.rho_derivatives(x).map(|r| r.hessian)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::graph::CatalogGraph;

    fn bump() -> PullbackMap {
        PullbackMap::new(Arc::new(CatalogGraph::bump(2, 0.1, 1.0).unwrap())).unwrap()
    }

    #[test]
    fn transfer_kernel_has_zero_mass_terms() {
        // ∂_s of s^{-1} ψ(u/s) gives -ψ - wψ'
        let t = transfer_kernel(1, 0);
        assert_eq!(t.len(), 2);
        assert!(t.iter().all(|t| t.coeff == -1.0));
    }

    #[test]
    fn zeroth_derivative_is_value() {
        let p = bump();
        let v = p.h2_deriv(&[0, 0], &[0.3, 0.2]).unwrap();
        assert_eq!(v, p.h2(0.3, &[0.2]));
        assert!((p.h2(0.0, &[0.4]) - p.graph().eval(&[0.4])).abs() < 1e-13);
    }

    #[test]
    fn derivatives_match_differences_of_h2() {
        let p = bump();
        let y = [0.3, 0.5];
        let h = 1e-4;
        let f = |t: f64, x: f64| p.h2(t, &[x]);
        let d_tau = (f(y[0] + h, y[1]) - f(y[0] - h, y[1])) / (2.0 * h);
        let d_x = (f(y[0], y[1] + h) - f(y[0], y[1] - h)) / (2.0 * h);
        assert!((p.h2_deriv(&[1, 0], &y).unwrap() - d_tau).abs() < 1e-8);
        assert!((p.h2_deriv(&[0, 1], &y).unwrap() - d_x).abs() < 1e-8);
        // second derivatives, beyond ℓ = 1
        let d_tt = (f(y[0] + h, y[1]) - 2.0 * f(y[0], y[1]) + f(y[0] - h, y[1])) / (h * h);
        let d_xx = (f(y[0], y[1] + h) - 2.0 * f(y[0], y[1]) + f(y[0], y[1] - h)) / (h * h);
        let d_tx = (f(y[0] + h, y[1] + h) - f(y[0] + h, y[1] - h) - f(y[0] - h, y[1] + h)
            + f(y[0] - h, y[1] - h))
            / (4.0 * h * h);
        assert!((p.h2_deriv(&[2, 0], &y).unwrap() - d_tt).abs() < 1e-5);
        assert!((p.h2_deriv(&[0, 2], &y).unwrap() - d_xx).abs() < 1e-5);
        assert!((p.h2_deriv(&[1, 1], &y).unwrap() - d_tx).abs() < 1e-5);
    }

    #[test]
    fn third_derivative_by_kernel_transfer() {
        let p = bump();
        let y = [0.4, 0.9];
        let h = 1e-3;
        let g = |t: f64| p.h2_deriv(&[2, 0], &[t, y[1]]).unwrap();
        let fd = (g(y[0] + h) - g(y[0] - h)) / (2.0 * h);
        let v = p.h2_deriv(&[3, 0], &y).unwrap();
        assert!((v - fd).abs() < 1e-5 * (1.0 + v.abs()), "{v} vs {fd}");
    }

    #[test]
    fn rejects_nonpositive_normal() {
        let p = bump();
        assert!(p.h2_deriv(&[1, 0], &[0.0, 0.1]).is_err());
        assert!(p.psi_inverse(&[-0.1, 0.0]).is_err());
        assert!(p.psi(&[0.05, 0.0]).is_err());
    }

    #[test]
    fn zero_graph_gives_identity() {
        let p = PullbackMap::new(Arc::new(CatalogGraph::zero(2).unwrap())).unwrap();
        assert_eq!(p.regularized_distance(&[2.0, 0.3]).unwrap(), 2.0);
        assert_eq!(p.regularized_distance(&[-3.0, 0.3]).unwrap(), -3.0);
        let r = p.rho_derivatives_at_image(&[0.5, 0.2]).unwrap();
        assert_eq!(r.gradient, vec![1.0, 0.0]);
        assert!(r.hessian.iter().flatten().all(|&v| v == 0.0));
    }

    #[test]
    fn fixed_point_satisfies_identity() {
        let p = bump();
        let x = [0.5, 0.0];
        let r = p.regularized_distance_report(&x).unwrap();
        assert!(r.residual <= 1e-12);
        assert!((r.value + p.h2(r.value, &[0.0]) - 0.5).abs() <= 1e-12);
        let g = p.mollified_g(&x, r.value).unwrap();
        assert!((g - r.value).abs() < 1e-10);
    }

    #[test]
    fn explicit_scale_is_validated() {
        let g = Arc::new(CatalogGraph::bump(2, 0.5, 1.0).unwrap());
        let opts = PullbackOptions {
            lipschitz_scale: Some(1.0),
            ..Default::default()
        };
        assert!(PullbackMap::with_options(g, opts).is_err());
    }
}
