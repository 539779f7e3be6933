//! Test-side oracles, written independently of the library's numerics.
#![allow(dead_code)]

use std::sync::Arc;

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;

use pullback::evolution::TimeGrid;
use pullback::geometry::{CatalogGraph, PullbackMap};
use pullback::operators::DiscreteOperator;
use pullback::spaces::{GridSpec, HalfSpaceGrid};

pub fn c(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

pub fn grid1(n1: usize) -> Arc<HalfSpaceGrid> {
    Arc::new(HalfSpaceGrid::new(GridSpec { n1, ..GridSpec::default() }).unwrap())
}

/// The two-dimensional desk grid `(0, 8] × [−2, 2)`.
pub fn grid2(n1: usize, n2: usize) -> Arc<HalfSpaceGrid> {
    Arc::new(
        HalfSpaceGrid::new(GridSpec { dim: 2, x_max: 8.0, n1, n2, ..GridSpec::default() }).unwrap(),
    )
}

pub fn bump_map(eps: f64) -> PullbackMap {
    PullbackMap::new(Arc::new(CatalogGraph::bump(2, eps, 1.0).unwrap())).unwrap()
}

/// Adaptive Simpson on `[a, b]` to absolute tolerance `tol`.
pub fn adaptive_simpson(f: &dyn Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
    fn rec(f: &dyn Fn(f64) -> f64, a: f64, b: f64, fa: f64, fm: f64, fb: f64, whole: f64, tol: f64, depth: u32) -> f64 {
        let m = 0.5 * (a + b);
        let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
        let (flm, frm) = (f(lm), f(rm));
        let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
        let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
        let delta = left + right - whole;
        if depth == 0 || delta.abs() <= 15.0 * tol {
            return left + right + delta / 15.0;
        }
        rec(f, a, m, fa, flm, fm, left, tol / 2.0, depth - 1) + rec(f, m, b, fm, frm, fb, right, tol / 2.0, depth - 1)
    }
    // split first so compactly supported integrands are not missed
    let pieces = 64;
    let h = (b - a) / pieces as f64;
    (0..pieces)
        .map(|k| {
            let (x0, x1) = (a + k as f64 * h, a + (k + 1) as f64 * h);
            let xm = 0.5 * (x0 + x1);
            let (f0, fm, f1) = (f(x0), f(xm), f(x1));
            rec(f, x0, x1, f0, fm, f1, h / 6.0 * (f0 + 4.0 * fm + f1), tol / pieces as f64, 40)
        })
        .sum()
}

/// `h₂(τ, x̃) = ∫ h(x̃ − (τ/L) z) ϕ(z) dz` in two dimensions by adaptive quadrature.
pub fn h2_oracle(p: &PullbackMap, tau: f64, xt: f64) -> f64 {
    let l = p.lipschitz_scale();
    let g = p.graph();
    let m = p.mollifier();
    adaptive_simpson(&|z| g.eval(&[xt - tau / l * z]) * m.phi(&[z]), -1.0, 1.0, 1e-13)
}

/// Root of `τ ↦ τ + h₂(τ, x̃) − x₁` by bisection.
pub fn rho_oracle(p: &PullbackMap, x: &[f64], tol: f64) -> f64 {
    let f = |t: f64| t + h2_oracle(p, t, x[1]) - x[0];
    let (mut lo, mut hi) = (0.0, 2.0 * x[0] + 1.0);
    while f(lo) > 0.0 {
        lo -= 1.0;
    }
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if f(mid) > 0.0 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Real dense matrix of the nonnegative operator: `−a` unshifted, `a` once shifted.
pub fn dense_positive(a: &DiscreteOperator) -> DMatrix<f64> {
    let m = a.matrix();
    let n = m.dim();
    let sign = if a.shift().is_some() { 1.0 } else { -1.0 };
    let mut d = DMatrix::zeros(n, n);
    for i in 0..n {
        for (j, v) in m.row(i) {
            d[(i, j)] = sign * v.re;
        }
    }
    d
}

/// Eigendecomposition of an operator self-adjoint in the cell-weighted inner product.
pub struct WeightedEigen {
    pub sqrt_w: DVector<f64>,
    pub vectors: DMatrix<f64>,
    pub values: DVector<f64>,
}

impl WeightedEigen {
    pub fn new(a: &DiscreteOperator) -> Self {
        let b = dense_positive(a);
        let w = a.grid().weights();
        let sqrt_w = DVector::from_iterator(w.len(), w.iter().map(|x| x.sqrt()));
        let n = w.len();
        let mut s = DMatrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                s[(i, j)] = sqrt_w[i] * b[(i, j)] / sqrt_w[j];
            }
        }
        let asym = (&s - s.transpose()).abs().max();
        assert!(asym < 1e-8 * s.abs().max(), "operator is not weighted-symmetric: {asym}");
        let s = (&s + s.transpose()) * 0.5;
        let e = SymmetricEigen::new(s);
        WeightedEigen { sqrt_w, vectors: e.eigenvectors, values: e.eigenvalues }
    }

    /// Modal coefficients `Qᵀ W^{1/2} v`.
    pub fn to_modes(&self, v: &[Complex64]) -> Vec<Complex64> {
        let n = v.len();
        (0..n)
            .map(|k| (0..n).map(|i| self.vectors[(i, k)] * self.sqrt_w[i] * v[i]).sum())
            .collect()
    }

    pub fn from_modes(&self, m: &[Complex64]) -> Vec<Complex64> {
        let n = m.len();
        (0..n)
            .map(|i| (0..n).map(|k| self.vectors[(i, k)] * m[k]).sum::<Complex64>() / self.sqrt_w[i])
            .collect()
    }

    /// `f(B) v` by the spectral theorem.
    pub fn apply(&self, f: impl Fn(f64) -> Complex64, v: &[Complex64]) -> Vec<Complex64> {
        let m: Vec<Complex64> = self.to_modes(v).iter().zip(self.values.iter()).map(|(c, &l)| c * f(l)).collect();
        self.from_modes(&m)
    }

    /// Dense `f(B)` in node coordinates.
    pub fn matrix(&self, f: impl Fn(f64) -> f64) -> DMatrix<f64> {
        let fl = DMatrix::from_diagonal(&self.values.map(f));
        let wi = DMatrix::from_diagonal(&self.sqrt_w.map(|x| 1.0 / x));
        let ws = DMatrix::from_diagonal(&self.sqrt_w);
        wi * &self.vectors * fl * self.vectors.transpose() * ws
    }
}

/// Relative max-norm error.
pub fn rel_err(a: &[Complex64], b: &[Complex64]) -> f64 {
    let scale = b.iter().map(|z| z.norm()).fold(0.0, f64::max).max(1e-300);
    a.iter().zip(b).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max) / scale
}

/// Dirichlet normal derivative on a 1-D grid: three-point nonuniform
/// differences with zero virtual values at `0` and `X`.
pub fn dirichlet_gradient(grid: &HalfSpaceGrid) -> DMatrix<f64> {
    let x = grid.normal_nodes();
    let n = x.len();
    let big_x = grid.x_max();
    let mut d = DMatrix::zeros(n, n);
    for i in 0..n {
        let xl = if i == 0 { 0.0 } else { x[i - 1] };
        let xr = if i + 1 == n { big_x } else { x[i + 1] };
        let (hl, hr) = (x[i] - xl, xr - x[i]);
        // Lagrange derivative at the middle node
        let wl = -hr / (hl * (hl + hr));
        let wc = (hr - hl) / (hl * hr);
        let wr = hl / (hr * (hl + hr));
        if i > 0 {
            d[(i, i - 1)] = wl;
        }
        d[(i, i)] = wc;
        if i + 1 < n {
            d[(i, i + 1)] = wr;
        }
    }
    d
}

/// `‖D (−Δ_Dir)^{−1/2}‖` in the cell-weighted `ℓ²` norm, one dimension.
pub fn riesz_dense_norm(a_dir: &DiscreteOperator) -> f64 {
    let e = WeightedEigen::new(a_dir);
    let inv_sqrt = e.matrix(|l| 1.0 / l.sqrt());
    let t = dirichlet_gradient(a_dir.grid()) * inv_sqrt;
    let ws = DMatrix::from_diagonal(&e.sqrt_w);
    let wi = DMatrix::from_diagonal(&e.sqrt_w.map(|x| 1.0 / x));
    let m = ws * t * wi;
    m.singular_values().max()
}

/// Backward Euler solved mode by mode: `u_n` at `n = 0..N`.
pub fn modal_backward_euler(e: &WeightedEigen, f: &[Vec<Complex64>], tg: &TimeGrid) -> Vec<Vec<Complex64>> {
    let n = e.values.len();
    let mut m = vec![c(0.0); n];
    let mut out = vec![e.from_modes(&m)];
    for (k, fk) in f.iter().enumerate() {
        let tau = tg.step(k);
        let fm = e.to_modes(fk);
        for j in 0..n {
            m[j] = (m[j] / tau + fm[j]) / (1.0 / tau + e.values[j]);
        }
        out.push(e.from_modes(&m));
    }
    out
}

/// Exact Duhamel solution at `t` for time-independent forcing `g`.
pub fn duhamel_constant(e: &WeightedEigen, g: &[Complex64], t: f64) -> Vec<Complex64> {
    e.apply(|l| c((1.0 - (-l * t).exp()) / l), g)
}

/// The maximal-regularity ratio in `L²(t^a; L²)` from modal trajectories.
pub fn modal_max_reg_ratio(e: &WeightedEigen, f: &[Vec<Complex64>], tg: &TimeGrid) -> f64 {
    let u = modal_backward_euler(e, f, tg);
    let w = tg.temporal_weights();
    let l2 = |v: &[Complex64]| -> f64 {
        v.iter().zip(e.sqrt_w.iter()).map(|(z, s)| z.norm_sqr() * s * s).sum::<f64>()
    };
    let (mut dt, mut au, mut ff) = (0.0, 0.0, 0.0);
    for n in 1..u.len() {
        let tau = tg.step(n - 1);
        let d: Vec<Complex64> = u[n].iter().zip(&u[n - 1]).map(|(a, b)| (a - b) / tau).collect();
        let bu = e.apply(|l| c(l), &u[n]);
        dt += w[n - 1] * l2(&d);
        au += w[n - 1] * l2(&bu);
        ff += w[n - 1] * l2(&f[n - 1]);
    }
    (dt.sqrt() + au.sqrt()) / ff.sqrt()
}
