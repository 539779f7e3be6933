//! Complex banded LU with partial pivoting.

use num_complex::Complex64;

use super::sparse::CsrMatrix;

const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };

/// LU factors of a banded matrix, stored row-wise with room for pivot fill-in.
///
/// Row `i` stores columns `i − kl ..= i + kl + ku`.
#[derive(Debug, Clone)]
pub struct BandedLu {
    n: usize,
    kl: usize,
    ku: usize,
    width: usize,
    /// upper factor
    u: Vec<Complex64>,
    /// multipliers `l[k·kl + r − 1]` for row `k + r`
    l: Vec<Complex64>,
    perm: Vec<usize>,
}

impl BandedLu {
    #[inline]
    fn at(&self, i: usize, j: usize) -> usize {
        i * self.width + (j + self.kl - i)
    }

    /// Factor `a`; `None` when a pivot is negligible relative to the matrix scale.
    pub fn factor(a: &CsrMatrix) -> Option<Self> {
        let n = a.dim();
        let (kl, ku) = a.bandwidths();
        let width = 2 * kl + ku + 1;
        let mut f = BandedLu {
            n,
            kl,
            ku,
            width,
            u: vec![ZERO; n * width],
            l: vec![ZERO; n * kl.max(1)],
            perm: vec![0; n],
        };
        for i in 0..n {
            for (j, v) in a.row(i) {
                let k = f.at(i, j);
                f.u[k] = v;
            }
        }
        let tiny = a.max_abs() * 1e-14 * (n as f64).sqrt();
        for k in 0..n {
            let last_row = (k + kl).min(n - 1);
            let mut p = k;
            let mut best = f.u[f.at(k, k)].norm();
            for i in k + 1..=last_row {
                let v = f.u[f.at(i, k)].norm();
                if v > best {
                    best = v;
                    p = i;
                }
            }
            if !(best > tiny) {
                return None;
            }
            f.perm[k] = p;
            let last_col = (k + kl + ku).min(n - 1);
            if p != k {
                for j in k..=last_col {
                    let (a1, a2) = (f.at(k, j), f.at(p, j));
                    f.u.swap(a1, a2);
                }
            }
            let pivot = f.u[f.at(k, k)];
            for i in k + 1..=last_row {
                let ik = f.at(i, k);
                let m = f.u[ik] / pivot;
                f.u[ik] = ZERO;
                f.l[k * kl + (i - k - 1)] = m;
                if m == ZERO {
                    continue;
                }
                for j in k + 1..=last_col {
                    let kj = f.u[f.at(k, j)];
                    let ij = f.at(i, j);
                    f.u[ij] -= m * kj;
                }
            }
        }
        Some(f)
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    /// Solve `A x = b`.
    pub fn solve(&self, b: &[Complex64]) -> Vec<Complex64> {
        let n = self.n;
        let mut x = b.to_vec();
        for k in 0..n {
            let p = self.perm[k];
            if p != k {
                x.swap(k, p);
            }
            let xk = x[k];
            for r in 1..=self.kl.min(n - 1 - k) {
                x[k + r] -= self.l[k * self.kl + r - 1] * xk;
            }
        }
        for k in (0..n).rev() {
            let mut acc = x[k];
            for j in k + 1..=(k + self.kl + self.ku).min(n - 1) {
                acc -= self.u[self.at(k, j)] * x[j];
            }
            x[k] = acc / self.u[self.at(k, k)];
        }
        x
    }

    /// Solve `Aᴴ x = b`.
    pub fn solve_adjoint(&self, b: &[Complex64]) -> Vec<Complex64> {
        let n = self.n;
        let mut z = b.to_vec();
        // Uᴴ z = b, forward
        for k in 0..n {
            let mut acc = z[k];
            let lo = k.saturating_sub(self.kl + self.ku);
            for i in lo..k {
                acc -= self.u[self.at(i, k)].conj() * z[i];
            }
            z[k] = acc / self.u[self.at(k, k)].conj();
        }
        for k in (0..n).rev() {
            let mut acc = z[k];
            for r in 1..=self.kl.min(n - 1 - k) {
                acc -= self.l[k * self.kl + r - 1].conj() * z[k + r];
            }
            z[k] = acc;
            let p = self.perm[k];
            if p != k {
                z.swap(k, p);
            }
        }
        z
    }
}
