use crate::error::{Error, Result};

/// Minimum number of time steps.
pub const MIN_STEPS: usize = 8;

/// Nodes `0 = t₀ < … < t_N = T` with the temporal weight `v(t) = t^a` for `L^q(v)`.
#[derive(Debug, Clone, PartialEq)]
pub struct TimeGrid {
    nodes: Vec<f64>,
    q: f64,
    a: f64,
}

impl TimeGrid {
    pub fn uniform(t_final: f64, steps: usize, q: f64, a: f64) -> Result<Self> {
        Self::graded(t_final, steps, 1.0, q, a)
    }

    /// Steps growing by `ratio` away from `t = 0`; `ratio = 1` is uniform.
    pub fn graded(t_final: f64, steps: usize, ratio: f64, q: f64, a: f64) -> Result<Self> {
        if !(t_final > 0.0) || !t_final.is_finite() {
            return Err(Error::invalid("T", "final time must be positive"));
        }
        if steps < MIN_STEPS {
            return Err(Error::invalid("steps", format!("need at least {MIN_STEPS} steps, got {steps}")));
        }
        if !(ratio >= 1.0) || !ratio.is_finite() {
            return Err(Error::invalid("ratio", "grading ratio must be at least 1"));
        }
        if !(q > 1.0) || !q.is_finite() {
            return Err(Error::invalid("q", format!("q = {q} must lie in (1, ∞)")));
        }
        if !(a > -1.0 && a < q - 1.0) {
            return Err(Error::invalid("a", format!("a = {a} must lie in (−1, q−1) = (−1, {})", q - 1.0)));
        }
        let mut widths: Vec<f64> = (0..steps).map(|n| ratio.powi(n as i32)).collect();
        let total: f64 = widths.iter().sum();
        widths.iter_mut().for_each(|w| *w *= t_final / total);
        let mut nodes = Vec::with_capacity(steps + 1);
        nodes.push(0.0);
        let mut t = 0.0;
        for w in &widths {
            t += w;
            nodes.push(t);
        }
        nodes[steps] = t_final;
        Ok(TimeGrid { nodes, q, a })
    }

    /// Halves every step.
    pub fn refine(&self) -> Self {
        let mut nodes = Vec::with_capacity(2 * self.nodes.len() - 1);
        for w in self.nodes.windows(2) {
            nodes.push(w[0]);
            nodes.push(0.5 * (w[0] + w[1]));
        }
        nodes.push(self.t_final());
        TimeGrid { nodes, ..*self }
    }

    pub fn steps(&self) -> usize {
        self.nodes.len() - 1
    }

    pub fn t_final(&self) -> f64 {
        self.nodes[self.nodes.len() - 1]
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    /// `τ_n = t_n − t_{n−1}` for `n = 1..N`, at index `n − 1`.
    pub fn step(&self, n: usize) -> f64 {
        self.nodes[n + 1] - self.nodes[n]
    }

    pub fn q(&self) -> f64 {
        self.q
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    /// Quadrature weights of `∫ t^a dt` per step: exact on the first cell, midpoint after.
    pub fn temporal_weights(&self) -> Vec<f64> {
        let a = self.a;
        (0..self.steps())
            .map(|n| {
                let (t0, t1) = (self.nodes[n], self.nodes[n + 1]);
                if n == 0 {
                    t1.powf(a + 1.0) / (a + 1.0)
                } else {
                    (t1 - t0) * (0.5 * (t0 + t1)).powf(a)
                }
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn weight_range() {
        assert!(TimeGrid::uniform(1.0, 16, 2.0, 0.99).is_ok());
        assert!(TimeGrid::uniform(1.0, 16, 2.0, 1.0).is_err());
        assert!(TimeGrid::uniform(1.0, 16, 2.0, -1.0).is_err());
        assert!(TimeGrid::uniform(1.0, 4, 2.0, 0.0).is_err());
    }

    #[test]
    fn graded_nodes_end_at_t() {
        let g = TimeGrid::graded(2.0, 10, 1.3, 2.0, 0.5).unwrap();
        assert_eq!(g.nodes()[10], 2.0);
        assert!((g.step(1) / g.step(0) - 1.3).abs() < 1e-12);
        let r = g.refine();
        assert_eq!(r.steps(), 20);
        assert!((r.step(0) - g.step(0) / 2.0).abs() < 1e-15);
    }

    #[test]
    fn weights_integrate_the_weight() {
        let g = TimeGrid::uniform(1.0, 400, 2.0, 0.5).unwrap();
        let s: f64 = g.temporal_weights().iter().sum();
        assert!((s - 1.0 / 1.5).abs() < 1e-5);
    }
}
