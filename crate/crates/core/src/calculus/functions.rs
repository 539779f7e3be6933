//! Holomorphic test functions on sectors.

use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;

use crate::error::{Error, Result};

pub type ScalarFn = Arc<dyn Fn(Complex64) -> Complex64 + Send + Sync>;

/// Default sector half-angle of the test family.
pub const FAMILY_OMEGA: f64 = PI / 2.0;
/// Default mollification exponent for imaginary powers in the test family.
pub const DEFAULT_MOLLIFICATION: f64 = 0.01;

/// A holomorphic function on `Σ_ω` with its sampled sup norm and decay exponents.
///
/// `|f(z)| ≲ min(|z|^a, |z|^{−b})` with `(a, b) = decay()`; the function lies in
/// `H¹ ∩ H∞` when both are positive.
#[derive(Clone)]
pub struct SectorFunction {
    label: String,
    f: ScalarFn,
    omega: f64,
    hinf_norm: f64,
    decay: (f64, f64),
    /// `(c, w)` with `f(z) = c z^w (1 + O(1/|z|))` as `|z| → ∞`
    power_tail: Option<(Complex64, Complex64)>,
}

impl fmt::Debug for SectorFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SectorFunction")
            .field("label", &self.label)
            .field("omega", &self.omega)
            .field("hinf_norm", &self.hinf_norm)
            .field("decay", &self.decay)
            .finish()
    }
}

impl SectorFunction {
    pub fn new(
        label: impl Into<String>,
        omega: f64,
        decay: (f64, f64),
        f: impl Fn(Complex64) -> Complex64 + Send + Sync + 'static,
    ) -> Result<Self> {
        if !(omega > 0.0 && omega < PI) {
            return Err(Error::invalid("omega", "sector angle must lie in (0, π)"));
        }
        if !(decay.0 >= 0.0 && decay.1 > 0.0) {
            return Err(Error::invalid("decay", "need a ≥ 0 at zero and b > 0 at infinity"));
        }
        let f: ScalarFn = Arc::new(f);
        let hinf_norm = sampled_sup(&*f, omega);
        if !hinf_norm.is_finite() {
            return Err(Error::invalid("f", "unbounded on the sector"));
        }
        Ok(SectorFunction {
            label: label.into(),
            f,
            omega,
            hinf_norm,
            decay,
            power_tail: None,
        })
    }

    /// Declares `f(z) = c z^w (1 + O(1/|z|))` at infinity, so contour tails can be summed exactly.
    pub fn with_power_tail(mut self, c: Complex64, w: Complex64) -> Result<Self> {
        if !(w.re < 0.0) {
            return Err(Error::invalid("w", "tail exponent must have negative real part"));
        }
        self.power_tail = Some((c, w));
        Ok(self)
    }

    pub fn power_tail(&self) -> Option<(Complex64, Complex64)> {
        self.power_tail
    }

    /// `f ≡ 0`.
    pub fn zero(omega: f64) -> Result<Self> {
        Self::new("zero", omega, (1.0, 1.0), |_| Complex64::new(0.0, 0.0))
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        (self.f)(z)
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn omega(&self) -> f64 {
        self.omega
    }

    pub fn hinf_norm(&self) -> f64 {
        self.hinf_norm
    }

    pub fn decay(&self) -> (f64, f64) {
        self.decay
    }

    pub fn in_h1(&self) -> bool {
        self.decay.0 > 0.0 && self.decay.1 > 0.0
    }
}

/// `sup |f|` sampled on the rays `arg z ∈ {0, ±ω/2, ±ω}` with `|z| ∈ [1e-8, 1e8]`.
///
/// For bounded holomorphic `f` the supremum sits on the boundary rays, which
/// are included.
pub fn sampled_sup(f: &dyn Fn(Complex64) -> Complex64, omega: f64) -> f64 {
    const PER_RAY: usize = 2000;
    let mut best = 0.0f64;
    for t in [0.0, 0.5, -0.5, 1.0, -1.0] {
        let th = t * omega;
        for k in 0..PER_RAY {
            let r = 10f64.powf(-8.0 + 16.0 * k as f64 / (PER_RAY - 1) as f64);
            best = best.max(f(Complex64::from_polar(r, th)).norm());
        }
    }
    best
}

/// The rational members of the test family.
pub fn rational_family(omega: f64) -> Result<Vec<SectorFunction>> {
    let one = Complex64::new(1.0, 0.0);
    Ok(vec![
        SectorFunction::new("z/(1+z)^2", omega, (1.0, 1.0), move |z| z / ((one + z) * (one + z)))?,
        SectorFunction::new("z^(1/2)/(1+z)", omega, (0.5, 0.5), move |z| z.sqrt() / (one + z))?,
        SectorFunction::new("z/((1+z)(4+z))", omega, (1.0, 1.0), move |z| {
            z / ((one + z) * (4.0 + z))
        })?,
        SectorFunction::new("z(1-z)/(1+z)^3", omega, (1.0, 1.0), move |z| {
            z * (one - z) / (one + z).powu(3)
        })?,
    ])
}

/// `z^{is+ε}(1+z)^{−2ε}`, an `H¹ ∩ H∞` approximant of `z^{is}`.
pub fn mollified_imaginary_power(s: f64, eps: f64, omega: f64) -> Result<SectorFunction> {
    if !(eps > 0.0) {
        return Err(Error::invalid("eps", "mollification exponent must be positive"));
    }
    let w = Complex64::new(eps, s);
    SectorFunction::new(format!("z^(i{s})_eps{eps}"), omega, (eps, eps), move |z| {
        if z == Complex64::new(0.0, 0.0) {
            return z;
        }
        (w * z.ln() - 2.0 * eps * (1.0 + z).ln()).exp()
    })?
    .with_power_tail(Complex64::new(1.0, 0.0), Complex64::new(-eps, s))
}

/// The rational family together with mollified `z^{is}` for `s ∈ {±1, ±3}`.
pub fn standard_family(omega: f64) -> Result<Vec<SectorFunction>> {
    let mut fam = rational_family(omega)?;
    for s in [-3.0, -1.0, 1.0, 3.0] {
        fam.push(mollified_imaginary_power(s, DEFAULT_MOLLIFICATION, omega)?);
    }
    Ok(fam)
}

/// `1/(λ₀ + z)` for `λ₀ > 0`; `f(A) = (λ₀ + A)⁻¹`.
pub fn shifted_inverse(lambda0: f64, omega: f64) -> Result<SectorFunction> {
    if !(lambda0 > 0.0) {
        return Err(Error::invalid("lambda0", "must be positive"));
    }
    SectorFunction::new(format!("1/({lambda0}+z)"), omega, (0.0, 1.0), move |z| {
        1.0 / (lambda0 + z)
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn family_sup_norms() {
        let fam = rational_family(FAMILY_OMEGA).unwrap();
        assert!((fam[0].hinf_norm() - 0.5).abs() < 1e-4);
        assert!((fam[1].hinf_norm() - 0.5f64.sqrt()).abs() < 1e-4);
    }

    #[test]
    fn interior_samples_stay_below_the_estimate() {
        let fam = standard_family(FAMILY_OMEGA).unwrap();
        let mut k = 0u64;
        for f in &fam {
            for _ in 0..10_000 {
                k += 1;
                let r = 10f64.powf(-6.0 + 12.0 * crate::quadrature::halton(k, 0));
                let th = FAMILY_OMEGA * (2.0 * crate::quadrature::halton(k, 1) - 1.0);
                let v = f.eval(Complex64::from_polar(r, th)).norm();
                assert!(v <= 1.05 * f.hinf_norm(), "{} {v}", f.label());
            }
        }
    }

    #[test]
    fn imaginary_power_modulus() {
        let f = mollified_imaginary_power(2.0, 1e-3, FAMILY_OMEGA).unwrap();
        let z = Complex64::from_polar(3.0, 0.4);
        let want = (-2.0f64 * 0.4).exp();
        assert!((f.eval(z).norm() - want).abs() < 1e-2);
    }
}
