//! Pointwise access to single-mode fields of the form h₀ + w_γ·h₁.

use crate::basis::{PhiGamma, Regime};
use crate::Complex64;

/// Regular and weighted smooth parts of a field at one point, with ρ-derivatives.
///
/// The field is `regular + w_γ(x)·weighted` with w_γ = x^{−γ} for γ ≠ 0 and
/// w_γ = log x for γ = 0.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct FieldParts {
    pub regular: Complex64,
    pub regular_d: Complex64,
    pub weighted: Complex64,
    pub weighted_d: Complex64,
}

/// Value, x·∂_ρ and the scaled quasi-derivative x·N_φ at one point.
///
/// Both derivatives carry a factor x so that samples stay finite down to x ~ 1e−300.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct FieldSample {
    pub value: Complex64,
    pub x_d_rho: Complex64,
    pub x_n_phi: Complex64,
}

/// A radial function times e^{imω} whose boundary behavior is conormal of type γ.
pub trait ModeField: Sync {
    fn mode(&self) -> i64;
    fn gamma(&self) -> f64;
    fn parts(&self, x: f64, rho: f64) -> FieldParts;
    /// Regularized Dirichlet trace (coefficient of the most singular term).
    fn dirichlet_trace(&self) -> Complex64;
    /// Regularized Neumann trace; `c0` only matters at γ = 0.
    fn neumann_trace(&self, c0: f64) -> Complex64;
    /// Values of x where the field is not smooth (e.g. edges of a bump's support).
    fn breakpoints(&self) -> Vec<f64> {
        Vec::new()
    }
}

/// w_γ(x) and x·∂_ρ w_γ.
pub(crate) fn weight(gamma: f64, x: f64, rho: f64) -> (f64, f64) {
    if gamma == 0.0 {
        (x.ln(), -2.0 * rho)
    } else {
        let w = x.powf(-gamma);
        (w, 2.0 * gamma * rho * w)
    }
}

/// Value, x∂_ρ and x N_φ from the parts, using the closed forms for each regime so
/// that no boundary cancellation occurs.
pub fn sample_field(field: &dyn ModeField, phi: &PhiGamma, x: f64, rho: f64) -> FieldSample {
    let gamma = field.gamma();
    let p = field.parts(x, rho);
    let (w, xw) = weight(gamma, x, rho);
    let value = p.regular + p.weighted * w;
    let x_d_rho = p.regular_d * x + p.weighted_d * (x * w) + p.weighted * xw;
    let x_n_phi = match phi.param().regime() {
        Regime::SubcriticalPositive => {
            let s = phi.sample(x, rho);
            let log_slope = x * s.reduced_d_rho / s.reduced;
            let reg = p.regular_d * x - p.regular * (2.0 * gamma * rho + log_slope);
            let sing = (p.weighted_d * x - p.weighted * log_slope) * w;
            reg + sing
        }
        Regime::LogCritical => {
            let s = phi.sample(x, rho);
            let rho_phi = rho * s.value;
            let xl = x * x.ln();
            let reg = p.regular_d * x + p.regular * (2.0 / rho_phi);
            let sing = p.weighted_d * xl + p.weighted * (2.0 * (xl + rho * rho * s.reduced) / rho_phi);
            reg + sing
        }
        _ => x_d_rho,
    };
    FieldSample { value, x_d_rho, x_n_phi }
}

/// Value and x∂_ρ only; `x_n_phi` is set to x∂_ρ. No φ_γ needed.
pub fn sample_plain(field: &dyn ModeField, x: f64, rho: f64) -> FieldSample {
    let p = field.parts(x, rho);
    let (w, xw) = weight(field.gamma(), x, rho);
    let x_d_rho = p.regular_d * x + p.weighted_d * (x * w) + p.weighted * xw;
    FieldSample { value: p.regular + p.weighted * w, x_d_rho, x_n_phi: x_d_rho }
}

pub(crate) fn sample_all_plain(field: &dyn ModeField, xs: &[f64], rhos: &[f64]) -> Vec<FieldSample> {
    xs.iter().zip(rhos).map(|(&x, &r)| sample_plain(field, x, r)).collect()
}

/// Samples of a field on every node of a rule.
pub(crate) fn sample_all(field: &dyn ModeField, phi: &PhiGamma, xs: &[f64], rhos: &[f64]) -> Vec<FieldSample> {
    xs.iter().zip(rhos).map(|(&x, &r)| sample_field(field, phi, x, r)).collect()
}

/// A field scaled by a complex constant.
pub struct Scaled<'a> {
    pub inner: &'a dyn ModeField,
    pub factor: Complex64,
}

impl ModeField for Scaled<'_> {
    fn mode(&self) -> i64 {
        self.inner.mode()
    }
    fn gamma(&self) -> f64 {
        self.inner.gamma()
    }
    fn parts(&self, x: f64, rho: f64) -> FieldParts {
        let p = self.inner.parts(x, rho);
        let f = self.factor;
        FieldParts {
            regular: p.regular * f,
            regular_d: p.regular_d * f,
            weighted: p.weighted * f,
            weighted_d: p.weighted_d * f,
        }
    }
    fn dirichlet_trace(&self) -> Complex64 {
        self.inner.dirichlet_trace() * self.factor
    }
    fn neumann_trace(&self, c0: f64) -> Complex64 {
        self.inner.neumann_trace(c0) * self.factor
    }
    fn breakpoints(&self) -> Vec<f64> {
        self.inner.breakpoints()
    }
}

/// Sum of fields sharing γ and mode.
pub struct FieldSum<'a> {
    pub terms: Vec<&'a dyn ModeField>,
    pub mode: i64,
    pub gamma: f64,
}

impl ModeField for FieldSum<'_> {
    fn mode(&self) -> i64 {
        self.mode
    }
    fn gamma(&self) -> f64 {
        self.gamma
    }
    fn parts(&self, x: f64, rho: f64) -> FieldParts {
        let mut acc = FieldParts::default();
        for t in &self.terms {
            let p = t.parts(x, rho);
            acc.regular += p.regular;
            acc.regular_d += p.regular_d;
            acc.weighted += p.weighted;
            acc.weighted_d += p.weighted_d;
        }
        acc
    }
    fn dirichlet_trace(&self) -> Complex64 {
        self.terms.iter().map(|t| t.dirichlet_trace()).sum()
    }
    fn neumann_trace(&self, c0: f64) -> Complex64 {
        self.terms.iter().map(|t| t.neumann_trace(c0)).sum()
    }
    fn breakpoints(&self) -> Vec<f64> {
        self.terms.iter().flat_map(|t| t.breakpoints()).collect()
    }
}
