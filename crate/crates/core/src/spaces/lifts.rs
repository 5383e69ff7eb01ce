//! Explicit right inverses of the Dirichlet trace built from a boundary bump.

use crate::basis::{GammaParam, PhiGamma, Regime};
use crate::operator::{FieldParts, ModeField};
use crate::spaces::BoundaryFunction;
use crate::{Complex64, Result};

/// g(t) = exp(1 − 1/(1 − (t/a)²)) on [0, a), zero beyond; g(0) = 1.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Bump {
    pub support: f64,
}

impl Default for Bump {
    fn default() -> Self {
        Bump { support: 0.5 }
    }
}

impl Bump {
    /// g(t) and g'(t).
    pub fn eval(&self, t: f64) -> (f64, f64) {
        let a = self.support;
        if t >= a {
            return (0.0, 0.0);
        }
        let u = (t / a) * (t / a);
        let q = 1.0 - u;
        let g = (1.0 - 1.0 / q).exp();
        (g, -g * 2.0 * t / (a * a * q * q))
    }
}

/// The lift of c·e^{imθ} on one mode.
///
/// Profiles, with n = max(|m|, 1), or max(|m|, 2) at γ = 0:
/// γ < 0: g(n²x); γ = 0: φ₀·g(n²x)(1 + 2 log n/log x); γ > 0: x^{−γ}S(x)·g(n²x/κ),
/// where φ_γ = x^{−γ}S and the support is compressed by κ = a_eff/a so that it
/// stays inside the region where φ_γ keeps its sign.
#[derive(Clone, Debug)]
pub struct DirichletLift {
    gamma: GammaParam,
    m: i64,
    amplitude: Complex64,
    bump: Bump,
    stretch: f64,
    log_n: f64,
    phi: PhiGamma,
}

impl DirichletLift {
    pub fn new(gamma: f64, m: i64, amplitude: Complex64, bump: Bump, c0: f64) -> Result<Self> {
        let g = GammaParam::subcritical(gamma)?;
        let phi = PhiGamma::new(gamma, c0)?;
        let floor = if g.regime() == Regime::LogCritical { 2 } else { 1 };
        let n = m.unsigned_abs().max(floor) as f64;
        let mut stretch = n * n;
        if g.regime() == Regime::SubcriticalPositive {
            let a_eff = 0.5f64.min(0.5 * phi.x_gamma());
            stretch *= bump.support / a_eff;
        }
        Ok(DirichletLift { gamma: g, m, amplitude, bump, stretch, log_n: n.ln(), phi })
    }

    /// Right edge of the support in x.
    pub fn support_edge(&self) -> f64 {
        self.bump.support / self.stretch
    }
}

impl ModeField for DirichletLift {
    fn mode(&self) -> i64 {
        self.m
    }

    fn gamma(&self) -> f64 {
        self.gamma.value()
    }

    fn parts(&self, x: f64, rho: f64) -> FieldParts {
        let (b, db_dt) = self.bump.eval(self.stretch * x);
        if b == 0.0 {
            return FieldParts::default();
        }
        let c = self.amplitude;
        // d/dρ g(κx) = g'·κ·(−2ρ)
        let db = db_dt * self.stretch * (-2.0 * rho);
        match self.gamma.regime() {
            Regime::SubcriticalNegative => FieldParts { regular: c * b, regular_d: c * db, ..Default::default() },
            Regime::SubcriticalPositive => {
                let s = self.phi.sample(x, rho);
                FieldParts {
                    weighted: c * (s.reduced * b),
                    weighted_d: c * (s.reduced_d_rho * b + s.reduced * db),
                    ..Default::default()
                }
            }
            _ => {
                let s = self.phi.sample(x, rho);
                let (l1, dl1) = (s.reduced, s.reduced_d_rho);
                let lx = x.ln();
                let ln2 = 2.0 * self.log_n;
                let q = ln2 - l1 - ln2 * l1 / lx;
                let dq = -dl1 - ln2 * dl1 / lx - ln2 * l1 * (2.0 * rho / x) / (lx * lx);
                FieldParts {
                    regular: c * (b * q),
                    regular_d: c * (db * q + b * dq),
                    weighted: c * b,
                    weighted_d: c * db,
                }
            }
        }
    }

    fn dirichlet_trace(&self) -> Complex64 {
        self.amplitude
    }

    fn neumann_trace(&self, c0: f64) -> Complex64 {
        match self.gamma.regime() {
            Regime::LogCritical => {
                let regular = self.amplitude * (2.0 * self.log_n - self.phi.c0());
                regular * -2.0 - self.amplitude * (2.0 * c0)
            }
            _ => Complex64::default(),
        }
    }

    fn breakpoints(&self) -> Vec<f64> {
        vec![self.support_edge()]
    }
}

/// One lift per nonzero mode of f; τ^D of their sum is f.
pub fn right_inverse_dirichlet(gamma: f64, f: &BoundaryFunction, bump: Bump, c0: f64) -> Result<Vec<DirichletLift>> {
    f.iter()
        .filter(|(_, c)| *c != Complex64::default())
        .map(|(m, c)| DirichletLift::new(gamma, m, c, bump, c0))
        .collect()
}
