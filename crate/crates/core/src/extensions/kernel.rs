//! Solutions of (L_{γ,m} − λ)u = 0 regular at the origin, by series.
//!
//! Near the center u = ρ^{|m|}W(ρ²) with W a power series; near the boundary u is a
//! combination of the two Frobenius solutions in x with exponents 0 and −γ (a log
//! pair at γ = 0). The two expansions are matched in value and slope at
//! x₀ = min(½, 2/(|m|+1)); for large |m| both Frobenius solutions grow like
//! (1−x)^{−|m|} and become nearly dependent unless x₀ is small.

use crate::basis::{GammaParam, RadialRule, Regime, RuleSpec};
use crate::extensions::resolvent::check_admissible_mode;
use crate::operator::{FieldParts, ModeField};
use crate::{Complex64, Error, Result};

const MAX_TERMS: usize = 200_000;

fn match_point(m: i64) -> f64 {
    0.5f64.min(2.0 / (m.unsigned_abs() as f64 + 1.0))
}

/// Coefficients c_0, c_1, … of a series evaluated at arguments up to `z`, generated
/// until the terms have peaked and fallen below 1e−18 of the largest.
fn series(first: Complex64, z: f64, mut next: impl FnMut(usize, &[Complex64]) -> Complex64) -> Result<Vec<Complex64>> {
    let mut c = vec![first];
    let mut peak = first.norm();
    let mut quiet = 0;
    while c.len() < MAX_TERMS {
        let k = c.len() - 1;
        let v = next(k, &c);
        c.push(v);
        let term = v.norm() * z.powi(k as i32 + 1);
        peak = peak.max(term);
        let shrinking = v.norm() * z < (1.0 - 0.05 * (1.0 - z)) * c[k].norm() || v.norm() == 0.0;
        if term <= 1e-18 * peak && shrinking {
            quiet += 1;
            if quiet >= 4 {
                return Ok(c);
            }
        } else {
            quiet = 0;
        }
    }
    Err(Error::Convergence(format!("series did not settle within {MAX_TERMS} terms")))
}

/// Σ c_k z^k with first and second derivatives.
fn horner3(c: &[Complex64], z: f64) -> (Complex64, Complex64, Complex64) {
    let zero = Complex64::default();
    let (mut v, mut d, mut d2) = (zero, zero, zero);
    for a in c.iter().rev() {
        d2 = d2 * z + d * 2.0;
        d = d * z + v;
        v = v * z + a;
    }
    (v, d, d2)
}

/// Regular Frobenius coefficients with exponent shift `g`:
/// p_{k+1} = p_k((2k+|m|+g+1)² − λ)/(4(k+1)(k+1+g)).
fn frobenius(g: f64, am: f64, lambda: Complex64, z: f64) -> Result<Vec<Complex64>> {
    series(Complex64::new(1.0, 0.0), z, |k, c| {
        let k = k as f64;
        c[c.len() - 1] * (((2.0 * k + am + g + 1.0).powi(2) - lambda) / (4.0 * (k + 1.0) * (k + 1.0 + g)))
    })
}

/// The first `n` regular Frobenius coefficients with exponent shift `g`.
pub(crate) fn frobenius_terms(g: f64, am: f64, lambda: Complex64, n: usize) -> Vec<Complex64> {
    let mut c = vec![Complex64::new(1.0, 0.0)];
    for k in 0..n.saturating_sub(1) {
        let kf = k as f64;
        let next = c[k] * (((2.0 * kf + am + g + 1.0).powi(2) - lambda) / (4.0 * (kf + 1.0) * (kf + 1.0 + g)));
        c.push(next);
    }
    c.truncate(n);
    c
}

/// Companion of the log solution at γ = 0, with d₀ = 0.
pub(crate) fn log_companion(am: f64, lambda: Complex64, p: &[Complex64]) -> Vec<Complex64> {
    let mut d = vec![Complex64::default(); p.len()];
    for k in 0..p.len() - 1 {
        let kf = k as f64;
        let src = (p[k] * (am + 2.0 * kf + 1.0) - p[k + 1] * (2.0 * (kf + 1.0))) * 4.0;
        d[k + 1] = (d[k] * ((2.0 * kf + am + 1.0).powi(2) - lambda) + src) / (4.0 * (kf + 1.0).powi(2));
    }
    d
}

/// The solution of (L_{γ,m} − λ)u = 0 regular at ρ = 0, normalized by its Dirichlet trace.
#[derive(Clone, Debug)]
pub struct KernelMode {
    gamma: GammaParam,
    m: i64,
    lambda: Complex64,
    interior: Vec<Complex64>,
    regular: Vec<Complex64>,
    singular: Vec<Complex64>,
    k1: Complex64,
    k2: Complex64,
    scale: Complex64,
    x_match: f64,
}

impl KernelMode {
    /// The kernel element with τ^D u = `dirichlet`.
    pub fn new(gamma: f64, lambda: Complex64, m: i64, dirichlet: Complex64) -> Result<Self> {
        let g = GammaParam::subcritical(gamma)?;
        check_admissible_mode(gamma, lambda, m)?;
        let am = m.unsigned_abs() as f64;
        let x_match = match_point(m);
        let interior = series(Complex64::new(1.0, 0.0), 1.0 - x_match, |j, c| {
            let j = j as f64;
            c[c.len() - 1] * (((am + 2.0 * j + gamma + 1.0).powi(2) - lambda) / (4.0 * (j + 1.0) * (am + j + 1.0)))
        })?;
        let regular = frobenius(gamma, am, lambda, x_match)?;
        let singular = if g.regime() == Regime::LogCritical {
            log_companion(am, lambda, &regular)
        } else {
            frobenius(-gamma, am, lambda, x_match)?
        };
        let mut mode = KernelMode {
            gamma: g,
            m,
            lambda,
            interior,
            regular,
            singular,
            k1: Complex64::default(),
            k2: Complex64::default(),
            scale: Complex64::new(1.0, 0.0),
            x_match,
        };
        mode.match_series()?;
        let raw = mode.raw_dirichlet();
        if raw.norm() <= 1e-300 || !raw.is_finite() {
            return Err(Error::SpectralCollision { eigenvalue: lambda.re, distance: 0.0 });
        }
        mode.scale = dirichlet / raw;
        Ok(mode)
    }

    /// Boundary functions Y₁, Y₂ at x (without the ρ^{|m|} factor), value and x-derivative.
    fn boundary_pair(&self, x: f64) -> [(Complex64, Complex64, Complex64); 2] {
        let y1 = horner3(&self.regular, x);
        let q = horner3(&self.singular, x);
        let g = self.gamma.value();
        let y2 = if g == 0.0 {
            let l = x.ln();
            (
                y1.0 * l + q.0,
                y1.1 * l + y1.0 / x + q.1,
                y1.2 * l + y1.1 * (2.0 / x) - y1.0 / (x * x) + q.2,
            )
        } else {
            let w = x.powf(-g);
            let w1 = -g * w / x;
            let w2 = g * (g + 1.0) * w / (x * x);
            (q.0 * w, q.1 * w + q.0 * w1, q.2 * w + q.1 * (2.0 * w1) + q.0 * w2)
        };
        [y1, y2]
    }

    fn match_series(&mut self) -> Result<()> {
        let (w, wt, _) = horner3(&self.interior, 1.0 - self.x_match);
        let [y1, y2] = self.boundary_pair(self.x_match);
        // W(t) = K₁Y₁ + K₂Y₂ with dW/dt = −dY/dx
        let det = y1.0 * (-y2.1) - y2.0 * (-y1.1);
        if det.norm() == 0.0 || !det.is_finite() {
            return Err(Error::Convergence("singular matching system".into()));
        }
        self.k1 = (w * (-y2.1) - y2.0 * wt) / det;
        self.k2 = (y1.0 * wt - w * (-y1.1)) / det;
        Ok(())
    }

    fn raw_dirichlet(&self) -> Complex64 {
        match self.gamma.regime() {
            Regime::SubcriticalNegative => self.k1,
            _ => self.k2,
        }
    }

    fn raw_neumann(&self, c0: f64) -> Complex64 {
        let g = self.gamma.value();
        match self.gamma.regime() {
            Regime::SubcriticalNegative => self.k2 * (-2.0 * g),
            Regime::LogCritical => self.k1 * -2.0 - self.k2 * (2.0 * c0),
            _ => self.k1 * (2.0 * g),
        }
    }

    pub fn lambda(&self) -> Complex64 {
        self.lambda
    }

    /// τ^N u/τ^D u, the mode-m eigenvalue of the Dirichlet-to-Neumann map.
    pub fn dn_value(&self, c0: f64) -> Complex64 {
        self.raw_neumann(c0) / self.raw_dirichlet()
    }

    /// A copy with τ^D = `dirichlet`.
    pub fn with_dirichlet(&self, dirichlet: Complex64) -> Self {
        KernelMode { scale: dirichlet / self.raw_dirichlet(), ..self.clone() }
    }

    /// u, ∂_ρu, ∂²_ρu at ρ ∈ (0, 1).
    pub fn jet(&self, rho: f64) -> (Complex64, Complex64, Complex64) {
        let a = self.m.unsigned_abs() as i32;
        let af = a as f64;
        let x = (1.0 - rho) * (1.0 + rho);
        let pa = |k: i32| if a + k >= 0 { rho.powi(a + k) } else { 0.0 };
        let (v, d, d2) = if x >= self.x_match {
            let (w, wt, wtt) = horner3(&self.interior, rho * rho);
            (
                w * pa(0),
                w * (af * pa(-1)) + wt * (2.0 * pa(1)),
                w * (af * (af - 1.0) * pa(-2)) + wt * ((4.0 * af + 2.0) * pa(0)) + wtt * (4.0 * pa(2)),
            )
        } else {
            let [y1, y2] = self.boundary_pair(x);
            let f = y1.0 * self.k1 + y2.0 * self.k2;
            let fx = y1.1 * self.k1 + y2.1 * self.k2;
            let fxx = y1.2 * self.k1 + y2.2 * self.k2;
            (
                f * pa(0),
                f * (af * pa(-1)) - fx * (2.0 * pa(1)),
                f * (af * (af - 1.0) * pa(-2)) - fx * ((4.0 * af + 2.0) * pa(0)) + fxx * (4.0 * pa(2)),
            )
        };
        (v * self.scale, d * self.scale, d2 * self.scale)
    }

    pub fn eval(&self, rho: f64) -> Complex64 {
        self.jet(rho).0
    }

    /// (L_{γ,m} − λ)u at ρ from the jet, with the sum of the moduli of its terms.
    pub fn pointwise_residual(&self, rho: f64) -> (Complex64, f64) {
        let (v, d, d2) = self.jet(rho);
        let g = self.gamma.value();
        let x = (1.0 - rho) * (1.0 + rho);
        let mf = self.m as f64;
        let terms = [
            -d2 * x,
            -d * (1.0 / rho - (3.0 + 2.0 * g) * rho),
            v * (mf * mf / (rho * rho) + (g + 1.0).powi(2)),
            -v * self.lambda,
        ];
        (terms.iter().sum(), terms.iter().map(|t| t.norm()).sum())
    }

    /// L²_γ norm of (L − λ)u over x ≥ 1e−4 relative to the same norm of the sum of
    /// the moduli of its terms. Below 1e−4 the Frobenius sums satisfy the equation
    /// term by term up to their truncation, and pointwise evaluation would only
    /// measure boundary cancellation.
    pub fn relative_residual(&self, spec: &RuleSpec) -> Result<f64> {
        let (num, den) = self.residual_norms(spec)?;
        Ok(num / den.max(f64::MIN_POSITIVE))
    }

    /// L²_γ norms over x ≥ 1e−4 of (L − λ)u and of the sum of its term moduli.
    pub fn residual_norms(&self, spec: &RuleSpec) -> Result<(f64, f64)> {
        let rule = RadialRule::on_x(1e-4, 1.0, spec)?;
        let g = self.gamma.value();
        let (mut num, mut den) = (0.0, 0.0);
        for ((&x, &r), &w) in rule.x.iter().zip(&rule.rho).zip(&rule.w) {
            let wx = w * x.powf(g);
            let (res, size) = self.pointwise_residual(r);
            num += wx * res.norm_sqr();
            den += wx * size * size;
        }
        let tau = 2.0 * std::f64::consts::PI;
        Ok(((tau * num).sqrt(), (tau * den).sqrt()))
    }
}

impl ModeField for KernelMode {
    fn mode(&self) -> i64 {
        self.m
    }

    fn gamma(&self) -> f64 {
        self.gamma.value()
    }

    fn parts(&self, x: f64, rho: f64) -> FieldParts {
        let a = self.m.unsigned_abs() as i32;
        let af = a as f64;
        let pa = rho.powi(a);
        let pa1 = if a >= 1 { rho.powi(a - 1) } else { 0.0 };
        // d/dρ[ρ^a F(x)] = aρ^{a−1}F − 2ρ^{a+1}F_x
        let lift = |f: Complex64, fx: Complex64| (f * pa * self.scale, (f * (af * pa1) - fx * (2.0 * pa * rho)) * self.scale);
        if x >= self.x_match {
            let (w, wt, _) = horner3(&self.interior, rho * rho);
            let (v, d) = lift(w, -wt);
            return FieldParts { regular: v, regular_d: d, ..Default::default() };
        }
        let p = horner3(&self.regular, x);
        let q = horner3(&self.singular, x);
        if self.gamma.regime() == Regime::LogCritical {
            let (rv, rd) = lift(p.0 * self.k1 + q.0 * self.k2, p.1 * self.k1 + q.1 * self.k2);
            let (wv, wd) = lift(p.0 * self.k2, p.1 * self.k2);
            FieldParts { regular: rv, regular_d: rd, weighted: wv, weighted_d: wd }
        } else {
            let (rv, rd) = lift(p.0 * self.k1, p.1 * self.k1);
            let (wv, wd) = lift(q.0 * self.k2, q.1 * self.k2);
            FieldParts { regular: rv, regular_d: rd, weighted: wv, weighted_d: wd }
        }
    }

    fn dirichlet_trace(&self) -> Complex64 {
        self.raw_dirichlet() * self.scale
    }

    fn neumann_trace(&self, c0: f64) -> Complex64 {
        self.raw_neumann(c0) * self.scale
    }
}

/// Λ_γ(λ) on mode m from the series solution.
pub fn dn_map_mode_ode(gamma: f64, lambda: Complex64, m: i64, c0: f64) -> Result<Complex64> {
    Ok(KernelMode::new(gamma, lambda, m, Complex64::new(1.0, 0.0))?.dn_value(c0))
}
