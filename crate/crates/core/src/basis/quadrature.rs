//! Gauss rules for the radial weights x^γ ρ dρ (x = 1 − ρ²) and a graded
//! composite rule for integrands with conormal or logarithmic endpoint behavior.

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;

use super::special::{jacobi_value, log_gamma_unchecked};
use crate::{Error, Result};

/// Which radial weight a [`QuadratureRule`] integrates against.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum WeightKind {
    /// ∫₀¹ f(ρ) x^γ ρ dρ; nodes are ρ-values.
    PowerGamma(f64),
    /// ∫₀¹ f(ρ) x^{γ+1} ρ dρ; nodes are ρ-values.
    PowerGammaTimesX(f64),
    /// ∫₀^a f(x) log²x dx; nodes are x-values (the weight lives in x).
    LogSquared(f64),
}

#[derive(Clone, Debug)]
pub struct QuadratureRule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
    pub kind: WeightKind,
}

impl QuadratureRule {
    pub fn integrate(&self, f: impl Fn(f64) -> f64) -> f64 {
        self.nodes.iter().zip(&self.weights).map(|(&r, &w)| w * f(r)).sum()
    }

    /// Integral over the disk of a radial function, i.e. 2π times [`Self::integrate`].
    pub fn integrate_disk(&self, f: impl Fn(f64) -> f64) -> f64 {
        std::f64::consts::TAU * self.integrate(f)
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }
}

/// Gauss–Jacobi nodes and weights on [−1, 1] for the weight (1−t)^α (1+t)^β.
///
/// Golub–Welsch for the initial nodes, then one Newton polish per node and the
/// closed-form weight expression, which is more accurate than eigenvector weights.
pub fn gauss_jacobi(n: usize, alpha: f64, beta: f64) -> Result<(Vec<f64>, Vec<f64>)> {
    if n == 0 {
        return Err(Error::Domain("Gauss–Jacobi rule needs at least one node".into()));
    }
    if !(alpha > -1.0) || !(beta > -1.0) {
        return Err(Error::Domain(format!(
            "Gauss–Jacobi parameters must exceed -1, got ({alpha}, {beta})"
        )));
    }
    let ab = alpha + beta;
    let mut jac = DMatrix::<f64>::zeros(n, n);
    for k in 0..n {
        let kf = k as f64;
        let denom = (2.0 * kf + ab) * (2.0 * kf + ab + 2.0);
        jac[(k, k)] = if k == 0 {
            (beta - alpha) / (ab + 2.0)
        } else {
            (beta * beta - alpha * alpha) / denom
        };
        if k + 1 < n {
            let j = kf + 1.0;
            let s = 2.0 * j + ab;
            let off = (4.0 * j * (j + alpha) * (j + beta) * (j + ab) / (s * s * (s + 1.0) * (s - 1.0)))
                .sqrt();
            jac[(k, k + 1)] = off;
            jac[(k + 1, k)] = off;
        }
    }
    let mut nodes: Vec<f64> = SymmetricEigen::new(jac).eigenvalues.iter().copied().collect();
    nodes.sort_by(|a, b| a.total_cmp(b));

    let deg = n as u32;
    let ln_const = (ab + 1.0) * std::f64::consts::LN_2
        + log_gamma_unchecked(n as f64 + alpha + 1.0)
        + log_gamma_unchecked(n as f64 + beta + 1.0)
        - log_gamma_unchecked(n as f64 + ab + 1.0)
        - log_gamma_unchecked(n as f64 + 1.0);
    let deriv = |t: f64| 0.5 * (n as f64 + ab + 1.0) * jacobi_value(deg - 1, alpha + 1.0, beta + 1.0, t);
    let mut weights = Vec::with_capacity(n);
    for t in nodes.iter_mut() {
        for _ in 0..3 {
            let d = deriv(*t);
            if d == 0.0 {
                break;
            }
            let step = jacobi_value(deg, alpha, beta, *t) / d;
            if !step.is_finite() {
                return Err(Error::Convergence("Gauss–Jacobi Newton step diverged".into()));
            }
            *t -= step;
            if step.abs() < 1e-16 {
                break;
            }
        }
        if !(t.abs() < 1.0) {
            return Err(Error::Convergence(format!("Gauss–Jacobi node {t} left (-1, 1)")));
        }
        let d = deriv(*t);
        weights.push((ln_const - ((1.0 - *t) * (1.0 + *t)).ln() - 2.0 * d.abs().ln()).exp());
    }
    if nodes.windows(2).any(|w| !(w[0] < w[1])) {
        return Err(Error::Convergence("Gauss–Jacobi nodes collapsed".into()));
    }
    Ok((nodes, weights))
}

/// Gauss–Legendre on [−1, 1].
pub fn gauss_legendre(n: usize) -> Result<(Vec<f64>, Vec<f64>)> {
    gauss_jacobi(n, 0.0, 0.0)
}

/// Builds a rule of the requested kind.
///
/// For `LogSquared(a)` the count is the number of Gauss–Legendre points per
/// panel of a graded composite rule in u = ln x (target error 1e−10 for
/// log-polynomial integrands); the mass below 1e−300 is dropped.
pub fn quad_rule(npts: usize, kind: WeightKind) -> Result<QuadratureRule> {
    match kind {
        WeightKind::PowerGamma(g) | WeightKind::PowerGammaTimesX(g) => {
            let exponent = if matches!(kind, WeightKind::PowerGamma(_)) { g } else { g + 1.0 };
            if !(exponent > -1.0) {
                return Err(Error::Domain(format!("weight exponent {exponent} must exceed -1")));
            }
            let (t, w) = gauss_jacobi(npts, exponent, 0.0)?;
            let scale = (-(exponent + 2.0) * std::f64::consts::LN_2).exp();
            Ok(QuadratureRule {
                nodes: t.iter().map(|&t| (0.5 * (1.0 + t)).sqrt()).collect(),
                weights: w.iter().map(|&w| w * scale).collect(),
                kind,
            })
        }
        WeightKind::LogSquared(a) => {
            if !(a > 0.0 && a <= 1.0) {
                return Err(Error::Domain(format!("log-squared rule needs a in (0, 1], got {a}")));
            }
            let spec = RuleSpec { near: npts.max(4), mid: npts.max(4), deep: npts.max(4), ..RuleSpec::default() };
            let (x, w) = graded_panels(spec.x_floor, a, &spec)?;
            let mut pairs: Vec<(f64, f64)> =
                x.into_iter().zip(w).map(|(x, w)| (x, w * x.ln().powi(2))).collect();
            pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
            Ok(QuadratureRule {
                nodes: pairs.iter().map(|p| p.0).collect(),
                weights: pairs.iter().map(|p| p.1).collect(),
                kind,
            })
        }
    }
}

/// Resolution of a [`RadialRule`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RuleSpec {
    /// Gauss–Legendre points in s = ρ² on the interior part x ∈ [½, 1].
    pub interior: usize,
    /// Points per u = ln x panel of width ln 2, for x ∈ [1e−3, ½].
    pub near: usize,
    /// Points per panel of width 1, for x ∈ [1e−17, 1e−3].
    pub mid: usize,
    /// Points per panel of width 10, below 1e−17.
    pub deep: usize,
    /// Smallest x reached; the remaining mass is left to closed-form tails.
    pub x_floor: f64,
}

impl Default for RuleSpec {
    fn default() -> Self {
        RuleSpec { interior: 48, near: 24, mid: 16, deep: 20, x_floor: 1e-300 }
    }
}

impl RuleSpec {
    /// A cheaper rule for second-resolution consistency checks.
    pub fn coarse() -> Self {
        RuleSpec { interior: 32, near: 16, mid: 12, deep: 14, x_floor: 1e-300 }
    }

    /// Enough interior points for Zernike content up to radial degree `n`.
    pub fn for_degree(n: usize) -> Self {
        let base = RuleSpec::default();
        RuleSpec { interior: base.interior.max(n + 24), near: base.near.max(n / 2 + 16), ..base }
    }
}

/// Composite Gauss–Legendre in u = ln x on [x_lo, x_hi] ⊂ (0, ½]; returns x and dx-weights.
fn graded_panels(x_lo: f64, x_hi: f64, spec: &RuleSpec) -> Result<(Vec<f64>, Vec<f64>)> {
    let mut xs = Vec::new();
    let mut ws = Vec::new();
    if !(x_lo < x_hi) {
        return Ok((xs, ws));
    }
    let tables = [
        (std::f64::consts::LN_2, gauss_legendre(spec.near)?, 1e-3_f64.ln()),
        (1.0, gauss_legendre(spec.mid)?, 1e-17_f64.ln()),
        (10.0, gauss_legendre(spec.deep)?, f64::NEG_INFINITY),
    ];
    let u_lo = x_lo.ln();
    let mut u = x_hi.ln();
    while u > u_lo {
        let (width, (gt, gw), _) = tables
            .iter()
            .find(|entry| u > entry.2 + 1e-12)
            .unwrap_or(&tables[2]);
        let lower = (u - width).max(u_lo);
        let half = 0.5 * (u - lower);
        let mid = 0.5 * (u + lower);
        for (t, w) in gt.iter().zip(gw) {
            let x = (mid + half * t).exp();
            xs.push(x);
            ws.push(half * w * x);
        }
        u = lower;
    }
    Ok((xs, ws))
}

/// Composite rule for ∫ F(ρ) ρ dρ over a range of x = 1 − ρ², graded toward x = 0.
///
/// Stores x and ρ separately so that neither is recovered by cancellation.
#[derive(Clone, Debug)]
pub struct RadialRule {
    pub x: Vec<f64>,
    pub rho: Vec<f64>,
    pub w: Vec<f64>,
}

impl RadialRule {
    /// The whole disk radius, ρ ∈ (0, 1).
    pub fn new(spec: &RuleSpec) -> Result<Self> {
        Self::on_x(0.0, 1.0, spec)
    }

    /// Rule for x ∈ [x_lo, x_hi] ⊂ [0, 1]; x_lo = 0 means down to the floor of `spec`.
    pub fn on_x(x_lo: f64, x_hi: f64, spec: &RuleSpec) -> Result<Self> {
        if !(0.0 <= x_lo && x_lo < x_hi && x_hi <= 1.0) {
            return Err(Error::Domain(format!("bad x-interval [{x_lo}, {x_hi}]")));
        }
        let mut rule = RadialRule { x: Vec::new(), rho: Vec::new(), w: Vec::new() };
        if x_hi > 0.5 {
            let s_lo = 1.0 - x_hi;
            let s_hi = 1.0 - x_lo.max(0.5);
            let (t, w) = gauss_legendre(spec.interior)?;
            let half = 0.5 * (s_hi - s_lo);
            let mid = 0.5 * (s_hi + s_lo);
            for (t, w) in t.iter().zip(&w) {
                let s = mid + half * t;
                rule.x.push(1.0 - s);
                rule.rho.push(s.sqrt());
                rule.w.push(0.5 * half * w);
            }
        }
        if x_lo < 0.5 {
            let (xs, ws) = graded_panels(x_lo.max(spec.x_floor), x_hi.min(0.5), spec)?;
            for (x, w) in xs.into_iter().zip(ws) {
                rule.rho.push((1.0 - x).sqrt());
                rule.x.push(x);
                rule.w.push(0.5 * w);
            }
        }
        Ok(rule)
    }

    pub fn len(&self) -> usize {
        self.x.len()
    }

    pub fn is_empty(&self) -> bool {
        self.x.is_empty()
    }

    /// Square roots of w·x^p, formed in log space so huge samples can be paired safely.
    pub fn root_weights(&self, p: f64) -> Vec<f64> {
        self.x
            .iter()
            .zip(&self.w)
            .map(|(&x, &w)| (0.5 * (w.ln() + p * x.ln())).exp())
            .collect()
    }

    /// Σ w x^p a conj(b), with the weight split symmetrically between the factors.
    pub fn pair(&self, p: f64, a: &[Complex64], b: &[Complex64]) -> Complex64 {
        self.root_weights(p)
            .iter()
            .zip(a.iter().zip(b))
            .map(|(&r, (a, b))| (a * r) * (b * r).conj())
            .sum()
    }

    /// Σ w x^p f.
    pub fn sum(&self, p: f64, f: impl Fn(f64, f64) -> f64) -> f64 {
        self.x
            .iter()
            .zip(&self.rho)
            .zip(&self.w)
            .map(|((&x, &r), &w)| if p == 0.0 { w * f(x, r) } else { w * x.powf(p) * f(x, r) })
            .sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn legendre_small_rules() {
        let (t, w) = gauss_legendre(1).unwrap();
        assert!(t[0].abs() < 1e-15 && (w[0] - 2.0).abs() < 1e-14);
        let (t, w) = gauss_legendre(2).unwrap();
        assert!((t[1] - 1.0 / 3f64.sqrt()).abs() < 1e-15);
        assert!((w[0] - 1.0).abs() < 1e-14);
    }

    #[test]
    fn jacobi_weights_sum_to_moment() {
        for &(a, b) in &[(0.5, 0.0), (-0.5, 3.0), (0.9, 16.0), (-0.75, -0.5)] {
            let (_, w) = gauss_jacobi(17, a, b).unwrap();
            let total: f64 = w.iter().sum();
            let moment = ((a + b + 1.0) * std::f64::consts::LN_2
                + log_gamma_unchecked(a + 1.0)
                + log_gamma_unchecked(b + 1.0)
                - log_gamma_unchecked(a + b + 2.0))
            .exp();
            assert!((total - moment).abs() < 1e-13 * moment, "({a},{b})");
        }
    }

    #[test]
    fn disk_area_and_weighted_masses() {
        let r = quad_rule(8, WeightKind::PowerGamma(0.0)).unwrap();
        assert!((r.integrate_disk(|_| 1.0) - PI).abs() < 1e-13);
        let r = quad_rule(16, WeightKind::PowerGamma(0.5)).unwrap();
        assert!((r.integrate_disk(|_| 1.0) - 2.0 * PI / 3.0).abs() < 1e-13);
        let r = quad_rule(16, WeightKind::PowerGamma(-0.5)).unwrap();
        assert!((r.integrate_disk(|_| 1.0) - 2.0 * PI).abs() < 1e-13);
    }

    #[test]
    fn power_gamma_exactness() {
        // ∫₀¹ ρ^{2j} x^γ ρ dρ = ½ B(j+1, γ+1)
        for &g in &[-0.75, 0.0, 0.3, 0.9] {
            let npts = 10;
            let r = quad_rule(npts, WeightKind::PowerGamma(g)).unwrap();
            for j in 0..npts {
                let exact = 0.5
                    * (log_gamma_unchecked(j as f64 + 1.0) + log_gamma_unchecked(g + 1.0)
                        - log_gamma_unchecked(j as f64 + g + 2.0))
                    .exp();
                let got = r.integrate(|rho| rho.powi(2 * j as i32));
                assert!((got - exact).abs() < 1e-13 * exact, "γ={g} j={j}");
            }
            assert!(r.weights.iter().all(|&w| w > 0.0));
            assert!(r.nodes.windows(2).all(|p| p[0] < p[1]));
        }
    }

    #[test]
    fn times_x_rule_matches_power_rule() {
        let a = quad_rule(12, WeightKind::PowerGammaTimesX(0.25)).unwrap();
        let b = quad_rule(12, WeightKind::PowerGamma(0.25)).unwrap();
        let f = |r: f64| 1.0 + r.powi(4);
        let want = b.integrate(|r| f(r) * (1.0 - r * r));
        assert!((a.integrate(f) - want).abs() < 1e-14);
    }

    #[test]
    fn log_squared_rule() {
        // ∫₀^a log²x dx = a(log²a − 2 log a + 2)
        let a: f64 = 0.5;
        let r = quad_rule(12, WeightKind::LogSquared(a)).unwrap();
        let la = a.ln();
        let want = a * (la * la - 2.0 * la + 2.0);
        assert!((r.integrate(|_| 1.0) - want).abs() < 1e-10);
        let want_x = a * a * (la * la / 2.0 - la / 2.0 + 0.25);
        assert!((r.integrate(|x| x) - want_x).abs() < 1e-10);
    }

    #[test]
    fn radial_rule_handles_conormal_weights() {
        let rule = RadialRule::new(&RuleSpec::default()).unwrap();
        // ∫₀¹ x^p ρ dρ = 1/(2(p+1))
        for p in [-0.9, -0.5, 0.0, 0.75, 3.0] {
            let got = rule.sum(p, |_, _| 1.0);
            assert!((got - 0.5 / (p + 1.0)).abs() < 1e-12, "p={p}: {got}");
        }
        // ∫₀¹ ρ^{2j} x^{-1/2} ρ dρ = ½ B(j+1, ½)
        let got = rule.sum(-0.5, |_, r| r.powi(20));
        let want = 0.5
            * (log_gamma_unchecked(11.0) + log_gamma_unchecked(0.5) - log_gamma_unchecked(11.5)).exp();
        assert!((got - want).abs() < 1e-12);
    }

    #[test]
    fn split_rules_add_up() {
        let spec = RuleSpec::default();
        let whole = RadialRule::new(&spec).unwrap().sum(-0.3, |x, _| (1.0 + x).ln());
        let left = RadialRule::on_x(0.0, 0.2, &spec).unwrap().sum(-0.3, |x, _| (1.0 + x).ln());
        let right = RadialRule::on_x(0.2, 1.0, &spec).unwrap().sum(-0.3, |x, _| (1.0 + x).ln());
        assert!((whole - left - right).abs() < 1e-13);
    }

    #[test]
    fn pair_survives_overflowing_samples() {
        let rule = RadialRule::new(&RuleSpec::default()).unwrap();
        let a: Vec<Complex64> = rule.x.iter().map(|&x| Complex64::new(x.powf(-0.9), 0.0)).collect();
        // ∫ x^{-1.8} x^{0.9} ρ dρ = 1/(2·0.1)
        let got = rule.pair(0.9, &a, &a).re;
        assert!((got - 5.0).abs() < 1e-9, "{got}");
    }
}
