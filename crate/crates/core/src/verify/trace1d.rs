//! One-dimensional trace inequalities near x = 0 and the scale function ℓ(ε).

use rand::Rng;

use crate::basis::{gauss_jacobi, quad_rule, RuleSpec, WeightKind};
use crate::verify::AuditReport;
use crate::{Error, Result};

fn poly(c: &[f64], x: f64) -> f64 {
    c.iter().rev().fold(0.0, |acc, a| acc * x + a)
}

fn poly_d(c: &[f64], x: f64) -> f64 {
    c.iter().enumerate().skip(1).rev().fold(0.0, |acc, (j, a)| acc * x + j as f64 * a)
}

/// ∫₀^a |f|² x^γ dx and ∫₀^a x|f'|² x^γ dx for a polynomial f, exactly by Gauss–Jacobi.
pub fn weighted_norms_1d(gamma: f64, a: f64, coeffs: &[f64]) -> Result<(f64, f64)> {
    let n = coeffs.len() + 2;
    let (t, w) = gauss_jacobi(n, 0.0, gamma)?;
    let scale = (0.5 * a).powf(gamma + 1.0);
    let (mut l2, mut grad) = (0.0, 0.0);
    for (&t, &w) in t.iter().zip(&w) {
        let x = 0.5 * a * (1.0 + t);
        l2 += w * poly(coeffs, x).powi(2);
        grad += w * x * poly_d(coeffs, x).powi(2);
    }
    Ok((l2 * scale, grad * scale))
}

/// (γ+1)(factor·ℓ⁻¹‖f‖² + (2/−γ)‖√x f'‖²) − ℓ^γ|f(0)|² on [0, a].
///
/// The inequality holds with factor = 2; factor = 1 fails on some cubics.
pub fn trace_1d_margin(gamma: f64, a: f64, ell: f64, coeffs: &[f64], factor: f64) -> Result<f64> {
    let (l2, grad) = weighted_norms_1d(gamma, a, coeffs)?;
    let f0 = coeffs.first().copied().unwrap_or(0.0);
    Ok((gamma + 1.0) * (factor * l2 / ell + 2.0 / -gamma * grad) - ell.powf(gamma) * f0 * f0)
}

/// Audits the one-dimensional trace inequality for γ ∈ (−1, 0) on random cubics.
pub fn audit_trace_1d<R: Rng>(rng: &mut R, gamma: f64, a: f64, samples: usize, ell_grid: &[f64]) -> Result<AuditReport> {
    if !(gamma > -1.0 && gamma < 0.0) {
        return Err(Error::Domain(format!("1D trace audit needs γ ∈ (−1, 0), got {gamma}")));
    }
    if !(a > 0.0) || ell_grid.iter().any(|&l| !(l > 0.0 && l < a)) {
        return Err(Error::Domain("need a > 0 and every ℓ in (0, a)".into()));
    }
    let mut rep = AuditReport::new("trace_1d", &["sample", "ell", "margin"]).param("gamma", gamma).param("a", a);
    for i in 0..samples {
        let c: Vec<f64> = (0..4).map(|_| rng.gen_range(-1.0..1.0)).collect();
        for &ell in ell_grid {
            let m = trace_1d_margin(gamma, a, ell, &c, 2.0)?;
            rep.record(m);
            rep.push_row(vec![i as f64, ell, m]);
        }
    }
    Ok(rep.finish())
}

/// ∫₀^ℓ −log x dx = ℓ(1 − log ℓ).
pub fn log_mass(ell: f64) -> f64 {
    if ell == 0.0 {
        0.0
    } else {
        ell * (1.0 - ell.ln())
    }
}

/// ∫₀^ℓ log²x dx = ℓ((1 − log ℓ)² + 1).
pub fn log_sq_mass(ell: f64) -> f64 {
    if ell == 0.0 {
        0.0
    } else {
        ell * ((1.0 - ell.ln()).powi(2) + 1.0)
    }
}

/// ∫₀^a log²x|f|² dx and ∫₀^a x log²x|f'|² dx for f = p + q/log x.
///
/// The second integral has a tail ∫ q(0)²/(x log²x) dx below the rule's floor, added
/// in closed form as q(0)²/|log x_floor|.
pub fn log_norms(a: f64, p: &[f64], q: &[f64]) -> Result<(f64, f64)> {
    let rule = quad_rule(24, WeightKind::LogSquared(a))?;
    let (mut l2, mut grad) = (0.0, 0.0);
    for (&x, &w) in rule.nodes.iter().zip(&rule.weights) {
        let lx = x.ln();
        let f = poly(p, x) + poly(q, x) / lx;
        // x f' stays finite down to the floor, where f' itself overflows when squared
        let xfd = x * (poly_d(p, x) + poly_d(q, x) / lx) - poly(q, x) / (lx * lx);
        l2 += w * f * f;
        grad += w / x * xfd * xfd;
    }
    let q0 = q.first().copied().unwrap_or(0.0);
    grad += q0 * q0 / -RuleSpec::default().x_floor.ln();
    Ok((l2, grad))
}

/// Right side minus left side of the log-weighted trace inequality at scale ℓ.
pub fn trace_log_margin(a: f64, ell: f64, p: &[f64], q: &[f64]) -> Result<f64> {
    let (l2, grad) = log_norms(a, p, q)?;
    let f0 = p.first().copied().unwrap_or(0.0);
    let lhs = log_sq_mass(ell) / log_mass(ell) * f0 * f0;
    Ok(2.0 / log_mass(ell) * l2 + 2.0 * grad - lhs)
}

/// Audits the log-weighted trace inequality on f = p + q/log x with random cubics p, q.
pub fn audit_trace_log<R: Rng>(rng: &mut R, a: f64, samples: usize, ell_grid: &[f64]) -> Result<AuditReport> {
    if !(a > 0.0 && a <= 1.0) || ell_grid.iter().any(|&l| !(l > 0.0 && l <= a)) {
        return Err(Error::Domain("need a ∈ (0, 1] and every ℓ in (0, a]".into()));
    }
    let mut rep = AuditReport::new("trace_log", &["sample", "ell", "margin"]).param("a", a);
    for i in 0..samples {
        let p: Vec<f64> = (0..4).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let q: Vec<f64> = (0..4).map(|_| rng.gen_range(-1.0..1.0)).collect();
        for &ell in ell_grid {
            let m = trace_log_margin(a, ell, &p, &q)?;
            rep.record(m);
            rep.push_row(vec![i as f64, ell, m]);
        }
    }
    Ok(rep.finish())
}

/// The ℓ ∈ (0, 1] with ℓ(1 − log ℓ) = ε, by bisection in log ℓ.
pub fn ell_of_eps(eps: f64) -> Result<f64> {
    if !(eps > 0.0 && eps <= 1.0) {
        return Err(Error::Domain(format!("ε must lie in (0, 1], got {eps}")));
    }
    // ℓ ≤ ε/(1 − log ε); ε/(1 − log ε)² is only a guess for the lower end
    let y = 1.0 - eps.ln();
    let (mut lo, mut hi) = ((eps / (y * y)).ln(), (eps / y).ln());
    while log_mass(lo.exp()) >= eps {
        lo -= 1.0;
    }
    if log_mass(hi.exp()) == eps {
        return Ok(hi.exp());
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if log_mass(mid.exp()) < eps {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo <= 1e-16 {
            break;
        }
    }
    Ok((0.5 * (lo + hi)).exp())
}

/// ℓ(1) = 1, strict monotonicity of ℓ on `grid_size` equispaced ε, and log ℓ/log ε
/// decreasing toward 1 along `small_eps` (given in decreasing order).
pub fn audit_ell_of_eps(grid_size: usize, small_eps: &[f64]) -> Result<AuditReport> {
    let mut rep = AuditReport::new("ell_of_eps", &["eps", "ell", "log_ratio"]).param("grid_size", grid_size as f64);
    let one = ell_of_eps(1.0)?;
    rep.record(if one == 1.0 { 0.0 } else { -(one - 1.0).abs() });
    let grid: Vec<f64> = (1..=grid_size).map(|i| ell_of_eps(i as f64 / grid_size as f64)).collect::<Result<_>>()?;
    for w in grid.windows(2) {
        rep.record(w[1] - w[0]);
    }
    let mut prev = f64::INFINITY;
    for &eps in small_eps {
        let ell = ell_of_eps(eps)?;
        let ratio = ell.ln() / eps.ln();
        rep.push_row(vec![eps, ell, ratio]);
        // decreasing, and never below the limit 1
        rep.record((prev - ratio).min(ratio - 1.0));
        prev = ratio;
    }
    Ok(rep.finish())
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn norms_of_monomials() {
        // ∫₀^a x^{2j+γ} dx = a^{2j+γ+1}/(2j+γ+1)
        let (g, a) = (-0.3, 0.7);
        let (l2, grad) = weighted_norms_1d(g, a, &[0.0, 0.0, 1.0]).unwrap();
        assert!((l2 - a.powf(5.0 + g) / (5.0 + g)).abs() < 1e-14);
        assert!((grad - 4.0 * a.powf(4.0 + g) / (4.0 + g)).abs() < 1e-14);
    }

    #[test]
    fn constants_close_in_form() {
        // margin = c²(2a^{γ+1}/ℓ − ℓ^γ)
        let (g, a, ell, c) = (-0.5, 1.0, 0.3, 1.7);
        let m = trace_1d_margin(g, a, ell, &[c], 2.0).unwrap();
        let want = c * c * (2.0 * a.powf(g + 1.0) / ell - ell.powf(g));
        assert!((m - want).abs() < 1e-13 * want);
        assert!(trace_1d_margin(g, a, ell, &[0.0, 1.0, -2.0], 2.0).unwrap() > 0.0);
    }

    #[test]
    fn unit_factor_is_too_small() {
        let m = trace_1d_margin(-0.5, 1.0, 0.99, &[1.0, -0.217], 1.0).unwrap();
        assert!(m < 0.0, "{m}");
        assert!(trace_1d_margin(-0.5, 1.0, 0.99, &[1.0, -0.217], 2.0).unwrap() > 0.0);
    }

    #[test]
    fn random_cubics_pass() {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        let r = audit_trace_1d(&mut rng, -0.5, 1.0, 1000, &[0.01, 0.1, 0.5, 0.99]).unwrap();
        assert!(r.passed && r.samples == 4000, "{}", r.worst_margin);
        assert!(audit_trace_1d(&mut rng, 0.5, 1.0, 1, &[0.5]).is_err());
    }

    #[test]
    fn log_norms_of_known_functions() {
        // f = 1: ∫₀^a log²x dx
        let (l2, grad) = log_norms(0.5, &[1.0], &[]).unwrap();
        assert!((l2 - log_sq_mass(0.5)).abs() < 1e-10 * l2);
        assert_eq!(grad, 0.0);
        // f = 1/log x: ∫ dx = a, and ∫ dx/(x log²x) = 1/|log a|
        let (l2, grad) = log_norms(0.5, &[], &[1.0]).unwrap();
        assert!((l2 - 0.5).abs() < 1e-10);
        assert!((grad - 1.0 / 2f64.ln()).abs() < 1e-10 * grad, "{grad}");
    }

    #[test]
    fn log_trace_examples() {
        assert_eq!(trace_log_margin(0.5, 0.5, &[], &[]).unwrap(), 0.0);
        assert!(trace_log_margin(0.5, 0.2, &[], &[1.0]).unwrap() > 0.0);
        assert!(trace_log_margin(0.5, 0.5, &[1.0], &[1.0]).unwrap() >= 0.0);
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        let r = audit_trace_log(&mut rng, 0.5, 1000, &[1e-6, 0.01, 0.5]).unwrap();
        assert!(r.passed, "{}", r.worst_margin);
    }

    #[test]
    fn ell_values() {
        assert_eq!(ell_of_eps(1.0).unwrap(), 1.0);
        let l = ell_of_eps(0.1).unwrap();
        assert!((log_mass(l) - 0.1).abs() < 1e-15);
        assert!((l - 2.04e-2).abs() < 5e-4, "{l}");
        let ratios: Vec<f64> = [1e-6, 1e-9, 1e-12].iter().map(|&e: &f64| ell_of_eps(e).unwrap().ln() / e.ln()).collect();
        assert!(ratios[0] > ratios[1] && ratios[1] > ratios[2] && ratios[2] > 1.0, "{ratios:?}");
        let grid: Vec<f64> = (1..=1000).map(|i| ell_of_eps(i as f64 / 1000.0).unwrap()).collect();
        assert!(grid.windows(2).all(|w| w[0] < w[1]));
        let r = audit_ell_of_eps(1000, &[1e-6, 1e-9, 1e-12]).unwrap();
        assert!(r.passed);
        assert_eq!(r.samples, 1 + 999 + 3);
    }
}
