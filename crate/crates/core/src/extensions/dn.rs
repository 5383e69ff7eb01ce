//! The Dirichlet-to-Neumann map through the Dirichlet resolvent, and the Weyl function.
//!
//! For boundary data e^{imθ} the solution of (L − λ)u = 0 is u₀ − (L_D − λ)⁻¹(L − λ)u₀
//! for any lift u₀ with τ^D u₀ = 1. The lift is a truncated Frobenius sum, so that
//! (L − λ)u₀ is a single high-order monomial and its Zernike coefficients decay fast.

use std::f64::consts::PI;

use crate::basis::{gauss_jacobi, unit_radial_table, zernike_norm_sq, GammaParam, ProfileBasis, RadialProfile, Regime, ZernikeIndex};
use crate::extensions::kernel::{dn_map_mode_ode, frobenius_terms, log_companion};
use crate::extensions::multipliers::{trace_weight, FourierMultiplier};
use crate::extensions::resolvent::check_admissible_mode;
use crate::operator::{apply_l_shifted, ConormalElement, ModeField};
use crate::{Complex64, Error, Result};

/// Number of Frobenius terms kept in the lift.
pub const LIFT_TERMS: usize = 8;

/// Relative truncation estimate above which a DN value is flagged as unconverged.
pub const DN_TOL: f64 = 1e-6;

/// Default radial truncation for spectral computations.
pub const DEFAULT_TRUNCATION: u32 = 64;

/// Default angular cutoff for boundary operators.
pub const DEFAULT_MODES: i64 = 32;

/// μ_m(λ) with its truncation diagnostics.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DnValue {
    pub mu: Complex64,
    /// |μ at truncation N − μ at truncation N/2|.
    pub truncation_estimate: f64,
    pub converged: bool,
}

/// How the Dirichlet-to-Neumann eigenvalues are computed.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub enum DnRoute {
    /// Resolvent on Zernike functions of degree ≤ `truncation`.
    Spectral { truncation: u32 },
    /// Series solution matched between center and boundary.
    #[default]
    Ode,
}

/// u₀ on mode m with τ^D u₀ = 1 and (L − λ)u₀ = O(x^{terms−1}) times the boundary weight.
pub fn frobenius_lift(gamma: f64, lambda: Complex64, m: i64, terms: usize) -> Result<ConormalElement> {
    let g = GammaParam::subcritical(gamma)?;
    let am = m.unsigned_abs() as f64;
    let n = terms.max(1);
    let prof = |c: Vec<Complex64>| RadialProfile::new(m, ProfileBasis::Boundary, c);
    let zero = RadialProfile::zero(m, ProfileBasis::Boundary);
    match g.regime() {
        Regime::SubcriticalNegative => ConormalElement::new(gamma, prof(frobenius_terms(gamma, am, lambda, n)), zero),
        Regime::LogCritical => {
            let p = frobenius_terms(0.0, am, lambda, n);
            let d = log_companion(am, lambda, &p);
            ConormalElement::new(gamma, prof(d), prof(p))
        }
        _ => ConormalElement::new(gamma, zero, prof(frobenius_terms(-gamma, am, lambda, n))),
    }
}

/// ⟨r, Ĝ_{|m|+2k', ·}⟩ in L²_γ for k' ≤ kmax, where r = w·ρ^{|m|}R(x) and the weight
/// w·x^γ·(basis weight) equals one, so a Gauss–Jacobi(0, |m|) rule in t = 2ρ²−1 applies.
fn project_residual(gamma: f64, r: &ConormalElement, kmax: usize) -> Result<Vec<Complex64>> {
    let m = r.m();
    let am = m.unsigned_abs() as f64;
    let g = GammaParam::subcritical(gamma)?;
    let smooth = r.smooth().to_basis(ProfileBasis::Boundary);
    let singular = r.singular().to_basis(ProfileBasis::Boundary);
    let (plain, logged) = match g.regime() {
        Regime::SubcriticalNegative if singular.is_zero() => (smooth, None),
        Regime::SubcriticalPositive if smooth.is_zero() => (singular, None),
        Regime::LogCritical => (smooth, Some(singular)),
        _ => return Err(Error::Domain("residual has an unexpected weighted part".into())),
    };
    let poly = |p: &RadialProfile, x: f64| p.coeffs().iter().rev().fold(Complex64::default(), |acc, c| acc * x + c);
    let npts = kmax + plain.coeffs().len() + if logged.is_some() { 120 } else { 8 };
    let (s, w) = gauss_jacobi(npts, 0.0, am)?;
    let pref = 2.0 * PI * 0.25 * 2f64.powf(-am);
    let mut out = vec![Complex64::default(); kmax + 1];
    for (&si, &wi) in s.iter().zip(&w) {
        let x = 0.5 * (1.0 - si);
        let mut rv = poly(&plain, x);
        if let Some(l) = &logged {
            rv += poly(l, x) * x.ln();
        }
        for (o, p) in out.iter_mut().zip(unit_radial_table(g.abs(), m, kmax, si)) {
            *o += rv * (wi * p);
        }
    }
    Ok(out.into_iter().map(|v| v * pref).collect())
}

/// μ_m(λ) through the resolvent pipeline at radial truncation N.
pub fn dn_map_mode(gamma: f64, lambda: Complex64, m: i64, truncation: u32, c0: f64) -> Result<DnValue> {
    let g = GammaParam::subcritical(gamma)?;
    check_admissible_mode(gamma, lambda, m)?;
    let lift = frobenius_lift(gamma, lambda, m, LIFT_TERMS)?;
    let base = lift.neumann_trace(c0);
    let am = m.unsigned_abs() as u32;
    if truncation < am {
        return Ok(DnValue { mu: base, truncation_estimate: f64::INFINITY, converged: false });
    }
    let kmax = ((truncation - am) / 2) as usize;
    let r = apply_l_shifted(gamma, lambda, &lift)?;
    let proj = project_residual(gamma, &r, kmax)?;
    let c = g.neumann_constant();
    let half_n = truncation / 2;
    let (mut mu, mut mu_half) = (base, base);
    for (kp, p) in proj.iter().enumerate() {
        let idx = ZernikeIndex::from_mode(m, kp as u32);
        let norm = zernike_norm_sq(g.abs(), idx).sqrt();
        let term = p * (c / ((g.eigenvalue(idx.n) - lambda) * norm));
        mu -= term;
        if idx.n <= half_n {
            mu_half -= term;
        }
    }
    let est = (mu - mu_half).norm();
    Ok(DnValue { mu, truncation_estimate: est, converged: est <= DN_TOL * (1.0 + mu.norm()) })
}

/// μ_m(λ) by the chosen route.
pub fn dn_value(gamma: f64, lambda: Complex64, m: i64, route: DnRoute, c0: f64) -> Result<Complex64> {
    match route {
        DnRoute::Spectral { truncation } => Ok(dn_map_mode(gamma, lambda, m, truncation, c0)?.mu),
        DnRoute::Ode => dn_map_mode_ode(gamma, lambda, m, c0),
    }
}

/// M(λ) on |m| ≤ cutoff: symbol μ_m(λ)/w_m², with w_m the trace-space weight.
pub fn weyl_function(gamma: f64, lambda: Complex64, cutoff: i64, route: DnRoute, c0: f64) -> Result<FourierMultiplier> {
    let mut entries = Vec::new();
    for m in -cutoff..=cutoff {
        let w = trace_weight(gamma, m);
        entries.push((m, dn_value(gamma, lambda, m, route, c0)? / (w * w)));
    }
    Ok(FourierMultiplier::table(entries))
}

/// sup_m |M_m(λ)| along a list of λ; data only.
pub fn weyl_norm_sweep(gamma: f64, lambdas: &[Complex64], cutoff: i64, c0: f64) -> Result<Vec<(Complex64, f64)>> {
    lambdas
        .iter()
        .map(|&l| {
            let w = weyl_function(gamma, l, cutoff, DnRoute::Ode, c0)?;
            let sup = (-cutoff..=cutoff).map(|m| w.at(m).map(|v| v.norm())).collect::<Result<Vec<_>>>()?;
            Ok((l, sup.into_iter().fold(0.0, f64::max)))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::basis::RuleSpec;
    use crate::extensions::KernelMode;
    use crate::operator::l2_pair;

    fn c(v: f64) -> Complex64 {
        Complex64::new(v, 0.0)
    }

    #[test]
    fn lift_residual_is_top_order() {
        for g in [-0.5, 0.0, 0.5] {
            let lam = Complex64::new(1.0, 1.0);
            let u = frobenius_lift(g, lam, 3, LIFT_TERMS).unwrap();
            assert!((u.dirichlet_trace() - c(1.0)).norm() < 1e-15);
            let r = apply_l_shifted(g, lam, &u).unwrap();
            for part in [r.smooth(), r.singular()] {
                let cs = part.to_basis(ProfileBasis::Boundary).coeffs().to_vec();
                for v in cs.iter().take(LIFT_TERMS - 1) {
                    assert!(v.norm() < 1e-10);
                }
            }
        }
    }

    #[test]
    fn spectral_route_agrees_with_series() {
        for g in [-0.75, -0.25, 0.0, 0.5, 0.75] {
            for m in [0i64, 1, 7, 16] {
                for lam in [c(0.0), c(-1.0), Complex64::new(1.0, 1.0)] {
                    let a = dn_map_mode(g, lam, m, 128, 4.0).unwrap();
                    let b = dn_map_mode_ode(g, lam, m, 4.0).unwrap();
                    assert!((a.mu - b).norm() < 1e-5 * (1.0 + b.norm()), "γ={g} m={m} λ={lam}: {} vs {b}", a.mu);
                    assert!(a.converged);
                }
            }
        }
    }

    #[test]
    fn zero_data_and_mode_symmetry() {
        let a = dn_map_mode(0.5, c(0.0), 4, 64, 4.0).unwrap().mu;
        let b = dn_map_mode(0.5, c(0.0), -4, 64, 4.0).unwrap().mu;
        assert!((a - b).norm() < 1e-13 * a.norm());
        let w = weyl_function(0.25, c(-2.0), 3, DnRoute::Ode, 4.0).unwrap();
        assert_eq!(w.apply(&crate::spaces::BoundaryFunction::zero()).unwrap(), crate::spaces::BoundaryFunction::zero());
    }

    #[test]
    fn herglotz_and_conjugation() {
        for g in [-0.5, 0.0, 0.5] {
            let up = weyl_function(g, Complex64::new(0.0, 1.0), 6, DnRoute::Ode, 4.0).unwrap();
            let down = weyl_function(g, Complex64::new(0.0, -1.0), 6, DnRoute::Ode, 4.0).unwrap();
            let below = weyl_function(g, c(0.5), 6, DnRoute::Ode, 4.0).unwrap();
            for m in -6..=6 {
                assert!(up.at(m).unwrap().im > 0.0);
                assert!((down.at(m).unwrap() - up.at(m).unwrap().conj()).norm() < 1e-12 * up.at(m).unwrap().norm());
                assert!(below.at(m).unwrap().im.abs() < 1e-13 * below.at(m).unwrap().norm());
            }
        }
    }

    #[test]
    fn imaginary_part_is_the_kernel_norm() {
        // Im μ = Im λ ‖U‖²/(2π) for τ^D U = 1, from the second Green identity
        for g in [-0.5, 0.0, 0.5] {
            let lam = Complex64::new(2.0, 0.7);
            let u = KernelMode::new(g, lam, 2, c(1.0)).unwrap();
            let n2 = l2_pair(&u, &u, &RuleSpec::default()).unwrap().re;
            let mu = u.dn_value(4.0);
            assert!((mu.im - lam.im * n2 / (2.0 * PI)).abs() < 1e-9 * mu.im.abs(), "γ={g}");
        }
    }
}
