//! Positivity audits of the regularized H¹-type form.

use nalgebra::{DMatrix, SymmetricEigen};
use rand::Rng;

use crate::basis::{c0_lower_bound, PhiGamma, ProfileBasis, RadialProfile, RuleSpec};
use crate::operator::{h1_form, l2_pair, ConormalElement};
use crate::verify::AuditReport;
use crate::{Complex64, Error, Result};

/// Relative slack for the coercivity margins.
pub const COERCIVITY_SLACK: f64 = 1e-9;

/// Largest |m| drawn by the coercivity audit.
const MAX_MODE: i64 = 8;

/// Largest profile degree drawn by the coercivity audit.
const MAX_DEGREE: usize = 6;

/// c = ¼ log(1 + e^{c₀}); the form at γ = 0 dominates (1 − 1/c)‖f‖² when c > 1.
pub fn coercivity_constant(c0: f64) -> f64 {
    0.25 * c0.exp().ln_1p()
}

/// Margins (f, f)_{H̃^{1,0}} − (1 − 1/c)‖f‖² over random γ = 0 conormal elements
/// f = smooth + log x · smooth on single modes. Modes and degrees are drawn with
/// |m| + 2·degree ≤ `truncation`.
pub fn coercivity_gamma0<R: Rng>(rng: &mut R, c0: f64, sample_count: usize, truncation: usize, spec: &RuleSpec) -> Result<AuditReport> {
    if !(c0 > c0_lower_bound()) {
        return Err(Error::Domain(format!("c0 = {c0} must exceed log(e^4 - 1) = {}", c0_lower_bound())));
    }
    let c = coercivity_constant(c0);
    let floor = 1.0 - 1.0 / c;
    let phi = PhiGamma::new(0.0, c0)?;
    let mut rep = AuditReport::new("coercivity_gamma0", &["m", "degree", "form", "l2_sq", "margin"])
        .param("c0", c0)
        .param("c", c)
        .param("truncation", truncation as f64)
        .with_slack(COERCIVITY_SLACK);
    let mmax = MAX_MODE.min(truncation as i64);
    for _ in 0..sample_count {
        let m = rng.gen_range(-mmax..=mmax);
        let room = (truncation - m.unsigned_abs() as usize) / 2;
        let degree = rng.gen_range(0..=room.min(MAX_DEGREE));
        let f = ConormalElement::random(rng, 0.0, m, degree, true)?;
        let form = h1_form(&phi, None, &f, &f, spec)?.value.re;
        let l2 = l2_pair(&f, &f, spec)?.re;
        // margins are scaled so the slack is relative to the size of the terms
        let margin = (form - floor * l2) / (form.abs() + l2);
        rep.record(margin);
        rep.push_row(vec![m as f64, degree as f64, form, l2, margin]);
    }
    Ok(rep.finish())
}

/// The element x^j (times the weight when `weighted`) on mode m.
fn monomial(gamma: f64, m: i64, j: usize, weighted: bool) -> Result<ConormalElement> {
    let mut coeffs = vec![Complex64::default(); j + 1];
    coeffs[j] = Complex64::new(1.0, 0.0);
    let p = RadialProfile::new(m, ProfileBasis::Boundary, coeffs);
    let zero = RadialProfile::zero(m, ProfileBasis::Boundary);
    if weighted {
        ConormalElement::new(gamma, zero, p)
    } else {
        ConormalElement::new(gamma, p, zero)
    }
}

/// Smallest eigenvalue of the unit-diagonal Gram matrix of the form on
/// {x^j, w x^j : j < degree} for each mode; positive definiteness means all are > 0.
/// Weighted monomials are left out for γ < 0, where they are smooth.
pub fn gram_positivity(gamma: f64, c0: f64, modes: &[i64], degree: usize, spec: &RuleSpec) -> Result<AuditReport> {
    let phi = PhiGamma::new(gamma, c0)?;
    let mut rep = AuditReport::new("gram_positivity", &["m", "min_eigenvalue"]).param("gamma", gamma).param("degree", degree as f64);
    for &m in modes {
        let mut basis = Vec::new();
        for j in 0..degree {
            basis.push(monomial(gamma, m, j, false)?);
            if gamma >= 0.0 {
                basis.push(monomial(gamma, m, j, true)?);
            }
        }
        let n = basis.len();
        let mut gram = DMatrix::<f64>::zeros(n, n);
        for i in 0..n {
            for k in i..n {
                let v = h1_form(&phi, None, &basis[i], &basis[k], spec)?.value.re;
                gram[(i, k)] = v;
                gram[(k, i)] = v;
            }
        }
        let d: Vec<f64> = (0..n).map(|i| gram[(i, i)]).collect();
        if d.iter().any(|&v| !(v > 0.0)) {
            rep.record(d.iter().copied().fold(f64::INFINITY, f64::min));
            continue;
        }
        let scaled = DMatrix::from_fn(n, n, |i, k| gram[(i, k)] / (d[i] * d[k]).sqrt());
        let low = SymmetricEigen::new(scaled).eigenvalues.iter().copied().fold(f64::INFINITY, f64::min);
        rep.record(low);
        rep.push_row(vec![m as f64, low]);
    }
    Ok(rep.finish())
}
