//! The Dirichlet resolvent, diagonal in the unit Zernike basis.

use crate::basis::GammaParam;
use crate::spaces::SpectralVector;
use crate::{Complex64, Error, Result};

/// Minimum distance from λ to a Dirichlet eigenvalue before λ counts as spectral.
pub const SPECTRAL_TOL: f64 = 1e-9;

/// Rejects λ within [`SPECTRAL_TOL`] of (n+1+|γ|)² for some n ≤ `max_degree`.
pub fn check_admissible(gamma: f64, lambda: Complex64, max_degree: u32) -> Result<()> {
    let g = GammaParam::subcritical(gamma)?;
    if !(lambda.re.is_finite() && lambda.im.is_finite()) {
        return Err(Error::Domain(format!("λ = {lambda} is not finite")));
    }
    // only the eigenvalue nearest to Re λ can be within tolerance
    let root = lambda.re.max(0.0).sqrt() - 1.0 - g.abs();
    let lo = root.floor().max(0.0) as u32;
    for n in [lo, lo + 1].into_iter().chain(std::iter::once(0)) {
        if n > max_degree {
            continue;
        }
        let e = g.eigenvalue(n);
        let d = (lambda - e).norm();
        if d <= SPECTRAL_TOL {
            return Err(Error::SpectralCollision { eigenvalue: e, distance: d });
        }
    }
    Ok(())
}

/// Same check restricted to the eigenvalues carried by angular mode m.
pub fn check_admissible_mode(gamma: f64, lambda: Complex64, m: i64) -> Result<()> {
    let g = GammaParam::subcritical(gamma)?;
    let am = m.unsigned_abs() as f64;
    let root = lambda.re.max(0.0).sqrt() - 1.0 - g.abs() - am;
    let center = (root / 2.0).round().max(0.0) as u32;
    for kp in center.saturating_sub(1)..=center + 1 {
        let e = g.eigenvalue(m.unsigned_abs() as u32 + 2 * kp);
        let d = (lambda - e).norm();
        if d <= SPECTRAL_TOL {
            return Err(Error::SpectralCollision { eigenvalue: e, distance: d });
        }
    }
    Ok(())
}

/// u_{n,k} ↦ u_{n,k}/((n+1+|γ|)² − λ).
pub fn dirichlet_resolvent(gamma: f64, lambda: Complex64, u: &SpectralVector) -> Result<SpectralVector> {
    if u.gamma() != gamma {
        return Err(Error::Domain(format!("vector carries γ = {}, resolvent γ = {gamma}", u.gamma())));
    }
    check_admissible(gamma, lambda, u.truncation())?;
    Ok(u.map_eigen(|e| 1.0 / (e - lambda)))
}
