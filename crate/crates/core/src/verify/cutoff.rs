//! Decay of boundary cutoffs χ(x/ε)·x^α(log x)^k in L²_γ as ε → 0.

use crate::basis::gauss_legendre;
use crate::spaces::Bump;
use crate::verify::AuditReport;
use crate::{Error, Result};

/// Allowed gap between the fitted and the predicted exponent.
pub const SLOPE_TOL: f64 = 0.05;

/// The cutoff profile χ, applied as χ(x/ε).
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Cutoff {
    /// Smooth, equal to one at 0, supported in [0, support).
    Bump(Bump),
    /// Indicator of [lo, hi].
    Window { lo: f64, hi: f64 },
}

impl Cutoff {
    pub fn eval(&self, y: f64) -> f64 {
        match *self {
            Cutoff::Bump(b) => b.eval(y).0,
            Cutoff::Window { lo, hi } => {
                if y >= lo && y <= hi {
                    1.0
                } else {
                    0.0
                }
            }
        }
    }

    /// Interval of y ≥ 0 outside which χ vanishes; None if it is empty.
    fn support(&self) -> Option<(f64, f64)> {
        match *self {
            Cutoff::Bump(b) => (b.support > 0.0).then_some((0.0, b.support)),
            Cutoff::Window { lo, hi } => (hi > 0.0 && hi > lo).then_some((lo.max(0.0), hi)),
        }
    }
}

/// ‖χ(x/ε) x^α (log x)^k‖ in L²_γ.
///
/// After x = εy the squared norm is π ε^{2α+γ+1} ∫ χ(y)² y^{2α+γ} |log ε + log y|^{2k} dy,
/// integrated in u = log y on unit panels.
pub fn cutoff_norm(gamma: f64, alpha: f64, k: u32, chi: Cutoff, eps: f64) -> Result<f64> {
    let p = 2.0 * alpha + gamma;
    let Some((lo, hi)) = chi.support() else { return Ok(0.0) };
    if !(eps > 0.0) || eps * hi > 1.0 {
        return Err(Error::Domain(format!("ε = {eps} pushes the cutoff past x = 1")));
    }
    if lo == 0.0 && !(p > -1.0) {
        return Err(Error::Domain(format!("need 2α + γ > −1, got {p}")));
    }
    let le = eps.ln();
    let u_hi = hi.ln();
    let u_lo = if lo > 0.0 {
        lo.ln()
    } else {
        // depth d with e^{−(p+1)d}(2 + d + |log ε|)^{2k} below 1e−40
        let mut d = 92.0 / (p + 1.0);
        for _ in 0..50 {
            d = (92.0 + 2.0 * k as f64 * (2.0 + d + le.abs()).ln()) / (p + 1.0);
        }
        u_hi - d
    };
    let (t, w) = gauss_legendre(24)?;
    let panels = ((u_hi - u_lo).ceil() as usize).max(1);
    let h = (u_hi - u_lo) / panels as f64;
    let mut total = 0.0;
    for j in 0..panels {
        let a = u_lo + h * j as f64;
        for (&t, &w) in t.iter().zip(&w) {
            let u = a + 0.5 * h * (1.0 + t);
            let y = u.exp();
            let c = chi.eval(y);
            total += 0.5 * h * w * c * c * ((p + 1.0) * u).exp() * (u + le).abs().powi(2 * k as i32);
        }
    }
    Ok((std::f64::consts::PI * eps.powf(p + 1.0) * total).sqrt())
}

/// Fits log‖χ(x/ε)g‖ − k log|log ε| against log ε and compares the slope with α + (γ+1)/2.
///
/// Lower powers of log ε bias the slope by about k/((2α+γ+1) log²ε), so the grid has
/// to reach small ε when 2α + γ + 1 is small.
pub fn audit_cutoff_decay(gamma: f64, alpha: f64, k: u32, chi: Cutoff, eps_grid: &[f64]) -> Result<AuditReport> {
    let target = alpha + 0.5 * (gamma + 1.0);
    let mut rep = AuditReport::new("cutoff_decay", &["eps", "norm"])
        .param("gamma", gamma)
        .param("alpha", alpha)
        .param("k", k as f64)
        .param("expected_slope", target);
    let mut pts = Vec::new();
    for &eps in eps_grid {
        let n = cutoff_norm(gamma, alpha, k, chi, eps)?;
        rep.push_row(vec![eps, n]);
        if n > 0.0 {
            pts.push((eps.ln(), n.ln() - k as f64 * eps.ln().abs().ln()));
        }
    }
    if pts.is_empty() {
        // χ(x/ε) ≡ 0: the norm is identically zero, which decays at every rate
        rep.label("fit", "identically zero");
        rep.record(SLOPE_TOL);
        return Ok(rep.finish());
    }
    let span = pts.iter().map(|p| p.0).fold(f64::NEG_INFINITY, f64::max) - pts.iter().map(|p| p.0).fold(f64::INFINITY, f64::min);
    if pts.len() < 3 || span < 10f64.ln() {
        return Err(Error::Domain("fit needs at least three ε values spanning a decade".into()));
    }
    let nf = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / nf;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / nf;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let slope = sxy / sxx;
    rep.parameters.insert("fitted_slope".into(), slope);
    rep.record(SLOPE_TOL - (slope - target).abs());
    Ok(rep.finish())
}
