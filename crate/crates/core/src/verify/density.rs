//! Divergence of Σ 1/a_k with a_k = (n+1+γ)^p ‖G_{n,k}‖², n = 2k + |m|.
//!
//! When the series diverges, boundary-flat data cannot separate the Dirichlet basis
//! element from its neighbours: the flattening sequences c_k = 1/(S_j a_k) keep
//! Σ c_k = 1 while Σ a_k |c_k|² = 1/S_j → 0. Divergence happens for p = 2 at every
//! γ ≥ 0 and for p = 4 exactly when γ ≥ 1.

use crate::basis::log_gamma;
use crate::verify::AuditReport;
use crate::{Error, Result};

/// Half-width of the band around exponent −1 treated as logarithmic growth.
pub const EXPONENT_BAND: f64 = 0.01;

/// Tolerance on the two flattening identities, relative.
pub const FLATTEN_TOL: f64 = 1e-13;

/// Smallest and largest checkpoint exponents: partial sums are sampled at K = 2^j.
const FIRST_CHECKPOINT: u32 = 10;
const MIN_CHECKPOINTS: usize = 4;

/// Compensated sum.
fn neumaier(values: impl IntoIterator<Item = f64>) -> f64 {
    let (mut sum, mut comp) = (0.0f64, 0.0f64);
    for v in values {
        let t = sum + v;
        comp += if sum.abs() >= v.abs() { (sum - t) + v } else { (v - t) + sum };
        sum = t;
    }
    sum + comp
}

/// a_k for k = 0..count on mode m, by ratio recurrence on the squared norms.
pub fn density_weights(gamma: f64, m: i64, power: u32, count: usize) -> Result<Vec<f64>> {
    if !(gamma >= 0.0) || !matches!(power, 2 | 4) {
        return Err(Error::Domain(format!("need γ ≥ 0 and power 2 or 4, got γ = {gamma}, power = {power}")));
    }
    let mf = m.unsigned_abs() as f64;
    // ‖G_{n,k}‖² = π(γ!)² b_k/(n+1+γ), b_k = (k+|m|)! k!/((k+|m|+γ)!(k+γ)!)
    let mut ln_b = log_gamma(mf + 1.0)? - log_gamma(mf + gamma + 1.0)? - log_gamma(gamma + 1.0)?;
    let ln_pre = std::f64::consts::PI.ln() + 2.0 * log_gamma(gamma + 1.0)?;
    let mut out = Vec::with_capacity(count);
    for k in 0..count {
        let kf = k as f64;
        let e = 2.0 * kf + mf + 1.0 + gamma;
        out.push((ln_pre + (power as f64 - 1.0) * e.ln() + ln_b).exp());
        ln_b += ((kf + mf + 1.0) * (kf + 1.0) / ((kf + mf + 1.0 + gamma) * (kf + 1.0 + gamma))).ln();
    }
    Ok(out)
}

/// c_k = 1/(S_j a_k) for k < j, with S_j = Σ_{k<j} 1/a_k.
pub fn flattening_sequence(weights: &[f64], j: usize) -> Vec<f64> {
    let s = neumaier(weights[..j].iter().map(|a| 1.0 / a));
    weights[..j].iter().map(|a| 1.0 / (s * a)).collect()
}

/// Least-squares slope and RMS residual of y against x.
fn fit_line(x: &[f64], y: &[f64]) -> (f64, f64) {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxx: f64 = x.iter().map(|v| (v - mx).powi(2)).sum();
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let slope = sxy / sxx;
    let rss: f64 = x.iter().zip(y).map(|(a, b)| (b - my - slope * (a - mx)).powi(2)).sum();
    (slope, (rss / n).sqrt())
}

/// Classifies Σ 1/a_k from partial sums at K = 2^10, 2^11, … ≤ `k_max`.
///
/// The term exponent θ in 1/a_k ~ k^θ is fitted on the upper half of the checkpoints.
/// θ > −1 means power growth and θ < −1 a summable series, both decided only when θ
/// clears the band [−1 − δ, −1 + δ] and the band is wider than ten fit residuals.
/// Inside the band the growth is logarithmic and the slope of S_K against log K is
/// reported. Labels: `class` (divergent | convergent) and `growth` (power | log | summable).
pub fn density_divergence(gamma: f64, m: i64, power: u32, k_max: usize) -> Result<AuditReport> {
    let checkpoints: Vec<usize> = (FIRST_CHECKPOINT..usize::BITS).map(|j| 1usize << j).take_while(|&k| k <= k_max).collect();
    if checkpoints.len() < MIN_CHECKPOINTS {
        return Err(Error::Domain(format!("K = {k_max} leaves fewer than {MIN_CHECKPOINTS} checkpoints from 2^10")));
    }
    let kk = *checkpoints.last().unwrap_or(&0);
    let a = density_weights(gamma, m, power, kk)?;
    let mut rep = AuditReport::new("density_divergence", &["k", "partial_sum", "term"])
        .param("gamma", gamma)
        .param("m", m as f64)
        .param("power", power as f64)
        .param("k_max", kk as f64)
        .with_slack(0.0);
    let (mut sum, mut comp) = (0.0f64, 0.0f64);
    let mut partial = Vec::with_capacity(checkpoints.len());
    let mut next = 0;
    for (k, ak) in a.iter().enumerate() {
        let v = 1.0 / ak;
        let t = sum + v;
        comp += if sum.abs() >= v.abs() { (sum - t) + v } else { (v - t) + sum };
        sum = t;
        if k + 1 == checkpoints[next] {
            partial.push(sum + comp);
            rep.push_row(vec![(k + 1) as f64, sum + comp, v]);
            next += 1;
        }
    }
    let upper = checkpoints.len() / 2;
    let lk: Vec<f64> = checkpoints[upper..].iter().map(|&k| ((k - 1) as f64).ln()).collect();
    let lt: Vec<f64> = checkpoints[upper..].iter().map(|&k| -a[k - 1].ln()).collect();
    let (theta, rms) = fit_line(&lk, &lt);
    let gap = theta + 1.0;
    rep.parameters.insert("theta".into(), theta);
    rep.parameters.insert("fit_residual".into(), rms);
    let s_k = *partial.last().unwrap_or(&0.0);
    rep.parameters.insert("partial_sum".into(), s_k);
    let (class, growth) = if gap.abs() <= EXPONENT_BAND {
        let logk: Vec<f64> = checkpoints.iter().map(|&k| (k as f64).ln()).collect();
        let (slope, _) = fit_line(&logk, &partial);
        rep.parameters.insert("log_slope".into(), slope);
        (if slope > 0.0 { "divergent" } else { "convergent" }, "log")
    } else if gap > 0.0 {
        ("divergent", "power")
    } else {
        let tail = a[kk - 1].recip() * kk as f64 / -gap;
        rep.parameters.insert("tail_estimate".into(), tail);
        ("convergent", "summable")
    };
    rep.label("class", class);
    rep.label("growth", growth);
    rep.record((gap.abs() - EXPONENT_BAND).abs().min(EXPONENT_BAND - 10.0 * rms));

    // flattening at the largest checkpoint
    let c = flattening_sequence(&a, kk);
    let total = neumaier(c.iter().copied());
    let energy = neumaier(a.iter().zip(&c).map(|(a, c)| a * c * c));
    let sum_err = (total - 1.0).abs();
    let energy_err = (energy * s_k - 1.0).abs();
    rep.parameters.insert("flatten_sum_error".into(), sum_err);
    rep.parameters.insert("flatten_energy_error".into(), energy_err);
    rep.record(FLATTEN_TOL - sum_err.max(energy_err));
    Ok(rep.finish())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::basis::{zernike_norm_sq, ZernikeIndex};

    #[test]
    fn weights_match_the_norm_formula() {
        for (g, m) in [(0.0, 0i64), (0.75, 3), (1.25, -2)] {
            let a = density_weights(g, m, 4, 40).unwrap();
            for (k, ak) in a.iter().enumerate() {
                let idx = ZernikeIndex::from_mode(m, k as u32);
                let want = (idx.n as f64 + 1.0 + g).powi(4) * zernike_norm_sq(g, idx);
                assert!((ak - want).abs() < 1e-12 * want);
            }
        }
    }

    #[test]
    fn harmonic_at_gamma_zero() {
        // 1/a_k = (2k+1)^{−1}/π, so S_K − log K/(2π) tends to a constant
        let r = density_divergence(0.0, 0, 2, 1 << 16).unwrap();
        assert_eq!(r.labels["class"], "divergent");
        assert_eq!(r.labels["growth"], "log");
        assert!((r.parameters["log_slope"] - 0.5 / std::f64::consts::PI).abs() < 1e-4);
        assert!(r.passed);
    }

    #[test]
    fn dichotomy_grid() {
        for g in [0.0, 0.25, 0.5, 0.75, 1.0, 1.25] {
            for p in [2, 4] {
                let r = density_divergence(g, 1, p, 1 << 16).unwrap();
                let divergent = p == 2 || g >= 1.0;
                assert_eq!(r.labels["class"] == "divergent", divergent, "γ={g} p={p}: {:?}", r.parameters);
                assert!(r.passed, "γ={g} p={p}: {:?}", r.parameters);
            }
        }
    }

    #[test]
    fn flattening_identities() {
        let a = density_weights(0.5, 0, 4, 5000).unwrap();
        let c = flattening_sequence(&a, 5000);
        let s = neumaier(a.iter().map(|v| 1.0 / v));
        assert!((neumaier(c.iter().copied()) - 1.0).abs() < 1e-14);
        assert!((neumaier(a.iter().zip(&c).map(|(a, c)| a * c * c)) * s - 1.0).abs() < 1e-14);
    }

    #[test]
    fn rejects_short_ranges() {
        assert!(density_divergence(0.0, 0, 2, 4000).is_err());
        assert!(density_divergence(-0.5, 0, 2, 1 << 14).is_err());
        assert!(density_divergence(0.5, 0, 3, 1 << 14).is_err());
    }
}
