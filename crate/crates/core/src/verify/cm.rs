//! The per-mode constants C_{m;s,γ} and C'_m governing boundedness of the Neumann
//! trace and its right inverse on the Sobolev scale.

use crate::basis::{bracket, gauss_legendre, log_gamma};
use crate::verify::AuditReport;
use crate::{Error, Result};

/// Allowed factor between any C_m and the range seen on the burn-in prefix.
pub const PLATEAU_FACTOR: f64 = 1.5;

/// Number of leading modes defining the reference range.
pub const BURN_IN: usize = 50;

/// log(x!/(x+γ)!) without cancelling two large log-gammas: for large x the
/// expansion (a−b) log z + Σ_k (−1)^{k+1}(B_{k+1}(a) − B_{k+1}(b))/(k(k+1)z^k) of
/// log Γ(z+a) − log Γ(z+b) with z = x+1, a = 0, b = γ.
fn ln_factorial_ratio(x: f64, gamma: f64) -> Result<f64> {
    if x < 1e4 {
        return Ok(log_gamma(x + 1.0)? - log_gamma(x + gamma + 1.0)?);
    }
    let z = x + 1.0;
    let g = gamma;
    let b2 = -(g * g - g);
    let b3 = -(g * g * g - 1.5 * g * g + 0.5 * g);
    let b4 = -(g.powi(4) - 2.0 * g.powi(3) + g * g);
    Ok(-g * z.ln() + b2 / (2.0 * z) - b3 / (6.0 * z * z) + b4 / (12.0 * z * z * z))
}

/// b_ℓ = (m+ℓ)! ℓ! / ((m+ℓ+γ)! (ℓ+γ)!) for real ℓ, so that the squared norm of
/// G_{m+2ℓ,ℓ} is π(γ!)² b_ℓ/(m+2ℓ+1+γ).
fn ln_b(gamma: f64, m: f64, l: f64) -> Result<f64> {
    Ok(ln_factorial_ratio(m + l, gamma)? + ln_factorial_ratio(l, gamma)?)
}

/// ln of the C_m summand (m+2ℓ+1+γ)^{1−2s}/b_ℓ, before the prefactor.
fn ln_summand(s: f64, gamma: f64, m: f64, l: f64) -> Result<f64> {
    Ok((1.0 - 2.0 * s) * (m + 2.0 * l + 1.0 + gamma).ln() - ln_b(gamma, m, l)?)
}

/// Σ_{ℓ≥L} of the C_m summand by Euler–Maclaurin: the integral from L (in u = log ℓ on
/// graded panels), half the first term and the first derivative correction.
fn tail(s: f64, gamma: f64, m: f64, start: f64) -> Result<f64> {
    let decay = 2.0 * s - 1.0 - 2.0 * gamma;
    let (t, w) = gauss_legendre(20)?;
    let u0 = start.ln();
    // the integrand in u behaves like e^{−(decay−1)u}; panels double up to width 16
    let length = 40.0 / (decay - 1.0);
    let mut integral = 0.0;
    let (mut a, mut width) = (u0, 1.0);
    while a < u0 + length {
        for (&t, &w) in t.iter().zip(&w) {
            let l = (a + 0.5 * width * (1.0 + t)).exp();
            integral += 0.5 * width * w * l * ln_summand(s, gamma, m, l)?.exp();
        }
        a += width;
        width = (2.0 * width).min(16.0);
    }
    let f = |l: f64| ln_summand(s, gamma, m, l).map(f64::exp);
    let h = 1e-3 * start;
    let deriv = (f(start + h)? - f(start - h)?) / (2.0 * h);
    Ok(integral + 0.5 * f(start)? - deriv / 12.0)
}

/// C_{m;s,γ} = ⟨m⟩^{2s−2γ−2}/(π(γ!)²) Σ_ℓ (m+2ℓ+1+γ)^{1−2s} (m+ℓ+γ)!(ℓ+γ)!/((m+ℓ)!ℓ!).
///
/// Direct summation to ℓ = 2|m| + 64 by ratio recurrence, then the tail.
pub fn cm_value(s: f64, gamma: f64, m: i64) -> Result<f64> {
    check(s, gamma)?;
    let mf = m.unsigned_abs() as f64;
    let stop = 2 * m.unsigned_abs() as usize + 64;
    let mut ln_b = ln_b(gamma, mf, 0.0)?;
    let mut sum = 0.0;
    for l in 0..stop {
        let lf = l as f64;
        sum += ((1.0 - 2.0 * s) * (mf + 2.0 * lf + 1.0 + gamma).ln() - ln_b).exp();
        ln_b += ((mf + lf + 1.0) * (lf + 1.0) / ((mf + lf + 1.0 + gamma) * (lf + 1.0 + gamma))).ln();
    }
    sum += tail(s, gamma, mf, stop as f64)?;
    let pre = bracket(m).powf(2.0 * s - 2.0 * gamma - 2.0) / (std::f64::consts::PI * log_gamma(gamma + 1.0)?.exp().powi(2));
    Ok(pre * sum)
}

/// C'_m = ⟨m⟩^{2γ−2s} Σ_{ℓ≤|m|} (m+2ℓ+1+γ)^{2s} ‖G_{|m|+2ℓ,ℓ}‖².
pub fn cm_prime_value(s: f64, gamma: f64, m: i64) -> Result<f64> {
    check(s, gamma)?;
    let mf = m.unsigned_abs() as f64;
    let ln_fact = 2.0 * log_gamma(gamma + 1.0)?;
    let mut ln_b = ln_b(gamma, mf, 0.0)?;
    let mut sum = 0.0;
    for l in 0..=m.unsigned_abs() {
        let lf = l as f64;
        let e = mf + 2.0 * lf + 1.0 + gamma;
        sum += std::f64::consts::PI * ((2.0 * s - 1.0) * e.ln() + ln_fact + ln_b).exp();
        ln_b += ((mf + lf + 1.0) * (lf + 1.0) / ((mf + lf + 1.0 + gamma) * (lf + 1.0 + gamma))).ln();
    }
    Ok(bracket(m).powf(2.0 * gamma - 2.0 * s) * sum)
}

fn check(s: f64, gamma: f64) -> Result<()> {
    if !(0.0..1.0).contains(&gamma) || !(s > 1.0 + gamma) {
        return Err(Error::Domain(format!("need γ ∈ [0, 1) and s > 1 + γ, got s = {s}, γ = {gamma}")));
    }
    Ok(())
}

/// Worst log-distance past the allowed factor: ≥ 0 iff every value lies in
/// [lo/factor, hi·factor].
fn plateau_margin(values: &[f64], lo: f64, hi: f64) -> f64 {
    values
        .iter()
        .map(|&v| PLATEAU_FACTOR.ln() - (lo / v).ln().max((v / hi).ln()).max(0.0))
        .fold(f64::INFINITY, f64::min)
}

/// C_m and C'_m for 0 ≤ m ≤ m_max, each checked against the range of its first
/// [`BURN_IN`] values. Only stability is asserted, never specific constants.
pub fn cm_table(s: f64, gamma: f64, m_max: usize) -> Result<AuditReport> {
    check(s, gamma)?;
    let mut rep = AuditReport::new("cm_table", &["m", "c_m", "c_prime_m"]).param("s", s).param("gamma", gamma).param("m_max", m_max as f64);
    let mut cs = Vec::with_capacity(m_max + 1);
    let mut cps = Vec::with_capacity(m_max + 1);
    for m in 0..=m_max as i64 {
        let (c, cp) = (cm_value(s, gamma, m)?, cm_prime_value(s, gamma, m)?);
        if !(c.is_finite() && c > 0.0 && cp.is_finite() && cp > 0.0) {
            return Err(Error::Convergence(format!("C_m summation failed at m = {m}")));
        }
        rep.push_row(vec![m as f64, c, cp]);
        cs.push(c);
        cps.push(cp);
    }
    let burn = BURN_IN.min(cs.len());
    for (name, vals) in [("c_m", &cs), ("c_prime_m", &cps)] {
        let lo = vals[..burn].iter().copied().fold(f64::INFINITY, f64::min);
        let hi = vals[..burn].iter().copied().fold(0.0, f64::max);
        let all_lo = vals.iter().copied().fold(f64::INFINITY, f64::min);
        let all_hi = vals.iter().copied().fold(0.0, f64::max);
        rep.parameters.insert(format!("{name}_min"), all_lo);
        rep.parameters.insert(format!("{name}_max"), all_hi);
        rep.samples += vals.len() - 1;
        rep.record(plateau_margin(vals, lo, hi));
    }
    Ok(rep.finish())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn odd_zeta_value() {
        // s = 2, γ = 0, m = 0: Σ (2ℓ+1)^{−3}/π = (7/8)ζ(3)/π
        let c = cm_value(2.0, 0.0, 0).unwrap();
        let want = 1.051799790264645 / std::f64::consts::PI;
        assert!((c - want).abs() < 1e-12 * want, "{c} vs {want}");
    }

    #[test]
    fn summation_matches_brute_force() {
        // direct log-gamma summation to a far cutoff plus the integral tail
        let (s, g, m) = (2.0, 0.5, 7i64);
        let mf = m as f64;
        let mut direct = 0.0;
        for l in 0..20000 {
            direct += ln_summand(s, g, mf, l as f64).unwrap().exp();
        }
        direct += tail(s, g, mf, 20000.0).unwrap();
        let pre = bracket(m).powf(2.0 * s - 2.0 * g - 2.0) / (std::f64::consts::PI * log_gamma(g + 1.0).unwrap().exp().powi(2));
        let c = cm_value(s, g, m).unwrap();
        assert!((c - pre * direct).abs() < 1e-10 * c);
    }

    #[test]
    fn prime_uses_the_norm_formula() {
        use crate::basis::{zernike_norm_sq, ZernikeIndex};
        let (s, g, m) = (2.0, 0.25, 5i64);
        let want: f64 = (0..=5u32)
            .map(|l| {
                let idx = ZernikeIndex::new(5 + 2 * l, l).unwrap();
                (idx.n as f64 + 1.0 + g).powf(2.0 * s) * zernike_norm_sq(g, idx)
            })
            .sum::<f64>()
            * bracket(m).powf(2.0 * g - 2.0 * s);
        let c = cm_prime_value(s, g, m).unwrap();
        assert!((c - want).abs() < 1e-12 * want);
    }

    #[test]
    fn factorial_ratio_branches_agree() {
        for g in [0.25, 0.5, 0.75] {
            let x = 1e4;
            let direct = log_gamma(x + 1.0).unwrap() - log_gamma(x + g + 1.0).unwrap();
            let series = ln_factorial_ratio(x + 1e-9, g).unwrap();
            assert!((direct - series).abs() < 1e-10, "{direct} vs {series}");
        }
    }

    #[test]
    fn mode_symmetry_and_domain() {
        assert_eq!(cm_value(2.0, 0.5, 9).unwrap(), cm_value(2.0, 0.5, -9).unwrap());
        assert_eq!(cm_prime_value(2.0, 0.5, 9).unwrap(), cm_prime_value(2.0, 0.5, -9).unwrap());
        assert!(cm_value(1.2, 0.5, 0).is_err());
        assert!(cm_table(2.0, 1.0, 10).is_err());
    }

    #[test]
    fn plateau_is_stable() {
        let r = cm_table(2.0, 0.5, 2000).unwrap();
        assert!(r.passed, "{:?}", r.parameters);
        assert_eq!(r.rows.len(), 2001);
    }
}
