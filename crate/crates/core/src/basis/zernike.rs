//! Generalized Zernike eigenfunctions G_{n,k}^γ = g(ρ) e^{i(n−2k)ω}, γ ≥ 0.
//!
//! The radial part is ρ^{|m|} P_{k'}^{(γ,|m|)}(2ρ²−1)/P_{k'}^{(γ,|m|)}(1) with
//! m = n − 2k and k' = (n−|m|)/2, so that g(1) = 1.

use super::profile::{ProfileBasis, RadialProfile};
use super::special::{jacobi_all, ln_binomial, log_gamma_unchecked};
use crate::{Complex64, Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ZernikeIndex {
    pub n: u32,
    pub k: u32,
}

impl ZernikeIndex {
    pub fn new(n: u32, k: u32) -> Result<Self> {
        if k > n {
            return Err(Error::Domain(format!("Zernike index needs k ≤ n, got ({n}, {k})")));
        }
        Ok(ZernikeIndex { n, k })
    }

    /// The index with angular mode m and radial degree k'.
    pub fn from_mode(m: i64, radial: u32) -> Self {
        let am = m.unsigned_abs() as u32;
        let n = am + 2 * radial;
        let k = ((n as i64 - m) / 2) as u32;
        ZernikeIndex { n, k }
    }

    pub fn mode(&self) -> i64 {
        self.n as i64 - 2 * self.k as i64
    }

    /// k' = (n − |m|)/2, the Jacobi degree.
    pub fn radial_degree(&self) -> u32 {
        (self.n - self.mode().unsigned_abs() as u32) / 2
    }
}

/// g, ∂_ρ g and ∂²_ρ g at one radius.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ZernikeSample {
    pub value: f64,
    pub d_rho: f64,
    pub d2_rho: f64,
}

fn check_gamma(gamma: f64) -> Result<()> {
    if !(gamma >= 0.0) || !gamma.is_finite() {
        return Err(Error::Domain(format!("Zernike basis needs γ ≥ 0, got {gamma}")));
    }
    Ok(())
}

/// ln P_{k}^{(γ,β)}(1) = ln C(k+γ, k).
fn ln_jacobi_at_one(k: u32, gamma: f64) -> f64 {
    ln_binomial(k as f64 + gamma, k as f64)
}

/// (n_{n,k}^γ)² = ‖G_{n,k}^γ‖²_{L²_γ}.
pub fn zernike_norm_sq(gamma: f64, idx: ZernikeIndex) -> f64 {
    let n = idx.n as f64;
    let k = idx.k as f64;
    let lg = log_gamma_unchecked;
    let ln = lg(n - k + 1.0) + 2.0 * lg(gamma + 1.0) + lg(k + 1.0)
        - lg(k + gamma + 1.0)
        - lg(n - k + gamma + 1.0);
    std::f64::consts::PI / (n + gamma + 1.0) * ln.exp()
}

/// Radial part of G_{n,k}^γ with coefficients in the interior basis ρ^{|m|+2j}.
pub fn zernike_profile(gamma: f64, idx: ZernikeIndex) -> Result<RadialProfile> {
    zernike_profile_in(gamma, idx, ProfileBasis::Interior)
}

/// Radial part of G_{n,k}^γ with coefficients in the requested basis.
pub fn zernike_profile_in(gamma: f64, idx: ZernikeIndex, basis: ProfileBasis) -> Result<RadialProfile> {
    check_gamma(gamma)?;
    ZernikeIndex::new(idx.n, idx.k)?;
    let m = idx.mode();
    let am = m.unsigned_abs() as f64;
    let kp = idx.radial_degree() as usize;
    let coeffs = match basis {
        ProfileBasis::Interior => {
            // eigen-relation recurrence, then g(1) = 1
            let e = (idx.n as f64 + 1.0 + gamma).powi(2);
            let mut c = vec![1.0];
            for j in 0..kp {
                let jf = j as f64;
                let next = c[j] * ((am + 2.0 * jf + gamma + 1.0).powi(2) - e)
                    / (4.0 * (jf + 1.0) * (am + jf + 1.0));
                c.push(next);
            }
            let total: f64 = c.iter().sum();
            c.iter().map(|v| v / total).collect::<Vec<_>>()
        }
        ProfileBasis::Boundary => {
            // (−k')_j (k'+γ+|m|+1)_j / ((γ+1)_j j!)
            let kf = kp as f64;
            let mut c = vec![1.0];
            for j in 0..kp {
                let jf = j as f64;
                let next =
                    c[j] * (jf - kf) * (kf + gamma + am + 1.0 + jf) / ((gamma + 1.0 + jf) * (jf + 1.0));
                c.push(next);
            }
            c
        }
    };
    Ok(RadialProfile::new(
        m,
        basis,
        coeffs.into_iter().map(|v| Complex64::new(v, 0.0)).collect(),
    ))
}

/// Stable pointwise evaluation of g and its ρ-derivatives through the Jacobi recurrence.
pub fn zernike_eval(gamma: f64, idx: ZernikeIndex, rho: f64) -> Result<ZernikeSample> {
    check_gamma(gamma)?;
    ZernikeIndex::new(idx.n, idx.k)?;
    if !(0.0..=1.0).contains(&rho) {
        return Err(Error::Domain(format!("radius {rho} outside [0, 1]")));
    }
    let am = idx.mode().unsigned_abs() as u32;
    let kp = idx.radial_degree();
    let x = (1.0 - rho) * (1.0 + rho);
    let t = 1.0 - 2.0 * x;
    let beta = am as f64;
    let kf = kp as f64;
    let norm = ln_jacobi_at_one(kp, gamma).exp();
    let p = jacobi_all(kp as usize, gamma, beta, t)[kp as usize] / norm;
    let pt = if kp >= 1 {
        0.5 * (kf + gamma + beta + 1.0) * jacobi_all(kp as usize - 1, gamma + 1.0, beta + 1.0, t)[kp as usize - 1]
            / norm
    } else {
        0.0
    };
    let ptt = if kp >= 2 {
        0.25 * (kf + gamma + beta + 1.0)
            * (kf + gamma + beta + 2.0)
            * jacobi_all(kp as usize - 2, gamma + 2.0, beta + 2.0, t)[kp as usize - 2]
            / norm
    } else {
        0.0
    };
    Ok(radial_chain(am, rho, p, pt, ptt))
}

/// g = ρ^a p(t), t = 2ρ² − 1, differentiated in ρ.
fn radial_chain(am: u32, rho: f64, p: f64, pt: f64, ptt: f64) -> ZernikeSample {
    let a = am as i32;
    let af = a as f64;
    let ra = rho.powi(a);
    let ra1 = if a >= 1 { rho.powi(a - 1) } else { 0.0 };
    let ra2 = if a >= 2 { rho.powi(a - 2) } else { 0.0 };
    ZernikeSample {
        value: ra * p,
        d_rho: af * ra1 * p + 4.0 * ra * rho * pt,
        d2_rho: af * (af - 1.0) * ra2 * p + (8.0 * af + 4.0) * ra * pt + 16.0 * ra * rho * rho * ptt,
    }
}

/// Ĝ/ρ^{|m|} for all radial degrees 0..=kmax of mode m at t = 2ρ² − 1.
pub(crate) fn unit_radial_table(gamma: f64, m: i64, kmax: usize, t: f64) -> Vec<f64> {
    let beta = m.unsigned_abs() as f64;
    jacobi_all(kmax, gamma, beta, t)
        .into_iter()
        .enumerate()
        .map(|(kp, p)| p * unit_scale(gamma, m, kp))
        .collect()
}

fn unit_scale(gamma: f64, m: i64, kp: usize) -> f64 {
    let idx = ZernikeIndex::from_mode(m, kp as u32);
    (-ln_jacobi_at_one(kp as u32, gamma)).exp() / zernike_norm_sq(gamma, idx).sqrt()
}

/// Values and ρ-derivatives of the unit-normalized Ĝ = G/n for all radial degrees
/// 0..=kmax of mode m at one radius, in a single recurrence pass.
pub(crate) fn unit_mode_table(gamma: f64, m: i64, kmax: usize, x: f64, rho: f64) -> Vec<(f64, f64)> {
    let am = m.unsigned_abs() as u32;
    let beta = am as f64;
    let t = 1.0 - 2.0 * x;
    let vals = jacobi_all(kmax, gamma, beta, t);
    let ders = if kmax >= 1 { jacobi_all(kmax - 1, gamma + 1.0, beta + 1.0, t) } else { Vec::new() };
    (0..=kmax)
        .map(|kp| {
            let scale = unit_scale(gamma, m, kp);
            let p = vals[kp] * scale;
            let pt = if kp >= 1 {
                0.5 * (kp as f64 + gamma + beta + 1.0) * ders[kp - 1] * scale
            } else {
                0.0
            };
            let s = radial_chain(am, rho, p, pt, 0.0);
            (s.value, s.d_rho)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::basis::quadrature::{quad_rule, WeightKind};
    use std::f64::consts::PI;

    fn idx(n: u32, k: u32) -> ZernikeIndex {
        ZernikeIndex::new(n, k).unwrap()
    }

    #[test]
    fn index_bookkeeping() {
        let i = idx(5, 1);
        assert_eq!(i.mode(), 3);
        assert_eq!(i.radial_degree(), 1);
        assert_eq!(ZernikeIndex::from_mode(3, 1), i);
        assert_eq!(ZernikeIndex::from_mode(-3, 1), idx(5, 4));
        assert!(ZernikeIndex::new(2, 3).is_err());
    }

    #[test]
    fn low_degree_profiles() {
        let g = 0.37;
        let p = zernike_profile(g, idx(0, 0)).unwrap();
        assert_eq!(p.coeffs(), &[Complex64::new(1.0, 0.0)]);
        let p = zernike_profile(g, idx(1, 0)).unwrap();
        assert_eq!((p.m(), p.coeffs().len()), (1, 1));
        let p = zernike_profile(g, idx(2, 1)).unwrap();
        let a = -1.0 / (g + 1.0);
        let b = (g + 2.0) / (g + 1.0);
        assert!((p.coeffs()[0].re - a).abs() < 1e-15 && (p.coeffs()[1].re - b).abs() < 1e-15);
        let p0 = zernike_profile(0.0, idx(2, 1)).unwrap();
        assert!((p0.coeffs()[0].re + 1.0).abs() < 1e-15 && (p0.coeffs()[1].re - 2.0).abs() < 1e-15);
    }

    #[test]
    fn norm_formula_values() {
        assert!((zernike_norm_sq(0.0, idx(0, 0)) - PI).abs() < 1e-14);
        assert!((zernike_norm_sq(0.0, idx(1, 0)) - PI / 2.0).abs() < 1e-14);
        assert!((zernike_norm_sq(0.5, idx(0, 0)) - 2.0 * PI / 3.0).abs() < 1e-14);
    }

    #[test]
    fn bases_agree_pointwise() {
        let g = 0.75;
        for (n, k) in [(6, 2), (9, 0), (12, 7)] {
            let a = zernike_profile_in(g, idx(n, k), ProfileBasis::Interior).unwrap();
            let b = zernike_profile_in(g, idx(n, k), ProfileBasis::Boundary).unwrap();
            for r in [0.1, 0.5, 0.9, 1.0] {
                let e = zernike_eval(g, idx(n, k), r).unwrap().value;
                assert!((a.eval(r).re - e).abs() < 1e-11);
                assert!((b.eval(r).re - e).abs() < 1e-11);
            }
        }
    }

    #[test]
    fn boundary_value_is_one() {
        for n in 0..12 {
            for k in 0..=n {
                let s = zernike_eval(0.25, idx(n, k), 1.0).unwrap();
                assert!((s.value - 1.0).abs() < 1e-13);
                let b = zernike_profile_in(0.25, idx(n, k), ProfileBasis::Boundary).unwrap();
                assert_eq!(b.at_boundary(), Complex64::new(1.0, 0.0));
            }
        }
    }

    #[test]
    fn quadrature_norms_and_orthogonality() {
        let g = 0.5;
        let rule = quad_rule(40, WeightKind::PowerGamma(g)).unwrap();
        for m in [0i64, 3] {
            let ids: Vec<_> = (0..6).map(|kp| ZernikeIndex::from_mode(m, kp)).collect();
            for a in &ids {
                for b in &ids {
                    let v = rule.integrate_disk(|r| {
                        zernike_eval(g, *a, r).unwrap().value * zernike_eval(g, *b, r).unwrap().value
                    });
                    if a == b {
                        let want = zernike_norm_sq(g, *a);
                        assert!((v - want).abs() < 1e-12 * want);
                    } else {
                        assert!(v.abs() < 1e-12);
                    }
                }
            }
        }
    }

    #[test]
    fn table_matches_single_evaluation() {
        let (g, m) = (0.9, -4);
        let r: f64 = 0.77;
        let x = 1.0 - r * r;
        let table = unit_mode_table(g, m, 6, x, r);
        for (kp, (v, d)) in table.iter().enumerate() {
            let i = ZernikeIndex::from_mode(m, kp as u32);
            let s = zernike_eval(g, i, r).unwrap();
            let n = zernike_norm_sq(g, i).sqrt();
            assert!((v - s.value / n).abs() < 1e-13);
            assert!((d - s.d_rho / n).abs() < 1e-12);
        }
    }

    #[test]
    fn rejects_negative_gamma() {
        assert!(zernike_profile(-0.5, idx(0, 0)).is_err());
        assert!(zernike_eval(-0.5, idx(0, 0), 0.5).is_err());
    }
}
