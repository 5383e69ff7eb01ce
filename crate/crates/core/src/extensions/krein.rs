//! Resolvents of the extensions A_B = L restricted to {ι τ^D u = B ι' τ^N u_D}
//! through the Krein formula
//!
//! ```text
//! (A_B − λ)⁻¹ = (L_D − λ)⁻¹ + P(λ)(1 − B M(λ))⁻¹ B P(λ̄)*,
//! ```
//!
//! with ι, ι' the trace-space weights w_m and 1/w_m. Every object is diagonal in m.
//! Only modes |m| ≤ cutoff are corrected, so the extension actually solved is the
//! one for B truncated to those modes.

use std::f64::consts::TAU;

use crate::basis::{GammaParam, RuleSpec};
use crate::extensions::kernel::KernelMode;
use crate::extensions::maxdomain::MaxDomainElement;
use crate::extensions::multipliers::{trace_weight, FourierMultiplier};
use crate::extensions::resolvent::{check_admissible_mode, dirichlet_resolvent};
use crate::operator::{l2_pair, ModeField};
use crate::spaces::{trace_neumann_spectral, BoundaryFunction, SpectralVector};
use crate::{Complex64, Error, Result};

/// |1 − B_m M_m(λ)| at or below this counts as λ in the spectrum of A_B.
pub const KREIN_TOL: f64 = 1e-9;

/// A posteriori checks of one Krein solve.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct KreinCertificate {
    /// ‖(L − λ)u − rhs‖ in L²_γ.
    pub operator_residual: f64,
    /// ‖B ι'τ^N u_D − ι τ^D u‖ in ℓ² over the corrected modes.
    pub boundary_residual: f64,
    /// Largest gap between P(λ̄)* rhs by quadrature and by the Neumann trace of (L_D − λ)⁻¹rhs.
    pub adjoint_discrepancy: f64,
    /// Smallest |1 − B_m M_m(λ)| met.
    pub min_denominator: f64,
    pub rhs_norm: f64,
}

/// Per-mode diagnostics of a Krein solve.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct KreinModeRecord {
    pub m: i64,
    pub coefficient: Complex64,
    pub denominator: Complex64,
    /// |B_m ι'τ^N u_D − ι τ^D u| on this mode.
    pub boundary_residual: f64,
    /// ‖(L − λ)U_m‖ in L²_γ.
    pub operator_residual: f64,
}

/// u = u_D + Σ_m U_m with U_m ∈ ker(L − λ) on mode m.
#[derive(Clone, Debug)]
pub struct KreinSolution {
    pub gamma: f64,
    pub lambda: Complex64,
    pub dirichlet_part: SpectralVector,
    pub correction: Vec<KernelMode>,
    /// ι τ^D U_m = (1 − B_m M_m)⁻¹ B_m (P(λ̄)* rhs)_m.
    pub coefficients: BoundaryFunction,
    pub certificate: KreinCertificate,
    pub modes: Vec<KreinModeRecord>,
}

impl KreinSolution {
    pub fn to_element(&self) -> MaxDomainElement {
        MaxDomainElement { spectral: self.dirichlet_part.clone(), conormal: Vec::new(), kernel: self.correction.clone() }
    }

    /// ⟨u, v⟩ in L²_γ.
    pub fn pair_spectral(&self, v: &SpectralVector, spec: &RuleSpec) -> Result<Complex64> {
        self.to_element().pair(&MaxDomainElement::from_spectral(v.clone()), spec)
    }
}

/// ⟨u, v⟩ for finite spectral vectors in the orthonormal basis.
fn coefficient_pair(u: &SpectralVector, v: &SpectralVector) -> Complex64 {
    u.iter().map(|(idx, a)| a * v.get(idx).conj()).sum()
}

fn l2_norm(u: &SpectralVector) -> f64 {
    coefficient_pair(u, u).re.sqrt()
}

/// 1 − B_m M_m(λ) from the kernel solution on mode m.
pub fn krein_denominator(gamma: f64, lambda: Complex64, b: Complex64, m: i64, c0: f64) -> Result<Complex64> {
    let w = trace_weight(gamma, m);
    let mu = KernelMode::new(gamma, lambda, m, Complex64::new(1.0, 0.0))?.dn_value(c0);
    Ok(1.0 - b * mu / (w * w))
}

pub fn krein_resolvent(
    gamma: f64,
    lambda: Complex64,
    b: &FourierMultiplier,
    rhs: &SpectralVector,
    cutoff: i64,
    c0: f64,
    spec: &RuleSpec,
) -> Result<KreinSolution> {
    GammaParam::subcritical(gamma)?;
    let u_d = dirichlet_resolvent(gamma, lambda, rhs)?;
    let tn = trace_neumann_spectral(&u_d);
    let mut cert = KreinCertificate { min_denominator: f64::INFINITY, rhs_norm: l2_norm(rhs), ..Default::default() };
    let mut correction = Vec::new();
    let mut coefficients = BoundaryFunction::zero();
    let mut modes = Vec::new();
    let mut boundary_sq = 0.0;
    let mut residual_sq = 0.0;
    for m in -cutoff..=cutoff {
        let bm = b.at(m)?;
        if bm == Complex64::default() {
            continue;
        }
        check_admissible_mode(gamma, lambda, m)?;
        let w = trace_weight(gamma, m);
        let one = Complex64::new(1.0 / w, 0.0);
        let kernel = KernelMode::new(gamma, lambda, m, one)?;
        let weyl = kernel.neumann_trace(c0) / w;
        let denom = 1.0 - bm * weyl;
        cert.min_denominator = cert.min_denominator.min(denom.norm());
        if denom.norm() <= KREIN_TOL {
            return Err(Error::KreinCollision { mode: m, modulus: denom.norm() });
        }
        // (P(λ̄)* rhs)_m = ⟨rhs, P(λ̄)e_m⟩/(2π), by Green's second identity
        let conj_kernel = if lambda.im == 0.0 { kernel.clone() } else { KernelMode::new(gamma, lambda.conj(), m, one)? };
        let adjoint = l2_pair(&rhs.mode_component(m), &conj_kernel, spec)? / TAU;
        cert.adjoint_discrepancy = cert.adjoint_discrepancy.max((adjoint - tn.get(m) / w).norm());
        let coeff = bm * adjoint / denom;
        if coeff == Complex64::default() {
            continue;
        }
        coefficients.add_to(m, coeff);
        let u = kernel.with_dirichlet(coeff / w);
        let gap = bm * (tn.get(m) + u.neumann_trace(c0)) / w - u.dirichlet_trace() * w;
        let op = u.residual_norms(spec)?.0;
        boundary_sq += gap.norm_sqr();
        residual_sq += op * op;
        modes.push(KreinModeRecord { m, coefficient: coeff, denominator: denom, boundary_residual: gap.norm(), operator_residual: op });
        correction.push(u);
    }
    let back = u_d.map_eigen(|e| Complex64::new(e, 0.0) - lambda);
    let spectral_residual = l2_norm(&back.add(&rhs.scale(Complex64::new(-1.0, 0.0)))?);
    cert.operator_residual = spectral_residual + residual_sq.sqrt();
    cert.boundary_residual = boundary_sq.sqrt();
    Ok(KreinSolution { gamma, lambda, dirichlet_part: u_d, correction, coefficients, certificate: cert, modes })
}

/// Real λ in [lo, hi] where 1 − b M_m(λ) vanishes, located by sign changes on a
/// uniform grid of `samples` points and refined by bisection. Grid cells containing a
/// Dirichlet eigenvalue of mode m are skipped, since M_m has a pole there.
pub fn robin_scan(gamma: f64, b: f64, m: i64, lo: f64, hi: f64, samples: usize, c0: f64) -> Result<Vec<f64>> {
    let g = GammaParam::subcritical(gamma)?;
    if !(lo < hi) || samples < 2 {
        return Err(Error::Domain("scan needs lo < hi and at least two samples".into()));
    }
    let bc = Complex64::new(b, 0.0);
    let d = |l: f64| krein_denominator(gamma, Complex64::new(l, 0.0), bc, m, c0).map(|v| v.re);
    let am = m.unsigned_abs() as u32;
    let pole_in = |a: f64, z: f64| (0..).map(|k| g.eigenvalue(am + 2 * k)).take_while(|&e| e <= z).any(|e| e >= a);
    let step = (hi - lo) / (samples - 1) as f64;
    let grid: Vec<f64> = (0..samples).map(|i| lo + step * i as f64).collect();
    let mut roots = Vec::new();
    let mut prev: Option<(f64, f64)> = None;
    for &l in &grid {
        let v = match d(l) {
            Ok(v) => v,
            Err(Error::SpectralCollision { .. }) => {
                prev = None;
                continue;
            }
            Err(e) => return Err(e),
        };
        if let Some((a, va)) = prev {
            if va * v <= 0.0 && !pole_in(a, l) {
                let (mut x0, mut x1, mut v0) = (a, l, va);
                for _ in 0..80 {
                    let mid = 0.5 * (x0 + x1);
                    let vm = d(mid)?;
                    if v0 * vm <= 0.0 {
                        x1 = mid;
                    } else {
                        x0 = mid;
                        v0 = vm;
                    }
                }
                roots.push(0.5 * (x0 + x1));
            }
        }
        prev = Some((l, v));
    }
    Ok(roots)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::basis::ZernikeIndex;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn c(v: f64) -> Complex64 {
        Complex64::new(v, 0.0)
    }

    #[test]
    fn zero_symbol_is_the_dirichlet_resolvent() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let rhs = SpectralVector::random(&mut rng, 0.5, 20, 1.0).unwrap();
        let s = krein_resolvent(0.5, c(0.0), &FourierMultiplier::zero(), &rhs, 16, 4.0, &RuleSpec::default()).unwrap();
        assert_eq!(s.dirichlet_part, dirichlet_resolvent(0.5, c(0.0), &rhs).unwrap());
        assert!(s.correction.is_empty());
    }

    #[test]
    fn robin_certificate() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let spec = RuleSpec::default();
        for g in [-0.5, 0.0, 0.5] {
            let rhs = SpectralVector::random(&mut rng, g, 24, 1.0).unwrap();
            for beta in [0.1, 1.0, 10.0] {
                let s = krein_resolvent(g, c(0.0), &FourierMultiplier::real(beta), &rhs, 24, 4.0, &spec).unwrap();
                let k = s.certificate;
                assert!(k.operator_residual < 1e-6 * k.rhs_norm, "γ={g} β={beta}: {k:?}");
                assert!(k.boundary_residual < 1e-6 * k.rhs_norm, "γ={g} β={beta}: {k:?}");
                assert!(k.adjoint_discrepancy < 1e-9 * k.rhs_norm, "γ={g} β={beta}: {k:?}");
            }
        }
    }

    #[test]
    fn symmetric_for_real_symbol_and_lambda() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let spec = RuleSpec::default();
        let b = FourierMultiplier::real(1.0);
        for g in [-0.5, 0.0, 0.5] {
            let u = SpectralVector::random(&mut rng, g, 10, 1.0).unwrap();
            let v = SpectralVector::random(&mut rng, g, 10, 1.0).unwrap();
            let ru = krein_resolvent(g, c(-0.5), &b, &u, 10, 4.0, &spec).unwrap();
            let rv = krein_resolvent(g, c(-0.5), &b, &v, 10, 4.0, &spec).unwrap();
            let a = ru.pair_spectral(&v, &spec).unwrap();
            let z = rv.pair_spectral(&u, &spec).unwrap().conj();
            assert!((a - z).norm() < 1e-8 * a.norm(), "γ={g}: {a} vs {z}");
        }
    }

    #[test]
    fn robin_eigenvalue_interlaces_and_collides() {
        let gamma = 0.5;
        let g = GammaParam::subcritical(gamma).unwrap();
        let m = 1;
        let (e0, e1) = (g.eigenvalue(1), g.eigenvalue(3));
        let roots = robin_scan(gamma, 2.0, m, e0 + 1e-3, e1 - 1e-3, 60, 4.0).unwrap();
        assert_eq!(roots.len(), 1, "{roots:?}");
        let r = roots[0];
        assert!(e0 < r && r < e1);
        let rhs = SpectralVector::unit(gamma, ZernikeIndex::from_mode(m, 0)).unwrap();
        let err = krein_resolvent(gamma, c(r), &FourierMultiplier::real(2.0), &rhs, 2, 4.0, &RuleSpec::default());
        assert!(matches!(err, Err(Error::KreinCollision { mode: -1 | 1, .. })), "{err:?}");
    }
}
