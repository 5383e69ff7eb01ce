//! Regularized Dirichlet and Neumann traces, and the spectral right inverse of the
//! Neumann trace.

use crate::basis::{zernike_norm_sq, GammaParam, ZernikeIndex};
use crate::operator::ModeField;
use crate::spaces::{BoundaryFunction, SpectralVector};
use crate::{Complex64, Result};

/// τ^D of a single-mode field, as a function on the circle.
pub fn trace_dirichlet(field: &dyn ModeField) -> Result<BoundaryFunction> {
    GammaParam::subcritical(field.gamma())?;
    Ok(BoundaryFunction::single(field.mode(), field.dirichlet_trace()))
}

/// τ^N of a single-mode field; `c0` enters only at γ = 0.
pub fn trace_neumann(field: &dyn ModeField, c0: f64) -> Result<BoundaryFunction> {
    GammaParam::subcritical(field.gamma())?;
    Ok(BoundaryFunction::single(field.mode(), field.neumann_trace(c0)))
}

/// τ^D summed over a list of single-mode fields.
pub fn trace_dirichlet_sum(fields: &[&dyn ModeField]) -> Result<BoundaryFunction> {
    let mut out = BoundaryFunction::zero();
    for f in fields {
        out = out.add(&trace_dirichlet(*f)?);
    }
    Ok(out)
}

/// τ^N of a finite spectral expansion: mode m gets c_γ Σ_{n−2k=m} u_{n,k}/‖G_{n,k}‖.
pub fn trace_neumann_spectral(u: &SpectralVector) -> BoundaryFunction {
    let a = u.param().abs();
    let c = u.param().neumann_constant();
    let mut out = BoundaryFunction::zero();
    for (idx, v) in u.iter() {
        out.add_to(idx.mode(), v * (c / zernike_norm_sq(a, idx).sqrt()));
    }
    out
}

/// Lowest-degree right inverse of [`trace_neumann_spectral`]:
/// e^{imθ} ↦ (c_γ(1+|m|))⁻¹ Σ_{ℓ=0}^{|m|} G_{|m|+2ℓ}, stored in the unit basis.
pub fn right_inverse_neumann(gamma: f64, f: &BoundaryFunction) -> Result<SpectralVector> {
    let g = GammaParam::subcritical(gamma)?;
    let a = g.abs();
    let c = g.neumann_constant();
    let top = (3 * f.max_mode()) as u32;
    let mut u = SpectralVector::new(gamma, top)?;
    for (m, v) in f.iter() {
        let am = m.unsigned_abs() as u32;
        let share = v / (c * (1.0 + am as f64));
        for l in 0..=am {
            let idx = ZernikeIndex::from_mode(m, l);
            u.add_to(idx, share * zernike_norm_sq(a, idx).sqrt())?;
        }
    }
    Ok(u)
}

/// A spectral vector with zero Neumann trace built from `u` by subtracting, per
/// mode, the lowest-degree correction; the result lies in the minimal domain.
pub fn neumann_null_projection(u: &SpectralVector) -> Result<SpectralVector> {
    let tr = trace_neumann_spectral(u);
    let fix = right_inverse_neumann(u.gamma(), &tr)?;
    u.add(&fix.scale(Complex64::new(-1.0, 0.0)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operator::ConormalElement;
    use crate::spaces::{trace_neumann_spectral as tns, SpectralVector};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::PI;

    fn one() -> Complex64 {
        Complex64::new(1.0, 0.0)
    }

    #[test]
    fn dirichlet_examples() {
        let f = ConormalElement::from_real(0.5, 1, &[], &[1.0]).unwrap();
        assert_eq!(trace_dirichlet(&f).unwrap().get(1), one());
        let f = ConormalElement::from_real(0.5, 1, &[1.0, 2.0], &[]).unwrap();
        assert!(trace_dirichlet(&f).unwrap().is_zero());
        // 3 + x^{0.5}ρ²
        let smooth = crate::basis::RadialProfile::from_real(0, crate::basis::ProfileBasis::Interior, &[3.0]);
        let sing = crate::basis::RadialProfile::from_real(0, crate::basis::ProfileBasis::Interior, &[0.0, 1.0]);
        let f = ConormalElement::new(-0.5, smooth, sing).unwrap();
        assert_eq!(trace_dirichlet(&f).unwrap().get(0), Complex64::new(3.0, 0.0));
    }

    #[test]
    fn neumann_examples() {
        let f = ConormalElement::from_real(-0.5, 0, &[], &[1.0]).unwrap();
        assert_eq!(trace_neumann(&f, 4.0).unwrap().get(0), one());
        let f = ConormalElement::from_real(0.0, 0, &[1.0], &[]).unwrap();
        assert_eq!(trace_neumann(&f, 4.0).unwrap().get(0), Complex64::new(-2.0, 0.0));
        let p = crate::basis::zernike_profile(0.5, ZernikeIndex::new(5, 1).unwrap()).unwrap();
        let f = ConormalElement::smooth_only(0.5, p).unwrap();
        let t = trace_neumann(&f, 4.0).unwrap();
        assert!((t.get(3) - one()).norm() < 1e-13);
    }

    #[test]
    fn spectral_neumann_examples() {
        let u = SpectralVector::unit(0.5, ZernikeIndex::new(0, 0).unwrap()).unwrap();
        let t = tns(&u);
        assert!((t.get(0).re - 1.0 / (2.0 * PI / 3.0).sqrt()).abs() < 1e-15);
        assert!(tns(&SpectralVector::new(0.2, 4).unwrap()).is_zero());
    }

    #[test]
    fn neumann_right_inverse_layout() {
        let u = right_inverse_neumann(0.3, &BoundaryFunction::single(0, one())).unwrap();
        assert_eq!(u.len(), 1);
        let g = 0.5;
        let u = right_inverse_neumann(g, &BoundaryFunction::single(2, one())).unwrap();
        let idx: Vec<_> = u.iter().map(|(i, _)| (i.n, i.k)).collect();
        assert_eq!(idx, vec![(2, 0), (4, 1), (6, 2)]);
        for (i, v) in u.iter() {
            let raw = v / zernike_norm_sq(g, i).sqrt();
            assert!((raw.re - 1.0 / 3.0).abs() < 1e-15);
        }
        assert!((tns(&u).get(2) - one()).norm() < 1e-12);
    }

    #[test]
    fn right_inverse_identity_up_to_mode_32() {
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        for g in [-0.6, 0.0, 0.45] {
            let f = BoundaryFunction::random(&mut rng, 32);
            let u = right_inverse_neumann(g, &f).unwrap();
            let back = tns(&u);
            for m in -32..=32 {
                assert!((back.get(m) - f.get(m)).norm() < 1e-12 * f.get(m).norm().max(1.0));
            }
        }
    }

    #[test]
    fn null_projection_kills_the_trace() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let u = SpectralVector::random(&mut rng, 0.0, 6, 1.0).unwrap();
        let v = neumann_null_projection(&u).unwrap();
        assert!(tns(&v).sup_coeff() < 1e-13);
    }

    #[test]
    fn essential_regime_is_refused() {
        let f = crate::basis::RadialProfile::from_real(0, crate::basis::ProfileBasis::Interior, &[1.0]);
        assert!(ConormalElement::smooth_only(1.2, f).is_err());
        assert!(right_inverse_neumann(-1.0, &BoundaryFunction::single(0, one())).is_err());
    }
}
