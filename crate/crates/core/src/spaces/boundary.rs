//! Trigonometric polynomials on the circle and their weighted sequence norms.

use std::collections::BTreeMap;

use rand::Rng;

use crate::basis::{bracket, GammaParam};
use crate::{Complex64, Result};

/// Σ_m f_m e^{imθ} with finitely many nonzero coefficients.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct BoundaryFunction {
    coeffs: BTreeMap<i64, Complex64>,
}

impl BoundaryFunction {
    pub fn zero() -> Self {
        Self::default()
    }

    /// c·e^{imθ}.
    pub fn single(m: i64, c: Complex64) -> Self {
        let mut f = Self::zero();
        f.add_to(m, c);
        f
    }

    pub fn from_pairs(pairs: impl IntoIterator<Item = (i64, Complex64)>) -> Self {
        let mut f = Self::zero();
        for (m, c) in pairs {
            f.add_to(m, c);
        }
        f
    }

    /// Uniform random coefficients in the unit square on |m| ≤ max_mode.
    pub fn random<R: Rng>(rng: &mut R, max_mode: i64) -> Self {
        Self::from_pairs(
            (-max_mode..=max_mode)
                .map(|m| (m, Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))),
        )
    }

    pub fn get(&self, m: i64) -> Complex64 {
        self.coeffs.get(&m).copied().unwrap_or_default()
    }

    pub fn add_to(&mut self, m: i64, c: Complex64) {
        *self.coeffs.entry(m).or_default() += c;
    }

    pub fn iter(&self) -> impl Iterator<Item = (i64, Complex64)> + '_ {
        self.coeffs.iter().map(|(m, c)| (*m, *c))
    }

    pub fn modes(&self) -> Vec<i64> {
        self.coeffs.keys().copied().collect()
    }

    pub fn max_mode(&self) -> i64 {
        self.coeffs.keys().map(|m| m.abs()).max().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.values().all(|c| *c == Complex64::default())
    }

    /// True when f_{−m} = conj(f_m) within `tol`, i.e. f is real-valued.
    pub fn is_real(&self, tol: f64) -> bool {
        self.iter().all(|(m, c)| (self.get(-m) - c.conj()).norm() <= tol)
    }

    pub fn scale(&self, s: Complex64) -> Self {
        BoundaryFunction { coeffs: self.coeffs.iter().map(|(m, c)| (*m, c * s)).collect() }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (m, c) in other.iter() {
            out.add_to(m, c);
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(Complex64::new(-1.0, 0.0)))
    }

    /// Coefficientwise multiplier.
    pub fn map(&self, f: impl Fn(i64, Complex64) -> Complex64) -> Self {
        BoundaryFunction { coeffs: self.coeffs.iter().map(|(m, c)| (*m, f(*m, *c))).collect() }
    }

    /// Point value Σ f_m e^{imθ}.
    pub fn eval(&self, theta: f64) -> Complex64 {
        self.iter().map(|(m, c)| c * Complex64::from_polar(1.0, m as f64 * theta)).sum()
    }

    /// Largest coefficient modulus.
    pub fn sup_coeff(&self) -> f64 {
        self.coeffs.values().map(|c| c.norm()).fold(0.0, f64::max)
    }
}

/// Which norm to take in [`boundary_norm`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum BoundaryNorm {
    /// The trace space of the Dirichlet trace for the given γ.
    Hgamma,
    /// Its dual, with inverted weights under the plain ℓ² pairing.
    HgammaDual,
    /// The usual H^s(S¹).
    Hs(f64),
}

/// Squared weight of mode k in the trace space: ⟨k⟩^{2|γ|}, or 1 + log⟨k⟩ at γ = 0.
pub fn trace_weight_sq(gamma: f64, k: i64) -> f64 {
    if gamma == 0.0 {
        1.0 + bracket(k).ln()
    } else {
        bracket(k).powf(2.0 * gamma.abs())
    }
}

pub fn boundary_norm(f: &BoundaryFunction, gamma: f64, kind: BoundaryNorm) -> Result<f64> {
    let weight: Box<dyn Fn(i64) -> f64> = match kind {
        BoundaryNorm::Hgamma => {
            GammaParam::subcritical(gamma)?;
            Box::new(move |k| trace_weight_sq(gamma, k))
        }
        BoundaryNorm::HgammaDual => {
            GammaParam::subcritical(gamma)?;
            Box::new(move |k| 1.0 / trace_weight_sq(gamma, k))
        }
        BoundaryNorm::Hs(s) => Box::new(move |k| bracket(k).powf(2.0 * s)),
    };
    Ok(f.iter().map(|(m, c)| weight(m) * c.norm_sqr()).sum::<f64>().sqrt())
}

/// Σ_m f_m conj(g_m).
pub fn boundary_pairing(f: &BoundaryFunction, g: &BoundaryFunction) -> Complex64 {
    f.iter().map(|(m, c)| c * g.get(m).conj()).sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn one() -> Complex64 {
        Complex64::new(1.0, 0.0)
    }

    #[test]
    fn norms_of_single_modes() {
        let f = BoundaryFunction::single(0, one());
        assert_eq!(boundary_norm(&f, 0.0, BoundaryNorm::Hgamma).unwrap(), 1.0);
        let f = BoundaryFunction::single(3, one());
        let v = boundary_norm(&f, 0.5, BoundaryNorm::Hgamma).unwrap();
        assert!((v - 10f64.powf(0.25)).abs() < 1e-15);
        let v = boundary_norm(&f, 0.0, BoundaryNorm::Hs(1.0)).unwrap();
        assert!((v - 10f64.sqrt()).abs() < 1e-15);
        assert!(boundary_norm(&f, 1.0, BoundaryNorm::Hgamma).is_err());
    }

    #[test]
    fn dual_pairing_obeys_cauchy_schwarz() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for i in 0..100 {
            let g = [-0.7, 0.0, 0.3][i % 3];
            let a = BoundaryFunction::random(&mut rng, 12);
            let b = BoundaryFunction::random(&mut rng, 12);
            let lhs = boundary_pairing(&a, &b).norm();
            let rhs = boundary_norm(&a, g, BoundaryNorm::HgammaDual).unwrap()
                * boundary_norm(&b, g, BoundaryNorm::Hgamma).unwrap();
            assert!(lhs <= rhs * (1.0 + 1e-14));
        }
    }

    #[test]
    fn real_valued_detection() {
        let c = Complex64::new(0.5, 2.0);
        let f = BoundaryFunction::from_pairs([(2, c), (-2, c.conj()), (0, one())]);
        assert!(f.is_real(0.0));
        assert!((f.eval(0.7).im).abs() < 1e-15);
        let f = BoundaryFunction::single(1, one());
        assert!(!f.is_real(1e-12));
    }
}
