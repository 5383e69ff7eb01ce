//! Conormal elements f = f⁽⁰⁾ + w_γ f⁽ˢ⁾ on one angular mode, and the exact action of L_γ.

use rand::Rng;

use super::field::{FieldParts, ModeField};
use crate::basis::{zernike_eval, GammaParam, ProfileBasis, RadialProfile, Regime, ZernikeIndex};
use crate::{Complex64, Error, Result};

/// f = smooth + w_γ·singular on mode m, with w_γ = x^{−γ} (γ ≠ 0) or log x (γ = 0).
///
/// For γ ∈ (−1, 0) the weight x^{−γ} = x^{|γ|} is the *less* singular term, so the
/// Dirichlet trace reads the smooth part and the Neumann trace the weighted one.
#[derive(Clone, Debug, PartialEq)]
pub struct ConormalElement {
    gamma: GammaParam,
    m: i64,
    smooth: RadialProfile,
    singular: RadialProfile,
}

impl ConormalElement {
    pub fn new(gamma: f64, smooth: RadialProfile, singular: RadialProfile) -> Result<Self> {
        let gamma = GammaParam::subcritical(gamma)?;
        if smooth.m() != singular.m() {
            return Err(Error::ModeMismatch(smooth.m(), singular.m()));
        }
        Ok(ConormalElement { gamma, m: smooth.m(), smooth, singular })
    }

    pub fn smooth_only(gamma: f64, smooth: RadialProfile) -> Result<Self> {
        let m = smooth.m();
        Self::new(gamma, smooth, RadialProfile::zero(m, ProfileBasis::Interior))
    }

    pub fn singular_only(gamma: f64, singular: RadialProfile) -> Result<Self> {
        let m = singular.m();
        Self::new(gamma, RadialProfile::zero(m, ProfileBasis::Interior), singular)
    }

    /// Real-coefficient convenience constructor in the interior basis.
    pub fn from_real(gamma: f64, m: i64, smooth: &[f64], singular: &[f64]) -> Result<Self> {
        Self::new(
            gamma,
            RadialProfile::from_real(m, ProfileBasis::Interior, smooth),
            RadialProfile::from_real(m, ProfileBasis::Interior, singular),
        )
    }

    pub fn zero(gamma: f64, m: i64) -> Result<Self> {
        Self::from_real(gamma, m, &[], &[])
    }

    pub fn gamma(&self) -> f64 {
        self.gamma.value()
    }

    pub fn param(&self) -> GammaParam {
        self.gamma
    }

    pub fn m(&self) -> i64 {
        self.m
    }

    pub fn smooth(&self) -> &RadialProfile {
        &self.smooth
    }

    pub fn singular(&self) -> &RadialProfile {
        &self.singular
    }

    pub fn scale(&self, s: Complex64) -> Self {
        ConormalElement { smooth: self.smooth.scale(s), singular: self.singular.scale(s), ..self.clone() }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if other.gamma != self.gamma {
            return Err(Error::Domain("cannot add elements with different γ".into()));
        }
        Ok(ConormalElement {
            gamma: self.gamma,
            m: self.m,
            smooth: self.smooth.add(&other.smooth)?,
            singular: self.singular.add(&other.singular)?,
        })
    }

    /// x^{γ'}·f as an element of A_{−γ'}, where γ' is this element's parameter.
    ///
    /// With f = s + x^{−γ'}q this is q + x^{γ'}s, so the two parts swap roles.
    pub fn intertwine(&self) -> Result<Self> {
        if self.gamma.regime() == Regime::LogCritical {
            return Err(Error::Regime("intertwining needs γ ≠ 0".into()));
        }
        Self::new(-self.gamma(), self.singular.clone(), self.smooth.clone())
    }

    /// Pointwise value away from the boundary.
    pub fn eval(&self, rho: f64) -> Complex64 {
        let x = (1.0 - rho) * (1.0 + rho);
        let (w, _) = super::field::weight(self.gamma(), x, rho);
        self.smooth.eval(rho) + self.singular.eval(rho) * w
    }

    /// Random element with i.i.d. uniform [−1, 1] complex coefficients, at most
    /// `degree + 1` terms per part; `singular` toggles the weighted part.
    pub fn random<R: Rng>(rng: &mut R, gamma: f64, m: i64, degree: usize, singular: bool) -> Result<Self> {
        let mut draw = |n: usize| -> Vec<Complex64> {
            (0..n).map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect()
        };
        let smooth = RadialProfile::new(m, ProfileBasis::Boundary, draw(degree + 1));
        let sing = if singular {
            RadialProfile::new(m, ProfileBasis::Boundary, draw(degree + 1))
        } else {
            RadialProfile::zero(m, ProfileBasis::Boundary)
        };
        Self::new(gamma, smooth, sing)
    }
}

impl ModeField for ConormalElement {
    fn mode(&self) -> i64 {
        self.m
    }

    fn gamma(&self) -> f64 {
        self.gamma.value()
    }

    fn parts(&self, x: f64, rho: f64) -> FieldParts {
        let s = self.smooth.sample(x, rho);
        let w = self.singular.sample(x, rho);
        FieldParts { regular: s.value, regular_d: s.d_rho, weighted: w.value, weighted_d: w.d_rho }
    }

    fn dirichlet_trace(&self) -> Complex64 {
        match self.gamma.regime() {
            Regime::SubcriticalNegative => self.smooth.at_boundary(),
            _ => self.singular.at_boundary(),
        }
    }

    fn neumann_trace(&self, c0: f64) -> Complex64 {
        let g = self.gamma();
        match self.gamma.regime() {
            Regime::SubcriticalNegative => self.singular.at_boundary() * (-2.0 * g),
            Regime::LogCritical => self.smooth.at_boundary() * -2.0 - self.singular.at_boundary() * (2.0 * c0),
            _ => self.smooth.at_boundary() * (2.0 * g),
        }
    }
}

/// (L_γ − λ) f as exact coefficient algebra.
///
/// The weighted part uses L_γ(x^{−γ}h) = x^{−γ}L_{−γ}h, and at γ = 0
/// L₀(log x·h) = log x·L₀h + 4(ρ∂_ρh + h).
pub fn apply_l_shifted(gamma: f64, lambda: Complex64, elem: &ConormalElement) -> Result<ConormalElement> {
    if gamma != elem.gamma() {
        return Err(Error::Domain(format!(
            "element carries γ = {}, operator γ = {gamma}",
            elem.gamma()
        )));
    }
    let mut smooth = elem.smooth.apply_l(gamma, lambda);
    let singular = if gamma == 0.0 {
        let h = &elem.singular;
        let extra = h.rho_d_rho().add(h)?.scale(Complex64::new(4.0, 0.0));
        smooth = smooth.add(&extra)?;
        h.apply_l(0.0, lambda)
    } else {
        elem.singular.apply_l(-gamma, lambda)
    };
    ConormalElement::new(gamma, smooth, singular)
}

/// L_γ f as exact coefficient algebra.
#[allow(non_snake_case)]
pub fn apply_L(gamma: f64, elem: &ConormalElement) -> Result<ConormalElement> {
    apply_l_shifted(gamma, Complex64::new(0.0, 0.0), elem)
}

/// L_{γ,m} applied pointwise from a value and its first two ρ-derivatives.
pub fn l_pointwise(gamma: f64, m: i64, x: f64, rho: f64, value: f64, d_rho: f64, d2_rho: f64) -> f64 {
    let mf = m as f64;
    -x * d2_rho - (1.0 / rho - (3.0 + 2.0 * gamma) * rho) * d_rho
        + (mf * mf / (rho * rho) + (gamma + 1.0).powi(2)) * value
}

/// sup |L_γ f − E f| / sup |E f| over 64 radii in (0, 0.99] for the Dirichlet
/// eigenfunction f with index `idx`: G^γ for γ ≥ 0 and x^{|γ|}G^{|γ|} for γ < 0, with
/// derivatives of the weight applied by the product rule.
pub fn eigen_residual(gamma: f64, idx: ZernikeIndex) -> Result<f64> {
    let g = GammaParam::new(gamma)?;
    let a = g.abs();
    let e = g.eigenvalue(idx.n);
    let (mut worst, mut size) = (0.0f64, 0.0f64);
    for i in 1..=64 {
        let rho = 0.99 * i as f64 / 64.0;
        let x = (1.0 - rho) * (1.0 + rho);
        let z = zernike_eval(a, idx, rho)?;
        let (v, d1, d2) = if gamma < 0.0 {
            let w = x.powf(a);
            let w1 = -2.0 * a * rho * x.powf(a - 1.0);
            let w2 = -2.0 * a * x.powf(a - 1.0) + 4.0 * a * (a - 1.0) * rho * rho * x.powf(a - 2.0);
            (w * z.value, w * z.d_rho + w1 * z.value, w * z.d2_rho + 2.0 * w1 * z.d_rho + w2 * z.value)
        } else {
            (z.value, z.d_rho, z.d2_rho)
        };
        let lv = l_pointwise(gamma, idx.mode(), x, rho, v, d1, d2);
        worst = worst.max((lv - e * v).abs());
        size = size.max((e * v).abs());
    }
    Ok(worst / size)
}
