//! The radial regularizer φ_γ and its positivity threshold x_γ.

use super::gamma::{GammaParam, Regime};
use super::profile::{ProfileBasis, RadialProfile};
use super::quadrature::gauss_legendre;
use crate::{Complex64, Error, Result};

/// Smallest admissible c₀ at γ = 0, namely log(e⁴ − 1).
pub fn c0_lower_bound() -> f64 {
    (4f64.exp() - 1.0).ln()
}

/// φ_γ together with the pieces needed for stable quasi-derivatives.
#[derive(Clone, Debug, PartialEq)]
pub struct PhiGamma {
    gamma: GammaParam,
    c0: f64,
    x_gamma: f64,
    y_gamma: f64,
    b_gamma: f64,
    /// 0.5^{−γ} G(0.5), the seed of the far-range representation.
    seed: f64,
}

/// Values of φ at one point.
///
/// `reduced` is S = x^γ φ for γ > 0 and L₁ = log(1−x) + c₀ for γ = 0 (so
/// φ = log x − L₁); `reduced_d_rho` is its ρ-derivative. Both are 1 and 0 for γ < 0.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PhiSample {
    pub value: f64,
    pub d_rho: f64,
    pub reduced: f64,
    pub reduced_d_rho: f64,
}

/// Σ_{k≥1} x^k/(k−γ) and its x-derivative for x ≤ ½.
fn g_series(gamma: f64, x: f64) -> (f64, f64) {
    let mut sum = 0.0;
    let mut dsum = 0.0;
    let mut pow = 1.0;
    for k in 1..400 {
        let kf = k as f64;
        dsum += kf * pow / (kf - gamma);
        pow *= x;
        let term = pow / (kf - gamma);
        sum += term;
        if term < 1e-17 * sum && kf - gamma > 1.0 / (1.0 - x) {
            break;
        }
    }
    (sum, dsum)
}

/// x^{−γ}G(x) for x ≥ ½ given y = 1 − x, from the integral of its derivative x^{−γ}/(1−x).
fn g_far(gamma: f64, seed: f64, y: f64) -> f64 {
    let (t, w) = gauss_legendre(24).expect("fixed-size rule");
    let half = 0.5 * (0.5 - y);
    let mid = 0.5 * (0.5 + y);
    let smooth: f64 = t
        .iter()
        .zip(&w)
        .map(|(&t, &w)| {
            let v = mid + half * t;
            w * (-gamma * (-v).ln_1p()).exp_m1() / v
        })
        .sum();
    seed + (0.5 / y).ln() + half * smooth
}

impl PhiGamma {
    /// φ_γ for |γ| < 1; `c0` is only used at γ = 0 and must exceed log(e⁴ − 1).
    pub fn new(gamma: f64, c0: f64) -> Result<Self> {
        let gamma = GammaParam::subcritical(gamma)?;
        let g = gamma.value();
        match gamma.regime() {
            Regime::SubcriticalNegative => Ok(PhiGamma {
                gamma,
                c0,
                x_gamma: 1.0,
                y_gamma: 0.0,
                b_gamma: 0.0,
                seed: 0.0,
            }),
            Regime::LogCritical => {
                if !(c0 > c0_lower_bound()) || !c0.is_finite() {
                    return Err(Error::Domain(format!(
                        "c0 = {c0} must exceed log(e^4 - 1) = {}",
                        c0_lower_bound()
                    )));
                }
                let y = 1.0 / (1.0 + c0.exp());
                Ok(PhiGamma {
                    gamma,
                    c0,
                    x_gamma: 1.0 / (1.0 + (-c0).exp()),
                    y_gamma: y,
                    b_gamma: y.sqrt(),
                    seed: 0.0,
                })
            }
            Regime::SubcriticalPositive => {
                let seed = 0.5f64.powf(-g) * g_series(g, 0.5).0;
                let y = root_in_y(g, seed)?;
                Ok(PhiGamma { gamma, c0, x_gamma: 1.0 - y, y_gamma: y, b_gamma: y.sqrt(), seed })
            }
            Regime::Essential => unreachable!("subcritical() rejects |γ| ≥ 1"),
        }
    }

    pub fn gamma(&self) -> f64 {
        self.gamma.value()
    }

    pub fn param(&self) -> GammaParam {
        self.gamma
    }

    pub fn c0(&self) -> f64 {
        self.c0
    }

    pub fn x_gamma(&self) -> f64 {
        self.x_gamma
    }

    /// 1 − x_γ, kept separately because x_γ can sit within rounding of 1.
    pub fn y_gamma(&self) -> f64 {
        self.y_gamma
    }

    /// Radius of the circle where φ_γ vanishes; φ_γ ≠ 0 on b_γ < ρ < 1.
    pub fn b_gamma(&self) -> f64 {
        self.b_gamma
    }

    /// Default cut radius for the regularized form.
    pub fn default_b(&self) -> f64 {
        0.5 * (self.b_gamma + 1.0)
    }

    /// G(x) = Σ_{k≥1} x^k/(k−γ) for γ > 0, given both x and y = 1 − x.
    fn big_g(&self, x: f64, y: f64) -> f64 {
        let g = self.gamma();
        if x <= 0.5 {
            g_series(g, x).0
        } else {
            x.powf(g) * g_far(g, self.seed, y)
        }
    }

    /// φ and its pieces at x with ρ = √(1−x) supplied by the caller.
    pub fn sample(&self, x: f64, rho: f64) -> PhiSample {
        let g = self.gamma();
        match self.gamma.regime() {
            Regime::SubcriticalNegative | Regime::Essential => {
                PhiSample { value: 1.0, d_rho: 0.0, reduced: 1.0, reduced_d_rho: 0.0 }
            }
            Regime::LogCritical => {
                let y = rho * rho;
                let l1 = y.ln() + self.c0;
                PhiSample {
                    value: x.ln() - l1,
                    d_rho: -2.0 / (x * rho),
                    reduced: l1,
                    reduced_d_rho: 2.0 / rho,
                }
            }
            Regime::SubcriticalPositive => {
                let y = rho * rho;
                let (s, s_x) = if x <= 0.5 {
                    let (big, dbig) = g_series(g, x);
                    (1.0 - g * big, -g * dbig)
                } else {
                    let s = 1.0 - g * self.big_g(x, y);
                    (s, g / x * (s - 1.0 / y))
                };
                let xg = x.powf(-g);
                PhiSample {
                    value: xg * s,
                    d_rho: 2.0 * g * xg / (x * rho),
                    reduced: s,
                    reduced_d_rho: -2.0 * rho * s_x,
                }
            }
        }
    }

    /// Truncated expansion of φ_γ as a mode-0 conormal pair (smooth, singular),
    /// keeping x-powers below `terms`.
    pub fn as_conormal_parts(&self, terms: usize) -> (RadialProfile, RadialProfile) {
        let g = self.gamma();
        let n = terms.max(1);
        let c = |v: f64| Complex64::new(v, 0.0);
        match self.gamma.regime() {
            Regime::SubcriticalPositive => {
                let mut sing = vec![c(1.0)];
                sing.extend((1..n).map(|k| c(-g / (k as f64 - g))));
                (
                    RadialProfile::zero(0, ProfileBasis::Boundary),
                    RadialProfile::new(0, ProfileBasis::Boundary, sing),
                )
            }
            Regime::LogCritical => {
                let mut smooth = vec![c(-self.c0)];
                smooth.extend((1..n).map(|k| c(1.0 / k as f64)));
                (
                    RadialProfile::new(0, ProfileBasis::Boundary, smooth),
                    RadialProfile::new(0, ProfileBasis::Boundary, vec![c(1.0)]),
                )
            }
            _ => (
                RadialProfile::new(0, ProfileBasis::Boundary, vec![c(1.0)]),
                RadialProfile::zero(0, ProfileBasis::Boundary),
            ),
        }
    }
}

/// Bisection for γ G(1−y) = 1 on a logarithmic y-scale.
fn root_in_y(gamma: f64, seed: f64) -> Result<f64> {
    let f = |y: f64| {
        let x = 1.0 - y;
        let big = if x <= 0.5 { g_series(gamma, x).0 } else { x.powf(gamma) * g_far(gamma, seed, y) };
        gamma * big - 1.0
    };
    let mut lo = (1e-300f64).ln();
    let mut hi = 0.0f64;
    if !(f(lo.exp()) > 0.0) {
        return Err(Error::Convergence(format!(
            "x_gamma root for γ = {gamma} lies beyond 1 − 1e-300"
        )));
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if f(mid.exp()) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo < 1e-15 {
            break;
        }
    }
    Ok((0.5 * (lo + hi)).exp())
}

/// φ_γ(x) and ∂_ρ φ_γ.
pub fn phi_eval(phi: &PhiGamma, x: f64) -> Result<(f64, f64)> {
    if !(x > 0.0 && x < 1.0) {
        return Err(Error::Domain(format!("phi_eval needs 0 < x < 1, got {x}")));
    }
    let s = phi.sample(x, (1.0 - x).sqrt());
    Ok((s.value, s.d_rho))
}

/// The vanishing point x_γ of φ_γ for γ ∈ (0, 1), i.e. γ Σ_{k≥1} x^k/(k−γ) = 1.
pub fn x_gamma_root(gamma: f64) -> Result<f64> {
    if !(gamma > 0.0 && gamma < 1.0) {
        return Err(Error::Domain(format!("x_gamma_root needs γ in (0, 1), got {gamma}")));
    }
    Ok(PhiGamma::new(gamma, crate::DEFAULT_C0)?.x_gamma)
}
