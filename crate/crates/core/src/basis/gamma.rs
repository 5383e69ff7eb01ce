use crate::{Error, Result};

/// Which of the four qualitatively different cases a given γ falls in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Regime {
    /// γ ∈ (−1, 0): regular boundary, φ_γ ≡ 1.
    SubcriticalNegative,
    /// γ = 0: double indicial root, log-weighted traces.
    LogCritical,
    /// γ ∈ (0, 1): limit-circle boundary, x^{−γ} regularizer.
    SubcriticalPositive,
    /// |γ| ≥ 1: the minimal operator is already self-adjoint.
    Essential,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GammaParam {
    gamma: f64,
    regime: Regime,
}

impl GammaParam {
    pub fn new(gamma: f64) -> Result<Self> {
        if !gamma.is_finite() {
            return Err(Error::Domain(format!("gamma must be finite, got {gamma}")));
        }
        let regime = if gamma.abs() >= 1.0 {
            Regime::Essential
        } else if gamma < 0.0 {
            Regime::SubcriticalNegative
        } else if gamma == 0.0 {
            Regime::LogCritical
        } else {
            Regime::SubcriticalPositive
        };
        Ok(Self { gamma, regime })
    }

    /// Constructor that also enforces |γ| < 1, for anything involving traces.
    pub fn subcritical(gamma: f64) -> Result<Self> {
        let g = Self::new(gamma)?;
        g.require_traces()?;
        Ok(g)
    }

    pub fn value(&self) -> f64 {
        self.gamma
    }

    pub fn abs(&self) -> f64 {
        self.gamma.abs()
    }

    pub fn regime(&self) -> Regime {
        self.regime
    }

    pub fn require_traces(&self) -> Result<()> {
        if self.regime == Regime::Essential {
            Err(Error::Regime(format!(
                "regularized traces need |gamma| < 1, got {}",
                self.gamma
            )))
        } else {
            Ok(())
        }
    }

    /// Spectral Neumann-trace constant: 2|γ| for γ ≠ 0 and −2 at γ = 0.
    pub fn neumann_constant(&self) -> f64 {
        if self.gamma == 0.0 {
            -2.0
        } else {
            2.0 * self.gamma.abs()
        }
    }

    /// Dirichlet eigenvalue (n + 1 + |γ|)².
    pub fn eigenvalue(&self, n: u32) -> f64 {
        let v = n as f64 + 1.0 + self.gamma.abs();
        v * v
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn regimes() {
        assert_eq!(GammaParam::new(-0.5).unwrap().regime(), Regime::SubcriticalNegative);
        assert_eq!(GammaParam::new(0.0).unwrap().regime(), Regime::LogCritical);
        assert_eq!(GammaParam::new(0.3).unwrap().regime(), Regime::SubcriticalPositive);
        assert_eq!(GammaParam::new(1.0).unwrap().regime(), Regime::Essential);
        assert_eq!(GammaParam::new(-1.5).unwrap().regime(), Regime::Essential);
    }

    #[test]
    fn rejects_non_finite() {
        assert!(GammaParam::new(f64::NAN).is_err());
        assert!(GammaParam::new(f64::INFINITY).is_err());
    }

    #[test]
    fn traces_need_subcritical() {
        assert!(GammaParam::subcritical(1.0).is_err());
        assert!(GammaParam::subcritical(0.99).is_ok());
    }
}
