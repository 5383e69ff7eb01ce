//! Diagonal operators on circle functions.

use std::collections::BTreeMap;

use crate::basis::bracket;
use crate::spaces::{trace_weight_sq, BoundaryFunction};
use crate::{Complex64, Error, Result};

/// How a [`FourierMultiplier`] assigns its value to mode m.
#[derive(Clone, Debug, PartialEq)]
pub enum Symbol {
    Constant(Complex64),
    /// Listed modes; unlisted modes get zero.
    Table(BTreeMap<i64, Complex64>),
    /// p(m)/q(m) with coefficients in increasing degree.
    Rational { num: Vec<Complex64>, den: Vec<Complex64> },
}

fn horner(c: &[Complex64], m: f64) -> Complex64 {
    c.iter().rev().fold(Complex64::default(), |acc, a| acc * m + a)
}

/// f_m ↦ b_m f_m.
#[derive(Clone, Debug, PartialEq)]
pub struct FourierMultiplier {
    symbol: Symbol,
}

impl FourierMultiplier {
    pub fn new(symbol: Symbol) -> Result<Self> {
        if let Symbol::Rational { den, .. } = &symbol {
            if den.iter().all(|c| *c == Complex64::default()) {
                return Err(Error::Malformed("rational symbol with zero denominator".into()));
            }
        }
        Ok(FourierMultiplier { symbol })
    }

    pub fn constant(c: Complex64) -> Self {
        FourierMultiplier { symbol: Symbol::Constant(c) }
    }

    pub fn real(c: f64) -> Self {
        Self::constant(Complex64::new(c, 0.0))
    }

    pub fn zero() -> Self {
        Self::real(0.0)
    }

    pub fn table(entries: impl IntoIterator<Item = (i64, Complex64)>) -> Self {
        FourierMultiplier { symbol: Symbol::Table(entries.into_iter().collect()) }
    }

    pub fn symbol(&self) -> &Symbol {
        &self.symbol
    }

    pub fn at(&self, m: i64) -> Result<Complex64> {
        match &self.symbol {
            Symbol::Constant(c) => Ok(*c),
            Symbol::Table(t) => Ok(t.get(&m).copied().unwrap_or_default()),
            Symbol::Rational { num, den } => {
                let d = horner(den, m as f64);
                if d == Complex64::default() {
                    return Err(Error::Domain(format!("symbol denominator vanishes at m = {m}")));
                }
                Ok(horner(num, m as f64) / d)
            }
        }
    }

    /// Real symbol on the modes |m| ≤ cutoff.
    pub fn is_selfadjoint(&self, cutoff: i64, tol: f64) -> bool {
        (-cutoff..=cutoff).all(|m| self.at(m).map(|b| b.im.abs() <= tol).unwrap_or(false))
    }

    pub fn apply(&self, f: &BoundaryFunction) -> Result<BoundaryFunction> {
        let mut out = BoundaryFunction::zero();
        for (m, c) in f.iter() {
            out.add_to(m, c * self.at(m)?);
        }
        Ok(out)
    }
}

/// Which isometry an [`IotaMultiplier`] realizes.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum IotaKind {
    /// H^s(S¹) → L²: ⟨m⟩^s.
    Sobolev(f64),
    /// Trace space of τ^D → L²: ⟨m⟩^{|γ|}, or (1 + log⟨m⟩)^{1/2} at γ = 0.
    Trace(f64),
    /// Its dual: the reciprocal weight.
    TraceDual(f64),
}

/// Diagonal isometry onto L²(S¹) in the sequence norms.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct IotaMultiplier {
    pub kind: IotaKind,
}

impl IotaMultiplier {
    pub fn sobolev(s: f64) -> Self {
        IotaMultiplier { kind: IotaKind::Sobolev(s) }
    }

    pub fn trace(gamma: f64) -> Self {
        IotaMultiplier { kind: IotaKind::Trace(gamma) }
    }

    pub fn trace_dual(gamma: f64) -> Self {
        IotaMultiplier { kind: IotaKind::TraceDual(gamma) }
    }

    pub fn weight(&self, m: i64) -> f64 {
        match self.kind {
            IotaKind::Sobolev(s) => bracket(m).powf(s),
            IotaKind::Trace(g) => trace_weight_sq(g, m).sqrt(),
            IotaKind::TraceDual(g) => 1.0 / trace_weight_sq(g, m).sqrt(),
        }
    }

    pub fn apply(&self, f: &BoundaryFunction) -> BoundaryFunction {
        f.map(|m, c| c * self.weight(m))
    }

    pub fn inverse(&self, f: &BoundaryFunction) -> BoundaryFunction {
        f.map(|m, c| c / self.weight(m))
    }
}

/// Weight w_m of the trace-space isometry.
pub fn trace_weight(gamma: f64, m: i64) -> f64 {
    IotaMultiplier::trace(gamma).weight(m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spaces::{boundary_norm, BoundaryNorm};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn symbols() {
        let b = FourierMultiplier::real(2.0);
        assert_eq!(b.at(7).unwrap(), Complex64::new(2.0, 0.0));
        let c = |v: f64| Complex64::new(v, 0.0);
        let r = FourierMultiplier::new(Symbol::Rational { num: vec![c(1.0)], den: vec![c(1.0), c(0.0), c(1.0)] }).unwrap();
        assert!((r.at(2).unwrap().re - 0.2).abs() < 1e-16);
        assert!(r.is_selfadjoint(10, 0.0));
        let t = FourierMultiplier::table([(1, Complex64::new(0.0, 1.0))]);
        assert!(!t.is_selfadjoint(2, 1e-12));
        assert_eq!(t.at(3).unwrap(), Complex64::default());
        assert!(FourierMultiplier::new(Symbol::Rational { num: vec![c(1.0)], den: vec![] }).is_err());
    }

    #[test]
    fn iota_is_an_isometry() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let f = BoundaryFunction::random(&mut rng, 9);
        let l2 = |h: &BoundaryFunction| boundary_norm(h, 0.0, BoundaryNorm::Hs(0.0)).unwrap();
        let s = 0.7;
        let a = boundary_norm(&f, 0.0, BoundaryNorm::Hs(s)).unwrap();
        assert!((l2(&IotaMultiplier::sobolev(s).apply(&f)) - a).abs() < 1e-13 * a);
        for g in [-0.4, 0.0, 0.6] {
            let a = boundary_norm(&f, g, BoundaryNorm::Hgamma).unwrap();
            assert!((l2(&IotaMultiplier::trace(g).apply(&f)) - a).abs() < 1e-13 * a);
            let a = boundary_norm(&f, g, BoundaryNorm::HgammaDual).unwrap();
            assert!((l2(&IotaMultiplier::trace_dual(g).apply(&f)) - a).abs() < 1e-13 * a);
        }
        let i = IotaMultiplier::sobolev(-1.3);
        let back = i.inverse(&i.apply(&f));
        assert!(back.sub(&f).sup_coeff() < 1e-15);
    }
}
