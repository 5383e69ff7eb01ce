//! Finite expansions in unit-normalized generalized Zernike functions.

use std::collections::BTreeMap;

use rand::Rng;

use crate::basis::{unit_mode_table as unit_table, zernike_norm_sq, zernike_profile_in, GammaParam, ProfileBasis, RadialProfile, Regime, ZernikeIndex};
use crate::operator::{ConormalElement, FieldParts, ModeField};
use crate::{Complex64, Error, Result};

/// Σ u_{n,k} Ĝ_{n,k} with Ĝ of unit L²_γ norm.
///
/// For γ < 0 the basis is x^{|γ|}Ĝ^{|γ|}, which are the Dirichlet eigenfunctions
/// in that regime; otherwise Ĝ^γ itself.
#[derive(Clone, Debug, PartialEq)]
pub struct SpectralVector {
    gamma: GammaParam,
    entries: BTreeMap<ZernikeIndex, Complex64>,
    truncation: u32,
}

impl SpectralVector {
    pub fn new(gamma: f64, truncation: u32) -> Result<Self> {
        Ok(SpectralVector { gamma: GammaParam::subcritical(gamma)?, entries: BTreeMap::new(), truncation })
    }

    pub fn from_entries(
        gamma: f64,
        truncation: u32,
        entries: impl IntoIterator<Item = (ZernikeIndex, Complex64)>,
    ) -> Result<Self> {
        let mut v = Self::new(gamma, truncation)?;
        for (idx, c) in entries {
            v.add_to(idx, c)?;
        }
        Ok(v)
    }

    /// The single unit basis vector Ĝ_idx.
    pub fn unit(gamma: f64, idx: ZernikeIndex) -> Result<Self> {
        Self::from_entries(gamma, idx.n, [(idx, Complex64::new(1.0, 0.0))])
    }

    /// Random coefficients of modulus ≲ (n+1)^{−decay}, all degrees up to `truncation`.
    pub fn random<R: Rng>(rng: &mut R, gamma: f64, truncation: u32, decay: f64) -> Result<Self> {
        let mut v = Self::new(gamma, truncation)?;
        for n in 0..=truncation {
            let s = (n as f64 + 1.0).powf(-decay);
            for k in 0..=n {
                let c = Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)) * s;
                v.entries.insert(ZernikeIndex { n, k }, c);
            }
        }
        Ok(v)
    }

    pub fn gamma(&self) -> f64 {
        self.gamma.value()
    }

    pub fn param(&self) -> GammaParam {
        self.gamma
    }

    pub fn truncation(&self) -> u32 {
        self.truncation
    }

    pub fn get(&self, idx: ZernikeIndex) -> Complex64 {
        self.entries.get(&idx).copied().unwrap_or_default()
    }

    pub fn add_to(&mut self, idx: ZernikeIndex, c: Complex64) -> Result<()> {
        if idx.n > self.truncation {
            return Err(Error::Domain(format!(
                "degree {} exceeds truncation {}",
                idx.n, self.truncation
            )));
        }
        *self.entries.entry(idx).or_default() += c;
        Ok(())
    }

    pub fn iter(&self) -> impl Iterator<Item = (ZernikeIndex, Complex64)> + '_ {
        self.entries.iter().map(|(i, c)| (*i, *c))
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.values().all(|c| *c == Complex64::default())
    }

    /// Angular modes carrying at least one stored entry, ascending.
    pub fn modes(&self) -> Vec<i64> {
        let mut ms: Vec<i64> = self.entries.keys().map(|i| i.mode()).collect();
        ms.sort_unstable();
        ms.dedup();
        ms
    }

    pub fn scale(&self, s: Complex64) -> Self {
        SpectralVector { entries: self.entries.iter().map(|(i, c)| (*i, c * s)).collect(), ..self.clone() }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.gamma != other.gamma {
            return Err(Error::Domain("cannot add spectral vectors with different γ".into()));
        }
        let mut out = SpectralVector { truncation: self.truncation.max(other.truncation), ..self.clone() };
        for (i, c) in other.iter() {
            out.add_to(i, c)?;
        }
        Ok(out)
    }

    /// Diagonal action of a function of the Dirichlet eigenvalue (n+1+|γ|)².
    pub fn map_eigen(&self, f: impl Fn(f64) -> Complex64) -> Self {
        let g = self.gamma;
        SpectralVector {
            entries: self.entries.iter().map(|(i, c)| (*i, c * f(g.eigenvalue(i.n)))).collect(),
            ..self.clone()
        }
    }

    /// The part on angular mode m, as a radial field.
    pub fn mode_component(&self, m: i64) -> SpectralMode {
        let mut coeffs = Vec::new();
        for (i, c) in self.entries.iter().filter(|(i, _)| i.mode() == m) {
            let kp = i.radial_degree() as usize;
            if coeffs.len() <= kp {
                coeffs.resize(kp + 1, Complex64::default());
            }
            coeffs[kp] += c;
        }
        SpectralMode { gamma: self.gamma, m, coeffs }
    }
}

/// One angular mode of a [`SpectralVector`]: Σ_{k'} c_{k'} Ĝ_{|m|+2k', ·}.
#[derive(Clone, Debug, PartialEq)]
pub struct SpectralMode {
    gamma: GammaParam,
    m: i64,
    coeffs: Vec<Complex64>,
}

impl SpectralMode {
    pub fn new(gamma: f64, m: i64, coeffs: Vec<Complex64>) -> Result<Self> {
        Ok(SpectralMode { gamma: GammaParam::subcritical(gamma)?, m, coeffs })
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    fn unit_boundary_values(&self) -> impl Iterator<Item = f64> + '_ {
        let a = self.gamma.abs();
        (0..self.coeffs.len()).map(move |kp| {
            let idx = ZernikeIndex::from_mode(self.m, kp as u32);
            1.0 / zernike_norm_sq(a, idx).sqrt()
        })
    }

    /// Σ c_{k'} Ĝ(1), the boundary value of the polynomial factor.
    fn boundary_sum(&self) -> Complex64 {
        self.coeffs.iter().zip(self.unit_boundary_values()).map(|(c, v)| c * v).sum()
    }

    /// Exact conormal representation; coefficient growth limits this to low degree.
    pub fn to_conormal(&self) -> Result<ConormalElement> {
        let a = self.gamma.abs();
        let mut prof = RadialProfile::zero(self.m, ProfileBasis::Boundary);
        for (kp, c) in self.coeffs.iter().enumerate() {
            let idx = ZernikeIndex::from_mode(self.m, kp as u32);
            let p = zernike_profile_in(a, idx, ProfileBasis::Boundary)?;
            prof = prof.add(&p.scale(c / zernike_norm_sq(a, idx).sqrt()))?;
        }
        let g = self.gamma.value();
        if self.gamma.regime() == Regime::SubcriticalNegative {
            ConormalElement::singular_only(g, prof)
        } else {
            ConormalElement::smooth_only(g, prof)
        }
    }
}

impl ModeField for SpectralMode {
    fn mode(&self) -> i64 {
        self.m
    }

    fn gamma(&self) -> f64 {
        self.gamma.value()
    }

    fn parts(&self, x: f64, rho: f64) -> FieldParts {
        if self.coeffs.is_empty() {
            return FieldParts::default();
        }
        let table = unit_table(self.gamma.abs(), self.m, self.coeffs.len() - 1, x, rho);
        let (mut v, mut d) = (Complex64::default(), Complex64::default());
        for (c, (tv, td)) in self.coeffs.iter().zip(table) {
            v += c * tv;
            d += c * td;
        }
        if self.gamma.regime() == Regime::SubcriticalNegative {
            FieldParts { weighted: v, weighted_d: d, ..Default::default() }
        } else {
            FieldParts { regular: v, regular_d: d, ..Default::default() }
        }
    }

    fn dirichlet_trace(&self) -> Complex64 {
        Complex64::default()
    }

    fn neumann_trace(&self, _c0: f64) -> Complex64 {
        self.boundary_sum() * self.gamma.neumann_constant()
    }
}

/// (Σ (n+1+|γ|)^{2s}|u_{n,k}|²)^{1/2}.
pub fn sobolev_d_norm(u: &SpectralVector, s: f64) -> f64 {
    let a = u.gamma.abs();
    u.iter()
        .map(|(i, c)| (i.n as f64 + 1.0 + a).powf(2.0 * s) * c.norm_sqr())
        .sum::<f64>()
        .sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::basis::RuleSpec;
    use crate::operator::{apply_L, l2_pair};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn norms_of_unit_vectors() {
        let u = SpectralVector::unit(0.0, ZernikeIndex::new(0, 0).unwrap()).unwrap();
        assert!((sobolev_d_norm(&u, 2.0) - 1.0).abs() < 1e-15);
        let u = SpectralVector::unit(0.5, ZernikeIndex::new(3, 1).unwrap()).unwrap();
        assert!((sobolev_d_norm(&u, 1.0) - 4.5).abs() < 1e-14);
    }

    #[test]
    fn parseval_against_quadrature() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for g in [-0.5, 0.0, 0.4] {
            let u = SpectralVector::random(&mut rng, g, 8, 1.0).unwrap();
            let spec = RuleSpec::for_degree(8);
            let q: f64 = u
                .modes()
                .into_iter()
                .map(|m| {
                    let f = u.mode_component(m);
                    l2_pair(&f, &f, &spec).unwrap().re
                })
                .sum();
            let p = sobolev_d_norm(&u, 0.0);
            assert!((q.sqrt() - p).abs() < 1e-9 * p, "γ={g}: {} vs {p}", q.sqrt());
        }
    }

    #[test]
    fn exact_form_is_an_eigenfunction() {
        for g in [-0.3, 0.0, 0.6] {
            let idx = ZernikeIndex::new(4, 1).unwrap();
            let u = SpectralVector::unit(g, idx).unwrap();
            let f = u.mode_component(idx.mode()).to_conormal().unwrap();
            let lf = apply_L(g, &f).unwrap();
            let lam = GammaParam::new(g).unwrap().eigenvalue(4);
            for r in [0.2, 0.7, 0.95] {
                assert!((lf.eval(r) - f.eval(r) * lam).norm() < 1e-10);
                let p = u.mode_component(2).parts(1.0 - r * r, r);
                let direct = if g < 0.0 { p.weighted * (1.0 - r * r).powf(-g) } else { p.regular };
                assert!((direct - f.eval(r)).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn truncation_is_enforced() {
        let mut u = SpectralVector::new(0.2, 3).unwrap();
        assert!(u.add_to(ZernikeIndex::new(4, 0).unwrap(), Complex64::new(1.0, 0.0)).is_err());
        assert!(SpectralVector::new(1.0, 3).is_err());
    }
}
