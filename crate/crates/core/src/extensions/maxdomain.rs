//! Elements of the maximal domain, their splitting f = f_D + f_λ into a Dirichlet-domain
//! part and a kernel part, the Poisson map and the boundary-triple maps Γ₀, Γ₁.

use std::collections::BTreeSet;
use std::f64::consts::TAU;

use rand::Rng;

use crate::basis::{bracket, GammaParam, RuleSpec};
use crate::extensions::kernel::KernelMode;
use crate::extensions::multipliers::trace_weight;
use crate::extensions::resolvent::check_admissible_mode;
use crate::operator::{apply_L, l2_pair, sample_plain, ConormalElement, FieldSum, ModeField};
use crate::spaces::{right_inverse_neumann, trace_neumann_spectral, BoundaryFunction, SpectralVector};
use crate::{Complex64, Error, Result};

/// A finite sum of a spectral vector, conormal elements and kernel solutions.
///
/// This covers the Dirichlet domain (spectral part), smooth conormal elements with
/// arbitrary traces, and exact solutions of (L − λ')u = 0 for any admissible λ'.
#[derive(Clone, Debug)]
pub struct MaxDomainElement {
    pub spectral: SpectralVector,
    pub conormal: Vec<ConormalElement>,
    pub kernel: Vec<KernelMode>,
}

impl MaxDomainElement {
    pub fn from_spectral(spectral: SpectralVector) -> Self {
        MaxDomainElement { spectral, conormal: Vec::new(), kernel: Vec::new() }
    }

    pub fn zero(gamma: f64) -> Result<Self> {
        Ok(Self::from_spectral(SpectralVector::new(gamma, 0)?))
    }

    pub fn from_kernel(gamma: f64, kernel: Vec<KernelMode>) -> Result<Self> {
        let mut f = Self::zero(gamma)?;
        f.kernel = kernel;
        f.check()?;
        Ok(f)
    }

    pub fn with_conormal(mut self, c: ConormalElement) -> Result<Self> {
        self.conormal.push(c);
        self.check()?;
        Ok(self)
    }

    pub fn with_kernel(mut self, k: KernelMode) -> Result<Self> {
        self.kernel.push(k);
        self.check()?;
        Ok(self)
    }

    fn check(&self) -> Result<()> {
        let g = self.gamma();
        let bad = self.conormal.iter().map(|c| c.gamma()).chain(self.kernel.iter().map(|k| k.gamma())).find(|&h| h != g);
        match bad {
            Some(h) => Err(Error::Domain(format!("component carries γ = {h}, element γ = {g}"))),
            None => Ok(()),
        }
    }

    pub fn gamma(&self) -> f64 {
        self.spectral.gamma()
    }

    /// A random element: spectral part of degree ≤ `truncation`, and on each mode
    /// |m| ≤ `max_mode` a conormal element of radial degree `degree`.
    pub fn random<R: Rng>(rng: &mut R, gamma: f64, truncation: u32, max_mode: i64, degree: usize) -> Result<Self> {
        let spectral = SpectralVector::random(rng, gamma, truncation, 1.0)?;
        let conormal = (-max_mode..=max_mode)
            .map(|m| ConormalElement::random(rng, gamma, m, degree, true))
            .collect::<Result<Vec<_>>>()?;
        Ok(MaxDomainElement { spectral, conormal, kernel: Vec::new() })
    }

    /// Modes carrying any component.
    pub fn modes(&self) -> Vec<i64> {
        let set: BTreeSet<i64> = self
            .spectral
            .modes()
            .into_iter()
            .chain(self.conormal.iter().map(|c| c.m()))
            .chain(self.kernel.iter().map(|k| k.mode()))
            .collect();
        set.into_iter().collect()
    }

    /// Lf, exact on every component.
    pub fn apply_l(&self) -> Result<Self> {
        Ok(MaxDomainElement {
            spectral: self.spectral.map_eigen(|e| Complex64::new(e, 0.0)),
            conormal: self.conormal.iter().map(|c| apply_L(self.gamma(), c)).collect::<Result<_>>()?,
            kernel: self.kernel.iter().map(|k| k.with_dirichlet(k.dirichlet_trace() * k.lambda())).collect(),
        })
    }

    /// Runs `f` on the mode-m component viewed as one field.
    pub fn with_mode<T>(&self, m: i64, f: impl FnOnce(&dyn ModeField) -> T) -> T {
        let spec = self.spectral.mode_component(m);
        let mut terms: Vec<&dyn ModeField> = vec![&spec];
        terms.extend(self.conormal.iter().filter(|c| c.m() == m).map(|c| c as &dyn ModeField));
        terms.extend(self.kernel.iter().filter(|k| k.mode() == m).map(|k| k as &dyn ModeField));
        f(&FieldSum { terms, mode: m, gamma: self.gamma() })
    }

    /// Value at (ρ, θ).
    pub fn eval(&self, rho: f64, theta: f64) -> Complex64 {
        let x = (1.0 - rho) * (1.0 + rho);
        self.modes()
            .into_iter()
            .map(|m| self.with_mode(m, |f| sample_plain(f, x, rho).value) * Complex64::from_polar(1.0, m as f64 * theta))
            .sum()
    }

    /// τ^D, read off the conormal and kernel parts; the spectral part has none.
    pub fn dirichlet_trace(&self) -> BoundaryFunction {
        let mut out = BoundaryFunction::zero();
        for c in &self.conormal {
            out.add_to(c.m(), c.dirichlet_trace());
        }
        for k in &self.kernel {
            out.add_to(k.mode(), k.dirichlet_trace());
        }
        out
    }

    pub fn neumann_trace(&self, c0: f64) -> BoundaryFunction {
        let mut out = trace_neumann_spectral(&self.spectral);
        for c in &self.conormal {
            out.add_to(c.m(), c.neumann_trace(c0));
        }
        for k in &self.kernel {
            out.add_to(k.mode(), k.neumann_trace(c0));
        }
        out
    }

    /// ⟨self, other⟩ in L²_γ, mode by mode.
    pub fn pair(&self, other: &Self, spec: &RuleSpec) -> Result<Complex64> {
        if self.gamma() != other.gamma() {
            return Err(Error::Domain("elements carry different γ".into()));
        }
        let theirs: BTreeSet<i64> = other.modes().into_iter().collect();
        let mut total = Complex64::default();
        for m in self.modes().into_iter().filter(|m| theirs.contains(m)) {
            total += self.with_mode(m, |f| other.with_mode(m, |g| l2_pair(f, g, spec)))?;
        }
        Ok(total)
    }
}

/// f = f_D + f_λ with f_λ ∈ ker(L − λ) and τ^D f_D = 0.
#[derive(Clone, Debug)]
pub struct MaxDomainSplit {
    /// f − f_λ, kept in closed form as f plus the negated kernel parts.
    pub dirichlet_part: MaxDomainElement,
    pub kernel_part: Vec<KernelMode>,
    pub lambda: Complex64,
    /// Largest relative residual of (L − λ) over the kernel part.
    pub kernel_residual: f64,
}

/// The kernel element on each mode with prescribed Dirichlet trace.
pub fn kernel_with_trace(gamma: f64, lambda: Complex64, traces: &BoundaryFunction) -> Result<Vec<KernelMode>> {
    traces
        .iter()
        .filter(|(_, c)| *c != Complex64::default())
        .map(|(m, c)| KernelMode::new(gamma, lambda, m, c))
        .collect()
}

/// P(λ)f: per mode the kernel solution with w_m τ^D = f_m, w_m the trace-space weight.
pub fn poisson_lift(gamma: f64, lambda: Complex64, f: &BoundaryFunction) -> Result<Vec<KernelMode>> {
    kernel_with_trace(gamma, lambda, &f.map(|m, c| c / trace_weight(gamma, m)))
}

/// Splits f along dom L_D ∔ ker(L − λ).
pub fn decompose_max(gamma: f64, lambda: Complex64, f: &MaxDomainElement, spec: &RuleSpec) -> Result<MaxDomainSplit> {
    GammaParam::subcritical(gamma)?;
    if f.gamma() != gamma {
        return Err(Error::Domain(format!("element γ = {}, split γ = {gamma}", f.gamma())));
    }
    for m in f.modes() {
        check_admissible_mode(gamma, lambda, m)?;
    }
    let kernel_part = kernel_with_trace(gamma, lambda, &f.dirichlet_trace())?;
    let mut dirichlet_part = f.clone();
    for k in &kernel_part {
        dirichlet_part.kernel.push(k.with_dirichlet(-k.dirichlet_trace()));
    }
    let mut kernel_residual: f64 = 0.0;
    for k in &kernel_part {
        kernel_residual = kernel_residual.max(k.relative_residual(spec)?);
    }
    Ok(MaxDomainSplit { dirichlet_part, kernel_part, lambda, kernel_residual })
}

/// Γ₀f = ⟨m⟩^{|γ|−1}τ^D f and Γ₁f = ⟨m⟩^{1−|γ|}τ^N f_D, with f_D from the split at λ.
pub fn boundary_triple_maps(
    gamma: f64,
    lambda: Complex64,
    f: &MaxDomainElement,
    c0: f64,
    spec: &RuleSpec,
) -> Result<(BoundaryFunction, BoundaryFunction)> {
    let a = GammaParam::subcritical(gamma)?.abs();
    let split = decompose_max(gamma, lambda, f, spec)?;
    let g0 = f.dirichlet_trace().map(|m, c| c * bracket(m).powf(a - 1.0));
    let g1 = split.dirichlet_part.neumann_trace(c0).map(|m, c| c * bracket(m).powf(1.0 - a));
    Ok((g0, g1))
}

/// τ^D f on the given modes from Green's second identity against g = R_N e^{imθ},
/// which has τ^D g = 0 and τ^N g = 1: τ^D f = (⟨f, Lg⟩ − ⟨Lf, g⟩)/(2π).
pub fn extended_dirichlet_trace(f: &MaxDomainElement, modes: &[i64], spec: &RuleSpec) -> Result<BoundaryFunction> {
    let lf = f.apply_l()?;
    let mut out = BoundaryFunction::zero();
    for &m in modes {
        let probe = right_inverse_neumann(f.gamma(), &BoundaryFunction::single(m, Complex64::new(1.0, 0.0)))?;
        let g = MaxDomainElement::from_spectral(probe);
        let lg = g.apply_l()?;
        let v = (f.pair(&lg, spec)? - lf.pair(&g, spec)?) / TAU;
        out.add_to(m, v);
    }
    Ok(out)
}

/// Both sides of the abstract Green identity
/// ⟨Lf, g⟩ − ⟨f, Lg⟩ = 2π[(Γ₁f, Γ₀g) − (Γ₀f, Γ₁g)], with Γ₀, Γ₁ at a real λ.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LagrangeCheck {
    pub interior: Complex64,
    pub boundary: Complex64,
    /// Largest modulus among the four pairings.
    pub scale: f64,
}

impl LagrangeCheck {
    pub fn residual(&self) -> f64 {
        (self.interior - self.boundary).norm()
    }
}

pub fn lagrange_check(
    gamma: f64,
    lambda: f64,
    f: &MaxDomainElement,
    g: &MaxDomainElement,
    c0: f64,
    spec: &RuleSpec,
) -> Result<LagrangeCheck> {
    let lam = Complex64::new(lambda, 0.0);
    let lfg = f.apply_l()?.pair(g, spec)?;
    let flg = f.pair(&g.apply_l()?, spec)?;
    let (f0, f1) = boundary_triple_maps(gamma, lam, f, c0, spec)?;
    let (g0, g1) = boundary_triple_maps(gamma, lam, g, c0, spec)?;
    let a = crate::spaces::boundary_pairing(&f1, &g0) * TAU;
    let b = crate::spaces::boundary_pairing(&f0, &g1) * TAU;
    Ok(LagrangeCheck {
        interior: lfg - flg,
        boundary: a - b,
        scale: [lfg.norm(), flg.norm(), a.norm(), b.norm()].into_iter().fold(0.0, f64::max),
    })
}
