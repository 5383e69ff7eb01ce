//! Single-mode radial profiles ρ^{|m|}·(polynomial), the atoms of the exact operator algebra.

use crate::{Complex64, Error, Result};

/// Which polynomial variable the coefficients of a [`RadialProfile`] multiply.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ProfileBasis {
    /// `coeffs[j]` multiplies ρ^{|m|+2j}.
    Interior,
    /// `coeffs[j]` multiplies ρ^{|m|} x^j with x = 1 − ρ²; well conditioned near ρ = 1.
    Boundary,
}

/// Value and first two ρ-derivatives at a point.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ProfileSample {
    pub value: Complex64,
    pub d_rho: Complex64,
    pub d2_rho: Complex64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RadialProfile {
    m: i64,
    basis: ProfileBasis,
    coeffs: Vec<Complex64>,
}

fn binomial_row(j: usize) -> Vec<f64> {
    let mut row = vec![1.0; j + 1];
    for i in 1..j {
        row[i] = row[i - 1] * (j + 1 - i) as f64 / i as f64;
    }
    row
}

/// Horner for p, p', p'' at z.
fn horner2(coeffs: &[Complex64], z: f64) -> (Complex64, Complex64, Complex64) {
    let zero = Complex64::new(0.0, 0.0);
    let (mut p, mut dp, mut ddp) = (zero, zero, zero);
    for c in coeffs.iter().rev() {
        ddp = ddp * z + 2.0 * dp;
        dp = dp * z + p;
        p = p * z + c;
    }
    (p, dp, ddp)
}

impl RadialProfile {
    pub fn new(m: i64, basis: ProfileBasis, coeffs: Vec<Complex64>) -> Self {
        RadialProfile { m, basis, coeffs }
    }

    pub fn interior(m: i64, coeffs: Vec<Complex64>) -> Self {
        Self::new(m, ProfileBasis::Interior, coeffs)
    }

    pub fn boundary(m: i64, coeffs: Vec<Complex64>) -> Self {
        Self::new(m, ProfileBasis::Boundary, coeffs)
    }

    pub fn from_real(m: i64, basis: ProfileBasis, coeffs: &[f64]) -> Self {
        Self::new(m, basis, coeffs.iter().map(|&c| Complex64::new(c, 0.0)).collect())
    }

    pub fn zero(m: i64, basis: ProfileBasis) -> Self {
        Self::new(m, basis, Vec::new())
    }

    /// Builds Σ c ρ^p from (p, c) pairs; every p must be |m| plus an even nonnegative integer.
    pub fn from_powers(m: i64, terms: &[(i64, Complex64)]) -> Result<Self> {
        let am = m.abs();
        let mut coeffs = Vec::new();
        for &(p, c) in terms {
            let shift = p - am;
            if shift < 0 || shift % 2 != 0 {
                return Err(Error::Malformed(format!(
                    "power ρ^{p} is not smooth on mode {m}: need |m| + 2j"
                )));
            }
            let j = (shift / 2) as usize;
            if coeffs.len() <= j {
                coeffs.resize(j + 1, Complex64::new(0.0, 0.0));
            }
            coeffs[j] += c;
        }
        Ok(Self::interior(m, coeffs))
    }

    pub fn m(&self) -> i64 {
        self.m
    }

    pub fn abs_m(&self) -> u32 {
        self.m.unsigned_abs() as u32
    }

    pub fn basis(&self) -> ProfileBasis {
        self.basis
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.norm() == 0.0)
    }

    /// Value at ρ = 1 (x = 0).
    pub fn at_boundary(&self) -> Complex64 {
        match self.basis {
            ProfileBasis::Interior => self.coeffs.iter().sum(),
            ProfileBasis::Boundary => self.coeffs.first().copied().unwrap_or_default(),
        }
    }

    /// Value and ρ-derivatives at (x, ρ) with x = 1 − ρ² supplied by the caller.
    pub fn sample(&self, x: f64, rho: f64) -> ProfileSample {
        let a = self.abs_m() as i32;
        let af = a as f64;
        let (p, dp, ddp, sign) = match self.basis {
            ProfileBasis::Interior => {
                let (p, dp, ddp) = horner2(&self.coeffs, rho * rho);
                (p, dp, ddp, 1.0)
            }
            ProfileBasis::Boundary => {
                let (p, dp, ddp) = horner2(&self.coeffs, x);
                (p, dp, ddp, -1.0)
            }
        };
        let ra = rho.powi(a);
        let ra1 = if a >= 1 { rho.powi(a - 1) } else { 0.0 };
        let ra2 = if a >= 2 { rho.powi(a - 2) } else { 0.0 };
        let value = p * ra;
        let d_rho = p * (af * ra1) + dp * (sign * 2.0 * ra * rho);
        let d2_rho = p * (af * (af - 1.0) * ra2)
            + dp * (sign * (4.0 * af + 2.0) * ra)
            + ddp * (4.0 * ra * rho * rho);
        ProfileSample { value, d_rho, d2_rho }
    }

    pub fn eval(&self, rho: f64) -> Complex64 {
        self.sample((1.0 - rho) * (1.0 + rho), rho).value
    }

    /// The same function with coefficients in `basis`.
    pub fn to_basis(&self, basis: ProfileBasis) -> RadialProfile {
        if basis == self.basis {
            return self.clone();
        }
        // s^j = (1−x)^j and x^j = (1−s)^j share one binomial transform.
        let n = self.coeffs.len();
        let mut out = vec![Complex64::new(0.0, 0.0); n];
        for (j, c) in self.coeffs.iter().enumerate() {
            for (i, b) in binomial_row(j).iter().enumerate() {
                let sgn = if i % 2 == 0 { 1.0 } else { -1.0 };
                out[i] += c * (sgn * b);
            }
        }
        RadialProfile::new(self.m, basis, out)
    }

    pub fn scale(&self, s: Complex64) -> RadialProfile {
        RadialProfile::new(self.m, self.basis, self.coeffs.iter().map(|c| c * s).collect())
    }

    /// Sum, in the basis of `self`.
    pub fn add(&self, other: &RadialProfile) -> Result<RadialProfile> {
        if other.m != self.m {
            return Err(Error::ModeMismatch(self.m, other.m));
        }
        let other = other.to_basis(self.basis);
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut out = vec![Complex64::new(0.0, 0.0); n];
        for (i, c) in self.coeffs.iter().enumerate() {
            out[i] += c;
        }
        for (i, c) in other.coeffs.iter().enumerate() {
            out[i] += c;
        }
        Ok(RadialProfile::new(self.m, self.basis, out))
    }

    pub fn sub(&self, other: &RadialProfile) -> Result<RadialProfile> {
        self.add(&other.scale(Complex64::new(-1.0, 0.0)))
    }

    /// (L_{γ,m} − λ) applied exactly; the result stays in the same basis.
    #[allow(clippy::needless_range_loop)]
    pub fn apply_l(&self, gamma: f64, lambda: Complex64) -> RadialProfile {
        let am = self.abs_m() as f64;
        let n = self.coeffs.len();
        let mut out = vec![Complex64::new(0.0, 0.0); n];
        for j in 0..n {
            let jf = j as f64;
            let (diag, next) = match self.basis {
                ProfileBasis::Interior => {
                    ((am + 2.0 * jf + gamma + 1.0).powi(2), 4.0 * (jf + 1.0) * (am + jf + 1.0))
                }
                ProfileBasis::Boundary => {
                    ((2.0 * jf + am + gamma + 1.0).powi(2), 4.0 * (jf + 1.0) * (jf + 1.0 + gamma))
                }
            };
            out[j] = self.coeffs[j] * (diag - lambda);
            if j + 1 < n {
                out[j] -= self.coeffs[j + 1] * next;
            }
        }
        RadialProfile::new(self.m, self.basis, out)
    }

    /// ρ ∂_ρ applied exactly.
    pub fn rho_d_rho(&self) -> RadialProfile {
        let am = self.abs_m() as f64;
        let n = self.coeffs.len();
        let mut out = vec![Complex64::new(0.0, 0.0); n];
        for (j, c) in self.coeffs.iter().enumerate() {
            let jf = j as f64;
            match self.basis {
                ProfileBasis::Interior => out[j] += c * (am + 2.0 * jf),
                ProfileBasis::Boundary => {
                    out[j] += c * (am + 2.0 * jf);
                    if j > 0 {
                        out[j - 1] -= c * (2.0 * jf);
                    }
                }
            }
        }
        RadialProfile::new(self.m, self.basis, out)
    }

    /// Multiplication by x = 1 − ρ².
    pub fn times_x(&self) -> RadialProfile {
        let zero = Complex64::new(0.0, 0.0);
        let out = match self.basis {
            ProfileBasis::Boundary => std::iter::once(zero).chain(self.coeffs.iter().copied()).collect(),
            ProfileBasis::Interior => {
                let mut out = self.coeffs.clone();
                out.push(zero);
                for (j, c) in self.coeffs.iter().enumerate() {
                    out[j + 1] -= c;
                }
                out
            }
        };
        RadialProfile::new(self.m, self.basis, out)
    }
}
