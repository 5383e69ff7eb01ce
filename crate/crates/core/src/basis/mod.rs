//! Special functions and the generalized Zernike eigenbasis.

mod gamma;
mod phi;
mod profile;
mod quadrature;
mod special;
mod zernike;

pub use gamma::{GammaParam, Regime};
pub use phi::{c0_lower_bound, phi_eval, x_gamma_root, PhiGamma, PhiSample};
pub use profile::{ProfileBasis, ProfileSample, RadialProfile};
pub use quadrature::{
    gauss_jacobi, gauss_legendre, quad_rule, QuadratureRule, RadialRule, RuleSpec, WeightKind,
};
pub use special::{jacobi_eval, jacobi_eval2, log_gamma, ln_binomial};
pub use zernike::{
    zernike_eval, zernike_norm_sq, zernike_profile, zernike_profile_in, ZernikeIndex,
    ZernikeSample,
};
pub(crate) use zernike::{unit_mode_table, unit_radial_table};

/// Japanese bracket ⟨k⟩ = (1 + k²)^{1/2}.
pub fn bracket(k: i64) -> f64 {
    (1.0 + (k as f64) * (k as f64)).sqrt()
}
