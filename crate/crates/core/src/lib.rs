//! Spectral numerics for the degenerate elliptic family
//!
//! ```text
//! L_γ = −x∂²_ρ − (ρ⁻¹ − (3+2γ)ρ)∂_ρ − ρ⁻²∂²_ω + (γ+1)²,   x = 1 − ρ²,
//! ```
//!
//! on the closed unit disk: its generalized Zernike eigenbasis, weighted
//! Sobolev scales, regularized Dirichlet/Neumann traces, the
//! Dirichlet-to-Neumann map, the Weyl function and Krein-type resolvents of
//! Robin extensions, together with numerical audits of the trace and density
//! inequalities that govern the |γ| < 1 versus |γ| ≥ 1 dichotomy.
//!
//! Everything is organised per angular mode `m`: the operator commutes with
//! ∂_ω, so every object here is a radial function times `e^{imω}`.

// `!(x > 0.0)` style guards are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod basis;
pub mod error;
pub mod extensions;
pub mod operator;
pub mod spaces;
pub mod verify;

pub use error::{Error, Result};
pub use num_complex::Complex64;

/// Default regularizer constant for γ = 0; must exceed log(e⁴ − 1).
pub const DEFAULT_C0: f64 = 4.0;
