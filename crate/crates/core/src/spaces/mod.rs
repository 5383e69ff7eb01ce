//! Sobolev scales on the disk and circle, traces, and their right inverses.

mod boundary;
mod lifts;
mod spectral;
mod traces;

pub use boundary::{boundary_norm, boundary_pairing, trace_weight_sq, BoundaryFunction, BoundaryNorm};
pub use lifts::{right_inverse_dirichlet, Bump, DirichletLift};
pub use spectral::{sobolev_d_norm, SpectralMode, SpectralVector};
pub use traces::{
    neumann_null_projection, right_inverse_neumann, trace_dirichlet, trace_dirichlet_sum, trace_neumann,
    trace_neumann_spectral,
};
