//! Dirichlet resolvent, Dirichlet-to-Neumann map, Weyl function, boundary triple and
//! the Krein resolvent formula, all diagonal in the angular mode.

mod dn;
mod kernel;
mod krein;
mod maxdomain;
mod multipliers;
mod resolvent;

pub use dn::{dn_map_mode, dn_value, frobenius_lift, weyl_function, weyl_norm_sweep, DnRoute, DnValue, DEFAULT_MODES, DEFAULT_TRUNCATION, DN_TOL, LIFT_TERMS};
pub use kernel::{dn_map_mode_ode, KernelMode};
pub use krein::{krein_denominator, krein_resolvent, robin_scan, KreinCertificate, KreinModeRecord, KreinSolution, KREIN_TOL};
pub use maxdomain::{
    boundary_triple_maps, decompose_max, extended_dirichlet_trace, kernel_with_trace, lagrange_check, poisson_lift, LagrangeCheck,
    MaxDomainElement, MaxDomainSplit,
};
pub use multipliers::{trace_weight, FourierMultiplier, IotaKind, IotaMultiplier, Symbol};
pub use resolvent::{check_admissible, check_admissible_mode, dirichlet_resolvent, SPECTRAL_TOL};
