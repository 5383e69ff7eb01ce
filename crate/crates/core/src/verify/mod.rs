//! Finite-sample audits of the trace, coercivity, decay and density inequalities.
//!
//! Each audit turns an inequality into margins that should be nonnegative and
//! collects them in an [`AuditReport`].

mod cm;
mod cutoff;
mod density;
mod forms;
mod report;
mod trace1d;

pub use cm::{cm_prime_value, cm_table, cm_value, BURN_IN, PLATEAU_FACTOR};
pub use cutoff::{audit_cutoff_decay, cutoff_norm, Cutoff, SLOPE_TOL};
pub use density::{density_divergence, density_weights, flattening_sequence, EXPONENT_BAND, FLATTEN_TOL};
pub use forms::{coercivity_constant, coercivity_gamma0, gram_positivity, COERCIVITY_SLACK};
pub use report::AuditReport;
pub use trace1d::{
    audit_ell_of_eps, audit_trace_1d, audit_trace_log, ell_of_eps, log_mass, log_norms, log_sq_mass, trace_1d_margin, trace_log_margin,
    weighted_norms_1d,
};
