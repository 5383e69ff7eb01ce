//! The degenerate operator L_γ on conormal elements and its sesquilinear forms.

mod conormal;
mod field;
mod forms;

pub use conormal::{apply_L, apply_l_shifted, eigen_residual, l_pointwise, ConormalElement};
pub use field::{sample_field, sample_plain, FieldParts, FieldSample, FieldSum, ModeField, Scaled};
pub use forms::{
    alpha_form, green_residual_pre_r, green_residual_pre_r_skew, h1_form, l2_pair, l2_pair_on,
    split_rule,
    wronskian_bracket, FormValue,
};
#[allow(unused_imports)]
pub(crate) use field::{sample_all, sample_all_plain, weight};
