//! Differential forms on model cusps: coordinate exterior calculus, slab
//! norms, Fourier modes and primitives, harmonic test forms and the
//! boundary-versus-bulk balance identity.

mod algebra;
mod balance;
mod coeff;
mod form;
mod harmonic;
mod model;
mod norms;
mod serial;

#[cfg(test)]
mod tests;

pub use algebra::{complement_sign, interior_sign, subsets, wedge_sign, Mask};
pub use balance::{
    boundary_functional, bulk_functional, critical_inequality, cusp_price_check, dual_first_minimum,
    primitive_check, verify_cusp_balance, BalanceReport, CriticalCheck, PriceCheck, PrimitiveCheck,
};
pub use coeff::{interpolate, stencil_derivative, Coeff, ExpSum, ExpTerm, Grid};
pub use form::{
    certify_harmonic, codifferential, ds_wedge, exterior_derivative, fourier_primitive, harmonic_residuals,
    hodge_star, interior, slice_inner, CuspForm, DecayTag, ModeComponent,
};
pub use harmonic::{
    make_zero_mode, solve_harmonic_mode, solve_harmonic_mode_with_info, tangential_indices, ModeSolveInfo,
    EXACT_HARMONIC_TOL, SOLVED_HARMONIC_TOL,
};
pub use model::CuspModel;
pub use norms::{slab_l2_norm, slice_profile, SliceProfile};
pub use serial::{form_from_doc, form_from_json, form_to_doc, form_to_json, CoeffDoc, FormDoc, ModeDoc};
