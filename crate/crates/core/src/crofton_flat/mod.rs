//! Crofton formulas for flats in `R^{2n}`: oriented intersection indices,
//! the symplectic constant via continuation in the exponent, and the
//! Gaussian curvature integral.

mod estimate;
mod flat;
mod gauss;

pub use estimate::{
    a_s_closed_form, a_s_estimate, crofton_fit, derived_constant_simplifies, kubota_constant,
    simplified_derived_inverse, symplectic_crofton_constant, AsEstimate, ConstantVariant, CroftonConstants,
    CroftonFit, OffsetSign, RatioLaw,
};
pub use flat::{
    intersection_index, projected_volume_identity_check, signed_projection_volume, AffineFlat, PlanarDisk,
    ProjectedVolumeCheck,
};
pub use gauss::{gauss_crofton_closed_form, gauss_crofton_integral, singular_constant, GaussCrofton, SingularConstant};
