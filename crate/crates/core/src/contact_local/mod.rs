//! Contact points of hypersurfaces in the standard contact space
//! `R^{2n+1}` and their local contact areas.

mod areas;
mod closed;
mod description;
mod field;
mod surface;

pub use areas::{
    contact_point_reports, hypersurface_valuation, local_area_dynamical, local_area_geometric, odd_area_relation,
    ContactKind, ContactPointReport,
};
pub use closed::{euler_index_sum, ClosedSurface};
pub use description::{PolynomialTerm, Surface, SurfaceDescription, SurfaceSpec};
pub use field::{
    characteristic_field, find_contact_points, linearized_field, ContactSearch, SearchOptions, SearchWarning,
    SecondFundamentalPair,
};
pub use surface::{
    fd_gradient, fd_hessian, BoxDomain, ContactChart, EllipsoidSheet, FnGraph, GraphFunction, GraphHypersurface,
    Polynomial, Quadratic, TorusSheet,
};
