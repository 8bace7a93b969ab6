//! Numerical valuations of contact and symplectic geometry.
//!
//! The crate is split by concern:
//!
//! * [`matnum`]: Pfaffians, skew canonical forms, mixed discriminants,
//!   compound traces, Euler secant numbers, Beta/Gamma and quadrature.
//! * [`contact_local`]: contact points of hypersurfaces in the standard
//!   contact space and their local contact areas.
//! * [`sphere_contact`]: exact rational tables for contact spheres.
//! * [`grassmann_mc`]: Haar sampling on Grassmannians and Kähler angle
//!   statistics.
//! * [`crofton_flat`]: oriented intersection indices, the symplectic
//!   Crofton average and the Gaussian curvature Crofton integral.
//! * [`report`] and [`suite`]: experiment records and the full
//!   verification run behind `cval check-all`.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod contact_local;
pub mod crofton_flat;
mod error;
pub mod grassmann_mc;
pub mod matnum;
pub mod report;
pub mod sphere_contact;
pub mod suite;
pub mod tolerances;

pub use error::{Error, Result};
