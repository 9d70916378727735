//! Finite simplicial complexes embedded in `R^N`.
//!
//! The crate provides the geometric substrate used by the push-out engine:
//! cached per-simplex geometry (barycentric coordinates, radius, thickness),
//! face-closed complexes with incidence queries and a designated subcomplex
//! `Q`, sampled validation, edgewise subdivision and a few constructions on
//! single simplices.

pub mod complex;
pub mod error;
pub mod exec;
pub mod frame;
pub mod point;
pub mod sampling;
pub mod simplex;
pub mod subdivide;
pub mod validate;

pub use complex::{BarycentricCoords, ComplexData, Incidence, SimplexMetrics, SimplicialComplex};
pub use error::{GeomError, Result};
pub use exec::Exec;
pub use frame::FaceFrame;
pub use point::Point;
pub use simplex::{Radial, RayHit, Simplex};
pub use subdivide::{subdivide, Subdivision};
pub use validate::{validate_complex, validate_data, ValidationReport, Violation};

/// Relative pivot tolerance of the independence rank test.
pub const TOL_RANK: f64 = 1e-9;
/// Reconstruction tolerance for barycentric coordinates.
pub const TOL_BARY: f64 = 1e-9;
/// Membership tolerance, relative to the diameter of `|P|`.
pub const TOL_MEMBERSHIP_REL: f64 = 1e-8;
/// A barycentric weight must exceed this to count as strictly positive.
pub const TOL_INTERIOR: f64 = 1e-10;
