//! Geometry, area sensitivities and constrained optimization for Reuleaux
//! polygons and disk-polygons of unit width.
//!
//! The crate constructs constant-width polygons from unit-circle arcs,
//! computes exact areas and their first- and second-order derivatives under
//! vertex and center perturbations, recovers the Lagrange multipliers of the
//! diameter constraints in both constrained formulations, assembles the
//! block Hessians and critical-cone quadratic forms, and runs constrained
//! ascent/descent over the constant-width family. Every exported closed
//! form is paired with an independent numerical oracle in [`verify`];
//! `verify::full_certification` is the release gate.
//!
//! The headline facts this machinery certifies numerically: the regular
//! n-gon is the only critical point of the area among Reuleaux n-gons, it is
//! not a local minimum for n >= 5, ascent converges to it, and descent with
//! vertex merging terminates at the Reuleaux triangle.

pub mod area;
pub mod error;
pub mod geom;
pub mod io;
pub mod lagrangian;
pub mod linalg;
pub mod optimize;
pub mod sensitivity;
pub mod verify;

pub use error::{Error, Result};
pub use geom::{
    build_regular_reuleaux, circle_circle_intersection, opposite_indices,
    validate_constant_width, DiskPolygon, PerturbationField, Point2, ReuleauxPolygon, Side,
    Tolerances, ValidationReport,
};
