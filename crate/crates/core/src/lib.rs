//! Space-time enhanced velocity mixed finite elements for flow and transport
//! in porous media.
//!
//! A domain is split into box subdomains, each with its own spatial grid and
//! time step. Within every matching slab (one coarse time step) all subdomains
//! and all their time levels are solved together as one Newton system whose
//! flux unknowns are eliminated locally before a sparse direct solve.
//!
//! - [`stmesh`]: subdomains, space-time elements and faces, interface sub-faces, DOF numbering
//! - [`stdisc`]: lowest-order quadrature kernels shared by all models
//! - [`models`]: linear parabolic, tracer and two-phase residuals with their Jacobians
//! - [`solver`]: slab systems, Schur elimination, Newton, slab march
//! - [`driver`]: JSON configuration, output writers, error norms and the convergence study

pub mod driver;
pub mod error;
pub mod models;
pub mod solver;
pub mod stdisc;
pub mod stmesh;

pub use error::{Error, Result};
