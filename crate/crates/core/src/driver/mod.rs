//! Configuration, file I/O, error norms, convergence study and run orchestration.

pub mod config;
pub mod convergence;
pub mod io;
pub mod norms;
mod run;

pub use config::{Format, MeshConfig, OutputConfig, RunConfig, ScalarInput, SubdomainConfig};
pub use convergence::{convergence_study, run_level, study_mesh, ConvergenceConfig, ErrorReport, ErrorRow};
pub use io::{line_profile, read_scalar_field, read_scalar_field_with};
pub use norms::l2_spacetime_error;
pub use run::{converge, run, validate, RunSummary};

use crate::error::Error;

/// Process exit code for an error: 2 for configuration problems, 3 for
/// solver non-convergence, 1 otherwise.
pub fn exit_code(err: &Error) -> i32 {
    match err {
        Error::Config(_) | Error::Ingestion { .. } | Error::Json(_) | Error::UnsupportedMesh(_) => 2,
        Error::NonConvergence { .. } => 3,
        _ => 1,
    }
}
