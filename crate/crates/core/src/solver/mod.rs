//! Slab systems, Schur elimination of fluxes, Newton iteration and the slab march.

mod linsolve;
mod march;
mod newton;
mod schur;
mod system;

pub use linsolve::{sparse_lu_solve, LinearStats};
pub use march::{advance, advance_with, initial_iterate, SimulationState, SlabRecord};
pub use newton::{newton_solve_slab, residual_norm, NewtonOptions, NewtonReport};
pub use schur::{invert_block, recover_fluxes, schur_reduce, scaled_flux_residual, ReducedSystem};
pub use system::SlabSystem;
