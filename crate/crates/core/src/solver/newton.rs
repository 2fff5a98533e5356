//! Monolithic Newton iteration over all time levels of a matching slab.

use serde::{Deserialize, Serialize};

use super::linsolve::sparse_lu_solve;
use super::schur::{invert_block, recover_fluxes, schur_reduce, scaled_flux_residual};
use super::system::SlabSystem;
use crate::error::{Error, Result};
use crate::models::{Model, SlabContext};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NewtonOptions {
    #[serde(default = "default_tolerance")]
    pub tolerance: f64,
    #[serde(default = "default_max_iter")]
    pub max_iter: usize,
    /// Per-cell cap on the saturation update of one iteration.
    #[serde(default)]
    pub max_saturation_change: Option<f64>,
}

fn default_tolerance() -> f64 {
    1e-6
}

fn default_max_iter() -> usize {
    20
}

impl Default for NewtonOptions {
    fn default() -> Self {
        NewtonOptions { tolerance: default_tolerance(), max_iter: default_max_iter(), max_saturation_change: None }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct NewtonReport {
    pub slab: usize,
    pub iterations: usize,
    /// Scaled residual max-norm at the initial iterate and after every iteration.
    pub history: Vec<f64>,
    pub converged: bool,
    pub linear_solves: usize,
    /// Nonzeros of the last reduced matrix.
    pub nnz: usize,
    pub reduced_size: usize,
    pub solve_seconds: f64,
}

/// Max-norm of the residual with conservation rows divided by the pore volume
/// of their element and flux rows brought to flux units by `A_uu^{-1}` and
/// divided by the smallest pore volume.
pub fn residual_norm(sys: &SlabSystem, ctx: &SlabContext) -> Result<f64> {
    let mesh = ctx.mesh;
    let nf = sys.n_fields;
    let mut norm = 0.0f64;
    let mut pv_min = f64::INFINITY;
    for (ei, e) in mesh.elements.iter().enumerate() {
        let pv = mesh.cells[e.cell].pore_volume();
        pv_min = pv_min.min(pv);
        for k in 0..nf {
            norm = norm.max(sys.r_p[ei * nf + k].abs() / pv);
        }
    }
    let nfam = sys.n_families;
    let mut inv = Vec::with_capacity(sys.a_uu.len());
    for f in 0..sys.n_faces {
        inv.extend(invert_block(sys.uu_block(f), nfam).ok_or_else(|| Error::Elimination {
            face: f,
            detail: "singular flux block".into(),
        })?);
    }
    for v in scaled_flux_residual(sys, &inv) {
        norm = norm.max(v.abs() / pv_min);
    }
    if norm.is_nan() {
        return Ok(f64::INFINITY);
    }
    Ok(norm)
}

/// Apply one Newton update `x += dx`, clamping the saturation field if requested.
fn apply_update(model: &dyn Model, ctx: &SlabContext, opts: &NewtonOptions, x: &mut [f64], du: &[f64], dp: &[f64]) {
    let map = ctx.map;
    let nu = map.n_flux();
    for (xi, d) in x[..nu].iter_mut().zip(du) {
        *xi += d;
    }
    let nf = map.layout.n_fields();
    let clamp = model.saturation_field().zip(opts.max_saturation_change);
    for (k, d) in dp.iter().enumerate() {
        let d = match clamp {
            Some((field, cap)) if k % nf == field => d.clamp(-cap, cap),
            _ => *d,
        };
        x[nu + k] += d;
    }
}

/// Solve one slab by Newton's method. `x` holds the initial iterate on entry
/// and the converged slab unknowns on success.
pub fn newton_solve_slab(
    model: &dyn Model,
    ctx: &SlabContext,
    x: &mut [f64],
    prev: &[f64],
    opts: &NewtonOptions,
) -> Result<NewtonReport> {
    let mut sys = SlabSystem::new(ctx.map);
    model.assemble(ctx, x, prev, &mut sys)?;
    let mut report = NewtonReport { slab: ctx.slab, ..Default::default() };
    report.history.push(residual_norm(&sys, ctx)?);
    for k in 1..=opts.max_iter {
        let red = schur_reduce(&sys)?;
        let (dp, stats) = sparse_lu_solve(red.n, &red.triplets, &red.rhs)?;
        let du = recover_fluxes(&sys, &red, &dp);
        apply_update(model, ctx, opts, x, &du, &dp);
        report.linear_solves += 1;
        report.nnz = stats.nnz;
        report.reduced_size = stats.n;
        report.solve_seconds += stats.seconds;
        report.iterations = k;
        // an iterate that breaks assembly or elimination counts as divergence
        let norm = match model.assemble(ctx, x, prev, &mut sys).and_then(|_| residual_norm(&sys, ctx)) {
            Ok(v) => v,
            Err(Error::Assembly { .. } | Error::Elimination { .. }) => f64::INFINITY,
            Err(e) => return Err(e),
        };
        report.history.push(norm);
        if !norm.is_finite() {
            break;
        }
        if norm < opts.tolerance {
            report.converged = true;
            return Ok(report);
        }
    }
    Err(Error::NonConvergence { slab: ctx.slab, report })
}
