//! Sequential march over matching slabs.

use super::newton::{newton_solve_slab, NewtonOptions, NewtonReport};
use crate::error::Result;
use crate::models::{ComponentBalance, Model, SlabContext};
use crate::stmesh::{enumerate_dofs, DofMap, SpaceTimeMesh};

/// Converged cell unknowns of one slab (all time levels) and its reports.
#[derive(Debug, Clone)]
pub struct SlabRecord {
    pub slab: usize,
    /// Cell part of the slab vector, `element * n_fields + field`.
    pub cells: Vec<f64>,
    pub report: NewtonReport,
    pub balance: Vec<ComponentBalance>,
}

#[derive(Debug, Clone)]
pub struct SimulationState {
    pub map: DofMap,
    /// Initial cell fields, `cell * n_fields + field`.
    pub initial: Vec<f64>,
    pub slabs: Vec<SlabRecord>,
    /// Flux unknowns of the last slab.
    pub fluxes: Vec<f64>,
}

impl SimulationState {
    pub fn value(&self, slab: usize, element: usize, field: usize) -> f64 {
        self.slabs[slab].cells[self.map.cell_local(element, field)]
    }

    /// Cell fields at the end of `slab`, `cell * n_fields + field`.
    pub fn cells_at_end(&self, mesh: &SpaceTimeMesh, slab: usize) -> Vec<f64> {
        let nf = self.map.layout.n_fields();
        let mut out = vec![0.0; mesh.cells.len() * nf];
        for ci in 0..mesh.cells.len() {
            let e = mesh.final_element(ci);
            for k in 0..nf {
                out[ci * nf + k] = self.value(slab, e, k);
            }
        }
        out
    }

    pub fn final_cells(&self, mesh: &SpaceTimeMesh) -> Vec<f64> {
        match self.slabs.len() {
            0 => self.initial.clone(),
            n => self.cells_at_end(mesh, n - 1),
        }
    }

    /// Balance terms summed over all slabs.
    pub fn cumulative_balance(&self) -> Vec<ComponentBalance> {
        let mut total: Vec<ComponentBalance> = Vec::new();
        for rec in &self.slabs {
            if total.is_empty() {
                total = rec.balance.iter().map(|b| ComponentBalance::new(b.name)).collect();
            }
            for (t, b) in total.iter_mut().zip(&rec.balance) {
                t.storage_change += b.storage_change;
                t.inflow += b.inflow;
                t.outflow += b.outflow;
            }
        }
        total
    }

    pub fn reports(&self) -> impl Iterator<Item = &NewtonReport> {
        self.slabs.iter().map(|s| &s.report)
    }
}

/// Initial slab iterate: previous cell values on every level, previous fluxes.
pub fn initial_iterate(mesh: &SpaceTimeMesh, map: &DofMap, prev: &[f64], fluxes: Option<&[f64]>) -> Vec<f64> {
    let nf = map.layout.n_fields();
    let mut x = vec![0.0; map.len()];
    if let Some(u) = fluxes {
        x[..map.n_flux()].copy_from_slice(u);
    }
    for (ei, e) in mesh.elements.iter().enumerate() {
        for k in 0..nf {
            x[map.cell_dof(ei, k)] = prev[e.cell * nf + k];
        }
    }
    x
}

pub fn advance(model: &dyn Model, mesh: &SpaceTimeMesh, opts: &NewtonOptions) -> Result<SimulationState> {
    advance_with(model, mesh, opts, |_, _| {})
}

/// March all slabs, calling `observer` with every converged slab and its full
/// unknown vector.
pub fn advance_with(
    model: &dyn Model,
    mesh: &SpaceTimeMesh,
    opts: &NewtonOptions,
    mut observer: impl FnMut(&SlabRecord, &[f64]),
) -> Result<SimulationState> {
    let map = enumerate_dofs(mesh, model.layout());
    let initial = model.initial_cells(mesh);
    let mut prev = initial.clone();
    let mut fluxes: Option<Vec<f64>> = None;
    let mut slabs = Vec::with_capacity(mesh.n_slabs);
    for slab in 0..mesh.n_slabs {
        let ctx = SlabContext { mesh, map: &map, slab };
        let mut x = initial_iterate(mesh, &map, &prev, fluxes.as_deref());
        let report = newton_solve_slab(model, &ctx, &mut x, &prev, opts)?;
        let balance = model.balance(&ctx, &x, &prev);
        let record = SlabRecord { slab, cells: x[map.n_flux()..].to_vec(), report, balance };
        observer(&record, &x);
        let nf = map.layout.n_fields();
        for ci in 0..mesh.cells.len() {
            let e = mesh.final_element(ci);
            for k in 0..nf {
                prev[ci * nf + k] = x[map.cell_dof(e, k)];
            }
        }
        fluxes = Some(x[..map.n_flux()].to_vec());
        slabs.push(record);
    }
    Ok(SimulationState { map, initial, slabs, fluxes: fluxes.unwrap_or_default() })
}
