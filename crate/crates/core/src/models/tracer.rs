//! Slightly compressible single-phase flow carrying a passive tracer.
//!
//! Unknowns per element are pressure and concentration; per face a Darcy mass
//! flux `U` and a diffusive tracer flux `Z`. Advection is upwinded on the sign
//! of `U`; across a non-matching interface the sub-face's own elements (fine
//! level on one side, coarse level on the other) supply the upwind value.

use super::props::upwind_is_minus;
use super::wells::{resolve_wells, wells_by_cell, Well};
use super::{check_finite, ComponentBalance, FluidProps, Model, SlabContext, TracerParams, UnitSystem};
use crate::error::Result;
use crate::solver::SlabSystem;
use crate::stdisc::{accumulation_weight, flux_divergence_row, velocity_mass_coeff};
use crate::stmesh::{FieldLayout, SpaceTimeMesh};

const P: usize = 0;
const C: usize = 1;
const U: usize = 0;
const Z: usize = 1;

#[derive(Debug, Clone)]
pub struct SinglePhaseTracer {
    pub fluid: FluidProps,
    pub diffusion: f64,
    pub units: UnitSystem,
    pub initial_pressure: f64,
    pub initial_concentration: f64,
    wells: Vec<Vec<Well>>,
}

impl SinglePhaseTracer {
    pub fn new(params: &TracerParams, mesh: &SpaceTimeMesh) -> Result<Self> {
        let units = params.units.system();
        let wells = resolve_wells(&params.wells, mesh, &units)?;
        Ok(SinglePhaseTracer {
            fluid: params.fluid,
            diffusion: params.diffusion,
            units,
            initial_pressure: params.initial_pressure,
            initial_concentration: params.initial_concentration,
            wells: wells_by_cell(&wells, mesh.cells.len()),
        })
    }

    /// Fluid and tracer mass rates of one well and their derivatives
    /// `(q, dq/dp, qc, dqc/dp, dqc/dc)`. Producers take fluid at the cell
    /// concentration.
    fn well_rate(&self, w: &Well, p: f64, c: f64) -> [f64; 5] {
        match *w {
            Well::Injector { volume_rate, concentration, .. } => {
                let q = volume_rate * self.fluid.rho_ref;
                [q, 0.0, q * concentration, 0.0, 0.0]
            }
            Well::Producer { bhp, well_index, .. } => {
                let (rho, drho) = self.fluid.density(p);
                let mu = self.fluid.viscosity;
                let q = well_index * rho / mu * (p - bhp);
                let dq = well_index / mu * (drho * (p - bhp) + rho);
                [-q, -dq, -q * c, -dq * c, -q]
            }
        }
    }

    fn well_rates(&self, cell: usize, p: f64, c: f64) -> [f64; 5] {
        let mut out = [0.0; 5];
        for w in &self.wells[cell] {
            for (o, v) in out.iter_mut().zip(self.well_rate(w, p, c)) {
                *o += v;
            }
        }
        out
    }
}

impl Model for SinglePhaseTracer {
    fn name(&self) -> &'static str {
        "single_phase_tracer"
    }

    fn layout(&self) -> FieldLayout {
        FieldLayout::tracer()
    }

    fn initial_cells(&self, mesh: &SpaceTimeMesh) -> Vec<f64> {
        mesh.cells
            .iter()
            .flat_map(|_| [self.initial_pressure, self.initial_concentration])
            .collect()
    }

    fn assemble(&self, ctx: &SlabContext, x: &[f64], prev: &[f64], sys: &mut SlabSystem) -> Result<()> {
        let mesh = ctx.mesh;
        let map = ctx.map;
        let mu = self.fluid.viscosity;
        let inv_d = 1.0 / self.diffusion;
        sys.clear();
        for (fi, f) in mesh.faces.iter().enumerate() {
            let ru = map.flux_dof(fi, U);
            let rz = map.flux_dof(fi, Z);
            let (Some(m), Some(p)) = (f.minus, f.plus) else {
                for r in [ru, rz] {
                    sys.add(r, r, 1.0);
                    sys.add_residual(r, x[r]);
                }
                continue;
            };
            let cm = &mesh.cells[mesh.elements[m].cell];
            let cp = &mesh.cells[mesh.elements[p].cell];
            let (pm, pp) = (map.cell_dof(m, P), map.cell_dof(p, P));
            let (qm, qp) = (map.cell_dof(m, C), map.cell_dof(p, C));
            let (rho_m, drho_m) = self.fluid.density(x[pm]);
            let (rho_p, drho_p) = self.fluid.density(x[pp]);
            let rs = rho_m + rho_p;
            let (u, z) = (x[ru], x[rz]);

            // Darcy: mu * 2/(rho_m + rho_p) * c_K * U - (P_m - P_p)
            let ck = velocity_mass_coeff(
                f,
                fi,
                Some(cm.permeability[f.axis] * self.units.darcy),
                Some(cp.permeability[f.axis] * self.units.darcy),
            )?;
            let a = mu * 2.0 / rs * ck;
            sys.add_residual(ru, a * u - (x[pm] - x[pp]));
            sys.add(ru, ru, a);
            sys.add(ru, pm, -1.0 - a / rs * drho_m * u);
            sys.add(ru, pp, 1.0 - a / rs * drho_p * u);

            // diffusion: 2/(rho_m + rho_p) / D * c_phi * Z - (C_m - C_p)
            let cphi = velocity_mass_coeff(f, fi, Some(cm.porosity), Some(cp.porosity))?;
            let b = 2.0 / rs * inv_d * cphi;
            sys.add_residual(rz, b * z - (x[qm] - x[qp]));
            sys.add(rz, rz, b);
            sys.add(rz, pm, -b / rs * drho_m * z);
            sys.add(rz, pp, -b / rs * drho_p * z);
            sys.add(rz, qm, -1.0);
            sys.add(rz, qp, 1.0);
        }

        for (ei, e) in mesh.elements.iter().enumerate() {
            let cell = &mesh.cells[e.cell];
            let w = cell.porosity * accumulation_weight(e);
            let (rp, rc) = (map.cell_dof(ei, P), map.cell_dof(ei, C));
            let (p, c) = (x[rp], x[rc]);
            let (rho, drho) = self.fluid.density(p);
            let (p_prev, dp_prev) = ctx.previous(x, prev, ei, P);
            let (c_prev, dc_prev) = ctx.previous(x, prev, ei, C);
            let (rho_prev, drho_prev) = self.fluid.density(p_prev);

            let mut r_fluid = w * (rho - rho_prev);
            let mut r_tracer = w * (rho * c - rho_prev * c_prev);
            sys.add(rp, rp, w * drho);
            sys.add(rc, rp, w * drho * c);
            sys.add(rc, rc, w * rho);
            if let Some(d) = dp_prev {
                sys.add(rp, d, -w * drho_prev);
                sys.add(rc, d, -w * drho_prev * c_prev);
            }
            if let Some(d) = dc_prev {
                sys.add(rc, d, -w * rho_prev);
            }

            for (face, sign) in flux_divergence_row(mesh, ei) {
                let du = map.flux_dof(face, U);
                let dz = map.flux_dof(face, Z);
                let f = &mesh.faces[face];
                r_fluid += sign * x[du];
                sys.add(rp, du, sign);
                r_tracer += sign * x[dz];
                sys.add(rc, dz, sign);
                if let (Some(m), Some(pl)) = (f.minus, f.plus) {
                    let up = if upwind_is_minus(x[du]) { m } else { pl };
                    let dcu = map.cell_dof(up, C);
                    r_tracer += sign * x[du] * x[dcu];
                    sys.add(rc, du, sign * x[dcu]);
                    sys.add(rc, dcu, sign * x[du]);
                }
            }

            let [q, dq, qc, dqc_p, dqc_c] = self.well_rates(e.cell, p, c);
            let dt = e.dt();
            r_fluid -= q * dt;
            r_tracer -= qc * dt;
            sys.add(rp, rp, -dq * dt);
            sys.add(rc, rp, -dqc_p * dt);
            sys.add(rc, rc, -dqc_c * dt);
            sys.add_residual(rp, r_fluid);
            sys.add_residual(rc, r_tracer);
        }
        check_finite(sys, ctx)
    }

    fn balance(&self, ctx: &SlabContext, x: &[f64], prev: &[f64]) -> Vec<ComponentBalance> {
        let mesh = ctx.mesh;
        let map = ctx.map;
        let mut fluid = ComponentBalance::new("fluid_mass");
        let mut tracer = ComponentBalance::new("tracer_mass");
        for (ci, cell) in mesh.cells.iter().enumerate() {
            let e = mesh.final_element(ci);
            let (p, c) = (x[map.cell_dof(e, P)], x[map.cell_dof(e, C)]);
            let (p0, c0) = (prev[2 * ci], prev[2 * ci + 1]);
            let w = cell.porosity * cell.volume;
            let (rho, rho0) = (self.fluid.density(p).0, self.fluid.density(p0).0);
            fluid.storage_change += w * (rho - rho0);
            tracer.storage_change += w * (rho * c - rho0 * c0);
        }
        for (ei, e) in mesh.elements.iter().enumerate() {
            for w in &self.wells[e.cell] {
                let rates = self.well_rate(w, x[map.cell_dof(ei, P)], x[map.cell_dof(ei, C)]);
                fluid.add_flow(rates[0] * e.dt());
                tracer.add_flow(rates[2] * e.dt());
            }
        }
        vec![fluid, tracer]
    }
}
