//! Linear parabolic model `phi p_t + div u = f`, `u = -(K/mu) grad p`.

use super::wells::{resolve_wells, wells_by_cell, Well};
use super::{
    check_finite, manufactured_solution, BoundaryCondition, BoundaryConditions, ComponentBalance, LinearParams,
    Model, SlabContext, UnitSystem,
};
use crate::error::Result;
use crate::solver::SlabSystem;
use crate::stdisc::{
    accumulation_weight, boundary_term, flux_divergence_row, source_row, velocity_mass_coeff,
};
use crate::stmesh::{FieldLayout, SpaceTimeMesh};

#[derive(Debug, Clone)]
pub struct LinearParabolic {
    pub viscosity: f64,
    pub units: UnitSystem,
    pub boundary: BoundaryConditions,
    pub initial_pressure: f64,
    pub manufactured_c1: Option<f64>,
    wells: Vec<Vec<Well>>,
}

impl LinearParabolic {
    pub fn new(params: &LinearParams, mesh: &SpaceTimeMesh) -> Result<Self> {
        let units = params.units.system();
        let wells = resolve_wells(&params.wells, mesh, &units)?;
        Ok(LinearParabolic {
            viscosity: params.viscosity,
            units,
            boundary: params.boundary,
            initial_pressure: params.initial_pressure,
            manufactured_c1: params.manufactured_c1,
            wells: wells_by_cell(&wells, mesh.cells.len()),
        })
    }

    /// Manufactured benchmark: unit coefficients, exact Dirichlet data.
    pub fn manufactured(mesh: &SpaceTimeMesh, c1: f64) -> Self {
        LinearParabolic {
            viscosity: 1.0,
            units: UnitSystem::consistent(),
            boundary: BoundaryConditions::all(BoundaryCondition::Exact),
            initial_pressure: 0.0,
            manufactured_c1: Some(c1),
            wells: vec![Vec::new(); mesh.cells.len()],
        }
    }

    fn mobility(&self, mesh: &SpaceTimeMesh, element: usize, axis: usize) -> f64 {
        let c = &mesh.cells[mesh.elements[element].cell];
        c.permeability[axis] * self.units.darcy / self.viscosity
    }

    fn dirichlet(&self, bc: BoundaryCondition, x: [f64; 2], t: f64) -> Option<f64> {
        match bc {
            BoundaryCondition::NoFlow => None,
            BoundaryCondition::Dirichlet { value } => Some(value),
            BoundaryCondition::Exact => Some(manufactured_solution(x[0], x[1], t, self.manufactured_c1.unwrap_or(0.0)).0),
        }
    }

    fn forcing(&self, x: [f64; 2], t: f64) -> f64 {
        match self.manufactured_c1 {
            Some(c1) => manufactured_solution(x[0], x[1], t, c1).1,
            None => 0.0,
        }
    }

    /// Net volume rate into an element from its wells at pressure `p`, and its
    /// pressure derivative.
    fn well_rate(&self, cell: usize, p: f64) -> (f64, f64) {
        let mut q = 0.0;
        let mut dq = 0.0;
        for w in &self.wells[cell] {
            match *w {
                Well::Injector { volume_rate, .. } => q += volume_rate,
                Well::Producer { bhp, well_index, .. } => {
                    let lam = 1.0 / self.viscosity;
                    q -= well_index * lam * (p - bhp);
                    dq -= well_index * lam;
                }
            }
        }
        (q, dq)
    }
}

impl Model for LinearParabolic {
    fn name(&self) -> &'static str {
        "linear_parabolic"
    }

    fn layout(&self) -> FieldLayout {
        FieldLayout::pressure()
    }

    fn initial_cells(&self, mesh: &SpaceTimeMesh) -> Vec<f64> {
        mesh.cells
            .iter()
            .map(|c| match self.manufactured_c1 {
                Some(c1) => manufactured_solution(c.center[0], c.center[1], 0.0, c1).0,
                None => self.initial_pressure,
            })
            .collect()
    }

    fn assemble(&self, ctx: &SlabContext, x: &[f64], prev: &[f64], sys: &mut SlabSystem) -> Result<()> {
        let mesh = ctx.mesh;
        let map = ctx.map;
        let t0 = ctx.t0();
        sys.clear();
        for (fi, f) in mesh.faces.iter().enumerate() {
            let row = map.flux_dof(fi, 0);
            let u = x[row];
            if let Some(side) = f.boundary_side() {
                let (e, s_out) = f.interior_element().expect("boundary face has one element");
                let Some(g) = self.dirichlet(self.boundary.get(side), f.center, t0 + f.t_mid()) else {
                    sys.add(row, row, 1.0);
                    sys.add_residual(row, u);
                    continue;
                };
                let g = boundary_term(f, t0, |_, _| g);
                let lam = self.mobility(mesh, e, f.axis);
                let c = if s_out > 0.0 {
                    velocity_mass_coeff(f, fi, Some(lam), None)?
                } else {
                    velocity_mass_coeff(f, fi, None, Some(lam))?
                };
                let pe = map.cell_dof(e, 0);
                sys.add_residual(row, c * u - s_out * x[pe] + s_out * g);
                sys.add(row, row, c);
                sys.add(row, pe, -s_out);
            } else {
                let (m, p) = (f.minus.unwrap(), f.plus.unwrap());
                let c = velocity_mass_coeff(
                    f,
                    fi,
                    Some(self.mobility(mesh, m, f.axis)),
                    Some(self.mobility(mesh, p, f.axis)),
                )?;
                let (dm, dp) = (map.cell_dof(m, 0), map.cell_dof(p, 0));
                sys.add_residual(row, c * u - (x[dm] - x[dp]));
                sys.add(row, row, c);
                sys.add(row, dm, -1.0);
                sys.add(row, dp, 1.0);
            }
        }
        for (ei, e) in mesh.elements.iter().enumerate() {
            let row = map.cell_dof(ei, 0);
            let cell = &mesh.cells[e.cell];
            let w = cell.porosity * accumulation_weight(e);
            let (p_prev, prev_dof) = ctx.previous(x, prev, ei, 0);
            let p = x[row];
            let mut r = w * (p - p_prev);
            sys.add(row, row, w);
            if let Some(d) = prev_dof {
                sys.add(row, d, -w);
            }
            for (face, sign) in flux_divergence_row(mesh, ei) {
                let d = map.flux_dof(face, 0);
                r += sign * x[d];
                sys.add(row, d, sign);
            }
            r -= source_row(e, self.forcing(cell.center, t0 + e.t_mid()));
            let (q, dq) = self.well_rate(e.cell, p);
            r -= q * e.dt();
            sys.add(row, row, -dq * e.dt());
            sys.add_residual(row, r);
        }
        check_finite(sys, ctx)
    }

    fn balance(&self, ctx: &SlabContext, x: &[f64], prev: &[f64]) -> Vec<ComponentBalance> {
        let mesh = ctx.mesh;
        let map = ctx.map;
        let t0 = ctx.t0();
        let mut b = ComponentBalance::new("volume");
        for (ci, c) in mesh.cells.iter().enumerate() {
            let last = map.cell_dof(mesh.final_element(ci), 0);
            b.storage_change += c.porosity * c.volume * (x[last] - prev[ci]);
        }
        for (ei, e) in mesh.elements.iter().enumerate() {
            let cell = &mesh.cells[e.cell];
            b.add_flow(source_row(e, self.forcing(cell.center, t0 + e.t_mid())));
            let (q, _) = self.well_rate(e.cell, x[map.cell_dof(ei, 0)]);
            b.add_flow(q * e.dt());
        }
        for (fi, f) in mesh.faces.iter().enumerate() {
            if let Some((_, s_out)) = f.interior_element() {
                b.add_flow(-s_out * x[map.flux_dof(fi, 0)]);
            }
        }
        vec![b]
    }
}
