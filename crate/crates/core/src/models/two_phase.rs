//! Slightly compressible oil-water flow in expanded mixed form.
//!
//! Unknowns per element are oil pressure and water saturation. Each face has
//! phase mass fluxes `U_w`, `U_o` and auxiliary fluxes `Ũ_w`, `Ũ_o` that carry
//! the pressure gradients; expansion rows tie them together through the upwind
//! mobility, so zero relative permeability never has to be inverted. Water
//! pressure is `p_o - p_c`. All outer boundaries are closed.

use super::props::upwind_is_minus;
use super::wells::{resolve_wells, wells_by_cell, Well};
use super::{
    check_finite, BrooksCorey, ComponentBalance, FluidProps, Model, SlabContext, TwoPhaseParams, UnitSystem,
    VanGenuchten,
};
use crate::error::Result;
use crate::solver::SlabSystem;
use crate::stdisc::{accumulation_weight, flux_divergence_row, velocity_mass_coeff};
use crate::stmesh::{FieldLayout, SpaceTimeMesh};

const P: usize = 0;
const S: usize = 1;
const UW: usize = 0;
const UO: usize = 1;
const AW: usize = 2;
const AO: usize = 3;

#[derive(Debug, Clone)]
pub struct TwoPhase {
    pub water: FluidProps,
    pub oil: FluidProps,
    pub rel_perm: BrooksCorey,
    pub capillary: VanGenuchten,
    pub units: UnitSystem,
    pub initial_pressure: f64,
    pub initial_saturation: f64,
    wells: Vec<Vec<Well>>,
}

/// Cell quantities of one phase: density, mobility-free rel perm and their derivatives.
#[derive(Debug, Clone, Copy)]
struct PhaseCell {
    rho: f64,
    drho: f64,
    kr: f64,
    dkr: f64,
}

impl TwoPhase {
    pub fn new(params: &TwoPhaseParams, mesh: &SpaceTimeMesh) -> Result<Self> {
        let units = params.units.system();
        let wells = resolve_wells(&params.wells, mesh, &units)?;
        Ok(TwoPhase {
            water: params.water,
            oil: params.oil,
            rel_perm: params.rel_perm,
            capillary: params.capillary,
            units,
            initial_pressure: params.initial_pressure,
            initial_saturation: params.initial_saturation,
            wells: wells_by_cell(&wells, mesh.cells.len()),
        })
    }

    fn phases(&self, p: f64, s: f64) -> [PhaseCell; 2] {
        let kr = self.rel_perm.eval(s);
        let (rw, drw) = self.water.density(p);
        let (ro, dro) = self.oil.density(p);
        [
            PhaseCell { rho: rw, drho: drw, kr: kr.krw, dkr: kr.dkrw },
            PhaseCell { rho: ro, drho: dro, kr: kr.kro, dkr: kr.dkro },
        ]
    }

    /// Phase mass rates `[q_w, q_o]` of one well with derivatives in `p` and `s`.
    fn well_rate(&self, w: &Well, p: f64, s: f64) -> [[f64; 3]; 2] {
        match *w {
            Well::Injector { volume_rate, .. } => [[volume_rate * self.water.rho_ref, 0.0, 0.0], [0.0; 3]],
            Well::Producer { bhp, well_index, .. } => {
                let ph = self.phases(p, s);
                let mut out = [[0.0; 3]; 2];
                for (a, fluid) in [self.water, self.oil].iter().enumerate() {
                    let c = well_index / fluid.viscosity;
                    let PhaseCell { rho, drho, kr, dkr } = ph[a];
                    let dp = p - bhp;
                    out[a] = [-c * rho * kr * dp, -c * kr * (drho * dp + rho), -c * rho * dkr * dp];
                }
                out
            }
        }
    }
}

impl Model for TwoPhase {
    fn name(&self) -> &'static str {
        "two_phase"
    }

    fn layout(&self) -> FieldLayout {
        FieldLayout::two_phase()
    }

    fn initial_cells(&self, mesh: &SpaceTimeMesh) -> Vec<f64> {
        mesh.cells
            .iter()
            .flat_map(|_| [self.initial_pressure, self.initial_saturation])
            .collect()
    }

    fn saturation_field(&self) -> Option<usize> {
        Some(S)
    }

    fn assemble(&self, ctx: &SlabContext, x: &[f64], prev: &[f64], sys: &mut SlabSystem) -> Result<()> {
        let mesh = ctx.mesh;
        let map = ctx.map;
        let fluids = [self.water, self.oil];
        sys.clear();
        for (fi, f) in mesh.faces.iter().enumerate() {
            let rows = [UW, UO, AW, AO].map(|k| map.flux_dof(fi, k));
            let (Some(m), Some(p)) = (f.minus, f.plus) else {
                for r in rows {
                    sys.add(r, r, 1.0);
                    sys.add_residual(r, x[r]);
                }
                continue;
            };
            let cm = &mesh.cells[mesh.elements[m].cell];
            let cp = &mesh.cells[mesh.elements[p].cell];
            let (pm, pp) = (map.cell_dof(m, P), map.cell_dof(p, P));
            let (sm, sp) = (map.cell_dof(m, S), map.cell_dof(p, S));
            let phm = self.phases(x[pm], x[sm]);
            let php = self.phases(x[pp], x[sp]);
            let ck = velocity_mass_coeff(
                f,
                fi,
                Some(cm.permeability[f.axis] * self.units.darcy),
                Some(cp.permeability[f.axis] * self.units.darcy),
            )?;
            let ae = (f.h_minus.unwrap() + f.h_plus.unwrap()) / (2.0 * f.measure());

            // auxiliary rows: c_K Ũ_o - (P_m - P_p),  c_K Ũ_w - (P_m - P_p) + (pc_m - pc_p)
            let (pcm, dpcm) = self.capillary.eval(x[sm]);
            let (pcp, dpcp) = self.capillary.eval(x[sp]);
            for (row, cap) in [(rows[AO], false), (rows[AW], true)] {
                let mut r = ck * x[row] - (x[pm] - x[pp]);
                sys.add(row, row, ck);
                sys.add(row, pm, -1.0);
                sys.add(row, pp, 1.0);
                if cap {
                    r += pcm - pcp;
                    sys.add(row, sm, dpcm);
                    sys.add(row, sp, -dpcp);
                }
                sys.add_residual(row, r);
            }

            // expansion rows: a_e (U_a - lambda*_a Ũ_a)
            for (a, (ru, ra)) in [(rows[UW], rows[AW]), (rows[UO], rows[AO])].into_iter().enumerate() {
                let mu = fluids[a].viscosity;
                let aux = x[ra];
                let (kr, dkr, sup) = if upwind_is_minus(aux) {
                    (phm[a].kr, phm[a].dkr, sm)
                } else {
                    (php[a].kr, php[a].dkr, sp)
                };
                let rho_sum = phm[a].rho + php[a].rho;
                let lam = rho_sum / (2.0 * mu) * kr;
                sys.add_residual(ru, ae * (x[ru] - lam * aux));
                sys.add(ru, ru, ae);
                sys.add(ru, ra, -ae * lam);
                sys.add(ru, pm, -ae * aux * phm[a].drho / (2.0 * mu) * kr);
                sys.add(ru, pp, -ae * aux * php[a].drho / (2.0 * mu) * kr);
                sys.add(ru, sup, -ae * aux * rho_sum / (2.0 * mu) * dkr);
            }
        }

        for (ei, e) in mesh.elements.iter().enumerate() {
            let cell = &mesh.cells[e.cell];
            let w = cell.porosity * accumulation_weight(e);
            let (rt, rw) = (map.cell_dof(ei, P), map.cell_dof(ei, S));
            let (p, s) = (x[rt], x[rw]);
            let (p_prev, dp_prev) = ctx.previous(x, prev, ei, P);
            let (s_prev, ds_prev) = ctx.previous(x, prev, ei, S);
            let ph = self.phases(p, s);
            let php = self.phases(p_prev, s_prev);

            // water: phi V (rho_w s - rho_w' s'), total adds phi V (rho_o (1-s) - rho_o' (1-s'))
            let mw = ph[0].rho * s;
            let mo = ph[1].rho * (1.0 - s);
            let mw_prev = php[0].rho * s_prev;
            let mo_prev = php[1].rho * (1.0 - s_prev);
            let mut r_w = w * (mw - mw_prev);
            let mut r_t = w * (mw + mo - mw_prev - mo_prev);
            sys.add(rw, rt, w * ph[0].drho * s);
            sys.add(rw, rw, w * ph[0].rho);
            sys.add(rt, rt, w * (ph[0].drho * s + ph[1].drho * (1.0 - s)));
            sys.add(rt, rw, w * (ph[0].rho - ph[1].rho));
            if let Some(d) = dp_prev {
                sys.add(rw, d, -w * php[0].drho * s_prev);
                sys.add(rt, d, -w * (php[0].drho * s_prev + php[1].drho * (1.0 - s_prev)));
            }
            if let Some(d) = ds_prev {
                sys.add(rw, d, -w * php[0].rho);
                sys.add(rt, d, -w * (php[0].rho - php[1].rho));
            }

            for (face, sign) in flux_divergence_row(mesh, ei) {
                let dw = map.flux_dof(face, UW);
                let dn = map.flux_dof(face, UO);
                r_w += sign * x[dw];
                r_t += sign * (x[dw] + x[dn]);
                sys.add(rw, dw, sign);
                sys.add(rt, dw, sign);
                sys.add(rt, dn, sign);
            }

            let dt = e.dt();
            for well in &self.wells[e.cell] {
                let [qw, qo] = self.well_rate(well, p, s);
                r_w -= qw[0] * dt;
                r_t -= (qw[0] + qo[0]) * dt;
                sys.add(rw, rt, -qw[1] * dt);
                sys.add(rw, rw, -qw[2] * dt);
                sys.add(rt, rt, -(qw[1] + qo[1]) * dt);
                sys.add(rt, rw, -(qw[2] + qo[2]) * dt);
            }
            sys.add_residual(rw, r_w);
            sys.add_residual(rt, r_t);
        }
        check_finite(sys, ctx)
    }

    fn balance(&self, ctx: &SlabContext, x: &[f64], prev: &[f64]) -> Vec<ComponentBalance> {
        let mesh = ctx.mesh;
        let map = ctx.map;
        let mut water = ComponentBalance::new("water_mass");
        let mut oil = ComponentBalance::new("oil_mass");
        for (ci, cell) in mesh.cells.iter().enumerate() {
            let e = mesh.final_element(ci);
            let (p, s) = (x[map.cell_dof(e, P)], x[map.cell_dof(e, S)]);
            let (p0, s0) = (prev[2 * ci], prev[2 * ci + 1]);
            let w = cell.porosity * cell.volume;
            let (a, b) = (self.phases(p, s), self.phases(p0, s0));
            water.storage_change += w * (a[0].rho * s - b[0].rho * s0);
            oil.storage_change += w * (a[1].rho * (1.0 - s) - b[1].rho * (1.0 - s0));
        }
        for (ei, e) in mesh.elements.iter().enumerate() {
            for well in &self.wells[e.cell] {
                let [qw, qo] = self.well_rate(well, x[map.cell_dof(ei, P)], x[map.cell_dof(ei, S)]);
                water.add_flow(qw[0] * e.dt());
                oil.add_flow(qo[0] * e.dt());
            }
        }
        vec![water, oil]
    }
}
