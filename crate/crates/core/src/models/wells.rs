//! Rate-specified injectors and pressure-specified producers.

use serde::{Deserialize, Serialize};

use super::props::UnitSystem;
use crate::error::{Error, Result};
use crate::stmesh::SpaceTimeMesh;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WellSpec {
    pub subdomain: usize,
    pub cell: [usize; 2],
    #[serde(flatten)]
    pub kind: WellKind,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum WellKind {
    /// Surface-volume rate of the injected fluid (water for two-phase runs).
    Injector {
        rate: f64,
        #[serde(default = "one")]
        concentration: f64,
    },
    Producer {
        bhp: f64,
        #[serde(default)]
        well_index: Option<f64>,
        #[serde(default)]
        well_radius: Option<f64>,
    },
}

fn one() -> f64 {
    1.0
}

pub const DEFAULT_WELL_RADIUS: f64 = 0.05;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Well {
    /// `volume_rate` is in flux volume per time.
    Injector { cell: usize, volume_rate: f64, concentration: f64 },
    Producer { cell: usize, bhp: f64, well_index: f64 },
}

impl Well {
    pub fn cell(&self) -> usize {
        match *self {
            Well::Injector { cell, .. } | Well::Producer { cell, .. } => cell,
        }
    }
}

/// Peaceman-type index `2 pi k h / ln(r_e / r_w)` with `r_e = 0.2 sqrt(dx dy)`.
pub fn peaceman_index(permeability: [f64; 2], size: [f64; 2], thickness: f64, r_w: f64, units: &UnitSystem) -> Result<f64> {
    let k = (permeability[0] * permeability[1]).sqrt();
    let r_e = 0.2 * (size[0] * size[1]).sqrt();
    if r_e <= r_w {
        return Err(Error::config(format!(
            "well radius {r_w} is not smaller than the equivalent radius {r_e}"
        )));
    }
    Ok(2.0 * std::f64::consts::PI * k * units.darcy * thickness / (r_e / r_w).ln())
}

/// Producer rate `WI * lambda * (p - p_bh)` and its pressure derivative at fixed mobility.
pub fn producer_rate(well_index: f64, mobility: f64, p: f64, bhp: f64) -> (f64, f64) {
    (well_index * mobility * (p - bhp), well_index * mobility)
}

/// Validate well specifications against the mesh and convert them to cell wells.
pub fn resolve_wells(specs: &[WellSpec], mesh: &SpaceTimeMesh, units: &UnitSystem) -> Result<Vec<Well>> {
    let mut out = Vec::with_capacity(specs.len());
    for (i, w) in specs.iter().enumerate() {
        let sub = mesh
            .subdomains
            .get(w.subdomain)
            .ok_or_else(|| Error::config(format!("well {i}: unknown subdomain {}", w.subdomain)))?;
        if w.cell[0] >= sub.cells[0] || w.cell[1] >= sub.cells[1] {
            return Err(Error::config(format!(
                "well {i}: cell {:?} outside subdomain {} ({:?} cells)",
                w.cell, w.subdomain, sub.cells
            )));
        }
        let cell = mesh.cell_id(w.subdomain, w.cell);
        let c = &mesh.cells[cell];
        let well = match w.kind {
            WellKind::Injector { rate, concentration } => {
                if !(rate >= 0.0) {
                    return Err(Error::config(format!("well {i}: injection rate must be non-negative")));
                }
                if !(0.0..=1.0).contains(&concentration) {
                    return Err(Error::config(format!("well {i}: injected concentration must lie in [0, 1]")));
                }
                Well::Injector { cell, volume_rate: rate * units.rate_to_volume, concentration }
            }
            WellKind::Producer { bhp, well_index, well_radius } => {
                let wi = match well_index {
                    Some(wi) => wi,
                    None if mesh.dim == 2 => peaceman_index(
                        c.permeability,
                        c.size,
                        mesh.thickness,
                        well_radius.unwrap_or(DEFAULT_WELL_RADIUS),
                        units,
                    )
                    .map_err(|e| Error::config(format!("well {i}: {e}")))?,
                    None => return Err(Error::config(format!("well {i}: 1D producers need an explicit well_index"))),
                };
                if !(wi >= 0.0) || !bhp.is_finite() {
                    return Err(Error::config(format!("well {i}: well index must be non-negative")));
                }
                Well::Producer { cell, bhp, well_index: wi }
            }
        };
        out.push(well);
    }
    for a in &out {
        if let Well::Producer { cell, .. } = a {
            if out.iter().any(|b| matches!(b, Well::Injector { cell: c, .. } if c == cell)) {
                return Err(Error::config("a producer shares its cell with an injector"));
            }
        }
    }
    Ok(out)
}

/// Well terms of every cell, indexed by cell id.
pub fn wells_by_cell(wells: &[Well], n_cells: usize) -> Vec<Vec<Well>> {
    let mut by = vec![Vec::new(); n_cells];
    for w in wells {
        by[w.cell()].push(*w);
    }
    by
}
