//! Trace intersection between two neighboring subdomains.
//!
//! The common interface is subdivided by the union of both trace grids in the
//! tangential direction and in time. Each resulting sub-face is contained in a
//! face of each side, and all of it is later served by one flux unknown. The
//! union grid is only accepted when one side's nodes contain the other's.

use super::{Subdomain, GEOM_TOL};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct SubFace {
    /// Index into the mesh face list, set when the mesh is assembled.
    pub face: usize,
    pub minus_cell: [usize; 2],
    pub minus_level: usize,
    pub plus_cell: [usize; 2],
    pub plus_level: usize,
    /// Tangential interval; `(0, 1)` in one dimension.
    pub tangential: (f64, f64),
    /// Time interval relative to the slab start.
    pub time: (f64, f64),
    pub area: f64,
    pub measure: f64,
}

/// Contact between two subdomains inside one slab.
#[derive(Debug, Clone, PartialEq)]
pub struct InterfacePatch {
    /// Subdomain on the low side of the interface normal.
    pub minus: usize,
    pub plus: usize,
    pub axis: usize,
    pub position: f64,
    /// Tangential overlap interval (unused in 1D).
    pub overlap: (f64, f64),
    /// Ratio of the coarser to the finer time step.
    pub time_ratio: usize,
    /// Ratio of the coarser to the finer tangential cell size.
    pub space_ratio: usize,
    /// Space-time measure of the common trace within a slab.
    pub measure: f64,
    pub subfaces: Vec<SubFace>,
}

impl InterfacePatch {
    pub fn tangential_length(&self) -> f64 {
        self.overlap.1 - self.overlap.0
    }

    /// Subdomain with the finer time step, minus side on ties.
    pub fn fine_in_time(&self, dt_minus: f64, dt_plus: f64) -> usize {
        if dt_plus < dt_minus {
            self.plus
        } else {
            self.minus
        }
    }
}

fn grid_nodes(origin: f64, h: f64, lo: f64, hi: f64) -> Vec<f64> {
    let tol = GEOM_TOL * (hi - lo).abs().max(h);
    let first = ((lo - origin) / h - 1e-9).ceil() as i64;
    let mut nodes = vec![lo];
    let mut k = first;
    loop {
        let x = origin + k as f64 * h;
        if x > hi - tol {
            break;
        }
        if x > lo + tol {
            nodes.push(x);
        }
        k += 1;
    }
    nodes.push(hi);
    nodes
}

fn contains_all(big: &[f64], small: &[f64], tol: f64) -> bool {
    small.iter().all(|x| big.iter().any(|y| (x - y).abs() <= tol))
}

/// Union of two node sets, accepted only when one is contained in the other.
fn nested_union(a: &[f64], b: &[f64], what: &str, ids: (usize, usize)) -> Result<Vec<f64>> {
    let span = (a[a.len() - 1] - a[0]).abs().max(1.0);
    let tol = 1e-9 * span;
    if contains_all(a, b, tol) {
        Ok(a.to_vec())
    } else if contains_all(b, a, tol) {
        Ok(b.to_vec())
    } else {
        Err(Error::UnsupportedMesh(format!(
            "{what} grids of subdomains {} and {} are not nested on their common interface",
            ids.0, ids.1
        )))
    }
}

/// Intersect the traces of two subdomains.
///
/// Returns a patch with no sub-faces when the boxes only touch at a point or do
/// not touch at all.
pub fn intersect_traces(
    a: &Subdomain,
    b: &Subdomain,
    dim: usize,
    thickness: f64,
    slab_length: f64,
) -> Result<InterfacePatch> {
    let scale = (0..dim)
        .map(|ax| a.extent[ax].max(b.extent[ax]))
        .fold(1.0, f64::max);
    let tol = GEOM_TOL * scale;
    let empty = |minus: usize, plus: usize, axis: usize, position: f64| InterfacePatch {
        minus,
        plus,
        axis,
        position,
        overlap: (0.0, 0.0),
        time_ratio: 1,
        space_ratio: 1,
        measure: 0.0,
        subfaces: Vec::new(),
    };

    for axis in 0..dim {
        let (m, p) = if (a.upper(axis) - b.origin[axis]).abs() <= tol {
            (a, b)
        } else if (b.upper(axis) - a.origin[axis]).abs() <= tol {
            (b, a)
        } else {
            continue;
        };
        let position = p.origin[axis];
        let (lo, hi) = if dim == 2 {
            let ta = 1 - axis;
            (m.origin[ta].max(p.origin[ta]), m.upper(ta).min(p.upper(ta)))
        } else {
            (0.0, 1.0)
        };
        if hi - lo <= tol {
            continue;
        }

        let ids = (m.id, p.id);
        let (tangential, space_ratio) = if dim == 2 {
            let ta = 1 - axis;
            let nm = grid_nodes(m.origin[ta], m.cell_size(ta), lo, hi);
            let np = grid_nodes(p.origin[ta], p.cell_size(ta), lo, hi);
            let nodes = nested_union(&nm, &np, "spatial", ids)?;
            let (hm, hp) = (m.cell_size(ta), p.cell_size(ta));
            let ratio = (hm.max(hp) / hm.min(hp)).round() as usize;
            (nodes, ratio.max(1))
        } else {
            (vec![0.0, 1.0], 1)
        };
        let tm = grid_nodes(0.0, m.dt, 0.0, slab_length);
        let tp = grid_nodes(0.0, p.dt, 0.0, slab_length);
        let times = nested_union(&tm, &tp, "time", ids)?;
        let time_ratio = ((m.dt.max(p.dt) / m.dt.min(p.dt)).round() as usize).max(1);

        let mut subfaces = Vec::new();
        let width = |t0: f64, t1: f64| if dim == 2 { (t1 - t0) * thickness } else { thickness };
        for tw in times.windows(2) {
            let (s0, s1) = (tw[0], tw[1]);
            let smid = 0.5 * (s0 + s1);
            let lm = ((smid / m.dt).floor() as usize).min(m.levels_per(slab_length) - 1);
            let lp = ((smid / p.dt).floor() as usize).min(p.levels_per(slab_length) - 1);
            for xw in tangential.windows(2) {
                let (x0, x1) = (xw[0], xw[1]);
                let xmid = 0.5 * (x0 + x1);
                let mut mc = [0usize; 2];
                let mut pc = [0usize; 2];
                mc[axis] = m.cells[axis] - 1;
                pc[axis] = 0;
                if dim == 2 {
                    let ta = 1 - axis;
                    mc[ta] = m.cell_containing(ta, xmid);
                    pc[ta] = p.cell_containing(ta, xmid);
                }
                let area = width(x0, x1);
                subfaces.push(SubFace {
                    face: usize::MAX,
                    minus_cell: mc,
                    minus_level: lm,
                    plus_cell: pc,
                    plus_level: lp,
                    tangential: (x0, x1),
                    time: (s0, s1),
                    area,
                    measure: area * (s1 - s0),
                });
            }
        }
        return Ok(InterfacePatch {
            minus: m.id,
            plus: p.id,
            axis,
            position,
            overlap: (lo, hi),
            time_ratio,
            space_ratio,
            measure: width(lo, hi) * slab_length,
            subfaces,
        });
    }
    Ok(empty(a.id, b.id, 0, f64::NAN))
}
