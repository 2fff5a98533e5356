//! Manufactured-solution convergence study on the unit square with one
//! refined box.

use std::time::Instant;

use serde::{Deserialize, Serialize};

use super::norms::l2_spacetime_error;
use crate::error::{Error, Result};
use crate::models::{manufactured_solution, LinearParabolic};
use crate::solver::{advance, NewtonOptions};
use crate::stmesh::{build_mesh, MeshSpec, SpaceTimeMesh, Subdomain};

fn default_levels() -> Vec<usize> {
    vec![10, 20, 40]
}

fn default_factor() -> usize {
    4
}

fn default_region() -> [[f64; 2]; 2] {
    [[0.1, 0.1], [0.4, 0.4]]
}

fn default_c1() -> f64 {
    1.0
}

fn default_t_end() -> f64 {
    1.0
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConvergenceConfig {
    /// Coarse cells per unit length at each level; the coarse step is `1/n`.
    #[serde(default = "default_levels")]
    pub levels: Vec<usize>,
    /// Space and time refinement of the fine box.
    #[serde(default = "default_factor")]
    pub fine_factor: usize,
    /// `[origin, extent]` of the refined box.
    #[serde(default = "default_region")]
    pub fine_region: [[f64; 2]; 2],
    #[serde(default = "default_c1")]
    pub c1: f64,
    #[serde(default = "default_t_end")]
    pub t_end: f64,
}

impl Default for ConvergenceConfig {
    fn default() -> Self {
        ConvergenceConfig {
            levels: default_levels(),
            fine_factor: default_factor(),
            fine_region: default_region(),
            c1: default_c1(),
            t_end: default_t_end(),
        }
    }
}

impl ConvergenceConfig {
    pub fn validate(&self) -> Result<()> {
        if self.levels.is_empty() || self.levels.contains(&0) {
            return Err(Error::config("convergence.levels must be non-empty positive cell counts"));
        }
        if self.fine_factor == 0 {
            return Err(Error::config("convergence.fine_factor must be positive"));
        }
        let [o, e] = self.fine_region;
        for a in 0..2 {
            if !(e[a] > 0.0 && o[a] >= 0.0 && o[a] + e[a] <= 1.0 + 1e-12) {
                return Err(Error::config("convergence.fine_region must lie inside the unit square"));
            }
        }
        if !self.c1.is_finite() || !(self.t_end > 0.0) {
            return Err(Error::config("convergence.c1 must be finite and convergence.t_end positive"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ErrorRow {
    pub h_c: f64,
    pub h_f: f64,
    pub err_coarse: f64,
    pub err_fine: f64,
    /// Cell unknowns over the whole space-time mesh.
    pub dof: usize,
    pub cputim: f64,
    pub max_newton_iterations: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Default)]
pub struct ErrorReport {
    pub rows: Vec<ErrorRow>,
}

impl ErrorReport {
    /// Observed rates `log2(e_k / e_{k+1}) / log2(h_k / h_{k+1})` for both columns.
    pub fn rates(&self) -> Vec<(f64, f64)> {
        self.rows
            .windows(2)
            .map(|w| {
                let r = (w[0].h_c / w[1].h_c).ln();
                ((w[0].err_coarse / w[1].err_coarse).ln() / r, (w[0].err_fine / w[1].err_fine).ln() / r)
            })
            .collect()
    }
}

fn cells_along(len: f64, n: usize, what: &str) -> Result<usize> {
    let c = len * n as f64;
    let k = c.round();
    if (c - k).abs() > 1e-9 || k < 0.0 {
        return Err(Error::config(format!(
            "convergence: {what} of length {len} is not a multiple of 1/{n}"
        )));
    }
    Ok(k as usize)
}

/// Unit square split into a refined box and up to four coarse strips
/// (bottom, top, left, right).
pub fn study_mesh(cfg: &ConvergenceConfig, n: usize) -> Result<MeshSpec> {
    let [o, e] = cfg.fine_region;
    let (x0, x1, y0, y1) = (o[0], o[0] + e[0], o[1], o[1] + e[1]);
    let h = 1.0 / n as f64;
    let dt = h;
    let r = cfg.fine_factor;
    let mut subs = Vec::new();
    let mut push = |origin: [f64; 2], extent: [f64; 2], cells: [usize; 2], dt: f64| {
        if cells[0] > 0 && cells[1] > 0 {
            let id = subs.len();
            subs.push(Subdomain::uniform(id, origin, extent, cells, dt, [1.0; 2], 1.0));
        }
    };
    let fx = cells_along(x1 - x0, n, "fine region width")?;
    let fy = cells_along(y1 - y0, n, "fine region height")?;
    push([x0, y0], [x1 - x0, y1 - y0], [fx * r, fy * r], dt / r as f64);
    push([0.0, 0.0], [1.0, y0], [n, cells_along(y0, n, "bottom strip")?], dt);
    push([0.0, y1], [1.0, 1.0 - y1], [n, cells_along(1.0 - y1, n, "top strip")?], dt);
    push([0.0, y0], [x0, y1 - y0], [cells_along(x0, n, "left strip")?, fy], dt);
    push([x1, y0], [1.0 - x1, y1 - y0], [cells_along(1.0 - x1, n, "right strip")?, fy], dt);
    Ok(MeshSpec { dim: 2, origin: [0.0; 2], extent: [1.0; 2], thickness: 1.0, t_end: cfg.t_end, subdomains: subs })
}

/// Run one level and return its row plus the mesh for inspection.
pub fn run_level(cfg: &ConvergenceConfig, n: usize, opts: &NewtonOptions) -> Result<(ErrorRow, SpaceTimeMesh)> {
    let start = Instant::now();
    let mesh = build_mesh(&study_mesh(cfg, n)?)?;
    let model = LinearParabolic::manufactured(&mesh, cfg.c1);
    let state = advance(&model, &mesh, opts)?;
    let c1 = cfg.c1;
    let (err_coarse, err_fine) = l2_spacetime_error(&mesh, &state, |x, y, t| manufactured_solution(x, y, t, c1).0);
    let h_c = 1.0 / n as f64;
    let row = ErrorRow {
        h_c,
        h_f: h_c / cfg.fine_factor as f64,
        err_coarse,
        err_fine,
        dof: state.map.total.cell_unknowns,
        cputim: start.elapsed().as_secs_f64(),
        max_newton_iterations: state.reports().map(|r| r.iterations).max().unwrap_or(0),
    };
    Ok((row, mesh))
}

pub fn convergence_study(cfg: &ConvergenceConfig, opts: &NewtonOptions) -> Result<ErrorReport> {
    cfg.validate()?;
    let mut report = ErrorReport::default();
    for &n in &cfg.levels {
        report.rows.push(run_level(cfg, n, opts)?.0);
    }
    Ok(report)
}
