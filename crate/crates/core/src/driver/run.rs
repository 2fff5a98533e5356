//! Configured simulation runs with file output.

use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;

use super::config::{Format, RunConfig};
use super::convergence::{convergence_study, ErrorReport};
use super::io::{balance_csv, error_report_csv, gnuplot_heatmap, newton_csv, vtk_rectilinear, write_fields_csv};
use crate::error::{Error, Result};
use crate::models::ComponentBalance;
use crate::solver::{advance_with, NewtonReport, SimulationState, SlabRecord};
use crate::stmesh::{build_mesh, enumerate_dofs, DofCounts, SpaceTimeMesh};

#[derive(Debug, Clone, Serialize)]
pub struct RunSummary {
    pub model: String,
    pub n_slabs: usize,
    pub slab_length: f64,
    pub dofs_per_slab: DofCounts,
    pub dofs_total: DofCounts,
    pub max_newton_iterations: usize,
    pub total_newton_iterations: usize,
    pub balance: Vec<ComponentBalance>,
    pub output_dir: PathBuf,
}

/// Mesh and model checks without solving; returns per-slab and total counts.
pub fn validate(cfg: &RunConfig) -> Result<(SpaceTimeMesh, DofCounts, DofCounts)> {
    let mesh = build_mesh(&cfg.mesh_spec()?)?;
    mesh.validate_matching_times()?;
    let model = cfg.require_model()?.instantiate(&mesh)?;
    let map = enumerate_dofs(&mesh, model.layout());
    Ok((mesh, map.counts, map.total))
}

fn output_dir(cfg: &RunConfig, override_dir: Option<&Path>) -> PathBuf {
    match override_dir {
        Some(d) => d.to_path_buf(),
        None => cfg.resolve(&cfg.output.directory),
    }
}

fn write_snapshot(
    dir: &Path,
    cfg: &RunConfig,
    mesh: &SpaceTimeMesh,
    state_layout: &crate::stmesh::FieldLayout,
    rec: &SlabRecord,
) -> Result<()> {
    let nf = state_layout.n_fields();
    for fmt in &cfg.output.formats {
        match fmt {
            Format::Csv => {
                let d = dir.join("fields");
                fs::create_dir_all(&d)?;
                write_fields_csv(&d.join(format!("slab_{:04}.csv", rec.slab)), mesh, state_layout, rec.slab, &rec.cells)?;
            }
            Format::Vtk => {
                let d = dir.join("vtk");
                fs::create_dir_all(&d)?;
                for (si, s) in mesh.subdomains.iter().enumerate() {
                    for level in 0..mesh.levels[si] {
                        let first = mesh.element_id(si, level, [0, 0]);
                        let fields: Vec<(&str, Vec<f64>)> = state_layout
                            .cell_fields
                            .iter()
                            .enumerate()
                            .map(|(k, name)| {
                                (*name, (0..s.num_cells()).map(|c| rec.cells[(first + c) * nf + k]).collect())
                            })
                            .collect();
                        let t = mesh.slab_start(rec.slab) + mesh.elements[first].t_hi;
                        let text = vtk_rectilinear(mesh, si, t, &fields);
                        fs::write(d.join(format!("sub{si}_slab{:04}_level{level}.vtk", rec.slab)), text)?;
                    }
                }
            }
            Format::Gnuplot => {
                let d = dir.join("gnuplot");
                fs::create_dir_all(&d)?;
                for (k, name) in state_layout.cell_fields.iter().enumerate() {
                    let vals: Vec<f64> =
                        (0..mesh.cells.len()).map(|ci| rec.cells[mesh.final_element(ci) * nf + k]).collect();
                    fs::write(d.join(format!("{name}_slab{:04}.dat", rec.slab)), gnuplot_heatmap(mesh, &vals))?;
                }
            }
        }
    }
    Ok(())
}

/// Run a configured simulation and write its outputs. Returns the state and
/// a summary; on non-convergence the Newton log of the completed slabs and of
/// the failing slab is still written.
pub fn run(cfg: &RunConfig, override_dir: Option<&Path>) -> Result<(SimulationState, RunSummary)> {
    let mesh = build_mesh(&cfg.mesh_spec()?)?;
    mesh.validate_matching_times()?;
    let model_cfg = cfg.require_model()?;
    let model = model_cfg.instantiate(&mesh)?;
    let dir = output_dir(cfg, override_dir);
    fs::create_dir_all(&dir)?;
    let layout = model.layout();
    let every = cfg.output.snapshot_every;
    let mut reports: Vec<NewtonReport> = Vec::new();
    let mut balances: Vec<Vec<ComponentBalance>> = Vec::new();
    let mut io_error: Option<Error> = None;
    let result = advance_with(model.as_ref(), &mesh, &cfg.solver, |rec, _| {
        reports.push(rec.report.clone());
        balances.push(rec.balance.clone());
        if (rec.slab % every == 0 || rec.slab + 1 == mesh.n_slabs) && io_error.is_none() {
            if let Err(e) = write_snapshot(&dir, cfg, &mesh, &layout, rec) {
                io_error = Some(e);
            }
        }
    });
    if let Err(Error::NonConvergence { report, .. }) = &result {
        reports.push(report.clone());
    }
    fs::write(dir.join("newton.csv"), newton_csv(&reports))?;
    fs::write(dir.join("mass_balance.csv"), balance_csv(&balances))?;
    let state = result?;
    if let Some(e) = io_error {
        return Err(e);
    }
    let summary = RunSummary {
        model: model_cfg.kind().to_string(),
        n_slabs: mesh.n_slabs,
        slab_length: mesh.slab_length,
        dofs_per_slab: state.map.counts,
        dofs_total: state.map.total,
        max_newton_iterations: state.reports().map(|r| r.iterations).max().unwrap_or(0),
        total_newton_iterations: state.reports().map(|r| r.iterations).sum(),
        balance: state.cumulative_balance(),
        output_dir: dir.clone(),
    };
    fs::write(dir.join("summary.json"), serde_json::to_string_pretty(&summary)?)?;
    Ok((state, summary))
}

/// Run the configured convergence study and write `error_report.csv`.
pub fn converge(cfg: &RunConfig, override_dir: Option<&Path>) -> Result<ErrorReport> {
    let study = cfg
        .convergence
        .as_ref()
        .ok_or_else(|| Error::config("missing convergence section"))?;
    let report = convergence_study(study, &cfg.solver)?;
    let dir = output_dir(cfg, override_dir);
    fs::create_dir_all(&dir)?;
    fs::write(dir.join("error_report.csv"), error_report_csv(&report))?;
    Ok(report)
}
