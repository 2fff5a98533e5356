//! Text ingestion and CSV / legacy VTK / gnuplot writers.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use crate::error::{Error, Result};
use crate::models::ComponentBalance;
use crate::solver::NewtonReport;
use crate::stmesh::{FieldLayout, SpaceTimeMesh};

use super::convergence::ErrorReport;

/// Values of `field` sampled at `samples` evenly spaced points on the segment
/// `a -> b`, consecutive repeats of the same cell dropped. Returns
/// `(distance from a, cell, value)`.
pub fn line_profile(
    mesh: &SpaceTimeMesh,
    cells: &[f64],
    n_fields: usize,
    field: usize,
    a: [f64; 2],
    b: [f64; 2],
    samples: usize,
) -> Vec<(f64, usize, f64)> {
    let len = ((b[0] - a[0]).powi(2) + (b[1] - a[1]).powi(2)).sqrt();
    let mut out: Vec<(f64, usize, f64)> = Vec::new();
    for i in 0..samples.max(2) {
        let s = i as f64 / (samples.max(2) - 1) as f64;
        let x = [a[0] + s * (b[0] - a[0]), a[1] + s * (b[1] - a[1])];
        if let Some(c) = mesh.locate(x) {
            if out.last().map(|l| l.1) != Some(c) {
                out.push((s * len, c, cells[c * n_fields + field]));
            }
        }
    }
    out
}

/// Whitespace-separated values, one per cell in lexicographic order.
pub fn read_scalar_field(path: &Path, expected: usize) -> Result<Vec<f64>> {
    read_scalar_field_with(path, expected, false)
}

/// As [`read_scalar_field`]; with `log_scale` the file holds natural logarithms.
pub fn read_scalar_field_with(path: &Path, expected: usize, log_scale: bool) -> Result<Vec<f64>> {
    let text = fs::read_to_string(path).map_err(|e| Error::Ingestion {
        path: path.display().to_string(),
        line: 0,
        detail: e.to_string(),
    })?;
    parse_scalar_field(&text, &path.display().to_string(), expected, log_scale)
}

pub fn parse_scalar_field(text: &str, name: &str, expected: usize, log_scale: bool) -> Result<Vec<f64>> {
    let mut values = Vec::with_capacity(expected);
    for (ln, line) in text.lines().enumerate() {
        for tok in line.split_whitespace() {
            let v: f64 = tok.parse().map_err(|_| Error::Ingestion {
                path: name.to_string(),
                line: ln + 1,
                detail: format!("non-numeric token {tok:?}"),
            })?;
            values.push(if log_scale { v.exp() } else { v });
        }
    }
    if values.len() != expected {
        return Err(Error::Ingestion {
            path: name.to_string(),
            line: text.lines().count(),
            detail: format!("expected {expected}, found {}", values.len()),
        });
    }
    Ok(values)
}

/// One row per element of a slab: subdomain, cell indices, level, absolute
/// times, cell center and every field.
pub fn fields_csv(mesh: &SpaceTimeMesh, layout: &FieldLayout, slab: usize, cells: &[f64]) -> String {
    let nf = layout.n_fields();
    let mut s = String::from("slab,subdomain,i,j,level,t_lo,t_hi,x,y");
    for f in &layout.cell_fields {
        s.push(',');
        s.push_str(f);
    }
    s.push('\n');
    let t0 = mesh.slab_start(slab);
    for (ei, e) in mesh.elements.iter().enumerate() {
        let c = &mesh.cells[e.cell];
        let _ = write!(
            s,
            "{slab},{},{},{},{},{},{},{},{}",
            e.subdomain,
            c.index[0],
            c.index[1],
            e.level,
            t0 + e.t_lo,
            t0 + e.t_hi,
            c.center[0],
            c.center[1]
        );
        for k in 0..nf {
            let _ = write!(s, ",{}", cells[ei * nf + k]);
        }
        s.push('\n');
    }
    s
}

pub fn write_fields_csv(path: &Path, mesh: &SpaceTimeMesh, layout: &FieldLayout, slab: usize, cells: &[f64]) -> Result<()> {
    fs::write(path, fields_csv(mesh, layout, slab, cells))?;
    Ok(())
}

/// Field columns of a CSV written by [`write_fields_csv`], row-major.
pub fn read_fields_csv(path: &Path, n_fields: usize) -> Result<Vec<f64>> {
    let text = fs::read_to_string(path)?;
    let mut out = Vec::new();
    for (ln, line) in text.lines().enumerate().skip(1) {
        let cols: Vec<&str> = line.split(',').collect();
        if cols.len() < 9 + n_fields {
            return Err(Error::Ingestion { path: path.display().to_string(), line: ln + 1, detail: "short row".into() });
        }
        for tok in &cols[9..9 + n_fields] {
            out.push(tok.parse().map_err(|_| Error::Ingestion {
                path: path.display().to_string(),
                line: ln + 1,
                detail: format!("non-numeric token {tok:?}"),
            })?);
        }
    }
    Ok(out)
}

/// Legacy ASCII VTK rectilinear grid of one subdomain with cell data.
pub fn vtk_rectilinear(mesh: &SpaceTimeMesh, subdomain: usize, time: f64, fields: &[(&str, Vec<f64>)]) -> String {
    let s = &mesh.subdomains[subdomain];
    let mut out = String::new();
    let _ = writeln!(out, "# vtk DataFile Version 3.0");
    let _ = writeln!(out, "subdomain {subdomain} t={time}");
    let _ = writeln!(out, "ASCII");
    let _ = writeln!(out, "DATASET RECTILINEAR_GRID");
    let ny = if mesh.dim == 2 { s.cells[1] + 1 } else { 1 };
    let _ = writeln!(out, "DIMENSIONS {} {} 1", s.cells[0] + 1, ny);
    let coords = |axis: usize, n: usize| (0..n).map(|i| s.node(axis, i).to_string()).collect::<Vec<_>>().join(" ");
    let _ = writeln!(out, "X_COORDINATES {} double\n{}", s.cells[0] + 1, coords(0, s.cells[0] + 1));
    if mesh.dim == 2 {
        let _ = writeln!(out, "Y_COORDINATES {ny} double\n{}", coords(1, ny));
    } else {
        let _ = writeln!(out, "Y_COORDINATES 1 double\n0");
    }
    let _ = writeln!(out, "Z_COORDINATES 1 double\n0");
    let _ = writeln!(out, "CELL_DATA {}", s.num_cells());
    for (name, vals) in fields {
        let _ = writeln!(out, "SCALARS {name} double 1\nLOOKUP_TABLE default");
        for v in vals {
            let _ = writeln!(out, "{v}");
        }
    }
    out
}

/// Columns `x_lo x_hi y_lo y_hi x y value` per cell, blank line between rows.
pub fn gnuplot_heatmap(mesh: &SpaceTimeMesh, values: &[f64]) -> String {
    let mut out = String::from("# x_lo x_hi y_lo y_hi x y value\n");
    for (si, s) in mesh.subdomains.iter().enumerate() {
        let _ = writeln!(out, "# subdomain {si}");
        for j in 0..s.cells[1] {
            for i in 0..s.cells[0] {
                let ci = mesh.cell_id(si, [i, j]);
                let c = &mesh.cells[ci];
                let (y_lo, y_hi) = if mesh.dim == 2 { (s.node(1, j), s.node(1, j + 1)) } else { (0.0, 0.0) };
                let _ = writeln!(
                    out,
                    "{} {} {} {} {} {} {}",
                    s.node(0, i),
                    s.node(0, i + 1),
                    y_lo,
                    y_hi,
                    c.center[0],
                    c.center[1],
                    values[ci]
                );
            }
            out.push('\n');
        }
    }
    out
}

pub fn newton_csv(reports: &[NewtonReport]) -> String {
    let mut s = String::from("slab,iterations,converged,linear_solves,reduced_size,nnz,solve_seconds,final_residual\n");
    for r in reports {
        let _ = writeln!(
            s,
            "{},{},{},{},{},{},{},{:e}",
            r.slab,
            r.iterations,
            r.converged,
            r.linear_solves,
            r.reduced_size,
            r.nnz,
            r.solve_seconds,
            r.history.last().copied().unwrap_or(f64::NAN)
        );
    }
    s
}

/// Per-slab and cumulative balance rows.
pub fn balance_csv(per_slab: &[Vec<ComponentBalance>]) -> String {
    let mut s = String::from("slab,component,storage_change,inflow,outflow,error,cumulative_error,relative_cumulative_error\n");
    let mut cum: Vec<(f64, f64)> = Vec::new();
    for (k, b) in per_slab.iter().enumerate() {
        cum.resize(b.len(), (0.0, 0.0));
        for (c, comp) in b.iter().enumerate() {
            cum[c].0 += comp.error();
            cum[c].1 += comp.inflow;
            let rel = if cum[c].1 > 0.0 { cum[c].0.abs() / cum[c].1 } else { 0.0 };
            let _ = writeln!(
                s,
                "{k},{},{:e},{:e},{:e},{:e},{:e},{:e}",
                comp.name,
                comp.storage_change,
                comp.inflow,
                comp.outflow,
                comp.error(),
                cum[c].0,
                rel
            );
        }
    }
    s
}

pub fn error_report_csv(report: &ErrorReport) -> String {
    let mut s = String::from("h_c,h_f,err_coarse,err_fine,DOF,CPUTIM\n");
    for r in &report.rows {
        let _ = writeln!(s, "{},{},{:e},{:e},{},{:.3}", r.h_c, r.h_f, r.err_coarse, r.err_fine, r.dof, r.cputim);
    }
    s
}
