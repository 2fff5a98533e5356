//! JSON run configuration.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::convergence::ConvergenceConfig;
use super::io::read_scalar_field_with;
use crate::error::{Error, Result};
use crate::models::ModelProblem;
use crate::solver::NewtonOptions;
use crate::stmesh::{MeshSpec, Subdomain};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(default)]
    pub mesh: Option<MeshConfig>,
    #[serde(default)]
    pub model: Option<ModelProblem>,
    #[serde(default)]
    pub solver: NewtonOptions,
    #[serde(default)]
    pub output: OutputConfig,
    #[serde(default)]
    pub convergence: Option<ConvergenceConfig>,
    /// Directory that relative file paths are resolved against.
    #[serde(skip)]
    pub base_dir: PathBuf,
}

fn default_dim() -> usize {
    2
}

fn unit() -> f64 {
    1.0
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MeshConfig {
    #[serde(default = "default_dim")]
    pub dim: usize,
    #[serde(default)]
    pub origin: Vec<f64>,
    pub extent: Vec<f64>,
    #[serde(default = "unit")]
    pub thickness: f64,
    pub t_end: f64,
    pub subdomains: Vec<SubdomainConfig>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SubdomainConfig {
    pub origin: Vec<f64>,
    pub extent: Vec<f64>,
    pub cells: Vec<usize>,
    pub dt: f64,
    pub permeability: ScalarInput,
    #[serde(default = "unit_porosity")]
    pub porosity: ScalarInput,
}

fn unit_porosity() -> ScalarInput {
    ScalarInput::Uniform(1.0)
}

/// A per-cell scalar: one value, one value per axis, or a text file with one
/// value per cell in lexicographic order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ScalarInput {
    Uniform(f64),
    PerAxis([f64; 2]),
    File {
        file: String,
        #[serde(default)]
        log_scale: bool,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Format {
    Csv,
    Vtk,
    Gnuplot,
}

fn default_formats() -> Vec<Format> {
    vec![Format::Csv]
}

fn default_every() -> usize {
    1
}

fn default_directory() -> String {
    "output".into()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputConfig {
    #[serde(default = "default_directory")]
    pub directory: String,
    #[serde(default = "default_formats")]
    pub formats: Vec<Format>,
    /// Write field snapshots every this many slabs (the last slab is always written).
    #[serde(default = "default_every")]
    pub snapshot_every: usize,
}

impl Default for OutputConfig {
    fn default() -> Self {
        OutputConfig { directory: default_directory(), formats: default_formats(), snapshot_every: 1 }
    }
}

fn pad(v: &[f64], dim: usize, fill: f64, what: &str) -> Result<[f64; 2]> {
    if v.len() != dim {
        return Err(Error::config(format!("{what} must have {dim} entries, found {}", v.len())));
    }
    let mut out = [fill; 2];
    out[..dim].copy_from_slice(v);
    Ok(out)
}

impl RunConfig {
    pub fn from_json(text: &str, base_dir: impl Into<PathBuf>) -> Result<Self> {
        let mut cfg: RunConfig = serde_json::from_str(text).map_err(|e| Error::config(format!("invalid configuration: {e}")))?;
        cfg.base_dir = base_dir.into();
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::config(format!("cannot read {}: {e}", path.display())))?;
        let base = path.parent().map(Path::to_path_buf).unwrap_or_default();
        Self::from_json(&text, base)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.solver.tolerance > 0.0) {
            return Err(Error::config("solver.tolerance must be positive"));
        }
        if self.solver.max_iter == 0 {
            return Err(Error::config("solver.max_iter must be at least 1"));
        }
        if let Some(m) = self.solver.max_saturation_change {
            if !(m > 0.0) {
                return Err(Error::config("solver.max_saturation_change must be positive"));
            }
        }
        if self.output.snapshot_every == 0 {
            return Err(Error::config("output.snapshot_every must be at least 1"));
        }
        if let Some(m) = &self.model {
            m.validate()?;
        }
        if let Some(mesh) = &self.mesh {
            mesh.validate()?;
        }
        if let Some(c) = &self.convergence {
            c.validate()?;
        }
        Ok(())
    }

    pub fn resolve(&self, file: &str) -> PathBuf {
        let p = Path::new(file);
        if p.is_absolute() {
            p.to_path_buf()
        } else {
            self.base_dir.join(p)
        }
    }

    pub fn require_mesh(&self) -> Result<&MeshConfig> {
        self.mesh.as_ref().ok_or_else(|| Error::config("missing mesh section"))
    }

    pub fn require_model(&self) -> Result<&ModelProblem> {
        self.model.as_ref().ok_or_else(|| Error::config("missing model section"))
    }

    /// Mesh specification with material files loaded.
    pub fn mesh_spec(&self) -> Result<MeshSpec> {
        let m = self.require_mesh()?;
        let dim = m.dim;
        let origin = if m.origin.is_empty() { [0.0; 2] } else { pad(&m.origin, dim, 0.0, "mesh.origin")? };
        let extent = pad(&m.extent, dim, 1.0, "mesh.extent")?;
        let mut subdomains = Vec::with_capacity(m.subdomains.len());
        for (i, s) in m.subdomains.iter().enumerate() {
            let what = |f: &str| format!("mesh.subdomains[{i}].{f}");
            let so = pad(&s.origin, dim, 0.0, &what("origin"))?;
            let se = pad(&s.extent, dim, 1.0, &what("extent"))?;
            if s.cells.len() != dim {
                return Err(Error::config(format!("{} must have {dim} entries", what("cells"))));
            }
            let mut cells = [1usize; 2];
            cells[..dim].copy_from_slice(&s.cells);
            let n = cells[0] * cells[1];
            let permeability: Vec<[f64; 2]> = match &s.permeability {
                ScalarInput::Uniform(k) => vec![[*k; 2]; n],
                ScalarInput::PerAxis(k) => vec![*k; n],
                ScalarInput::File { file, log_scale } => read_scalar_field_with(&self.resolve(file), n, *log_scale)?
                    .into_iter()
                    .map(|k| [k; 2])
                    .collect(),
            };
            let porosity: Vec<f64> = match &s.porosity {
                ScalarInput::Uniform(v) => vec![*v; n],
                ScalarInput::PerAxis(_) => {
                    return Err(Error::config(format!("{} must be a scalar or a file", what("porosity"))))
                }
                ScalarInput::File { file, log_scale } => read_scalar_field_with(&self.resolve(file), n, *log_scale)?,
            };
            subdomains.push(Subdomain { id: i, origin: so, extent: se, cells, dt: s.dt, permeability, porosity });
        }
        Ok(MeshSpec { dim, origin, extent, thickness: m.thickness, t_end: m.t_end, subdomains })
    }
}

impl MeshConfig {
    pub fn validate(&self) -> Result<()> {
        if !(1..=2).contains(&self.dim) {
            return Err(Error::config(format!("mesh.dim must be 1 or 2, got {}", self.dim)));
        }
        if self.extent.len() != self.dim || self.extent.iter().any(|v| !(*v > 0.0)) {
            return Err(Error::config("mesh.extent must have one positive entry per dimension"));
        }
        if !(self.thickness > 0.0) {
            return Err(Error::config("mesh.thickness must be positive"));
        }
        if !(self.t_end > 0.0) {
            return Err(Error::config("mesh.t_end must be positive"));
        }
        if self.subdomains.is_empty() {
            return Err(Error::config("mesh.subdomains must not be empty"));
        }
        for (i, s) in self.subdomains.iter().enumerate() {
            if s.cells.contains(&0) {
                return Err(Error::config(format!("mesh.subdomains[{i}].cells must be positive")));
            }
            if s.extent.iter().any(|v| !(*v > 0.0)) {
                return Err(Error::config(format!("mesh.subdomains[{i}].extent must be positive")));
            }
            if !(s.dt > 0.0) {
                return Err(Error::config(format!("mesh.subdomains[{i}].dt must be positive")));
            }
            let bad = match &s.permeability {
                ScalarInput::Uniform(k) => !(*k > 0.0),
                ScalarInput::PerAxis(k) => k.iter().any(|v| !(*v > 0.0)),
                ScalarInput::File { .. } => false,
            };
            if bad {
                return Err(Error::config(format!("mesh.subdomains[{i}].permeability must be positive")));
            }
            if let ScalarInput::Uniform(phi) = s.porosity {
                if !(phi > 0.0 && phi <= 1.0) {
                    return Err(Error::config(format!("mesh.subdomains[{i}].porosity must lie in (0, 1]")));
                }
            }
        }
        Ok(())
    }
}
