//! Model problems: residual and Jacobian rows per model, property curves,
//! wells and the manufactured solution.

mod linear;
pub mod manufactured;
pub mod props;
mod tracer;
mod two_phase;
pub mod wells;

pub use linear::LinearParabolic;
pub use manufactured::manufactured_solution;
pub use props::{
    brooks_corey, density, upwind_concentration, upwind_mobility, van_genuchten_pc, BrooksCorey, FluidProps,
    UnitSystem, VanGenuchten,
};
pub use tracer::SinglePhaseTracer;
pub use two_phase::TwoPhase;
pub use wells::{Well, WellKind, WellSpec};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::solver::SlabSystem;
use crate::stmesh::{BoundarySide, DofMap, FieldLayout, SpaceTimeMesh};

/// Mesh, numbering and slab index shared by every row of one slab.
#[derive(Debug, Clone, Copy)]
pub struct SlabContext<'a> {
    pub mesh: &'a SpaceTimeMesh,
    pub map: &'a DofMap,
    pub slab: usize,
}

impl<'a> SlabContext<'a> {
    pub fn t0(&self) -> f64 {
        self.mesh.slab_start(self.slab)
    }

    /// Field value of the element's backward-Euler predecessor and its DOF if
    /// the predecessor lies in the current slab.
    pub fn previous(&self, x: &[f64], prev: &[f64], element: usize, field: usize) -> (f64, Option<usize>) {
        let e = &self.mesh.elements[element];
        match e.prev {
            Some(pe) => {
                let d = self.map.cell_dof(pe, field);
                (x[d], Some(d))
            }
            None => (prev[e.cell * self.map.layout.n_fields() + field], None),
        }
    }
}

/// Storage change and gross in/outflow of one conserved quantity over a slab.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize)]
pub struct ComponentBalance {
    pub name: &'static str,
    pub storage_change: f64,
    pub inflow: f64,
    pub outflow: f64,
}

impl ComponentBalance {
    pub fn new(name: &'static str) -> Self {
        ComponentBalance { name, ..Default::default() }
    }

    pub fn add_flow(&mut self, v: f64) {
        if v >= 0.0 {
            self.inflow += v;
        } else {
            self.outflow -= v;
        }
    }

    pub fn error(&self) -> f64 {
        self.storage_change - (self.inflow - self.outflow)
    }
}

pub trait Model: Send + Sync {
    fn name(&self) -> &'static str;

    fn layout(&self) -> FieldLayout;

    /// Initial cell fields, `cell * n_fields + field`.
    fn initial_cells(&self, mesh: &SpaceTimeMesh) -> Vec<f64>;

    /// Residual and analytic Jacobian of the slab at iterate `x`. `prev` holds
    /// the converged cell fields at the slab start.
    fn assemble(&self, ctx: &SlabContext, x: &[f64], prev: &[f64], sys: &mut SlabSystem) -> Result<()>;

    /// Conservation bookkeeping of a converged slab.
    fn balance(&self, ctx: &SlabContext, x: &[f64], prev: &[f64]) -> Vec<ComponentBalance>;

    /// Field subject to the optional Newton update clamp.
    fn saturation_field(&self) -> Option<usize> {
        None
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize, Default)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum BoundaryCondition {
    #[default]
    NoFlow,
    Dirichlet {
        value: f64,
    },
    /// Dirichlet data from the manufactured solution.
    Exact,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize, Default)]
#[serde(deny_unknown_fields)]
pub struct BoundaryConditions {
    #[serde(default)]
    pub x_min: BoundaryCondition,
    #[serde(default)]
    pub x_max: BoundaryCondition,
    #[serde(default)]
    pub y_min: BoundaryCondition,
    #[serde(default)]
    pub y_max: BoundaryCondition,
}

impl BoundaryConditions {
    pub fn all(bc: BoundaryCondition) -> Self {
        BoundaryConditions { x_min: bc, x_max: bc, y_min: bc, y_max: bc }
    }

    pub fn get(&self, side: BoundarySide) -> BoundaryCondition {
        match side.name() {
            "x_min" => self.x_min,
            "x_max" => self.x_max,
            "y_min" => self.y_min,
            _ => self.y_max,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum Units {
    #[default]
    Consistent,
    Field,
}

impl Units {
    pub fn system(self) -> UnitSystem {
        match self {
            Units::Consistent => UnitSystem::consistent(),
            Units::Field => UnitSystem::field(),
        }
    }
}

fn field_units() -> Units {
    Units::Field
}

fn unit_viscosity() -> f64 {
    1.0
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LinearParams {
    #[serde(default = "unit_viscosity")]
    pub viscosity: f64,
    #[serde(default)]
    pub units: Units,
    #[serde(default)]
    pub boundary: BoundaryConditions,
    #[serde(default)]
    pub initial_pressure: f64,
    /// Growth rate `c1` of the manufactured solution; enables its forcing and
    /// initial condition.
    #[serde(default)]
    pub manufactured_c1: Option<f64>,
    #[serde(default)]
    pub wells: Vec<WellSpec>,
}

impl Default for LinearParams {
    fn default() -> Self {
        LinearParams {
            viscosity: 1.0,
            units: Units::Consistent,
            boundary: BoundaryConditions::default(),
            initial_pressure: 0.0,
            manufactured_c1: None,
            wells: Vec::new(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TracerParams {
    pub fluid: FluidProps,
    /// Molecular diffusion coefficient (length²/time).
    pub diffusion: f64,
    #[serde(default = "field_units")]
    pub units: Units,
    pub initial_pressure: f64,
    #[serde(default)]
    pub initial_concentration: f64,
    #[serde(default)]
    pub wells: Vec<WellSpec>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TwoPhaseParams {
    pub water: FluidProps,
    pub oil: FluidProps,
    #[serde(default)]
    pub rel_perm: BrooksCorey,
    #[serde(default)]
    pub capillary: VanGenuchten,
    #[serde(default = "field_units")]
    pub units: Units,
    pub initial_pressure: f64,
    pub initial_saturation: f64,
    #[serde(default)]
    pub wells: Vec<WellSpec>,
}

/// Model selection and parameters as given in a run configuration.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ModelProblem {
    LinearParabolic(LinearParams),
    SinglePhaseTracer(TracerParams),
    TwoPhase(TwoPhaseParams),
}

fn check(cond: bool, msg: &str) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(Error::config(msg.to_string()))
    }
}

fn check_fluid(name: &str, f: &FluidProps) -> Result<()> {
    check(f.viscosity > 0.0, &format!("model.{name}.viscosity must be positive"))?;
    check(f.compressibility >= 0.0, &format!("model.{name}.compressibility must be non-negative"))?;
    check(f.rho_ref > 0.0, &format!("model.{name}.rho_ref must be positive"))?;
    check(f.p_ref.is_finite(), &format!("model.{name}.p_ref must be finite"))
}

impl ModelProblem {
    pub fn validate(&self) -> Result<()> {
        match self {
            ModelProblem::LinearParabolic(p) => {
                check(p.viscosity > 0.0, "model.viscosity must be positive")?;
                check(p.initial_pressure.is_finite(), "model.initial_pressure must be finite")?;
                if let Some(c1) = p.manufactured_c1 {
                    check(c1.is_finite(), "model.manufactured_c1 must be finite")?;
                }
                if p.manufactured_c1.is_none() {
                    for bc in [p.boundary.x_min, p.boundary.x_max, p.boundary.y_min, p.boundary.y_max] {
                        check(bc != BoundaryCondition::Exact, "model.boundary: exact data needs manufactured_c1")?;
                    }
                }
                Ok(())
            }
            ModelProblem::SinglePhaseTracer(p) => {
                check_fluid("fluid", &p.fluid)?;
                check(p.diffusion > 0.0, "model.diffusion must be positive")?;
                check(p.initial_pressure.is_finite(), "model.initial_pressure must be finite")?;
                check(
                    (0.0..=1.0).contains(&p.initial_concentration),
                    "model.initial_concentration must lie in [0, 1]",
                )
            }
            ModelProblem::TwoPhase(p) => {
                check_fluid("water", &p.water)?;
                check_fluid("oil", &p.oil)?;
                let r = &p.rel_perm;
                check(r.s_wirr >= 0.0 && r.s_or >= 0.0, "model.rel_perm residual saturations must be non-negative")?;
                check(r.s_wirr + r.s_or < 1.0, "model.rel_perm: s_wirr + s_or must be below 1")?;
                check(r.krw0 > 0.0 && r.kro0 > 0.0, "model.rel_perm endpoints must be positive")?;
                check(r.n_w >= 1.0 && r.n_o >= 1.0, "model.rel_perm exponents must be at least 1")?;
                let c = &p.capillary;
                check(c.a >= 0.0, "model.capillary.a must be non-negative")?;
                check(c.b > 0.0 && c.b <= 1.0, "model.capillary.b must lie in (0, 1]")?;
                check(c.c > 1.0, "model.capillary.c must exceed 1")?;
                check(c.delta > 0.0, "model.capillary.delta must be positive")?;
                check(p.initial_pressure.is_finite(), "model.initial_pressure must be finite")?;
                check(
                    (0.0..=1.0).contains(&p.initial_saturation),
                    "model.initial_saturation must lie in [0, 1]",
                )
            }
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            ModelProblem::LinearParabolic(_) => "linear_parabolic",
            ModelProblem::SinglePhaseTracer(_) => "single_phase_tracer",
            ModelProblem::TwoPhase(_) => "two_phase",
        }
    }

    pub fn instantiate(&self, mesh: &SpaceTimeMesh) -> Result<Box<dyn Model>> {
        self.validate()?;
        Ok(match self {
            ModelProblem::LinearParabolic(p) => Box::new(LinearParabolic::new(p, mesh)?),
            ModelProblem::SinglePhaseTracer(p) => Box::new(SinglePhaseTracer::new(p, mesh)?),
            ModelProblem::TwoPhase(p) => Box::new(TwoPhase::new(p, mesh)?),
        })
    }
}

/// Locate the first non-finite row of an assembled system.
pub(crate) fn check_finite(sys: &SlabSystem, ctx: &SlabContext) -> Result<()> {
    if sys.is_finite() {
        return Ok(());
    }
    let nf = sys.n_fields;
    for (k, v) in sys.r_p.iter().enumerate() {
        if !v.is_finite() {
            return Err(Error::Assembly { element: k / nf, detail: format!("residual {v}") });
        }
    }
    for &(i, _, v) in &sys.a_pp {
        if !v.is_finite() {
            return Err(Error::Assembly { element: i / nf, detail: format!("jacobian entry {v}") });
        }
    }
    for f in 0..sys.n_faces {
        let bad = sys.r_u[f * sys.n_families..(f + 1) * sys.n_families].iter().any(|v| !v.is_finite())
            || sys.uu_block(f).iter().any(|v| !v.is_finite())
            || sys.a_up[f].iter().chain(&sys.a_pu[f]).any(|e| !e.2.is_finite());
        if bad {
            let face = &ctx.mesh.faces[f];
            let element = face.minus.or(face.plus).unwrap_or(0);
            return Err(Error::Assembly { element, detail: format!("flux rows of face {f}") });
        }
    }
    Ok(())
}
