//! Single-subdomain problems solved both by the library and by the
//! backward-Euler oracle.

use std::time::Instant;

use rand::Rng;

use super::oracle::{self, Grid, OWell, Outer, Phase, Stepper};
use super::{max_rel_diff_fields, mesh_of, problem, rng};
use stevmfe::models::manufactured_solution;
use stevmfe::solver::{advance, NewtonOptions};
use stevmfe::stmesh::{SpaceTimeMesh, Subdomain};

const FIELD_DARCY: f64 = 1.127e-3 * 5.614583;
const STB: f64 = 5.614583;

pub struct Comparison {
    pub model: &'static str,
    pub max_rel: f64,
    pub seconds: f64,
    pub max_newton: usize,
}

fn heterogeneous(n: usize, len: f64, dt: f64, k: (f64, f64), phi: (f64, f64), seed: u64) -> Subdomain {
    let mut r = rng(seed);
    let mut s = Subdomain::uniform(0, [0.0; 2], [len; 2], [n, n], dt, [1.0; 2], 1.0);
    for c in 0..n * n {
        s.permeability[c] = [r.gen_range(k.0..k.1), r.gen_range(k.0..k.1)];
        s.porosity[c] = r.gen_range(phi.0..phi.1);
    }
    s
}

fn tight() -> NewtonOptions {
    NewtonOptions { tolerance: 1e-11, max_iter: 40, max_saturation_change: None }
}

fn compare(
    name: &'static str,
    mesh: &SpaceTimeMesh,
    json: &str,
    stepper: &dyn Stepper,
    grid: &Grid,
    init: &[f64],
    dt: f64,
    steps: usize,
) -> Comparison {
    let start = Instant::now();
    let model = problem(json).instantiate(mesh).unwrap();
    let state = advance(model.as_ref(), mesh, &tight()).unwrap();
    let seconds = start.elapsed().as_secs_f64();
    assert_eq!(state.initial, init, "{name}: initial state differs from the oracle's");
    let reference = oracle::march(stepper, grid, dt, steps, init);
    let nf = stepper.n_fields();
    let mut max_rel = 0.0f64;
    for (k, want) in reference.iter().enumerate() {
        max_rel = max_rel.max(max_rel_diff_fields(&state.cells_at_end(mesh, k), want, nf));
    }
    let max_newton = state.reports().map(|r| r.iterations).max().unwrap_or(0);
    Comparison { model: name, max_rel, seconds, max_newton }
}

/// Heterogeneous linear problem with Dirichlet sides and two wells.
pub fn linear_vs_oracle(n: usize, steps: usize) -> Comparison {
    let dt = 0.1;
    let sub = heterogeneous(n, 1.0, dt, (0.5, 2.0), (0.1, 0.3), 7);
    let grid = Grid::from_subdomain(&sub, 2, 1.0);
    let mesh = mesh_of(2, [1.0; 2], dt * steps as f64, vec![sub]);
    let json = r#"{"kind": "linear_parabolic", "viscosity": 2, "units": "consistent",
        "boundary": {"x_min": {"type": "dirichlet", "value": 1}, "x_max": {"type": "dirichlet", "value": 0}},
        "initial_pressure": 0.5,
        "wells": [{"subdomain": 0, "cell": [2, 7], "type": "injector", "rate": 0.5},
                  {"subdomain": 0, "cell": [8, 1], "type": "producer", "bhp": 0, "well_index": 0.3}]}"#;
    let bc = |o: &Outer, _t: f64| match (o.axis, o.out > 0.0) {
        (0, false) => Some(1.0),
        (0, true) => Some(0.0),
        _ => None,
    };
    let zero = |_: [f64; 2], _: f64| 0.0;
    let stepper = oracle::Linear {
        mobility: 0.5,
        darcy: 1.0,
        boundary: &bc,
        source: &zero,
        wells: vec![
            OWell::Inject { cell: grid.id(2, 7), rate: 0.5, conc: 1.0 },
            OWell::Produce { cell: grid.id(8, 1), bhp: 0.0, wi: 0.3 },
        ],
    };
    let init = vec![0.5; grid.len()];
    compare("linear_parabolic", &mesh, json, &stepper, &grid, &init, dt, steps)
}

/// Manufactured forcing with time-dependent exact Dirichlet data.
pub fn manufactured_vs_oracle(n: usize, steps: usize) -> Comparison {
    let dt = 1.0 / n as f64;
    let sub = Subdomain::uniform(0, [0.0; 2], [1.0; 2], [n, n], dt, [1.0; 2], 1.0);
    let grid = Grid::from_subdomain(&sub, 2, 1.0);
    let mesh = mesh_of(2, [1.0; 2], dt * steps as f64, vec![sub]);
    let json = r#"{"kind": "linear_parabolic", "manufactured_c1": 1.0,
        "boundary": {"x_min": {"type": "exact"}, "x_max": {"type": "exact"},
                     "y_min": {"type": "exact"}, "y_max": {"type": "exact"}}}"#;
    let bc = |o: &Outer, t: f64| Some(manufactured_solution(o.center[0], o.center[1], t, 1.0).0);
    let src = |x: [f64; 2], t: f64| manufactured_solution(x[0], x[1], t, 1.0).1;
    let stepper = oracle::Linear { mobility: 1.0, darcy: 1.0, boundary: &bc, source: &src, wells: vec![] };
    let init: Vec<f64> = (0..grid.len())
        .map(|k| {
            let c = grid.center(k);
            manufactured_solution(c[0], c[1], 0.0, 1.0).0
        })
        .collect();
    compare("linear_parabolic (manufactured)", &mesh, json, &stepper, &grid, &init, dt, steps)
}

fn wells_json(rate: f64) -> String {
    format!(
        r#"[{{"subdomain": 0, "cell": [0, 0], "type": "injector", "rate": {rate}, "concentration": 1}},
            {{"subdomain": 0, "cell": [9, 9], "type": "producer", "bhp": 1000}}]"#
    )
}

fn oracle_wells(grid: &Grid, rate: f64) -> Vec<OWell> {
    let p = grid.id(9, 9);
    vec![
        OWell::Inject { cell: grid.id(0, 0), rate: rate * STB, conc: 1.0 },
        OWell::Produce {
            cell: p,
            bhp: 1000.0,
            wi: oracle::peaceman(grid.perm[p], grid.h, grid.thickness, 0.05, FIELD_DARCY),
        },
    ]
}

/// Tracer injection between opposite corners of a heterogeneous 10x10 grid.
pub fn tracer_vs_oracle(steps: usize) -> Comparison {
    let dt = 1.0;
    let sub = heterogeneous(10, 100.0, dt, (20.0, 100.0), (0.15, 0.25), 11);
    let grid = Grid::from_subdomain(&sub, 2, 1.0);
    let mesh = mesh_of(2, [100.0; 2], dt * steps as f64, vec![sub]);
    let json = format!(
        r#"{{"kind": "single_phase_tracer",
            "fluid": {{"rho_ref": 64, "p_ref": 1000, "compressibility": 1e-5, "viscosity": 1}},
            "diffusion": 0.1, "initial_pressure": 1000, "initial_concentration": 0, "wells": {}}}"#,
        wells_json(4.0)
    );
    let stepper = oracle::Tracer {
        fluid: Phase { rho_ref: 64.0, p_ref: 1000.0, c_f: 1e-5, mu: 1.0 },
        diffusion: 0.1,
        darcy: FIELD_DARCY,
        wells: oracle_wells(&grid, 4.0),
    };
    let init: Vec<f64> = (0..grid.len()).flat_map(|_| [1000.0, 0.0]).collect();
    compare("single_phase_tracer", &mesh, &json, &stepper, &grid, &init, dt, steps)
}

/// Water injection with capillarity on a heterogeneous 10x10 grid.
pub fn two_phase_vs_oracle(steps: usize) -> Comparison {
    let dt = 1.0;
    let sub = heterogeneous(10, 100.0, dt, (20.0, 100.0), (0.15, 0.25), 13);
    let grid = Grid::from_subdomain(&sub, 2, 1.0);
    let mesh = mesh_of(2, [100.0; 2], dt * steps as f64, vec![sub]);
    let json = format!(
        r#"{{"kind": "two_phase", "water": {}, "oil": {},
            "rel_perm": {{"s_wirr": 0.2, "s_or": 0.2, "krw0": 1, "kro0": 1, "n_w": 2, "n_o": 2}},
            "capillary": {{"a": 0.8, "b": 0.6255, "c": 2.67, "s_wirr": 0.2}},
            "initial_pressure": 1000, "initial_saturation": 0.3, "wells": {}}}"#,
        super::WATER,
        super::OIL,
        wells_json(1.0)
    );
    let stepper = oracle::TwoPhaseOracle {
        water: Phase { rho_ref: 64.0, p_ref: 1000.0, c_f: 3e-6, mu: 1.0 },
        oil: Phase { rho_ref: 53.0, p_ref: 1000.0, c_f: 1e-4, mu: 3.0 },
        s_wirr: 0.2,
        s_or: 0.2,
        krw0: 1.0,
        kro0: 1.0,
        n_w: 2.0,
        n_o: 2.0,
        vg: (0.8, 0.6255, 2.67, 1e-6),
        darcy: FIELD_DARCY,
        wells: oracle_wells(&grid, 1.0),
    };
    let init: Vec<f64> = (0..grid.len()).flat_map(|_| [1000.0, 0.3]).collect();
    compare("two_phase", &mesh, &json, &stepper, &grid, &init, dt, steps)
}
