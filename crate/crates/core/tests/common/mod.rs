#![allow(dead_code)]

pub mod oracle;
pub mod scenarios;

use nalgebra::{DMatrix, DVector};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use stevmfe::models::{Model, ModelProblem, SlabContext};
use stevmfe::solver::{recover_fluxes, schur_reduce, sparse_lu_solve, SlabSystem};
use stevmfe::stmesh::{build_mesh, enumerate_dofs, DofMap, FaceKind, MeshSpec, Side, SpaceTimeMesh, Subdomain};

pub const WATER: &str = r#"{"rho_ref": 64, "p_ref": 1000, "compressibility": 3e-6, "viscosity": 1}"#;
pub const OIL: &str = r#"{"rho_ref": 53, "p_ref": 1000, "compressibility": 1e-4, "viscosity": 3}"#;

pub fn problem(json: &str) -> ModelProblem {
    let p: ModelProblem = serde_json::from_str(json).expect("model json");
    p.validate().expect("valid model");
    p
}

// Model set-ups on `two_block_mesh`: wells in the first cell of each block.

pub fn linear_json() -> String {
    r#"{"kind": "linear_parabolic", "initial_pressure": 0.5,
        "boundary": {"x_min": {"type": "dirichlet", "value": 1}, "y_max": {"type": "dirichlet", "value": 0}},
        "wells": [{"subdomain": 0, "cell": [0, 0], "type": "injector", "rate": 0.3},
                  {"subdomain": 1, "cell": [0, 0], "type": "producer", "bhp": 0, "well_index": 0.5}]}"#
        .to_string()
}

pub fn field_wells() -> &'static str {
    r#"[{"subdomain": 0, "cell": [0, 0], "type": "injector", "rate": 1, "concentration": 1},
        {"subdomain": 1, "cell": [0, 0], "type": "producer", "bhp": 990}]"#
}

pub fn tracer_json() -> String {
    format!(
        r#"{{"kind": "single_phase_tracer", "fluid": {WATER}, "diffusion": 0.1,
            "initial_pressure": 1000, "initial_concentration": 0.2, "wells": {}}}"#,
        field_wells()
    )
}

pub fn two_phase_json(s0: f64) -> String {
    format!(
        r#"{{"kind": "two_phase", "water": {WATER}, "oil": {OIL},
            "rel_perm": {{"s_wirr": 0.2, "s_or": 0.2, "krw0": 1, "kro0": 1, "n_w": 2, "n_o": 2}},
            "capillary": {{"a": 0.8, "b": 0.6255, "c": 2.67, "s_wirr": 0.2}},
            "initial_pressure": 1000, "initial_saturation": {s0}, "wells": {}}}"#,
        field_wells()
    )
}

pub fn mesh_of(dim: usize, extent: [f64; 2], t_end: f64, subdomains: Vec<Subdomain>) -> SpaceTimeMesh {
    build_mesh(&MeshSpec { dim, origin: [0.0; 2], extent, thickness: 1.0, t_end, subdomains }).expect("mesh")
}

/// Two-subdomain 2D mesh: a fine block `[0, w]^2` next to a coarse block
/// `[w, 2w] x [0, w]` with the given space and time ratios.
pub fn two_block_mesh(w: f64, fine: usize, space_ratio: usize, dt_coarse: f64, time_ratio: usize) -> SpaceTimeMesh {
    let coarse = fine / space_ratio;
    let a = Subdomain::uniform(0, [0.0, 0.0], [w, w], [fine, fine], dt_coarse / time_ratio as f64, [50.0; 2], 0.2);
    let b = Subdomain::uniform(1, [w, 0.0], [w, w], [coarse, coarse], dt_coarse, [50.0; 2], 0.2);
    mesh_of(2, [2.0 * w, w], dt_coarse, vec![a, b])
}

/// Random multiblock layout: blocks `A | B` side by side, optionally a block
/// `C` on top spanning both. Interface grids are nested (cell counts are a
/// shared base times 1, 2 or 4) and time levels per slab are 1, 2 or 4.
/// Materials are random per cell.
pub fn random_layout(rng: &mut ChaCha8Rng, with_top: bool) -> SpaceTimeMesh {
    let w = rng.gen_range(1.0..10.0);
    let hgt = rng.gen_range(1.0..10.0);
    let dt = 1.0;
    let pow2 = |rng: &mut ChaCha8Rng| [1usize, 2, 4][rng.gen_range(0..3)];
    let (bx, by) = (rng.gen_range(1..3), rng.gen_range(1..3));
    let block = |rng: &mut ChaCha8Rng, id: usize, origin: [f64; 2], extent: [f64; 2], cells: [usize; 2]| {
        let mut s = Subdomain::uniform(id, origin, extent, cells, dt / pow2(rng) as f64, [1.0; 2], 1.0);
        for c in 0..s.num_cells() {
            s.permeability[c] = [rng.gen_range(1.0..100.0), rng.gen_range(1.0..100.0)];
            s.porosity[c] = rng.gen_range(0.05..0.4);
        }
        s
    };
    let mut subs = Vec::new();
    for (id, x0) in [(0, 0.0), (1, w)] {
        let cells = [bx * pow2(rng), by * pow2(rng)];
        subs.push(block(rng, id, [x0, 0.0], [w, hgt], cells));
    }
    let mut extent = [2.0 * w, hgt];
    if with_top {
        let top = rng.gen_range(1.0..10.0);
        let cells = [2 * bx * pow2(rng), rng.gen_range(1..4)];
        subs.push(block(rng, 2, [0.0, hgt], [2.0 * w, top], cells));
        extent[1] += top;
    }
    mesh_of(2, extent, 2.0 * dt, subs)
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    use rand::SeedableRng;
    ChaCha8Rng::seed_from_u64(seed)
}

/// Random slab iterate and previous state for an interior-physics check:
/// pressures near `p0`, second field in `range`, fluxes bounded away from
/// zero so upwind directions are stable under small perturbations.
pub fn random_state(
    rng: &mut ChaCha8Rng,
    mesh: &SpaceTimeMesh,
    map: &DofMap,
    p0: f64,
    range: (f64, f64),
    flux_scale: f64,
) -> (Vec<f64>, Vec<f64>) {
    let nf = map.layout.n_fields();
    let mut x = vec![0.0; map.len()];
    for v in x.iter_mut().take(map.n_flux()) {
        let mag = flux_scale * rng.gen_range(0.2..1.0);
        *v = if rng.gen_bool(0.5) { mag } else { -mag };
    }
    let field = |rng: &mut ChaCha8Rng, k: usize| {
        if k == 0 {
            p0 + rng.gen_range(-50.0..50.0)
        } else {
            rng.gen_range(range.0..range.1)
        }
    };
    for e in 0..mesh.n_elements() {
        for k in 0..nf {
            x[map.cell_dof(e, k)] = field(rng, k);
        }
    }
    let prev: Vec<f64> = (0..mesh.cells.len() * nf).map(|i| field(rng, i % nf)).collect();
    (x, prev)
}

/// Largest `|fd - analytic| / (|analytic| + floor)` over the Jacobian, with
/// `floor = 1e-6 * max|row|` absorbing entries that vanish analytically.
pub fn jacobian_mismatch(model: &dyn Model, ctx: &SlabContext, x: &[f64], prev: &[f64]) -> (f64, String) {
    let n = ctx.map.len();
    let mut sys = SlabSystem::new(ctx.map);
    model.assemble(ctx, x, prev, &mut sys).unwrap();
    let a = sys.dense();
    let row_max: Vec<f64> = (0..n).map(|i| a[i * n..(i + 1) * n].iter().fold(0.0f64, |m, v| m.max(v.abs()))).collect();
    let mut worst = (0.0, String::new());
    for j in 0..n {
        // residual rows reach ~1e3 and p_c is sharply curved near s_wirr:
        // a moderate step with Richardson extrapolation balances roundoff and truncation
        let h = 1e-4 * x[j].abs().max(1.0);
        let mut central = |h: f64| {
            let mut xs = x.to_vec();
            xs[j] = x[j] + h;
            model.assemble(ctx, &xs, prev, &mut sys).unwrap();
            let rp = sys.residual();
            xs[j] = x[j] - h;
            model.assemble(ctx, &xs, prev, &mut sys).unwrap();
            let rm = sys.residual();
            rp.iter().zip(&rm).map(|(p, m)| (p - m) / (2.0 * h)).collect::<Vec<f64>>()
        };
        let (wide, narrow) = (central(h), central(0.5 * h));
        for i in 0..n {
            let fd = (4.0 * narrow[i] - wide[i]) / 3.0;
            let an = a[i * n + j];
            let err = (fd - an).abs() / (an.abs() + 1e-6 * row_max[i] + 1e-300);
            if err > worst.0 {
                worst = (err, format!("d[{}]/d[{}]: fd {fd:e}, analytic {an:e}", ctx.map.describe(i), ctx.map.describe(j)));
            }
        }
    }
    worst
}

/// Newton update `J dx = -r` from the full saddle-point matrix, dense LU.
pub fn dense_update(sys: &SlabSystem) -> Vec<f64> {
    let n = sys.len();
    let a = DMatrix::from_row_slice(n, n, &sys.dense());
    let r = DVector::from_iterator(n, sys.residual().into_iter().map(|v| -v));
    a.lu().solve(&r).expect("dense saddle-point matrix is singular").iter().copied().collect()
}

/// The same update through flux elimination and the reduced cell system.
pub fn schur_update(sys: &SlabSystem) -> Vec<f64> {
    let red = schur_reduce(sys).unwrap();
    let (dp, _) = sparse_lu_solve(red.n, &red.triplets, &red.rhs).unwrap();
    let mut out = recover_fluxes(sys, &red, &dp);
    out.extend(dp);
    out
}

pub fn max_rel_diff(a: &[f64], b: &[f64], scale: f64) -> f64 {
    a.iter().zip(b).fold(0.0f64, |m, (x, y)| m.max((x - y).abs() / y.abs().max(scale)))
}

/// Per-field maximum magnitude, used as the scale of relative comparisons
/// for fields that may be close to zero.
pub fn field_scales(v: &[f64], nf: usize) -> Vec<f64> {
    let mut s = vec![0.0f64; nf];
    for (i, x) in v.iter().enumerate() {
        s[i % nf] = s[i % nf].max(x.abs());
    }
    s
}

/// `|a - b| / max(|b|, scale_of_field)` over interleaved fields.
pub fn max_rel_diff_fields(a: &[f64], b: &[f64], nf: usize) -> f64 {
    let sc = field_scales(b, nf);
    a.iter()
        .zip(b)
        .enumerate()
        .fold(0.0f64, |m, (i, (x, y))| m.max((x - y).abs() / y.abs().max(sc[i % nf]).max(1e-300)))
}

// ---- invariant checks shared by the property tests and the acceptance run ----

pub fn check_partition(mesh: &SpaceTimeMesh) -> Result<(), String> {
    let total: f64 = mesh.elements.iter().map(|e| e.measure).sum::<f64>() * mesh.n_slabs as f64;
    let want = mesh.domain_measure() * mesh.t_end;
    if ((total - want) / want).abs() > 1e-12 {
        return Err(format!("element measures sum to {total}, domain measure {want}"));
    }
    for (k, p) in mesh.patches.iter().enumerate() {
        let s: f64 = p.subfaces.iter().map(|sf| sf.measure).sum();
        if ((s - p.measure) / p.measure).abs() > 1e-12 {
            return Err(format!("patch {k}: sub-face measures sum to {s}, trace measure {}", p.measure));
        }
    }
    let cells: f64 = mesh.cells.iter().map(|c| c.volume).sum();
    if ((cells - mesh.domain_measure()) / mesh.domain_measure()).abs() > 1e-12 {
        return Err(format!("cell volumes sum to {cells}"));
    }
    Ok(())
}

/// Both sides of every interface sub-face resolve to the same face, hence the
/// same flux unknowns, and each face has exactly one unknown per family.
pub fn check_shared_dofs(mesh: &SpaceTimeMesh, map: &DofMap) -> Result<(), String> {
    let mut seen = vec![0usize; mesh.n_faces()];
    for (fi, f) in mesh.faces.iter().enumerate() {
        if !matches!(f.kind, FaceKind::Interface { .. }) {
            continue;
        }
        let (m, p) = (f.minus.unwrap(), f.plus.unwrap());
        let ta = if mesh.dim == 2 { f.center[1 - f.axis] } else { 0.0 };
        let tm = f.t_mid();
        let from_minus = mesh.face_lookup(m, f.axis, Side::Max, ta, tm);
        let from_plus = mesh.face_lookup(p, f.axis, Side::Min, ta, tm);
        if from_minus != Some(fi) || from_plus != Some(fi) {
            return Err(format!("face {fi}: lookups give {from_minus:?} and {from_plus:?}"));
        }
        for fam in 0..map.layout.n_families() {
            let d = map.flux_dof(fi, fam);
            if d / map.layout.n_families() != fi || d % map.layout.n_families() != fam {
                return Err(format!("face {fi}: flux unknown {d} is not owned by the face"));
            }
        }
        seen[fi] += 1;
    }
    for e in 0..mesh.n_elements() {
        for ef in mesh.element_faces(e) {
            if matches!(mesh.faces[ef.face].kind, FaceKind::Interface { .. }) {
                seen[ef.face] += 1;
            }
        }
    }
    for (fi, f) in mesh.faces.iter().enumerate() {
        if matches!(f.kind, FaceKind::Interface { .. }) && seen[fi] != 3 {
            return Err(format!("interface face {fi} referenced by {} elements, expected 2", seen[fi] - 1));
        }
    }
    Ok(())
}

/// Summing every element's divergence row cancels all interior and interface
/// fluxes and leaves each boundary flux once.
pub fn check_telescoping(mesh: &SpaceTimeMesh) -> Result<(), String> {
    let mut sum = vec![0.0; mesh.n_faces()];
    for e in 0..mesh.n_elements() {
        for (f, s) in stevmfe::stdisc::flux_divergence_row(mesh, e) {
            sum[f] += s;
        }
    }
    for (fi, f) in mesh.faces.iter().enumerate() {
        let want = match f.kind {
            FaceKind::Boundary(_) => f.interior_element().unwrap().1,
            _ => 0.0,
        };
        if sum[fi] != want {
            return Err(format!("face {fi} ({:?}): coefficient sum {} expected {want}", f.kind, sum[fi]));
        }
    }
    Ok(())
}

pub fn dofs_of(mesh: &SpaceTimeMesh, model: &dyn Model) -> DofMap {
    enumerate_dofs(mesh, model.layout())
}
