//! Space-time multiblock meshes.
//!
//! Every subdomain is an axis-aligned box carrying a uniform tensor grid and its
//! own time step. Time is cut into matching slabs whose length is the coarsest
//! subdomain step; every other step must divide it. The mesh stores one slab's
//! worth of elements and faces with times relative to the slab start, since all
//! slabs share the same structure.
//!
//! Elements inside a slab are time-major: blocks of one subdomain time level are
//! ordered by their end time, ties broken by subdomain, and cells within a block
//! are lexicographic with x varying fastest. Only spatial-normal faces exist; the time
//! direction is handled by the backward-Euler jump and carries no flux unknowns.

mod dofmap;
mod intersect;

pub use dofmap::{enumerate_dofs, DofCounts, DofMap, FieldLayout};
pub use intersect::{intersect_traces, InterfacePatch, SubFace};

use crate::error::{Error, Result};

/// Relative tolerance for coordinate comparisons.
pub(crate) const GEOM_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Side {
    Min,
    Max,
}

impl Side {
    /// Outward normal sign along the axis.
    pub fn sign(self) -> f64 {
        match self {
            Side::Min => -1.0,
            Side::Max => 1.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct BoundarySide {
    pub axis: usize,
    pub side: Side,
}

impl BoundarySide {
    pub fn name(&self) -> &'static str {
        match (self.axis, self.side) {
            (0, Side::Min) => "x_min",
            (0, Side::Max) => "x_max",
            (_, Side::Min) => "y_min",
            (_, Side::Max) => "y_max",
        }
    }
}

/// One axis-aligned block of the multiblock domain.
///
/// Arrays are sized for two spatial axes. In one dimension axis 1 must have a
/// single cell; its extent is ignored (the transverse measure comes from the
/// mesh thickness).
#[derive(Debug, Clone, PartialEq)]
pub struct Subdomain {
    pub id: usize,
    pub origin: [f64; 2],
    pub extent: [f64; 2],
    pub cells: [usize; 2],
    pub dt: f64,
    /// Diagonal permeability per cell, lexicographic order.
    pub permeability: Vec<[f64; 2]>,
    pub porosity: Vec<f64>,
}

impl Subdomain {
    /// Subdomain with homogeneous material.
    pub fn uniform(
        id: usize,
        origin: [f64; 2],
        extent: [f64; 2],
        cells: [usize; 2],
        dt: f64,
        permeability: [f64; 2],
        porosity: f64,
    ) -> Self {
        let n = cells[0] * cells[1];
        Subdomain {
            id,
            origin,
            extent,
            cells,
            dt,
            permeability: vec![permeability; n],
            porosity: vec![porosity; n],
        }
    }

    /// 1D helper: interval `[x0, x0 + len]` with `n` cells.
    pub fn interval(id: usize, x0: f64, len: f64, n: usize, dt: f64, permeability: f64) -> Self {
        Self::uniform(id, [x0, 0.0], [len, 1.0], [n, 1], dt, [permeability; 2], 1.0)
    }

    pub fn cell_size(&self, axis: usize) -> f64 {
        self.extent[axis] / self.cells[axis] as f64
    }

    pub fn num_cells(&self) -> usize {
        self.cells[0] * self.cells[1]
    }

    pub fn lex(&self, index: [usize; 2]) -> usize {
        index[0] + self.cells[0] * index[1]
    }

    pub fn unlex(&self, k: usize) -> [usize; 2] {
        [k % self.cells[0], k / self.cells[0]]
    }

    pub fn upper(&self, axis: usize) -> f64 {
        self.origin[axis] + self.extent[axis]
    }

    pub fn node(&self, axis: usize, i: usize) -> f64 {
        self.origin[axis] + i as f64 * self.cell_size(axis)
    }

    /// Index of the cell whose closed interval along `axis` contains `x`.
    pub fn cell_containing(&self, axis: usize, x: f64) -> usize {
        let s = ((x - self.origin[axis]) / self.cell_size(axis)).floor();
        (s.max(0.0) as usize).min(self.cells[axis] - 1)
    }

    pub fn levels_per(&self, slab_length: f64) -> usize {
        (slab_length / self.dt).round() as usize
    }
}

/// Input to [`build_mesh`].
#[derive(Debug, Clone, PartialEq)]
pub struct MeshSpec {
    pub dim: usize,
    pub origin: [f64; 2],
    pub extent: [f64; 2],
    /// Out-of-plane extent in 2D, cross-section area in 1D.
    pub thickness: f64,
    pub t_end: f64,
    pub subdomains: Vec<Subdomain>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Cell {
    pub subdomain: usize,
    pub index: [usize; 2],
    pub center: [f64; 2],
    pub size: [f64; 2],
    /// Spatial measure including the thickness.
    pub volume: f64,
    pub permeability: [f64; 2],
    pub porosity: f64,
}

impl Cell {
    pub fn pore_volume(&self) -> f64 {
        self.porosity * self.volume
    }
}

/// Space-time element `cell × (t_lo, t_hi]`, times relative to the slab start.
#[derive(Debug, Clone, PartialEq)]
pub struct Element {
    pub subdomain: usize,
    pub cell: usize,
    pub level: usize,
    pub t_lo: f64,
    pub t_hi: f64,
    /// Spatial measure of the cell.
    pub volume: f64,
    /// Space-time measure `volume * (t_hi - t_lo)`.
    pub measure: f64,
    /// Predecessor element inside the same slab; `None` for the first level,
    /// whose predecessor is the previous slab's final level.
    pub prev: Option<usize>,
}

impl Element {
    pub fn dt(&self) -> f64 {
        self.t_hi - self.t_lo
    }

    pub fn t_mid(&self) -> f64 {
        0.5 * (self.t_lo + self.t_hi)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FaceKind {
    Interior,
    Boundary(BoundarySide),
    Interface { patch: usize },
}

/// Spatial-normal space-time face carrying one flux unknown per family.
///
/// Orientation is along `+axis`: flux is positive from `minus` to `plus`.
#[derive(Debug, Clone, PartialEq)]
pub struct Face {
    pub axis: usize,
    pub minus: Option<usize>,
    pub plus: Option<usize>,
    /// Normal cell sizes of the adjacent elements.
    pub h_minus: Option<f64>,
    pub h_plus: Option<f64>,
    /// Spatial face area including thickness.
    pub area: f64,
    pub t_lo: f64,
    pub t_hi: f64,
    pub center: [f64; 2],
    pub kind: FaceKind,
}

impl Face {
    pub fn dt(&self) -> f64 {
        self.t_hi - self.t_lo
    }

    pub fn t_mid(&self) -> f64 {
        0.5 * (self.t_lo + self.t_hi)
    }

    /// Space-time measure `|e|`.
    pub fn measure(&self) -> f64 {
        self.area * self.dt()
    }

    pub fn boundary_side(&self) -> Option<BoundarySide> {
        match self.kind {
            FaceKind::Boundary(b) => Some(b),
            _ => None,
        }
    }

    /// The single adjacent element of a boundary face with its outward sign.
    pub fn interior_element(&self) -> Option<(usize, f64)> {
        match (self.minus, self.plus) {
            (Some(m), None) => Some((m, 1.0)),
            (None, Some(p)) => Some((p, -1.0)),
            _ => None,
        }
    }
}

/// Face seen from one of its elements.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ElementFace {
    pub face: usize,
    pub axis: usize,
    pub side: Side,
}

impl ElementFace {
    /// Sign of the flux unknown in the element's outward divergence.
    pub fn sign(&self) -> f64 {
        self.side.sign()
    }
}

#[derive(Debug, Clone)]
pub struct SpaceTimeMesh {
    pub dim: usize,
    pub origin: [f64; 2],
    pub extent: [f64; 2],
    pub thickness: f64,
    pub t_end: f64,
    pub slab_length: f64,
    pub n_slabs: usize,
    pub subdomains: Vec<Subdomain>,
    /// Time levels per slab for each subdomain.
    pub levels: Vec<usize>,
    pub cells: Vec<Cell>,
    pub cell_offset: Vec<usize>,
    pub elements: Vec<Element>,
    /// First element of each (subdomain, level) block.
    pub block_offset: Vec<Vec<usize>>,
    pub faces: Vec<Face>,
    pub patches: Vec<InterfacePatch>,
    element_faces: Vec<Vec<ElementFace>>,
}

fn close(a: f64, b: f64, scale: f64) -> bool {
    (a - b).abs() <= GEOM_TOL * scale.max(1.0)
}

fn integer_ratio(num: f64, den: f64) -> Option<usize> {
    let r = num / den;
    let k = r.round();
    if k >= 1.0 && (r - k).abs() <= 1e-9 * k {
        Some(k as usize)
    } else {
        None
    }
}

fn validate_subdomain(dim: usize, s: &Subdomain) -> Result<()> {
    let id = s.id;
    for axis in 0..dim {
        if s.cells[axis] == 0 {
            return Err(Error::config(format!("subdomain {id}: zero cells along axis {axis}")));
        }
        if !(s.extent[axis] > 0.0) {
            return Err(Error::config(format!("subdomain {id}: non-positive extent along axis {axis}")));
        }
    }
    if dim == 1 && s.cells[1] != 1 {
        return Err(Error::config(format!("subdomain {id}: a 1D subdomain has exactly one cell along y")));
    }
    if !(s.dt > 0.0) {
        return Err(Error::config(format!("subdomain {id}: non-positive dt")));
    }
    let n = s.num_cells();
    if s.permeability.len() != n || s.porosity.len() != n {
        return Err(Error::config(format!(
            "subdomain {id}: material arrays must have {n} entries (permeability {}, porosity {})",
            s.permeability.len(),
            s.porosity.len()
        )));
    }
    for (k, kk) in s.permeability.iter().enumerate() {
        if kk[..dim].iter().any(|v| !(*v > 0.0) || !v.is_finite()) {
            return Err(Error::config(format!("subdomain {id}: permeability of cell {k} must be positive")));
        }
    }
    for (k, phi) in s.porosity.iter().enumerate() {
        if !(*phi > 0.0 && *phi <= 1.0) {
            return Err(Error::config(format!("subdomain {id}: porosity of cell {k} must lie in (0, 1]")));
        }
    }
    Ok(())
}

/// Build the space-time multiblock mesh, its faces and interface patches.
pub fn build_mesh(spec: &MeshSpec) -> Result<SpaceTimeMesh> {
    let dim = spec.dim;
    if !(1..=2).contains(&dim) {
        return Err(Error::config(format!("spatial dimension must be 1 or 2, got {dim}")));
    }
    if !(spec.thickness > 0.0) {
        return Err(Error::config("thickness must be positive"));
    }
    if !(spec.t_end > 0.0) {
        return Err(Error::config("t_end must be positive"));
    }
    for axis in 0..dim {
        if !(spec.extent[axis] > 0.0) {
            return Err(Error::config(format!("domain extent along axis {axis} must be positive")));
        }
    }
    if spec.subdomains.is_empty() {
        return Err(Error::config("at least one subdomain is required"));
    }
    for (i, s) in spec.subdomains.iter().enumerate() {
        if s.id != i {
            return Err(Error::config(format!("subdomain ids must be consecutive from 0 (found {} at {i})", s.id)));
        }
        validate_subdomain(dim, s)?;
    }
    let scale = (0..dim).map(|a| spec.extent[a]).fold(0.0, f64::max);

    // containment
    for s in &spec.subdomains {
        for axis in 0..dim {
            let lo = spec.origin[axis];
            let hi = lo + spec.extent[axis];
            if s.origin[axis] < lo - GEOM_TOL * scale || s.upper(axis) > hi + GEOM_TOL * scale {
                return Err(Error::config(format!("subdomain {} extends outside the global domain", s.id)));
            }
        }
    }
    // overlaps
    for (i, a) in spec.subdomains.iter().enumerate() {
        for b in &spec.subdomains[i + 1..] {
            let mut vol = 1.0;
            for axis in 0..dim {
                let len = a.upper(axis).min(b.upper(axis)) - a.origin[axis].max(b.origin[axis]);
                vol *= len.max(0.0);
            }
            if vol > GEOM_TOL * scale.powi(dim as i32) {
                return Err(Error::config(format!("overlap detected between subdomains {} and {}", a.id, b.id)));
            }
        }
    }
    // coverage
    let domain_vol: f64 = (0..dim).map(|a| spec.extent[a]).product();
    let covered: f64 = spec
        .subdomains
        .iter()
        .map(|s| (0..dim).map(|a| s.extent[a]).product::<f64>())
        .sum();
    if (covered - domain_vol).abs() > 1e-9 * domain_vol {
        return Err(Error::config(format!(
            "gap detected: subdomains cover {covered} of the domain measure {domain_vol}"
        )));
    }

    // matching slabs
    let slab_length = spec.subdomains.iter().map(|s| s.dt).fold(0.0, f64::max);
    let mut levels = Vec::with_capacity(spec.subdomains.len());
    for s in &spec.subdomains {
        let l = integer_ratio(slab_length, s.dt).ok_or_else(|| {
            Error::config(format!(
                "subdomain {}: dt {} does not divide the matching slab length {slab_length}",
                s.id, s.dt
            ))
        })?;
        levels.push(l);
    }
    let n_slabs = integer_ratio(spec.t_end, slab_length).ok_or_else(|| {
        Error::config(format!("t_end {} is not a multiple of the slab length {slab_length}", spec.t_end))
    })?;

    // cells
    let transverse = |s: &Subdomain, axis: usize| -> f64 {
        let mut a = spec.thickness;
        for t in 0..dim {
            if t != axis {
                a *= s.cell_size(t);
            }
        }
        a
    };
    let mut cells = Vec::new();
    let mut cell_offset = Vec::new();
    for s in &spec.subdomains {
        cell_offset.push(cells.len());
        let mut size = [1.0; 2];
        for axis in 0..dim {
            size[axis] = s.cell_size(axis);
        }
        let volume = spec.thickness * (0..dim).map(|a| size[a]).product::<f64>();
        for k in 0..s.num_cells() {
            let index = s.unlex(k);
            let mut center = [0.0; 2];
            for axis in 0..dim {
                center[axis] = s.origin[axis] + (index[axis] as f64 + 0.5) * size[axis];
            }
            cells.push(Cell {
                subdomain: s.id,
                index,
                center,
                size,
                volume,
                permeability: s.permeability[k],
                porosity: s.porosity[k],
            });
        }
    }

    // elements, time-major: blocks of one subdomain level ordered by end time
    let level_end = |si: usize, level: usize| -> f64 {
        if level + 1 == levels[si] {
            slab_length
        } else {
            (level + 1) as f64 * spec.subdomains[si].dt
        }
    };
    let mut blocks: Vec<(usize, usize)> = Vec::new();
    for si in 0..spec.subdomains.len() {
        for level in 0..levels[si] {
            blocks.push((si, level));
        }
    }
    blocks.sort_by(|a, b| level_end(a.0, a.1).total_cmp(&level_end(b.0, b.1)).then(a.0.cmp(&b.0)));
    let mut block_offset: Vec<Vec<usize>> = levels.iter().map(|&l| vec![0; l]).collect();
    let mut elements = Vec::new();
    for &(si, level) in &blocks {
        let s = &spec.subdomains[si];
        block_offset[si][level] = elements.len();
        let t_lo = level as f64 * s.dt;
        let t_hi = level_end(si, level);
        for k in 0..s.num_cells() {
            let cell = cell_offset[si] + k;
            let volume = cells[cell].volume;
            elements.push(Element {
                subdomain: si,
                cell,
                level,
                t_lo,
                t_hi,
                volume,
                measure: volume * (t_hi - t_lo),
                prev: if level == 0 { None } else { Some(block_offset[si][level - 1] + k) },
            });
        }
    }

    let elem_id = |si: usize, level: usize, index: [usize; 2]| -> usize {
        block_offset[si][level] + spec.subdomains[si].lex(index)
    };

    // subdomain-internal and outer-boundary faces
    let mut faces = Vec::new();
    for &(si, level) in &blocks {
        let s = &spec.subdomains[si];
        {
            let t_lo = level as f64 * s.dt;
            let t_hi = level_end(si, level);
            for axis in 0..dim {
                let ta = 1 - axis;
                let n_t = if dim == 2 { s.cells[ta] } else { 1 };
                let n_a = s.cells[axis];
                let area = transverse(s, axis);
                let h = s.cell_size(axis);
                for j in 0..n_t {
                    for pos in 0..=n_a {
                        let mut center = [0.0; 2];
                        center[axis] = s.node(axis, pos);
                        if dim == 2 {
                            center[ta] = s.origin[ta] + (j as f64 + 0.5) * s.cell_size(ta);
                        }
                        let cell_at = |p: usize| {
                            let mut idx = [0usize; 2];
                            idx[axis] = p;
                            if dim == 2 {
                                idx[ta] = j;
                            }
                            idx
                        };
                        let on_lo = pos == 0;
                        let on_hi = pos == n_a;
                        let kind = if !on_lo && !on_hi {
                            FaceKind::Interior
                        } else {
                            let x = center[axis];
                            let glo = spec.origin[axis];
                            let ghi = glo + spec.extent[axis];
                            if on_lo && close(x, glo, scale) {
                                FaceKind::Boundary(BoundarySide { axis, side: Side::Min })
                            } else if on_hi && close(x, ghi, scale) {
                                FaceKind::Boundary(BoundarySide { axis, side: Side::Max })
                            } else {
                                continue;
                            }
                        };
                        let minus = (pos > 0).then(|| elem_id(si, level, cell_at(pos - 1)));
                        let plus = (pos < n_a).then(|| elem_id(si, level, cell_at(pos)));
                        faces.push(Face {
                            axis,
                            minus,
                            plus,
                            h_minus: minus.map(|_| h),
                            h_plus: plus.map(|_| h),
                            area,
                            t_lo,
                            t_hi,
                            center,
                            kind,
                        });
                    }
                }
            }
        }
    }

    // interface patches
    let mut patches = Vec::new();
    for i in 0..spec.subdomains.len() {
        for j in i + 1..spec.subdomains.len() {
            let mut patch = intersect_traces(
                &spec.subdomains[i],
                &spec.subdomains[j],
                dim,
                spec.thickness,
                slab_length,
            )?;
            if patch.subfaces.is_empty() {
                continue;
            }
            let pid = patches.len();
            let (ms, ps) = (patch.minus, patch.plus);
            let axis = patch.axis;
            for sf in patch.subfaces.iter_mut() {
                let minus = elem_id(ms, sf.minus_level, sf.minus_cell);
                let plus = elem_id(ps, sf.plus_level, sf.plus_cell);
                let mut center = [0.0; 2];
                center[axis] = patch.position;
                if dim == 2 {
                    center[1 - axis] = 0.5 * (sf.tangential.0 + sf.tangential.1);
                }
                sf.face = faces.len();
                faces.push(Face {
                    axis,
                    minus: Some(minus),
                    plus: Some(plus),
                    h_minus: Some(spec.subdomains[ms].cell_size(axis)),
                    h_plus: Some(spec.subdomains[ps].cell_size(axis)),
                    area: sf.area,
                    t_lo: sf.time.0,
                    t_hi: sf.time.1,
                    center,
                    kind: FaceKind::Interface { patch: pid },
                });
            }
            patches.push(patch);
        }
    }

    // every interior subdomain side must be fully covered by patches
    for s in &spec.subdomains {
        for axis in 0..dim {
            for side in [Side::Min, Side::Max] {
                let x = if side == Side::Min { s.origin[axis] } else { s.upper(axis) };
                let glo = spec.origin[axis];
                if close(x, glo, scale) || close(x, glo + spec.extent[axis], scale) {
                    continue;
                }
                let want = if dim == 2 { s.extent[1 - axis] } else { 1.0 };
                let got: f64 = patches
                    .iter()
                    .filter(|p| {
                        p.axis == axis
                            && ((side == Side::Max && p.minus == s.id) || (side == Side::Min && p.plus == s.id))
                    })
                    .map(|p| p.tangential_length())
                    .sum();
                if (got - want).abs() > 1e-9 * want.max(scale) {
                    return Err(Error::config(format!(
                        "gap detected: side {} of subdomain {} is only covered over {got} of {want}",
                        BoundarySide { axis, side }.name(),
                        s.id
                    )));
                }
            }
        }
    }

    let mut element_faces = vec![Vec::new(); elements.len()];
    for (fi, f) in faces.iter().enumerate() {
        if let Some(m) = f.minus {
            element_faces[m].push(ElementFace { face: fi, axis: f.axis, side: Side::Max });
        }
        if let Some(p) = f.plus {
            element_faces[p].push(ElementFace { face: fi, axis: f.axis, side: Side::Min });
        }
    }

    Ok(SpaceTimeMesh {
        dim,
        origin: spec.origin,
        extent: spec.extent,
        thickness: spec.thickness,
        t_end: spec.t_end,
        slab_length,
        n_slabs,
        subdomains: spec.subdomains.clone(),
        levels,
        cells,
        cell_offset,
        elements,
        block_offset,
        faces,
        patches,
        element_faces,
    })
}

impl SpaceTimeMesh {
    pub fn n_elements(&self) -> usize {
        self.elements.len()
    }

    pub fn n_faces(&self) -> usize {
        self.faces.len()
    }

    /// Elements over the whole time interval (all slabs).
    pub fn total_elements(&self) -> usize {
        self.elements.len() * self.n_slabs
    }

    pub fn slab_start(&self, slab: usize) -> f64 {
        slab as f64 * self.slab_length
    }

    pub fn element_id(&self, subdomain: usize, level: usize, index: [usize; 2]) -> usize {
        self.block_offset[subdomain][level] + self.subdomains[subdomain].lex(index)
    }

    pub fn cell_id(&self, subdomain: usize, index: [usize; 2]) -> usize {
        self.cell_offset[subdomain] + self.subdomains[subdomain].lex(index)
    }

    /// Element of `cell` at the last time level of the slab.
    pub fn final_element(&self, cell: usize) -> usize {
        let s = self.cells[cell].subdomain;
        self.block_offset[s][self.levels[s] - 1] + (cell - self.cell_offset[s])
    }

    pub fn element_faces(&self, element: usize) -> &[ElementFace] {
        &self.element_faces[element]
    }

    /// Faces on one side of an element; several on a subdivided interface side.
    pub fn side_faces(&self, element: usize, axis: usize, side: Side) -> impl Iterator<Item = usize> + '_ {
        self.element_faces[element]
            .iter()
            .filter(move |ef| ef.axis == axis && ef.side == side)
            .map(|ef| ef.face)
    }

    /// The face on the given element side containing the tangential coordinate
    /// and relative time `t`.
    pub fn face_lookup(&self, element: usize, axis: usize, side: Side, tangential: f64, t: f64) -> Option<usize> {
        let tol = GEOM_TOL * self.slab_length.max(1.0);
        self.side_faces(element, axis, side).find(|&fi| {
            let f = &self.faces[fi];
            let in_time = t >= f.t_lo - tol && t <= f.t_hi + tol;
            let in_space = if self.dim == 2 {
                let ta = 1 - axis;
                let half = 0.5 * f.area / self.thickness;
                (tangential - f.center[ta]).abs() <= half * (1.0 + 1e-9)
            } else {
                true
            };
            in_time && in_space
        })
    }

    /// Cell containing the spatial point, first subdomain wins on shared edges.
    pub fn locate(&self, x: [f64; 2]) -> Option<usize> {
        let eps = GEOM_TOL * self.extent[0].max(self.extent[1]).max(1.0);
        let s = self.subdomains.iter().find(|s| {
            (0..self.dim).all(|a| x[a] >= s.origin[a] - eps && x[a] <= s.upper(a) + eps)
        })?;
        let index = [s.cell_containing(0, x[0]), if self.dim == 2 { s.cell_containing(1, x[1]) } else { 0 }];
        Some(self.cell_id(s.id, index))
    }

    pub fn domain_measure(&self) -> f64 {
        self.thickness * (0..self.dim).map(|a| self.extent[a]).product::<f64>()
    }

    /// Per-interface time refinement ratio `l`.
    pub fn validate_matching_times(&self) -> Result<Vec<usize>> {
        validate_matching_times(self)
    }

    /// A subdomain counts as refined when it is finer than the coarsest
    /// subdomain in time or in any spatial direction.
    pub fn is_refined(&self, subdomain: usize) -> bool {
        let s = &self.subdomains[subdomain];
        if s.dt < self.slab_length * (1.0 - 1e-9) {
            return true;
        }
        (0..self.dim).any(|a| {
            let coarsest = self.subdomains.iter().map(|o| o.cell_size(a)).fold(0.0, f64::max);
            s.cell_size(a) < coarsest * (1.0 - 1e-9)
        })
    }
}

/// Check time-grid alignment and return `l = dt_coarse / dt_fine` per interface patch.
pub fn validate_matching_times(mesh: &SpaceTimeMesh) -> Result<Vec<usize>> {
    let l_slab = mesh.slab_length;
    for s in &mesh.subdomains {
        if integer_ratio(l_slab, s.dt).is_none() {
            return Err(Error::config(format!(
                "subdomain {}: time grid does not align with slab boundaries",
                s.id
            )));
        }
    }
    mesh.patches
        .iter()
        .map(|p| {
            let a = mesh.subdomains[p.minus].dt;
            let b = mesh.subdomains[p.plus].dt;
            integer_ratio(a.max(b), a.min(b)).ok_or_else(|| {
                Error::config(format!(
                    "interface {}-{}: time steps {a} and {b} have a non-integer ratio",
                    p.minus, p.plus
                ))
            })
        })
        .collect()
}
