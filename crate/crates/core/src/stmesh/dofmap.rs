//! Unknown numbering for one slab.
//!
//! Flux unknowns come first, face-major with the families of a face adjacent,
//! followed by cell unknowns, element-major with the fields of an element
//! adjacent. Flux blocks of one face are then contiguous, which the Schur
//! elimination relies on.

use serde::Serialize;

use super::{FaceKind, SpaceTimeMesh};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FieldLayout {
    pub cell_fields: Vec<&'static str>,
    pub flux_families: Vec<&'static str>,
}

impl FieldLayout {
    pub fn pressure() -> Self {
        FieldLayout { cell_fields: vec!["p"], flux_families: vec!["u"] }
    }

    pub fn tracer() -> Self {
        FieldLayout { cell_fields: vec!["p", "c"], flux_families: vec!["u", "z"] }
    }

    pub fn two_phase() -> Self {
        FieldLayout {
            cell_fields: vec!["p_o", "s_w"],
            flux_families: vec!["u_w", "u_o", "ut_w", "ut_o"],
        }
    }

    pub fn n_fields(&self) -> usize {
        self.cell_fields.len()
    }

    pub fn n_families(&self) -> usize {
        self.flux_families.len()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct DofCounts {
    pub interior_fluxes: usize,
    pub boundary_fluxes: usize,
    pub interface_fluxes: usize,
    pub cell_unknowns: usize,
}

impl DofCounts {
    pub fn fluxes(&self) -> usize {
        self.interior_fluxes + self.boundary_fluxes + self.interface_fluxes
    }

    pub fn total(&self) -> usize {
        self.fluxes() + self.cell_unknowns
    }

    pub fn scaled(&self, k: usize) -> DofCounts {
        DofCounts {
            interior_fluxes: self.interior_fluxes * k,
            boundary_fluxes: self.boundary_fluxes * k,
            interface_fluxes: self.interface_fluxes * k,
            cell_unknowns: self.cell_unknowns * k,
        }
    }
}

#[derive(Debug, Clone)]
pub struct DofMap {
    pub layout: FieldLayout,
    pub n_elements: usize,
    pub n_faces: usize,
    /// Counts for one slab.
    pub counts: DofCounts,
    /// Counts over all slabs.
    pub total: DofCounts,
}

impl DofMap {
    pub fn n_flux(&self) -> usize {
        self.n_faces * self.layout.n_families()
    }

    pub fn n_cell(&self) -> usize {
        self.n_elements * self.layout.n_fields()
    }

    pub fn len(&self) -> usize {
        self.n_flux() + self.n_cell()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn flux_dof(&self, face: usize, family: usize) -> usize {
        face * self.layout.n_families() + family
    }

    /// Index among cell unknowns, without the flux offset.
    pub fn cell_local(&self, element: usize, field: usize) -> usize {
        element * self.layout.n_fields() + field
    }

    pub fn cell_dof(&self, element: usize, field: usize) -> usize {
        self.n_flux() + self.cell_local(element, field)
    }

    pub fn describe(&self, dof: usize) -> String {
        if dof < self.n_flux() {
            let nf = self.layout.n_families();
            format!("flux {} on face {}", self.layout.flux_families[dof % nf], dof / nf)
        } else {
            let k = dof - self.n_flux();
            let nf = self.layout.n_fields();
            format!("{} on element {}", self.layout.cell_fields[k % nf], k / nf)
        }
    }
}

/// Number the unknowns of one slab for the given field layout.
pub fn enumerate_dofs(mesh: &SpaceTimeMesh, layout: FieldLayout) -> DofMap {
    let nfam = layout.n_families();
    let mut counts = DofCounts {
        interior_fluxes: 0,
        boundary_fluxes: 0,
        interface_fluxes: 0,
        cell_unknowns: mesh.n_elements() * layout.n_fields(),
    };
    for f in &mesh.faces {
        match f.kind {
            FaceKind::Interior => counts.interior_fluxes += nfam,
            FaceKind::Boundary(_) => counts.boundary_fluxes += nfam,
            FaceKind::Interface { .. } => counts.interface_fluxes += nfam,
        }
    }
    DofMap {
        n_elements: mesh.n_elements(),
        n_faces: mesh.n_faces(),
        total: counts.scaled(mesh.n_slabs),
        counts,
        layout,
    }
}
