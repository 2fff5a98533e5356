//! Residual and Jacobian of one matching slab, stored by block.
//!
//! Flux-flux coupling only ever occurs between the families of one face, so
//! `A_uu` is a dense `nfam × nfam` block per face. The flux-cell couplings are
//! bucketed per face so that the flux unknowns can be eliminated face by face.

use crate::stmesh::DofMap;

#[derive(Debug, Clone)]
pub struct SlabSystem {
    pub n_faces: usize,
    pub n_families: usize,
    pub n_elements: usize,
    pub n_fields: usize,
    pub r_u: Vec<f64>,
    pub r_p: Vec<f64>,
    /// Row-major `nfam × nfam` block per face.
    pub a_uu: Vec<f64>,
    /// Per face: (family row, cell column, value).
    pub a_up: Vec<Vec<(usize, usize, f64)>>,
    /// Per face: (cell row, family column, value).
    pub a_pu: Vec<Vec<(usize, usize, f64)>>,
    /// Cell-cell triplets; duplicates are summed.
    pub a_pp: Vec<(usize, usize, f64)>,
}

impl SlabSystem {
    pub fn new(map: &DofMap) -> Self {
        let nfam = map.layout.n_families();
        SlabSystem {
            n_faces: map.n_faces,
            n_families: nfam,
            n_elements: map.n_elements,
            n_fields: map.layout.n_fields(),
            r_u: vec![0.0; map.n_flux()],
            r_p: vec![0.0; map.n_cell()],
            a_uu: vec![0.0; map.n_faces * nfam * nfam],
            a_up: vec![Vec::new(); map.n_faces],
            a_pu: vec![Vec::new(); map.n_faces],
            a_pp: Vec::new(),
        }
    }

    pub fn n_flux(&self) -> usize {
        self.r_u.len()
    }

    pub fn n_cell(&self) -> usize {
        self.r_p.len()
    }

    pub fn len(&self) -> usize {
        self.n_flux() + self.n_cell()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn clear(&mut self) {
        self.r_u.iter_mut().for_each(|v| *v = 0.0);
        self.r_p.iter_mut().for_each(|v| *v = 0.0);
        self.a_uu.iter_mut().for_each(|v| *v = 0.0);
        self.a_up.iter_mut().for_each(Vec::clear);
        self.a_pu.iter_mut().for_each(Vec::clear);
        self.a_pp.clear();
    }

    pub fn add_residual(&mut self, row: usize, v: f64) {
        let nu = self.n_flux();
        if row < nu {
            self.r_u[row] += v;
        } else {
            self.r_p[row - nu] += v;
        }
    }

    /// Add a Jacobian entry addressed by global slab DOFs.
    pub fn add(&mut self, row: usize, col: usize, v: f64) {
        let nu = self.n_flux();
        let nfam = self.n_families;
        match (row < nu, col < nu) {
            (true, true) => {
                let f = row / nfam;
                assert_eq!(f, col / nfam, "flux rows only couple fluxes of their own face");
                self.a_uu[f * nfam * nfam + (row % nfam) * nfam + col % nfam] += v;
            }
            (true, false) => self.a_up[row / nfam].push((row % nfam, col - nu, v)),
            (false, true) => self.a_pu[col / nfam].push((row - nu, col % nfam, v)),
            (false, false) => self.a_pp.push((row - nu, col - nu, v)),
        }
    }

    pub fn uu_block(&self, face: usize) -> &[f64] {
        let b = self.n_families * self.n_families;
        &self.a_uu[face * b..(face + 1) * b]
    }

    pub fn residual(&self) -> Vec<f64> {
        let mut r = self.r_u.clone();
        r.extend_from_slice(&self.r_p);
        r
    }

    /// All Jacobian entries in global numbering (duplicates not merged).
    pub fn triplets(&self) -> Vec<(usize, usize, f64)> {
        let nfam = self.n_families;
        let nu = self.n_flux();
        let mut t = Vec::new();
        for f in 0..self.n_faces {
            let blk = self.uu_block(f);
            for i in 0..nfam {
                for j in 0..nfam {
                    let v = blk[i * nfam + j];
                    if v != 0.0 {
                        t.push((f * nfam + i, f * nfam + j, v));
                    }
                }
            }
            for &(i, c, v) in &self.a_up[f] {
                t.push((f * nfam + i, nu + c, v));
            }
            for &(c, j, v) in &self.a_pu[f] {
                t.push((nu + c, f * nfam + j, v));
            }
        }
        for &(i, j, v) in &self.a_pp {
            t.push((nu + i, nu + j, v));
        }
        t
    }

    /// Dense row-major Jacobian; intended for small systems.
    pub fn dense(&self) -> Vec<f64> {
        let n = self.len();
        let mut a = vec![0.0; n * n];
        for (i, j, v) in self.triplets() {
            a[i * n + j] += v;
        }
        a
    }

    pub fn is_finite(&self) -> bool {
        self.r_u.iter().chain(&self.r_p).chain(&self.a_uu).all(|v| v.is_finite())
            && self.a_up.iter().flatten().all(|e| e.2.is_finite())
            && self.a_pu.iter().flatten().all(|e| e.2.is_finite())
            && self.a_pp.iter().all(|e| e.2.is_finite())
    }
}
