//! Elimination of the flux unknowns, face by face.
//!
//! With `A_uu` block diagonal per face, the reduced matrix
//! `S = A_pp - A_pu A_uu^{-1} A_up` is assembled from local products and the
//! fluxes are recovered afterwards from their own rows.

use super::system::SlabSystem;
use crate::error::{Error, Result};

#[derive(Debug, Clone)]
pub struct ReducedSystem {
    pub n: usize,
    /// Entries of `S`, duplicates not merged.
    pub triplets: Vec<(usize, usize, f64)>,
    /// `-r_p + A_pu A_uu^{-1} r_u`.
    pub rhs: Vec<f64>,
    /// Inverse of every face block, row-major.
    pub inv_uu: Vec<f64>,
}

/// Gauss-Jordan inverse with partial pivoting; `None` when singular.
pub fn invert_block(a: &[f64], n: usize) -> Option<Vec<f64>> {
    let scale = a.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    if scale == 0.0 || !scale.is_finite() {
        return None;
    }
    let mut m = a.to_vec();
    let mut inv = vec![0.0; n * n];
    for i in 0..n {
        inv[i * n + i] = 1.0;
    }
    for col in 0..n {
        let piv = (col..n).max_by(|&i, &j| m[i * n + col].abs().total_cmp(&m[j * n + col].abs()))?;
        if m[piv * n + col].abs() <= 1e-14 * scale {
            return None;
        }
        if piv != col {
            for k in 0..n {
                m.swap(piv * n + k, col * n + k);
                inv.swap(piv * n + k, col * n + k);
            }
        }
        let d = m[col * n + col];
        for k in 0..n {
            m[col * n + k] /= d;
            inv[col * n + k] /= d;
        }
        for i in 0..n {
            if i != col {
                let f = m[i * n + col];
                if f != 0.0 {
                    for k in 0..n {
                        m[i * n + k] -= f * m[col * n + k];
                        inv[i * n + k] -= f * inv[col * n + k];
                    }
                }
            }
        }
    }
    Some(inv)
}

fn face_inverses(sys: &SlabSystem) -> Result<Vec<f64>> {
    let nfam = sys.n_families;
    let mut inv = Vec::with_capacity(sys.a_uu.len());
    for f in 0..sys.n_faces {
        let b = invert_block(sys.uu_block(f), nfam).ok_or_else(|| Error::Elimination {
            face: f,
            detail: format!("singular {nfam}x{nfam} flux block"),
        })?;
        inv.extend_from_slice(&b);
    }
    Ok(inv)
}

/// `A_uu^{-1} r_u` on every face.
pub fn scaled_flux_residual(sys: &SlabSystem, inv_uu: &[f64]) -> Vec<f64> {
    let nfam = sys.n_families;
    let mut out = vec![0.0; sys.n_flux()];
    for f in 0..sys.n_faces {
        let inv = &inv_uu[f * nfam * nfam..(f + 1) * nfam * nfam];
        let r = &sys.r_u[f * nfam..(f + 1) * nfam];
        for i in 0..nfam {
            out[f * nfam + i] = (0..nfam).map(|j| inv[i * nfam + j] * r[j]).sum();
        }
    }
    out
}

pub fn schur_reduce(sys: &SlabSystem) -> Result<ReducedSystem> {
    let nfam = sys.n_families;
    let inv_uu = face_inverses(sys)?;
    let w = scaled_flux_residual(sys, &inv_uu);
    let mut triplets = sys.a_pp.clone();
    let mut rhs: Vec<f64> = sys.r_p.iter().map(|v| -v).collect();
    let mut g = Vec::new();
    for f in 0..sys.n_faces {
        let inv = &inv_uu[f * nfam * nfam..(f + 1) * nfam * nfam];
        let pu = &sys.a_pu[f];
        let up = &sys.a_up[f];
        for &(cr, j, v) in pu {
            rhs[cr] += v * w[f * nfam + j];
        }
        if up.is_empty() {
            continue;
        }
        // g_k = sum_j A_pu[cr, j] inv[j, k] for each pu entry
        for &(cr, j, v) in pu {
            g.clear();
            g.extend((0..nfam).map(|k| v * inv[j * nfam + k]));
            for &(k, cc, a) in up {
                let s = g[k] * a;
                if s != 0.0 {
                    triplets.push((cr, cc, -s));
                }
            }
        }
    }
    Ok(ReducedSystem { n: sys.n_cell(), triplets, rhs, inv_uu })
}

/// Flux updates `du_f = A_uu^{-1} (-r_u - A_up dp)` from the cell update `dp`.
pub fn recover_fluxes(sys: &SlabSystem, red: &ReducedSystem, dp: &[f64]) -> Vec<f64> {
    let nfam = sys.n_families;
    let mut du = vec![0.0; sys.n_flux()];
    let mut rhs = vec![0.0; nfam];
    for f in 0..sys.n_faces {
        for (i, r) in rhs.iter_mut().enumerate() {
            *r = -sys.r_u[f * nfam + i];
        }
        for &(i, c, v) in &sys.a_up[f] {
            rhs[i] -= v * dp[c];
        }
        let inv = &red.inv_uu[f * nfam * nfam..(f + 1) * nfam * nfam];
        for i in 0..nfam {
            du[f * nfam + i] = (0..nfam).map(|j| inv[i * nfam + j] * rhs[j]).sum();
        }
    }
    du
}
