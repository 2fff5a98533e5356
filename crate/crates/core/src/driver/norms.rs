//! Discrete space-time L2 error.

use crate::solver::SimulationState;
use crate::stmesh::SpaceTimeMesh;

/// `sqrt(sum_E (p_exact(mid E) - P_E)^2 |E|)` over all slabs, split into
/// coarse and refined subdomains. Field 0 is compared.
pub fn l2_spacetime_error(
    mesh: &SpaceTimeMesh,
    state: &SimulationState,
    exact: impl Fn(f64, f64, f64) -> f64,
) -> (f64, f64) {
    let refined: Vec<bool> = (0..mesh.subdomains.len()).map(|s| mesh.is_refined(s)).collect();
    let (mut coarse, mut fine) = (0.0, 0.0);
    for (slab, _) in state.slabs.iter().enumerate() {
        let t0 = mesh.slab_start(slab);
        for (ei, e) in mesh.elements.iter().enumerate() {
            let c = &mesh.cells[e.cell];
            let d = exact(c.center[0], c.center[1], t0 + e.t_mid()) - state.value(slab, ei, 0);
            let w = d * d * e.measure;
            if refined[e.subdomain] {
                fine += w;
            } else {
                coarse += w;
            }
        }
    }
    (coarse.sqrt(), fine.sqrt())
}

/// Square root of a weighted sum of squares.
pub fn weighted_l2(diffs: &[f64], weights: &[f64]) -> f64 {
    diffs.iter().zip(weights).map(|(d, w)| d * d * w).sum::<f64>().sqrt()
}
