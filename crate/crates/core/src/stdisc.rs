//! Lowest-order space-time kernels: RT0 fluxes, piecewise-constant cell
//! unknowns, backward-Euler jump in time.
//!
//! Flux unknowns are integrated over their space-time face, so the flux basis
//! function of a face takes the value `1/|e|` there. Under the trapezoid rule
//! along the flux axis and the midpoint rule elsewhere (and in time), the flux
//! mass matrix is diagonal and each face contributes one coefficient.

use crate::error::{Error, Result};
use crate::stmesh::{Element, Face, SpaceTimeMesh};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Rule {
    Trapezoid,
    Midpoint,
}

/// Quadrature used to integrate the flux mass term of one velocity component.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct QuadratureRule {
    pub space: [Rule; 2],
    pub time: Rule,
}

impl QuadratureRule {
    pub fn for_component(axis: usize) -> Self {
        let mut space = [Rule::Midpoint; 2];
        space[axis] = Rule::Trapezoid;
        QuadratureRule { space, time: Rule::Midpoint }
    }

    pub fn trapezoid_axes(&self, dim: usize) -> usize {
        self.space[..dim].iter().filter(|r| **r == Rule::Trapezoid).count()
    }
}

/// Value of a face's own flux basis function on that face.
pub fn flux_basis_on_face(face: &Face) -> f64 {
    1.0 / face.measure()
}

/// Sparse row with duplicate columns merged.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct AssemblyRow {
    pub row: usize,
    pub entries: Vec<(usize, f64)>,
    pub constant: f64,
}

impl AssemblyRow {
    pub fn new(row: usize) -> Self {
        AssemblyRow { row, entries: Vec::new(), constant: 0.0 }
    }

    pub fn add(&mut self, col: usize, v: f64) {
        match self.entries.iter_mut().find(|(c, _)| *c == col) {
            Some(e) => e.1 += v,
            None => self.entries.push((col, v)),
        }
    }

    pub fn coeff(&self, col: usize) -> f64 {
        self.entries.iter().find(|(c, _)| *c == col).map_or(0.0, |e| e.1)
    }

    pub fn is_finite(&self) -> bool {
        self.constant.is_finite() && self.entries.iter().all(|(_, v)| v.is_finite())
    }
}

/// Diagonal flux mass coefficient `(1/(2|e|)) (h_m/k_m + h_p/k_p)`.
///
/// One-sided on boundary faces. `face_id` is only used for error messages.
pub fn velocity_mass_coeff(face: &Face, face_id: usize, coeff_minus: Option<f64>, coeff_plus: Option<f64>) -> Result<f64> {
    let mut s = 0.0;
    for (h, k) in [(face.h_minus, coeff_minus), (face.h_plus, coeff_plus)] {
        if let Some(h) = h {
            let k = k.ok_or_else(|| Error::SingularCoefficient {
                face: face_id,
                detail: "missing coefficient for an adjacent cell".into(),
            })?;
            if k == 0.0 || !k.is_finite() {
                return Err(Error::SingularCoefficient { face: face_id, detail: format!("coefficient {k}") });
            }
            s += h / k;
        }
    }
    Ok(s / (2.0 * face.measure()))
}

/// Pressure difference pattern of a Darcy row: `+1` on the minus element,
/// `-1` on the plus element. For an interface sub-face the elements are the
/// ones whose time levels contain the sub-face.
pub fn pressure_divergence_row(face: &Face) -> Option<[(usize, f64); 2]> {
    match (face.minus, face.plus) {
        (Some(m), Some(p)) => Some([(m, 1.0), (p, -1.0)]),
        _ => None,
    }
}

/// Dirichlet datum at the face space-time midpoint; `t0` is the slab start.
pub fn boundary_term(face: &Face, t0: f64, g: impl Fn([f64; 2], f64) -> f64) -> f64 {
    g(face.center, t0 + face.t_mid())
}

/// Weight of the backward-Euler jump `(v - v_prev) * weight` in a conservation
/// row: the spatial measure of the element, so that it carries the same units
/// as the integrated fluxes.
pub fn accumulation_weight(element: &Element) -> f64 {
    element.volume
}

pub fn accumulation_row(element: &Element, current: f64, previous: f64) -> f64 {
    (current - previous) * accumulation_weight(element)
}

/// Signed flux faces of an element, every interface sub-face of a subdivided
/// side included.
pub fn flux_divergence_row(mesh: &SpaceTimeMesh, element: usize) -> Vec<(usize, f64)> {
    mesh.element_faces(element).iter().map(|ef| (ef.face, ef.sign())).collect()
}

/// `f_mid * |E|`.
pub fn source_row(element: &Element, f_mid: f64) -> f64 {
    f_mid * element.measure
}
