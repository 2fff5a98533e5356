//! Manufactured solution of the unit-coefficient heat equation on the unit square.

use std::f64::consts::PI;

/// `p = e^{c1 t} sin(2 pi x) sin(2 pi y)` and the matching forcing
/// `f = (c1 + 8 pi^2) p`.
pub fn manufactured_solution(x: f64, y: f64, t: f64, c1: f64) -> (f64, f64) {
    let p = (c1 * t).exp() * (2.0 * PI * x).sin() * (2.0 * PI * y).sin();
    (p, (c1 + 8.0 * PI * PI) * p)
}
