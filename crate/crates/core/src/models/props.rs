//! Fluid and rock property curves with their derivatives.

use serde::{Deserialize, Serialize};

/// Conversion factors applied in Darcy rows and well rates.
///
/// `darcy` multiplies `K/mu` to give a volumetric flux; `rate_to_volume`
/// converts well rates from input units to flux volume units per time.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct UnitSystem {
    pub darcy: f64,
    pub rate_to_volume: f64,
}

/// Cubic feet per stock-tank barrel.
pub const FT3_PER_BBL: f64 = 5.614583;

impl UnitSystem {
    /// Dimensionless consistent units.
    pub fn consistent() -> Self {
        UnitSystem { darcy: 1.0, rate_to_volume: 1.0 }
    }

    /// psi, ft, day, cP, mD, lb/ft³; fluxes in ft³/day, well rates in STB/day.
    pub fn field() -> Self {
        UnitSystem { darcy: 1.127e-3 * FT3_PER_BBL, rate_to_volume: FT3_PER_BBL }
    }
}

impl Default for UnitSystem {
    fn default() -> Self {
        Self::consistent()
    }
}

/// Slightly compressible phase.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FluidProps {
    pub rho_ref: f64,
    pub p_ref: f64,
    pub compressibility: f64,
    pub viscosity: f64,
}

impl FluidProps {
    pub fn incompressible(rho: f64, viscosity: f64) -> Self {
        FluidProps { rho_ref: rho, p_ref: 0.0, compressibility: 0.0, viscosity }
    }

    /// `(rho, d rho / d p)`.
    pub fn density(&self, p: f64) -> (f64, f64) {
        let rho = density(p, self);
        (rho, self.compressibility * rho)
    }
}

pub fn density(p: f64, fluid: &FluidProps) -> f64 {
    fluid.rho_ref * (fluid.compressibility * (p - fluid.p_ref)).exp()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BrooksCorey {
    pub s_wirr: f64,
    pub s_or: f64,
    pub krw0: f64,
    pub kro0: f64,
    pub n_w: f64,
    pub n_o: f64,
}

impl Default for BrooksCorey {
    fn default() -> Self {
        BrooksCorey { s_wirr: 0.2, s_or: 0.2, krw0: 1.0, kro0: 1.0, n_w: 2.0, n_o: 2.0 }
    }
}

/// Relative permeabilities and their derivatives in `s_w`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RelPerm {
    pub krw: f64,
    pub kro: f64,
    pub dkrw: f64,
    pub dkro: f64,
}

impl BrooksCorey {
    pub fn eval(&self, s_w: f64) -> RelPerm {
        let span = 1.0 - self.s_or - self.s_wirr;
        let raw = (s_w - self.s_wirr) / span;
        let inside = raw > 0.0 && raw < 1.0;
        let se = raw.clamp(0.0, 1.0);
        let so = 1.0 - se;
        let krw = self.krw0 * se.powf(self.n_w);
        let kro = self.kro0 * so.powf(self.n_o);
        let (dkrw, dkro) = if inside {
            (
                self.krw0 * self.n_w * se.powf(self.n_w - 1.0) / span,
                -self.kro0 * self.n_o * so.powf(self.n_o - 1.0) / span,
            )
        } else {
            (0.0, 0.0)
        };
        RelPerm { krw, kro, dkrw, dkro }
    }
}

pub fn brooks_corey(s_w: f64, params: &BrooksCorey) -> (f64, f64) {
    let r = params.eval(s_w);
    (r.krw, r.kro)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VanGenuchten {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub s_wirr: f64,
    /// Saturations below `s_wirr + delta` are evaluated at `s_wirr + delta`.
    #[serde(default = "default_delta")]
    pub delta: f64,
}

fn default_delta() -> f64 {
    1e-6
}

impl Default for VanGenuchten {
    fn default() -> Self {
        VanGenuchten { a: 0.8, b: 0.6255, c: 2.67, s_wirr: 0.2, delta: default_delta() }
    }
}

impl VanGenuchten {
    /// No capillarity.
    pub fn zero() -> Self {
        VanGenuchten { a: 0.0, ..Default::default() }
    }

    /// `(p_c, d p_c / d s_w)` of the clamped curve.
    pub fn eval(&self, s_w: f64) -> (f64, f64) {
        if self.a == 0.0 {
            return (0.0, 0.0);
        }
        let lo = self.s_wirr + self.delta;
        let clamped = s_w < lo;
        let x = s_w.max(lo) - self.s_wirr;
        let q = x.powf(-1.0 / self.b);
        let m = q - 1.0;
        if m <= 0.0 {
            // (s_w - s_wirr) >= 1 only without residual oil; curve is zero there
            return (0.0, 0.0);
        }
        let pc = self.a * m.powf(1.0 / self.c);
        if clamped {
            return (pc, 0.0);
        }
        let dq = -1.0 / self.b * q / x;
        let dpc = self.a / self.c * m.powf(1.0 / self.c - 1.0) * dq;
        (pc, dpc)
    }
}

pub fn van_genuchten_pc(s_w: f64, params: &VanGenuchten) -> f64 {
    params.eval(s_w).0
}

/// Concentration carried by a face flux oriented from `c_up` to `c_down`.
pub fn upwind_concentration(u: f64, c_up: f64, c_down: f64) -> f64 {
    if u > 0.0 {
        c_up
    } else {
        c_down
    }
}

/// Which side a flux is upwinded from.
pub fn upwind_is_minus(u: f64) -> bool {
    u > 0.0
}

/// Face mobility `(rho_m + rho_p) / (2 mu) * k_r(s_up)`.
pub fn upwind_mobility(u_aux: f64, rho_minus: f64, rho_plus: f64, kr_minus: f64, kr_plus: f64, viscosity: f64) -> f64 {
    let kr = if upwind_is_minus(u_aux) { kr_minus } else { kr_plus };
    (rho_minus + rho_plus) / (2.0 * viscosity) * kr
}
