//! Sequential backward-Euler cell-centred reference solver.
//!
//! Written from the physics: cell unknowns only, two-point fluxes from
//! half-cell resistances, a finite-difference Jacobian and a dense LU solve
//! per step. Shares no code with the library beyond the mesh description.

use nalgebra::{DMatrix, DVector};

use stevmfe::stmesh::Subdomain;

#[derive(Debug, Clone)]
pub struct Grid {
    pub dim: usize,
    pub n: [usize; 2],
    pub h: [f64; 2],
    pub origin: [f64; 2],
    pub thickness: f64,
    pub perm: Vec<[f64; 2]>,
    pub poro: Vec<f64>,
}

/// Face between cells `a` (lower) and `b` (upper) along `axis`.
#[derive(Debug, Clone, Copy)]
pub struct Link {
    pub a: usize,
    pub b: usize,
    pub axis: usize,
}

/// Outer face of `cell`; `out` is +1 on the upper side, -1 on the lower.
#[derive(Debug, Clone, Copy)]
pub struct Outer {
    pub cell: usize,
    pub axis: usize,
    pub out: f64,
    pub center: [f64; 2],
}

impl Grid {
    pub fn from_subdomain(s: &Subdomain, dim: usize, thickness: f64) -> Grid {
        Grid {
            dim,
            n: s.cells,
            h: [s.extent[0] / s.cells[0] as f64, s.extent[1] / s.cells[1] as f64],
            origin: s.origin,
            thickness,
            perm: s.permeability.clone(),
            poro: s.porosity.clone(),
        }
    }

    pub fn len(&self) -> usize {
        self.n[0] * self.n[1]
    }

    pub fn id(&self, i: usize, j: usize) -> usize {
        i + self.n[0] * j
    }

    pub fn volume(&self) -> f64 {
        if self.dim == 2 {
            self.thickness * self.h[0] * self.h[1]
        } else {
            self.thickness * self.h[0]
        }
    }

    pub fn area(&self, axis: usize) -> f64 {
        if self.dim == 2 {
            self.thickness * self.h[1 - axis]
        } else {
            self.thickness
        }
    }

    pub fn center(&self, k: usize) -> [f64; 2] {
        let (i, j) = (k % self.n[0], k / self.n[0]);
        let y = if self.dim == 2 { self.origin[1] + (j as f64 + 0.5) * self.h[1] } else { 0.0 };
        [self.origin[0] + (i as f64 + 0.5) * self.h[0], y]
    }

    pub fn links(&self) -> Vec<Link> {
        let mut v = Vec::new();
        for j in 0..self.n[1] {
            for i in 0..self.n[0] {
                if i + 1 < self.n[0] {
                    v.push(Link { a: self.id(i, j), b: self.id(i + 1, j), axis: 0 });
                }
                if self.dim == 2 && j + 1 < self.n[1] {
                    v.push(Link { a: self.id(i, j), b: self.id(i, j + 1), axis: 1 });
                }
            }
        }
        v
    }

    pub fn outer(&self) -> Vec<Outer> {
        let mut v = Vec::new();
        for j in 0..self.n[1] {
            for i in 0..self.n[0] {
                let k = self.id(i, j);
                let c = self.center(k);
                for axis in 0..self.dim {
                    let idx = if axis == 0 { i } else { j };
                    for (edge, out) in [(0, -1.0), (self.n[axis] - 1, 1.0)] {
                        if idx == edge {
                            let mut center = c;
                            center[axis] += out * 0.5 * self.h[axis];
                            v.push(Outer { cell: k, axis, out, center });
                        }
                    }
                }
            }
        }
        v
    }

    /// Two-point transmissibility `area / (sum of half-cell resistances)`
    /// for a per-cell coefficient along the link axis.
    pub fn trans(&self, l: &Link, coef: impl Fn(usize) -> f64) -> f64 {
        let h = self.h[l.axis];
        self.area(l.axis) / (0.5 * h / coef(l.a) + 0.5 * h / coef(l.b))
    }

    pub fn outer_trans(&self, o: &Outer, coef: f64) -> f64 {
        self.area(o.axis) / (0.5 * self.h[o.axis] / coef)
    }
}

fn rho(rho_ref: f64, c_f: f64, p_ref: f64, p: f64) -> f64 {
    rho_ref * (c_f * (p - p_ref)).exp()
}

#[derive(Debug, Clone, Copy)]
pub struct Phase {
    pub rho_ref: f64,
    pub p_ref: f64,
    pub c_f: f64,
    pub mu: f64,
}

impl Phase {
    pub fn rho(&self, p: f64) -> f64 {
        rho(self.rho_ref, self.c_f, self.p_ref, p)
    }
}

/// Well terms in the oracle's own representation.
#[derive(Debug, Clone, Copy)]
pub enum OWell {
    /// Volume rate already converted to flux units, injected concentration.
    Inject { cell: usize, rate: f64, conc: f64 },
    Produce { cell: usize, bhp: f64, wi: f64 },
}

/// Peaceman index with equivalent radius `0.2 sqrt(dx dy)`.
pub fn peaceman(k: [f64; 2], h: [f64; 2], thickness: f64, r_w: f64, darcy: f64) -> f64 {
    let r_e = 0.2 * (h[0] * h[1]).sqrt();
    2.0 * std::f64::consts::PI * (k[0] * k[1]).sqrt() * darcy * thickness / (r_e / r_w).ln()
}

pub trait Stepper {
    fn n_fields(&self) -> usize;
    /// Residual of one backward-Euler step from `old` over `[t0, t0 + dt]`.
    fn residual(&self, g: &Grid, t0: f64, dt: f64, x: &[f64], old: &[f64]) -> Vec<f64>;
}

/// Dirichlet datum per outer face, `None` for no-flow.
pub type BoundaryFn = dyn Fn(&Outer, f64) -> Option<f64> + Sync;

pub struct Linear<'a> {
    pub mobility: f64,
    pub darcy: f64,
    pub boundary: &'a BoundaryFn,
    pub source: &'a (dyn Fn([f64; 2], f64) -> f64 + Sync),
    pub wells: Vec<OWell>,
}

impl Stepper for Linear<'_> {
    fn n_fields(&self) -> usize {
        1
    }

    fn residual(&self, g: &Grid, t0: f64, dt: f64, x: &[f64], old: &[f64]) -> Vec<f64> {
        let v = g.volume();
        let tm = t0 + 0.5 * dt;
        let mut r: Vec<f64> = (0..g.len())
            .map(|k| g.poro[k] * v * (x[k] - old[k]) - (self.source)(g.center(k), tm) * v * dt)
            .collect();
        for l in g.links() {
            let t = g.trans(&l, |k| g.perm[k][l.axis] * self.darcy * self.mobility);
            let q = t * dt * (x[l.a] - x[l.b]);
            r[l.a] += q;
            r[l.b] -= q;
        }
        for o in g.outer() {
            if let Some(val) = (self.boundary)(&o, tm) {
                let t = g.outer_trans(&o, g.perm[o.cell][o.axis] * self.darcy * self.mobility);
                r[o.cell] += t * dt * (x[o.cell] - val);
            }
        }
        for w in &self.wells {
            match *w {
                OWell::Inject { cell, rate, .. } => r[cell] -= rate * dt,
                OWell::Produce { cell, bhp, wi } => r[cell] += wi * self.mobility * (x[cell] - bhp) * dt,
            }
        }
        r
    }
}

pub struct Tracer {
    pub fluid: Phase,
    pub diffusion: f64,
    pub darcy: f64,
    pub wells: Vec<OWell>,
}

impl Stepper for Tracer {
    fn n_fields(&self) -> usize {
        2
    }

    fn residual(&self, g: &Grid, _t0: f64, dt: f64, x: &[f64], old: &[f64]) -> Vec<f64> {
        let v = g.volume();
        let f = &self.fluid;
        let mut r = vec![0.0; 2 * g.len()];
        for k in 0..g.len() {
            let (p, c, p0, c0) = (x[2 * k], x[2 * k + 1], old[2 * k], old[2 * k + 1]);
            r[2 * k] = g.poro[k] * v * (f.rho(p) - f.rho(p0));
            r[2 * k + 1] = g.poro[k] * v * (f.rho(p) * c - f.rho(p0) * c0);
        }
        for l in g.links() {
            let (pa, pb) = (x[2 * l.a], x[2 * l.b]);
            let (ca, cb) = (x[2 * l.a + 1], x[2 * l.b + 1]);
            let rho_face = 0.5 * (f.rho(pa) + f.rho(pb));
            let tk = g.trans(&l, |k| g.perm[k][l.axis] * self.darcy);
            let tphi = g.trans(&l, |k| g.poro[k]);
            let mass = rho_face / f.mu * tk * dt * (pa - pb);
            let diff = rho_face * self.diffusion * tphi * dt * (ca - cb);
            let c_up = if mass > 0.0 { ca } else { cb };
            r[2 * l.a] += mass;
            r[2 * l.b] -= mass;
            r[2 * l.a + 1] += mass * c_up + diff;
            r[2 * l.b + 1] -= mass * c_up + diff;
        }
        for w in &self.wells {
            match *w {
                OWell::Inject { cell, rate, conc } => {
                    r[2 * cell] -= rate * f.rho_ref * dt;
                    r[2 * cell + 1] -= rate * f.rho_ref * conc * dt;
                }
                OWell::Produce { cell, bhp, wi } => {
                    let p = x[2 * cell];
                    let q = wi * f.rho(p) / f.mu * (p - bhp) * dt;
                    r[2 * cell] += q;
                    r[2 * cell + 1] += q * x[2 * cell + 1];
                }
            }
        }
        r
    }
}

pub struct TwoPhaseOracle {
    pub water: Phase,
    pub oil: Phase,
    pub s_wirr: f64,
    pub s_or: f64,
    pub krw0: f64,
    pub kro0: f64,
    pub n_w: f64,
    pub n_o: f64,
    /// `(a, b, c, delta)`; `a = 0` disables capillarity.
    pub vg: (f64, f64, f64, f64),
    pub darcy: f64,
    pub wells: Vec<OWell>,
}

impl TwoPhaseOracle {
    pub fn kr(&self, s: f64) -> (f64, f64) {
        let se = ((s - self.s_wirr) / (1.0 - self.s_wirr - self.s_or)).clamp(0.0, 1.0);
        (self.krw0 * se.powf(self.n_w), self.kro0 * (1.0 - se).powf(self.n_o))
    }

    pub fn pc(&self, s: f64) -> f64 {
        let (a, b, c, delta) = self.vg;
        if a == 0.0 {
            return 0.0;
        }
        let x = s.max(self.s_wirr + delta) - self.s_wirr;
        let m = x.powf(-1.0 / b) - 1.0;
        if m <= 0.0 {
            0.0
        } else {
            a * m.powf(1.0 / c)
        }
    }
}

impl Stepper for TwoPhaseOracle {
    fn n_fields(&self) -> usize {
        2
    }

    fn residual(&self, g: &Grid, _t0: f64, dt: f64, x: &[f64], old: &[f64]) -> Vec<f64> {
        let v = g.volume();
        let (w, o) = (&self.water, &self.oil);
        let mut r = vec![0.0; 2 * g.len()];
        for k in 0..g.len() {
            let (p, s, p0, s0) = (x[2 * k], x[2 * k + 1], old[2 * k], old[2 * k + 1]);
            let mw = w.rho(p) * s - w.rho(p0) * s0;
            let mo = o.rho(p) * (1.0 - s) - o.rho(p0) * (1.0 - s0);
            r[2 * k] = g.poro[k] * v * (mw + mo);
            r[2 * k + 1] = g.poro[k] * v * mw;
        }
        for l in g.links() {
            let (pa, pb) = (x[2 * l.a], x[2 * l.b]);
            let (sa, sb) = (x[2 * l.a + 1], x[2 * l.b + 1]);
            let tk = g.trans(&l, |k| g.perm[k][l.axis] * self.darcy);
            let dpo = pa - pb;
            let dpw = (pa - self.pc(sa)) - (pb - self.pc(sb));
            let (kwa, koa) = self.kr(sa);
            let (kwb, kob) = self.kr(sb);
            let vol_w = tk * dt * dpw;
            let vol_o = tk * dt * dpo;
            let kw = if vol_w > 0.0 { kwa } else { kwb };
            let ko = if vol_o > 0.0 { koa } else { kob };
            let fw = 0.5 * (w.rho(pa) + w.rho(pb)) / w.mu * kw * vol_w;
            let fo = 0.5 * (o.rho(pa) + o.rho(pb)) / o.mu * ko * vol_o;
            r[2 * l.a] += fw + fo;
            r[2 * l.b] -= fw + fo;
            r[2 * l.a + 1] += fw;
            r[2 * l.b + 1] -= fw;
        }
        for well in &self.wells {
            match *well {
                OWell::Inject { cell, rate, .. } => {
                    r[2 * cell] -= rate * w.rho_ref * dt;
                    r[2 * cell + 1] -= rate * w.rho_ref * dt;
                }
                OWell::Produce { cell, bhp, wi } => {
                    let (p, s) = (x[2 * cell], x[2 * cell + 1]);
                    let (krw, kro) = self.kr(s);
                    let qw = wi * w.rho(p) * krw / w.mu * (p - bhp) * dt;
                    let qo = wi * o.rho(p) * kro / o.mu * (p - bhp) * dt;
                    r[2 * cell] += qw + qo;
                    r[2 * cell + 1] += qw;
                }
            }
        }
        r
    }
}

/// Newton with a central-difference Jacobian and dense LU; iterates until
/// the update stalls at round-off.
pub fn step(model: &dyn Stepper, g: &Grid, t0: f64, dt: f64, old: &[f64]) -> Vec<f64> {
    let n = old.len();
    let mut x = old.to_vec();
    for _ in 0..60 {
        let r = model.residual(g, t0, dt, &x, old);
        let mut jac = DMatrix::<f64>::zeros(n, n);
        for j in 0..n {
            let h = 1e-7 * x[j].abs().max(1.0);
            let mut xp = x.clone();
            let mut xm = x.clone();
            xp[j] += h;
            xm[j] -= h;
            let rp = model.residual(g, t0, dt, &xp, old);
            let rm = model.residual(g, t0, dt, &xm, old);
            for i in 0..n {
                jac[(i, j)] = (rp[i] - rm[i]) / (2.0 * h);
            }
        }
        let dx = jac
            .lu()
            .solve(&DVector::from_iterator(n, r.iter().map(|v| -v)))
            .expect("oracle Jacobian is singular");
        let mut rel = 0.0f64;
        for i in 0..n {
            x[i] += dx[i];
            rel = rel.max(dx[i].abs() / x[i].abs().max(1.0));
        }
        if rel < 1e-15 {
            break;
        }
    }
    x
}

/// States after each of `steps` steps of length `dt` starting from `init`.
pub fn march(model: &dyn Stepper, g: &Grid, dt: f64, steps: usize, init: &[f64]) -> Vec<Vec<f64>> {
    let mut out = Vec::with_capacity(steps);
    let mut cur = init.to_vec();
    for k in 0..steps {
        cur = step(model, g, k as f64 * dt, dt, &cur);
        out.push(cur.clone());
    }
    out
}
