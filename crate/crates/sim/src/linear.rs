//! Explicit solver for the constant-coefficient problem behind a planar shock:
//!
//! ```text
//! L p + div v = 0,  M² L v - (B.grad) B + grad p = 0,  L B - (B.grad) v = 0,  x1 > 0,
//! ```
//!
//! with `L = d_t + d_1`, `B = (M1, M2)`, the five front relations at `x1 = 0`
//! and periodic `x2`. In the variables `W = A0^{1/2} U` the system is
//! `W_t + Ã1 W_1 + Ã2 W_2 = 0` with symmetric `Ãi`; cells are updated with
//! exact upwind (Steger–Warming) fluxes and SSP-RK3. At the front the single
//! outgoing characteristic amplitude is taken from the first cell and the four
//! incoming ones are solved from the four algebraic front relations; the
//! front displacement `phi` follows `d_t phi = (l0/M²) d_2 phi - a0 p / (1 - R)`.

use nalgebra::{Matrix4, Matrix5, SymmetricEigen, Vector4, Vector5};
use rayon::prelude::*;
use smhd::LinearizedShockSetup;

use crate::config::{Boundary, PulseField, PulseSpec, SimConfig};
use crate::error::{Result, SimError};
use crate::reduce::{pairwise_sum, pairwise_sum5};
use crate::result::{Record, SimResult, Snapshot, Summary};

const CONSTRAINT_TOL: f64 = 1e-10;

#[derive(Debug, Clone)]
pub struct LinearOperators {
    pub a0: Matrix5<f64>,
    pub a1: Matrix5<f64>,
    pub a2: Matrix5<f64>,
    /// `A0^{-1/2}` (diagonal).
    s_inv: Vector5<f64>,
    t1: Matrix5<f64>,
    t1_plus: Matrix5<f64>,
    t1_minus: Matrix5<f64>,
    t2_plus: Matrix5<f64>,
    t2_minus: Matrix5<f64>,
    r_out: Vector5<f64>,
    r_in: [Vector5<f64>; 4],
    /// Front relations in `W`, one per row.
    c_w: [Vector5<f64>; 4],
    g_inv: Matrix4<f64>,
    max_speed: [f64; 2],
    setup: LinearizedShockSetup,
}

/// Coefficient matrices of the scaled linear system in `U = (p, v, B)`.
pub fn linear_matrices(s: &LinearizedShockSetup) -> (Matrix5<f64>, Matrix5<f64>, Matrix5<f64>) {
    let (m2, b1, b2) = (s.m * s.m, s.m1, s.m2);
    let a0 = Matrix5::from_diagonal(&Vector5::new(1.0, m2, m2, 1.0, 1.0));
    #[rustfmt::skip]
    let a1 = Matrix5::new(
        1.0, 1.0, 0.0, 0.0, 0.0,
        1.0, m2, 0.0, -b1, 0.0,
        0.0, 0.0, m2, 0.0, -b1,
        0.0, -b1, 0.0, 1.0, 0.0,
        0.0, 0.0, -b1, 0.0, 1.0,
    );
    #[rustfmt::skip]
    let a2 = Matrix5::new(
        0.0, 0.0, 1.0, 0.0, 0.0,
        0.0, 0.0, 0.0, -b2, 0.0,
        1.0, 0.0, 0.0, 0.0, -b2,
        0.0, -b2, 0.0, 0.0, 0.0,
        0.0, 0.0, -b2, 0.0, 0.0,
    );
    (a0, a1, a2)
}

/// The four algebraic front relations `C U = (0, -(1 - R) d_2 phi, 0, 0)`.
pub fn front_relations(s: &LinearizedShockSetup) -> [Vector5<f64>; 4] {
    let (m2, r) = (s.m * s.m, s.r);
    [
        Vector5::new(s.d0, 1.0, -s.ell0 / (m2 * r), 0.0, 0.0),
        Vector5::new(0.0, 0.0, 1.0, 0.0, 0.0),
        Vector5::new(s.m1, 0.0, -s.m2 / r, 1.0, 0.0),
        Vector5::new(0.0, 0.0, -s.m1, 0.0, 1.0),
    ]
}

fn split(e: &SymmetricEigen<f64, nalgebra::U5>) -> (Matrix5<f64>, Matrix5<f64>) {
    let v = &e.eigenvectors;
    let pos = Matrix5::from_diagonal(&e.eigenvalues.map(|x| x.max(0.0)));
    let neg = Matrix5::from_diagonal(&e.eigenvalues.map(|x| x.min(0.0)));
    (v * pos * v.transpose(), v * neg * v.transpose())
}

impl LinearOperators {
    pub fn new(setup: &LinearizedShockSetup) -> Result<Self> {
        let (a0, a1, a2) = linear_matrices(setup);
        let s_inv = Vector5::new(1.0, 1.0 / setup.m, 1.0 / setup.m, 1.0, 1.0);
        let sm = Matrix5::from_diagonal(&s_inv);
        let t1 = sm * a1 * sm;
        let t2 = sm * a2 * sm;
        let e1 = SymmetricEigen::new(t1);
        let e2 = SymmetricEigen::new(t2);
        let outgoing: Vec<usize> = (0..5).filter(|&k| e1.eigenvalues[k] < 0.0).collect();
        if outgoing.len() != 1 {
            return Err(SimError::Config(format!(
                "expected one outgoing characteristic at the front, found {} (speeds {:?})",
                outgoing.len(),
                e1.eigenvalues.as_slice()
            )));
        }
        let out = outgoing[0];
        let r_out: Vector5<f64> = e1.eigenvectors.column(out).into();
        let inc: Vec<usize> = (0..5).filter(|&k| k != out).collect();
        let r_in: [Vector5<f64>; 4] = std::array::from_fn(|k| e1.eigenvectors.column(inc[k]).into());
        let c_u = front_relations(setup);
        let c_w: [Vector5<f64>; 4] = std::array::from_fn(|k| c_u[k].component_mul(&s_inv));
        let g = Matrix4::from_fn(|i, j| c_w[i].dot(&r_in[j]));
        let g_inv = g
            .try_inverse()
            .ok_or_else(|| SimError::Config("front relations do not determine the incoming amplitudes".into()))?;
        let (t1_plus, t1_minus) = split(&e1);
        let (t2_plus, t2_minus) = split(&e2);
        let max_speed = [e1.eigenvalues.amax(), e2.eigenvalues.amax()];
        Ok(Self {
            a0,
            a1,
            a2,
            s_inv,
            t1,
            t1_plus,
            t1_minus,
            t2_plus,
            t2_minus,
            r_out,
            r_in,
            c_w,
            g_inv,
            max_speed,
            setup: *setup,
        })
    }

    /// Speeds of `A0^{-1} A1` in ascending order.
    pub fn normal_speeds(&self) -> [f64; 5] {
        let mut e: Vec<f64> = SymmetricEigen::new(self.t1).eigenvalues.iter().copied().collect();
        e.sort_by(f64::total_cmp);
        [e[0], e[1], e[2], e[3], e[4]]
    }

    /// Boundary state in `W` from the first interior cell and `d_2 phi`.
    pub fn boundary_state(&self, w1: &Vector5<f64>, phi_2: f64) -> Vector5<f64> {
        let a_out = self.r_out.dot(w1);
        let rhs = Vector4::new(0.0, -(1.0 - self.setup.r) * phi_2, 0.0, 0.0)
            - Vector4::from_fn(|i, _| self.c_w[i].dot(&self.r_out) * a_out);
        let a_in = self.g_inv * rhs;
        let mut w = self.r_out * a_out;
        for k in 0..4 {
            w += self.r_in[k] * a_in[k];
        }
        w
    }

    pub fn to_u(&self, w: &Vector5<f64>) -> Vector5<f64> {
        w.component_mul(&self.s_inv)
    }

    pub fn to_w(&self, u: &Vector5<f64>) -> Vector5<f64> {
        u.component_div(&self.s_inv)
    }
}

#[derive(Clone)]
struct LinearState {
    w: Vec<Vector5<f64>>,
    phi: Vec<f64>,
}

struct HalfPlane {
    ops: LinearOperators,
    n1: usize,
    n2: usize,
    dx: [f64; 2],
    origin: [f64; 2],
}

impl HalfPlane {
    fn idx(&self, i: usize, j: usize) -> usize {
        j * self.n1 + i
    }

    fn phi_2(&self, phi: &[f64], j: usize) -> f64 {
        let n = self.n2;
        (phi[(j + 1) % n] - phi[(j + n - 1) % n]) / (2.0 * self.dx[1])
    }

    fn boundary_states(&self, s: &LinearState) -> Vec<Vector5<f64>> {
        (0..self.n2).map(|j| self.ops.boundary_state(&s.w[self.idx(0, j)], self.phi_2(&s.phi, j))).collect()
    }

    fn rhs(&self, s: &LinearState) -> LinearState {
        let o = &self.ops;
        let (n1, n2) = (self.n1, self.n2);
        let wb = self.boundary_states(s);
        let mut dw = vec![Vector5::zeros(); n1 * n2];
        dw.par_chunks_mut(n1).enumerate().for_each(|(j, row)| {
            let w = |i: usize| &s.w[j * n1 + i];
            let jm = (j + n2 - 1) % n2;
            let jp = (j + 1) % n2;
            let mut left = o.t1 * wb[j];
            for (i, d) in row.iter_mut().enumerate() {
                let right = if i + 1 < n1 { o.t1_plus * w(i) + o.t1_minus * w(i + 1) } else { o.t1_plus * w(i) };
                let down = o.t2_plus * s.w[jm * n1 + i] + o.t2_minus * w(i);
                let up = o.t2_plus * w(i) + o.t2_minus * s.w[jp * n1 + i];
                *d = -(right - left) / self.dx[0] - (up - down) / self.dx[1];
                left = right;
            }
        });
        let st = &o.setup;
        let c = st.ell0 / (st.m * st.m);
        let dphi = (0..n2)
            .map(|j| {
                let d2 = if c > 0.0 {
                    (s.phi[(j + 1) % n2] - s.phi[j]) / self.dx[1]
                } else {
                    (s.phi[j] - s.phi[(j + n2 - 1) % n2]) / self.dx[1]
                };
                c * d2 - st.a0 * wb[j][0] / (1.0 - st.r)
            })
            .collect();
        LinearState { w: dw, phi: dphi }
    }

    fn combine(a: &LinearState, ca: f64, b: &LinearState, cb: f64, d: &LinearState, cd: f64) -> LinearState {
        LinearState {
            w: a.w.iter().zip(&b.w).zip(&d.w).map(|((x, y), z)| x * ca + y * cb + z * cd).collect(),
            phi: a.phi.iter().zip(&b.phi).zip(&d.phi).map(|((x, y), z)| x * ca + y * cb + z * cd).collect(),
        }
    }

    /// SSP-RK3 step.
    fn step(&self, s: &LinearState, dt: f64) -> LinearState {
        let k1 = self.rhs(s);
        let s1 = Self::combine(s, 1.0, &k1, dt, s, 0.0);
        let k2 = self.rhs(&s1);
        let s2 = Self::combine(s, 0.75, &s1, 0.25, &k2, 0.25 * dt);
        let k3 = self.rhs(&s2);
        Self::combine(s, 1.0 / 3.0, &s2, 2.0 / 3.0, &k3, 2.0 / 3.0 * dt)
    }

    fn volume(&self) -> f64 {
        self.dx[0] * self.dx[1]
    }

    /// `sum A0 U . U` times the cell area.
    fn energy(&self, s: &LinearState) -> f64 {
        let e: Vec<f64> = s.w.iter().map(|w| w.norm_squared()).collect();
        pairwise_sum(&e) * self.volume()
    }

    /// Energy plus forward difference quotients in both directions.
    fn gradient_energy(&self, s: &LinearState) -> f64 {
        let (n1, n2) = (self.n1, self.n2);
        let e: Vec<f64> = (0..n1 * n2)
            .map(|k| {
                let (i, j) = (k % n1, k / n1);
                let w = s.w[k];
                let mut x = w.norm_squared();
                if i + 1 < n1 {
                    x += ((s.w[k + 1] - w) / self.dx[0]).norm_squared();
                }
                x += ((s.w[self.idx(i, (j + 1) % n2)] - w) / self.dx[1]).norm_squared();
                x
            })
            .collect();
        pairwise_sum(&e) * self.volume()
    }

    fn phi_norm(&self, phi: &[f64]) -> f64 {
        let e: Vec<f64> = (0..self.n2)
            .map(|j| {
                let d = (phi[(j + 1) % self.n2] - phi[j]) / self.dx[1];
                phi[j] * phi[j] + d * d
            })
            .collect();
        (pairwise_sum(&e) * self.dx[1]).sqrt()
    }

    fn u_field(&self, s: &LinearState) -> Vec<Vector5<f64>> {
        s.w.iter().map(|w| self.ops.to_u(w)).collect()
    }

    /// Residual of `div B + (M1, M2) . grad p` with central differences,
    /// interior cells only; returns `(max residual, max term magnitude)`.
    fn constraint_residual(&self, u: &[Vector5<f64>]) -> (f64, f64) {
        let (n1, n2) = (self.n1, self.n2);
        let st = &self.ops.setup;
        let mut worst = 0.0f64;
        let mut scale = 0.0f64;
        for j in 0..n2 {
            let (jm, jp) = ((j + n2 - 1) % n2, (j + 1) % n2);
            for i in 1..n1 - 1 {
                let d1 = |k: usize| (u[self.idx(i + 1, j)][k] - u[self.idx(i - 1, j)][k]) / (2.0 * self.dx[0]);
                let d2 = |k: usize| (u[self.idx(i, jp)][k] - u[self.idx(i, jm)][k]) / (2.0 * self.dx[1]);
                let terms = [d1(3), d2(4), st.m1 * d1(0), st.m2 * d2(0)];
                worst = worst.max(terms.iter().sum::<f64>().abs());
                scale = scale.max(terms.iter().fold(0.0, |a: f64, t| a.max(t.abs())));
            }
        }
        (worst, scale)
    }

    fn record(&self, t: f64, s: &LinearState) -> Record {
        let u = self.u_field(s);
        let comps: Vec<[f64; 5]> = u.iter().map(|x| [x[0], x[1], x[2], x[3], x[4]]).collect();
        let tot = pairwise_sum5(&comps);
        let v = self.volume();
        let (res, _) = self.constraint_residual(&u);
        let pmax = comps.iter().fold(f64::NEG_INFINITY, |a, x| a.max(x[0]));
        let pmin = comps.iter().fold(f64::INFINITY, |a, x| a.min(x[0]));
        let fmax = s.phi.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let fmin = s.phi.iter().copied().fold(f64::INFINITY, f64::min);
        Record {
            t,
            mass: tot[0] * v,
            mom_x: tot[1] * v,
            mom_y: tot[2] * v,
            flux_bx: tot[3] * v,
            flux_by: tot[4] * v,
            div_norm: res,
            front_amp: 0.5 * (fmax - fmin),
            energy: self.energy(s),
            h_min: pmin,
            h_max: pmax,
            front_position: pairwise_sum(&s.phi) / self.n2 as f64,
            front_width: f64::NAN,
        }
    }

    /// Relative residual of `(M² L² - Laplacian - (B.grad)²) p` at the middle
    /// of three equally spaced levels, on cells at least two away from `x1 = 0`
    /// and the far edge.
    fn wave_residual(&self, levels: [&LinearState; 3], dt: f64) -> f64 {
        let st = &self.ops.setup;
        let (n1, n2) = (self.n1, self.n2);
        let (h1, h2) = (self.dx[0], self.dx[1]);
        let p: Vec<Vec<f64>> = levels.iter().map(|s| s.w.iter().map(|w| w[0]).collect()).collect();
        let m2 = st.m * st.m;
        let (b1, b2) = (st.m1, st.m2);
        let mut res = Vec::new();
        let mut mag = Vec::new();
        for j in 0..n2 {
            let (jm, jp) = ((j + n2 - 1) % n2, (j + 1) % n2);
            for i in 2..n1 - 2 {
                let at = |l: usize, i: usize, j: usize| p[l][j * n1 + i];
                let ptt = (at(2, i, j) - 2.0 * at(1, i, j) + at(0, i, j)) / (dt * dt);
                let d1 = |l: usize| (at(l, i + 1, j) - at(l, i - 1, j)) / (2.0 * h1);
                let pt1 = (d1(2) - d1(0)) / (2.0 * dt);
                let p11 = (at(1, i + 1, j) - 2.0 * at(1, i, j) + at(1, i - 1, j)) / (h1 * h1);
                let p22 = (at(1, i, jp) - 2.0 * at(1, i, j) + at(1, i, jm)) / (h2 * h2);
                let p12 = (at(1, i + 1, jp) - at(1, i + 1, jm) - at(1, i - 1, jp) + at(1, i - 1, jm)) / (4.0 * h1 * h2);
                let terms = [
                    m2 * ptt,
                    2.0 * m2 * pt1,
                    m2 * p11,
                    -(p11 + p22),
                    -(b1 * b1 * p11 + 2.0 * b1 * b2 * p12 + b2 * b2 * p22),
                ];
                let r: f64 = terms.iter().sum();
                res.push(r * r);
                mag.push(terms.iter().map(|x| x * x).sum::<f64>());
            }
        }
        let m = pairwise_sum(&mag);
        if m == 0.0 {
            0.0
        } else {
            (pairwise_sum(&res) / m).sqrt()
        }
    }
}

fn pulse_profile(x: f64, y: f64, pulse: &PulseSpec) -> f64 {
    let r = ((x - pulse.center[0]).powi(2) + (y - pulse.center[1]).powi(2)).sqrt() / pulse.radius;
    if r >= 1.0 {
        0.0
    } else {
        pulse.amplitude * (0.5 * std::f64::consts::PI * r).cos().powi(4)
    }
}

pub fn linear_halfplane_simulate(
    setup: &LinearizedShockSetup,
    cfg: &SimConfig,
    pulse: &PulseSpec,
) -> Result<SimResult> {
    cfg.validate()?;
    if cfg.dimensions != 2 || cfg.boundary.x2 != Boundary::Periodic {
        return Err(SimError::Config("the half-plane problem is two-dimensional and periodic in x2".into()));
    }
    if !(pulse.radius > 0.0 && pulse.amplitude.is_finite()) {
        return Err(SimError::Config("pulse radius must be positive and amplitude finite".into()));
    }
    let ops = LinearOperators::new(setup)?;
    let hp = HalfPlane { ops, n1: cfg.cells[0], n2: cfg.cells[1], dx: cfg.dx(), origin: [cfg.x1[0], cfg.x2[0]] };
    let (n1, n2) = (hp.n1, hp.n2);
    let u0: Vec<Vector5<f64>> = (0..n1 * n2)
        .map(|k| {
            let x = hp.origin[0] + ((k % n1) as f64 + 0.5) * hp.dx[0];
            let y = hp.origin[1] + ((k / n1) as f64 + 0.5) * hp.dx[1];
            let p = pulse_profile(x, y, pulse);
            let b = match pulse.field {
                PulseField::Compatible => [-p * setup.m1, -p * setup.m2],
                PulseField::Zero => [0.0, 0.0],
            };
            Vector5::new(p, 0.0, 0.0, b[0], b[1])
        })
        .collect();
    let (res, scale) = hp.constraint_residual(&u0);
    let tol = CONSTRAINT_TOL * scale;
    if res > tol {
        return Err(SimError::ConstraintViolation { residual: res, tolerance: tol });
    }
    let mut s = LinearState { w: u0.iter().map(|u| hp.ops.to_w(u)).collect(), phi: vec![0.0; n2] };
    let limit = 1.0 / (hp.ops.max_speed[0] / hp.dx[0] + hp.ops.max_speed[1] / hp.dx[1]);
    let dt_nominal = match cfg.fixed_dt {
        Some(dt) if dt > limit => {
            return Err(SimError::CflViolation(format!("fixed step {dt} exceeds the stability limit {limit}")))
        }
        Some(dt) => dt,
        None => cfg.cfl * limit,
    };
    let e0 = hp.energy(&s);
    let g0 = hp.gradient_energy(&s);
    let mut t = 0.0;
    let mut records = vec![hp.record(t, &s)];
    let mut summary = Summary::default();
    let mut norm_ratio = 0.0f64;
    let mut grad_ratio = 0.0f64;
    let mut trace = 0.0;
    let mut phi_max = hp.phi_norm(&s.phi);
    let mut steps = 0;
    let end = cfg.end_time;
    while t < end {
        let dt = if t + dt_nominal >= end - 1e-12 * end { end - t } else { dt_nominal };
        let wb = hp.boundary_states(&s);
        trace += dt * hp.dx[1] * wb.iter().map(|w| hp.ops.to_u(w).norm_squared()).sum::<f64>();
        s = hp.step(&s, dt);
        t = if dt == end - t { end } else { t + dt };
        steps += 1;
        if s.w.iter().any(|w| !w.iter().all(|x| x.is_finite())) {
            return Err(SimError::Config(format!("linear solution became non-finite at t = {t}")));
        }
        if e0 > 0.0 {
            norm_ratio = norm_ratio.max((hp.energy(&s) / e0).sqrt());
            grad_ratio = grad_ratio.max((hp.gradient_energy(&s) / g0).sqrt());
        }
        phi_max = phi_max.max(hp.phi_norm(&s.phi));
        if steps % cfg.record_every == 0 || t >= end {
            records.push(hp.record(t, &s));
        }
    }
    let s1 = hp.step(&s, dt_nominal);
    let s2 = hp.step(&s1, dt_nominal);
    summary.wave_residual = Some(hp.wave_residual([&s, &s1, &s2], dt_nominal));
    summary.steps = steps;
    summary.final_time = t;
    summary.norm_ratio = (e0 > 0.0).then_some(norm_ratio);
    summary.gradient_norm_ratio = (g0 > 0.0).then_some(grad_ratio);
    summary.boundary_trace_norm = Some(trace.sqrt());
    summary.max_phi_norm = Some(phi_max);
    summary.initial_div_norm = Some(records[0].div_norm);
    summary.max_div_norm = Some(records.iter().map(|r| r.div_norm).fold(0.0, f64::max));
    summary.initial_front_amp = Some(records[0].front_amp);
    summary.final_front_amp = Some(records[records.len() - 1].front_amp);
    let u = hp.u_field(&s);
    let snapshot = Snapshot {
        t,
        n1,
        n2,
        x1: (0..n1).map(|i| hp.origin[0] + (i as f64 + 0.5) * hp.dx[0]).collect(),
        x2: (0..n2).map(|j| hp.origin[1] + (j as f64 + 0.5) * hp.dx[1]).collect(),
        values: u.iter().map(|x| [x[0], x[1], x[2], x[3], x[4]]).collect(),
    };
    Ok(SimResult { records, summary, snapshot, dx: hp.dx, first_field: "p".into() })
}
