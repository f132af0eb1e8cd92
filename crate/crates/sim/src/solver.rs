//! First-order Godunov-type update with HLL fluxes in one and two dimensions.

use rayon::prelude::*;
use smhd::{classify, lax_verdict, rectilinear_shock, DiscontinuityKind, PhysParams, State, Vec5, DEFAULT_TOL};

use crate::config::{Boundary, InitialData, SimConfig, HEIGHT_FLOOR};
use crate::diagnostics::{divergence_norm, front_stats, total_energy, totals, Mesh};
use crate::error::{Result, SimError};
use crate::fields::{manufactured, manufactured_source, smooth_vortex};
use crate::hll::{conserved, hll_flux_unchecked, primitive};
use crate::reduce::pairwise_sum5;
use crate::result::{Record, SimResult, Snapshot, Summary};

const SUBSAMPLES: usize = 32;

/// Mutable state of a nonlinear run.
pub struct FvSolver {
    pub cfg: SimConfig,
    pub mesh: Mesh,
    pub q: Vec<Vec5>,
    pub t: f64,
    params: PhysParams,
    /// Heights on the two sides of the tracked front, left then right.
    front_levels: Option<(f64, f64)>,
    forced: bool,
}

impl FvSolver {
    pub fn new(cfg: SimConfig) -> Result<Self> {
        cfg.validate()?;
        let b = cfg.boundary;
        let dims = cfg.dimensions;
        let mesh = Mesh {
            n1: cfg.cells[0],
            n2: cfg.n2(),
            origin: [cfg.x1[0], cfg.x2[0]],
            dx: cfg.dx(),
            periodic: Mesh::periodic_from(b.x1_lower, if dims == 1 { Boundary::Periodic } else { b.x2 }),
            dims,
        };
        let params = cfg.params();
        let (q, front_levels) = initial_field(&cfg, &mesh, &params)?;
        let forced = matches!(cfg.initial, InitialData::Manufactured);
        let mut s = Self { cfg, mesh, q, t: 0.0, params, front_levels, forced };
        s.check_positivity()?;
        Ok(s)
    }

    pub fn states(&self) -> Vec<State> {
        self.q.par_iter().map(primitive).collect()
    }

    fn check_positivity(&mut self) -> Result<()> {
        let at = |k: usize| (k % self.mesh.n1, k / self.mesh.n1);
        if let Some(k) = self.q.iter().position(|q| q.iter().any(|x| !x.is_finite())) {
            let (i, j) = at(k);
            return Err(SimError::PositivityLoss { i, j, t: self.t, h: self.q[k][0] });
        }
        let Some(k) = self.q.iter().position(|q| q[0] <= 0.0) else { return Ok(()) };
        let h = self.q[k][0];
        if self.cfg.height_floor {
            let mut clipped = 0;
            for q in self.q.iter_mut().filter(|q| q[0] <= HEIGHT_FLOOR) {
                *q = [HEIGHT_FLOOR, 0.0, 0.0, 0.0, 0.0];
                clipped += 1;
            }
            log::warn!("clipped {clipped} cells to the height floor at t = {}", self.t);
            return Ok(());
        }
        let (i, j) = at(k);
        Err(SimError::PositivityLoss { i, j, t: self.t, h })
    }

    /// Largest `dt` with Courant number one.
    pub fn stable_dt(&self, u: &[State]) -> f64 {
        let (dx, dy) = (self.mesh.dx[0], self.mesh.dx[1]);
        let two_d = self.mesh.dims == 2;
        let g = self.params.g;
        let rate = u
            .par_iter()
            .map(|s| {
                let c = g * s.h;
                let sx = s.v[0].abs() + (s.b[0] * s.b[0] + c).sqrt();
                let sy = s.v[1].abs() + (s.b[1] * s.b[1] + c).sqrt();
                sx / dx + if two_d { sy / dy } else { 0.0 }
            })
            .reduce(|| 0.0, f64::max);
        1.0 / rate
    }

    fn neighbour(&self, k: isize, n: usize, periodic: bool) -> usize {
        if periodic {
            k.rem_euclid(n as isize) as usize
        } else {
            k.clamp(0, n as isize - 1) as usize
        }
    }

    /// Advances by `dt`; returns `dt` times the net edge outflow and `dt`
    /// times the integrated source, for the conservation balance.
    fn step(&mut self, u: &[State], dt: f64) -> (Vec5, Vec5) {
        let m = self.mesh;
        let (n1, n2) = (m.n1, m.n2);
        let p = self.params;
        let fx: Vec<Vec<Vec5>> = (0..n2)
            .into_par_iter()
            .map(|j| {
                (0..=n1)
                    .map(|i| {
                        let l = self.neighbour(i as isize - 1, n1, m.periodic[0]);
                        let r = self.neighbour(i as isize, n1, m.periodic[0]);
                        hll_flux_unchecked(&u[m.idx(l, j)], &u[m.idx(r, j)], [1.0, 0.0], &p)
                    })
                    .collect()
            })
            .collect();
        let fy: Vec<Vec<Vec5>> = if m.dims == 2 {
            (0..=n2)
                .into_par_iter()
                .map(|j| {
                    let lo = self.neighbour(j as isize - 1, n2, m.periodic[1]);
                    let hi = self.neighbour(j as isize, n2, m.periodic[1]);
                    (0..n1).map(|i| hll_flux_unchecked(&u[m.idx(i, lo)], &u[m.idx(i, hi)], [0.0, 1.0], &p)).collect()
                })
                .collect()
        } else {
            Vec::new()
        };
        let source: Vec<Vec5> = if self.forced {
            let l = [n1 as f64 * m.dx[0], n2 as f64 * m.dx[1]];
            let t = self.t;
            (0..n1 * n2).into_par_iter().map(|k| manufactured_source(m.x1(k % n1), m.x2(k / n1), t, l, &p)).collect()
        } else {
            Vec::new()
        };
        let (ax, ay) = (dt / m.dx[0], dt / m.dx[1]);
        self.q.par_chunks_mut(n1).enumerate().for_each(|(j, row)| {
            for (i, q) in row.iter_mut().enumerate() {
                for k in 0..5 {
                    let mut d = ax * (fx[j][i + 1][k] - fx[j][i][k]);
                    if m.dims == 2 {
                        d += ay * (fy[j + 1][i][k] - fy[j][i][k]);
                    }
                    q[k] -= d;
                    if !source.is_empty() {
                        q[k] += dt * source[j * n1 + i][k];
                    }
                }
            }
        });
        // net outflow through the domain edges, times dt
        let edges_x: Vec<Vec5> = (0..n2).map(|j| std::array::from_fn(|k| fx[j][n1][k] - fx[j][0][k])).collect();
        let sx = pairwise_sum5(&edges_x);
        let hy = if m.dims == 2 { m.dx[1] } else { 1.0 };
        let mut out: Vec5 = std::array::from_fn(|k| dt * sx[k] * hy);
        if m.dims == 2 {
            let edges_y: Vec<Vec5> = (0..n1).map(|i| std::array::from_fn(|k| fy[n2][i][k] - fy[0][i][k])).collect();
            let sy = pairwise_sum5(&edges_y);
            for k in 0..5 {
                out[k] += dt * sy[k] * m.dx[0];
            }
        }
        let src = if source.is_empty() {
            [0.0; 5]
        } else {
            let s = pairwise_sum5(&source);
            std::array::from_fn(|k| dt * s[k] * m.cell_volume())
        };
        (out, src)
    }

    fn record(&self, u: &[State]) -> Record {
        let m = &self.mesh;
        let tot = totals(m, &self.q);
        let h: Vec<f64> = self.q.iter().map(|q| q[0]).collect();
        let (hmin, hmax) = h.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &x| (a.min(x), b.max(x)));
        let front = self.front_levels.map(|(l, r)| front_stats(m, &h, l, r));
        Record {
            t: self.t,
            mass: tot[0],
            mom_x: tot[1],
            mom_y: tot[2],
            flux_bx: tot[3],
            flux_by: tot[4],
            div_norm: divergence_norm(m, &self.q, self.cfg.divergence_stencil),
            front_amp: front.map_or(f64::NAN, |f| f.amplitude),
            energy: total_energy(m, u, self.params.g),
            h_min: hmin,
            h_max: hmax,
            front_position: front.map_or(f64::NAN, |f| f.mean_position),
            front_width: front.map_or(f64::NAN, |f| f.mean_width),
        }
    }

    pub fn snapshot(&self) -> Snapshot {
        let m = &self.mesh;
        Snapshot {
            t: self.t,
            n1: m.n1,
            n2: m.n2,
            x1: (0..m.n1).map(|i| m.x1(i)).collect(),
            x2: (0..m.n2).map(|j| m.x2(j)).collect(),
            values: self.q.iter().map(|q| primitive(q).to_array()).collect(),
        }
    }

    pub fn run(mut self) -> Result<SimResult> {
        let end = self.cfg.end_time;
        let mut records = Vec::new();
        let mut summary = Summary::default();
        let mut u = self.states();
        records.push(self.record(&u));
        let mut steps = 0;
        while self.t < end {
            let limit = self.stable_dt(&u);
            let mut dt = match self.cfg.fixed_dt {
                Some(dt) if dt > limit => {
                    return Err(SimError::CflViolation(format!(
                        "fixed step {dt} exceeds the stability limit {limit} at t = {}",
                        self.t
                    )))
                }
                Some(dt) => dt,
                None => self.cfg.cfl * limit,
            };
            if self.t + dt >= end || end - (self.t + dt) < 1e-12 * end {
                dt = end - self.t;
            }
            let before = totals(&self.mesh, &self.q);
            let (outflow, source) = self.step(&u, dt);
            self.t = if dt == end - self.t { end } else { self.t + dt };
            steps += 1;
            self.check_positivity()?;
            let after = totals(&self.mesh, &self.q);
            for k in 0..5 {
                let defect = (after[k] - before[k] + outflow[k] - source[k]).abs() / before[k].abs().max(1.0);
                summary.max_conservation_defect = summary.max_conservation_defect.max(defect);
            }
            u = self.states();
            if steps % self.cfg.record_every == 0 || self.t >= end {
                records.push(self.record(&u));
            }
        }
        summary.steps = steps;
        summary.final_time = self.t;
        fill_summary(&mut summary, &records);
        if self.forced {
            summary.l1_error = Some(self.manufactured_l1_error());
        }
        Ok(SimResult { records, summary, snapshot: self.snapshot(), dx: self.mesh.dx, first_field: "h".into() })
    }

    /// Volume-weighted L1 distance to the exact manufactured field, all components.
    pub fn manufactured_l1_error(&self) -> f64 {
        let m = &self.mesh;
        let l = [m.n1 as f64 * m.dx[0], m.n2 as f64 * m.dx[1]];
        let e: Vec<f64> = (0..m.n1 * m.n2)
            .map(|k| {
                let exact = conserved(&manufactured(m.x1(k % m.n1), m.x2(k / m.n1), self.t, l));
                exact.iter().zip(&self.q[k]).map(|(a, b)| (a - b).abs()).sum()
            })
            .collect();
        crate::reduce::pairwise_sum(&e) * m.cell_volume()
    }
}

fn fill_summary(s: &mut Summary, records: &[Record]) {
    let first = records[0];
    let last = records[records.len() - 1];
    if first.front_position.is_finite() {
        let drift = records.iter().map(|r| (r.front_position - first.front_position).abs()).fold(0.0, |a: f64, b| {
            if b.is_nan() {
                f64::INFINITY
            } else {
                a.max(b)
            }
        });
        s.max_front_drift = Some(drift);
        s.initial_front_amp = Some(first.front_amp);
        s.final_front_amp = Some(last.front_amp);
        if first.front_amp > 0.0 {
            s.amp_ratio = Some(last.front_amp / first.front_amp);
        }
    }
    s.initial_div_norm = Some(first.div_norm);
    s.max_div_norm = Some(records.iter().map(|r| r.div_norm).fold(0.0, f64::max));
}

fn volume_fraction_below(front: f64, left: f64, dx: f64) -> f64 {
    ((front - left) / dx).clamp(0.0, 1.0)
}

fn mix(f: f64, a: &Vec5, b: &Vec5) -> Vec5 {
    std::array::from_fn(|k| f * a[k] + (1.0 - f) * b[k])
}

type Initial = (Vec<Vec5>, Option<(f64, f64)>);

fn initial_field(cfg: &SimConfig, mesh: &Mesh, p: &PhysParams) -> Result<Initial> {
    let (n1, n2) = (mesh.n1, mesh.n2);
    let l = [n1 as f64 * mesh.dx[0], n2 as f64 * mesh.dx[1]];
    let rel = |k: usize| (mesh.x1(k % n1) - mesh.origin[0], mesh.x2(k / n1) - mesh.origin[1]);
    let two_state = |minus: &State, plus: &State, front: &dyn Fn(f64) -> f64| -> Vec<Vec5> {
        let (qm, qp) = (conserved(minus), conserved(plus));
        (0..n1 * n2)
            .map(|k| {
                let (i, j) = (k % n1, k / n1);
                let left = mesh.origin[0] + i as f64 * mesh.dx[0];
                let f = if mesh.dims == 1 {
                    volume_fraction_below(front(0.0), left, mesh.dx[0])
                } else {
                    let y0 = mesh.origin[1] + j as f64 * mesh.dx[1];
                    (0..SUBSAMPLES)
                        .map(|s| {
                            let y = y0 + (s as f64 + 0.5) * mesh.dx[1] / SUBSAMPLES as f64;
                            volume_fraction_below(front(y), left, mesh.dx[0])
                        })
                        .sum::<f64>()
                        / SUBSAMPLES as f64
                };
                mix(f, &qm, &qp)
            })
            .collect()
    };
    Ok(match &cfg.initial {
        InitialData::Uniform { state } => {
            state.check()?;
            (vec![conserved(state); n1 * n2], None)
        }
        InitialData::Riemann { pair, position } => {
            pair.check()?;
            let x0 = *position;
            (two_state(&pair.minus, &pair.plus, &|_| x0), Some((pair.minus.h, pair.plus.h)))
        }
        InitialData::PerturbedShock { shock, amplitude, wavenumber, position } => {
            let s = rectilinear_shock(shock.h_minus, shock.ratio, shock.b1_plus, shock.b2, p)?;
            if mesh.dims == 2 && *amplitude != 0.0 {
                let periods = wavenumber * l[1] / (2.0 * std::f64::consts::PI);
                if (periods - periods.round()).abs() > 1e-9 || periods.round() == 0.0 {
                    return Err(SimError::Config(format!(
                        "wavenumber {wavenumber} is not a nonzero multiple of 2 pi / {}",
                        l[1]
                    )));
                }
            }
            let (a, k, x0, y0) = (*amplitude, *wavenumber, *position, mesh.origin[1]);
            let q = two_state(&s.minus_state(), &s.plus_state(), &|y| x0 + a * (k * (y - y0)).cos());
            (q, Some((s.h_minus, s.h_plus)))
        }
        InitialData::SmoothVortex { amplitude } => {
            let q = (0..n1 * n2)
                .map(|k| {
                    let (x, y) = rel(k);
                    conserved(&smooth_vortex(x, y, l, *amplitude))
                })
                .collect();
            (q, None)
        }
        InitialData::Manufactured => {
            let q = (0..n1 * n2)
                .map(|k| {
                    let (x, y) = rel(k);
                    conserved(&manufactured(x, y, 0.0, l))
                })
                .collect();
            (q, None)
        }
        InitialData::LinearPulse { .. } => {
            return Err(SimError::Config("linear_pulse data are run by the half-plane solver".into()))
        }
    })
}

pub fn simulate_1d(cfg: &SimConfig) -> Result<SimResult> {
    if cfg.dimensions != 1 {
        return Err(SimError::Config("simulate_1d requires dimensions = 1".into()));
    }
    FvSolver::new(cfg.clone())?.run()
}

pub fn simulate_2d(cfg: &SimConfig) -> Result<SimResult> {
    if cfg.dimensions != 2 {
        return Err(SimError::Config("simulate_2d requires dimensions = 2".into()));
    }
    FvSolver::new(cfg.clone())?.run()
}

/// Runs a rectilinear shock whose front is `x1 = amplitude cos(wavenumber x2)`.
/// Non-admissible shocks are run as well (they are expected to disintegrate).
pub fn perturbed_shock_experiment(
    shock: &smhd::RectilinearShock,
    amplitude: f64,
    wavenumber: f64,
    cfg: &SimConfig,
) -> Result<SimResult> {
    if amplitude.abs() > 0.05 * shock.h_minus {
        return Err(SimError::Config(format!("amplitude {amplitude} exceeds 0.05 h_minus")));
    }
    let p = cfg.params();
    let sp = shock.side_pair(&p);
    match classify(&sp, DEFAULT_TOL)? {
        DiscontinuityKind::Shock => {}
        other => return Err(SimError::Config(format!("rectilinear data classify as {other}, not a shock"))),
    }
    if !lax_verdict(&sp)?.lax.satisfied {
        log::warn!("perturbed-shock run with a non-admissible shock (R = {})", shock.ratio());
    }
    let mut c = cfg.clone();
    c.dimensions = 2;
    c.initial = InitialData::PerturbedShock {
        shock: crate::config::ShockParams {
            h_minus: shock.h_minus,
            ratio: shock.ratio(),
            b1_plus: shock.b1_plus,
            b2: shock.b2,
        },
        amplitude,
        wavenumber,
        position: 0.0,
    };
    simulate_2d(&c)
}
