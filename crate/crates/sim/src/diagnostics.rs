//! Integral and front diagnostics on cell-centred fields.

use smhd::{State, Vec5};

use crate::config::{Boundary, DivergenceStencil};
use crate::reduce::{pairwise_sum, pairwise_sum5};

/// Layout of a cell-centred field.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Mesh {
    pub n1: usize,
    pub n2: usize,
    pub origin: [f64; 2],
    pub dx: [f64; 2],
    pub periodic: [bool; 2],
    pub dims: usize,
}

impl Mesh {
    pub fn idx(&self, i: usize, j: usize) -> usize {
        j * self.n1 + i
    }

    pub fn x1(&self, i: usize) -> f64 {
        self.origin[0] + (i as f64 + 0.5) * self.dx[0]
    }

    pub fn x2(&self, j: usize) -> f64 {
        self.origin[1] + (j as f64 + 0.5) * self.dx[1]
    }

    /// Cell volume (a length in 1D).
    pub fn cell_volume(&self) -> f64 {
        if self.dims == 1 {
            self.dx[0]
        } else {
            self.dx[0] * self.dx[1]
        }
    }

    pub fn periodic_from(b1: Boundary, b2: Boundary) -> [bool; 2] {
        [b1 == Boundary::Periodic, b2 == Boundary::Periodic]
    }
}

pub fn totals(mesh: &Mesh, q: &[Vec5]) -> Vec5 {
    let s = pairwise_sum5(q);
    let v = mesh.cell_volume();
    std::array::from_fn(|k| s[k] * v)
}

pub fn total_energy(mesh: &Mesh, u: &[State], g: f64) -> f64 {
    let e: Vec<f64> = u
        .iter()
        .map(|s| {
            let v2 = s.v[0] * s.v[0] + s.v[1] * s.v[1];
            let b2 = s.b[0] * s.b[0] + s.b[1] * s.b[1];
            0.5 * s.h * (v2 + b2) + 0.5 * g * s.h * s.h
        })
        .collect();
    pairwise_sum(&e) * mesh.cell_volume()
}

/// Discrete `div(hB)` per cell; cells whose stencil leaves a non-periodic
/// domain are skipped.
pub fn divergence(mesh: &Mesh, q: &[Vec5], stencil: DivergenceStencil) -> Vec<f64> {
    let (n1, n2) = (mesh.n1, mesh.n2);
    let mut out = Vec::with_capacity(n1 * n2);
    let shift = |i: usize, d: isize, n: usize, periodic: bool| -> Option<usize> {
        let k = i as isize + d;
        if (0..n as isize).contains(&k) {
            Some(k as usize)
        } else if periodic {
            Some(k.rem_euclid(n as isize) as usize)
        } else {
            None
        }
    };
    let (lo, hi, scale) = match stencil {
        DivergenceStencil::Forward => (0isize, 1isize, 1.0),
        DivergenceStencil::Central => (-1, 1, 0.5),
    };
    for j in 0..n2 {
        for i in 0..n1 {
            let x = shift(i, lo, n1, mesh.periodic[0]).zip(shift(i, hi, n1, mesh.periodic[0]));
            let Some((il, ih)) = x else { continue };
            let mut d = scale * (q[mesh.idx(ih, j)][3] - q[mesh.idx(il, j)][3]) / mesh.dx[0];
            if mesh.dims == 2 {
                let y = shift(j, lo, n2, mesh.periodic[1]).zip(shift(j, hi, n2, mesh.periodic[1]));
                let Some((jl, jh)) = y else { continue };
                d += scale * (q[mesh.idx(i, jh)][4] - q[mesh.idx(i, jl)][4]) / mesh.dx[1];
            }
            out.push(d);
        }
    }
    out
}

/// Root-mean-square of the discrete divergence.
pub fn divergence_norm(mesh: &Mesh, q: &[Vec5], stencil: DivergenceStencil) -> f64 {
    let d = divergence(mesh, q, stencil);
    if d.is_empty() {
        return 0.0;
    }
    let sq: Vec<f64> = d.iter().map(|x| x * x).collect();
    (pairwise_sum(&sq) / d.len() as f64).sqrt()
}

/// First crossing of `level` along a row of cell-centre values, by linear
/// interpolation between centres.
pub fn level_crossing(x0: f64, dx: f64, h: &[f64], level: f64) -> Option<f64> {
    for i in 0..h.len().saturating_sub(1) {
        let (a, b) = (h[i] - level, h[i + 1] - level);
        if a == 0.0 {
            return Some(x0 + (i as f64 + 0.5) * dx);
        }
        if a * b < 0.0 {
            return Some(x0 + (i as f64 + 0.5 + a / (a - b)) * dx);
        }
    }
    None
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FrontStats {
    pub mean_position: f64,
    /// `(max - min) / 2` of the per-row positions.
    pub amplitude: f64,
    pub mean_width: f64,
}

/// Per-row front of a transition from `h_left` to `h_right`; NaN entries when
/// some row has no crossing.
pub fn front_stats(mesh: &Mesh, h: &[f64], h_left: f64, h_right: f64) -> FrontStats {
    let mid = 0.5 * (h_left + h_right);
    let l10 = h_left + 0.1 * (h_right - h_left);
    let l90 = h_left + 0.9 * (h_right - h_left);
    let mut pos = Vec::with_capacity(mesh.n2);
    let mut width = Vec::with_capacity(mesh.n2);
    for j in 0..mesh.n2 {
        let row = &h[j * mesh.n1..(j + 1) * mesh.n1];
        let x = level_crossing(mesh.origin[0], mesh.dx[0], row, mid);
        let w = level_crossing(mesh.origin[0], mesh.dx[0], row, l10)
            .zip(level_crossing(mesh.origin[0], mesh.dx[0], row, l90))
            .map(|(a, b)| (b - a).abs());
        pos.push(x.unwrap_or(f64::NAN));
        width.push(w.unwrap_or(f64::NAN));
    }
    let max = pos.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let min = pos.iter().copied().fold(f64::INFINITY, f64::min);
    let nan = pos.iter().any(|x| x.is_nan());
    FrontStats {
        mean_position: if nan { f64::NAN } else { pairwise_sum(&pos) / pos.len() as f64 },
        amplitude: if nan { f64::NAN } else { 0.5 * (max - min) },
        mean_width: pairwise_sum(&width) / width.len() as f64,
    }
}
