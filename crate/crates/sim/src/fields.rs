//! Analytic smooth fields used as initial data.

use std::f64::consts::PI;

use smhd::state::flux_along;
use smhd::{PhysParams, State, Vec5};

use crate::hll::conserved;

/// Doubly periodic data on `[0, l1) x [0, l2)` with `hB` the curl of a
/// non-separable stream function plus a constant, so `div(hB) = 0`.
pub fn smooth_vortex(x: f64, y: f64, l: [f64; 2], amplitude: f64) -> State {
    let (kx, ky) = (2.0 * PI / l[0], 2.0 * PI / l[1]);
    let a = amplitude;
    let h = 1.0 + 0.5 * a * (kx * x + ky * y).cos();
    let v = [0.5 + a * (ky * y).sin(), 0.3 - a * (kx * x).sin()];
    let psi_y = a * ((kx * x).sin() * (2.0 * ky * y).cos() - ky / (2.0 * kx) * (2.0 * kx * x + ky * y).sin());
    let psi_x = a * (kx / (2.0 * ky) * (kx * x).cos() * (2.0 * ky * y).sin() - (2.0 * kx * x + ky * y).sin());
    let hb = [0.5 + psi_y, 0.2 - psi_x];
    State::new(h, v, [hb[0] / h, hb[1] / h])
}

/// Smooth doubly periodic space-time field; not a solution, so it is
/// driven by [`manufactured_source`].
pub fn manufactured(x: f64, y: f64, t: f64, l: [f64; 2]) -> State {
    let (kx, ky) = (2.0 * PI / l[0], 2.0 * PI / l[1]);
    State::new(
        1.0 + 0.2 * (kx * x + ky * y - t).sin(),
        [0.4 + 0.1 * (kx * x - 0.5 * t).cos(), -0.2 + 0.1 * (ky * y + t).sin()],
        [0.5 + 0.1 * (ky * y - t).sin(), 0.3 + 0.1 * (kx * x + 0.3 * t).cos()],
    )
}

/// `q_t + div F(q)` of the manufactured field, by central differences of
/// the closed form.
pub fn manufactured_source(x: f64, y: f64, t: f64, l: [f64; 2], p: &PhysParams) -> Vec5 {
    let d = 1e-5;
    let q = |x, y, t| conserved(&manufactured(x, y, t, l));
    let f = |x, y, t, n| flux_along(&manufactured(x, y, t, l), n, p);
    let (qp, qm) = (q(x, y, t + d), q(x, y, t - d));
    let (fxp, fxm) = (f(x + d, y, t, [1.0, 0.0]), f(x - d, y, t, [1.0, 0.0]));
    let (fyp, fym) = (f(x, y + d, t, [0.0, 1.0]), f(x, y - d, t, [0.0, 1.0]));
    std::array::from_fn(|k| (qp[k] - qm[k] + fxp[k] - fxm[k] + fyp[k] - fym[k]) / (2.0 * d))
}
