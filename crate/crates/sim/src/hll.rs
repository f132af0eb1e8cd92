//! Two-wave HLL flux for the conservative SMHD system.

use smhd::state::{directional_speeds, flux_along};
use smhd::{PhysParams, State, Vec5};

use crate::error::Result;

/// Davis bounds: slowest and fastest speeds over both states along `n`.
pub fn wave_speed_bounds(left: &State, right: &State, n: [f64; 2], p: &PhysParams) -> (f64, f64) {
    let l = directional_speeds(left, n, p);
    let r = directional_speeds(right, n, p);
    (l[0].min(r[0]), l[4].max(r[4]))
}

pub fn hll_flux(left: &State, right: &State, n: [f64; 2], p: &PhysParams) -> Result<Vec5> {
    left.check()?;
    right.check()?;
    Ok(hll_flux_unchecked(left, right, n, p))
}

pub(crate) fn hll_flux_unchecked(left: &State, right: &State, n: [f64; 2], p: &PhysParams) -> Vec5 {
    let (sl, sr) = wave_speed_bounds(left, right, n, p);
    let fl = flux_along(left, n, p);
    if sl >= 0.0 {
        return fl;
    }
    let fr = flux_along(right, n, p);
    if sr <= 0.0 {
        return fr;
    }
    let ql = conserved(left);
    let qr = conserved(right);
    let inv = 1.0 / (sr - sl);
    std::array::from_fn(|k| (sr * fl[k] - sl * fr[k] + sl * sr * (qr[k] - ql[k])) * inv)
}

#[inline]
pub(crate) fn conserved(u: &State) -> Vec5 {
    let h = u.h;
    [h, h * u.v[0], h * u.v[1], h * u.b[0], h * u.b[1]]
}

#[inline]
pub(crate) fn primitive(q: &Vec5) -> State {
    let h = q[0];
    State::new(h, [q[1] / h, q[2] / h], [q[3] / h, q[4] / h])
}
