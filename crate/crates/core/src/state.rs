//! Pointwise SMHD states, the conservative variables and their fluxes.
//!
//! The conservative system is
//!
//! ```text
//! d_t h      + div(h v)                          = 0
//! d_t (h v)  + div(h v⊗v - h B⊗B) + grad(g h²/2) = 0
//! d_t (h B)  + curl(h B × v)                     = 0
//! ```
//!
//! In two dimensions `h B × v` is the out-of-plane scalar `E = h (B1 v2 - B2 v1)`
//! and `curl(E e3) = (d_2 E, -d_1 E)`. Written as fluxes, the `hB1` row has
//! x1-flux 0 and x2-flux `h (B1 v2 - B2 v1)`; the `hB2` row has x1-flux
//! `h (B2 v1 - B1 v2)` and x2-flux 0.

use serde::{Deserialize, Serialize};

use crate::error::{Result, SmhdError};

pub type Vec5 = [f64; 5];

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhysParams {
    pub g: f64,
}

impl PhysParams {
    pub fn new(g: f64) -> Result<Self> {
        let p = Self { g };
        p.check()?;
        Ok(p)
    }

    pub fn check(&self) -> Result<()> {
        if !(self.g.is_finite() && self.g > 0.0) {
            return Err(SmhdError::InvalidGravity(self.g));
        }
        Ok(())
    }
}

impl Default for PhysParams {
    fn default() -> Self {
        Self { g: 1.0 }
    }
}

/// Primitive state `U = (h, v, B)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct State {
    pub h: f64,
    pub v: [f64; 2],
    #[serde(rename = "b")]
    pub b: [f64; 2],
}

impl State {
    pub const fn new(h: f64, v: [f64; 2], b: [f64; 2]) -> Self {
        Self { h, v, b }
    }

    pub fn check(&self) -> Result<()> {
        if !self.to_array().iter().all(|x| x.is_finite()) {
            return Err(SmhdError::NonFinite("state"));
        }
        if self.h <= 0.0 {
            return Err(SmhdError::NonPositiveHeight(self.h));
        }
        Ok(())
    }

    pub fn to_array(&self) -> Vec5 {
        [self.h, self.v[0], self.v[1], self.b[0], self.b[1]]
    }

    pub fn from_array(a: Vec5) -> Self {
        Self::new(a[0], [a[1], a[2]], [a[3], a[4]])
    }

    /// Same state with both magnetic components negated. The equations are
    /// invariant under `B -> -B`.
    pub fn flip_field(&self) -> Self {
        Self::new(self.h, self.v, [-self.b[0], -self.b[1]])
    }

    /// Mirror image under `x1 -> -x1`.
    pub fn reflect_x1(&self) -> Self {
        Self::new(self.h, [-self.v[0], self.v[1]], [-self.b[0], self.b[1]])
    }
}

/// Conserved vector `(h, h v1, h v2, h B1, h B2)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConservedVector(pub Vec5);

impl ConservedVector {
    pub fn height(&self) -> f64 {
        self.0[0]
    }
}

/// Front `x1 = phi(t, x2)` described locally by `slope = d_2 phi` and
/// `speed = d_t phi`. The (unnormalized) normal is `N = (1, -slope)`.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct FrontGeometry {
    pub slope: f64,
    pub speed: f64,
}

impl FrontGeometry {
    pub const fn new(slope: f64, speed: f64) -> Self {
        Self { slope, speed }
    }

    pub const fn flat() -> Self {
        Self { slope: 0.0, speed: 0.0 }
    }

    pub fn normal(&self) -> [f64; 2] {
        [1.0, -self.slope]
    }

    pub fn norm_sq(&self) -> f64 {
        1.0 + self.slope * self.slope
    }

    /// Normal component `w1 - w2 * slope`.
    pub fn normal_part(&self, w: [f64; 2]) -> f64 {
        w[0] - w[1] * self.slope
    }

    /// Tangential component `w1 * slope + w2`.
    pub fn tangential_part(&self, w: [f64; 2]) -> f64 {
        w[0] * self.slope + w[1]
    }

    /// Inverse of the (normal, tangential) decomposition.
    pub fn compose(&self, normal: f64, tangential: f64) -> [f64; 2] {
        let s = self.slope;
        let n2 = self.norm_sq();
        [(normal + s * tangential) / n2, (tangential - s * normal) / n2]
    }
}

pub fn conserved_from_primitive(u: &State, _p: &PhysParams) -> Result<ConservedVector> {
    u.check()?;
    let h = u.h;
    Ok(ConservedVector([h, h * u.v[0], h * u.v[1], h * u.b[0], h * u.b[1]]))
}

pub fn primitive_from_conserved(q: &ConservedVector, _p: &PhysParams) -> Result<State> {
    let q = q.0;
    if !q.iter().all(|x| x.is_finite()) {
        return Err(SmhdError::NonFinite("conserved vector"));
    }
    let h = q[0];
    if h <= 0.0 {
        return Err(SmhdError::NonPositiveHeight(h));
    }
    Ok(State::new(h, [q[1] / h, q[2] / h], [q[3] / h, q[4] / h]))
}

/// Physical fluxes `(F1, F2)` of the conservative system.
pub fn fluxes(u: &State, p: &PhysParams) -> Result<(Vec5, Vec5)> {
    u.check()?;
    Ok((flux_along(u, [1.0, 0.0], p), flux_along(u, [0.0, 1.0], p)))
}

/// `n1 F1 + n2 F2` without validation; `n` need not be unit length.
pub fn flux_along(u: &State, n: [f64; 2], p: &PhysParams) -> Vec5 {
    let State { h, v, b } = *u;
    let vn = v[0] * n[0] + v[1] * n[1];
    let bn = b[0] * n[0] + b[1] * n[1];
    let pressure = 0.5 * p.g * h * h;
    // h (B v_n - v B_n) is the induction flux for both components; its
    // normal part vanishes identically.
    [
        h * vn,
        h * (v[0] * vn - b[0] * bn) + pressure * n[0],
        h * (v[1] * vn - b[1] * bn) + pressure * n[1],
        h * (b[0] * vn - v[0] * bn),
        h * (b[1] * vn - v[1] * bn),
    ]
}

pub fn gravity_wave_speed(u: &State, p: &PhysParams) -> Result<f64> {
    u.check()?;
    Ok((p.g * u.h).sqrt())
}

/// Characteristic speeds along an arbitrary direction `n` (not normalized),
/// ascending: `v_n - c_g, v_n - |B_n|, v_n, v_n + |B_n|, v_n + c_g` with
/// `c_g = sqrt(B_n² + g h |n|²)`.
pub fn directional_speeds(u: &State, n: [f64; 2], p: &PhysParams) -> Vec5 {
    let vn = u.v[0] * n[0] + u.v[1] * n[1];
    let bn = (u.b[0] * n[0] + u.b[1] * n[1]).abs();
    let n2 = n[0] * n[0] + n[1] * n[1];
    let cg = (bn * bn + p.g * u.h * n2).sqrt();
    [vn - cg, vn - bn, vn, vn + bn, vn + cg]
}
