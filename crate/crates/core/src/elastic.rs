//! Two-dimensional compressible elastodynamics and the map that identifies
//! SMHD with its `F2 = 0`, `p = (g/2) rho²` slice (`rho := h`, `F1 := B`).
//!
//! Unknown ordering is `(p, v1, v2, F11, F21, F12, F22)`, i.e. the two
//! deformation-gradient columns `F1 = (F11, F21)` and `F2 = (F12, F22)`
//! follow the velocity.

use nalgebra::{SMatrix, SVector};
use serde::{Deserialize, Serialize};

use crate::error::{Result, SmhdError};
use crate::matrices::Matrix5;
use crate::state::{PhysParams, State, Vec5};

pub type Matrix7 = SMatrix<f64, 7, 7>;
pub type Vec7 = [f64; 7];

/// Polytropic pressure law `p = A rho^gamma`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PolytropicEos {
    pub a: f64,
    pub gamma: f64,
}

impl PolytropicEos {
    pub fn pressure(&self, rho: f64) -> f64 {
        self.a * rho.powf(self.gamma)
    }

    /// `c² = p'(rho)`.
    pub fn sound_speed_sq(&self, rho: f64) -> f64 {
        self.a * self.gamma * rho.powf(self.gamma - 1.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ElasticState {
    pub rho: f64,
    pub v: [f64; 2],
    pub f1: [f64; 2],
    pub f2: [f64; 2],
    pub eos: PolytropicEos,
}

impl ElasticState {
    pub fn pressure(&self) -> f64 {
        self.eos.pressure(self.rho)
    }

    /// Conserved vector `(rho, rho v, rho F1, rho F2)`.
    pub fn conserved(&self) -> Vec7 {
        let r = self.rho;
        [r, r * self.v[0], r * self.v[1], r * self.f1[0], r * self.f1[1], r * self.f2[0], r * self.f2[1]]
    }

    /// Flux of the conservative form along `n`:
    /// mass `rho v_n`, momentum `rho v v_n - sum_j rho F_j (F_j . n) + p n`,
    /// deformation `rho (F_j v_n - v (F_j . n))`.
    pub fn flux_along(&self, n: [f64; 2]) -> Vec7 {
        let r = self.rho;
        let v = self.v;
        let vn = v[0] * n[0] + v[1] * n[1];
        let f1n = self.f1[0] * n[0] + self.f1[1] * n[1];
        let f2n = self.f2[0] * n[0] + self.f2[1] * n[1];
        let p = self.pressure();
        let mom = |k: usize| r * (v[k] * vn - self.f1[k] * f1n - self.f2[k] * f2n) + p * n[k];
        [
            r * vn,
            mom(0),
            mom(1),
            r * (self.f1[0] * vn - v[0] * f1n),
            r * (self.f1[1] * vn - v[1] * f1n),
            r * (self.f2[0] * vn - v[0] * f2n),
            r * (self.f2[1] * vn - v[1] * f2n),
        ]
    }

    /// Symmetric matrices `(A0, A1, A2)` of the quasilinear system in the
    /// unknown `(p, v, F1, F2)`.
    pub fn matrices(&self) -> (Matrix7, Matrix7, Matrix7) {
        let r = self.rho;
        let rc2 = r * self.eos.sound_speed_sq(r);
        let a0 = Matrix7::from_diagonal(&SVector::<f64, 7>::from([1.0 / rc2, r, r, r, r, r, r]));
        let spatial = |k: usize| {
            let mut a = Matrix7::zeros();
            a[(0, 0)] = self.v[k] / rc2;
            a[(0, 1 + k)] = 1.0;
            a[(1 + k, 0)] = 1.0;
            for i in 0..2 {
                a[(1 + i, 1 + i)] = r * self.v[k];
                a[(3 + i, 3 + i)] = r * self.v[k];
                a[(5 + i, 5 + i)] = r * self.v[k];
                a[(1 + i, 3 + i)] = -r * self.f1[k];
                a[(3 + i, 1 + i)] = -r * self.f1[k];
                a[(1 + i, 5 + i)] = -r * self.f2[k];
                a[(5 + i, 1 + i)] = -r * self.f2[k];
            }
            a
        };
        (a0, spatial(0), spatial(1))
    }
}

/// Drop the `F2` rows of a conserved or flux vector.
pub fn drop_f2(x: &Vec7) -> Vec5 {
    [x[0], x[1], x[2], x[3], x[4]]
}

/// Drop the `F2` rows and columns of a 7×7 matrix.
pub fn restrict_to_slice(m: &Matrix7) -> Matrix5 {
    m.fixed_view::<5, 5>(0, 0).into_owned()
}

pub fn embed_elastodynamics(u: &State, p: &PhysParams) -> Result<ElasticState> {
    u.check()?;
    p.check()?;
    Ok(ElasticState { rho: u.h, v: u.v, f1: u.b, f2: [0.0, 0.0], eos: PolytropicEos { a: p.g / 2.0, gamma: 2.0 } })
}

/// Inverse of [`embed_elastodynamics`]; fails off the `F2 = 0` slice.
pub fn project_to_smhd(e: &ElasticState) -> Result<(State, PhysParams)> {
    if e.f2 != [0.0, 0.0] {
        return Err(SmhdError::ConstraintViolation("F2 must vanish on the SMHD slice".into()));
    }
    if e.eos.gamma != 2.0 {
        return Err(SmhdError::ConstraintViolation("SMHD slice requires gamma = 2".into()));
    }
    let u = State::new(e.rho, e.v, e.f1);
    u.check()?;
    Ok((u, PhysParams::new(2.0 * e.eos.a)?))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unit_mapping() {
        let e = embed_elastodynamics(&State::new(1.0, [0.3, 0.1], [0.2, 0.0]), &PhysParams::new(2.0).unwrap()).unwrap();
        assert_eq!(e.rho, 1.0);
        assert_eq!(e.eos.a, 1.0);
        assert_eq!(e.eos.gamma, 2.0);
        assert_eq!(e.pressure(), 1.0);
        assert_eq!(e.f2, [0.0, 0.0]);
    }

    #[test]
    fn project_round_trip() {
        let p = PhysParams::new(1.3).unwrap();
        let u = State::new(0.6, [0.3, -0.1], [0.2, 0.9]);
        let (back, q) = project_to_smhd(&embed_elastodynamics(&u, &p).unwrap()).unwrap();
        assert_eq!(back, u);
        assert!((q.g - p.g).abs() < 1e-15);
        let mut e = embed_elastodynamics(&u, &p).unwrap();
        e.f2 = [0.1, 0.0];
        assert!(project_to_smhd(&e).is_err());
    }

    #[test]
    fn elastic_matrices_symmetric() {
        let e = ElasticState {
            rho: 1.2,
            v: [0.4, -0.3],
            f1: [0.7, 0.1],
            f2: [-0.2, 0.9],
            eos: PolytropicEos { a: 0.8, gamma: 1.4 },
        };
        let (a0, a1, a2) = e.matrices();
        assert_eq!(a0, a0.transpose());
        assert_eq!(a1, a1.transpose());
        assert_eq!(a2, a2.transpose());
    }
}
