//! Symmetric quasilinear forms `A0 d_t U + A1 d_1 U + A2 d_2 U = 0`.

use nalgebra::{SMatrix, SVector};
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::state::{FrontGeometry, PhysParams, State, Vec5};

pub type Matrix5 = SMatrix<f64, 5, 5>;
pub type Vector5 = SVector<f64, 5>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum MatrixForm {
    /// Unknown `(h, v, B)`, `A0 = diag(g/h, 1, 1, 1, 1)`.
    PrimitiveHeight,
    /// Unknown `(p, v, B)` with `p = g h²/2`, `A0 = diag(1/(h c²), h, h, h, h)`.
    PressureForm,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MatrixSet {
    pub a0: Matrix5,
    pub a1: Matrix5,
    pub a2: Matrix5,
    pub form: MatrixForm,
}

impl MatrixSet {
    pub fn spatial(&self, dir: usize) -> &Matrix5 {
        match dir {
            1 => &self.a1,
            2 => &self.a2,
            _ => panic!("direction must be 1 or 2"),
        }
    }
}

/// Spatial matrix for direction `e_dir` in the primitive-height form.
fn primitive_spatial(u: &State, dir: usize, g: f64) -> Matrix5 {
    let k = dir - 1;
    let (vk, bk) = (u.v[k], u.b[k]);
    let mut a = Matrix5::zeros();
    a[(0, 0)] = g * vk / u.h;
    a[(0, 1 + k)] = g;
    a[(1 + k, 0)] = g;
    for i in 0..2 {
        a[(1 + i, 1 + i)] = vk;
        a[(3 + i, 3 + i)] = vk;
        a[(1 + i, 3 + i)] = -bk;
        a[(3 + i, 1 + i)] = -bk;
    }
    a
}

fn pressure_spatial(u: &State, dir: usize, g: f64) -> Matrix5 {
    let k = dir - 1;
    let h = u.h;
    let hc2 = g * h * h;
    let (vk, bk) = (u.v[k], u.b[k]);
    let mut a = Matrix5::zeros();
    a[(0, 0)] = vk / hc2;
    a[(0, 1 + k)] = 1.0;
    a[(1 + k, 0)] = 1.0;
    for i in 0..2 {
        a[(1 + i, 1 + i)] = h * vk;
        a[(3 + i, 3 + i)] = h * vk;
        a[(1 + i, 3 + i)] = -h * bk;
        a[(3 + i, 1 + i)] = -h * bk;
    }
    a
}

pub fn quasilinear_matrices(u: &State, p: &PhysParams, form: MatrixForm) -> Result<MatrixSet> {
    u.check()?;
    let g = p.g;
    let set = match form {
        MatrixForm::PrimitiveHeight => MatrixSet {
            a0: Matrix5::from_diagonal(&Vector5::new(g / u.h, 1.0, 1.0, 1.0, 1.0)),
            a1: primitive_spatial(u, 1, g),
            a2: primitive_spatial(u, 2, g),
            form,
        },
        MatrixForm::PressureForm => {
            let h = u.h;
            MatrixSet {
                a0: Matrix5::from_diagonal(&Vector5::new(1.0 / (g * h * h), h, h, h, h)),
                a1: pressure_spatial(u, 1, g),
                a2: pressure_spatial(u, 2, g),
                form,
            }
        }
    };
    Ok(set)
}

/// `A1 - A0 d_t phi - A2 d_2 phi` in the primitive-height form.
pub fn boundary_matrix(u: &State, f: &FrontGeometry, p: &PhysParams) -> Result<Matrix5> {
    let m = quasilinear_matrices(u, p, MatrixForm::PrimitiveHeight)?;
    Ok(m.a1 - m.a0 * f.speed - m.a2 * f.slope)
}

/// Residual `A0 U_t + A1 U_1 + A2 U_2` of the primitive-height system for a
/// pointwise derivative tuple. The first entry is `(g/h)` times the mass
/// equation, the rest are the momentum and induction equations as written.
pub fn primary_residual(u: &State, dt: &Vec5, dx1: &Vec5, dx2: &Vec5, p: &PhysParams) -> Result<Vec5> {
    let m = quasilinear_matrices(u, p, MatrixForm::PrimitiveHeight)?;
    let r = m.a0 * Vector5::from(*dt) + m.a1 * Vector5::from(*dx1) + m.a2 * Vector5::from(*dx2);
    Ok(r.into())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rest_state_is_identity_plus_gravity_coupling() {
        let p = PhysParams::new(1.0).unwrap();
        let u = State::new(1.0, [0.0; 2], [0.0; 2]);
        let m = quasilinear_matrices(&u, &p, MatrixForm::PrimitiveHeight).unwrap();
        assert_eq!(m.a0, Matrix5::identity());
        let mut expected = Matrix5::zeros();
        expected[(0, 1)] = 1.0;
        expected[(1, 0)] = 1.0;
        assert_eq!(m.a1, expected);
    }

    #[test]
    fn matrices_exactly_symmetric() {
        let p = PhysParams::new(2.3).unwrap();
        let u = State::new(0.7, [1.3, -0.2], [0.9, -1.7]);
        for form in [MatrixForm::PrimitiveHeight, MatrixForm::PressureForm] {
            let m = quasilinear_matrices(&u, &p, form).unwrap();
            assert_eq!(m.a1, m.a1.transpose());
            assert_eq!(m.a2, m.a2.transpose());
            assert_eq!(m.a0, m.a0.transpose());
        }
        let f = FrontGeometry::new(0.4, -1.1);
        let a = boundary_matrix(&u, &f, &p).unwrap();
        assert_eq!(a, a.transpose());
    }

    #[test]
    fn stationary_flat_front_boundary_matrix_is_a1() {
        let p = PhysParams::new(1.0).unwrap();
        let u = State::new(1.4, [0.3, 0.2], [0.1, -0.5]);
        let m = quasilinear_matrices(&u, &p, MatrixForm::PrimitiveHeight).unwrap();
        assert_eq!(boundary_matrix(&u, &FrontGeometry::flat(), &p).unwrap(), m.a1);
    }

    #[test]
    fn residual_reproduces_the_equations() {
        // hand-expanded mass, momentum and induction equations
        let p = PhysParams::new(1.5).unwrap();
        let u = State::new(0.8, [0.3, -0.6], [1.2, 0.4]);
        let dt = [0.1, -0.2, 0.3, 0.05, -0.4];
        let d1 = [0.7, 0.2, -0.1, 0.3, 0.9];
        let d2 = [-0.3, 0.5, 0.25, -0.8, 0.6];
        let r = primary_residual(&u, &dt, &d1, &d2, &p).unwrap();
        let (h, v, b, g) = (u.h, u.v, u.b, p.g);
        let mass = dt[0] + v[0] * d1[0] + v[1] * d2[0] + h * (d1[1] + d2[2]);
        let mom = |k: usize, grad: f64| {
            dt[1 + k] + v[0] * d1[1 + k] + v[1] * d2[1 + k] - b[0] * d1[3 + k] - b[1] * d2[3 + k] + g * grad
        };
        let ind = |k: usize| dt[3 + k] + v[0] * d1[3 + k] + v[1] * d2[3 + k] - b[0] * d1[1 + k] - b[1] * d2[1 + k];
        let expected = [g / h * mass, mom(0, d1[0]), mom(1, d2[0]), ind(0), ind(1)];
        for i in 0..5 {
            assert!((r[i] - expected[i]).abs() < 1e-14, "row {i}");
        }
    }
}
