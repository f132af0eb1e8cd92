//! Secondary symmetrization and stability verdicts for current-vortex sheets.
//!
//! For any scalar `lambda`, the SMHD system together with the constraint
//! `(B . grad) h + h div B = 0` can be rewritten as
//! `B0 U_t + B1 U_1 + B2 U_2 = 0` with symmetric `B0, B1, B2`; `B0 > 0`
//! exactly when `h > 0` and `|lambda| < 1`. On a rectilinear sheet the
//! boundary term of the energy identity vanishes once `lambda±` are chosen
//! with `[v2 - lambda B2] = 0`.

use serde::{Deserialize, Serialize};

use crate::error::{Result, SmhdError};
use crate::matrices::{primary_residual, Matrix5, Vector5};
use crate::state::{PhysParams, State, Vec5};

#[derive(Debug, Clone, PartialEq)]
pub struct SecondaryMatrices {
    pub b0: Matrix5,
    pub b1: Matrix5,
    pub b2: Matrix5,
}

fn secondary_spatial(u: &State, lambda: f64, dir: usize, g: f64) -> Matrix5 {
    let k = dir - 1;
    let (vk, bk) = (u.v[k], u.b[k]);
    let diag = vk + lambda * bk;
    let off = -(bk + lambda * vk);
    let mut a = Matrix5::zeros();
    a[(0, 0)] = g * (vk - lambda * bk) / u.h;
    a[(0, 1 + k)] = g;
    a[(1 + k, 0)] = g;
    a[(0, 3 + k)] = -g * lambda;
    a[(3 + k, 0)] = -g * lambda;
    for i in 0..2 {
        a[(1 + i, 1 + i)] = diag;
        a[(3 + i, 3 + i)] = diag;
        a[(1 + i, 3 + i)] = off;
        a[(3 + i, 1 + i)] = off;
    }
    a
}

pub fn secondary_matrices(u: &State, lambda: f64, p: &PhysParams) -> Result<SecondaryMatrices> {
    u.check()?;
    let g = p.g;
    let mut b0 = Matrix5::identity();
    b0[(0, 0)] = g / u.h;
    for i in 0..2 {
        b0[(1 + i, 3 + i)] = -lambda;
        b0[(3 + i, 1 + i)] = -lambda;
    }
    Ok(SecondaryMatrices { b0, b1: secondary_spatial(u, lambda, 1, g), b2: secondary_spatial(u, lambda, 2, g) })
}

/// `h > 0` and `|lambda| < 1`.
pub fn secondary_hyperbolic(u: &State, lambda: f64) -> bool {
    u.h > 0.0 && u.h.is_finite() && lambda.abs() < 1.0
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResidualDecomposition {
    /// `A0 U_t + A1 U_1 + A2 U_2`.
    pub primary: Vec5,
    /// `div(h B) = (B . grad) h + h div B`.
    pub divergence_term: f64,
    /// `B0 U_t + B1 U_1 + B2 U_2`.
    pub secondary: Vec5,
    /// Defect between `secondary` and the linear combination of `primary`
    /// and `divergence_term` it should equal.
    pub reconstruction_error: f64,
    /// Magnitude of the largest term entering either side.
    pub scale: f64,
}

/// Evaluates both symmetric forms on a derivative tuple and checks
/// `row0_s = row0 - (g lambda / h) div(hB)`, `v_s = v - lambda B`,
/// `B_s = B - lambda v` (rows of the primary residual).
pub fn secondary_residual_decomposition(
    u: &State,
    dt: &Vec5,
    dx1: &Vec5,
    dx2: &Vec5,
    lambda: f64,
    p: &PhysParams,
) -> Result<ResidualDecomposition> {
    let primary = primary_residual(u, dt, dx1, dx2, p)?;
    let s = secondary_matrices(u, lambda, p)?;
    let (t, d1, d2) = (Vector5::from(*dt), Vector5::from(*dx1), Vector5::from(*dx2));
    let secondary: Vec5 = (s.b0 * t + s.b1 * d1 + s.b2 * d2).into();
    let div = u.b[0] * dx1[0] + u.b[1] * dx2[0] + u.h * (dx1[3] + dx2[4]);
    let g = p.g;
    let combined = [
        primary[0] - g * lambda / u.h * div,
        primary[1] - lambda * primary[3],
        primary[2] - lambda * primary[4],
        primary[3] - lambda * primary[1],
        primary[4] - lambda * primary[2],
    ];
    let err = secondary.iter().zip(&combined).map(|(a, b)| (a - b) * (a - b)).sum::<f64>().sqrt();
    let entry_max = [s.b0, s.b1, s.b2].iter().map(|m| m.amax()).fold(0.0, f64::max);
    let deriv_max = [dt, dx1, dx2].iter().flat_map(|d| d.iter()).fold(0.0f64, |a, x| a.max(x.abs()));
    let scale = (entry_max * (1.0 + lambda.abs()) * deriv_max).max(1.0);
    Ok(ResidualDecomposition { primary, divergence_term: div, secondary, reconstruction_error: err, scale })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SymmetrizerChoice {
    pub lambda_plus: f64,
    pub lambda_minus: f64,
    pub hyperbolic_plus: bool,
    pub hyperbolic_minus: bool,
}

fn sign(x: f64) -> f64 {
    if x < 0.0 {
        -1.0
    } else {
        1.0
    }
}

/// `lambda±` of equal magnitude `|[v2]| / (|B2+| + |B2-|)` solving
/// `lambda+ B2+ - lambda- B2- = [v2]`.
pub fn lambda_for_cvs(plus: &State, minus: &State) -> Result<SymmetrizerChoice> {
    let (bp, bm) = (plus.b[1], minus.b[1]);
    let denom = bp.abs() + bm.abs();
    if denom == 0.0 {
        return Err(SmhdError::ZeroTangentialField);
    }
    let jump = plus.v[1] - minus.v[1];
    let k = jump.abs() / denom;
    let s = sign(jump);
    let lambda_plus = k * s * sign(bp);
    let lambda_minus = -k * s * sign(bm);
    Ok(SymmetrizerChoice {
        lambda_plus,
        lambda_minus,
        hyperbolic_plus: secondary_hyperbolic(plus, lambda_plus),
        hyperbolic_minus: secondary_hyperbolic(minus, lambda_minus),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum CvsTag {
    SufficientlyStable,
    NscStable,
    NscUnstable,
    /// 1..=4: the four exceptional equalities
    /// `J = |B|`, `J = sqrt(B² + g h) - |B|`, `J = sqrt(B² + g h)`,
    /// `J = |B| sqrt((B² + 2 g h)/(B² + g h))`;
    /// 5 and 6: the transition points `J = 2|B|` and `J = 2 sqrt(B² + 2 g h)`.
    ExceptionalPoint(u8),
    Inconclusive,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CvsVerdict {
    pub tag: CvsTag,
    /// Distance of `|[v2]|` to the nearest boundary of the tested condition.
    pub margin: f64,
}

fn check_equal_heights(plus: &State, minus: &State, tol: f64) -> Result<()> {
    plus.check()?;
    minus.check()?;
    if (plus.h - minus.h).abs() > tol * plus.h.max(minus.h).max(1.0) {
        return Err(SmhdError::HeightMismatch { plus: plus.h, minus: minus.h });
    }
    Ok(())
}

/// Sufficient condition: `|B2+| + |B2-| - |[v2]| >= eps` and
/// `max(|B2+|, |B2-|) >= eps`. Failure is inconclusive, not unstable.
pub fn cvs_sufficient_verdict(plus: &State, minus: &State, epsilon: f64) -> Result<CvsVerdict> {
    check_equal_heights(plus, minus, crate::discontinuity::DEFAULT_TOL)?;
    let (bp, bm) = (plus.b[1].abs(), minus.b[1].abs());
    if bp == 0.0 && bm == 0.0 {
        return Err(SmhdError::ZeroTangentialField);
    }
    let jump = (plus.v[1] - minus.v[1]).abs();
    let slack = bp + bm - jump;
    let tag = if slack >= epsilon && bp.max(bm) >= epsilon { CvsTag::SufficientlyStable } else { CvsTag::Inconclusive };
    Ok(CvsVerdict { tag, margin: slack.abs() })
}

/// Exact linear stability for the antisymmetric case `B2+ = -B2-`:
/// stable iff `J <= 2|B|` or `J >= 2 sqrt(B² + 2 g h)`, with `J = |[v2]|`.
pub fn cvs_nsc_verdict(plus: &State, minus: &State, p: &PhysParams, tol: f64) -> Result<CvsVerdict> {
    check_equal_heights(plus, minus, tol)?;
    let (bp, bm) = (plus.b[1], minus.b[1]);
    if (bp + bm).abs() > tol * bp.abs().max(1.0) {
        return Err(SmhdError::NotSymmetricCase { plus: bp, minus: bm });
    }
    let b = bp.abs();
    let gh = p.g * plus.h;
    let j = (plus.v[1] - minus.v[1]).abs();
    let points = nsc_special_points(b, gh);
    let near = |x: f64| (j - x).abs() <= tol * x.max(1.0);
    let margin = points.iter().map(|x| (j - x).abs()).fold(f64::INFINITY, f64::min);
    let (lower, upper) = (points[4], points[5]);
    for i in [4, 5] {
        if near(points[i]) {
            return Ok(CvsVerdict { tag: CvsTag::ExceptionalPoint(i as u8 + 1), margin });
        }
    }
    if j > lower && j < upper {
        // an equality of the first four inside the unstable strip changes nothing
        return Ok(CvsVerdict { tag: CvsTag::NscUnstable, margin: (j - lower).min(upper - j) });
    }
    if let Some(i) = points[..4].iter().position(|&x| near(x)) {
        return Ok(CvsVerdict { tag: CvsTag::ExceptionalPoint(i as u8 + 1), margin });
    }
    Ok(CvsVerdict { tag: CvsTag::NscStable, margin })
}

/// Values of `|[v2]|` singled out in the antisymmetric case, in the order
/// used by [`CvsTag::ExceptionalPoint`].
pub fn nsc_special_points(b: f64, gh: f64) -> [f64; 6] {
    let b = b.abs();
    let s1 = (b * b + gh).sqrt();
    let s2 = (b * b + 2.0 * gh).sqrt();
    [b, s1 - b, s1, b * s2 / s1, 2.0 * b, 2.0 * s2]
}

/// Boundary integrand `[(B1(U_hat) U . U)]` of the energy identity for the
/// linearized sheet problem, evaluated as `2 g h [v2_hat - lambda B2_hat] d_2 phi`
/// after substituting the boundary conditions. Perturbation traces are
/// `(h, v1, v2, B1, B2)`; they must satisfy
/// `d_t phi = v1± - v2_hat± d_2 phi`, `[h] = 0` and `B1± = B2_hat± d_2 phi`.
#[allow(clippy::too_many_arguments)]
pub fn boundary_energy_term(
    plus: &State,
    minus: &State,
    choice: &SymmetrizerChoice,
    trace_plus: &Vec5,
    trace_minus: &Vec5,
    slope_perturbation: f64,
    p: &PhysParams,
    tol: f64,
) -> Result<f64> {
    check_equal_heights(plus, minus, tol)?;
    for u in [plus, minus] {
        if u.v[0].abs() > tol || u.b[0].abs() > tol {
            return Err(SmhdError::ConstraintViolation(
                "rectilinear sheet requires v1 = B1 = 0 in the background".into(),
            ));
        }
    }
    let dphi = slope_perturbation;
    let scale = trace_plus.iter().chain(trace_minus).fold(dphi.abs(), |a, x| a.max(x.abs())).max(1.0)
        * (1.0 + plus.v[1].abs() + minus.v[1].abs() + plus.b[1].abs() + minus.b[1].abs());
    let close = |a: f64, b: f64| (a - b).abs() <= tol * scale;
    if !close(trace_plus[0], trace_minus[0]) {
        return Err(SmhdError::ConstraintViolation("[h] = 0 fails for the perturbation".into()));
    }
    let speed_plus = trace_plus[1] - plus.v[1] * dphi;
    let speed_minus = trace_minus[1] - minus.v[1] * dphi;
    if !close(speed_plus, speed_minus) {
        return Err(SmhdError::ConstraintViolation(
            "front speed d_t phi = v1 - v2_hat d_2 phi differs between sides".into(),
        ));
    }
    if !close(trace_plus[3], plus.b[1] * dphi) || !close(trace_minus[3], minus.b[1] * dphi) {
        return Err(SmhdError::ConstraintViolation("B1 = B2_hat d_2 phi fails on the sheet".into()));
    }
    let jump = (plus.v[1] - choice.lambda_plus * plus.b[1]) - (minus.v[1] - choice.lambda_minus * minus.b[1]);
    Ok(2.0 * p.g * trace_plus[0] * jump * dphi)
}
