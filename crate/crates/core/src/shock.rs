//! Shock waves: Hugoniot states, characteristic speeds, the boundary-matrix
//! determinant, Lax conditions and the rectilinear reference shock with its
//! linearization coefficients.

use serde::{Deserialize, Serialize};

use crate::discontinuity::{classify_detailed, DiscontinuityKind, SidePair};
use crate::error::{Result, SmhdError};
use crate::state::{directional_speeds, FrontGeometry, PhysParams, State, Vec5};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum MassFluxSign {
    #[default]
    Positive,
    Negative,
}

impl MassFluxSign {
    fn value(self) -> f64 {
        match self {
            Self::Positive => 1.0,
            Self::Negative => -1.0,
        }
    }
}

/// Downstream state and front speed on the one-parameter Hugoniot family
/// through `minus`, parametrized by the downstream height.
///
/// Tangential components of `v` and `B` are continuous; `b = h B_N` is
/// continuous; the mass flux follows from
/// `m² = b² + (g/2) |N|² (h+ + h-) h+ h-`.
pub fn hugoniot_downstream(
    minus: &State,
    slope: f64,
    h_plus: f64,
    p: &PhysParams,
    sign: MassFluxSign,
) -> Result<(State, f64)> {
    minus.check()?;
    p.check()?;
    if !(h_plus.is_finite() && h_plus > 0.0) {
        return Err(SmhdError::NonPositiveHeight(h_plus));
    }
    if h_plus == minus.h {
        return Err(SmhdError::DegenerateHeight(h_plus));
    }
    let geo = FrontGeometry::new(slope, 0.0);
    let hm = minus.h;
    let b = hm * geo.normal_part(minus.b);
    let m = sign.value() * (b * b + 0.5 * p.g * geo.norm_sq() * (h_plus + hm) * h_plus * hm).sqrt();
    let speed = geo.normal_part(minus.v) - m / hm;
    let vn_plus = speed + m / h_plus;
    let bn_plus = b / h_plus;
    let v = geo.compose(vn_plus, geo.tangential_part(minus.v));
    let bf = geo.compose(bn_plus, geo.tangential_part(minus.b));
    Ok((State::new(h_plus, v, bf), speed))
}

/// Eigenvalues of `A0^{-1}(A1 - A2 d_2 phi)`, ascending:
/// `v_N - c_gN, v_N - c_aN, v_N, v_N + c_aN, v_N + c_gN` with
/// `c_aN = |B_N|`, `c_gN = sqrt(B_N² + g h |N|²)`.
pub fn characteristic_speeds(u: &State, f: &FrontGeometry, p: &PhysParams) -> Result<Vec5> {
    u.check()?;
    Ok(directional_speeds(u, f.normal(), p))
}

/// `det(A1 - A0 d_t phi - A2 d_2 phi) = (g/h⁶) m (m² - b²)(m² - b² - g|N|²h³)`.
pub fn det_boundary_matrix_closed_form(u: &State, f: &FrontGeometry, p: &PhysParams) -> Result<f64> {
    u.check()?;
    let h = u.h;
    let m = h * (f.normal_part(u.v) - f.speed);
    let b = h * f.normal_part(u.b);
    let d = m * m - b * b;
    Ok(p.g / h.powi(6) * m * d * (d - p.g * f.norm_sq() * h * h * h))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LaxVerdict {
    /// Shock family index when the Lax k-shock inequalities hold for some k.
    pub k: Option<usize>,
    pub satisfied: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ShockDiagnostics {
    pub eigenvalues_minus: Vec5,
    pub eigenvalues_plus: Vec5,
    pub cg_n_minus: f64,
    pub cg_n_plus: f64,
    pub ca_n_minus: f64,
    pub ca_n_plus: f64,
    pub det_boundary_minus: f64,
    pub det_boundary_plus: f64,
    pub lax: LaxVerdict,
    /// `h+ - h-` in the canonical orientation (`m > 0`, so `+` is downstream).
    pub height_jump: f64,
    pub front_speed: f64,
    pub mass_flux: f64,
    pub field_flux: f64,
    /// Sides were relabeled because `m < 0` in the input.
    pub relabeled: bool,
    /// `B` was negated on both sides because `b < 0`.
    pub field_flipped: bool,
}

/// Orientation with `m > 0` and `b >= 0`.
fn canonicalize(sp: &SidePair) -> (SidePair, bool, bool) {
    let f = &sp.front;
    let m = sp.minus.h * (f.normal_part(sp.minus.v) - f.speed);
    let (mut c, relabeled) = if m < 0.0 { (sp.reflect(), true) } else { (*sp, false) };
    let b = c.minus.h * c.front.normal_part(c.minus.b);
    let flipped = b < 0.0;
    if flipped {
        c = c.flip_field();
    }
    (c, relabeled, flipped)
}

/// Lax k-shock test with `lambda_0^- = -inf` and `lambda_6^+ = +inf`.
fn lax_indices(minus: &Vec5, plus: &Vec5, speed: f64) -> Vec<usize> {
    (1..=5)
        .filter(|&k| {
            let below_minus = if k == 1 { f64::NEG_INFINITY } else { minus[k - 2] };
            let above_plus = if k == 5 { f64::INFINITY } else { plus[k] };
            below_minus < speed && speed < minus[k - 1] && plus[k - 1] < speed && speed < above_plus
        })
        .collect()
}

pub fn lax_verdict(sp: &SidePair) -> Result<ShockDiagnostics> {
    lax_verdict_with_tol(sp, crate::discontinuity::DEFAULT_TOL)
}

pub fn lax_verdict_with_tol(sp: &SidePair, tol: f64) -> Result<ShockDiagnostics> {
    let c = classify_detailed(sp, tol)?;
    if c.kind != DiscontinuityKind::Shock {
        return Err(SmhdError::NotAShock(c.kind.to_string()));
    }
    let (cp, relabeled, field_flipped) = canonicalize(sp);
    let params = cp.params();
    let f = cp.front;
    let lam_minus = characteristic_speeds(&cp.minus, &f, &params)?;
    let lam_plus = characteristic_speeds(&cp.plus, &f, &params)?;
    let ks = lax_indices(&lam_minus, &lam_plus, f.speed);
    if ks.contains(&2) {
        log::warn!("Lax 2-shock inequalities hold for {cp:?}; they should contradict [m] = [b] = 0");
    }
    let k = ks.first().copied();
    let side = |u: &State| {
        let bn = f.normal_part(u.b);
        (bn.abs(), (bn * bn + params.g * u.h * f.norm_sq()).sqrt())
    };
    let (ca_m, cg_m) = side(&cp.minus);
    let (ca_p, cg_p) = side(&cp.plus);
    Ok(ShockDiagnostics {
        eigenvalues_minus: lam_minus,
        eigenvalues_plus: lam_plus,
        cg_n_minus: cg_m,
        cg_n_plus: cg_p,
        ca_n_minus: ca_m,
        ca_n_plus: ca_p,
        det_boundary_minus: det_boundary_matrix_closed_form(&cp.minus, &f, &params)?,
        det_boundary_plus: det_boundary_matrix_closed_form(&cp.plus, &f, &params)?,
        lax: LaxVerdict { k, satisfied: k == Some(1) },
        height_jump: cp.plus.h - cp.minus.h,
        front_speed: f.speed,
        mass_flux: cp.minus.h * (f.normal_part(cp.minus.v) - f.speed),
        field_flux: cp.minus.h * f.normal_part(cp.minus.b),
        relabeled,
        field_flipped,
    })
}

/// Planar stationary shock `x1 = 0` in the frame `v2± = 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RectilinearShock {
    pub h_minus: f64,
    pub h_plus: f64,
    pub v1_minus: f64,
    pub v1_plus: f64,
    pub b1_minus: f64,
    pub b1_plus: f64,
    pub b2: f64,
}

impl RectilinearShock {
    pub fn ratio(&self) -> f64 {
        self.h_plus / self.h_minus
    }

    pub fn minus_state(&self) -> State {
        State::new(self.h_minus, [self.v1_minus, 0.0], [self.b1_minus, self.b2])
    }

    pub fn plus_state(&self) -> State {
        State::new(self.h_plus, [self.v1_plus, 0.0], [self.b1_plus, self.b2])
    }

    pub fn side_pair(&self, p: &PhysParams) -> SidePair {
        SidePair::new(self.plus_state(), self.minus_state(), FrontGeometry::flat(), *p)
    }
}

/// Stationary rectilinear shock with `h+ = R h-`:
/// `h+/h- = v1-/v1+ = B1-/B1+` and `(v1+)² - (B1+)² = (g h-/2)(1 + h-/h+)`.
pub fn rectilinear_shock(h_minus: f64, ratio: f64, b1_plus: f64, b2: f64, p: &PhysParams) -> Result<RectilinearShock> {
    p.check()?;
    if !(h_minus.is_finite() && h_minus > 0.0) {
        return Err(SmhdError::NonPositiveHeight(h_minus));
    }
    if !(ratio.is_finite() && ratio > 0.0) || ratio == 1.0 {
        return Err(SmhdError::InvalidRatio(ratio));
    }
    if !(b1_plus.is_finite() && b1_plus > 0.0) {
        return Err(SmhdError::InvalidField("B1+ must be positive"));
    }
    if !b2.is_finite() {
        return Err(SmhdError::NonFinite("B2"));
    }
    let v1_plus = (0.5 * p.g * h_minus * (1.0 + 1.0 / ratio) + b1_plus * b1_plus).sqrt();
    Ok(RectilinearShock {
        h_minus,
        h_plus: ratio * h_minus,
        v1_minus: ratio * v1_plus,
        v1_plus,
        b1_minus: ratio * b1_plus,
        b1_plus,
        b2,
    })
}

/// Dimensionless coefficients of the linearized problem behind a
/// rectilinear shock.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LinearizedShockSetup {
    /// Downstream Froude number `v1+ / c+`.
    pub m: f64,
    pub m1: f64,
    pub m2: f64,
    /// `sqrt(1 + M1²)`.
    pub mstar: f64,
    /// `h+ / h-`.
    pub r: f64,
    /// `sqrt(M*² - M²)`.
    pub beta: f64,
    pub d0: f64,
    pub ell0: f64,
    pub a0: f64,
}

impl LinearizedShockSetup {
    /// Background field `(M1, M2)`.
    pub fn field(&self) -> [f64; 2] {
        [self.m1, self.m2]
    }
}

pub fn linearized_setup(s: &RectilinearShock, p: &PhysParams) -> Result<LinearizedShockSetup> {
    p.check()?;
    let c_plus = (p.g * s.h_plus).sqrt();
    let m = s.v1_plus / c_plus;
    let m1 = s.b1_plus / c_plus;
    let m2 = s.b2 / c_plus;
    let mstar = (1.0 + m1 * m1).sqrt();
    if !(m1 < m && m < mstar) {
        return Err(SmhdError::LaxViolation { m1, m, mstar });
    }
    let r = s.ratio();
    let beta2 = mstar * mstar - m * m;
    Ok(LinearizedShockSetup {
        m,
        m1,
        m2,
        mstar,
        r,
        beta: beta2.sqrt(),
        d0: (mstar * mstar + m * m) / (2.0 * m * m),
        ell0: m1 * m2,
        a0: -beta2 * r / (2.0 * m * m),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::discontinuity::{classify, rh_residual, DEFAULT_TOL};

    const G1: PhysParams = PhysParams { g: 1.0 };

    #[test]
    fn rational_hugoniot_state() {
        let minus = State::new(1.0, [2.0, 0.0], [1.0, 0.0]);
        let (plus, speed) = hugoniot_downstream(&minus, 0.0, 2.0, &G1, MassFluxSign::Positive).unwrap();
        assert_eq!(speed, 0.0);
        assert_eq!(plus, State::new(2.0, [1.0, 0.0], [0.5, 0.0]));
    }

    #[test]
    fn near_continuous_limit() {
        let minus = State::new(1.0, [2.0, 0.0], [1.0, 0.0]);
        let (plus, _) = hugoniot_downstream(&minus, 0.0, 1.0 + 1e-9, &G1, MassFluxSign::Positive).unwrap();
        assert!((plus.v[0] - minus.v[0]).abs() < 1e-8);
        assert!((plus.b[0] - minus.b[0]).abs() < 1e-8);
    }

    #[test]
    fn degenerate_and_invalid_heights() {
        let minus = State::new(1.0, [2.0, 0.0], [1.0, 0.0]);
        assert_eq!(
            hugoniot_downstream(&minus, 0.0, 1.0, &G1, MassFluxSign::Positive),
            Err(SmhdError::DegenerateHeight(1.0))
        );
        assert!(hugoniot_downstream(&minus, 0.0, -2.0, &G1, MassFluxSign::Positive).is_err());
    }

    #[test]
    fn speeds_examples() {
        let u = State::new(1.0, [0.0; 2], [1.0, 0.0]);
        let s = characteristic_speeds(&u, &FrontGeometry::flat(), &G1).unwrap();
        let r2 = 2f64.sqrt();
        let expect = [-r2, -1.0, 0.0, 1.0, r2];
        for i in 0..5 {
            assert!((s[i] - expect[i]).abs() < 1e-15);
        }
        let u = State::new(2.0, [0.5, 0.3], [0.0; 2]);
        let f = FrontGeometry::new(0.5, 0.0);
        let s = characteristic_speeds(&u, &f, &G1).unwrap();
        let vn = 0.5 - 0.3 * 0.5;
        let c = (2.0f64 * 1.25).sqrt();
        assert!((s[0] - (vn - c)).abs() < 1e-15 && (s[4] - (vn + c)).abs() < 1e-15);
        assert!(s[1..4].iter().all(|&x| (x - vn).abs() < 1e-15));
    }

    #[test]
    fn determinant_roots() {
        let u = State::new(1.3, [0.7, 0.2], [0.4, -0.1]);
        let f = FrontGeometry::new(0.2, 0.0);
        // front moving with the fluid
        let on_m0 = FrontGeometry::new(0.2, f.normal_part(u.v));
        assert_eq!(det_boundary_matrix_closed_form(&u, &on_m0, &G1).unwrap(), 0.0);
        // m = b: v_N - speed = B_N
        let on_alfven = FrontGeometry::new(0.2, f.normal_part(u.v) - f.normal_part(u.b));
        assert!(det_boundary_matrix_closed_form(&u, &on_alfven, &G1).unwrap().abs() < 1e-15);
    }

    #[test]
    fn rational_shock_lax() {
        let minus = State::new(1.0, [2.0, 0.0], [1.0, 0.0]);
        let plus = State::new(2.0, [1.0, 0.0], [0.5, 0.0]);
        let sp = SidePair::new(plus, minus, FrontGeometry::flat(), G1);
        let d = lax_verdict(&sp).unwrap();
        assert!(d.lax.satisfied);
        assert_eq!(d.lax.k, Some(1));
        assert_eq!(d.height_jump, 1.0);
        assert_eq!(d.mass_flux, 2.0);
        assert_eq!(d.field_flux, 1.0);
        assert!((d.cg_n_minus - 2f64.sqrt()).abs() < 1e-15);
        assert!((d.cg_n_plus - 1.5).abs() < 1e-15);

        // reversed pair: expansion shock
        let rev = SidePair::new(minus, plus, FrontGeometry::flat(), G1);
        let d = lax_verdict(&rev).unwrap();
        assert!(!d.lax.satisfied);
        assert!(d.height_jump < 0.0);
    }

    #[test]
    fn lax_requires_shock() {
        let u = State::new(1.0, [0.3, 0.0], [0.2, 0.0]);
        let sp = SidePair::new(u, u, FrontGeometry::new(0.0, 0.3), G1);
        assert!(matches!(lax_verdict(&sp), Err(SmhdError::NotAShock(_))));
    }

    #[test]
    fn rectilinear_rational_case() {
        let s = rectilinear_shock(1.0, 2.0, 0.5, 0.0, &G1).unwrap();
        assert_eq!(s.v1_plus, 1.0);
        assert_eq!(s.v1_minus, 2.0);
        assert_eq!(s.b1_minus, 1.0);
        assert_eq!(s.h_plus, 2.0);
        let sp = s.side_pair(&G1);
        assert_eq!(rh_residual(&sp).unwrap().r, [0.0; 5]);
        assert_eq!(classify(&sp, DEFAULT_TOL).unwrap(), DiscontinuityKind::Shock);
        assert_eq!(rectilinear_shock(1.0, 1.0, 0.5, 0.0, &G1), Err(SmhdError::InvalidRatio(1.0)));
        assert!(rectilinear_shock(1.0, 2.0, 0.0, 0.0, &G1).is_err());
    }

    #[test]
    fn rational_linearization() {
        let s = rectilinear_shock(1.0, 2.0, 0.5, 0.0, &G1).unwrap();
        let l = linearized_setup(&s, &G1).unwrap();
        let r2 = 2f64.sqrt();
        assert!((l.m - 1.0 / r2).abs() < 1e-15);
        assert!((l.m1 - 0.5 / r2).abs() < 1e-15);
        assert!((l.mstar - 1.125f64.sqrt()).abs() < 1e-15);
        assert!((l.beta - 0.625f64.sqrt()).abs() < 1e-15);
        assert!((l.d0 - 1.625).abs() < 1e-14);
        assert!((l.a0 + 1.25).abs() < 1e-14);
        assert_eq!(l.ell0, 0.0);
        assert_eq!(l.r, 2.0);
        let expansion = rectilinear_shock(1.0, 0.5, 0.5, 0.0, &G1).unwrap();
        assert!(matches!(linearized_setup(&expansion, &G1), Err(SmhdError::LaxViolation { .. })));
    }

    #[test]
    fn weak_field_window() {
        let s = rectilinear_shock(1.0, 1.5, 1e-8, 0.0, &G1).unwrap();
        let l = linearized_setup(&s, &G1).unwrap();
        assert!(l.m1 < 1e-7);
        assert!((l.mstar - 1.0).abs() < 1e-15);
        assert!(0.0 < l.m && l.m < 1.0);
    }
}
