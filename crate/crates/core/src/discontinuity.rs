//! Jump conditions across a front and the classification of two-sided states.

use serde::{Deserialize, Serialize};

use crate::error::{Result, SmhdError};
use crate::state::{FrontGeometry, PhysParams, State, Vec5};

/// Default relative tolerance for zero tests.
pub const DEFAULT_TOL: f64 = 1e-9;

/// Quantities within `AMBIGUITY_BAND * tol * scale` of zero, but outside
/// `tol * scale`, are reported as ambiguous rather than assigned a branch.
pub const AMBIGUITY_BAND: f64 = 100.0;

fn default_g() -> f64 {
    1.0
}

/// Two constant states on either side of a front.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SidePair {
    pub plus: State,
    pub minus: State,
    #[serde(default)]
    pub front: FrontGeometry,
    #[serde(default = "default_g")]
    pub g: f64,
}

impl SidePair {
    pub fn new(plus: State, minus: State, front: FrontGeometry, params: PhysParams) -> Self {
        Self { plus, minus, front, g: params.g }
    }

    pub fn params(&self) -> PhysParams {
        PhysParams { g: self.g }
    }

    pub fn check(&self) -> Result<()> {
        self.params().check()?;
        self.plus.check()?;
        self.minus.check()?;
        if !(self.front.slope.is_finite() && self.front.speed.is_finite()) {
            return Err(SmhdError::NonFinite("front geometry"));
        }
        Ok(())
    }

    /// Negate `B` on both sides.
    pub fn flip_field(&self) -> Self {
        Self { plus: self.plus.flip_field(), minus: self.minus.flip_field(), ..*self }
    }

    /// Mirror `x1 -> -x1`: sides swap, normal components and the front
    /// slope/speed change sign.
    pub fn reflect(&self) -> Self {
        Self {
            plus: self.minus.reflect_x1(),
            minus: self.plus.reflect_x1(),
            front: FrontGeometry::new(-self.front.slope, -self.front.speed),
            g: self.g,
        }
    }

    /// Flip `B` on both sides when `B_N` is negative, so that `b >= 0`.
    pub fn canonical_field(&self) -> Self {
        if self.front.normal_part(self.minus.b) * self.minus.h < 0.0 {
            self.flip_field()
        } else {
            *self
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SideTrace {
    /// Mass flux `h (v_N - d_t phi)`.
    pub m: f64,
    /// `h B_N`.
    pub b: f64,
    pub vn: f64,
    pub vtau: f64,
    pub bn: f64,
    pub btau: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TraceQuantities {
    pub plus: SideTrace,
    pub minus: SideTrace,
    /// `<h> = h+ + h-`.
    pub h_mean: f64,
    /// `|N|²`.
    pub norm_sq: f64,
}

fn side_trace(u: &State, f: &FrontGeometry) -> SideTrace {
    let vn = f.normal_part(u.v);
    let bn = f.normal_part(u.b);
    SideTrace {
        m: u.h * (vn - f.speed),
        b: u.h * bn,
        vn,
        vtau: f.tangential_part(u.v),
        bn,
        btau: f.tangential_part(u.b),
    }
}

pub fn trace_quantities(sp: &SidePair) -> Result<TraceQuantities> {
    sp.check()?;
    Ok(TraceQuantities {
        plus: side_trace(&sp.plus, &sp.front),
        minus: side_trace(&sp.minus, &sp.front),
        h_mean: sp.plus.h + sp.minus.h,
        norm_sq: sp.front.norm_sq(),
    })
}

/// Residual of the reduced jump conditions
/// `[m] = 0`, `[b] = 0`, `[h](m² - b² - (g/2)|N|²<h>h+h-) = 0`,
/// `m[v_tau] - b[B_tau] = 0`, `m[B_tau] - b[v_tau] = 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RHResidual {
    pub r: Vec5,
    /// `max(1, |m+|, |b+|, g <h>²)`, the threshold scale for zero tests.
    pub scale: f64,
    /// Magnitude of the terms entering each component; `r[i] / term_scale[i]`
    /// is the relative residual.
    pub term_scale: Vec5,
}

impl RHResidual {
    pub fn relative(&self) -> f64 {
        self.r.iter().zip(&self.term_scale).map(|(r, s)| r.abs() / s).fold(0.0, f64::max)
    }

    pub fn norm(&self) -> f64 {
        self.r.iter().map(|x| x * x).sum::<f64>().sqrt()
    }
}

pub fn rh_residual(sp: &SidePair) -> Result<RHResidual> {
    let t = trace_quantities(sp)?;
    let (p, q) = (&t.plus, &t.minus);
    let (hp, hm) = (sp.plus.h, sp.minus.h);
    let g = sp.g;
    let m = 0.5 * (p.m + q.m);
    let b = 0.5 * (p.b + q.b);
    let dh = hp - hm;
    let hug = 0.5 * g * t.norm_sq * t.h_mean * hp * hm;
    let dvt = p.vtau - q.vtau;
    let dbt = p.btau - q.btau;
    let r = [p.m - q.m, p.b - q.b, dh * (m * m - b * b - hug), m * dvt - b * dbt, m * dbt - b * dvt];
    let sigma = sp.front.speed.abs();
    let tang = p.vtau.abs() + q.vtau.abs() + p.btau.abs() + q.btau.abs();
    let term_scale = [
        (hp * (p.vn.abs() + sigma) + hm * (q.vn.abs() + sigma)).max(1.0),
        (hp * p.bn.abs() + hm * q.bn.abs()).max(1.0),
        (hp + hm) * (m * m + b * b + hug).max(1.0),
        ((m.abs() + b.abs()) * tang).max(1.0),
        ((m.abs() + b.abs()) * tang).max(1.0),
    ];
    let scale = 1f64.max(p.m.abs()).max(p.b.abs()).max(g * t.h_mean * t.h_mean);
    Ok(RHResidual { r, scale, term_scale })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum DiscontinuityKind {
    Shock,
    CurrentVortexSheet,
    AlfvenDiscontinuity,
    Continuous,
    Inadmissible(String),
}

impl DiscontinuityKind {
    pub fn name(&self) -> &'static str {
        match self {
            Self::Shock => "Shock",
            Self::CurrentVortexSheet => "CurrentVortexSheet",
            Self::AlfvenDiscontinuity => "AlfvenDiscontinuity",
            Self::Continuous => "Continuous",
            Self::Inadmissible(_) => "Inadmissible",
        }
    }
}

impl std::fmt::Display for DiscontinuityKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Self::Inadmissible(why) => write!(f, "Inadmissible ({why})"),
            other => f.write_str(other.name()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Classification {
    pub kind: DiscontinuityKind,
    pub trace: TraceQuantities,
    pub residual: RHResidual,
    pub notes: Vec<String>,
}

/// Classify with the precedence Inadmissible, Continuous, current-vortex
/// sheet, Alfvén discontinuity, shock.
pub fn classify(sp: &SidePair, tol: f64) -> Result<DiscontinuityKind> {
    classify_detailed(sp, tol).map(|c| c.kind)
}

pub fn classify_detailed(sp: &SidePair, tol: f64) -> Result<Classification> {
    let trace = trace_quantities(sp)?;
    let residual = rh_residual(sp)?;
    let thr = tol * residual.scale;
    let zero = |x: f64| x.abs() <= thr;
    let mut notes = Vec::new();
    let done = |kind, notes| Ok(Classification { kind, trace, residual, notes });

    let rel = residual.relative();
    if rel > tol {
        let worst = residual
            .r
            .iter()
            .zip(&residual.term_scale)
            .map(|(r, s)| r.abs() / s)
            .enumerate()
            .fold((0, 0.0), |acc, (i, x)| if x > acc.1 { (i, x) } else { acc });
        const NAMES: [&str; 5] = ["[m]", "[b]", "height condition", "m[v_tau]-b[B_tau]", "m[B_tau]-b[v_tau]"];
        return done(
            DiscontinuityKind::Inadmissible(format!(
                "jump condition {} violated (relative residual {:.3e})",
                NAMES[worst.0], worst.1
            )),
            notes,
        );
    }

    let (u, w) = (&sp.plus, &sp.minus);
    let jumps = [u.h - w.h, u.v[0] - w.v[0], u.v[1] - w.v[1], u.b[0] - w.b[0], u.b[1] - w.b[1]];
    if jumps.iter().all(|&j| zero(j)) {
        return done(DiscontinuityKind::Continuous, notes);
    }

    let m = 0.5 * (trace.plus.m + trace.minus.m);
    let b = 0.5 * (trace.plus.b + trace.minus.b);
    let alf = m.abs() - b.abs();
    let dh = jumps[0];

    let ambiguous = |name: &str, x: f64| -> Result<()> {
        if x.abs() > thr && x.abs() <= AMBIGUITY_BAND * thr {
            Err(SmhdError::AmbiguousClassification(format!(
                "{name} = {x:.3e} lies between the zero threshold {thr:.3e} and {:.3e}",
                AMBIGUITY_BAND * thr
            )))
        } else {
            Ok(())
        }
    };
    ambiguous("m", m)?;
    ambiguous("[h]", dh)?;

    if zero(m) {
        ambiguous("b", b)?;
        if zero(b) {
            if zero(dh) {
                return done(DiscontinuityKind::CurrentVortexSheet, notes);
            }
            return done(DiscontinuityKind::Inadmissible("m = b = 0 requires [h] = 0".into()), notes);
        }
        notes.push("m = 0 with b != 0: the jump conditions and h > 0 force a continuous flow".into());
        return done(DiscontinuityKind::Continuous, notes);
    }

    ambiguous("|m| - |b|", alf)?;
    match (zero(alf), zero(dh)) {
        (true, true) => done(DiscontinuityKind::AlfvenDiscontinuity, notes),
        (false, false) => done(DiscontinuityKind::Shock, notes),
        (false, true) => {
            notes.push("m² != b² and [h] = 0 force [v_tau] = [B_tau] = 0".into());
            done(DiscontinuityKind::Continuous, notes)
        }
        (true, false) => done(DiscontinuityKind::Inadmissible("m² = b² requires [h] = 0".into()), notes),
    }
}
