//! Simulation configuration, read from JSON.

use serde::{Deserialize, Serialize};
use smhd::{PhysParams, SidePair, State};

use crate::error::{Result, SimError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum Boundary {
    /// Zero-gradient extrapolation.
    #[default]
    Outflow,
    Periodic,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Boundaries {
    #[serde(default)]
    pub x1_lower: Boundary,
    #[serde(default)]
    pub x1_upper: Boundary,
    #[serde(default = "periodic")]
    pub x2: Boundary,
}

fn periodic() -> Boundary {
    Boundary::Periodic
}

impl Default for Boundaries {
    fn default() -> Self {
        Self { x1_lower: Boundary::Outflow, x1_upper: Boundary::Outflow, x2: Boundary::Periodic }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum DivergenceStencil {
    /// One-sided `(f[i+1] - f[i]) / dx` in each direction.
    #[default]
    Forward,
    /// `(f[i+1] - f[i-1]) / (2 dx)`.
    Central,
}

/// Parameters of the planar stationary shock `x1 = 0` (downstream on `x1 > 0`).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ShockParams {
    pub h_minus: f64,
    pub ratio: f64,
    pub b1_plus: f64,
    #[serde(default)]
    pub b2: f64,
}

/// Compactly supported pressure bump for the linearized problem.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PulseSpec {
    pub amplitude: f64,
    pub center: [f64; 2],
    pub radius: f64,
    /// `compatible` sets `B = -p (M1, M2)` so the linearized constraint
    /// holds; `zero` leaves `B = 0`.
    #[serde(default)]
    pub field: PulseField,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum PulseField {
    #[default]
    Compatible,
    Zero,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum InitialData {
    Uniform {
        state: State,
    },
    /// `minus` on `x1 < position`, `plus` on `x1 > position`; the front
    /// geometry of the pair is not used.
    Riemann {
        pair: SidePair,
        #[serde(default)]
        position: f64,
    },
    /// Rectilinear shock with front `x1 = position + amplitude cos(wavenumber x2)`.
    PerturbedShock {
        shock: ShockParams,
        #[serde(default)]
        amplitude: f64,
        #[serde(default)]
        wavenumber: f64,
        #[serde(default)]
        position: f64,
    },
    /// Smooth doubly periodic data with `div(hB) = 0`.
    SmoothVortex {
        #[serde(default = "one_tenth")]
        amplitude: f64,
    },
    /// Smooth exact field maintained by a source term.
    Manufactured,
    /// Linearized half-plane problem behind a rectilinear shock.
    LinearPulse {
        shock: ShockParams,
        pulse: PulseSpec,
    },
}

fn one_tenth() -> f64 {
    0.1
}

fn default_cfl() -> f64 {
    0.45
}

fn default_g() -> f64 {
    1.0
}

fn one() -> usize {
    1
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimConfig {
    pub dimensions: usize,
    /// `[n1, n2]`; `n2` is ignored in 1D.
    pub cells: [usize; 2],
    pub x1: [f64; 2],
    #[serde(default = "unit_interval")]
    pub x2: [f64; 2],
    #[serde(default = "default_cfl")]
    pub cfl: f64,
    pub end_time: f64,
    #[serde(default = "default_g")]
    pub g: f64,
    #[serde(default)]
    pub boundary: Boundaries,
    /// Use this step instead of the CFL step; rejected if it exceeds the limit.
    #[serde(default)]
    pub fixed_dt: Option<f64>,
    /// Clip heights below `1e-10` instead of aborting.
    #[serde(default)]
    pub height_floor: bool,
    #[serde(default = "one")]
    pub record_every: usize,
    #[serde(default)]
    pub divergence_stencil: DivergenceStencil,
    pub initial: InitialData,
}

fn unit_interval() -> [f64; 2] {
    [0.0, 1.0]
}

pub const HEIGHT_FLOOR: f64 = 1e-10;
pub const MIN_CELLS: usize = 8;

impl SimConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: Self = serde_json::from_str(text)?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn params(&self) -> PhysParams {
        PhysParams { g: self.g }
    }

    pub fn n2(&self) -> usize {
        if self.dimensions == 1 {
            1
        } else {
            self.cells[1]
        }
    }

    pub fn dx(&self) -> [f64; 2] {
        [(self.x1[1] - self.x1[0]) / self.cells[0] as f64, (self.x2[1] - self.x2[0]) / self.n2() as f64]
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(SimError::Config(m));
        if !(self.dimensions == 1 || self.dimensions == 2) {
            return bad(format!("dimensions must be 1 or 2, got {}", self.dimensions));
        }
        if self.cells[0] < MIN_CELLS || (self.dimensions == 2 && self.cells[1] < MIN_CELLS) {
            return bad(format!("at least {MIN_CELLS} cells per direction required, got {:?}", self.cells));
        }
        for (name, r) in [("x1", self.x1), ("x2", self.x2)] {
            if !(r[0].is_finite() && r[1].is_finite() && r[1] > r[0]) {
                return bad(format!("{name} extent must be finite and increasing, got {r:?}"));
            }
        }
        if !(self.end_time.is_finite() && self.end_time > 0.0) {
            return bad(format!("end_time must be positive, got {}", self.end_time));
        }
        if !(self.g.is_finite() && self.g > 0.0) {
            return bad(format!("g must be positive, got {}", self.g));
        }
        if self.record_every == 0 {
            return bad("record_every must be at least 1".into());
        }
        if let Some(dt) = self.fixed_dt {
            if !(dt.is_finite() && dt > 0.0) {
                return bad(format!("fixed_dt must be positive, got {dt}"));
            }
        }
        let b = self.boundary;
        if (b.x1_lower == Boundary::Periodic) != (b.x1_upper == Boundary::Periodic) {
            return bad("periodic x1 boundaries must be set on both edges".into());
        }
        if !(self.cfl > 0.0 && self.cfl < 1.0) {
            return Err(SimError::CflViolation(format!("Courant number {} outside (0, 1)", self.cfl)));
        }
        Ok(())
    }
}
