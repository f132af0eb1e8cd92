//! Finite-volume solvers for the conservative SMHD system and an explicit
//! solver for the linearized problem behind a planar shock.

pub mod config;
pub mod diagnostics;
pub mod error;
pub mod fields;
pub mod hll;
pub mod linear;
pub mod reduce;
pub mod result;
pub mod solver;

pub use config::{Boundaries, Boundary, DivergenceStencil, InitialData, PulseField, PulseSpec, ShockParams, SimConfig};
pub use error::{Result, SimError};
pub use hll::hll_flux;
pub use linear::linear_halfplane_simulate;
pub use result::{Record, SimResult, Snapshot, Summary};
pub use solver::{perturbed_shock_experiment, simulate_1d, simulate_2d, FvSolver};

/// Dispatches on the configured dimension and initial data.
pub fn simulate(cfg: &SimConfig) -> Result<SimResult> {
    cfg.validate()?;
    match &cfg.initial {
        InitialData::LinearPulse { shock, pulse } => {
            let p = cfg.params();
            let s = smhd::rectilinear_shock(shock.h_minus, shock.ratio, shock.b1_plus, shock.b2, &p)?;
            let setup = smhd::linearized_setup(&s, &p)?;
            linear_halfplane_simulate(&setup, cfg, pulse)
        }
        _ if cfg.dimensions == 1 => simulate_1d(cfg),
        _ => simulate_2d(cfg),
    }
}
