//! Shallow-water magnetohydrodynamics (SMHD): pointwise states and fluxes,
//! symmetric hyperbolic forms, Rankine–Hugoniot conditions across fronts,
//! shock admissibility and the structural-stability criteria for shocks and
//! current-vortex sheets.

pub mod discontinuity;
pub mod elastic;
pub mod error;
pub mod matrices;
pub mod shock;
pub mod spectral;
pub mod state;
pub mod symmetrization;

pub use discontinuity::{
    classify, classify_detailed, rh_residual, trace_quantities, Classification, DiscontinuityKind, RHResidual,
    SidePair, TraceQuantities, DEFAULT_TOL,
};
pub use elastic::{embed_elastodynamics, ElasticState, PolytropicEos};
pub use error::{Result, SmhdError};
pub use matrices::{boundary_matrix, quasilinear_matrices, Matrix5, MatrixForm, MatrixSet};
pub use shock::{
    characteristic_speeds, det_boundary_matrix_closed_form, hugoniot_downstream, lax_verdict, linearized_setup,
    rectilinear_shock, LaxVerdict, LinearizedShockSetup, MassFluxSign, RectilinearShock, ShockDiagnostics,
};
pub use state::{
    conserved_from_primitive, fluxes, gravity_wave_speed, primitive_from_conserved, ConservedVector, FrontGeometry,
    PhysParams, State, Vec5,
};
pub use symmetrization::{
    boundary_energy_term, cvs_nsc_verdict, cvs_sufficient_verdict, lambda_for_cvs, secondary_hyperbolic,
    secondary_matrices, secondary_residual_decomposition, CvsTag, CvsVerdict, SecondaryMatrices, SymmetrizerChoice,
};
