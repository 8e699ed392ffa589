//! Spectral Hermite methods for kinetic equations with collisional
//! stabilization.
//!
//! This crate discretizes velocity space with Hermite-function expansions —
//! in both the asymmetrically-weighted (AW) and symmetrically-weighted (SW)
//! flavors — and provides:
//!
//! * the basis toolkit: evaluation, norms, derivative ladders, Gauss–Hermite
//!   quadrature, and function projection ([`basis`], [`quadrature`]);
//! * diagonal collisional stabilization operators of arbitrary even order 2k
//!   built from the velocity-space raising/lowering ladder, annihilating the
//!   first k moments ([`lb`]);
//! * the constant-advection model problems that isolate the Hermite
//!   streaming ladder, including closed-form solutions used as test oracles
//!   ([`advection`]);
//! * an implicit trapezoidal integrator with provable decay of a weighted
//!   coefficient norm ([`trapezoid`]);
//! * the periodic electrostatic Vlasov–Poisson system in a Fourier × Hermite
//!   representation with an implicit midpoint step, Picard-iterated field
//!   coupling, and advisory stability bounds ([`vlasov`]);
//! * conserved-moment diagnostics, per-step records, and CSV/summary output
//!   ([`diagnostics`]).
//!
//! Numerical conventions live with their modules; the short version: AW
//! expansions f = Σ Cₙ Hₙ e^{−v²} conserve physical moments and suit kinetic
//! problems, SW expansions f = Σ Cₙ Hₙ e^{−v²/2} give exactly antisymmetric
//! streaming and thus exact norm conservation. Coefficients travel as
//! [`basis::CoefficientVector`]s tagged with their basis and normalization
//! convention, so mixing incompatible representations is an error rather
//! than a silent miscomputation.

pub mod advection;
pub mod basis;
pub mod diagnostics;
pub mod error;
pub mod lb;
pub mod quadrature;
pub mod trapezoid;
pub mod vlasov;

mod solver;

pub use basis::{
    hermite_derivative_coeffs, hermite_eval, hermite_eval_all, hermite_norm_sq,
    polynomial_derivative, project, weighted_norm_sq, BasisKind, CoefficientVector, Convention,
    HermiteBasis, MAX_TRUNCATION,
};
pub use error::{Error, Result};
pub use lb::LbOperator;
pub use quadrature::QuadratureRule;

pub use advection::{
    closed_form_aw, exact_coeffs_aw, exact_coeffs_sw, rhs_aw, rhs_sw, AdvectionSystem,
};
pub use trapezoid::{
    chi, stability_norm_y, stability_norm_y_parts, time_step_heuristic, trap_step,
    StabilityWeights, TrapState,
};
pub use vlasov::{
    field_max_estimate, gauss_residual, poisson_solve, stability_bounds, vlasov_rhs, vp_step,
    CoefficientField, Dealias, ElectricField, FieldMaxEstimate, FieldTreatment, PicardStats,
    PoissonSolution, StabilityBounds, VpConfig, NEUTRALITY_WARN_THRESHOLD,
};

pub use diagnostics::{
    advect_record, field_energy, hermite_weighted_h, moment, moment_overlaps, summarize,
    velocity_moment, vp_record, write_advect_csv_header, write_advect_csv_row,
    write_vp_csv_header, write_vp_csv_row, AdvectRecord, DiagnosticsRecord, QuantitySummary,
    RunSummary,
};
