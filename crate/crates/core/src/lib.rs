//! Self-adaptive CQ algorithms for the split equality problem.
//!
//! The problem: given bounded linear operators `A: H1 -> H3`,
//! `B: H2 -> H3` and closed convex sets `C` in `H1`, `Q` in `H2`, find
//! `x in C` and `y in Q` with `A x = B y`. This crate ships
//!
//! - minimal dense linear algebra over `f64` ([`linalg`]),
//! - exact metric projections and subgradient machinery for the constraint
//!   sets, including the half-space relaxations used by the relaxed
//!   algorithm variants ([`sets`]),
//! - the problem bundle and parameter schedules ([`problem`], [`schedules`]),
//! - one step engine per algorithm - self-adaptive Halpern-type and
//!   viscosity-type iterations, their relaxed forms, and the classical
//!   alternating, simultaneous, relaxed-alternating and Dong et al.
//!   baselines - plus the driver loop ([`engines`], [`mod@solve`]).
//!
//! Everything is deterministic: identical inputs yield identical run
//! records.

pub mod engines;
pub mod error;
pub mod linalg;
pub mod problem;
pub mod schedules;
pub mod sets;
pub mod solve;
pub mod spectral;

pub use engines::{
    dong_stepsize, residual_map, self_adaptive_stepsize, step_acqa, step_dong, step_racqa,
    step_scqa, step_shcqa, step_srhcqa, step_srvcqa, step_svcqa, IterateState, StepsizePolicy,
};
pub use error::{Error, Result};
pub use linalg::{combine, inner, norm, norm_sq, DenseOperator, Vector};
pub use problem::{SepProblem, SetHandle};
pub use schedules::{
    AffineContraction, AlphaSchedule, AnchorSchedule, AnchorSequence, ContractionPair,
    DeltaSchedule, N_START,
};
pub use sets::{
    relaxed_halfspace, BallSet, BoxSet, CylinderSet, HalfSpace, LevelSetFunction, ParabolicSet,
    ProjectableSet, MEMBERSHIP_TOL,
};
pub use solve::{
    first_crossing, solve, AlgorithmConfig, FixedGamma, Method, RunRecord, RunStatus, SeriesRow,
    StoppingRule,
};
pub use spectral::{spectral_norm, spectral_norm_sq};
