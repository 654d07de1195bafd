//! Holonomic loops on subspace manifolds: bounds, synthesis, and simulation.
//!
//! A d-dimensional quantum system driven by a Hamiltonian schedule carries an
//! n-dimensional subspace along a curve of projectors. When the curve closes,
//! the subspace returns rotated by a unitary holonomy, and the curve cannot be
//! shorter than a bound fixed by the holonomy's eigenvalue spectrum. This crate
//! computes that bound, measures loop length, speed, and kinetic energy along
//! simulated drives, splits the end-to-end propagator into geometric and
//! dynamical factors, synthesizes static fields whose loops meet the bound
//! exactly for any requested holonomy, and certifies the minimal-time character
//! of three-level lambda pulse schemes.
//!
//! Entry points:
//! - [`bounds::isoholonomic_bound`] for the spectral length bound of a gate,
//! - [`propagate::analyze_loop`] for simulating a schedule and measuring its loop,
//! - [`synthesis::plan_optimal_loop`] for constructing bound-saturating drives,
//! - [`lambda`] for the pulse-driven three-level gate families.

pub mod bounds;
pub mod bundle;
pub mod error;
pub mod geometry;
pub mod lambda;
pub mod linalg;
pub mod propagate;
pub mod synthesis;

pub use bounds::{
    dft_matrix, isoholonomic_bound, named_gate, qft_bound, runtime_bound, state_bound,
    SpectralReport,
};
pub use bundle::{
    closure_tolerance, connection_form, dynamical_operator, dynamical_operator_with,
    holonomy_from_any_lift, holonomy_of_curve, horizontal_lift, Frame, Gate, Projector,
    ProjectorCurve,
};
pub use error::{Error, Result};
pub use geometry::{
    curve_functionals, curve_length, grassmann_speed_sq, skewness, speed_profile,
    stiefel_curve_length, stiefel_speed_sq, CurveFunctionals,
};
pub use lambda::{
    certify_optimality, envelope_schedule, LambdaOneQubit, LambdaTwoQubit, PulseEnvelope,
};
pub use propagate::{
    analyze_loop, ordered_exponential, propagator, propagator_on_grid, HamiltonianSchedule,
    Interpolation, LoopReport, OrderDirection, Propagation,
};
pub use synthesis::{
    execute_plan, parallel_companion, plan_optimal_loop, OptimalLoopPlan, PlanExecution,
    QubitBlock,
};
