//! Ground states of the discrete nonlinear Schrödinger equation
//! `-Δu + V u = f(x, u)` on finite lattice and quasi-transitive graphs.
//!
//! Ground states are found as minimisers of the energy `Φ` restricted to
//! the Nehari set, reached through its radial parametrisation by the unit
//! sphere of the weighted norm.
//!
//! ```
//! use std::sync::Arc;
//! use dnls_core::{Boundary, Graph, Potential, PowerNonlinearity, Problem, SolverOptions};
//!
//! let g = Graph::lattice_box(1, &[15], Boundary::DirichletBox).unwrap();
//! let v = Potential::constant(&g, 1.0).unwrap();
//! let f = PowerNonlinearity::homogeneous(1.0, 4.0).unwrap();
//! let p = Problem::new(g, v, Arc::new(f)).unwrap();
//! let r = dnls_core::minimize(&p, &SolverOptions::default()).unwrap();
//! assert!(r.converged && r.energy > 0.0);
//! ```

// `!(x > 0.0)` style guards are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod calculus;
pub mod error;
pub mod exec;
pub mod field;
pub mod functional;
pub mod graph;
pub mod model;
pub mod nehari;
pub mod solver;

pub use error::{Error, Result};
pub use field::Field;
pub use functional::{phi, phi_derivative, phi_gradient, residuals, Problem, Residuals};
pub use graph::{Boundary, Graph, GraphMode, PresetKind, Shift};
pub use model::{
    check_conditions, Coefficient, ConditionReport, ConditionThresholds, CustomNonlinearity,
    Nonlinearity, Potential, PotentialKind, PowerNonlinearity,
};
pub use nehari::{project, ProjectionOptions, RayProjection};
pub use solver::{
    compare_limit_energy, minimize, truncation_study, verify, verify_state, GroundStateResult,
    Init, LimitComparison, SolverOptions, StopReason, VerifyOptions, VerifyReport,
};
