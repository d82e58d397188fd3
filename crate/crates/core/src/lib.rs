//! Continuous-time unstructured search under nonlinear Schrödinger dynamics.
//!
//! The state stays in the span of the marked and unmarked uniform
//! superpositions, and with the coupling tuned to its state-dependent critical
//! value the success probability follows the linear search curve at a
//! rescaled speed. This crate integrates those dynamics, evaluates the runtime
//! and peak width in closed form or by quadrature, bounds them for the
//! loglinear nonlinearity, and tabulates how resources scale with `N`.

pub mod analytics;
pub mod dynamics;
pub mod error;
pub mod model;
pub mod scaling;

pub use error::{Error, Result};
pub use model::{NonlinearEval, NonlinearityKind, SearchProblem};
