//! Entropy-stable space-time discontinuous Galerkin spectral element method
//! for one-dimensional hyperbolic conservation laws.
//!
//! The crate is organised bottom-up:
//!
//! * [`sbp`]: Legendre-Gauss-Lobatto rules and summation-by-parts operators.
//! * [`systems`]: Euler (1D and 3D), shallow water and ideal MHD state maps.
//! * [`two_point`]: logarithmic mean, temporal states and two-point fluxes.
//! * [`solver`]: residual assembly and Newton solves on space-time slabs.
//! * [`diagnostics`]: discrete entropy and kinetic energy balances, errors.
//! * [`problems`]: canned initial/boundary value problems.
//! * [`presets`]: the experiment configurations built on top of them.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod diagnostics;
pub mod error;
pub mod exec;
pub mod presets;
pub mod problems;
pub mod sbp;
pub mod solver;
pub mod sum;
pub mod systems;
pub mod two_point;

pub use error::{Error, NodeLocation, Result};
