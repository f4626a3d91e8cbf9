//! Solver library and experiment harness for the singularly perturbed
//! convection-diffusion problem
//!
//! ```text
//! -ε Δu + a(x,y) u_x = f(x,y)  on (0,1)²,    u = g on the boundary,
//! ```
//!
//! with a(x,y) ≥ α > 0 and 0 < ε ≤ 1. As ε → 0 the solution develops a
//! regular layer at the outflow edge x = 1 and characteristic layers along
//! y = 0 and y = 1. The discretization is an exponentially fitted 5-point
//! scheme on tensor-product Shishkin meshes; convergence is measured
//! parameter-uniformly with the double-mesh protocol.

pub mod cli;
pub mod convergence;
pub mod diagnostics;
pub mod error;
pub mod linsolve;
pub mod mesh;
pub mod problem;
pub mod scheme;
pub mod solution;

pub use error::{Error, Result};
