//! Series solutions of a non-local boundary value problem for the Laplace
//! equation on the half-strip `(0,2π) × (0,∞)`, built on a biorthonormal pair
//! of trigonometric systems, together with a Muckenhoupt-weighted norm toolkit
//! and a residual-based verification harness.

pub mod basis;
pub mod cli;
pub mod presets;
pub mod quad;
pub mod report;
pub mod solver;
pub mod spline;
pub mod verify;
pub mod weights;
