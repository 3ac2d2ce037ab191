//! Radial solver and property checks for the fractional Hardy equation
//!
//! ```text
//! (-Δ)^s u - θ u/|x|^{2s} = u^p - u^q   in R^N
//! ```
//!
//! Radial profiles live on a logarithmic grid; the nonlocal energy is
//! assembled exactly for piecewise-linear profiles.

pub mod cli;
pub mod constants;
pub mod error;
pub mod forms;
pub mod grid;
pub mod solver;
pub mod verify;
pub(crate) mod quad;

pub use constants::{ProblemParams, Regime, SpectralConstants};
pub use error::{Error, Result};
pub use grid::RadialGrid;
