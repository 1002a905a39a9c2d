//! Numerical laboratory for the energy-critical quadratic Schrödinger system
//!
//! ```text
//! i u_t + Δu + v ū = 0
//! i v_t + κ Δv + u² = 0        x ∈ ℝ⁶
//! ```
//!
//! The crate provides the discretizations ([`grid`]), the conserved and
//! variational functionals ([`functionals`]), the explicit ground state and its
//! certificates ([`ground_state`]), a split-step integrator with blow-up
//! detection ([`dynamics`]), virial/compactness monitors and the
//! scatter-vs-blow-up classifier ([`diagnostics`]), the symmetry group
//! ([`symmetry`]) and the run harness behind the `nls6` binary ([`cli`]).
//!
//! Production runs use a radial grid in d = 6. Small periodic tensor grids
//! (d ≤ 3) back the identities that do not depend on the dimension.

pub mod cli;
pub mod diagnostics;
pub mod dynamics;
mod error;
pub mod functionals;
pub mod grid;
pub mod ground_state;
pub mod random;
pub mod symmetry;

pub use error::{Error, Result};
pub use grid::{FieldPair, Grid, RadialGrid, TensorGrid};
pub use num_complex::Complex64;

/// The mass-resonance coupling under which the system is Galilean invariant.
pub const MASS_RESONANCE: f64 = 0.5;
