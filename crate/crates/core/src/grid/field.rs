use std::sync::Arc;

use num_complex::Complex64;

use super::Grid;
use crate::{Error, Result};

/// The state `(u, v)` of the system: two complex fields on one shared grid,
/// together with the coupling κ.
#[derive(Debug, Clone)]
pub struct FieldPair {
    grid: Arc<Grid>,
    kappa: f64,
    u: Vec<Complex64>,
    v: Vec<Complex64>,
}

impl FieldPair {
    pub fn new(grid: Arc<Grid>, kappa: f64, u: Vec<Complex64>, v: Vec<Complex64>) -> Result<Self> {
        if !(kappa.is_finite() && kappa > 0.0) {
            return Err(Error::InvalidParameter(format!("kappa must be finite and positive, got {kappa}")));
        }
        grid.check_len(u.len())?;
        grid.check_len(v.len())?;
        if u.iter().chain(&v).any(|z| !(z.re.is_finite() && z.im.is_finite())) {
            return Err(Error::NonFinite);
        }
        Ok(Self { grid, kappa, u, v })
    }

    /// Build from real profiles sampled at every grid point.
    pub fn from_real(grid: Arc<Grid>, kappa: f64, u: &[f64], v: &[f64]) -> Result<Self> {
        let lift = |xs: &[f64]| xs.iter().map(|&x| Complex64::new(x, 0.0)).collect();
        Self::new(grid, kappa, lift(u), lift(v))
    }

    pub fn zeros(grid: Arc<Grid>, kappa: f64) -> Result<Self> {
        let n = grid.len();
        let zero = vec![Complex64::new(0.0, 0.0); n];
        Self::new(grid, kappa, zero.clone(), zero)
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn grid_arc(&self) -> &Arc<Grid> {
        &self.grid
    }

    pub fn kappa(&self) -> f64 {
        self.kappa
    }

    pub fn u(&self) -> &[Complex64] {
        &self.u
    }

    pub fn v(&self) -> &[Complex64] {
        &self.v
    }

    pub fn into_parts(self) -> (Vec<Complex64>, Vec<Complex64>) {
        (self.u, self.v)
    }

    /// Replace both fields, keeping grid and κ. Lengths must match the grid.
    pub fn with_fields(&self, u: Vec<Complex64>, v: Vec<Complex64>) -> Result<Self> {
        self.grid.check_len(u.len())?;
        self.grid.check_len(v.len())?;
        Ok(Self { grid: Arc::clone(&self.grid), kappa: self.kappa, u, v })
    }

    /// Unchecked replacement used inside integrators, where lengths are
    /// preserved by construction and finiteness is checked separately.
    pub(crate) fn replace(&self, u: Vec<Complex64>, v: Vec<Complex64>) -> Self {
        debug_assert_eq!(u.len(), self.u.len());
        debug_assert_eq!(v.len(), self.v.len());
        Self { grid: Arc::clone(&self.grid), kappa: self.kappa, u, v }
    }

    /// Same samples reinterpreted on another grid of equal size.
    pub fn on_grid(&self, grid: Arc<Grid>) -> Result<Self> {
        Self::new(grid, self.kappa, self.u.clone(), self.v.clone())
    }

    /// Amplitude scaling `(c u, c v)`.
    pub fn scaled(&self, c: f64) -> Self {
        self.replace(
            self.u.iter().map(|z| z * c).collect(),
            self.v.iter().map(|z| z * c).collect(),
        )
    }

    pub fn is_finite(&self) -> bool {
        self.u.iter().chain(&self.v).all(|z| z.re.is_finite() && z.im.is_finite())
    }

    /// max(|u|, |v|) over the grid.
    pub fn max_amplitude(&self) -> f64 {
        self.u.iter().chain(&self.v).map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// L² distance `‖(u, v) - (u', v')‖₂`.
    pub fn distance(&self, other: &FieldPair) -> Result<f64> {
        if self.grid.len() != other.grid.len() {
            return Err(Error::GridMismatch);
        }
        let density: Vec<f64> = self
            .u
            .iter()
            .zip(&other.u)
            .zip(self.v.iter().zip(&other.v))
            .map(|((a, b), (c, d))| (a - b).norm_sqr() + (c - d).norm_sqr())
            .collect();
        Ok(super::integrate(&density, &self.grid)?.sqrt())
    }

    /// L² norm of the pair, `‖u‖₂² + ‖v‖₂²` under the square root.
    pub fn norm(&self) -> f64 {
        let density: Vec<f64> = self.u.iter().zip(&self.v).map(|(a, b)| a.norm_sqr() + b.norm_sqr()).collect();
        super::integrate(&density, &self.grid).map(f64::sqrt).unwrap_or(f64::NAN)
    }
}
