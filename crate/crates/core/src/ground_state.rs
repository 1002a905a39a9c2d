//! The explicit ground state `W = (φ₀, φ₀/√κ)` with
//! `φ₀(x) = √κ (1 + |x|²/24)^{-2}`, its certificates and the thresholds derived
//! from it.

use std::sync::Arc;

use num_complex::Complex64;
use serde::Serialize;

use crate::dynamics::{self, IntegratorConfig};
use crate::functionals::{self, Thresholds};
use crate::grid::{self, FieldPair, Grid, RadialGrid};
use crate::random::{self, TrialOptions};
use crate::{Error, Result};

/// Closed-form ground state sampled on a six-dimensional radial grid, with
/// thresholds computed by quadrature on that grid.
#[derive(Debug, Clone)]
pub struct GroundState {
    kappa: f64,
    phi0: Vec<f64>,
    psi0: Vec<f64>,
    pair: FieldPair,
    thresholds: Thresholds,
}

/// `φ₀(r) = √κ (1 + r²/24)^{-2}`.
pub fn profile(kappa: f64, r: f64) -> f64 {
    kappa.sqrt() / (1.0 + r * r / 24.0).powi(2)
}

impl GroundState {
    pub fn closed_form(kappa: f64, grid: &RadialGrid) -> Result<Self> {
        Self::on_grid(kappa, Arc::new(grid.clone().into()))
    }

    /// As [`GroundState::closed_form`], sharing an existing grid handle.
    pub fn on_grid(kappa: f64, grid: Arc<Grid>) -> Result<Self> {
        let radial = grid.as_radial().ok_or(Error::UnsupportedGrid("radial"))?;
        if radial.d() != 6 {
            return Err(Error::NotSixDimensional(radial.d()));
        }
        if !(kappa.is_finite() && kappa > 0.0) {
            return Err(Error::InvalidParameter(format!("kappa must be finite and positive, got {kappa}")));
        }
        let phi0 = radial.sample(|r| profile(kappa, r));
        let root = kappa.sqrt();
        let psi0: Vec<f64> = phi0.iter().map(|p| p / root).collect();
        let pair = FieldPair::from_real(grid, kappa, &phi0, &psi0)?;
        let report = functionals::FunctionalReport::of(&pair);
        let thresholds = Thresholds::from_ground_values(kappa, report.kinetic, report.potential);
        Ok(Self { kappa, phi0, psi0, pair, thresholds })
    }

    pub fn kappa(&self) -> f64 {
        self.kappa
    }

    pub fn phi0(&self) -> &[f64] {
        &self.phi0
    }

    pub fn psi0(&self) -> &[f64] {
        &self.psi0
    }

    pub fn grid(&self) -> &Arc<Grid> {
        self.pair.grid_arc()
    }

    /// W as a field pair.
    pub fn pair(&self) -> &FieldPair {
        &self.pair
    }

    /// The amplitude family `c·W`.
    pub fn scaled(&self, c: f64) -> FieldPair {
        self.pair.scaled(c)
    }

    pub fn thresholds(&self) -> &Thresholds {
        &self.thresholds
    }

    pub fn h_w(&self) -> f64 {
        self.thresholds.h_w
    }

    pub fn r_w(&self) -> f64 {
        self.thresholds.r_w
    }

    pub fn e_w(&self) -> f64 {
        self.thresholds.e_w
    }

    pub fn c_gn(&self) -> f64 {
        self.thresholds.c_gn
    }

    pub fn j_min(&self) -> f64 {
        self.thresholds.j_min
    }
}

/// Relative residuals of `−Δφ = φψ` and `−κΔψ = φ²`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EllipticResidual {
    pub res1: f64,
    pub res2: f64,
}

pub fn elliptic_residual(gs: &GroundState) -> EllipticResidual {
    elliptic_residual_of(gs.grid(), gs.kappa(), gs.phi0(), gs.psi0()).expect("ground state matches its grid")
}

/// Residuals for arbitrary real profiles `(φ, ψ)`.
pub fn elliptic_residual_of(grid: &Grid, kappa: f64, phi: &[f64], psi: &[f64]) -> Result<EllipticResidual> {
    let lift = |xs: &[f64]| -> Vec<Complex64> { xs.iter().map(|&x| Complex64::new(x, 0.0)).collect() };
    let lap_phi = grid::laplacian(&lift(phi), grid)?;
    let lap_psi = grid::laplacian(&lift(psi), grid)?;
    let norm = |d: Vec<f64>| grid::integrate(&d, grid).map(f64::sqrt);
    let num1 = norm(lap_phi.iter().zip(phi.iter().zip(psi)).map(|(l, (p, q))| (l.re + p * q).powi(2)).collect())?;
    let den1 = norm(phi.iter().zip(psi).map(|(p, q)| (p * q).powi(2)).collect())?;
    let num2 = norm(lap_psi.iter().zip(phi).map(|(l, p)| (kappa * l.re + p * p).powi(2)).collect())?;
    let den2 = norm(phi.iter().map(|p| p.powi(4)).collect())?;
    Ok(EllipticResidual { res1: num1 / den1, res2: num2 / den2 })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PohozaevReport {
    /// H/R.
    pub ratio: f64,
    /// |H/R − 3/2|.
    pub deviation: f64,
}

/// H/R of a pair; equals 3/2 at the ground state and 3/(2c) at `c·W`.
pub fn pohozaev_certificate(fp: &FieldPair) -> PohozaevReport {
    let ratio = functionals::kinetic(fp) / functionals::potential(fp);
    PohozaevReport { ratio, deviation: (ratio - 1.5).abs() }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProbeReport {
    pub samples: usize,
    /// min J − J_min over the random perturbations.
    pub min_gap: f64,
    /// max |J − J_min| over the amplitude family.
    pub amplitude_gap: f64,
}

/// Evaluates J on `W + εζ` for seeded random smooth ζ (normalized to the peak of
/// W) and ε ∈ {10⁻², 10⁻¹}, plus the amplitude family `c·W`.
pub fn variational_probe(gs: &GroundState, n_samples: usize, seed: u64) -> Result<ProbeReport> {
    if n_samples == 0 {
        return Err(Error::InvalidParameter("variational probe needs at least one sample".into()));
    }
    let j_min = gs.j_min();
    let w = gs.pair();
    let peak = w.max_amplitude();
    let mut rng = random::seeded(seed);
    let opts = TrialOptions { complex: false, ..Default::default() };
    let mut min_gap = f64::INFINITY;
    for k in 0..n_samples {
        let eps = if k % 2 == 0 { 1e-2 } else { 1e-1 };
        let zeta = random::random_pair(Arc::clone(gs.grid()), gs.kappa(), opts, &mut rng)?;
        let scale = eps * peak / zeta.max_amplitude().max(f64::MIN_POSITIVE);
        let u = w.u().iter().zip(zeta.u()).map(|(a, b)| a + b * scale).collect();
        let v = w.v().iter().zip(zeta.v()).map(|(a, b)| a + b * scale).collect();
        let trial = w.with_fields(u, v)?;
        if let Some(j) = functionals::action_j(&trial) {
            min_gap = min_gap.min(j - j_min);
        }
    }
    let amplitude_gap = [0.25, 0.5, 2.0, 4.0]
        .iter()
        .filter_map(|&c| functionals::action_j(&gs.scaled(c)))
        .map(|j| (j - j_min).abs())
        .fold(0.0, f64::max);
    Ok(ProbeReport { samples: n_samples, min_gap, amplitude_gap })
}

/// J(W + εζ) − J_min for one perturbation; zero for ζ = 0.
pub fn perturbation_gap(gs: &GroundState, zeta: &FieldPair, eps: f64) -> Result<Option<f64>> {
    let w = gs.pair();
    let u = w.u().iter().zip(zeta.u()).map(|(a, b)| a + b * eps).collect();
    let v = w.v().iter().zip(zeta.v()).map(|(a, b)| a + b * eps).collect();
    Ok(functionals::action_j(&w.with_fields(u, v)?).map(|j| j - gs.j_min()))
}

/// Evolves `start` (W itself when `None`) over `[0, cfg.t_end]` and returns
/// `max_t ‖u(t) − W‖₂ / ‖W‖₂`, sampled after every step.
pub fn static_solution_check(gs: &GroundState, cfg: &IntegratorConfig, start: Option<&FieldPair>) -> Result<f64> {
    let w = gs.pair();
    let norm = w.norm();
    let mut state = start.cloned().unwrap_or_else(|| w.clone());
    let mut worst = state.distance(w)? / norm;
    let mut t = 0.0;
    while t < cfg.t_end {
        let dt = dynamics::adaptive_dt(&state, cfg).min(cfg.t_end - t);
        state = dynamics::strang_step(&state, dt)?;
        t += dt;
        worst = worst.max(state.distance(w)? / norm);
    }
    Ok(worst)
}
