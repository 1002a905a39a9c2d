//! Scaling, translation and Galilean boosts.

use std::sync::Arc;

use num_complex::Complex64;
use serde::Serialize;

use crate::functionals::{self, FunctionalReport};
use crate::grid::{FieldPair, Grid, TensorGrid};
use crate::{Error, Result, MASS_RESONANCE};

/// `g ↦ λ² g(λ·)` on the grid rescaled by `1/λ`, keeping the sample count.
///
/// Samples are unchanged apart from the factor λ²: the node `x/λ` of the new
/// grid carries the value at `x` of the old one.
pub fn scale_transform(fp: &FieldPair, lambda: f64) -> Result<FieldPair> {
    let grid = Arc::new(fp.grid().rescaled(lambda)?);
    let s = lambda * lambda;
    FieldPair::new(
        grid,
        fp.kappa(),
        fp.u().iter().map(|z| z * s).collect(),
        fp.v().iter().map(|z| z * s).collect(),
    )
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoostParams {
    pub xi: Vec<f64>,
    /// Time at which the transformation is applied.
    pub t: f64,
}

impl BoostParams {
    pub fn at_zero(xi: Vec<f64>) -> Self {
        Self { xi, t: 0.0 }
    }
}

#[derive(Debug, Clone)]
pub struct Boosted {
    pub pair: FieldPair,
    /// Whether κ = ½, the only coupling for which the boost maps solutions to
    /// solutions.
    pub mass_resonant: bool,
}

fn tensor_of(fp: &FieldPair) -> Result<&TensorGrid> {
    fp.grid().as_tensor().ok_or(Error::UnsupportedGrid("tensor"))
}

fn dot(xi: &[f64], x: [f64; 3]) -> f64 {
    xi.iter().zip(x).map(|(a, b)| a * b).sum()
}

/// Spectral translation `f ↦ f(· − shift)`.
fn shift(g: &TensorGrid, f: &[Complex64], shift: &[f64]) -> Vec<Complex64> {
    if shift.iter().all(|s| *s == 0.0) {
        return f.to_vec();
    }
    g.multiplier(f, |k| Complex64::from_polar(1.0, -dot(shift, k)))
}

/// Galilean transformation
/// `(e^{ix·ξ} e^{−it|ξ|²} u(x − 2tξ), e^{2ix·ξ} e^{−2it|ξ|²} v(x − 2tξ))`.
///
/// The phases are applied for any κ; `mass_resonant` reports whether the
/// result is again a solution.
pub fn galilean_boost(fp: &FieldPair, bp: &BoostParams) -> Result<Boosted> {
    let g = tensor_of(fp)?;
    if !g.is_lattice(&bp.xi) {
        return Err(Error::OffLattice(bp.xi.clone()));
    }
    let xi2: f64 = bp.xi.iter().map(|x| x * x).sum();
    let displacement: Vec<f64> = bp.xi.iter().map(|x| 2.0 * bp.t * x).collect();
    let u = shift(g, fp.u(), &displacement);
    let v = shift(g, fp.v(), &displacement);
    let (mut bu, mut bv) = (Vec::with_capacity(u.len()), Vec::with_capacity(v.len()));
    for (j, (a, b)) in u.iter().zip(&v).enumerate() {
        let phase = dot(&bp.xi, g.position(j)) - bp.t * xi2;
        bu.push(a * Complex64::from_polar(1.0, phase));
        bv.push(b * Complex64::from_polar(1.0, 2.0 * phase));
    }
    Ok(Boosted { pair: fp.replace(bu, bv), mass_resonant: fp.kappa() == MASS_RESONANCE })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BoostIdentity {
    /// `H(u^ξ) − H(u) − |ξ|²M(u)`.
    pub lhs: f64,
    /// `2ξ·P(u)`.
    pub rhs: f64,
    /// `|lhs − rhs| / (1 + |rhs|)`.
    pub dev: f64,
}

fn require_resonance(fp: &FieldPair) -> Result<()> {
    if fp.kappa() != MASS_RESONANCE {
        return Err(Error::MassResonanceRequired(fp.kappa()));
    }
    Ok(())
}

/// `H(u^ξ) = H(u) + |ξ|²M(u) + 2ξ·P(u)` at κ = ½.
pub fn boost_energy_identity_check(fp: &FieldPair, bp: &BoostParams) -> Result<BoostIdentity> {
    require_resonance(fp)?;
    let before = FunctionalReport::of(fp);
    let boosted = galilean_boost(fp, &BoostParams::at_zero(bp.xi.clone()))?;
    let h_after = functionals::kinetic(&boosted.pair);
    let xi2: f64 = bp.xi.iter().map(|x| x * x).sum();
    let lhs = h_after - before.kinetic - xi2 * before.mass;
    let rhs = 2.0 * bp.xi.iter().zip(&before.momentum).map(|(a, b)| a * b).sum::<f64>();
    Ok(BoostIdentity { lhs, rhs, dev: (lhs - rhs).abs() / (1.0 + rhs.abs()) })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OptimalBoost {
    /// `ξ* = −P/M`.
    pub xi: Vec<f64>,
    pub h_before: f64,
    pub h_after: f64,
    /// `|P|²/M`, the predicted drop.
    pub predicted_drop: f64,
}

/// Boost by `ξ* = −P/M`, which removes the momentum and lowers H by `|P|²/M`.
/// Fails when `ξ*` is not on the frequency lattice.
pub fn optimal_boost(fp: &FieldPair) -> Result<OptimalBoost> {
    require_resonance(fp)?;
    let rep = FunctionalReport::of(fp);
    if rep.mass == 0.0 {
        return Err(Error::InvalidParameter("optimal boost needs nonzero mass".into()));
    }
    let xi: Vec<f64> = rep.momentum.iter().map(|p| -p / rep.mass).collect();
    let boosted = galilean_boost(fp, &BoostParams::at_zero(xi.clone()))?;
    let p2: f64 = rep.momentum.iter().map(|p| p * p).sum();
    Ok(OptimalBoost {
        xi,
        h_before: rep.kinetic,
        h_after: functionals::kinetic(&boosted.pair),
        predicted_drop: p2 / rep.mass,
    })
}

/// `f ↦ f(· − x0)` by a spectral shift; exact for lattice-aligned `x0` and
/// band-limited data. Radial grids only admit `x0 = 0`.
pub fn translate(fp: &FieldPair, x0: &[f64]) -> Result<FieldPair> {
    if x0.len() != fp.grid().d() {
        return Err(Error::InvalidParameter(format!("shift has {} components, grid has d = {}", x0.len(), fp.grid().d())));
    }
    if x0.iter().all(|x| *x == 0.0) {
        return Ok(fp.clone());
    }
    let g = match fp.grid() {
        Grid::Tensor(g) => g,
        Grid::Radial(_) => return Err(Error::UnsupportedGrid("tensor")),
    };
    Ok(fp.replace(shift(g, fp.u(), x0), shift(g, fp.v(), x0)))
}
