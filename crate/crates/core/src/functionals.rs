//! Conserved quantities, variational functionals and the coercivity/trapping
//! constants built from the ground-state thresholds.
//!
//! For a pair `(u, v)`:
//!
//! | symbol | definition |
//! |--------|------------|
//! | M | ∫ \|u\|² + \|v\|² |
//! | H | ∫ \|∇u\|² + (κ/2) \|∇v\|² |
//! | R | Re ∫ v̄ u² |
//! | E | H − R |
//! | P | Im ∫ ū∇u + ½ v̄∇v |
//! | K | 2H − 3R |
//! | J | H³ / R² on {R > 0} |

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::grid::{self, FieldPair, Grid, Gradient};
use crate::{Error, Result};

/// All functionals of one state, evaluated from a single gradient pass.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FunctionalReport {
    pub mass: f64,
    pub energy: f64,
    pub kinetic: f64,
    pub potential: f64,
    pub momentum: Vec<f64>,
    /// K = 2H − 3R.
    pub coercivity: f64,
    /// J = H³/R²; `None` outside {R > 0}.
    pub action: Option<f64>,
}

impl FunctionalReport {
    pub fn of(fp: &FieldPair) -> Self {
        let grads = Gradients::of(fp);
        Self::with_gradients(fp, &grads)
    }

    pub(crate) fn with_gradients(fp: &FieldPair, grads: &Gradients) -> Self {
        let mass = mass(fp);
        let kinetic = grads.kinetic(fp);
        let potential = potential(fp);
        let energy = kinetic - potential;
        Self {
            mass,
            energy,
            kinetic,
            potential,
            momentum: grads.momentum(fp),
            coercivity: 2.0 * kinetic - 3.0 * potential,
            action: action_from(kinetic, potential),
        }
    }
}

/// Gradients of both components, computed once and shared by the functionals
/// and diagnostics that need them.
#[derive(Debug, Clone)]
pub(crate) struct Gradients {
    pub u: Gradient,
    pub v: Gradient,
}

impl Gradients {
    pub fn of(fp: &FieldPair) -> Self {
        let grid = fp.grid();
        // Lengths are checked at FieldPair construction.
        let u = grid::gradient(fp.u(), grid).expect("field matches grid");
        let v = grid::gradient(fp.v(), grid).expect("field matches grid");
        Self { u, v }
    }

    /// Pointwise |∇u|² + (κ/2)|∇v|².
    pub fn kinetic_density(&self, kappa: f64) -> Vec<f64> {
        let du = self.u.sq_density();
        let dv = self.v.sq_density();
        du.iter().zip(&dv).map(|(a, b)| a + 0.5 * kappa * b).collect()
    }

    pub fn kinetic(&self, fp: &FieldPair) -> f64 {
        integrate(&self.kinetic_density(fp.kappa()), fp.grid())
    }

    pub fn momentum(&self, fp: &FieldPair) -> Vec<f64> {
        let grid = fp.grid();
        match (&self.u, &self.v) {
            (Gradient::Tensor(gu), Gradient::Tensor(gv)) => gu
                .iter()
                .zip(gv)
                .map(|(du, dv)| {
                    let density: Vec<f64> = fp
                        .u()
                        .iter()
                        .zip(du)
                        .zip(fp.v().iter().zip(dv))
                        .map(|((u, du), (v, dv))| (u.conj() * du + 0.5 * v.conj() * dv).im)
                        .collect();
                    integrate(&density, grid)
                })
                .collect(),
            // Radial fields carry no momentum: the integrand is odd.
            _ => vec![0.0; grid.d()],
        }
    }
}

fn integrate(density: &[f64], grid: &Grid) -> f64 {
    grid::integrate(density, grid).expect("density matches grid")
}

pub fn mass(fp: &FieldPair) -> f64 {
    let density: Vec<f64> = fp.u().iter().zip(fp.v()).map(|(u, v)| u.norm_sqr() + v.norm_sqr()).collect();
    integrate(&density, fp.grid())
}

pub fn kinetic(fp: &FieldPair) -> f64 {
    Gradients::of(fp).kinetic(fp)
}

pub fn potential(fp: &FieldPair) -> f64 {
    let density: Vec<f64> = fp.u().iter().zip(fp.v()).map(|(u, v)| (v.conj() * u * u).re).collect();
    integrate(&density, fp.grid())
}

pub fn energy(fp: &FieldPair) -> f64 {
    kinetic(fp) - potential(fp)
}

pub fn momentum(fp: &FieldPair) -> Vec<f64> {
    Gradients::of(fp).momentum(fp)
}

/// K = 2H − 3R, the virial driver (I'' = 8κK in d = 6).
pub fn coercivity_k(fp: &FieldPair) -> f64 {
    2.0 * kinetic(fp) - 3.0 * potential(fp)
}

/// J = H³/R², undefined (`None`) when R ≤ 0.
pub fn action_j(fp: &FieldPair) -> Option<f64> {
    action_from(kinetic(fp), potential(fp))
}

fn action_from(h: f64, r: f64) -> Option<f64> {
    (r > 0.0).then(|| h.powi(3) / (r * r))
}

/// ∫ |u|⁴ + |v|⁴, the integrand of the scattering size.
pub fn l4_integral(fp: &FieldPair) -> f64 {
    let density: Vec<f64> = fp
        .u()
        .iter()
        .zip(fp.v())
        .map(|(u, v)| u.norm_sqr().powi(2) + v.norm_sqr().powi(2))
        .collect();
    integrate(&density, fp.grid())
}

/// C(κ) = √(8 / 27κ) in |R| ≤ C(κ) H^{3/2}.
pub fn interaction_constant(kappa: f64) -> f64 {
    (8.0 / (27.0 * kappa)).sqrt()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct InteractionBound {
    pub lhs: f64,
    pub rhs: f64,
    pub ok: bool,
}

/// Checks |R| ≤ √(8/27κ) H^{3/2}.
pub fn interaction_bound_check(fp: &FieldPair) -> InteractionBound {
    let lhs = potential(fp).abs();
    let rhs = interaction_constant(fp.kappa()) * kinetic(fp).powf(1.5);
    InteractionBound { lhs, rhs, ok: lhs <= rhs * (1.0 + 1e-10) }
}

/// Ground-state thresholds H(W), R(W), E(W) and the derived sharp constants.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Thresholds {
    pub kappa: f64,
    pub h_w: f64,
    pub r_w: f64,
    pub e_w: f64,
    /// Sharp Gagliardo–Nirenberg constant R(W) / H(W)^{3/2}.
    pub c_gn: f64,
    /// Minimum of J, `C_GN^{-2}`.
    pub j_min: f64,
}

impl Thresholds {
    pub fn from_ground_values(kappa: f64, h_w: f64, r_w: f64) -> Self {
        let c_gn = r_w / h_w.powf(1.5);
        // C_GN^{-2} written as H³/R² so that J(W) − J_min is exactly zero.
        Self { kappa, h_w, r_w, e_w: h_w - r_w, c_gn, j_min: h_w.powi(3) / (r_w * r_w) }
    }

    /// Continuum values for φ₀ = √κ (1 + |x|²/24)^{-2}.
    ///
    /// With Q = (1 + r²/24)^{-2}, `∫|∇Q|² = π³ · 24³ · 12/36 · B(4, 2) = 230.4 π³`
    /// and −ΔQ = Q² gives ∫Q³ the same value, so H(W) = (3κ/2)·230.4π³ = 345.6κπ³
    /// and R(W) = κ·230.4π³.
    pub fn closed_form(kappa: f64) -> Self {
        let pi3 = PI.powi(3);
        Self::from_ground_values(kappa, 345.6 * kappa * pi3, 230.4 * kappa * pi3)
    }

    /// Top of the increasing branch of `f(y) = y − C_GN y^{3/2}`, `4/(9 C_GN²)`.
    pub fn turning_point(&self) -> f64 {
        4.0 / (9.0 * self.c_gn * self.c_gn)
    }

    /// `f(y) = y − C_GN y^{3/2}`, the lower bound of E at kinetic energy y.
    pub fn energy_floor(&self, y: f64) -> f64 {
        y - self.c_gn * y.powf(1.5)
    }

    /// R / (C_GN H^{3/2}); at most 1 by the sharp Gagliardo–Nirenberg bound.
    pub fn gn_ratio(&self, fp: &FieldPair) -> f64 {
        let h = kinetic(fp);
        if h == 0.0 {
            return 0.0;
        }
        potential(fp) / (self.c_gn * h.powf(1.5))
    }
}

/// δ, δ′, δ″ of the sub-threshold trapping region.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TrappingDeltas {
    /// δ = 1 − E₀/E(W).
    pub delta: f64,
    /// H(u(t)) ≤ (1 − δ′) H(W) for every t.
    pub delta_prime: f64,
    /// 2H − 3R ≥ δ″ H.
    pub delta_pp: f64,
}

/// Constants of the super-threshold branch, H(u₀) > H(W).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BlowupDeltas {
    pub delta: f64,
    /// H(u(t)) ≥ (1 + δ̃′) H(W) for every t.
    pub delta_tilde_prime: f64,
    /// 2H − 3R ≤ −δ̃″ H, δ̃″ = 1 − (1 − δ)/(1 + δ̃′).
    pub delta_tilde_pp: f64,
}

fn check_below(e0: f64, thr: &Thresholds) -> Result<f64> {
    if !e0.is_finite() || e0 >= thr.e_w {
        return Err(Error::AboveThreshold { energy: e0, threshold: thr.e_w });
    }
    Ok(1.0 - e0 / thr.e_w)
}

/// Solve `f(y) = target` by bisection on `[lo, hi]` where `f(lo) - target` and
/// `f(hi) - target` have opposite signs.
fn bisect(f: impl Fn(f64) -> f64, target: f64, mut lo: f64, mut hi: f64) -> f64 {
    let increasing = f(hi) > f(lo);
    let scale = hi.abs().max(lo.abs()).max(f64::MIN_POSITIVE);
    for _ in 0..200 {
        if hi - lo <= 1e-13 * scale {
            break;
        }
        let mid = 0.5 * (lo + hi);
        if (f(mid) < target) == increasing {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// δ, δ′, δ″ for initial energy `e0 < E(W)` on the branch H(u₀) < H(W).
///
/// δ′ comes from the smaller root of `y − C_GN y^{3/2} = E₀`, solved by bisection
/// on the increasing branch `[0, 4/(9 C_GN²)]`.
pub fn trapping_deltas(e0: f64, thr: &Thresholds) -> Result<TrappingDeltas> {
    let delta = check_below(e0, thr)?;
    let top = thr.turning_point();
    let y = if e0 <= 0.0 {
        0.0
    } else if e0 >= thr.energy_floor(top) {
        top
    } else {
        bisect(|y| thr.energy_floor(y), e0, 0.0, top)
    };
    let delta_prime = (1.0 - y / thr.h_w).clamp(0.0, 1.0);
    let delta_pp = 2.0 * (1.0 - (1.0 - delta_prime).sqrt());
    Ok(TrappingDeltas { delta, delta_prime, delta_pp })
}

/// δ, δ̃′, δ̃″ for initial energy `e0 < E(W)` on the branch H(u₀) > H(W).
///
/// δ̃′ is the larger root of `y − C_GN y^{3/2} = E₀` (the decreasing branch).
/// The constant is not given constructively in closed form; this root is the
/// sharpest value the energy bound allows.
pub fn blowup_deltas(e0: f64, thr: &Thresholds) -> Result<BlowupDeltas> {
    let delta = check_below(e0, thr)?;
    let top = thr.turning_point();
    let y = if e0 >= thr.energy_floor(top) {
        top
    } else {
        let mut hi = 2.0 * top;
        while thr.energy_floor(hi) > e0 {
            hi *= 2.0;
        }
        bisect(|y| thr.energy_floor(y), e0, top, hi)
    };
    let delta_tilde_prime = (y / thr.h_w - 1.0).max(0.0);
    let delta_tilde_pp = 1.0 - (1.0 - delta) / (1.0 + delta_tilde_prime);
    Ok(BlowupDeltas { delta, delta_tilde_prime, delta_tilde_pp })
}
