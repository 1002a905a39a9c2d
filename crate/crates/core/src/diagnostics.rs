//! Virial and cut-off virial monitors, frequency scale and spatial centre,
//! scattering-size windows, and the scatter/blow-up classifier.

use num_complex::Complex64;
use rustdct::DctPlanner;
use serde::{Deserialize, Serialize};

use crate::dynamics::{Outcome, RunResult, SeriesRow};
use crate::functionals::{self, FunctionalReport, Gradients, Thresholds};
use crate::grid::{FieldPair, Grid, Gradient};
use crate::{Error, Result};

/// Weighted variance `I = ∫|x|²(2κ|u|² + |v|²)` and its derivatives.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct VirialSample {
    pub t: f64,
    pub i: f64,
    pub i_dot: f64,
    /// `8κ(2H − (d/2)R)`; `8κK` in six dimensions.
    pub i_ddot_formula: f64,
    /// Second difference over neighbouring samples, filled in by the series.
    pub i_ddot_fd: f64,
}

/// `x·∇f` at every sample.
fn radial_flux(grid: &Grid, grad: &Gradient) -> Vec<Complex64> {
    match (grid, grad) {
        (Grid::Radial(g), Gradient::Radial(df)) => g.nodes().iter().zip(df).map(|(r, z)| z * *r).collect(),
        (Grid::Tensor(g), Gradient::Tensor(comps)) => (0..g.len())
            .map(|j| {
                let x = g.position(j);
                comps.iter().enumerate().map(|(a, c)| c[j] * x[a]).sum()
            })
            .collect(),
        _ => unreachable!("gradient computed on this grid"),
    }
}

fn integrate(density: &[f64], grid: &Grid) -> f64 {
    crate::grid::integrate(density, grid).expect("density matches grid")
}

pub fn virial_sample(fp: &FieldPair, t: f64) -> VirialSample {
    let grads = Gradients::of(fp);
    let report = FunctionalReport::with_gradients(fp, &grads);
    virial_with(fp, t, &grads, &report)
}

pub(crate) fn virial_with(fp: &FieldPair, t: f64, grads: &Gradients, report: &FunctionalReport) -> VirialSample {
    let grid = fp.grid();
    let kappa = fp.kappa();
    let r2: Vec<f64> = grid.radii().iter().map(|r| r * r).collect();
    let (u, v) = (fp.u(), fp.v());

    let i_density: Vec<f64> =
        (0..u.len()).map(|j| r2[j] * (2.0 * kappa * u[j].norm_sqr() + v[j].norm_sqr())).collect();
    let i = integrate(&i_density, grid);

    // d/dt ∫a(2κ|u|² + |v|²) = 2κ Im∫(2ū∇u + v̄∇v)·∇a + (4κ − 2)∫a Im(v̄u²), a = |x|².
    let xu = radial_flux(grid, &grads.u);
    let xv = radial_flux(grid, &grads.v);
    let dot_density: Vec<f64> = (0..u.len())
        .map(|j| {
            let linear = 4.0 * kappa * (2.0 * u[j].conj() * xu[j] + v[j].conj() * xv[j]).im;
            let coupling = (4.0 * kappa - 2.0) * r2[j] * (v[j].conj() * u[j] * u[j]).im;
            linear + coupling
        })
        .collect();
    let i_dot = integrate(&dot_density, grid);

    let d = grid.d();
    let i_ddot_formula = if d == 6 {
        8.0 * kappa * report.coercivity
    } else {
        8.0 * kappa * (2.0 * report.kinetic - 0.5 * d as f64 * report.potential)
    };
    VirialSample { t, i, i_dot, i_ddot_formula, i_ddot_fd: f64::NAN }
}

/// Nonuniform three-point second difference at every interior sample; the
/// endpoints are NaN.
pub fn second_difference(t: &[f64], f: &[f64]) -> Vec<f64> {
    let n = t.len();
    let mut out = vec![f64::NAN; n];
    for j in 1..n.saturating_sub(1) {
        let h1 = t[j] - t[j - 1];
        let h2 = t[j + 1] - t[j];
        out[j] = 2.0 * ((f[j + 1] - f[j]) / h2 - (f[j] - f[j - 1]) / h1) / (h1 + h2);
    }
    out
}

/// Weight `a(x) = R²Γ(|x|²/R²)` with `Γ(s) = s` for `s ≤ 1`, `Γ(s) = 2` for
/// `s ≥ 3`, and `Γ′ = 1 − B((s−1)/2)` on `[1, 3]`, where `B` is the quintic
/// smoothstep `6τ⁵ − 15τ⁴ + 10τ³`.
///
/// | s | Γ | Γ′ | Γ″ |
/// |---|---|----|----|
/// | 1 | 1 | 1 | 0 |
/// | 2 | 1.84375 | 1/2 | −15/16 |
/// | 3 | 2 | 0 | 0 |
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CutoffWeight {
    pub r_cut: f64,
}

impl CutoffWeight {
    pub fn new(r_cut: f64) -> Result<Self> {
        if !(r_cut.is_finite() && r_cut > 0.0) {
            return Err(Error::InvalidParameter(format!("cut-off radius must be positive, got {r_cut}")));
        }
        Ok(Self { r_cut })
    }

    /// Γ and its first four derivatives at `s`.
    pub fn profile(s: f64) -> [f64; 5] {
        if s <= 1.0 {
            return [s, 1.0, 0.0, 0.0, 0.0];
        }
        if s >= 3.0 {
            return [2.0, 0.0, 0.0, 0.0, 0.0];
        }
        let t = 0.5 * (s - 1.0);
        let t2 = t * t;
        let b = t2 * t * (10.0 - 15.0 * t + 6.0 * t2);
        let b1 = 30.0 * t2 * (1.0 - t).powi(2);
        let b2 = 60.0 * t * (1.0 - 3.0 * t + 2.0 * t2);
        let b3 = 60.0 * (1.0 - 6.0 * t + 6.0 * t2);
        let gamma = s - 2.0 * t2 * t2 * (2.5 - 3.0 * t + t2);
        [gamma, 1.0 - b, -0.5 * b1, -0.25 * b2, -0.125 * b3]
    }

    pub fn a(&self, r: f64) -> f64 {
        let r2 = self.r_cut * self.r_cut;
        r2 * Self::profile(r * r / r2)[0]
    }

    /// `(a″, Δa, ΔΔa)` at radius `r` in dimension `d`.
    pub fn derivatives(&self, r: f64, d: usize) -> (f64, f64, f64) {
        let r2 = self.r_cut * self.r_cut;
        let s = r * r / r2;
        let [_, g1, g2, g3, g4] = Self::profile(s);
        let d = d as f64;
        let a2 = 2.0 * g1 + 4.0 * s * g2;
        let lap = 2.0 * d * g1 + 4.0 * s * g2;
        let b_s = (2.0 * d + 4.0) * g2 + 4.0 * s * g3;
        let b_ss = (2.0 * d + 8.0) * g3 + 4.0 * s * g4;
        let bilap = (4.0 * s * b_ss + 2.0 * d * b_s) / r2;
        (a2, lap, bilap)
    }
}

/// Second time derivative of `∫a(2κ|u|² + |v|²)` for radial data:
/// `8κ∫(|u′|² + (κ/2)|v′|²)a″ − 2κ∫(|u|² + (κ/2)|v|²)ΔΔa − 2κ Re∫v̄u²Δa`.
pub fn cutoff_virial_driver(fp: &FieldPair, w: &CutoffWeight) -> Result<f64> {
    let grads = Gradients::of(fp);
    cutoff_with(fp, w, &grads)
}

pub(crate) fn cutoff_with(fp: &FieldPair, w: &CutoffWeight, grads: &Gradients) -> Result<f64> {
    let g = fp.grid().as_radial().ok_or(Error::UnsupportedGrid("radial"))?;
    let (Gradient::Radial(du), Gradient::Radial(dv)) = (&grads.u, &grads.v) else {
        return Err(Error::UnsupportedGrid("radial"));
    };
    let kappa = fp.kappa();
    let d = g.d();
    let (u, v) = (fp.u(), fp.v());
    let density: Vec<f64> = g
        .nodes()
        .iter()
        .enumerate()
        .map(|(j, &r)| {
            let (a2, lap, bilap) = w.derivatives(r, d);
            let kin = du[j].norm_sqr() + 0.5 * kappa * dv[j].norm_sqr();
            let mass = u[j].norm_sqr() + 0.5 * kappa * v[j].norm_sqr();
            let pot = (v[j].conj() * u[j] * u[j]).re;
            8.0 * kappa * kin * a2 - 2.0 * kappa * mass * bilap - 2.0 * kappa * pot * lap
        })
        .collect();
    Ok(g.integrate(&density))
}

/// Kinetic energy per frequency: `(|ξ|, density)` pairs summing to H.
///
/// Tensor grids use the exact discrete Fourier transform. Radial grids use the
/// sine expansion of `r^{(d−1)/2} f` on `[0, r_max]`, rescaled so the total is H.
pub fn kinetic_spectrum(fp: &FieldPair) -> Vec<(f64, f64)> {
    let kappa = fp.kappa();
    match fp.grid() {
        Grid::Tensor(g) => {
            let uh = g.fft(fp.u());
            let vh = g.fft(fp.v());
            let norm = g.cell_volume() / g.len() as f64;
            (0..g.len())
                .map(|j| {
                    let k2 = g.frequency_sq(j);
                    (k2.sqrt(), norm * k2 * (uh[j].norm_sqr() + 0.5 * kappa * vh[j].norm_sqr()))
                })
                .collect()
        }
        Grid::Radial(g) => {
            let n = g.n();
            let p = 0.5 * (g.d() as f64 - 1.0);
            let dst = DctPlanner::new().plan_dst2(n);
            let transform = |f: &[Complex64], part: fn(&Complex64) -> f64| -> Vec<f64> {
                let mut buf: Vec<f64> = f.iter().zip(g.nodes()).map(|(z, r)| part(z) * r.powf(p)).collect();
                dst.process_dst2(&mut buf);
                buf
            };
            let (ur, ui) = (transform(fp.u(), |z| z.re), transform(fp.u(), |z| z.im));
            let (vr, vi) = (transform(fp.v(), |z| z.re), transform(fp.v(), |z| z.im));
            let step = std::f64::consts::PI / g.r_max();
            let mut spec: Vec<(f64, f64)> = (0..n)
                .map(|m| {
                    let k = step * (m + 1) as f64;
                    let e = ur[m] * ur[m] + ui[m] * ui[m] + 0.5 * kappa * (vr[m] * vr[m] + vi[m] * vi[m]);
                    (k, k * k * e)
                })
                .collect();
            let total: f64 = spec.iter().map(|s| s.1).sum();
            let h = functionals::kinetic(fp);
            if total > 0.0 {
                for s in &mut spec {
                    s.1 *= h / total;
                }
            }
            spec
        }
    }
}

/// Kinetic energy carried by frequencies `|ξ| ≥ n`.
pub fn spectral_tail(spectrum: &[(f64, f64)], n: f64) -> f64 {
    spectrum.iter().filter(|(k, _)| *k >= n).map(|(_, e)| e).sum()
}

/// Smallest dyadic `N = 2^j` whose kinetic tail above `N` is at most `eta`.
/// The compactness modulus is fixed to 1, so this is also the reported λ.
pub fn frequency_scale(fp: &FieldPair, eta: f64) -> Result<f64> {
    if !(eta.is_finite() && eta >= 0.0) {
        return Err(Error::InvalidParameter(format!("eta must be nonnegative, got {eta}")));
    }
    Ok(scale_from_spectrum(&kinetic_spectrum(fp), eta))
}

pub(crate) fn scale_from_spectrum(spectrum: &[(f64, f64)], eta: f64) -> f64 {
    let positive = spectrum.iter().map(|s| s.0).filter(|&k| k > 0.0);
    let k_min = positive.clone().fold(f64::INFINITY, f64::min);
    let k_max = spectrum.iter().map(|s| s.0).fold(0.0, f64::max);
    if !k_min.is_finite() {
        return 1.0;
    }
    let lo = k_min.log2().floor() as i32;
    let hi = k_max.log2().ceil() as i32 + 1;
    (lo..=hi)
        .map(|j| 2f64.powi(j))
        .find(|&n| spectral_tail(spectrum, n) <= eta)
        .unwrap_or_else(|| 2f64.powi(hi))
}

/// Centroid of the kinetic energy density; the origin on radial grids.
pub fn spatial_center(fp: &FieldPair) -> Vec<f64> {
    center_with(fp, &Gradients::of(fp))
}

pub(crate) fn center_with(fp: &FieldPair, grads: &Gradients) -> Vec<f64> {
    let d = fp.grid().d();
    let Grid::Tensor(g) = fp.grid() else {
        return vec![0.0; d];
    };
    let density = grads.kinetic_density(fp.kappa());
    let total: f64 = density.iter().sum();
    if total == 0.0 {
        return vec![0.0; d];
    }
    let mut c = vec![0.0; d];
    for (j, e) in density.iter().enumerate() {
        let x = g.position(j);
        for a in 0..d {
            c[a] += x[a] * e;
        }
    }
    c.iter().map(|x| x / total).collect()
}

/// Kinetic energy outside the ball of the given radius about the spatial centre.
pub fn tail_mass(fp: &FieldPair, radius: f64) -> f64 {
    let grads = Gradients::of(fp);
    let center = center_with(fp, &grads);
    let density = grads.kinetic_density(fp.kappa());
    let masked: Vec<f64> = match fp.grid() {
        Grid::Radial(g) => g.nodes().iter().zip(&density).map(|(r, e)| if *r >= radius { *e } else { 0.0 }).collect(),
        Grid::Tensor(g) => (0..g.len())
            .map(|j| {
                let x = g.position(j);
                let dist2: f64 = center.iter().enumerate().map(|(a, c)| (x[a] - c).powi(2)).sum();
                if dist2.sqrt() >= radius {
                    density[j]
                } else {
                    0.0
                }
            })
            .collect(),
    };
    integrate(&masked, fp.grid())
}

fn interpolate(rows: &[SeriesRow], t: f64) -> f64 {
    let k = rows.partition_point(|r| r.t <= t).clamp(1, rows.len() - 1);
    let (a, b) = (&rows[k - 1], &rows[k]);
    if b.t == a.t {
        return a.l4;
    }
    a.l4 + (b.l4 - a.l4) * (t - a.t) / (b.t - a.t)
}

/// Trapezoid in time of `∫|u|⁴ + |v|⁴` over `[t_a, t_b]`, linearly
/// interpolating the recorded rows at the window ends.
pub fn scattering_size_window(rows: &[SeriesRow], t_a: f64, t_b: f64) -> Result<f64> {
    let (first, last) = match (rows.first(), rows.last()) {
        (Some(f), Some(l)) => (f.t, l.t),
        _ => return Err(Error::WindowOutOfRange(t_a, t_b)),
    };
    if !(t_a < t_b) || t_a < first || t_b > last || rows.len() < 2 {
        return Err(Error::WindowOutOfRange(t_a, t_b));
    }
    let mut knots = vec![(t_a, interpolate(rows, t_a))];
    knots.extend(rows.iter().filter(|r| r.t > t_a && r.t < t_b).map(|r| (r.t, r.l4)));
    knots.push((t_b, interpolate(rows, t_b)));
    Ok(knots.windows(2).map(|w| 0.5 * (w[1].0 - w[0].0) * (w[0].1 + w[1].1)).sum())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "reason")]
pub enum Prediction {
    Scatter,
    BlowUp,
    Outside(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Evidence {
    pub e0: f64,
    pub h0: f64,
    pub e_w: f64,
    pub h_w: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Observed {
    /// Completed, stayed below H(W), scattering size decaying at the end.
    ScatterSupported,
    BlowUpDetected,
    Inconclusive,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DichotomyVerdict {
    pub prediction: Prediction,
    pub evidence: Evidence,
    pub observed: Observed,
    pub consistent: bool,
    pub run_id: Option<String>,
}

/// Relative band around H(W) treated as the degenerate threshold case.
pub const THRESHOLD_BAND: f64 = 1e-6;

/// Sub-threshold dichotomy: scatter below H(W), blow up above, otherwise outside.
pub fn classify(fp0: &FieldPair, thr: &Thresholds) -> (Prediction, Evidence) {
    let report = FunctionalReport::of(fp0);
    classify_values(report.energy, report.kinetic, thr)
}

pub fn classify_values(e0: f64, h0: f64, thr: &Thresholds) -> (Prediction, Evidence) {
    let evidence = Evidence { e0, h0, e_w: thr.e_w, h_w: thr.h_w };
    let prediction = if !(e0.is_finite() && h0.is_finite()) {
        Prediction::Outside("non-finite functionals".into())
    } else if (h0 - thr.h_w).abs() < THRESHOLD_BAND * thr.h_w {
        Prediction::Outside("threshold-degenerate".into())
    } else if e0 >= thr.e_w {
        Prediction::Outside("energy above threshold".into())
    } else if h0 < thr.h_w {
        Prediction::Scatter
    } else {
        Prediction::BlowUp
    };
    (prediction, evidence)
}

/// Recorded rows needed in each of the three final-third windows before decay
/// counts as evidence.
pub const MIN_ROWS_PER_WINDOW: usize = 3;

/// Scattering size over the three equal windows covering the final third of
/// the run, if each window holds enough rows.
pub fn final_third_windows(run: &RunResult) -> Option<[f64; 3]> {
    let rows = &run.series;
    let (t0, t1) = (rows.first()?.t, rows.last()?.t);
    let start = t0 + 2.0 * (t1 - t0) / 3.0;
    let width = (t1 - start) / 3.0;
    let mut out = [0.0; 3];
    for (k, s) in out.iter_mut().enumerate() {
        let a = start + k as f64 * width;
        let b = if k == 2 { t1 } else { a + width };
        let count = rows.iter().filter(|r| r.t >= a && r.t <= b).count();
        if count < MIN_ROWS_PER_WINDOW {
            return None;
        }
        *s = scattering_size_window(rows, a, b).ok()?;
    }
    Some(out)
}

/// Compares a finished run with a prediction. Blow-up is confirmed by any
/// blow-up indicator; scattering is only ever "supported".
pub fn confirm(run: &RunResult, prediction: Prediction, evidence: Evidence) -> DichotomyVerdict {
    let observed = match run.outcome {
        Outcome::BlowUpDetected { .. } | Outcome::DtFloor { .. } => Observed::BlowUpDetected,
        Outcome::Completed => {
            let below = run.series.iter().all(|r| r.h < evidence.h_w);
            let decaying = final_third_windows(run).is_some_and(|s| s[0] > s[1] && s[1] > s[2]);
            if below && decaying {
                Observed::ScatterSupported
            } else {
                Observed::Inconclusive
            }
        }
    };
    let consistent = matches!(
        (&prediction, observed),
        (Prediction::Scatter, Observed::ScatterSupported) | (Prediction::BlowUp, Observed::BlowUpDetected)
    );
    DichotomyVerdict { prediction, evidence, observed, consistent, run_id: None }
}
