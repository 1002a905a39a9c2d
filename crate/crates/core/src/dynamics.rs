//! Split-step time integration of
//! `i u_t + Δu + v ū = 0`, `i v_t + κΔv + u² = 0`
//! with conservation monitoring and blow-up detection.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::diagnostics::{self, CutoffWeight};
use crate::functionals::{self, FunctionalReport, Gradients};
use crate::grid::{FieldPair, Grid};
use crate::ground_state::GroundState;
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct IntegratorConfig {
    pub dt0: f64,
    pub dt_min: f64,
    pub t_end: f64,
    /// Step is `min(dt0, cfl_c / max(|u|, |v|, 1))`.
    pub cfl_c: f64,
    /// Absorbing layer as a fraction of the domain radius; 0 disables it.
    pub sponge_width: f64,
    pub sponge_strength: f64,
    pub record_every: usize,
    /// Steps between stored snapshots; 0 disables them.
    pub snapshot_every: usize,
    #[serde(rename = "blowup_H_factor", alias = "blowup_h_factor")]
    pub blowup_h_factor: f64,
}

impl Default for IntegratorConfig {
    fn default() -> Self {
        Self {
            dt0: 1e-2,
            dt_min: 1e-7,
            t_end: 20.0,
            cfl_c: 0.05,
            sponge_width: 0.0,
            sponge_strength: 0.0,
            record_every: 10,
            snapshot_every: 0,
            blowup_h_factor: 5.0,
        }
    }
}

impl IntegratorConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidParameter(msg));
        let finite = [
            self.dt0,
            self.dt_min,
            self.t_end,
            self.cfl_c,
            self.sponge_width,
            self.sponge_strength,
            self.blowup_h_factor,
        ];
        if finite.iter().any(|x| !x.is_finite()) {
            return bad("integrator parameters must be finite".into());
        }
        if !(self.dt_min > 0.0 && self.dt_min < self.dt0 && self.dt0 <= self.t_end) {
            return bad(format!(
                "need 0 < dt_min < dt0 <= t_end, got dt_min = {}, dt0 = {}, t_end = {}",
                self.dt_min, self.dt0, self.t_end
            ));
        }
        if self.cfl_c <= 0.0 {
            return bad(format!("cfl_c must be positive, got {}", self.cfl_c));
        }
        if !(0.0..1.0).contains(&self.sponge_width) || self.sponge_strength < 0.0 {
            return bad("sponge width must lie in [0, 1) and strength be nonnegative".into());
        }
        if self.record_every == 0 {
            return bad("record_every must be at least 1".into());
        }
        if self.blowup_h_factor <= 1.0 {
            return bad(format!("blowup_H_factor must exceed 1, got {}", self.blowup_h_factor));
        }
        Ok(())
    }

    fn sponge_enabled(&self) -> bool {
        self.sponge_width > 0.0 && self.sponge_strength > 0.0
    }
}

/// Settings for the per-row diagnostics.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct MonitorConfig {
    /// Frequency-scale tail threshold as a fraction of H.
    pub eta_fraction: f64,
    /// Cut-off virial radius on radial grids; half the domain when absent.
    pub cutoff_radius: Option<f64>,
}

impl Default for MonitorConfig {
    fn default() -> Self {
        Self { eta_fraction: 0.5, cutoff_radius: None }
    }
}

impl MonitorConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.eta_fraction.is_finite() && self.eta_fraction > 0.0 && self.eta_fraction < 1.0) {
            return Err(Error::InvalidParameter(format!("eta_fraction must lie in (0, 1), got {}", self.eta_fraction)));
        }
        if let Some(r) = self.cutoff_radius {
            CutoffWeight::new(r)?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum Outcome {
    Completed,
    BlowUpDetected { t: f64 },
    DtFloor { t: f64 },
}

/// One recorded row of a run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeriesRow {
    pub t: f64,
    pub m: f64,
    pub e: f64,
    pub h: f64,
    pub r: f64,
    pub k: f64,
    pub p: Vec<f64>,
    pub i: f64,
    pub i_dot: f64,
    pub i_ddot_formula: f64,
    pub i_ddot_fd: f64,
    pub s_accum: f64,
    pub lambda_scale: f64,
    pub x_center: Vec<f64>,
    pub dt: f64,
    /// `∫|u|⁴ + |v|⁴` at this row.
    pub l4: f64,
    /// Cut-off virial driver (radial grids; NaN otherwise).
    pub cutoff_driver: f64,
}

#[derive(Debug, Clone)]
pub struct Snapshot {
    pub t: f64,
    pub pair: FieldPair,
}

#[derive(Debug, Clone)]
pub struct RunResult {
    pub series: Vec<SeriesRow>,
    pub snapshots: Vec<Snapshot>,
    pub outcome: Outcome,
    /// Last finite state reached.
    pub final_state: FieldPair,
    pub t_final: f64,
    pub steps: usize,
    /// Reference kinetic energy used by the blow-up indicator.
    pub h_ref: f64,
}

/// Time step allowed by the nonlinear frequency scale.
pub fn adaptive_dt(fp: &FieldPair, cfg: &IntegratorConfig) -> f64 {
    cfg.dt0.min(cfg.cfl_c / fp.max_amplitude().max(1.0))
}

fn rhs(u: Complex64, v: Complex64) -> (Complex64, Complex64) {
    let i = Complex64::i();
    (i * v * u.conj(), i * u * u)
}

/// One classical Runge–Kutta step of the pointwise system
/// `u′ = i v ū`, `v′ = i u²`.
pub fn nonlinear_substep(fp: &FieldPair, dt: f64) -> Result<FieldPair> {
    if dt == 0.0 {
        return Ok(fp.clone());
    }
    let (mut u, mut v) = (fp.u().to_vec(), fp.v().to_vec());
    for (a, b) in u.iter_mut().zip(v.iter_mut()) {
        let (k1u, k1v) = rhs(*a, *b);
        let (k2u, k2v) = rhs(*a + k1u * (0.5 * dt), *b + k1v * (0.5 * dt));
        let (k3u, k3v) = rhs(*a + k2u * (0.5 * dt), *b + k2v * (0.5 * dt));
        let (k4u, k4v) = rhs(*a + k3u * dt, *b + k3v * dt);
        *a += (k1u + k2u * 2.0 + k3u * 2.0 + k4u) * (dt / 6.0);
        *b += (k1v + k2v * 2.0 + k3v * 2.0 + k4v) * (dt / 6.0);
    }
    let out = fp.replace(u, v);
    if out.is_finite() {
        Ok(out)
    } else {
        Err(Error::NonFinite)
    }
}

/// Tridiagonal solve; `lower[0]` and `upper[n-1]` are ignored.
fn thomas(lower: &[Complex64], diag: &[Complex64], upper: &[Complex64], rhs: &mut [Complex64]) -> Result<()> {
    let n = diag.len();
    let mut c = vec![Complex64::new(0.0, 0.0); n];
    let mut pivot = diag[0];
    if pivot.norm() == 0.0 {
        return Err(Error::Singular(0));
    }
    c[0] = upper[0] / pivot;
    rhs[0] /= pivot;
    for j in 1..n {
        pivot = diag[j] - lower[j] * c[j - 1];
        if pivot.norm() == 0.0 {
            return Err(Error::Singular(j));
        }
        if j + 1 < n {
            c[j] = upper[j] / pivot;
        }
        rhs[j] = (rhs[j] - lower[j] * rhs[j - 1]) / pivot;
    }
    for j in (0..n - 1).rev() {
        let next = rhs[j + 1];
        rhs[j] -= c[j] * next;
    }
    Ok(())
}

fn crank_nicolson(grid: &crate::grid::RadialGrid, f: &[Complex64], coeff: f64, dt: f64) -> Result<Vec<Complex64>> {
    let (lo, di, up) = grid.laplacian_bands();
    let a = Complex64::new(0.0, 0.5 * coeff * dt);
    let lap = grid.laplacian(f);
    let mut rhs: Vec<Complex64> = f.iter().zip(&lap).map(|(x, l)| x + a * l).collect();
    let lower: Vec<Complex64> = lo.iter().map(|x| -a * x).collect();
    let diag: Vec<Complex64> = di.iter().map(|x| 1.0 - a * x).collect();
    let upper: Vec<Complex64> = up.iter().map(|x| -a * x).collect();
    thomas(&lower, &diag, &upper, &mut rhs)?;
    Ok(rhs)
}

/// Free flow over `dt`: Crank–Nicolson on radial grids, the exact spectral
/// propagator on tensor grids. Coefficient 1 for `u`, κ for `v`.
pub fn linear_substep(fp: &FieldPair, dt: f64) -> Result<FieldPair> {
    if dt == 0.0 {
        return Ok(fp.clone());
    }
    let kappa = fp.kappa();
    let (u, v) = match fp.grid() {
        Grid::Radial(g) => (crank_nicolson(g, fp.u(), 1.0, dt)?, crank_nicolson(g, fp.v(), kappa, dt)?),
        Grid::Tensor(g) => {
            let prop = |c: f64| {
                move |k: [f64; 3]| Complex64::from_polar(1.0, -c * (k[0] * k[0] + k[1] * k[1] + k[2] * k[2]) * dt)
            };
            (g.multiplier(fp.u(), prop(1.0)), g.multiplier(fp.v(), prop(kappa)))
        }
    };
    Ok(fp.replace(u, v))
}

/// Strang splitting: half nonlinear, full linear, half nonlinear.
pub fn strang_step(fp: &FieldPair, dt: f64) -> Result<FieldPair> {
    let half = nonlinear_substep(fp, 0.5 * dt)?;
    let lin = linear_substep(&half, dt)?;
    nonlinear_substep(&lin, 0.5 * dt)
}

/// Normalized distance from the centre used by the absorbing layer: `r / r_max`
/// on radial grids, the sup-norm distance over `L/2` on tensor grids.
fn outer_coordinate(grid: &Grid) -> Vec<f64> {
    match grid {
        Grid::Radial(g) => g.nodes().iter().map(|r| r / g.r_max()).collect(),
        Grid::Tensor(g) => {
            let half = 0.5 * g.l();
            g.positions().map(|x| x.iter().fold(0.0f64, |m, c| m.max(c.abs())) / half).collect()
        }
    }
}

/// Absorption rate σ: zero inside, a quintic ramp to `sponge_strength` across
/// the outer `sponge_width` fraction.
pub fn sponge_profile(grid: &Grid, cfg: &IntegratorConfig) -> Vec<f64> {
    let start = 1.0 - cfg.sponge_width;
    outer_coordinate(grid)
        .iter()
        .map(|&s| {
            if !cfg.sponge_enabled() || s <= start {
                return 0.0;
            }
            let t = ((s - start) / cfg.sponge_width).min(1.0);
            cfg.sponge_strength * t * t * t * (10.0 - 15.0 * t + 6.0 * t * t)
        })
        .collect()
}

/// Multiply both fields by `exp(−dt σ)`.
pub fn apply_sponge(fp: &FieldPair, dt: f64, cfg: &IntegratorConfig) -> FieldPair {
    if !cfg.sponge_enabled() {
        return fp.clone();
    }
    damp(fp, &sponge_profile(fp.grid(), cfg), dt)
}

fn damp(fp: &FieldPair, sigma: &[f64], dt: f64) -> FieldPair {
    let factor: Vec<f64> = sigma.iter().map(|s| (-dt * s).exp()).collect();
    fp.replace(
        fp.u().iter().zip(&factor).map(|(z, f)| z * f).collect(),
        fp.v().iter().zip(&factor).map(|(z, f)| z * f).collect(),
    )
}

/// Reference kinetic energy for the blow-up indicator: H(W) on six-dimensional
/// radial grids, otherwise `max(H(u₀), 1)`.
pub fn reference_kinetic(fp: &FieldPair) -> f64 {
    match fp.grid() {
        Grid::Radial(g) if g.d() == 6 => GroundState::on_grid(fp.kappa(), fp.grid_arc().clone())
            .map(|gs| gs.h_w())
            .unwrap_or(1.0),
        _ => functionals::kinetic(fp).max(1.0),
    }
}

struct Recorder {
    monitor: MonitorConfig,
    cutoff: Option<CutoffWeight>,
}

impl Recorder {
    fn new(fp: &FieldPair, monitor: MonitorConfig) -> Result<Self> {
        monitor.validate()?;
        let cutoff = match fp.grid() {
            Grid::Radial(g) => Some(CutoffWeight::new(monitor.cutoff_radius.unwrap_or(0.5 * g.r_max()))?),
            Grid::Tensor(_) => None,
        };
        Ok(Self { monitor, cutoff })
    }

    fn row(&self, fp: &FieldPair, t: f64, dt: f64, s_accum: f64, l4: f64) -> SeriesRow {
        let grads = Gradients::of(fp);
        let rep = FunctionalReport::with_gradients(fp, &grads);
        let vir = diagnostics::virial_with(fp, t, &grads, &rep);
        let eta = self.monitor.eta_fraction * rep.kinetic;
        let lambda_scale = diagnostics::scale_from_spectrum(&diagnostics::kinetic_spectrum(fp), eta);
        let cutoff_driver = self
            .cutoff
            .as_ref()
            .and_then(|w| diagnostics::cutoff_with(fp, w, &grads).ok())
            .unwrap_or(f64::NAN);
        SeriesRow {
            t,
            m: rep.mass,
            e: rep.energy,
            h: rep.kinetic,
            r: rep.potential,
            k: rep.coercivity,
            p: rep.momentum,
            i: vir.i,
            i_dot: vir.i_dot,
            i_ddot_formula: vir.i_ddot_formula,
            i_ddot_fd: f64::NAN,
            s_accum,
            lambda_scale,
            x_center: diagnostics::center_with(fp, &grads),
            dt,
            l4,
            cutoff_driver,
        }
    }
}

pub fn evolve(fp0: &FieldPair, cfg: &IntegratorConfig) -> Result<RunResult> {
    evolve_from(fp0, 0.0, cfg, &MonitorConfig::default())
}

/// Integrates from time `t0` to `cfg.t_end`.
///
/// Rows are recorded at the start, every `record_every` steps, at the final
/// time, and at a blow-up detection. `S_accum` integrates `∫|u|⁴ + |v|⁴` by the
/// trapezoid rule over every step and starts from zero at `t0`.
pub fn evolve_from(fp0: &FieldPair, t0: f64, cfg: &IntegratorConfig, monitor: &MonitorConfig) -> Result<RunResult> {
    cfg.validate()?;
    if !fp0.is_finite() {
        return Err(Error::NonFinite);
    }
    let recorder = Recorder::new(fp0, *monitor)?;
    let sigma = cfg.sponge_enabled().then(|| sponge_profile(fp0.grid(), cfg));
    let h_ref = reference_kinetic(fp0);
    let h_limit = cfg.blowup_h_factor * h_ref;
    let t_tol = 1e-12 * cfg.t_end.abs().max(1.0);

    let mut state = fp0.clone();
    let mut t = t0;
    let mut steps = 0usize;
    let mut s_accum = 0.0;
    let mut l4 = functionals::l4_integral(&state);
    let mut dt = adaptive_dt(&state, cfg);
    let mut series = vec![recorder.row(&state, t, dt, s_accum, l4)];
    let mut snapshots = Vec::new();
    let mut last_recorded = 0usize;

    let outcome = loop {
        if t >= cfg.t_end - t_tol {
            break Outcome::Completed;
        }
        let dt_cfl = adaptive_dt(&state, cfg);
        if dt_cfl < cfg.dt_min {
            break Outcome::DtFloor { t };
        }
        dt = dt_cfl.min(cfg.t_end - t);
        let mut next = match strang_step(&state, dt) {
            Ok(next) => next,
            Err(Error::NonFinite) => break Outcome::BlowUpDetected { t },
            Err(e) => return Err(e),
        };
        if let Some(sigma) = &sigma {
            next = damp(&next, sigma, dt);
        }
        state = next;
        t += dt;
        steps += 1;

        let l4_next = functionals::l4_integral(&state);
        s_accum += 0.5 * dt * (l4 + l4_next);
        l4 = l4_next;

        if functionals::kinetic(&state) > h_limit {
            series.push(recorder.row(&state, t, dt, s_accum, l4));
            last_recorded = steps;
            break Outcome::BlowUpDetected { t };
        }
        if steps.is_multiple_of(cfg.record_every) {
            series.push(recorder.row(&state, t, dt, s_accum, l4));
            last_recorded = steps;
        }
        if cfg.snapshot_every > 0 && steps.is_multiple_of(cfg.snapshot_every) {
            snapshots.push(Snapshot { t, pair: state.clone() });
        }
    };
    if last_recorded != steps {
        series.push(recorder.row(&state, t, dt, s_accum, l4));
    }

    let times: Vec<f64> = series.iter().map(|r| r.t).collect();
    let values: Vec<f64> = series.iter().map(|r| r.i).collect();
    for (row, fd) in series.iter_mut().zip(diagnostics::second_difference(&times, &values)) {
        row.i_ddot_fd = fd;
    }

    Ok(RunResult { series, snapshots, outcome, final_state: state, t_final: t, steps, h_ref })
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::grid::{RadialGrid, TensorGrid};

    fn gaussian_tensor(m: usize, l: f64) -> FieldPair {
        let g = TensorGrid::new(2, m, l).unwrap();
        let u: Vec<_> = g.positions().map(|x| Complex64::new((-(x[0] * x[0] + x[1] * x[1])).exp(), 0.0)).collect();
        let v: Vec<_> = g
            .positions()
            .map(|x| Complex64::new(0.0, 0.5 * (-(x[0] * x[0] + (x[1] - 0.5).powi(2))).exp()))
            .collect();
        FieldPair::new(Arc::new(g.into()), 0.5, u, v).unwrap()
    }

    #[test]
    fn zero_steps_are_identities() {
        let fp = gaussian_tensor(16, 8.0);
        for step in [nonlinear_substep, linear_substep, strang_step] {
            let out = step(&fp, 0.0).unwrap();
            assert_eq!(out.u(), fp.u());
            assert_eq!(out.v(), fp.v());
        }
    }

    #[test]
    fn config_validation() {
        assert!(IntegratorConfig::default().validate().is_ok());
        let bad = IntegratorConfig { dt_min: 1.0, ..Default::default() };
        assert!(bad.validate().is_err());
        let bad = IntegratorConfig { blowup_h_factor: 1.0, ..Default::default() };
        assert!(bad.validate().is_err());
        let json = r#"{"dt0": 0.001, "blowup_H_factor": 4}"#;
        let cfg: IntegratorConfig = serde_json::from_str(json).unwrap();
        assert_eq!((cfg.dt0, cfg.blowup_h_factor), (0.001, 4.0));
        assert!(serde_json::from_str::<IntegratorConfig>(r#"{"dt": 1}"#).is_err());
    }

    #[test]
    fn nonlinear_step_from_pure_u() {
        let g: Arc<Grid> = Arc::new(RadialGrid::six_dim(16, 1.0).unwrap().into());
        let a = 0.7;
        let fp = FieldPair::from_real(g, 1.0, &[a; 16], &[0.0; 16]).unwrap();
        let dt = 1e-3;
        let out = nonlinear_substep(&fp, dt).unwrap();
        assert!((out.v()[0] - Complex64::new(0.0, a * a * dt)).norm() < 1e-8);
        assert!((out.u()[0].norm() - a).abs() < dt * dt);
    }

    #[test]
    fn crank_nicolson_preserves_mass() {
        let g = RadialGrid::six_dim(256, 10.0).unwrap();
        let f: Vec<f64> = g.sample(|r| (-r * r / 4.0).exp() * (1.0 + r));
        let fp = FieldPair::from_real(Arc::new(g.into()), 0.7, &f, &f).unwrap();
        let out = linear_substep(&fp, 0.05).unwrap();
        let m0 = functionals::mass(&fp);
        assert!((functionals::mass(&out) - m0).abs() < 1e-12 * m0);
    }

    #[test]
    fn spectral_step_rotates_plane_waves() {
        let g = TensorGrid::new(1, 32, 2.0 * std::f64::consts::PI).unwrap();
        let xi = 3.0;
        let u: Vec<_> = g.positions().map(|x| Complex64::from_polar(1.0, xi * x[0])).collect();
        let fp = FieldPair::new(Arc::new(g.into()), 0.5, u.clone(), vec![Complex64::new(0.0, 0.0); 32]).unwrap();
        let dt = 0.013;
        let out = linear_substep(&fp, dt).unwrap();
        let phase = Complex64::from_polar(1.0, -xi * xi * dt);
        for (a, b) in out.u().iter().zip(&u) {
            assert!((a - b * phase).norm() < 1e-12);
        }
    }

    #[test]
    fn sponge_is_inert_when_off_or_outside() {
        let fp = gaussian_tensor(32, 20.0);
        let off = IntegratorConfig::default();
        assert_eq!(apply_sponge(&fp, 0.1, &off).u(), fp.u());
        let on = IntegratorConfig { sponge_width: 0.2, sponge_strength: 5.0, ..Default::default() };
        let out = apply_sponge(&fp, 0.1, &on);
        let sigma = sponge_profile(fp.grid(), &on);
        for ((a, b), s) in out.u().iter().zip(fp.u()).zip(&sigma) {
            if *s == 0.0 {
                assert_eq!(a, b);
            }
        }
        assert!(functionals::mass(&out) <= functionals::mass(&fp));
    }

    #[test]
    fn short_run_records_rows() {
        let fp = gaussian_tensor(32, 12.0);
        let cfg = IntegratorConfig { dt0: 1e-3, t_end: 0.05, record_every: 10, ..Default::default() };
        let run = evolve(&fp, &cfg).unwrap();
        assert_eq!(run.outcome, Outcome::Completed);
        assert!(run.series.windows(2).all(|w| w[1].t > w[0].t));
        assert!((run.t_final - 0.05).abs() < 1e-12);
        assert_eq!(run.series.len(), 6);
        assert!(run.series[2].i_ddot_fd.is_finite());
        assert!(run.series.iter().all(|r| (r.m - run.series[0].m).abs() < 1e-10 * r.m));
    }
}
