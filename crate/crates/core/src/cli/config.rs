//! JSON run configuration.

use std::path::{Path, PathBuf};
use std::sync::Arc;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::snapshot;
use crate::dynamics::{IntegratorConfig, MonitorConfig};
use crate::functionals::Thresholds;
use crate::grid::{FieldPair, Grid, RadialGrid, TensorGrid};
use crate::ground_state::GroundState;
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub kappa: f64,
    pub grid: GridSpec,
    pub init: InitSpec,
    #[serde(default)]
    pub integrator: IntegratorConfig,
    #[serde(default)]
    pub outputs: OutputSpec,
    #[serde(default)]
    pub diagnostics: MonitorConfig,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase", deny_unknown_fields)]
pub enum GridSpec {
    Radial {
        #[serde(default = "six")]
        d: usize,
        n: usize,
        r_max: f64,
    },
    Tensor {
        d: usize,
        m: usize,
        #[serde(rename = "L")]
        l: f64,
    },
}

fn six() -> usize {
    6
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", deny_unknown_fields)]
pub enum InitSpec {
    /// Amplitude multiple of the ground state.
    #[serde(rename = "cW")]
    GroundMultiple { c: f64 },
    /// `u = amp·g·e^{iξ·x}`, `v = amp·g·e^{2iξ·x}` with
    /// `g = exp(−|x − center|²/2 width²)`.
    #[serde(rename = "gaussian")]
    Gaussian {
        amp: f64,
        width: f64,
        #[serde(default)]
        center: Vec<f64>,
        #[serde(default, rename = "phase_xi", alias = "phase_ξ")]
        phase_xi: Vec<f64>,
    },
    #[serde(rename = "snapshot")]
    Snapshot { path: PathBuf },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct OutputSpec {
    pub dir: PathBuf,
    pub csv: bool,
    pub snapshots: bool,
}

impl Default for OutputSpec {
    fn default() -> Self {
        Self { dir: PathBuf::from("out"), csv: true, snapshots: false }
    }
}

fn finite(name: &str, x: f64) -> Result<()> {
    if x.is_finite() {
        Ok(())
    } else {
        Err(Error::Config(format!("{name} must be finite")))
    }
}

impl GridSpec {
    pub fn build(&self) -> Result<Arc<Grid>> {
        let grid: Grid = match *self {
            GridSpec::Radial { d, n, r_max } => RadialGrid::new(d, n, r_max)?.into(),
            GridSpec::Tensor { d, m, l } => TensorGrid::new(d, m, l)?.into(),
        };
        Ok(Arc::new(grid))
    }
}

impl RunConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: RunConfig = serde_json::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        let mut cfg = Self::from_json(&text)?;
        // Relative snapshot paths are read relative to the config file.
        if let InitSpec::Snapshot { path: snap } = &mut cfg.init {
            if snap.is_relative() {
                if let Some(parent) = path.parent() {
                    *snap = parent.join(&*snap);
                }
            }
        }
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.kappa.is_finite() && self.kappa > 0.0) {
            return Err(Error::Config(format!("kappa must be finite and positive, got {}", self.kappa)));
        }
        match &self.grid {
            GridSpec::Radial { r_max, .. } => finite("r_max", *r_max)?,
            GridSpec::Tensor { l, .. } => finite("L", *l)?,
        }
        match &self.init {
            InitSpec::GroundMultiple { c } => {
                if !(c.is_finite() && *c >= 0.0) {
                    return Err(Error::Config(format!("c must be finite and nonnegative, got {c}")));
                }
            }
            InitSpec::Gaussian { amp, width, center, phase_xi } => {
                finite("amp", *amp)?;
                if !(width.is_finite() && *width > 0.0) {
                    return Err(Error::Config(format!("width must be positive, got {width}")));
                }
                for x in center.iter().chain(phase_xi) {
                    finite("gaussian parameters", *x)?;
                }
            }
            InitSpec::Snapshot { .. } => {}
        }
        self.integrator.validate().map_err(|e| Error::Config(e.to_string()))?;
        self.diagnostics.validate().map_err(|e| Error::Config(e.to_string()))?;
        Ok(())
    }

    /// Initial state and start time.
    pub fn initial_state(&self) -> Result<(FieldPair, f64)> {
        if let InitSpec::Snapshot { path } = &self.init {
            let (t, fp) = snapshot::read(path)?;
            if fp.kappa() != self.kappa {
                return Err(Error::Config(format!("snapshot has kappa = {}, config has {}", fp.kappa(), self.kappa)));
            }
            let expected = self.grid.build()?;
            if *expected != *fp.grid() {
                return Err(Error::Config("snapshot grid differs from the configured grid".into()));
            }
            return Ok((fp, t));
        }
        let grid = self.grid.build()?;
        let fp = initial_pair(&self.init, grid, self.kappa)?;
        Ok((fp, 0.0))
    }
}

/// Build the initial pair for a non-snapshot init on `grid`.
pub fn initial_pair(init: &InitSpec, grid: Arc<Grid>, kappa: f64) -> Result<FieldPair> {
    match init {
        InitSpec::GroundMultiple { c } => Ok(GroundState::on_grid(kappa, grid)?.scaled(*c)),
        InitSpec::Gaussian { amp, width, center, phase_xi } => {
            let d = grid.d();
            let pad = |xs: &[f64], what: &str| -> Result<[f64; 3]> {
                if xs.is_empty() {
                    return Ok([0.0; 3]);
                }
                if xs.len() != d {
                    return Err(Error::Config(format!("{what} needs {d} components, got {}", xs.len())));
                }
                let mut out = [0.0; 3];
                if grid.is_radial() {
                    if xs.iter().any(|x| *x != 0.0) {
                        return Err(Error::Config(format!("{what} must vanish on a radial grid")));
                    }
                } else {
                    out[..d].copy_from_slice(xs);
                }
                Ok(out)
            };
            let c = pad(center, "center")?;
            let xi = pad(phase_xi, "phase_xi")?;
            let sample = |x: [f64; 3]| -> (Complex64, Complex64) {
                let r2: f64 = (0..3).map(|a| (x[a] - c[a]).powi(2)).sum();
                let phase: f64 = (0..3).map(|a| xi[a] * x[a]).sum();
                let g = amp * (-0.5 * r2 / (width * width)).exp();
                (Complex64::from_polar(g, phase), Complex64::from_polar(g, 2.0 * phase))
            };
            let (u, v): (Vec<_>, Vec<_>) = match &*grid {
                Grid::Radial(g) => g.nodes().iter().map(|&r| sample([r, 0.0, 0.0])).unzip(),
                Grid::Tensor(g) => g.positions().map(sample).unzip(),
            };
            FieldPair::new(grid, kappa, u, v)
        }
        InitSpec::Snapshot { .. } => Err(Error::Config("snapshot init has no closed form".into())),
    }
}

/// Ground-state thresholds on the run's grid, available on six-dimensional
/// radial grids only.
pub fn grid_thresholds(grid: &Arc<Grid>, kappa: f64) -> Option<Thresholds> {
    match &**grid {
        Grid::Radial(g) if g.d() == 6 => GroundState::on_grid(kappa, Arc::clone(grid)).ok().map(|gs| *gs.thresholds()),
        _ => None,
    }
}

/// The production setup used by presets and sweeps: radial d = 6, n = 2¹³,
/// `r_max = 400`, `dt0 = 10⁻²`, horizon 30.
pub fn sweep_base(kappa: f64, c: f64) -> RunConfig {
    RunConfig {
        kappa,
        grid: GridSpec::Radial { d: 6, n: 1 << 13, r_max: 400.0 },
        init: InitSpec::GroundMultiple { c },
        integrator: IntegratorConfig { dt0: 1e-2, t_end: 30.0, record_every: 10, ..Default::default() },
        outputs: OutputSpec::default(),
        diagnostics: MonitorConfig::default(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const RADIAL: &str = r#"{
        "kappa": 0.5,
        "grid": {"type": "radial", "n": 256, "r_max": 40},
        "init": {"kind": "cW", "c": 0.5},
        "integrator": {"dt0": 0.01, "t_end": 1},
        "outputs": {"dir": "runs/a", "csv": true, "snapshots": false}
    }"#;

    #[test]
    fn parses_radial_config() {
        let cfg = RunConfig::from_json(RADIAL).unwrap();
        assert_eq!(cfg.grid, GridSpec::Radial { d: 6, n: 256, r_max: 40.0 });
        let (fp, t0) = cfg.initial_state().unwrap();
        assert_eq!(t0, 0.0);
        assert!((fp.u()[0].re - 0.5 * 0.5f64.sqrt() / (1.0 + (40.0f64 / 512.0).powi(2) / 24.0).powi(2)).abs() < 1e-15);
    }

    #[test]
    fn rejects_unknown_keys_and_bad_values() {
        let extra = RADIAL.replace("\"kappa\": 0.5,", "\"kappa\": 0.5, \"colour\": 1,");
        assert!(RunConfig::from_json(&extra).is_err());
        let extra_grid = RADIAL.replace("\"r_max\": 40", "\"r_max\": 40, \"m\": 4");
        assert!(RunConfig::from_json(&extra_grid).is_err());
        let neg = RADIAL.replace("\"kappa\": 0.5", "\"kappa\": -1");
        assert!(RunConfig::from_json(&neg).is_err());
        let kind = RADIAL.replace("\"cW\"", "\"cw\"");
        assert!(RunConfig::from_json(&kind).is_err());
    }

    #[test]
    fn tensor_gaussian_with_boost_phase() {
        let json = r#"{
            "kappa": 0.5,
            "grid": {"type": "tensor", "d": 2, "m": 32, "L": 12},
            "init": {"kind": "gaussian", "amp": 1, "width": 1, "center": [0.5, 0], "phase_ξ": [0, 0]}
        }"#;
        let cfg = RunConfig::from_json(json).unwrap();
        let (fp, _) = cfg.initial_state().unwrap();
        assert_eq!(fp.grid().d(), 2);
        assert!(fp.u().iter().all(|z| z.im == 0.0));
    }
}
