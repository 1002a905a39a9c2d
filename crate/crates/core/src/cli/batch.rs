//! Parallel sweeps over the amplitude family `c·W`.

use std::io::Write;

use rayon::prelude::*;
use serde::Serialize;

use super::config::{InitSpec, RunConfig};
use super::{simulate, Simulation};
use crate::diagnostics::{Observed, Prediction};
use crate::dynamics::Outcome;
use crate::{Error, Result};

/// `start:stop:step`, inclusive of `stop` up to rounding.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Sweep {
    pub start: f64,
    pub stop: f64,
    pub step: f64,
}

impl Sweep {
    /// Parses `c=0.2:1.6:0.1` (the `c=` prefix is optional).
    pub fn parse(spec: &str) -> Result<Self> {
        let body = spec.strip_prefix("c=").unwrap_or(spec);
        let parts: Vec<&str> = body.split(':').collect();
        let bad = || Error::InvalidParameter(format!("sweep must look like c=start:stop:step, got {spec:?}"));
        if parts.len() != 3 {
            return Err(bad());
        }
        let nums: Vec<f64> = parts.iter().map(|p| p.trim().parse::<f64>()).collect::<Result<_, _>>().map_err(|_| bad())?;
        let (start, stop, step) = (nums[0], nums[1], nums[2]);
        if !(start.is_finite() && stop.is_finite() && step.is_finite() && step > 0.0 && stop >= start && start >= 0.0) {
            return Err(bad());
        }
        Ok(Self { start, stop, step })
    }

    pub fn values(&self) -> Vec<f64> {
        let count = ((self.stop - self.start) / self.step + 1e-9).floor() as usize + 1;
        (0..count).map(|i| ((self.start + i as f64 * self.step) * 1e10).round() / 1e10).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BatchRow {
    pub c: f64,
    pub prediction: String,
    pub observed: String,
    pub outcome: String,
    pub t_final: f64,
    pub e0: f64,
    pub h0: f64,
    pub max_h_over_hw: f64,
    pub consistent: bool,
    pub error: String,
}

pub fn prediction_label(p: &Prediction) -> String {
    match p {
        Prediction::Scatter => "Scatter".into(),
        Prediction::BlowUp => "BlowUp".into(),
        Prediction::Outside(reason) => format!("Outside({reason})"),
    }
}

pub fn outcome_label(o: &Outcome) -> String {
    match o {
        Outcome::Completed => "Completed".into(),
        Outcome::BlowUpDetected { t } => format!("BlowUpDetected({t})"),
        Outcome::DtFloor { t } => format!("DtFloor({t})"),
    }
}

fn with_amplitude(base: &RunConfig, c: f64) -> RunConfig {
    let mut cfg = base.clone();
    cfg.init = InitSpec::GroundMultiple { c };
    cfg
}

fn summarize(c: f64, sim: &Simulation) -> BatchRow {
    let v = &sim.verdict;
    let h_w = v.evidence.h_w;
    let max_h = sim.run.series.iter().map(|r| r.h).fold(0.0, f64::max);
    BatchRow {
        c,
        prediction: prediction_label(&v.prediction),
        observed: format!("{:?}", v.observed),
        outcome: outcome_label(&sim.run.outcome),
        t_final: sim.run.t_final,
        e0: v.evidence.e0,
        h0: v.evidence.h0,
        max_h_over_hw: max_h / h_w,
        consistent: v.consistent,
        error: String::new(),
    }
}

fn failed(c: f64, err: &Error) -> BatchRow {
    BatchRow {
        c,
        prediction: String::new(),
        observed: format!("{:?}", Observed::Inconclusive),
        outcome: String::new(),
        t_final: f64::NAN,
        e0: f64::NAN,
        h0: f64::NAN,
        max_h_over_hw: f64::NAN,
        consistent: false,
        error: err.to_string(),
    }
}

/// Runs every amplitude on a pool of `jobs` threads. Results come back in
/// sweep order with the full runs attached.
pub fn run_cases(base: &RunConfig, cs: &[f64], jobs: usize) -> Result<Vec<(f64, Result<Simulation>)>> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.max(1))
        .build()
        .map_err(|e| Error::InvalidParameter(e.to_string()))?;
    Ok(pool.install(|| {
        cs.par_iter()
            .map(|&c| {
                let cfg = with_amplitude(base, c);
                (c, simulate(&cfg, Some(format!("c={c}"))))
            })
            .collect()
    }))
}

pub fn run_batch(base: &RunConfig, cs: &[f64], jobs: usize) -> Result<Vec<BatchRow>> {
    Ok(run_cases(base, cs, jobs)?
        .iter()
        .map(|(c, res)| match res {
            Ok(sim) => summarize(*c, sim),
            Err(e) => failed(*c, e),
        })
        .collect())
}

pub fn write_summary(rows: &[BatchRow], out: impl Write) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for row in rows {
        w.serialize(row)?;
    }
    w.flush()?;
    Ok(())
}
