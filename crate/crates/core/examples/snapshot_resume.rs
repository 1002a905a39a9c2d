// Persist a run to a binary snapshot and resume it from there.

use nls6::cli::config::{sweep_base, GridSpec};
use nls6::cli::snapshot;
use nls6::dynamics::{evolve_from, MonitorConfig};

pub fn run_example() -> nls6::Result<()> {
    let mut cfg = sweep_base(0.5, 0.8);
    cfg.grid = GridSpec::Radial { d: 6, n: 1 << 11, r_max: 100.0 };
    cfg.integrator.t_end = 2.0;
    cfg.integrator.snapshot_every = 100;
    let (fp, t0) = cfg.initial_state()?;
    let full = evolve_from(&fp, t0, &cfg.integrator, &MonitorConfig::default())?;

    let snap = &full.snapshots[0];
    let path = std::env::temp_dir().join("nls6_resume.bin");
    snapshot::write(&path, snap.t, &snap.pair)?;
    let (t, state) = snapshot::read(&path)?;
    let resumed = evolve_from(&state, t, &cfg.integrator, &MonitorConfig::default())?;

    let gap = full.final_state.distance(&resumed.final_state)?;
    println!("snapshot at t = {t}, {} bytes", std::fs::metadata(&path)?.len());
    println!("final-state distance full vs resumed: {gap:.3e}");
    Ok(())
}

#[allow(dead_code)]
fn main() -> nls6::Result<()> {
    run_example()
}
