// Predict and then simulate one sub-threshold and one super-threshold member
// of the amplitude family, writing the usual run artifacts.

use nls6::cli::config::sweep_base;
use nls6::cli::{simulate, write_outputs};

pub fn run_example() -> nls6::Result<()> {
    let out = std::env::temp_dir().join("nls6_dichotomy_run");
    for c in [0.7, 1.2] {
        let mut cfg = sweep_base(0.5, c);
        cfg.integrator.t_end = 15.0;
        let sim = simulate(&cfg, Some(format!("c{c}")))?;
        let v = &sim.verdict;
        let max_h = sim.run.series.iter().map(|r| r.h).fold(0.0, f64::max);
        println!(
            "c = {c}: predicted {:?}, observed {:?}, outcome {:?}, max H/H_W = {:.3}, {} rows",
            v.prediction,
            v.observed,
            sim.run.outcome,
            max_h / v.evidence.h_w,
            sim.run.series.len()
        );
        write_outputs(&sim, &cfg, &out.join(format!("c{c}")))?;
    }
    println!("artifacts in {}", out.display());
    Ok(())
}

#[allow(dead_code)]
fn main() -> nls6::Result<()> {
    run_example()
}
