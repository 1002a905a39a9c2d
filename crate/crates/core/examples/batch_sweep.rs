// Parallel sweep over the amplitude family with a CSV summary.

use nls6::cli::batch::{run_batch, write_summary, Sweep};
use nls6::cli::config::{sweep_base, GridSpec};

pub fn run_example() -> nls6::Result<()> {
    let mut base = sweep_base(0.5, 1.0);
    base.grid = GridSpec::Radial { d: 6, n: 1 << 12, r_max: 200.0 };
    base.integrator.t_end = 12.0;
    let cs = Sweep::parse("c=0.6:1.4:0.4")?.values();
    let rows = run_batch(&base, &cs, 3)?;
    write_summary(&rows, std::io::stdout().lock())?;
    Ok(())
}

#[allow(dead_code)]
fn main() -> nls6::Result<()> {
    run_example()
}
