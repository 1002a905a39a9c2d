// Second-moment diagnostics: the virial identity on a periodic run at the
// mass resonance, and the cut-off virial driver on a radial blow-up.

use std::sync::Arc;

use nls6::cli::config::sweep_base;
use nls6::cli::simulate;
use nls6::dynamics::{evolve, IntegratorConfig};
use nls6::{Complex64, FieldPair, Grid, TensorGrid};

pub fn run_example() -> nls6::Result<()> {
    let tg = TensorGrid::new(2, 128, 40.0)?;
    let (u, v): (Vec<_>, Vec<_>) = tg
        .positions()
        .map(|x| {
            let r2 = x[0] * x[0] + x[1] * x[1];
            (Complex64::new(1.2 * (-r2 / 2.0).exp(), 0.0), Complex64::new(0.8 * (-r2 / 3.0).exp(), 0.0))
        })
        .unzip();
    let grid: Arc<Grid> = Arc::new(tg.into());
    let fp = FieldPair::new(grid, 0.5, u, v)?;
    let cfg = IntegratorConfig { dt0: 1e-3, t_end: 0.5, cfl_c: 1e9, record_every: 25, ..Default::default() };
    let run = evolve(&fp, &cfg)?;
    for row in run.series.iter().filter(|r| r.i_ddot_fd.is_finite()) {
        println!("t = {:.3}: I'' fd = {:+.6}, formula = {:+.6}", row.t, row.i_ddot_fd, row.i_ddot_formula);
    }

    let mut blow = sweep_base(0.5, 1.3);
    blow.grid = nls6::cli::config::GridSpec::Radial { d: 6, n: 1 << 12, r_max: 200.0 };
    let sim = simulate(&blow, None)?;
    let worst = sim.run.series.iter().map(|r| r.cutoff_driver).fold(f64::NEG_INFINITY, f64::max);
    println!("c = 1.3: {:?}, largest cut-off driver {:.3e}", sim.run.outcome, worst);
    Ok(())
}

#[allow(dead_code)]
fn main() -> nls6::Result<()> {
    run_example()
}
