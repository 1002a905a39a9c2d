// The sharp interaction inequality R ≤ C_GN H^{3/2} on random trial pairs,
// equality at the ground state, and the variational gap around it.

use std::sync::Arc;

use nls6::functionals::{interaction_bound_check, FunctionalReport};
use nls6::ground_state::{variational_probe, GroundState};
use nls6::random::{random_pair, seeded, TrialOptions};
use nls6::{Grid, RadialGrid};

pub fn run_example() -> nls6::Result<()> {
    let kappa = 1.0;
    let grid: Arc<Grid> = Arc::new(RadialGrid::six_dim(1 << 12, 100.0)?.into());
    let gs = GroundState::on_grid(kappa, Arc::clone(&grid))?;
    let thr = *gs.thresholds();
    let mut rng = seeded(7);
    let opts = TrialOptions { complex: false, ..Default::default() };

    let mut worst: f64 = 0.0;
    for _ in 0..50 {
        let fp = random_pair(Arc::clone(&grid), kappa, opts, &mut rng)?;
        worst = worst.max(thr.gn_ratio(&fp));
        assert!(interaction_bound_check(&fp).ok);
    }
    println!("max R / (C_GN H^3/2) over 50 random pairs: {worst:.4}");
    println!("at W: {:.8}", thr.gn_ratio(gs.pair()));

    let rep = FunctionalReport::of(gs.pair());
    println!("J(W) C_GN^2 = {:.10}", rep.action.unwrap_or(f64::NAN) * thr.c_gn * thr.c_gn);

    let probe = variational_probe(&gs, 20, 11)?;
    println!("smallest J - J_min over {} perturbations: {:.3e}", probe.samples, probe.min_gap);
    Ok(())
}

#[allow(dead_code)]
fn main() -> nls6::Result<()> {
    run_example()
}
