// Dyadic frequency scale of a state, its covariance under the scaling
// symmetry, and Littlewood–Paley projection onto low frequencies.

use std::sync::Arc;

use nls6::diagnostics::frequency_scale;
use nls6::functionals::kinetic;
use nls6::grid::{l2_norm, lp_project};
use nls6::random::{random_pair, seeded, TrialOptions};
use nls6::symmetry::scale_transform;
use nls6::{Grid, TensorGrid};

pub fn run_example() -> nls6::Result<()> {
    let grid: Arc<Grid> = Arc::new(TensorGrid::new(2, 128, 40.0)?.into());
    let mut rng = seeded(5);
    let fp = random_pair(Arc::clone(&grid), 0.5, TrialOptions::default(), &mut rng)?;
    let eta = 0.5 * kinetic(&fp);
    let n0 = frequency_scale(&fp, eta)?;
    println!("N(g) = {n0}");
    for lambda in [0.5, 2.0] {
        let scaled = scale_transform(&fp, lambda)?;
        let n = frequency_scale(&scaled, 0.5 * kinetic(&scaled))?;
        println!("lambda = {lambda}: N = {n}, N / (lambda N(g)) = {}", n / (lambda * n0));
    }

    let total = l2_norm(fp.u(), &grid)?;
    for scale in [0.25, 1.0, 4.0] {
        let low = lp_project(fp.u(), &grid, scale)?;
        println!("|P_<={scale} u| / |u| = {:.6}", l2_norm(&low, &grid)? / total);
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> nls6::Result<()> {
    run_example()
}
