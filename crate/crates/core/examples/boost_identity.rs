// Galilean boosts at the mass resonance κ = ½: the kinetic-energy identity
// on random data and the momentum-cancelling optimal boost.

use std::sync::Arc;

use nls6::random::{random_pair, seeded, TrialOptions};
use nls6::symmetry::{boost_energy_identity_check, optimal_boost, BoostParams};
use nls6::{Complex64, FieldPair, Grid, TensorGrid};

pub fn run_example() -> nls6::Result<()> {
    let tg = TensorGrid::new(2, 128, 20.0)?;
    let step = tg.frequency_step();
    let grid: Arc<Grid> = Arc::new(tg.into());
    let mut rng = seeded(3);

    for k in 0..5 {
        let fp = random_pair(Arc::clone(&grid), 0.5, TrialOptions::default(), &mut rng)?;
        let xi = vec![(k as f64 - 2.0) * step, step];
        let id = boost_energy_identity_check(&fp, &BoostParams::at_zero(xi.clone()))?;
        println!("xi = {xi:?}: lhs = {:+.6e}, 2 xi.P = {:+.6e}, dev = {:.1e}", id.lhs, id.rhs, id.dev);
    }

    // A Gaussian pair moving with velocity 2ξ₀ is brought to rest by ξ* = −ξ₀.
    let g = grid.as_tensor().expect("tensor grid");
    let xi0 = [3.0 * step, -2.0 * step];
    let (u, v): (Vec<_>, Vec<_>) = g
        .positions()
        .map(|x| {
            let phase = xi0[0] * x[0] + xi0[1] * x[1];
            let env = (-(x[0] * x[0] + x[1] * x[1]) / 4.0).exp();
            (Complex64::from_polar(env, phase), Complex64::from_polar(0.5 * env, 2.0 * phase))
        })
        .unzip();
    let fp = FieldPair::new(Arc::clone(&grid), 0.5, u, v)?;
    let ob = optimal_boost(&fp)?;
    println!(
        "optimal boost xi* = {:?}: H {:.6} -> {:.6}, drop {:.6} vs |P|^2/M = {:.6}",
        ob.xi,
        ob.h_before,
        ob.h_after,
        ob.h_before - ob.h_after,
        ob.predicted_drop
    );
    Ok(())
}

#[allow(dead_code)]
fn main() -> nls6::Result<()> {
    run_example()
}
