// Certify the closed-form ground state for several couplings and watch the
// elliptic residual converge under grid refinement.

use nls6::cli::certificate;
use nls6::ground_state::{elliptic_residual, GroundState};
use nls6::RadialGrid;

pub fn run_example() -> nls6::Result<()> {
    println!("{:>6} {:>14} {:>14} {:>10} {:>10} {:>10}", "kappa", "H_W", "E_W", "res1", "res2", "pohozaev");
    for kappa in [0.25, 0.5, 1.0, 2.0] {
        let c = certificate(kappa, 1 << 14, 400.0)?;
        println!(
            "{:>6} {:>14.6} {:>14.6} {:>10.2e} {:>10.2e} {:>10.2e}",
            kappa, c.H_W, c.E_W, c.res1, c.res2, c.pohozaev_dev
        );
        assert!(c.pass);
    }

    let mut prev = None;
    for n in [1 << 12, 1 << 13, 1 << 14] {
        let gs = GroundState::closed_form(1.0, &RadialGrid::six_dim(n, 400.0)?)?;
        let res = elliptic_residual(&gs);
        let order = prev.map(|p: f64| (p / res.res1).log2());
        println!("n = {n:>6}: res1 = {:.3e}, order = {}", res.res1, order.map_or("-".into(), |o| format!("{o:.2}")));
        prev = Some(res.res1);
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> nls6::Result<()> {
    run_example()
}
