// Conserved quantities along the amplitude family c·W and the trapping and
// blow-up margins that follow from the energy.

use nls6::functionals::{blowup_deltas, trapping_deltas, FunctionalReport};
use nls6::ground_state::GroundState;
use nls6::RadialGrid;

pub fn run_example() -> nls6::Result<()> {
    let grid = RadialGrid::six_dim(1 << 13, 400.0)?;
    let gs = GroundState::closed_form(0.5, &grid)?;
    let thr = *gs.thresholds();
    println!("H_W = {:.4}  R_W = {:.4}  E_W = {:.4}  C_GN = {:.6e}", thr.h_w, thr.r_w, thr.e_w, thr.c_gn);

    for c in [0.5, 0.9, 1.0, 1.1, 1.5] {
        let rep = FunctionalReport::of(&gs.scaled(c));
        let j = rep.action.map_or("-".into(), |j| format!("{:.4}", j / thr.j_min));
        print!(
            "c = {c:.1}: M = {:10.2} H/H_W = {:.4} E/E_W = {:+.4} K = {:+10.3} J/J_min = {j}",
            rep.mass,
            rep.kinetic / thr.h_w,
            rep.energy / thr.e_w,
            rep.coercivity,
        );
        if rep.energy < thr.e_w && rep.kinetic < thr.h_w {
            let t = trapping_deltas(rep.energy, &thr)?;
            println!("  trapped: H <= {:.4} H_W", 1.0 - t.delta_prime);
        } else if rep.energy < thr.e_w && rep.kinetic > thr.h_w {
            let b = blowup_deltas(rep.energy, &thr)?;
            println!("  repelled: H >= {:.4} H_W", 1.0 + b.delta_tilde_prime);
        } else {
            println!("  at the threshold");
        }
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> nls6::Result<()> {
    run_example()
}
