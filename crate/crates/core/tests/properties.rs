//! Randomized invariants of the functionals and symmetries.

use std::sync::Arc;

use nls6::functionals::{interaction_bound_check, kinetic, mass, potential, FunctionalReport, Thresholds};
use nls6::random::{random_pair, seeded, TrialOptions};
use nls6::symmetry::{boost_energy_identity_check, scale_transform, translate, BoostParams};
use nls6::{FieldPair, Grid, RadialGrid, TensorGrid};
use proptest::prelude::*;

fn tensor(d: usize, m: usize, l: f64) -> Arc<Grid> {
    Arc::new(TensorGrid::new(d, m, l).unwrap().into())
}

fn trial(grid: &Arc<Grid>, kappa: f64, seed: u64) -> FieldPair {
    random_pair(Arc::clone(grid), kappa, TrialOptions::default(), &mut seeded(seed)).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn scaling_keeps_h_and_r(seed in any::<u64>(), lambda in 0.3f64..3.0) {
        let g: Arc<Grid> = Arc::new(RadialGrid::six_dim(512, 40.0).unwrap().into());
        let fp = random_pair(g, 1.3, TrialOptions { complex: false, ..Default::default() }, &mut seeded(seed)).unwrap();
        let s = scale_transform(&fp, lambda).unwrap();
        let (h0, h1) = (kinetic(&fp), kinetic(&s));
        let (r0, r1) = (potential(&fp), potential(&s));
        prop_assert!((h0 - h1).abs() <= 1e-10 * h0);
        prop_assert!((r0 - r1).abs() <= 1e-10 * r0.abs().max(h0));
        // Mass scales like λ^{-2} in six dimensions.
        let m = mass(&fp) / (lambda * lambda);
        prop_assert!((mass(&s) - m).abs() <= 1e-10 * m);
    }

    #[test]
    fn phase_rotation_keeps_the_functionals(seed in any::<u64>(), theta in 0.0f64..6.3) {
        let g = tensor(2, 64, 24.0);
        let fp = trial(&g, 0.5, seed);
        let rot = nls6::Complex64::from_polar(1.0, theta);
        let rot2 = rot * rot;
        let rotated = fp
            .with_fields(fp.u().iter().map(|z| z * rot).collect(), fp.v().iter().map(|z| z * rot2).collect())
            .unwrap();
        let a = FunctionalReport::of(&fp);
        let b = FunctionalReport::of(&rotated);
        prop_assert!((a.energy - b.energy).abs() <= 1e-10 * (1.0 + a.kinetic));
        prop_assert!((a.mass - b.mass).abs() <= 1e-12 * a.mass);
    }

    #[test]
    fn boost_identity_on_lattice(seed in any::<u64>(), jx in -3i32..=3, jy in -3i32..=3) {
        let g = tensor(2, 64, 24.0);
        let fp = trial(&g, 0.5, seed);
        let step = g.as_tensor().unwrap().frequency_step();
        let xi = vec![jx as f64 * step, jy as f64 * step];
        let id = boost_energy_identity_check(&fp, &BoostParams::at_zero(xi)).unwrap();
        let h = kinetic(&fp);
        prop_assert!((id.lhs - id.rhs).abs() <= 1e-11 * (1.0 + h), "{:?}", id);
    }

    #[test]
    fn translation_keeps_the_functionals(seed in any::<u64>(), k in -8i32..=8) {
        let g = tensor(1, 128, 30.0);
        let fp = trial(&g, 0.8, seed);
        let dx = 30.0 / 128.0;
        let shifted = translate(&fp, &[k as f64 * dx]).unwrap();
        let a = FunctionalReport::of(&fp);
        let b = FunctionalReport::of(&shifted);
        prop_assert!((a.kinetic - b.kinetic).abs() <= 1e-10 * (1.0 + a.kinetic));
        prop_assert!((a.potential - b.potential).abs() <= 1e-10 * (1.0 + a.kinetic));
        prop_assert!((a.momentum[0] - b.momentum[0]).abs() <= 1e-10 * (1.0 + a.kinetic));
    }

    #[test]
    fn interaction_is_bounded_by_kinetic_energy(seed in any::<u64>(), kappa in 0.2f64..4.0) {
        let g: Arc<Grid> = Arc::new(RadialGrid::six_dim(1024, 60.0).unwrap().into());
        let fp = random_pair(g, kappa, TrialOptions::default(), &mut seeded(seed)).unwrap();
        prop_assert!(interaction_bound_check(&fp).ok);
        let thr = Thresholds::closed_form(kappa);
        prop_assert!(thr.gn_ratio(&fp) <= 1.0 + 1e-6);
    }
}
