//! Time integration: splitting accuracy, reversibility, absorbing layer and
//! snapshot restarts.

use std::sync::Arc;

use nls6::cli::config::{sweep_base, GridSpec};
use nls6::cli::snapshot;
use nls6::dynamics::{evolve, evolve_from, strang_step, IntegratorConfig, MonitorConfig, Outcome};
use nls6::functionals::{mass, FunctionalReport};
use nls6::ground_state::GroundState;
use nls6::{Complex64, FieldPair, Grid, RadialGrid, TensorGrid};

fn smooth_tensor(kappa: f64) -> FieldPair {
    let g = TensorGrid::new(2, 64, 20.0).unwrap();
    let (u, v): (Vec<_>, Vec<_>) = g
        .positions()
        .map(|x| {
            let r2 = x[0] * x[0] + x[1] * x[1];
            (
                Complex64::from_polar((-r2 / 2.0).exp(), 0.2 * x[0]),
                Complex64::new(0.6 * (-(r2 + x[1]) / 3.0).exp(), 0.1 * (-r2).exp()),
            )
        })
        .unzip();
    FieldPair::new(Arc::new(g.into()), kappa, u, v).unwrap()
}

fn march(fp: &FieldPair, dt: f64, steps: usize) -> FieldPair {
    (0..steps).fold(fp.clone(), |s, _| strang_step(&s, dt).unwrap())
}

#[test]
fn strang_step_is_reversible() {
    let fp = smooth_tensor(0.7);
    let dt = 2e-3;
    let back = march(&march(&fp, dt, 50), -dt, 50);
    let err = back.distance(&fp).unwrap();
    assert!(err < 1e-11, "{err}");
}

#[test]
fn splitting_is_second_order_on_radial_grid() {
    let g: Arc<Grid> = Arc::new(RadialGrid::six_dim(512, 20.0).unwrap().into());
    let r = g.radii();
    let u: Vec<f64> = r.iter().map(|r| 0.8 * (-r * r / 4.0).exp()).collect();
    let v: Vec<f64> = r.iter().map(|r| 0.5 * (-r * r / 6.0).exp()).collect();
    let fp = FieldPair::from_real(g, 1.0, &u, &v).unwrap();
    let t = 0.2;
    let reference = march(&fp, t / 1600.0, 1600);
    let errs: Vec<f64> = [20, 40, 80].iter().map(|&k| march(&fp, t / k as f64, k).distance(&reference).unwrap()).collect();
    for w in errs.windows(2) {
        let order = (w[0] / w[1]).log2();
        assert!((1.9..2.1).contains(&order), "{errs:?}");
    }
}

#[test]
fn radial_mass_is_conserved_without_sponge() {
    let g = RadialGrid::six_dim(1 << 11, 100.0).unwrap();
    let gs = GroundState::closed_form(0.5, &g).unwrap();
    let cfg = IntegratorConfig { t_end: 1.0, ..Default::default() };
    let run = evolve(&gs.scaled(0.8), &cfg).unwrap();
    let m0 = run.series[0].m;
    for row in &run.series {
        assert!((row.m - m0).abs() < 1e-6 * m0, "{} vs {m0}", row.m);
    }
}

#[test]
fn sponge_absorbs_only_near_the_boundary() {
    // A localized pulse launched outward: with the layer on, mass leaves the
    // box; the interior solution is untouched while the pulse is far away.
    let g: Arc<Grid> = Arc::new(RadialGrid::six_dim(1 << 11, 60.0).unwrap().into());
    let r = g.radii();
    let shell = |r: f64| (-(r - 20.0).powi(2) / 8.0).exp();
    let u: Vec<Complex64> = r.iter().map(|&r| Complex64::from_polar(2e-3 * shell(r), 2.0 * r)).collect();
    let v: Vec<Complex64> = r.iter().map(|&r| Complex64::from_polar(1.5e-3 * shell(r), 4.0 * r)).collect();
    let fp = FieldPair::new(g, 0.5, u, v).unwrap();
    let plain = IntegratorConfig { t_end: 15.0, dt0: 0.005, ..Default::default() };
    let sponge = IntegratorConfig { sponge_width: 0.25, sponge_strength: 2.0, ..plain.clone() };
    let a = evolve(&fp, &plain).unwrap();
    let b = evolve(&fp, &sponge).unwrap();
    assert_eq!((a.outcome, b.outcome), (Outcome::Completed, Outcome::Completed));
    let ma = mass(&a.final_state);
    let mb = mass(&b.final_state);
    assert!((ma - mass(&fp)).abs() < 1e-8 * ma);
    assert!(mb < 0.5 * ma, "absorbed {mb} vs {ma}");
    // Early on both runs coincide.
    let early = a.series.iter().zip(&b.series).take_while(|(x, _)| x.t <= 1.0);
    for (x, y) in early {
        assert!((x.h - y.h).abs() < 1e-9 * x.h.max(1e-300), "t = {}: {} vs {}", x.t, x.h, y.h);
    }
}

#[test]
fn snapshot_resume_reproduces_the_series() {
    let mut cfg = sweep_base(0.5, 0.9);
    cfg.grid = GridSpec::Radial { d: 6, n: 1 << 11, r_max: 100.0 };
    cfg.integrator.t_end = 3.0;
    cfg.integrator.record_every = 10;
    cfg.integrator.snapshot_every = 100;
    let (fp, t0) = cfg.initial_state().unwrap();
    let monitor = MonitorConfig::default();
    let full = evolve_from(&fp, t0, &cfg.integrator, &monitor).unwrap();
    assert_eq!(full.outcome, Outcome::Completed);

    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("snap.bin");
    let snap = &full.snapshots[1];
    snapshot::write(&path, snap.t, &snap.pair).unwrap();
    let (t, state) = snapshot::read(&path).unwrap();
    let resumed = evolve_from(&state, t, &cfg.integrator, &monitor).unwrap();

    let offset = full.series.iter().position(|r| r.t == t).expect("snapshot time is a recorded row");
    let s0 = full.series[offset].s_accum;
    let overlap = &full.series[offset..];
    assert_eq!(overlap.len(), resumed.series.len());
    let close = |a: f64, b: f64| (a - b).abs() <= 1e-10 * a.abs().max(1.0) || (a.is_nan() && b.is_nan());
    for (k, (x, y)) in overlap.iter().zip(&resumed.series).enumerate() {
        let pairs = [
            (x.t, y.t),
            (x.m, y.m),
            (x.e, y.e),
            (x.h, y.h),
            (x.r, y.r),
            (x.k, y.k),
            (x.i, y.i),
            (x.i_dot, y.i_dot),
            (x.i_ddot_formula, y.i_ddot_formula),
            (x.s_accum - s0, y.s_accum),
            (x.lambda_scale, y.lambda_scale),
            (x.dt, y.dt),
        ];
        for (col, (a, b)) in pairs.iter().enumerate() {
            assert!(close(*a, *b), "row {k} column {col}: {a} vs {b}");
        }
        // The second difference needs both neighbours; it is only defined
        // away from the ends of each run.
        if k > 0 && k + 1 < resumed.series.len() {
            assert!(close(x.i_ddot_fd, y.i_ddot_fd), "row {k}: {} vs {}", x.i_ddot_fd, y.i_ddot_fd);
        }
    }
}

#[test]
fn momentum_is_conserved_on_tensor_grid() {
    let fp = smooth_tensor(0.5);
    let p0 = FunctionalReport::of(&fp).momentum;
    let p1 = FunctionalReport::of(&march(&fp, 1e-3, 200)).momentum;
    for (a, b) in p0.iter().zip(&p1) {
        assert!((a - b).abs() < 1e-10, "{a} vs {b}");
    }
}
