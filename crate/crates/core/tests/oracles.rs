//! Grid quadrature and closed-form constants checked against independent
//! adaptive quadrature.

use std::f64::consts::PI;
use std::sync::Arc;

use nls6::functionals::{kinetic, mass, FunctionalReport};
use nls6::grid::{ball_volume, integrate, laplacian};
use nls6::ground_state::{profile, GroundState};
use nls6::{Complex64, FieldPair, Grid, RadialGrid, TensorGrid};
use quadrature::double_exponential;

/// ∫₀^∞ f(r) dr through r = a·x/(1 − x).
fn half_line(f: impl Fn(f64) -> f64, a: f64) -> f64 {
    let g = |x: f64| {
        if x >= 1.0 {
            return 0.0;
        }
        let r = a * x / (1.0 - x);
        f(r) * a / ((1.0 - x) * (1.0 - x))
    };
    double_exponential::integrate(g, 0.0, 1.0, 1e-14).integral
}

#[test]
fn kinetic_constant_from_one_dimensional_quadrature() {
    // H(W)/(κπ³) = ∫ r⁵ [φ′² + ψ′²/2] dr with κ = 1.
    let integrand = |r: f64| {
        let s = 1.0 + r * r / 24.0;
        let dphi = -(r / 6.0) * s.powi(-3);
        r.powi(5) * 1.5 * dphi * dphi
    };
    let oracle = half_line(integrand, 5.0);
    assert!((oracle - 345.6).abs() < 1e-9 * 345.6, "{oracle}");
    let r_w = half_line(|r| r.powi(5) * (1.0 + r * r / 24.0).powi(-6), 5.0);
    assert!((r_w - 230.4).abs() < 1e-9 * 230.4, "{r_w}");
}

#[test]
fn ground_state_mass_matches_quadrature() {
    let kappa = 0.5;
    let g = RadialGrid::six_dim(1 << 14, 400.0).unwrap();
    let gs = GroundState::closed_form(kappa, &g).unwrap();
    let oracle = double_exponential::integrate(
        |r| {
            let p = profile(kappa, r);
            PI.powi(3) * r.powi(5) * (p * p + p * p / kappa)
        },
        0.0,
        400.0,
        1e-10,
    )
    .integral;
    let m = mass(gs.pair());
    assert!((m - oracle).abs() < 1e-6 * oracle, "{m} vs {oracle}");
}

#[test]
fn ground_state_kinetic_energy_matches_truncated_quadrature() {
    // The grid sees [0, r_max]; the closed form misses the r > 400 tail (~2e-7).
    let kappa = 1.0;
    let oracle = PI.powi(3)
        * double_exponential::integrate(
            |r: f64| {
                let s = 1.0 + r * r / 24.0;
                let dphi = -(r / 6.0) * s.powi(-3);
                r.powi(5) * 1.5 * dphi * dphi
            },
            0.0,
            400.0,
            1e-12,
        )
        .integral;
    let closed = 345.6 * PI.powi(3);
    assert!((closed - oracle) / closed < 3e-7);
    let mut errs = Vec::new();
    for n in [1 << 12, 1 << 13, 1 << 14] {
        let gs = GroundState::closed_form(kappa, &RadialGrid::six_dim(n, 400.0).unwrap()).unwrap();
        errs.push((kinetic(gs.pair()) - oracle).abs() / oracle);
    }
    assert!(errs[2] < 1e-8, "{errs:?}");
    assert!(errs[2] < errs[0], "{errs:?}");
}

#[test]
fn gaussian_gradient_integral() {
    // ∫_{ℝ⁶} |∇e^{−r²/2}|² = π³ ∫ r⁷ e^{−r²} dr.
    let g = RadialGrid::six_dim(1 << 13, 20.0).unwrap();
    let f: Vec<f64> = g.sample(|r| (-0.5 * r * r).exp());
    let fp = FieldPair::from_real(Arc::new(g.into()), 1.0, &f, &vec![0.0; f.len()]).unwrap();
    let oracle = PI.powi(3) * double_exponential::integrate(|r| r.powi(7) * (-r * r).exp(), 0.0, 20.0, 1e-14).integral;
    let h = kinetic(&fp);
    assert!((h - oracle).abs() < 1e-8 * oracle, "{h} vs {oracle}");
}

#[test]
fn ball_volumes_in_four_to_six_dimensions() {
    for d in [4, 5, 6] {
        let g = RadialGrid::new(d, 1 << 17, 3.0).unwrap();
        let vol = g.integrate(&vec![1.0; g.n()]);
        let exact = ball_volume(d, 3.0);
        assert!((vol - exact).abs() < 1e-10 * exact, "d = {d}: {vol} vs {exact}");
    }
}

#[test]
fn tensor_gaussian_mass_is_spectrally_exact() {
    let g: Grid = TensorGrid::new(2, 64, 30.0).unwrap().into();
    let t = g.as_tensor().unwrap();
    let dens: Vec<f64> = t.positions().map(|x| (-(x[0] * x[0] + x[1] * x[1])).exp()).collect();
    assert!((integrate(&dens, &g).unwrap() - PI).abs() < 1e-13);
}

#[test]
fn radial_laplacian_is_self_adjoint() {
    let g = RadialGrid::six_dim(512, 30.0).unwrap();
    let grid: Grid = g.clone().into();
    let f: Vec<Complex64> = g.nodes().iter().map(|&r| Complex64::new((-r * r / 20.0).exp(), (r / 7.0).sin() / (1.0 + r * r))).collect();
    let h: Vec<Complex64> = g.nodes().iter().map(|&r| Complex64::new((1.0 + r).recip(), (-r).exp())).collect();
    let lf = laplacian(&f, &grid).unwrap();
    let lh = laplacian(&h, &grid).unwrap();
    let a = g.inner(&lf, &h);
    let b = g.inner(&f, &lh);
    assert!((a - b).norm() < 1e-11 * a.norm().max(1.0), "{a} vs {b}");
    // Green's identity: −⟨Δf, f⟩ equals the Dirichlet form.
    let e = -g.inner(&lf, &f).re;
    assert!((e - g.dirichlet_form(&f)).abs() < 1e-11 * e.abs());
}

#[test]
fn integration_by_parts_is_second_order() {
    // −∫ Δf · f against ∫ |f′|² for a Gaussian, refined twice.
    let mut gaps = Vec::new();
    for n in [256, 512, 1024] {
        let g = RadialGrid::six_dim(n, 12.0).unwrap();
        let f: Vec<Complex64> = g.nodes().iter().map(|&r| Complex64::new((-0.5 * r * r).exp(), 0.0)).collect();
        let exact = PI.powi(3) * double_exponential::integrate(|r| r.powi(7) * (-r * r).exp(), 0.0, 12.0, 1e-14).integral;
        gaps.push((g.dirichlet_form(&f) - exact).abs());
    }
    for w in gaps.windows(2) {
        let order = (w[0] / w[1]).log2();
        assert!((1.8..2.3).contains(&order), "{gaps:?}");
    }
}

#[test]
fn functional_report_agrees_with_free_functions() {
    let g = RadialGrid::six_dim(1 << 12, 200.0).unwrap();
    let gs = GroundState::closed_form(2.0, &g).unwrap();
    let fp = gs.scaled(0.8);
    let rep = FunctionalReport::of(&fp);
    assert_eq!(rep.mass, mass(&fp));
    assert_eq!(rep.kinetic, kinetic(&fp));
}
