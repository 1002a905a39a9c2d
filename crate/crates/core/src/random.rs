//! Seeded smooth trial fields: sums of a few Gaussians with random centres,
//! widths, amplitudes and phases.

use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::grid::{FieldPair, Grid};
use crate::Result;

/// One Gaussian bump `a · exp(-|x - c|² / 2w²) · e^{i k·x}`.
#[derive(Debug, Clone, PartialEq)]
pub struct Bump {
    pub amplitude: Complex64,
    pub center: [f64; 3],
    pub width: f64,
    pub wave: [f64; 3],
}

impl Bump {
    pub fn eval(&self, x: [f64; 3]) -> Complex64 {
        let mut r2 = 0.0;
        let mut phase = 0.0;
        for a in 0..3 {
            r2 += (x[a] - self.center[a]).powi(2);
            phase += self.wave[a] * x[a];
        }
        self.amplitude * (-0.5 * r2 / (self.width * self.width)).exp() * Complex64::from_polar(1.0, phase)
    }
}

/// Options for [`random_field`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrialOptions {
    pub min_bumps: usize,
    pub max_bumps: usize,
    /// Random phases on amplitudes and lattice modulations (tensor grids).
    pub complex: bool,
}

impl Default for TrialOptions {
    fn default() -> Self {
        Self { min_bumps: 3, max_bumps: 6, complex: true }
    }
}

/// Draw the bumps of one trial field. Radial grids get centred bumps; tensor
/// grids get bumps well inside the box and, if complex, small lattice
/// modulations so that the field carries momentum.
pub fn random_bumps(grid: &Grid, opts: TrialOptions, rng: &mut impl Rng) -> Vec<Bump> {
    let count = rng.gen_range(opts.min_bumps..=opts.max_bumps.max(opts.min_bumps));
    let d = grid.d();
    (0..count)
        .map(|_| {
            let modulus = rng.gen_range(0.2..1.5);
            let phase = if opts.complex { rng.gen_range(0.0..2.0 * PI) } else { 0.0 };
            let sign = if opts.complex || rng.gen_bool(0.8) { 1.0 } else { -1.0 };
            let amplitude = Complex64::from_polar(sign * modulus, phase);
            let mut center = [0.0; 3];
            let mut wave = [0.0; 3];
            let width = match grid {
                Grid::Radial(g) => g.r_max() * rng.gen_range(0.02..0.12),
                Grid::Tensor(g) => {
                    let l = g.l();
                    for a in 0..d {
                        center[a] = rng.gen_range(-l / 10.0..l / 10.0);
                        if opts.complex {
                            wave[a] = rng.gen_range(-2i32..=2) as f64 * g.frequency_step();
                        }
                    }
                    l * rng.gen_range(0.03..0.04)
                }
            };
            Bump { amplitude, center, width, wave }
        })
        .collect()
}

/// Sample a sum of bumps at every grid point. On radial grids only the radius
/// is used.
pub fn sample_bumps(grid: &Grid, bumps: &[Bump]) -> Vec<Complex64> {
    let eval = |x: [f64; 3]| bumps.iter().map(|b| b.eval(x)).sum();
    match grid {
        Grid::Radial(g) => g.nodes().iter().map(|&r| eval([r, 0.0, 0.0])).collect(),
        Grid::Tensor(g) => g.positions().map(eval).collect(),
    }
}

pub fn random_field(grid: &Grid, opts: TrialOptions, rng: &mut impl Rng) -> Vec<Complex64> {
    sample_bumps(grid, &random_bumps(grid, opts, rng))
}

/// A trial pair with independent random components.
pub fn random_pair(grid: Arc<Grid>, kappa: f64, opts: TrialOptions, rng: &mut impl Rng) -> Result<FieldPair> {
    let u = random_field(&grid, opts, rng);
    let v = random_field(&grid, opts, rng);
    FieldPair::new(grid, kappa, u, v)
}

/// The generator used by every seeded suite in the crate.
pub fn seeded(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}
