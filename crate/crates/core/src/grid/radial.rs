use std::f64::consts::PI;

use num_complex::Complex64;

use crate::{Error, Result};

/// Surface area |S^{d-1}| = 2 π^{d/2} / Γ(d/2) of the unit sphere in ℝ^d.
pub fn sphere_area(d: usize) -> f64 {
    2.0 * PI.powf(d as f64 / 2.0) / gamma_half(d)
}

/// Γ(d/2) for a positive integer d.
fn gamma_half(d: usize) -> f64 {
    if d.is_multiple_of(2) {
        (1..d / 2).map(|k| k as f64).product()
    } else {
        // Γ(k + 1/2) = (2k-1)!! / 2^k · √π
        let k = d / 2;
        let double_fact: f64 = (0..k).map(|i| (2 * i + 1) as f64).product();
        double_fact / 2f64.powi(k as i32) * PI.sqrt()
    }
}

/// Volume of the ball of radius `r` in ℝ^d.
pub fn ball_volume(d: usize, r: f64) -> f64 {
    sphere_area(d) * r.powi(d as i32) / d as f64
}

/// Cell-centred grid for radial functions on the ball of radius `r_max` in ℝ^d.
///
/// Nodes sit at `r_j = (j + 1/2) h` so the coordinate singularity at the origin
/// is never sampled. Quadrature weights are `|S^{d-1}| r_j^{d-1} h`.
///
/// The Laplacian is assembled in flux form on the same weights, which makes it
/// symmetric in the quadrature inner product and exact on `r²`. The origin is a
/// no-flux face (even reflection). At `r_max` the field is continued by its
/// exterior harmonic extension `f(r) ∝ r^{2-d}`, a Robin closure that keeps the
/// slowly decaying tails of critical profiles free of boundary layers.
#[derive(Debug, Clone, PartialEq)]
pub struct RadialGrid {
    d: usize,
    n: usize,
    r_max: f64,
    h: f64,
    nodes: Vec<f64>,
    weights: Vec<f64>,
    faces: Vec<f64>,
    outer: f64,
}

impl RadialGrid {
    pub const MIN_NODES: usize = 16;

    pub fn new(d: usize, n: usize, r_max: f64) -> Result<Self> {
        if d == 0 {
            return Err(Error::InvalidGrid("dimension must be positive".into()));
        }
        if n < Self::MIN_NODES {
            return Err(Error::InvalidGrid(format!(
                "radial grid needs at least {} nodes, got {n}",
                Self::MIN_NODES
            )));
        }
        if !(r_max.is_finite() && r_max > 0.0) {
            return Err(Error::InvalidGrid(format!("r_max must be positive, got {r_max}")));
        }
        let h = r_max / n as f64;
        let area = sphere_area(d);
        let nodes: Vec<f64> = (0..n).map(|j| (j as f64 + 0.5) * h).collect();
        let weights: Vec<f64> = nodes.iter().map(|r| area * r.powi(d as i32 - 1) * h).collect();

        // Face coupling chosen so that the flux-form operator maps r² to 2d
        // exactly: A_{j+1/2} (r_{j+1}² - r_j²) must equal 2d Σ_{i≤j} w_i.
        let mut faces = Vec::with_capacity(n - 1);
        let mut volume = 0.0;
        for j in 0..n - 1 {
            volume += weights[j];
            let r_face = (j + 1) as f64 * h;
            faces.push(d as f64 * volume / (h * r_face));
        }
        let decay = d.saturating_sub(2) as f64;
        let outer = area * decay * nodes[n - 1].powf(decay);

        Ok(Self { d, n, r_max, h, nodes, weights, faces, outer })
    }

    /// The production grid: d = 6.
    pub fn six_dim(n: usize, r_max: f64) -> Result<Self> {
        Self::new(6, n, r_max)
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn r_max(&self) -> f64 {
        self.r_max
    }

    pub fn h(&self) -> f64 {
        self.h
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Face couplings `A_{j+1/2}`, `j = 0..n-1`.
    pub fn face_couplings(&self) -> &[f64] {
        &self.faces
    }

    /// Diagonal coupling of the far-field closure on the last cell.
    pub fn outer_coupling(&self) -> f64 {
        self.outer
    }

    pub fn integrate(&self, density: &[f64]) -> f64 {
        density.iter().zip(&self.weights).map(|(f, w)| f * w).sum()
    }

    /// Exponent of the far-field decay `r^{2-d}` used by the outer closure.
    fn decay_exponent(&self) -> f64 {
        self.d.saturating_sub(2) as f64
    }

    /// Tridiagonal rows `(lower, diag, upper)` of the discrete Laplacian.
    /// `lower[0]` and `upper[n-1]` are zero.
    pub fn laplacian_bands(&self) -> (Vec<f64>, Vec<f64>, Vec<f64>) {
        let n = self.n;
        let mut lower = vec![0.0; n];
        let mut diag = vec![0.0; n];
        let mut upper = vec![0.0; n];
        for (j, &a) in self.faces.iter().enumerate() {
            upper[j] = a / self.weights[j];
            lower[j + 1] = a / self.weights[j + 1];
            diag[j] -= a / self.weights[j];
            diag[j + 1] -= a / self.weights[j + 1];
        }
        diag[n - 1] -= self.outer / self.weights[n - 1];
        (lower, diag, upper)
    }

    pub fn laplacian(&self, f: &[Complex64]) -> Vec<Complex64> {
        let mut out = vec![Complex64::new(0.0, 0.0); self.n];
        for (j, &a) in self.faces.iter().enumerate() {
            let flux = (f[j + 1] - f[j]) * a;
            out[j] += flux;
            out[j + 1] -= flux;
        }
        out[self.n - 1] -= f[self.n - 1] * self.outer;
        for (o, w) in out.iter_mut().zip(&self.weights) {
            *o /= *w;
        }
        out
    }

    /// Discrete Dirichlet form `-<Δf, f>`, the energy the Laplacian conserves.
    pub fn dirichlet_form(&self, f: &[Complex64]) -> f64 {
        let faces: f64 = self
            .faces
            .iter()
            .enumerate()
            .map(|(j, a)| a * (f[j + 1] - f[j]).norm_sqr())
            .sum();
        faces + self.outer * f[self.n - 1].norm_sqr()
    }

    /// Radial derivative by fourth-order centred differences.
    ///
    /// Ghost values use even reflection through the origin and the `r^{2-d}`
    /// far-field continuation past `r_max`.
    pub fn derivative(&self, f: &[Complex64]) -> Vec<Complex64> {
        let n = self.n;
        let last = f[n - 1];
        let r_last = self.nodes[n - 1];
        let p = self.decay_exponent();
        let ghost = |k: usize| -> Complex64 {
            let r = (k as f64 + 0.5) * self.h;
            last * (r_last / r).powf(p)
        };
        let at = |i: isize| -> Complex64 {
            if i < 0 {
                f[(-i - 1) as usize]
            } else if (i as usize) < n {
                f[i as usize]
            } else {
                ghost(i as usize)
            }
        };
        let scale = 1.0 / (12.0 * self.h);
        (0..n as isize)
            .map(|j| (at(j - 2) - at(j + 2) + (at(j + 1) - at(j - 1)) * 8.0) * scale)
            .collect()
    }

    /// Discrete L² inner product `Σ w_j f_j conj(g_j)`.
    pub fn inner(&self, f: &[Complex64], g: &[Complex64]) -> Complex64 {
        f.iter()
            .zip(g)
            .zip(&self.weights)
            .map(|((a, b), w)| a * b.conj() * *w)
            .sum()
    }

    /// Same grid with `r_max` divided by `lambda`.
    pub fn rescaled(&self, lambda: f64) -> Result<Self> {
        Self::new(self.d, self.n, self.r_max / lambda)
    }

    /// Evaluate a radial profile at the nodes.
    pub fn sample(&self, profile: impl Fn(f64) -> f64) -> Vec<f64> {
        self.nodes.iter().map(|&r| profile(r)).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(x: f64) -> Complex64 {
        Complex64::new(x, 0.0)
    }

    #[test]
    fn sphere_areas() {
        assert!((sphere_area(1) - 2.0).abs() < 1e-15);
        assert!((sphere_area(2) - 2.0 * PI).abs() < 1e-14);
        assert!((sphere_area(3) - 4.0 * PI).abs() < 1e-14);
        assert!((sphere_area(6) - PI.powi(3)).abs() < 1e-12);
        assert!((ball_volume(6, 2.0) - PI.powi(3) * 64.0 / 6.0).abs() < 1e-10);
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(RadialGrid::new(6, 8, 1.0).is_err());
        assert!(RadialGrid::new(6, 64, 0.0).is_err());
        assert!(RadialGrid::new(6, 64, f64::NAN).is_err());
        assert!(RadialGrid::new(0, 64, 1.0).is_err());
    }

    #[test]
    fn nodes_and_weights() {
        let g = RadialGrid::six_dim(64, 8.0).unwrap();
        assert!(g.nodes().windows(2).all(|w| w[1] > w[0]));
        assert!(g.nodes()[0] > 0.0);
        for (r, w) in g.nodes().iter().zip(g.weights()) {
            let expected = PI.powi(3) * r.powi(5) * g.h();
            assert!((w - expected).abs() <= 1e-14 * expected);
        }
    }

    #[test]
    fn laplacian_of_constant_and_quadratic() {
        let g = RadialGrid::six_dim(256, 10.0).unwrap();
        let one = vec![c(1.0); g.n()];
        let lap = g.laplacian(&one);
        assert!(lap[..g.n() - 1].iter().all(|z| z.norm() < 1e-12));

        let sq: Vec<_> = g.nodes().iter().map(|r| c(r * r)).collect();
        let lap = g.laplacian(&sq);
        for z in &lap[..g.n() - 1] {
            assert!((z.re - 12.0).abs() < 1e-9, "{z}");
        }
    }

    #[test]
    fn laplacian_is_symmetric() {
        let g = RadialGrid::six_dim(200, 5.0).unwrap();
        let f: Vec<_> = g.nodes().iter().map(|r| c((1.3 * r).sin() * (5.0 - r))).collect();
        let h: Vec<_> = g.nodes().iter().map(|r| c((-r * r).exp() + 0.1 * r * (5.0 - r))).collect();
        let lhs = g.inner(&g.laplacian(&f), &h);
        let rhs = g.inner(&f, &g.laplacian(&h));
        assert!((lhs - rhs).norm() <= 1e-10 * lhs.norm());
    }

    #[test]
    fn dirichlet_form_matches_inner_product() {
        let g = RadialGrid::six_dim(300, 12.0).unwrap();
        let f: Vec<_> = g
            .nodes()
            .iter()
            .map(|r| Complex64::new((-r * r / 4.0).exp(), 0.3 * (-r * r / 2.0).exp()))
            .collect();
        let form = g.dirichlet_form(&f);
        let ip = -g.inner(&g.laplacian(&f), &f).re;
        assert!((form - ip).abs() <= 1e-11 * form);
        assert!(form > 0.0);
    }

    #[test]
    fn derivative_of_linear_profile() {
        let g = RadialGrid::six_dim(128, 4.0).unwrap();
        let f: Vec<_> = g.nodes().iter().map(|&r| c(r)).collect();
        let df = g.derivative(&f);
        for z in &df[2..g.n() - 2] {
            assert!((z.re - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn far_field_closure_is_exact_for_harmonic_tail() {
        // r^{-4} is harmonic away from the origin in d = 6; the closure
        // continues it exactly, so the last cell sees no boundary layer.
        let g = RadialGrid::six_dim(400, 40.0).unwrap();
        let f: Vec<_> = g.nodes().iter().map(|r| c(r.powi(-4))).collect();
        let lap = g.laplacian(&f);
        let scale = f[g.n() - 1].re / (g.h() * g.h());
        assert!(lap[g.n() - 1].norm() < 1e-3 * scale);
    }
}
