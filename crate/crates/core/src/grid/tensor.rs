use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use crate::{Error, Result};

/// Periodic box `[-L/2, L/2)^d`, `m` points per axis, `d ≤ 3`.
///
/// Samples are stored row-major with the last axis contiguous. Derivatives are
/// spectral; the Nyquist mode is carried as the negative frequency `-π m / L`.
#[derive(Clone)]
pub struct TensorGrid {
    d: usize,
    m: usize,
    l: f64,
    wavenumbers: Vec<f64>,
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
}

impl fmt::Debug for TensorGrid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("TensorGrid")
            .field("d", &self.d)
            .field("m", &self.m)
            .field("l", &self.l)
            .finish()
    }
}

impl PartialEq for TensorGrid {
    fn eq(&self, other: &Self) -> bool {
        self.d == other.d && self.m == other.m && self.l == other.l
    }
}

impl TensorGrid {
    pub fn new(d: usize, m: usize, l: f64) -> Result<Self> {
        if !(1..=3).contains(&d) {
            return Err(Error::InvalidGrid(format!("tensor grids support 1 ≤ d ≤ 3, got {d}")));
        }
        if m < 2 || !m.is_power_of_two() {
            return Err(Error::InvalidGrid(format!("points per axis must be a power of two, got {m}")));
        }
        if !(l.is_finite() && l > 0.0) {
            return Err(Error::InvalidGrid(format!("box length must be positive, got {l}")));
        }
        let mut planner = FftPlanner::new();
        let forward = planner.plan_fft_forward(m);
        let inverse = planner.plan_fft_inverse(m);
        let dk = 2.0 * PI / l;
        let wavenumbers = (0..m)
            .map(|k| {
                let signed = if k < m / 2 { k as isize } else { k as isize - m as isize };
                signed as f64 * dk
            })
            .collect();
        Ok(Self { d, m, l, wavenumbers, forward, inverse })
    }

    pub fn d(&self) -> usize {
        self.d
    }

    /// Points per axis.
    pub fn m(&self) -> usize {
        self.m
    }

    /// Box length per axis.
    pub fn l(&self) -> f64 {
        self.l
    }

    pub fn len(&self) -> usize {
        self.m.pow(self.d as u32)
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn spacing(&self) -> f64 {
        self.l / self.m as f64
    }

    pub fn cell_volume(&self) -> f64 {
        self.spacing().powi(self.d as i32)
    }

    /// Lattice spacing `2π / L` of the frequency lattice.
    pub fn frequency_step(&self) -> f64 {
        2.0 * PI / self.l
    }

    /// Largest |ξ| present on the discrete lattice.
    pub fn max_frequency(&self) -> f64 {
        (self.d as f64).sqrt() * PI * self.m as f64 / self.l
    }

    /// One-dimensional wavenumbers in FFT order.
    pub fn wavenumbers(&self) -> &[f64] {
        &self.wavenumbers
    }

    pub fn coordinate(&self, i: usize) -> f64 {
        -0.5 * self.l + i as f64 * self.spacing()
    }

    /// Multi-index of a flat sample index (unused axes are zero).
    pub fn index(&self, flat: usize) -> [usize; 3] {
        let mut idx = [0; 3];
        let mut rest = flat;
        for axis in (0..self.d).rev() {
            idx[axis] = rest % self.m;
            rest /= self.m;
        }
        idx
    }

    /// Physical position of a flat sample index (unused axes are zero).
    pub fn position(&self, flat: usize) -> [f64; 3] {
        let idx = self.index(flat);
        let mut x = [0.0; 3];
        for axis in 0..self.d {
            x[axis] = self.coordinate(idx[axis]);
        }
        x
    }

    /// Frequency vector of a flat spectral index.
    pub fn frequency(&self, flat: usize) -> [f64; 3] {
        let idx = self.index(flat);
        let mut k = [0.0; 3];
        for axis in 0..self.d {
            k[axis] = self.wavenumbers[idx[axis]];
        }
        k
    }

    pub fn frequency_sq(&self, flat: usize) -> f64 {
        self.frequency(flat).iter().map(|k| k * k).sum()
    }

    pub fn positions(&self) -> impl Iterator<Item = [f64; 3]> + '_ {
        (0..self.len()).map(move |i| self.position(i))
    }

    pub fn integrate(&self, density: &[f64]) -> f64 {
        density.iter().sum::<f64>() * self.cell_volume()
    }

    fn transform(&self, data: &mut [Complex64], fft: &Arc<dyn Fft<f64>>) {
        let m = self.m;
        let len = self.len();
        let mut scratch = vec![Complex64::new(0.0, 0.0); fft.get_inplace_scratch_len()];
        let mut line = vec![Complex64::new(0.0, 0.0); m];
        for axis in 0..self.d {
            let stride = m.pow((self.d - 1 - axis) as u32);
            if stride == 1 {
                for chunk in data.chunks_exact_mut(m) {
                    fft.process_with_scratch(chunk, &mut scratch);
                }
                continue;
            }
            let block = stride * m;
            for start in (0..len).step_by(block) {
                for offset in 0..stride {
                    let base = start + offset;
                    for (i, z) in line.iter_mut().enumerate() {
                        *z = data[base + i * stride];
                    }
                    fft.process_with_scratch(&mut line, &mut scratch);
                    for (i, z) in line.iter().enumerate() {
                        data[base + i * stride] = *z;
                    }
                }
            }
        }
    }

    /// Unnormalized forward DFT along every axis.
    pub fn fft(&self, data: &[Complex64]) -> Vec<Complex64> {
        let mut out = data.to_vec();
        self.transform(&mut out, &self.forward);
        out
    }

    /// Inverse DFT normalized so that `ifft(fft(f)) = f`.
    pub fn ifft(&self, spectrum: &[Complex64]) -> Vec<Complex64> {
        let mut out = spectrum.to_vec();
        self.transform(&mut out, &self.inverse);
        let norm = 1.0 / self.len() as f64;
        for z in &mut out {
            *z *= norm;
        }
        out
    }

    /// Apply a Fourier multiplier `m(ξ)`.
    pub fn multiplier(&self, f: &[Complex64], symbol: impl Fn([f64; 3]) -> Complex64) -> Vec<Complex64> {
        let mut spec = self.fft(f);
        for (i, z) in spec.iter_mut().enumerate() {
            *z *= symbol(self.frequency(i));
        }
        self.ifft(&spec)
    }

    pub fn laplacian(&self, f: &[Complex64]) -> Vec<Complex64> {
        self.multiplier(f, |k| Complex64::new(-(k[0] * k[0] + k[1] * k[1] + k[2] * k[2]), 0.0))
    }

    /// Spectral gradient, one component per axis.
    pub fn gradient(&self, f: &[Complex64]) -> Vec<Vec<Complex64>> {
        let spec = self.fft(f);
        (0..self.d)
            .map(|axis| {
                let mut s = spec.clone();
                for (i, z) in s.iter_mut().enumerate() {
                    *z *= Complex64::new(0.0, self.frequency(i)[axis]);
                }
                self.ifft(&s)
            })
            .collect()
    }

    /// Whether `xi` lies on the frequency lattice `(2π/L) ℤ^d`.
    pub fn is_lattice(&self, xi: &[f64]) -> bool {
        xi.len() == self.d
            && xi.iter().all(|&k| {
                let q = k / self.frequency_step();
                (q - q.round()).abs() < 1e-9
            })
    }

    /// Same grid with the box length divided by `lambda`.
    pub fn rescaled(&self, lambda: f64) -> Result<Self> {
        Self::new(self.d, self.m, self.l / lambda)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_parameters() {
        assert!(TensorGrid::new(4, 16, 1.0).is_err());
        assert!(TensorGrid::new(2, 12, 1.0).is_err());
        assert!(TensorGrid::new(2, 16, -1.0).is_err());
    }

    #[test]
    fn fft_round_trip() {
        let g = TensorGrid::new(3, 8, 3.0).unwrap();
        let f: Vec<_> = (0..g.len())
            .map(|i| Complex64::new((i as f64 * 0.37).sin(), (i as f64 * 0.11).cos()))
            .collect();
        let back = g.ifft(&g.fft(&f));
        for (a, b) in f.iter().zip(&back) {
            assert!((a - b).norm() < 1e-13);
        }
    }

    #[test]
    fn plane_wave_laplacian_is_exact() {
        let g = TensorGrid::new(2, 32, 2.0 * PI).unwrap();
        let xi = [3.0, -5.0];
        let f: Vec<_> = g
            .positions()
            .map(|x| Complex64::from_polar(1.0, xi[0] * x[0] + xi[1] * x[1]))
            .collect();
        let lap = g.laplacian(&f);
        let k2 = xi[0] * xi[0] + xi[1] * xi[1];
        for (a, b) in lap.iter().zip(&f) {
            assert!((a + b * k2).norm() < 1e-11 * k2);
        }
    }

    #[test]
    fn lattice_is_closed_under_negation() {
        let g = TensorGrid::new(2, 16, 5.0).unwrap();
        let dk = g.frequency_step();
        assert!(g.is_lattice(&[3.0 * dk, -2.0 * dk]));
        assert!(g.is_lattice(&[-3.0 * dk, 2.0 * dk]));
        assert!(!g.is_lattice(&[0.5 * dk, 0.0]));
        assert!(!g.is_lattice(&[dk]));
    }

    #[test]
    fn index_round_trip() {
        let g = TensorGrid::new(3, 4, 1.0).unwrap();
        let idx = g.index(1 * 16 + 2 * 4 + 3);
        assert_eq!(idx, [1, 2, 3]);
        assert_eq!(g.position(0), [-0.5, -0.5, -0.5]);
    }
}
