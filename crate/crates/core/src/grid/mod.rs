//! Grids, field storage and the discrete operators everything else is built on.

mod field;
mod radial;
mod tensor;

use num_complex::Complex64;

pub use field::FieldPair;
pub use radial::{ball_volume, sphere_area, RadialGrid};
pub use tensor::TensorGrid;

use crate::{Error, Result};

/// The two discretizations: radial (production, d = 6) and periodic tensor
/// (small d, exact spectral calculus).
#[derive(Debug, Clone, PartialEq)]
pub enum Grid {
    Radial(RadialGrid),
    Tensor(TensorGrid),
}

impl From<RadialGrid> for Grid {
    fn from(g: RadialGrid) -> Self {
        Grid::Radial(g)
    }
}

impl From<TensorGrid> for Grid {
    fn from(g: TensorGrid) -> Self {
        Grid::Tensor(g)
    }
}

impl Grid {
    /// Number of stored samples.
    pub fn len(&self) -> usize {
        match self {
            Grid::Radial(g) => g.n(),
            Grid::Tensor(g) => g.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn d(&self) -> usize {
        match self {
            Grid::Radial(g) => g.d(),
            Grid::Tensor(g) => g.d(),
        }
    }

    pub fn is_radial(&self) -> bool {
        matches!(self, Grid::Radial(_))
    }

    pub fn as_radial(&self) -> Option<&RadialGrid> {
        match self {
            Grid::Radial(g) => Some(g),
            Grid::Tensor(_) => None,
        }
    }

    pub fn as_tensor(&self) -> Option<&TensorGrid> {
        match self {
            Grid::Tensor(g) => Some(g),
            Grid::Radial(_) => None,
        }
    }

    /// |x| at every sample.
    pub fn radii(&self) -> Vec<f64> {
        match self {
            Grid::Radial(g) => g.nodes().to_vec(),
            Grid::Tensor(g) => g
                .positions()
                .map(|x| (x[0] * x[0] + x[1] * x[1] + x[2] * x[2]).sqrt())
                .collect(),
        }
    }

    /// Quadrature weight of every sample.
    pub fn weights(&self) -> Vec<f64> {
        match self {
            Grid::Radial(g) => g.weights().to_vec(),
            Grid::Tensor(g) => vec![g.cell_volume(); g.len()],
        }
    }

    pub fn check_len(&self, found: usize) -> Result<()> {
        let expected = self.len();
        if found == expected {
            Ok(())
        } else {
            Err(Error::SizeMismatch { expected, found })
        }
    }

    /// Same grid with lengths divided by `lambda` and the sample count kept.
    pub fn rescaled(&self, lambda: f64) -> Result<Grid> {
        if !(lambda.is_finite() && lambda > 0.0) {
            return Err(Error::InvalidParameter(format!("scale must be positive, got {lambda}")));
        }
        Ok(match self {
            Grid::Radial(g) => Grid::Radial(g.rescaled(lambda)?),
            Grid::Tensor(g) => Grid::Tensor(g.rescaled(lambda)?),
        })
    }
}

/// Gradient of a field: the radial derivative `∂_r f` on radial grids, one
/// spectral component per axis on tensor grids.
#[derive(Debug, Clone)]
pub enum Gradient {
    Radial(Vec<Complex64>),
    Tensor(Vec<Vec<Complex64>>),
}

impl Gradient {
    /// Pointwise |∇f|².
    pub fn sq_density(&self) -> Vec<f64> {
        match self {
            Gradient::Radial(df) => df.iter().map(|z| z.norm_sqr()).collect(),
            Gradient::Tensor(comps) => {
                let mut out = vec![0.0; comps[0].len()];
                for comp in comps {
                    for (o, z) in out.iter_mut().zip(comp) {
                        *o += z.norm_sqr();
                    }
                }
                out
            }
        }
    }
}

pub fn laplacian(field: &[Complex64], grid: &Grid) -> Result<Vec<Complex64>> {
    grid.check_len(field.len())?;
    Ok(match grid {
        Grid::Radial(g) => g.laplacian(field),
        Grid::Tensor(g) => g.laplacian(field),
    })
}

pub fn gradient(field: &[Complex64], grid: &Grid) -> Result<Gradient> {
    grid.check_len(field.len())?;
    Ok(match grid {
        Grid::Radial(g) => Gradient::Radial(g.derivative(field)),
        Grid::Tensor(g) => Gradient::Tensor(g.gradient(field)),
    })
}

pub fn gradient_sq_density(field: &[Complex64], grid: &Grid) -> Result<Vec<f64>> {
    Ok(gradient(field, grid)?.sq_density())
}

pub fn integrate(density: &[f64], grid: &Grid) -> Result<f64> {
    grid.check_len(density.len())?;
    Ok(match grid {
        Grid::Radial(g) => g.integrate(density),
        Grid::Tensor(g) => g.integrate(density),
    })
}

/// Sharp Littlewood–Paley projector: keeps the modes with `N/2 < |ξ| ≤ N`.
pub fn lp_project(field: &[Complex64], grid: &Grid, scale: f64) -> Result<Vec<Complex64>> {
    let g = grid.as_tensor().ok_or(Error::UnsupportedGrid("tensor"))?;
    grid.check_len(field.len())?;
    if !(scale.is_finite() && scale > 0.0) || scale < g.frequency_step() || scale / 2.0 >= g.max_frequency() {
        return Err(Error::ScaleOutOfBand(scale));
    }
    let lo = 0.5 * scale;
    Ok(g.multiplier(field, |k| {
        let r = (k[0] * k[0] + k[1] * k[1] + k[2] * k[2]).sqrt();
        if r > lo && r <= scale {
            Complex64::new(1.0, 0.0)
        } else {
            Complex64::new(0.0, 0.0)
        }
    }))
}

/// L² norm of a complex field on the grid.
pub fn l2_norm(field: &[Complex64], grid: &Grid) -> Result<f64> {
    let density: Vec<f64> = field.iter().map(|z| z.norm_sqr()).collect();
    Ok(integrate(&density, grid)?.sqrt())
}
