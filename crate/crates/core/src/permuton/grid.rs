//! Grid-CDF representation of permutons: the CDF tabulated at the nodes of
//! a uniform (g+1) x (g+1) grid.

use rand::Rng as _;

use crate::perm::Permutation;
use crate::{Error, Result};

/// Tabulated CDF `cdf(i, j) ~ mu([0, i/g] x [0, j/g])`.
#[derive(Debug, Clone, PartialEq)]
pub struct PermutonGrid {
    g: usize,
    cdf: Vec<f64>,
}

impl PermutonGrid {
    /// Tabulates `f(x, y)` at the grid nodes.
    pub fn from_node_fn(g: usize, f: impl Fn(f64, f64) -> f64) -> Self {
        let mut cdf = Vec::with_capacity((g + 1) * (g + 1));
        for i in 0..=g {
            for j in 0..=g {
                cdf.push(f(i as f64 / g as f64, j as f64 / g as f64));
            }
        }
        Self { g, cdf }
    }

    /// Builds the node CDF from per-cell masses (row-major `g x g`).
    pub fn from_cell_masses(g: usize, masses: &[f64]) -> Self {
        assert_eq!(masses.len(), g * g);
        let mut cdf = vec![0.0; (g + 1) * (g + 1)];
        for i in 1..=g {
            let mut row_acc = 0.0;
            for j in 1..=g {
                row_acc += masses[(i - 1) * g + (j - 1)];
                cdf[i * (g + 1) + j] = cdf[(i - 1) * (g + 1) + j] + row_acc;
            }
        }
        Self { g, cdf }
    }

    pub fn resolution(&self) -> usize {
        self.g
    }

    /// CDF at node `(i, j)`.
    pub fn at(&self, i: usize, j: usize) -> f64 {
        self.cdf[i * (self.g + 1) + j]
    }

    /// Bilinear interpolation between nodes.
    pub fn eval(&self, x: f64, y: f64) -> f64 {
        let g = self.g as f64;
        let sx = x.clamp(0.0, 1.0) * g;
        let sy = y.clamp(0.0, 1.0) * g;
        let i = (sx.floor() as usize).min(self.g - 1);
        let j = (sy.floor() as usize).min(self.g - 1);
        let (fx, fy) = (sx - i as f64, sy - j as f64);
        self.at(i, j) * (1.0 - fx) * (1.0 - fy)
            + self.at(i + 1, j) * fx * (1.0 - fy)
            + self.at(i, j + 1) * (1.0 - fx) * fy
            + self.at(i + 1, j + 1) * fx * fy
    }

    /// Mass of the rectangle between nodes `(i1, j1)` (exclusive) and
    /// `(i2, j2)` (inclusive).
    pub fn rectangle_mass(&self, i1: usize, j1: usize, i2: usize, j2: usize) -> f64 {
        self.at(i2, j2) - self.at(i1, j2) - self.at(i2, j1) + self.at(i1, j1)
    }

    /// Lower-right mass `mu([x, 1] x [0, y])` at the node closest to
    /// `(x, y)` from the grid.
    pub fn lower_right_mass(&self, x: f64, y: f64) -> f64 {
        let i = ((x * self.g as f64).round() as usize).min(self.g);
        let j = ((y * self.g as f64).round() as usize).min(self.g);
        self.at(self.g, j) - self.at(i, j)
    }

    /// The RLM curve at `x`: the largest grid `y` whose lower-right mass is
    /// at most `tol_mass`.
    pub fn rlm_curve_at(&self, x: f64, tol_mass: f64) -> f64 {
        let i = ((x * self.g as f64).round() as usize).min(self.g);
        let mut best = 0usize;
        for j in 0..=self.g {
            if self.at(self.g, j) - self.at(i, j) <= tol_mass {
                best = j;
            } else {
                break;
            }
        }
        best as f64 / self.g as f64
    }

    /// Sup distance between node CDFs; errors on resolution mismatch.
    pub fn sup_distance(&self, other: &PermutonGrid) -> Result<f64> {
        if self.g != other.g {
            return Err(Error::GridMismatch(format!(
                "resolutions {} vs {}",
                self.g, other.g
            )));
        }
        Ok(self
            .cdf
            .iter()
            .zip(&other.cdf)
            .fold(0.0, |acc, (a, b)| acc.max((a - b).abs())))
    }

    /// Checks the permuton-grid invariants within `tol`: monotone in each
    /// argument, uniform marginals, 2-increasing (no rectangle of mass
    /// below `-tol`).
    pub fn check_invariants(&self, tol: f64) -> Result<()> {
        let g = self.g;
        for i in 0..=g {
            let xi = i as f64 / g as f64;
            if (self.at(i, g) - xi).abs() > tol || (self.at(g, i) - xi).abs() > tol {
                return Err(Error::InvalidMeasure(format!(
                    "marginal off by more than {tol} at index {i}"
                )));
            }
        }
        for i in 0..g {
            for j in 0..g {
                if self.rectangle_mass(i, j, i + 1, j + 1) < -tol {
                    return Err(Error::InvalidMeasure(format!(
                        "negative cell mass at ({i}, {j})"
                    )));
                }
                if self.at(i + 1, j) < self.at(i, j) - tol || self.at(i, j + 1) < self.at(i, j) - tol
                {
                    return Err(Error::InvalidMeasure(format!(
                        "CDF not monotone at ({i}, {j})"
                    )));
                }
            }
        }
        Ok(())
    }
}

/// How the mass of each permutation cell is spread.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CellVariant {
    /// Uniform on the whole cell.
    Plain,
    /// Uniform on the cell diagonal (preserves 321-avoidance exactly).
    Diagonal,
    /// Uniform on the cell antidiagonal (preserves 231-avoidance exactly).
    Antidiagonal,
}

/// The permuton of a permutation: mass 1/n on each cell
/// `[(i-1)/n, i/n] x [(s_i-1)/n, s_i/n]`, spread per `variant`, tabulated
/// exactly at the grid nodes.
pub fn permuton_of_perm(p: &Permutation, variant: CellVariant, g: usize) -> PermutonGrid {
    let n = p.len();
    let nf = n as f64;
    let weight = 1.0 / nf;
    PermutonGrid::from_node_fn(g, |x, y| {
        let mut acc = 0.0;
        for i in 1..=n {
            let a = (i - 1) as f64;
            let b = (p.get(i) - 1) as f64;
            // cell-local coordinates in [0, 1]
            let u = (nf * x - a).clamp(0.0, 1.0);
            let v = (nf * y - b).clamp(0.0, 1.0);
            acc += match variant {
                CellVariant::Plain => u * v,
                CellVariant::Diagonal => u.min(v),
                CellVariant::Antidiagonal => (u - (1.0 - v)).max(0.0),
            };
        }
        acc * weight
    })
}

/// Samples points distributed according to a grid permuton: a cell is
/// drawn by its mass, then a uniform point inside it.
pub struct GridSampler {
    g: usize,
    cumulative: Vec<f64>,
}

impl GridSampler {
    pub fn new(grid: &PermutonGrid) -> Self {
        let g = grid.resolution();
        let masses: Vec<f64> = (0..g * g)
            .map(|idx| grid.rectangle_mass(idx / g, idx % g, idx / g + 1, idx % g + 1).max(0.0))
            .collect();
        let total: f64 = masses.iter().sum();
        let mut acc = 0.0;
        let cumulative = masses
            .iter()
            .map(|m| {
                acc += m / total;
                acc
            })
            .collect();
        Self { g, cumulative }
    }
}

impl super::PointSampler for GridSampler {
    fn sample_point(&self, rng: &mut crate::rng::Rng) -> (f64, f64) {
        let u: f64 = rng.random();
        let idx = self.cumulative.partition_point(|&c| c < u).min(self.cumulative.len() - 1);
        let (i, j) = (idx / self.g, idx % self.g);
        let x = (i as f64 + rng.random::<f64>()) / self.g as f64;
        let y = (j as f64 + rng.random::<f64>()) / self.g as f64;
        (x, y)
    }
}
