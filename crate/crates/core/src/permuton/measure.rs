//! Subuniform step measures on [0,1], dominated pairs, quantile functions,
//! nondecreasing couplings, and the coupling-sum map sending a pair to a
//! 321-avoiding permuton.

use crate::perm::Permutation;
use crate::permuton::grid::PermutonGrid;
use crate::{Error, Result};

/// A measure on [0,1] with piecewise-constant density on a uniform grid,
/// dominated by Lebesgue measure (`0 <= density <= 1`).
#[derive(Debug, Clone, PartialEq)]
pub struct StepMeasure {
    cells: Vec<f64>,
    /// CDF at the grid nodes (cells.len() + 1 values, starting at 0).
    nodes: Vec<f64>,
}

impl StepMeasure {
    pub fn new(cells: Vec<f64>) -> Result<Self> {
        if cells.is_empty() {
            return Err(Error::InvalidMeasure("empty grid".into()));
        }
        for (i, &c) in cells.iter().enumerate() {
            if !(-1e-12..=1.0 + 1e-9).contains(&c) {
                return Err(Error::InvalidMeasure(format!(
                    "density {c} at cell {i} outside [0, 1]"
                )));
            }
        }
        let g = cells.len() as f64;
        let mut nodes = Vec::with_capacity(cells.len() + 1);
        let mut acc = 0.0;
        nodes.push(0.0);
        for &c in &cells {
            acc += c / g;
            nodes.push(acc);
        }
        Ok(Self { cells, nodes })
    }

    pub fn zero(cells: usize) -> Self {
        Self::new(vec![0.0; cells]).expect("zero is subuniform")
    }

    pub fn uniform(cells: usize, density: f64) -> Self {
        Self::new(vec![density; cells]).expect("constant density in [0,1]")
    }

    /// Builds the measure whose cell masses match `cdf` exactly at the grid
    /// nodes.
    pub fn from_cdf(cells: usize, cdf: impl Fn(f64) -> f64) -> Self {
        let g = cells as f64;
        let densities = (0..cells)
            .map(|i| {
                let mass = cdf((i + 1) as f64 / g) - cdf(i as f64 / g);
                (mass * g).clamp(0.0, 1.0)
            })
            .collect();
        Self::new(densities).expect("clamped densities are subuniform")
    }

    pub fn cells(&self) -> &[f64] {
        &self.cells
    }

    pub fn grid(&self) -> usize {
        self.cells.len()
    }

    pub fn mass(&self) -> f64 {
        *self.nodes.last().unwrap()
    }

    /// CDF at arbitrary `x` (piecewise linear).
    pub fn cdf(&self, x: f64) -> f64 {
        let g = self.cells.len() as f64;
        let s = x.clamp(0.0, 1.0) * g;
        let i = (s.floor() as usize).min(self.cells.len() - 1);
        self.nodes[i] + self.cells[i] * (s - i as f64) / g
    }

    /// CDF at node `j` (0..=grid).
    pub fn cdf_node(&self, j: usize) -> f64 {
        self.nodes[j]
    }

    /// Generalized right-continuous inverse `sup{x : cdf(x) <= u}` for
    /// `0 < u < mass`; errors outside that range.
    pub fn quantile(&self, u: f64) -> Result<f64> {
        if u <= 0.0 || u >= self.mass() {
            return Err(Error::Domain(format!(
                "quantile argument {u} outside (0, {})",
                self.mass()
            )));
        }
        Ok(self.quantile_unchecked(u))
    }

    /// Quantile without the domain check: clamps `u` into `[0, mass]` and
    /// resolves flat stretches to their right end (the sup convention).
    pub fn quantile_unchecked(&self, u: f64) -> f64 {
        let u = u.clamp(0.0, self.mass());
        // last node with cdf <= u
        let mut lo = 0usize;
        let mut hi = self.nodes.len() - 1;
        while lo < hi {
            let mid = (lo + hi).div_ceil(2);
            if self.nodes[mid] <= u {
                lo = mid;
            } else {
                hi = mid - 1;
            }
        }
        let g = self.cells.len() as f64;
        if lo == self.cells.len() {
            return 1.0;
        }
        let density = self.cells[lo];
        if density <= 0.0 {
            // maximality of lo means the next node exceeds u, so this only
            // happens through floating roundoff; stay at the node
            return lo as f64 / g;
        }
        (lo as f64 / g + (u - self.nodes[lo]) / density).min(1.0)
    }

    /// The complementary density `1 - rho` (Lebesgue minus this measure).
    pub fn complement(&self) -> StepMeasure {
        StepMeasure::new(self.cells.iter().map(|&c| (1.0 - c).clamp(0.0, 1.0)).collect())
            .expect("complement of subuniform is subuniform")
    }

    /// Sup distance between CDFs on the shared grid.
    pub fn kolmogorov_distance(&self, other: &StepMeasure) -> Result<f64> {
        if self.grid() != other.grid() {
            return Err(Error::GridMismatch(format!(
                "{} vs {} cells",
                self.grid(),
                other.grid()
            )));
        }
        Ok(self
            .nodes
            .iter()
            .zip(&other.nodes)
            .fold(0.0, |acc, (a, b)| acc.max((a - b).abs())))
    }
}

/// A dominated pair: equal total mass and `cdf_1(x) <= cdf_2(x)`
/// everywhere. The parameter space of the 321 model.
#[derive(Debug, Clone, PartialEq)]
pub struct MeasurePairD {
    pub first: StepMeasure,
    pub second: StepMeasure,
}

impl MeasurePairD {
    pub fn new(first: StepMeasure, second: StepMeasure) -> Result<Self> {
        let pair = Self { first, second };
        pair.check()?;
        Ok(pair)
    }

    pub fn check(&self) -> Result<()> {
        if self.first.grid() != self.second.grid() {
            return Err(Error::GridMismatch("pair on different grids".into()));
        }
        if (self.first.mass() - self.second.mass()).abs() > 1e-9 {
            return Err(Error::InvalidMeasure(format!(
                "masses differ: {} vs {}",
                self.first.mass(),
                self.second.mass()
            )));
        }
        for j in 0..=self.first.grid() {
            if self.first.cdf_node(j) > self.second.cdf_node(j) + 1e-9 {
                return Err(Error::InvalidMeasure(format!(
                    "CDF domination fails at node {j}"
                )));
            }
        }
        Ok(())
    }

    /// Max over the two coordinates of the Kolmogorov distance.
    pub fn kolmogorov_distance(&self, other: &MeasurePairD) -> Result<f64> {
        let d1 = self.first.kolmogorov_distance(&other.first)?;
        let d2 = self.second.kolmogorov_distance(&other.second)?;
        Ok(d1.max(d2))
    }
}

/// The rescaled occupation measures of strict RL minima positions (first)
/// and values (second) of a 321-avoiding permutation: indicator densities
/// on the n-grid. Rejects non-avoiding input.
pub fn empirical_measure_pair(p: &Permutation) -> Result<MeasurePairD> {
    if !p.avoids(crate::perm::Pattern3::P321) {
        return Err(Error::NotAvoiding {
            pattern: crate::perm::Pattern3::P321,
        });
    }
    let n = p.len();
    let minima = p.strict_rl_minima();
    let mut rho1 = vec![0.0; n];
    let mut rho2 = vec![0.0; n];
    for (&a, &b) in minima.positions.iter().zip(&minima.values) {
        rho1[a as usize - 1] = 1.0;
        rho2[b as usize - 1] = 1.0;
    }
    MeasurePairD::new(StepMeasure::new(rho1)?, StepMeasure::new(rho2)?)
}

/// The logistic minimizer pair of the 321 action discretized to `cells`
/// cells (the flat pair for `beta <= 0`); same formulas as
/// `theory::minimizer_321`.
pub fn limit_density_pair_321(beta: f64, cells: usize) -> MeasurePairD {
    crate::theory::minimizer_321(beta, cells)
}

/// A discrete approximation of a coupling on the unit square: weighted
/// points, nondecreasing along the support when produced by
/// [`monotone_coupling`].
#[derive(Debug, Clone)]
pub struct Coupling {
    pub points: Vec<(f64, f64, f64)>,
}

impl Coupling {
    /// Accumulates the point masses into a grid-CDF permuton (used by
    /// [`psi`], where two couplings sum to a permuton).
    pub fn deposit(&self, masses: &mut [f64], g: usize) {
        for &(x, y, w) in &self.points {
            let i = ((x * g as f64) as usize).min(g - 1);
            let j = ((y * g as f64) as usize).min(g - 1);
            masses[i * g + j] += w;
        }
    }

    pub fn total_mass(&self) -> f64 {
        self.points.iter().map(|p| p.2).sum()
    }

    /// Coordinate projections binned to a `g`-cell step measure (densities
    /// clamped into [0,1]; exact up to deposition resolution).
    pub fn projections(&self, g: usize) -> (StepMeasure, StepMeasure) {
        let mut m1 = vec![0.0; g];
        let mut m2 = vec![0.0; g];
        for &(x, y, w) in &self.points {
            m1[((x * g as f64) as usize).min(g - 1)] += w * g as f64;
            m2[((y * g as f64) as usize).min(g - 1)] += w * g as f64;
        }
        (
            StepMeasure::new(m1.iter().map(|&d| d.min(1.0)).collect()).expect("binned density"),
            StepMeasure::new(m2.iter().map(|&d| d.min(1.0)).collect()).expect("binned density"),
        )
    }
}

/// The unique nondecreasing coupling of two equal-mass measures,
/// discretized as `points` weighted support points (the push-forward of
/// Lebesgue on [0, M] through the two quantile functions, evaluated at
/// slice midpoints). Errors on a mass mismatch.
pub fn monotone_coupling(m1: &StepMeasure, m2: &StepMeasure, points: usize) -> Result<Coupling> {
    let mass = m1.mass();
    if (mass - m2.mass()).abs() > 1e-9 {
        return Err(Error::InvalidMeasure(format!(
            "coupled measures must have equal mass ({} vs {})",
            mass,
            m2.mass()
        )));
    }
    let mut out = Vec::with_capacity(points);
    if mass <= 0.0 {
        return Ok(Coupling { points: out });
    }
    let slice = mass / points as f64;
    for j in 0..points {
        let u = (j as f64 + 0.5) * slice;
        out.push((m1.quantile_unchecked(u), m2.quantile_unchecked(u), slice));
    }
    Ok(Coupling { points: out })
}

/// The map `(pi1, pi2) -> pi1 UP pi2 + (Leb - pi1) UP (Leb - pi2)`: the sum
/// of the two nondecreasing couplings, a 321-avoiding permuton. Tabulated
/// as a grid CDF at resolution `g`, depositing `points` mass points per
/// coupling.
pub fn psi_with(pair: &MeasurePairD, g: usize, points: usize) -> Result<PermutonGrid> {
    pair.check()?;
    let mut masses = vec![0.0; g * g];
    monotone_coupling(&pair.first, &pair.second, points)?.deposit(&mut masses, g);
    monotone_coupling(
        &pair.first.complement(),
        &pair.second.complement(),
        points,
    )?
    .deposit(&mut masses, g);
    Ok(PermutonGrid::from_cell_masses(g, &masses))
}

/// [`psi_with`] at the default resolution.
pub fn psi(pair: &MeasurePairD) -> Result<PermutonGrid> {
    let g = super::DEFAULT_GRID;
    psi_with(pair, g, 256 * g)
}
