//! Excursions: nonnegative 1-Lipschitz functions on [0,1] vanishing at both
//! ends, sampled on a uniform grid. The empirical excursion of a
//! permutation is its Dyck path scaled by 1/(2n).

use crate::dyck::DyckPath;
use crate::perm::{CanonicalPattern, Permutation};
use crate::{Error, Result};

/// Piecewise-linear excursion on a uniform grid of `m + 1` points.
#[derive(Debug, Clone, PartialEq)]
pub struct Excursion {
    values: Vec<f64>,
}

impl Excursion {
    /// Builds from grid values, validating the excursion constraints.
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.len() < 2 {
            return Err(Error::InvalidExcursion("need at least two grid points".into()));
        }
        let m = values.len() - 1;
        let dt = 1.0 / m as f64;
        if values[0].abs() > 1e-9 || values[m].abs() > 1e-9 {
            return Err(Error::InvalidExcursion("endpoints must vanish".into()));
        }
        for (k, pair) in values.windows(2).enumerate() {
            if pair[0] < -1e-12 {
                return Err(Error::InvalidExcursion(format!("negative value at node {k}")));
            }
            if (pair[1] - pair[0]).abs() > dt * (1.0 + 1e-9) {
                return Err(Error::InvalidExcursion(format!(
                    "slope exceeds 1 between nodes {k} and {}",
                    k + 1
                )));
            }
        }
        Ok(Self { values })
    }

    /// The zero excursion on `points` grid nodes.
    pub fn zero(points: usize) -> Self {
        Self {
            values: vec![0.0; points.max(2)],
        }
    }

    /// Samples `f` at `intervals + 1` uniform nodes (clamping the tiny
    /// negative values closed forms can produce at the endpoints).
    pub fn from_fn(intervals: usize, f: impl Fn(f64) -> f64) -> Self {
        let values = (0..=intervals)
            .map(|k| f(k as f64 / intervals as f64).max(0.0))
            .collect();
        Self { values }
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Number of grid intervals.
    pub fn intervals(&self) -> usize {
        self.values.len() - 1
    }

    /// Piecewise-linear evaluation at `t` in [0, 1].
    pub fn eval(&self, t: f64) -> f64 {
        let m = self.intervals() as f64;
        let s = (t.clamp(0.0, 1.0)) * m;
        let k = (s.floor() as usize).min(self.intervals() - 1);
        let frac = s - k as f64;
        self.values[k] * (1.0 - frac) + self.values[k + 1] * frac
    }

    /// Trapezoid integral (exact for the piecewise-linear representation).
    pub fn integral(&self) -> f64 {
        let m = self.intervals() as f64;
        let inner: f64 = self.values[1..self.values.len() - 1].iter().sum();
        (inner + 0.5 * (self.values[0] + self.values[self.values.len() - 1])) / m
    }

    /// Slopes on the grid intervals.
    pub fn slopes(&self) -> impl Iterator<Item = f64> + '_ {
        let m = self.intervals() as f64;
        self.values.windows(2).map(move |w| (w[1] - w[0]) * m)
    }

    pub fn sup_norm(&self) -> f64 {
        self.values.iter().fold(0.0, |acc, v| acc.max(v.abs()))
    }

    /// Sup distance over the shared grid; errors if the grids differ.
    pub fn sup_distance(&self, other: &Excursion) -> Result<f64> {
        if self.values.len() != other.values.len() {
            return Err(Error::GridMismatch(format!(
                "{} vs {} grid points",
                self.values.len(),
                other.values.len()
            )));
        }
        Ok(self
            .values
            .iter()
            .zip(&other.values)
            .fold(0.0, |acc, (a, b)| acc.max((a - b).abs())))
    }
}

/// The normalized excursion of a Dyck path: `phi(k/2n) = d(k)/(2n)`.
pub fn excursion_of_dyck(d: &DyckPath) -> Excursion {
    let scale = 1.0 / (2.0 * d.size() as f64);
    Excursion {
        values: d.heights().iter().map(|&h| h as f64 * scale).collect(),
    }
}

/// The empirical excursion of a pattern-avoiding permutation, through the
/// pattern's Dyck bijection. Rejects non-avoiding input.
pub fn empirical_excursion(pattern: CanonicalPattern, p: &Permutation) -> Result<Excursion> {
    Ok(excursion_of_dyck(&crate::dyck::perm_to_dyck(pattern, p)?))
}

/// The limit excursion `phi_beta(t)` of the 231 model (zero for
/// `beta <= 0`).
pub fn limit_excursion_231(beta: f64, t: f64) -> f64 {
    if beta <= 0.0 {
        0.0
    } else {
        crate::limits::phi231(beta, t)
    }
}

/// Derivative `phi_beta'(t)` (zero for `beta <= 0`).
pub fn limit_excursion_231_prime(beta: f64, t: f64) -> f64 {
    if beta <= 0.0 {
        0.0
    } else {
        crate::limits::phi231_prime(beta, t)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_sawtooth() {
        let p = Permutation::identity(4);
        let phi = empirical_excursion(CanonicalPattern::P231, &p).unwrap();
        assert_eq!(phi.intervals(), 8);
        assert!((phi.sup_norm() - 1.0 / 8.0).abs() < 1e-15);
    }

    #[test]
    fn reversal_tent() {
        let p = Permutation::reversal(2);
        let phi = empirical_excursion(CanonicalPattern::P231, &p).unwrap();
        assert_eq!(phi.values(), &[0.0, 0.25, 0.5, 0.25, 0.0]);
    }

    #[test]
    fn sup_norm_bound() {
        for n in 1..=7 {
            for p in crate::oracle::enumerate_avoiders(CanonicalPattern::P231, n).unwrap() {
                let phi = empirical_excursion(CanonicalPattern::P231, &p).unwrap();
                assert!(phi.sup_norm() <= 0.5 + 1e-12);
            }
        }
    }

    #[test]
    fn rejects_non_avoiding() {
        let p = Permutation::new(vec![2, 3, 1]).unwrap();
        assert!(empirical_excursion(CanonicalPattern::P231, &p).is_err());
    }

    #[test]
    fn validates_constraints() {
        assert!(Excursion::new(vec![0.0, 0.7, 0.0]).is_err()); // slope 1.4
        assert!(Excursion::new(vec![0.1, 0.2, 0.0]).is_err()); // endpoint
        assert!(Excursion::new(vec![0.0, 0.5, 0.0]).is_ok()); // slope exactly 1
        assert!(Excursion::new(vec![0.0, 0.4, 0.0]).is_ok());
    }

    #[test]
    fn integral_and_eval() {
        let tent = Excursion::from_fn(10, |t| t.min(1.0 - t));
        assert!((tent.integral() - 0.25).abs() < 1e-12);
        assert!((tent.eval(0.25) - 0.25).abs() < 1e-12);
        assert!((tent.eval(0.77) - 0.23).abs() < 1e-12);
    }

    #[test]
    fn limit_excursion_midpoint() {
        let beta = 2.0f64;
        let expected = ((1.0 + beta.exp()) / 2.0).ln() / beta - 0.5;
        assert!((limit_excursion_231(beta, 0.5) - expected).abs() < 1e-12);
        assert_eq!(limit_excursion_231(-1.0, 0.3), 0.0);
    }
}
