//! Analytic limit permutons: weighted curves with closed-form cumulative
//! weights, exact CDF evaluation and inverse-CDF sampling.
//!
//! For beta > 0 the 231 limit lives on the graph of `f_beta` (weight
//! `min(1, f')`) plus a piece of the antidiagonal (weight
//! `max(0, 1 - f')`, supported left of the tangency point x*); the 321
//! limit lives on the graph of its `f_beta` and the transposed graph, each
//! carrying the logistic density. For beta <= 0 both limits collapse to
//! the diagonal.

use crate::limits;
use crate::perm::CanonicalPattern;
use crate::rng::Rng;
use rand::Rng as _;

/// A point sampler for Monte Carlo pattern-density estimation.
pub trait PointSampler {
    fn sample_point(&self, rng: &mut Rng) -> (f64, f64);
}

/// One weighted-curve component of a limit permuton.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Component {
    /// The diagonal (x, x) with unit weight.
    Diagonal,
    /// `(x, f231_beta(x))` weighted by `min(1, f')`.
    Graph231 { beta: f64 },
    /// `(x, 1-x)` weighted by `max(0, 1 - f231')`, supported on [0, x*].
    Antidiagonal231 { beta: f64 },
    /// `(x, f321_beta(x))` weighted by the logistic density rho1.
    Graph321 { beta: f64 },
    /// `(f321_beta(x), x)` with the same weight (the transpose image).
    TransposeGraph321 { beta: f64 },
}

impl Component {
    /// Cumulative weight `W(t) = integral_0^t w`, in closed form.
    pub fn cum_weight(&self, t: f64) -> f64 {
        let t = t.clamp(0.0, 1.0);
        match *self {
            Component::Diagonal => t,
            Component::Graph231 { beta } => {
                let xs = limits::x_star(beta);
                if t <= xs {
                    limits::f231(beta, t)
                } else {
                    limits::f231(beta, xs) + (t - xs)
                }
            }
            Component::Antidiagonal231 { beta } => {
                let xs = limits::x_star(beta);
                let t = t.min(xs);
                t - limits::f231(beta, t)
            }
            Component::Graph321 { beta } | Component::TransposeGraph321 { beta } => {
                limits::rho1_cdf(beta, t)
            }
        }
    }

    pub fn mass(&self) -> f64 {
        self.cum_weight(1.0)
    }

    /// The curve point at parameter `t`.
    pub fn point(&self, t: f64) -> (f64, f64) {
        match *self {
            Component::Diagonal => (t, t),
            Component::Graph231 { beta } => (t, limits::f231(beta, t)),
            Component::Antidiagonal231 { .. } => (t, 1.0 - t),
            Component::Graph321 { beta } => (t, limits::f321(beta, t)),
            Component::TransposeGraph321 { beta } => (limits::f321(beta, t), t),
        }
    }

    /// Contribution to the CDF at `(x, y)`: the cumulative weight of the
    /// parameter set whose curve point lies in `[0,x] x [0,y]`.
    pub fn cdf(&self, x: f64, y: f64) -> f64 {
        let x = x.clamp(0.0, 1.0);
        let y = y.clamp(0.0, 1.0);
        match *self {
            Component::Diagonal => x.min(y),
            Component::Graph231 { beta } => {
                // t <= x and f(t) <= y
                self.cum_weight(x.min(limits::f231_inv(beta, y)))
            }
            Component::Antidiagonal231 { .. } => {
                // t <= x and 1 - t <= y
                (self.cum_weight(x) - self.cum_weight(1.0 - y)).max(0.0)
            }
            Component::Graph321 { beta } => self.cum_weight(x.min(limits::f321_inv(beta, y))),
            Component::TransposeGraph321 { beta } => {
                self.cum_weight(y.min(limits::f321_inv(beta, x)))
            }
        }
    }

    /// Inverse of the cumulative weight by monotone bisection.
    fn sample_t(&self, u: f64) -> f64 {
        limits::bisect_increasing(|t| self.cum_weight(t), u)
    }
}

/// A limit permuton as a list of weighted-curve components with total
/// mass 1.
#[derive(Debug, Clone, PartialEq)]
pub struct CurvePermuton {
    pub pattern: CanonicalPattern,
    pub beta: f64,
    pub components: Vec<Component>,
}

impl CurvePermuton {
    pub fn cdf(&self, x: f64, y: f64) -> f64 {
        self.components.iter().map(|c| c.cdf(x, y)).sum()
    }

    pub fn component_masses(&self) -> Vec<f64> {
        self.components.iter().map(|c| c.mass()).collect()
    }

    /// Tabulates the CDF on a grid.
    pub fn to_grid(&self, g: usize) -> super::PermutonGrid {
        super::PermutonGrid::from_node_fn(g, |x, y| self.cdf(x, y))
    }
}

impl PointSampler for CurvePermuton {
    fn sample_point(&self, rng: &mut Rng) -> (f64, f64) {
        let u: f64 = rng.random();
        let mut acc = 0.0;
        for c in &self.components {
            let mass = c.mass();
            if u < acc + mass || std::ptr::eq(c, self.components.last().unwrap()) {
                let t = c.sample_t(u - acc);
                return c.point(t);
            }
            acc += mass;
        }
        unreachable!("component masses sum to 1")
    }
}

/// The limit permuton of Mallows permutations conditioned to avoid
/// `pattern` at tilt `beta`: the diagonal for `beta <= 0`, the explicit
/// weighted curves otherwise.
pub fn limit_permuton(pattern: CanonicalPattern, beta: f64) -> CurvePermuton {
    let components = if beta <= 0.0 {
        vec![Component::Diagonal]
    } else {
        match pattern {
            CanonicalPattern::P231 => vec![
                Component::Graph231 { beta },
                Component::Antidiagonal231 { beta },
            ],
            CanonicalPattern::P321 => vec![
                Component::Graph321 { beta },
                Component::TransposeGraph321 { beta },
            ],
        }
    };
    CurvePermuton {
        pattern,
        beta,
        components,
    }
}

/// Monte Carlo estimate with standard error.
#[derive(Debug, Clone, Copy)]
pub struct DensityEstimate {
    pub estimate: f64,
    pub std_error: f64,
    pub samples: u64,
}

/// Monte Carlo estimate of the density of `pattern` (one-line notation,
/// length k) in a permuton: the probability that k independent points,
/// sorted by abscissa, realize the pattern in their ordinates.
pub fn pattern_density_mc(
    pattern: &[u32],
    sampler: &impl PointSampler,
    samples: u64,
    rng: &mut Rng,
) -> DensityEstimate {
    let k = pattern.len();
    let mut hits = 0u64;
    let mut points: Vec<(f64, f64)> = Vec::with_capacity(k);
    for _ in 0..samples {
        points.clear();
        for _ in 0..k {
            points.push(sampler.sample_point(rng));
        }
        points.sort_by(|a, b| a.0.total_cmp(&b.0));
        let mut ok = true;
        'outer: for a in 0..k {
            for b in a + 1..k {
                if (points[a].1 < points[b].1) != (pattern[a] < pattern[b]) {
                    ok = false;
                    break 'outer;
                }
            }
        }
        if ok {
            hits += 1;
        }
    }
    let p = hits as f64 / samples as f64;
    DensityEstimate {
        estimate: p,
        std_error: (p * (1.0 - p) / samples as f64).sqrt(),
        samples,
    }
}
