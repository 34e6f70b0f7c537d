//! Construction of the unique 231-avoiding permuton with a given RLM
//! curve, through the lower-right-corner function
//! `P_f(x, y) = mu([x,1] x [0,y])`.
//!
//! For `(x, y)` weakly above the curve, `P_f(x, y) = y - x + min (x'-y')`
//! over the completed graph restricted to the lower-right box — the L1
//! distance from `(x, y)` to the graph. The minimum over the box is taken
//! over the polyline vertices inside it (range-minimum over a sparse
//! table) plus the two boundary crossings, so a full grid costs
//! O(g^2 log V) after an O(V log V) build.

use crate::permuton::grid::PermutonGrid;
use crate::permuton::Excursion;
use crate::{Error, Result};

/// A nondecreasing polyline graph of a curve `f` with `f(x) <= x`,
/// `f(1) = 1`, from `(0, 0)` to `(1, 1)`. Staircase jumps appear as
/// vertical segments (consecutive vertices sharing an abscissa).
#[derive(Debug, Clone, PartialEq)]
pub struct RlmCurve {
    xs: Vec<f64>,
    ys: Vec<f64>,
}

impl RlmCurve {
    pub fn new(xs: Vec<f64>, ys: Vec<f64>) -> Result<Self> {
        if xs.len() != ys.len() || xs.len() < 2 {
            return Err(Error::InvalidRlmCurve("need matching vertex lists".into()));
        }
        let last = xs.len() - 1;
        if xs[0].abs() > 1e-9 || ys[0].abs() > 1e-9 {
            return Err(Error::InvalidRlmCurve("curve must start at (0, 0)".into()));
        }
        if (xs[last] - 1.0).abs() > 1e-9 || (ys[last] - 1.0).abs() > 1e-9 {
            return Err(Error::InvalidRlmCurve("curve must end at (1, 1)".into()));
        }
        for k in 0..xs.len() {
            if ys[k] > xs[k] + 1e-9 {
                return Err(Error::InvalidRlmCurve(format!(
                    "vertex {k} lies above the diagonal"
                )));
            }
            if k > 0 && (xs[k] < xs[k - 1] - 1e-12 || ys[k] < ys[k - 1] - 1e-12) {
                return Err(Error::InvalidRlmCurve(format!("vertex {k} not monotone")));
            }
        }
        Ok(Self { xs, ys })
    }

    /// From the integer staircase `F(0..=n)` of a permutation, scaled to
    /// the unit square.
    pub fn from_staircase(staircase: &[u32]) -> Self {
        let n = staircase.len() - 1;
        let nf = n as f64;
        let mut xs = vec![0.0];
        let mut ys = vec![staircase[0] as f64 / nf];
        for k in 1..=n {
            let x = k as f64 / nf;
            let prev = staircase[k - 1] as f64 / nf;
            let cur = staircase[k] as f64 / nf;
            xs.push(x);
            ys.push(prev);
            if cur > prev {
                xs.push(x);
                ys.push(cur);
            }
        }
        Self::new(xs, ys).expect("staircase yields a valid curve")
    }

    /// Samples an analytic curve at `m + 1` uniform abscissas.
    pub fn from_fn(m: usize, f: impl Fn(f64) -> f64) -> Self {
        let xs: Vec<f64> = (0..=m).map(|k| k as f64 / m as f64).collect();
        let ys: Vec<f64> = xs.iter().map(|&x| f(x).clamp(0.0, x)).collect();
        Self::new(xs, ys).expect("sampled curve is valid")
    }

    /// The curve obtained by rotating an excursion back into RLM-curve
    /// coordinates: the graph `{(t + phi(t), t - phi(t))}`.
    pub fn from_excursion(phi: &Excursion) -> Self {
        let m = phi.intervals();
        let mut xs = Vec::with_capacity(m + 1);
        let mut ys = Vec::with_capacity(m + 1);
        for (k, &v) in phi.values().iter().enumerate() {
            let t = k as f64 / m as f64;
            xs.push((t + v).clamp(0.0, 1.0));
            ys.push((t - v).clamp(0.0, 1.0));
        }
        Self::new(xs, ys).expect("rotated excursion is a valid curve")
    }

    pub fn vertices(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.xs.iter().copied().zip(self.ys.iter().copied())
    }

    /// Upper value of the curve at `x` (the top of a jump when `x` is a
    /// jump abscissa).
    pub fn eval_upper(&self, x: f64) -> f64 {
        let x = x.clamp(0.0, 1.0);
        // last vertex with xs[k] <= x
        let k = self.xs.partition_point(|&v| v <= x);
        if k == 0 {
            return self.ys[0];
        }
        let k = k - 1;
        if k + 1 == self.xs.len() || self.xs[k + 1] <= self.xs[k] {
            return self.ys[k];
        }
        let frac = (x - self.xs[k]) / (self.xs[k + 1] - self.xs[k]);
        self.ys[k] + frac * (self.ys[k + 1] - self.ys[k])
    }

    /// Rightmost abscissa at which the curve is still weakly below height
    /// `y` (the exit of the lower-right box through its top edge).
    fn exit_x(&self, y: f64) -> f64 {
        if y >= 1.0 {
            return 1.0;
        }
        // last vertex with ys[k] <= y
        let k = self.ys.partition_point(|&v| v <= y);
        if k == 0 {
            return self.xs[0];
        }
        let k = k - 1;
        if k + 1 == self.ys.len() {
            return *self.xs.last().unwrap();
        }
        if self.ys[k + 1] <= self.ys[k] {
            return self.xs[k];
        }
        let frac = (y - self.ys[k]) / (self.ys[k + 1] - self.ys[k]);
        self.xs[k] + frac * (self.xs[k + 1] - self.xs[k])
    }
}

/// Static range-minimum table.
struct SparseMin {
    rows: Vec<Vec<f64>>,
}

impl SparseMin {
    fn new(values: Vec<f64>) -> Self {
        let n = values.len();
        let mut rows = vec![values];
        let mut len = 1;
        while 2 * len <= n {
            let prev = rows.last().unwrap();
            let row: Vec<f64> = (0..=n - 2 * len)
                .map(|i| prev[i].min(prev[i + len]))
                .collect();
            rows.push(row);
            len *= 2;
        }
        Self { rows }
    }

    /// Minimum over the inclusive index range `[lo, hi]`.
    fn query(&self, lo: usize, hi: usize) -> f64 {
        debug_assert!(lo <= hi);
        let level = (usize::BITS - 1 - (hi - lo + 1).leading_zeros()) as usize;
        let len = 1 << level;
        self.rows[level][lo].min(self.rows[level][hi + 1 - len])
    }
}

/// Builds the grid CDF of the unique 231-avoiding permuton whose RLM curve
/// is `curve`.
pub fn permuton_from_rlm(curve: &RlmCurve, g: usize) -> Result<PermutonGrid> {
    if g == 0 {
        return Err(Error::Domain("grid resolution must be positive".into()));
    }
    let corner: Vec<f64> = curve
        .vertices()
        .map(|(x, y)| x - y)
        .collect();
    let table = SparseMin::new(corner);
    let grid = PermutonGrid::from_node_fn(g, |x, y| {
        let f_up = curve.eval_upper(x);
        if y < f_up - 1e-12 {
            // no mass lower-right of (x, y): everything below height y is
            // already left of x
            return y;
        }
        let mut min_c = x - f_up;
        let exit = curve.exit_x(y);
        min_c = min_c.min(exit - y);
        let lo = curve.xs.partition_point(|&v| v < x);
        let hi = curve.ys.partition_point(|&v| v <= y);
        if lo < hi {
            min_c = min_c.min(table.query(lo, hi - 1));
        }
        let p = (y - x + min_c).max(0.0);
        (y - p).clamp(0.0, 1.0)
    });
    Ok(grid)
}
