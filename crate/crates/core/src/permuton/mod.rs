//! Permutons and their parametrizations.
//!
//! A permuton is a probability measure on the unit square with uniform
//! marginals. Two parameter spaces drive everything here:
//!
//! - excursions (nonnegative 1-Lipschitz bridges), in bijection with
//!   231-avoiding permutons through the RLM curve;
//! - pairs of subuniform measures with dominated CDFs, surjecting onto
//!   321-avoiding permutons through the monotone-coupling map [`psi`].
//!
//! Permutons themselves come in two representations: [`PermutonGrid`]
//! (a CDF tabulated on a uniform grid, for empirical objects) and
//! [`CurvePermuton`] (weighted curves with closed-form CDFs, for the
//! limit laws).

mod curve;
mod excursion;
mod grid;
mod measure;
mod rlm;

pub use curve::{limit_permuton, pattern_density_mc, Component, CurvePermuton, DensityEstimate, PointSampler};
pub use excursion::{
    empirical_excursion, excursion_of_dyck, limit_excursion_231, limit_excursion_231_prime,
    Excursion,
};
pub use grid::{permuton_of_perm, CellVariant, GridSampler, PermutonGrid};
pub use measure::{
    empirical_measure_pair, limit_density_pair_321, monotone_coupling, psi, psi_with, Coupling,
    MeasurePairD, StepMeasure,
};
pub use rlm::{permuton_from_rlm, RlmCurve};

/// Default grid resolution for tabulated permuton CDFs.
pub const DEFAULT_GRID: usize = 256;

/// Default mass tolerance when extracting RLM curves from analytic
/// permutons.
pub const DEFAULT_TOL_MASS: f64 = 1e-9;

/// Closed-form limit RLM curve `f_beta` of either pattern; the diagonal
/// (`f(x) = x`) for `beta <= 0`.
pub fn limit_rlm_curve(pattern: crate::perm::CanonicalPattern, beta: f64, x: f64) -> f64 {
    use crate::perm::CanonicalPattern;
    if beta <= 0.0 {
        return x;
    }
    match pattern {
        CanonicalPattern::P231 => crate::limits::f231(beta, x),
        CanonicalPattern::P321 => crate::limits::f321(beta, x),
    }
}

/// The tangency abscissa `x*` where the 231 limit curve has unit slope
/// (only meaningful for `beta > 0`).
pub fn limit_x_star(beta: f64) -> f64 {
    crate::limits::x_star(beta)
}

/// Closed-form derivative of the 231 limit curve (1 for `beta <= 0`).
pub fn limit_rlm_curve_231_prime(beta: f64, x: f64) -> f64 {
    if beta <= 0.0 {
        1.0
    } else {
        crate::limits::f231_prime(beta, x)
    }
}

/// The RLM-excursion of the limit permuton: the graph of `f_beta` rotated
/// into excursion coordinates, `{(x + f(x))/2, (x - f(x))/2}`. For 231
/// this is the closed-form `phi_beta`; for 321 the parametric rotation is
/// inverted by bisection; the diagonal (`beta <= 0`) gives zero.
pub fn limit_excursion(pattern: crate::perm::CanonicalPattern, beta: f64, t: f64) -> f64 {
    use crate::perm::CanonicalPattern;
    if beta <= 0.0 {
        return 0.0;
    }
    match pattern {
        CanonicalPattern::P231 => crate::limits::phi231(beta, t),
        CanonicalPattern::P321 => {
            let f = |x: f64| crate::limits::f321(beta, x);
            let x = crate::limits::bisect_increasing(|x| 0.5 * (x + f(x)), t);
            0.5 * (x - f(x))
        }
    }
}
