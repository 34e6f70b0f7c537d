//! Monte Carlo sampler and numerics toolkit for Mallows random permutations
//! conditioned to avoid a pattern of length 3.
//!
//! The model puts weight `e^{(beta/n) inv(sigma)}` on every `alpha`-avoiding
//! permutation `sigma` of size `n`, normalized by the partition function
//! `Z_n`. Everything here is organized around the two canonical patterns
//! 231 and 321 (the other four reduce to these by symmetry):
//!
//! - [`perm`]: permutations, inversions, pattern occurrence/avoidance tests,
//!   right-to-left minima and the symmetry transforms.
//! - [`dyck`]: Dyck paths, the two bijections with 231- and 321-avoiding
//!   permutations, inversion evaluation from paths, and O(1) inversion
//!   deltas for corner flips.
//! - [`sampler`]: the tilted reversible Markov chain (Metropolis-accepted
//!   peak/valley flips), reproducible seeding, thinning, and the
//!   two-extremes coupling diagnostic.
//! - [`permuton`]: permutons and their parametrizations — excursions,
//!   subuniform measure pairs, monotone couplings, grid CDFs and the
//!   closed-form limit shapes.
//! - [`theory`]: rate functions, actions and their minimizers, exact
//!   inversion-generating polynomials and partition-function asymptotics.
//! - [`oracle`]: exhaustive small-n enumeration, exact tilted distributions
//!   and the cross-module validation suites.
//!
//! Data-parallel drivers (replica sweeps, partition tables) go through
//! [`parallel`], which uses rayon when the default `parallel` feature is
//! enabled and falls back to sequential iteration otherwise.

pub mod dyck;
pub mod io;
pub mod oracle;
pub mod parallel;
pub mod perm;
pub mod permuton;
pub mod quad;
pub mod rng;
pub mod sampler;
pub mod theory;

mod limits;

pub use perm::{CanonicalPattern, Pattern3, Permutation, RlMinima, Symmetry};

use thiserror::Error;

/// Error type shared by all modules.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),
    #[error("permutation does not avoid {pattern}")]
    NotAvoiding { pattern: Pattern3 },
    #[error("invalid Dyck path: {0}")]
    InvalidDyckPath(String),
    #[error("invalid right-to-left minima encoding: {0}")]
    InvalidRlMinima(String),
    #[error("invalid measure: {0}")]
    InvalidMeasure(String),
    #[error("invalid excursion: {0}")]
    InvalidExcursion(String),
    #[error("invalid RLM curve: {0}")]
    InvalidRlmCurve(String),
    #[error("grid mismatch: {0}")]
    GridMismatch(String),
    #[error("argument out of domain: {0}")]
    Domain(String),
    #[error("size cap exceeded: n = {n} > {cap}")]
    SizeCap { n: usize, cap: usize },
    #[error("parse error: {0}")]
    Parse(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
