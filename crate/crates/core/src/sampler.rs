//! The tilted reversible Markov chain on Dyck paths: Metropolis-accepted
//! peak/valley flips whose stationary law is the Mallows measure
//! conditioned to avoid the configured pattern.
//!
//! One proposal draws an index `i` uniformly in `1..=2n-1` and an
//! acceptance uniform. A flip raising the inversion count by `delta` is
//! accepted with probability `min(1, q^delta)` where `q = e^{beta/n}`; for
//! `q >= 1` this is exactly the tilted kernel with `f = inv` (moves raising
//! inv always accepted), and the rule extends reversibility to `q < 1`.
//! Inert indices (slopes and height-1 peaks) count as steps.

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use rand::distr::{Distribution, Uniform};
use rand::Rng as _;
use serde::{Deserialize, Serialize};

use crate::dyck::{delta_inv, DyckPath};
use crate::perm::{CanonicalPattern, Permutation};
use crate::rng::derive_rng;
use crate::{Error, Result};

/// Chain state: the path, its cached inversion count, and the tilt.
#[derive(Debug, Clone)]
pub struct ChainState {
    path: DyckPath,
    inv: u64,
    pattern: CanonicalPattern,
    /// `beta / n`, the natural-log tilt per inversion.
    log_q: f64,
    /// Acceptance probability of a move in the unfavorable direction.
    accept_against: f64,
    step_count: u64,
    accepted_flips: u64,
}

impl ChainState {
    pub fn new(pattern: CanonicalPattern, path: DyckPath, beta: f64) -> Self {
        let n = path.size();
        let log_q = beta / n as f64;
        Self {
            inv: crate::dyck::inv_from_dyck(pattern, &path),
            pattern,
            log_q,
            accept_against: (-log_q.abs()).exp(),
            step_count: 0,
            accepted_flips: 0,
            path,
        }
    }

    pub fn path(&self) -> &DyckPath {
        &self.path
    }

    pub fn inv(&self) -> u64 {
        self.inv
    }

    pub fn step_count(&self) -> u64 {
        self.step_count
    }

    pub fn accepted_flips(&self) -> u64 {
        self.accepted_flips
    }

    pub fn size(&self) -> usize {
        self.path.size()
    }

    pub fn to_permutation(&self) -> Permutation {
        crate::dyck::dyck_to_perm(self.pattern, &self.path)
    }

    /// One Metropolis step with externally supplied randomness: flip index
    /// `i` in `1..=2n-1` and acceptance uniform `u` in `[0,1)`. Supplying
    /// the randomness makes the two-extremes coupling exact.
    #[inline]
    pub fn step_with(&mut self, i: usize, u: f64) {
        self.step_lazy(i, || u);
    }

    /// Same step, drawing the acceptance uniform only when the proposal
    /// moves against the tilt.
    #[inline]
    pub fn step_lazy(&mut self, i: usize, u: impl FnOnce() -> f64) {
        self.step_count += 1;
        let delta = delta_inv(self.pattern, &self.path, i);
        let unfavorable = (delta as f64) * self.log_q < 0.0;
        if unfavorable && u() >= self.accept_against {
            return;
        }
        if self.path.flip_in_place(i) != 0 {
            self.inv = self.inv.wrapping_add_signed(delta);
            self.accepted_flips += 1;
        }
    }

    /// One Metropolis step drawing the index and the uniform from `rng`.
    #[inline]
    pub fn metropolis_step(&mut self, rng: &mut crate::rng::Rng) {
        let i = rng.random_range(1..2 * self.size());
        let u: f64 = rng.random();
        self.step_with(i, u);
    }
}

/// Initial path of a run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InitKind {
    /// The sawtooth `(UD)^n` (minimal height; decodes to the identity).
    Minimal,
    /// The full-height path `U^n D^n` (maximal inversion count).
    Maximal,
    /// A height-2 zigzag `(UUDD)^*`, a third start between the extremes.
    Alternating,
}

impl InitKind {
    pub fn path(self, n: usize) -> DyckPath {
        match self {
            InitKind::Minimal => DyckPath::sawtooth(n),
            InitKind::Maximal => DyckPath::full_height(n),
            InitKind::Alternating => {
                let mut steps = Vec::with_capacity(2 * n);
                let mut remaining = n;
                while remaining >= 2 {
                    steps.extend_from_slice(&[1, 1, -1, -1]);
                    remaining -= 2;
                }
                if remaining == 1 {
                    steps.extend_from_slice(&[1, -1]);
                }
                DyckPath::new(steps).expect("zigzag is Dyck")
            }
        }
    }
}

impl fmt::Display for InitKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            InitKind::Minimal => "min",
            InitKind::Maximal => "max",
            InitKind::Alternating => "alt",
        };
        write!(f, "{s}")
    }
}

impl FromStr for InitKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "min" | "minimal" => Ok(InitKind::Minimal),
            "max" | "maximal" => Ok(InitKind::Maximal),
            "alt" | "alternating" => Ok(InitKind::Alternating),
            other => Err(Error::Parse(format!("unknown init {other:?}"))),
        }
    }
}

/// Configuration of a chain run.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RunConfig {
    pub pattern: CanonicalPattern,
    pub n: usize,
    pub beta: f64,
    pub steps: u64,
    pub seed: u64,
    /// Record a state every `thin` steps; 0 records the final state only.
    pub thin: u64,
    pub init: InitKind,
    pub coupling_check: bool,
}

impl RunConfig {
    pub fn new(pattern: CanonicalPattern, n: usize, beta: f64, steps: u64, seed: u64) -> Self {
        Self {
            pattern,
            n,
            beta,
            steps,
            seed,
            thin: 0,
            init: InitKind::Minimal,
            coupling_check: false,
        }
    }

    pub fn with_thin(mut self, thin: u64) -> Self {
        self.thin = thin;
        self
    }

    pub fn with_init(mut self, init: InitKind) -> Self {
        self.init = init;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.n == 0 {
            return Err(Error::Domain("n must be at least 1".into()));
        }
        Ok(())
    }
}

/// Result of a chain run.
#[derive(Debug, Clone)]
pub struct SampleRecord {
    pub final_permutation: Permutation,
    pub final_inv: u64,
    pub accept_rate: f64,
    pub wall_seconds: f64,
}

/// Runs the chain, streaming every thinned state to `on_sample` (called
/// with the step number and the current path). States are never buffered,
/// so arbitrarily long thinned runs stay memory-flat.
pub fn run_chain_with(
    cfg: &RunConfig,
    mut on_sample: impl FnMut(u64, &ChainState),
) -> Result<SampleRecord> {
    cfg.validate()?;
    let pattern = cfg.pattern;
    let start = Instant::now();
    let mut state = ChainState::new(pattern, cfg.init.path(cfg.n), cfg.beta);
    let mut rng = derive_rng(cfg.seed, 0);
    if cfg.n == 1 {
        // a single cell has no flippable index; the chain is frozen
        state.step_count = cfg.steps;
    } else {
        let index_dist = Uniform::new(1, 2 * cfg.n).expect("nonempty index range");
        for step in 1..=cfg.steps {
            let i = index_dist.sample(&mut rng);
            state.step_lazy(i, || rng.random());
            if cfg.thin > 0 && step % cfg.thin == 0 {
                on_sample(step, &state);
            }
        }
    }
    let accept_rate = if state.step_count == 0 {
        0.0
    } else {
        state.accepted_flips as f64 / state.step_count as f64
    };
    Ok(SampleRecord {
        final_permutation: state.to_permutation(),
        final_inv: state.inv,
        accept_rate,
        wall_seconds: start.elapsed().as_secs_f64(),
    })
}

/// Runs the chain and returns the final state (plus thinned permutations if
/// `thin > 0`).
pub fn run_chain(cfg: &RunConfig) -> Result<(SampleRecord, Vec<Permutation>)> {
    let mut thinned = Vec::new();
    let record = run_chain_with(cfg, |_, state| thinned.push(state.to_permutation()))?;
    Ok((record, thinned))
}

/// One checkpoint of the two-extremes coupling diagnostic.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CouplingCheckpoint {
    pub step: u64,
    /// Sup-norm distance between the two normalized excursions.
    pub sup_distance: f64,
}

/// Diagnostic record of a coupled two-extremes run.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CouplingDiagnostic {
    pub checkpoints: Vec<CouplingCheckpoint>,
    pub final_sup_distance: f64,
}

fn sup_distance(a: &ChainState, b: &ChainState) -> f64 {
    let scale = 1.0 / (2.0 * a.size() as f64);
    a.path
        .heights()
        .iter()
        .zip(b.path.heights())
        .map(|(&x, &y)| (x - y).abs())
        .max()
        .unwrap_or(0) as f64
        * scale
}

/// Runs two chains started from the minimal and maximal paths, driven by
/// the same proposal index and the same acceptance uniform at every step
/// (the uniform sharing is our choice; it makes the coupling deterministic
/// given the seed). Records the sup-distance between the normalized
/// excursions at `checkpoints` evenly spaced steps. This is the
/// equilibration heuristic, not a proof of mixing.
pub fn coupled_equilibration(cfg: &RunConfig, checkpoints: usize) -> Result<CouplingDiagnostic> {
    cfg.validate()?;
    let pattern = cfg.pattern;
    let mut low = ChainState::new(pattern, InitKind::Minimal.path(cfg.n), cfg.beta);
    let mut high = ChainState::new(pattern, InitKind::Maximal.path(cfg.n), cfg.beta);
    let mut rng = derive_rng(cfg.seed, 1);
    let interval = if checkpoints == 0 {
        0
    } else {
        (cfg.steps / checkpoints as u64).max(1)
    };
    let mut out = Vec::new();
    out.push(CouplingCheckpoint {
        step: 0,
        sup_distance: sup_distance(&low, &high),
    });
    if cfg.n > 1 {
        let index_dist = Uniform::new(1, 2 * cfg.n).expect("nonempty index range");
        for step in 1..=cfg.steps {
            let i = index_dist.sample(&mut rng);
            let u: f64 = rng.random();
            low.step_with(i, u);
            high.step_with(i, u);
            if interval > 0 && step % interval == 0 {
                out.push(CouplingCheckpoint {
                    step,
                    sup_distance: sup_distance(&low, &high),
                });
            }
        }
    }
    let final_sup_distance = sup_distance(&low, &high);
    if out.last().map(|c| c.step) != Some(cfg.steps) {
        out.push(CouplingCheckpoint {
            step: cfg.steps,
            sup_distance: final_sup_distance,
        });
    }
    Ok(CouplingDiagnostic {
        checkpoints: out,
        final_sup_distance,
    })
}
