//! Flag structs doubling as config-file schemas: every field is optional
//! on the command line, a `--config FILE` JSON object (flat, keys mirror
//! the flag names) fills the gaps, and explicit flags win. Unknown config
//! keys are ignored, so a run's metadata record is itself a valid config.

use std::path::PathBuf;

use clap::Args;
use serde::Deserialize;

use mallows_avoid::perm::{CanonicalPattern, Pattern3};
use mallows_avoid::sampler::InitKind;

use crate::CliError;

pub fn parse_pattern(s: &str) -> Result<Pattern3, String> {
    s.parse().map_err(|e| format!("{e}"))
}

pub fn parse_canonical(s: &str) -> Result<CanonicalPattern, String> {
    s.parse().map_err(|e| format!("{e}"))
}

pub fn parse_init(s: &str) -> Result<InitKind, String> {
    s.parse().map_err(|e| format!("{e}"))
}

/// Loads the config overlay, if any.
fn overlay<T: for<'de> Deserialize<'de> + Default>(path: &Option<PathBuf>) -> Result<T, CliError> {
    match path {
        None => Ok(T::default()),
        Some(p) => {
            let text = std::fs::read_to_string(p)?;
            serde_json::from_str(&text)
                .map_err(|e| CliError::Usage(format!("config {}: {e}", p.display())))
        }
    }
}

fn require<T>(value: Option<T>, flag: &str) -> Result<T, CliError> {
    value.ok_or_else(|| CliError::Usage(format!("missing --{flag} (flag or config)")))
}

#[derive(Args, Deserialize, Default)]
#[serde(default)]
pub struct SampleArgs {
    /// Pattern to avoid: 123, 132, 213, 231, 312 or 321.
    #[arg(long, value_parser = parse_pattern)]
    pub pattern: Option<Pattern3>,
    /// Permutation size.
    #[arg(long)]
    pub n: Option<usize>,
    /// Tilt: weight e^{(beta/n) inv(sigma)}.
    #[arg(long, allow_hyphen_values = true)]
    pub beta: Option<f64>,
    /// Markov chain steps.
    #[arg(long)]
    pub steps: Option<u64>,
    /// RNG seed (64-bit).
    #[arg(long)]
    pub seed: Option<u64>,
    /// Record a permutation every THIN steps (0 = final state only).
    #[arg(long)]
    pub thin: Option<u64>,
    /// Initial path: min (sawtooth), max (full height), alt (height-2 zigzag).
    #[arg(long, value_parser = parse_init)]
    pub init: Option<InitKind>,
    /// Also run the two-extremes coupling diagnostic.
    #[arg(long, num_args = 0..=1, default_missing_value = "true")]
    pub coupling_check: Option<bool>,
    /// Output permutation CSV path (metadata lands next to it).
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// JSON config to overlay (flags override).
    #[arg(long)]
    #[serde(skip)]
    pub config: Option<PathBuf>,
}

pub struct SampleResolved {
    pub pattern: Pattern3,
    pub n: usize,
    pub beta: f64,
    pub steps: u64,
    pub seed: u64,
    pub thin: u64,
    pub init: InitKind,
    pub coupling_check: bool,
    pub out: PathBuf,
}

impl SampleArgs {
    pub fn resolve(self) -> Result<SampleResolved, CliError> {
        let file: SampleArgs = overlay(&self.config)?;
        Ok(SampleResolved {
            pattern: require(self.pattern.or(file.pattern), "pattern")?,
            n: require(self.n.or(file.n), "n")?,
            beta: require(self.beta.or(file.beta), "beta")?,
            steps: require(self.steps.or(file.steps), "steps")?,
            seed: require(self.seed.or(file.seed), "seed")?,
            thin: self.thin.or(file.thin).unwrap_or(0),
            init: self.init.or(file.init).unwrap_or(InitKind::Minimal),
            coupling_check: self.coupling_check.or(file.coupling_check).unwrap_or(false),
            out: require(self.out.or(file.out), "out")?,
        })
    }
}

#[derive(Args, Deserialize, Default)]
#[serde(default)]
pub struct LimitArgs {
    /// Canonical pattern: 231 or 321.
    #[arg(long, value_parser = parse_canonical)]
    pub pattern: Option<CanonicalPattern>,
    #[arg(long, allow_hyphen_values = true)]
    pub beta: Option<f64>,
    /// Number of grid intervals for the tabulated curves.
    #[arg(long)]
    pub grid: Option<usize>,
    /// Also tabulate the permuton CDF (i,j,cdf) at this resolution.
    #[arg(long)]
    pub cdf_grid: Option<usize>,
    /// Output directory (curve.csv, measures.csv, summary.json).
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    #[serde(skip)]
    pub config: Option<PathBuf>,
}

pub struct LimitResolved {
    pub pattern: CanonicalPattern,
    pub beta: f64,
    pub grid: usize,
    pub cdf_grid: Option<usize>,
    pub out: PathBuf,
}

impl LimitArgs {
    pub fn resolve(self) -> Result<LimitResolved, CliError> {
        let file: LimitArgs = overlay(&self.config)?;
        Ok(LimitResolved {
            pattern: require(self.pattern.or(file.pattern), "pattern")?,
            beta: require(self.beta.or(file.beta), "beta")?,
            grid: self.grid.or(file.grid).unwrap_or(1000),
            cdf_grid: self.cdf_grid.or(file.cdf_grid),
            out: require(self.out.or(file.out), "out")?,
        })
    }
}

#[derive(Args, Deserialize, Default)]
#[serde(default)]
pub struct PartitionArgs {
    /// Canonical pattern: 231 or 321.
    #[arg(long, value_parser = parse_canonical)]
    pub pattern: Option<CanonicalPattern>,
    #[arg(long, allow_hyphen_values = true)]
    pub beta: Option<f64>,
    /// Comma-separated sizes, e.g. 512,1024,2048.
    #[arg(long, value_delimiter = ',')]
    pub n_list: Option<Vec<usize>>,
    /// Doubling sizes 2, 4, ... up to this bound (alternative to --n-list).
    #[arg(long)]
    pub n_max: Option<usize>,
    /// Also write exact big-integer polynomials (sizes capped at 60).
    #[arg(long, num_args = 0..=1, default_missing_value = "true")]
    pub exact: Option<bool>,
    /// Output directory (partition.csv and poly_*.csv).
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    #[serde(skip)]
    pub config: Option<PathBuf>,
}

pub struct PartitionResolved {
    pub pattern: CanonicalPattern,
    pub beta: f64,
    pub sizes: Vec<usize>,
    pub exact: bool,
    pub out: PathBuf,
}

impl PartitionArgs {
    pub fn resolve(self) -> Result<PartitionResolved, CliError> {
        let file: PartitionArgs = overlay(&self.config)?;
        let n_list = self.n_list.or(file.n_list);
        let n_max = self.n_max.or(file.n_max);
        let sizes = match (n_list, n_max) {
            (Some(list), None) => list,
            (None, Some(bound)) => {
                let mut sizes = Vec::new();
                let mut n = 2usize;
                while n <= bound {
                    sizes.push(n);
                    n *= 2;
                }
                sizes
            }
            (Some(_), Some(_)) => {
                return Err(CliError::Usage("--n-list and --n-max are exclusive".into()))
            }
            (None, None) => return Err(CliError::Usage("need --n-list or --n-max".into())),
        };
        if sizes.is_empty() || sizes.contains(&0) {
            return Err(CliError::Usage("sizes must be positive".into()));
        }
        Ok(PartitionResolved {
            pattern: require(self.pattern.or(file.pattern), "pattern")?,
            beta: require(self.beta.or(file.beta), "beta")?,
            sizes,
            exact: self.exact.or(file.exact).unwrap_or(false),
            out: require(self.out.or(file.out), "out")?,
        })
    }
}

#[derive(Args, Deserialize, Default)]
#[serde(default)]
pub struct CompareArgs {
    /// Input permutation file (CSV `i,sigma_i` or one-line format).
    #[arg(long)]
    pub input: Option<PathBuf>,
    /// Canonical pattern: 231 or 321.
    #[arg(long, value_parser = parse_canonical)]
    pub pattern: Option<CanonicalPattern>,
    #[arg(long, allow_hyphen_values = true)]
    pub beta: Option<f64>,
    /// Grid resolution for the permuton-CDF distance.
    #[arg(long)]
    pub grid: Option<usize>,
    /// Output diagnostics JSON path.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    #[serde(skip)]
    pub config: Option<PathBuf>,
}

pub struct CompareResolved {
    pub input: PathBuf,
    pub pattern: CanonicalPattern,
    pub beta: f64,
    pub grid: usize,
    pub out: PathBuf,
}

impl CompareArgs {
    pub fn resolve(self) -> Result<CompareResolved, CliError> {
        let file: CompareArgs = overlay(&self.config)?;
        Ok(CompareResolved {
            input: require(self.input.or(file.input), "input")?,
            pattern: require(self.pattern.or(file.pattern), "pattern")?,
            beta: require(self.beta.or(file.beta), "beta")?,
            grid: self.grid.or(file.grid).unwrap_or(mallows_avoid::permuton::DEFAULT_GRID),
            out: require(self.out.or(file.out), "out")?,
        })
    }
}

#[derive(Args, Deserialize, Default)]
#[serde(default)]
pub struct ValidateArgs {
    /// Largest size for the exhaustive suites.
    #[arg(long)]
    pub n_max: Option<usize>,
    /// Optional report JSON path.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    #[serde(skip)]
    pub config: Option<PathBuf>,
}
