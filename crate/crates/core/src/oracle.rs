//! Exhaustive small-n ground truth: enumeration of avoiders, exact tilted
//! distributions, exact ball probabilities, and the cross-module validation
//! suites.

use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use crate::dyck::{self, DyckPath};
use crate::perm::{CanonicalPattern, Pattern3, Permutation};
use crate::permuton::{Excursion, MeasurePairD};
use crate::{Error, Result};

/// Hard cap on exhaustive enumeration (C_14 = 2,674,440).
pub const ENUMERATION_CAP: usize = 14;

/// n-th Catalan number as u64 (valid for n <= 33).
pub fn catalan_u64(n: usize) -> u64 {
    let mut c: u128 = 1;
    for i in 0..n as u128 {
        c = c * 2 * (2 * i + 1) / (i + 2);
    }
    c as u64
}

/// All n! permutations of size n, for brute-force cross-checks.
pub fn all_permutations(n: usize) -> Vec<Permutation> {
    let mut out = Vec::new();
    let mut values: Vec<u32> = (1..=n as u32).collect();
    heap_permutations(&mut values, n, &mut out);
    out
}

fn heap_permutations(values: &mut Vec<u32>, k: usize, out: &mut Vec<Permutation>) {
    if k <= 1 {
        out.push(Permutation::new(values.clone()).expect("valid by construction"));
        return;
    }
    for i in 0..k {
        heap_permutations(values, k - 1, out);
        if k.is_multiple_of(2) {
            values.swap(i, k - 1);
        } else {
            values.swap(0, k - 1);
        }
    }
}

/// All `pattern`-avoiding permutations of size n, generated by decoding the
/// C_n Dyck paths in lexicographic word order (not by filtering n!).
pub fn enumerate_avoiders(pattern: CanonicalPattern, n: usize) -> Result<Vec<Permutation>> {
    if n > ENUMERATION_CAP {
        return Err(Error::SizeCap {
            n,
            cap: ENUMERATION_CAP,
        });
    }
    Ok(dyck::enumerate_dyck_paths(n)
        .iter()
        .map(|d| dyck::dyck_to_perm(pattern, d))
        .collect())
}

/// The exact law of the size-n Mallows permutation conditioned to avoid
/// `pattern`: probabilities proportional to `e^{(beta/n) inv(sigma)}` over
/// the enumerated support.
#[derive(Debug, Clone)]
pub struct ExactDistribution {
    pub support: Vec<Permutation>,
    pub probabilities: Vec<f64>,
    pub beta: f64,
    pub pattern: CanonicalPattern,
}

impl ExactDistribution {
    pub fn probability_of(&self, p: &Permutation) -> f64 {
        self.support
            .iter()
            .position(|q| q == p)
            .map(|i| self.probabilities[i])
            .unwrap_or(0.0)
    }

    /// Expected inversion count under the law.
    pub fn mean_inversions(&self) -> f64 {
        self.support
            .iter()
            .zip(&self.probabilities)
            .map(|(p, &pr)| p.inversions() as f64 * pr)
            .sum()
    }

    /// Total-variation distance to an empirical sample of permutations.
    pub fn tv_distance_to_counts(&self, counts: &std::collections::HashMap<Vec<u32>, u64>) -> f64 {
        let total: u64 = counts.values().sum();
        let mut tv = 0.0;
        let mut seen_mass = 0u64;
        for (p, &pr) in self.support.iter().zip(&self.probabilities) {
            let c = counts.get(p.as_slice()).copied().unwrap_or(0);
            seen_mass += c;
            tv += (c as f64 / total as f64 - pr).abs();
        }
        // mass on permutations outside the support (should be none)
        tv += (total - seen_mass) as f64 / total as f64;
        tv / 2.0
    }
}

/// Exact tilted law at size n. `beta = 0` gives the uniform law on the C_n
/// avoiders.
pub fn exact_tilted(pattern: CanonicalPattern, n: usize, beta: f64) -> Result<ExactDistribution> {
    let support = enumerate_avoiders(pattern, n)?;
    let log_q = beta / n as f64;
    let log_weights: Vec<f64> = support
        .iter()
        .map(|p| log_q * p.inversions() as f64)
        .collect();
    let max = log_weights.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let weights: Vec<f64> = log_weights.iter().map(|&w| (w - max).exp()).collect();
    let z: f64 = weights.iter().sum();
    Ok(ExactDistribution {
        probabilities: weights.iter().map(|w| w / z).collect(),
        support,
        beta,
        pattern,
    })
}

/// Metric for exact ball probabilities.
#[derive(Debug, Clone)]
pub enum BallCenter {
    /// Sup-norm ball around an excursion, evaluated on the 2n+1 grid
    /// (231 pipeline).
    ExcursionSup(Excursion),
    /// Pair-Kolmogorov ball around a measure pair on the n-grid
    /// (321 pipeline).
    PairKolmogorov(MeasurePairD),
}

/// Exact probability, under the tilted law, that the empirical statistic of
/// the permutation lies within `eps` of the center.
pub fn exact_ball_probability(
    pattern: CanonicalPattern,
    n: usize,
    beta: f64,
    center: &BallCenter,
    eps: f64,
) -> Result<f64> {
    let dist = exact_tilted(pattern, n, beta)?;
    let mut prob = 0.0;
    for (p, &pr) in dist.support.iter().zip(&dist.probabilities) {
        let d = match center {
            BallCenter::ExcursionSup(center) => {
                let phi = crate::permuton::empirical_excursion(pattern, p)?;
                phi.sup_distance(center)?
            }
            BallCenter::PairKolmogorov(center) => {
                let pair = crate::permuton::empirical_measure_pair(p)?;
                pair.kolmogorov_distance(center)?
            }
        };
        if d <= eps {
            prob += pr;
        }
    }
    Ok(prob)
}

/// Outcome of one validation suite.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SuiteResult {
    pub suite: String,
    pub n: usize,
    pub cases: u64,
    pub failures: u64,
    pub first_counterexample: Option<String>,
}

impl SuiteResult {
    fn new(suite: &str, n: usize) -> Self {
        Self {
            suite: suite.to_string(),
            n,
            cases: 0,
            failures: 0,
            first_counterexample: None,
        }
    }

    fn record(&mut self, ok: bool, counterexample: impl FnOnce() -> String) {
        self.cases += 1;
        if !ok {
            self.failures += 1;
            if self.first_counterexample.is_none() {
                self.first_counterexample = Some(counterexample());
            }
        }
    }
}

/// Full validation report, serializable as JSON.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ValidationReport {
    pub n_max: usize,
    pub suites: Vec<SuiteResult>,
}

impl ValidationReport {
    pub fn total_failures(&self) -> u64 {
        self.suites.iter().map(|s| s.failures).sum()
    }

    pub fn passed(&self) -> bool {
        self.total_failures() == 0
    }
}

/// Runs every exhaustive cross-module invariant suite up to `n_max`
/// (default 8). Suites are listed in the report in a fixed order so runs
/// are diffable.
pub fn validate_all(n_max: usize) -> Result<ValidationReport> {
    let n_max = n_max.min(ENUMERATION_CAP);
    let suites = vec![
        catalan_counts_suite(n_max)?,
        enumeration_complete_suite(n_max.min(7)),
        round_trip_suite(n_max)?,
        inversion_formula_suite(n_max)?,
        rlm_encoding_suite(n_max)?,
        staircase_suite(n_max.min(7)),
        avoidance_suite(n_max.min(7)),
        symmetry_suite(n_max.min(6)),
        delta_suite(n_max, &dyck::delta_inv),
        detailed_balance_suite(n_max.min(6), 2.0),
        measure_pair_suite(n_max)?,
        rlm_permuton_suite(n_max)?,
    ];
    Ok(ValidationReport { n_max, suites })
}

fn catalan_counts_suite(n_max: usize) -> Result<SuiteResult> {
    let mut r = SuiteResult::new("catalan_counts", n_max);
    for n in 1..=n_max {
        for pattern in CanonicalPattern::BOTH {
            let avoiders = enumerate_avoiders(pattern, n)?;
            let expected = catalan_u64(n);
            r.record(avoiders.len() as u64 == expected, || {
                format!("{pattern} n={n}: {} != C_n = {expected}", avoiders.len())
            });
        }
    }
    Ok(r)
}

/// Enumeration is duplicate-free and matches filtering all n! permutations.
fn enumeration_complete_suite(n_max: usize) -> SuiteResult {
    let mut r = SuiteResult::new("enumeration_complete", n_max);
    for n in 1..=n_max {
        let everyone = all_permutations(n);
        for pattern in CanonicalPattern::BOTH {
            let enumerated = enumerate_avoiders(pattern, n).expect("within cap");
            let set: HashSet<_> = enumerated.iter().map(|p| p.as_slice().to_vec()).collect();
            r.record(set.len() == enumerated.len(), || {
                format!("{pattern} n={n}: duplicates in enumeration")
            });
            let filtered: HashSet<_> = everyone
                .iter()
                .filter(|p| p.avoids(pattern.as_pattern()))
                .map(|p| p.as_slice().to_vec())
                .collect();
            r.record(set == filtered, || {
                format!("{pattern} n={n}: enumeration differs from n! filter")
            });
        }
    }
    r
}

fn round_trip_suite(n_max: usize) -> Result<SuiteResult> {
    let mut r = SuiteResult::new("bijection_round_trips", n_max);
    for n in 1..=n_max {
        for d in dyck::enumerate_dyck_paths(n) {
            for pattern in CanonicalPattern::BOTH {
                let p = dyck::dyck_to_perm(pattern, &d);
                let ok = p.avoids(pattern.as_pattern())
                    && dyck::perm_to_dyck(pattern, &p)? == d;
                r.record(ok, || format!("{pattern} path {}", d.to_word()));
            }
        }
    }
    Ok(r)
}

fn inversion_formula_suite(n_max: usize) -> Result<SuiteResult> {
    let mut r = SuiteResult::new("inversion_formulas", n_max);
    for n in 1..=n_max {
        for d in dyck::enumerate_dyck_paths(n) {
            for pattern in CanonicalPattern::BOTH {
                let p = dyck::dyck_to_perm(pattern, &d);
                let ok = dyck::inv_from_dyck(pattern, &d) == p.inversions();
                r.record(ok, || format!("{pattern} path {}", d.to_word()));
            }
        }
    }
    Ok(r)
}

fn rlm_encoding_suite(n_max: usize) -> Result<SuiteResult> {
    let mut r = SuiteResult::new("rlm_encoding_invariants", n_max);
    for n in 1..=n_max {
        for p in enumerate_avoiders(CanonicalPattern::P321, n)? {
            let m = p.strict_rl_minima();
            let ok = m.check().is_ok() && m.to_permutation() == p;
            r.record(ok, || format!("{p:?}"));
        }
    }
    Ok(r)
}

fn staircase_suite(n_max: usize) -> SuiteResult {
    let mut r = SuiteResult::new("staircase_properties", n_max);
    for n in 1..=n_max {
        for p in all_permutations(n) {
            let f = p.rlm_staircase();
            let ok = f[n] == n as u32
                && (0..n).all(|x| f[x] <= x as u32)
                && (0..n).all(|x| f[x] <= f[x + 1]);
            r.record(ok, || format!("{p:?} staircase {f:?}"));
        }
    }
    r
}

fn avoidance_suite(n_max: usize) -> SuiteResult {
    let mut r = SuiteResult::new("avoids_iff_zero_occurrences", n_max);
    for n in 1..=n_max {
        for p in all_permutations(n) {
            for pat in Pattern3::ALL {
                let ok = p.avoids(pat) == (p.occurrences(&pat.one_line()) == 0);
                r.record(ok, || format!("{pat} on {p:?}"));
            }
        }
    }
    r
}

fn symmetry_suite(n_max: usize) -> SuiteResult {
    let mut r = SuiteResult::new("symmetry_bijections", n_max);
    for n in 1..=n_max {
        let everyone = all_permutations(n);
        for pat in Pattern3::ALL {
            let canon = pat.canonical().as_pattern();
            let mut images = HashSet::new();
            let mut avoiders = 0usize;
            let mut ok = true;
            for p in &everyone {
                if p.avoids(pat) {
                    avoiders += 1;
                    let q = crate::perm::symmetry_apply(pat, p);
                    ok &= q.avoids(canon);
                    images.insert(q.as_slice().to_vec());
                }
            }
            ok &= images.len() == avoiders && avoiders as u64 == catalan_u64(n);
            r.record(ok, || format!("{pat} n={n}"));
        }
    }
    r
}

/// Delta-rule suite, parameterized over the delta function so the harness
/// itself can be mutation-tested.
pub fn delta_suite(
    n_max: usize,
    delta: &dyn Fn(CanonicalPattern, &DyckPath, usize) -> i64,
) -> SuiteResult {
    let mut r = SuiteResult::new("delta_consistency", n_max);
    for n in 1..=n_max {
        for d in dyck::enumerate_dyck_paths(n) {
            for pattern in CanonicalPattern::BOTH {
                let inv = dyck::inv_from_dyck(pattern, &d) as i64;
                for i in 1..2 * n {
                    let expected = dyck::inv_from_dyck(pattern, &d.flip(i)) as i64 - inv;
                    let got = delta(pattern, &d, i);
                    r.record(got == expected, || {
                        format!("{pattern} d={} i={i}: got {got}, want {expected}", d.to_word())
                    });
                }
            }
        }
    }
    r
}

/// Exact one-step kernel check: `q^inv(d) P(d -> d') = q^inv(d') P(d' -> d)`
/// for every acting flip pair, where P is computed from the acceptance rule.
fn detailed_balance_suite(n_max: usize, beta: f64) -> SuiteResult {
    let mut r = SuiteResult::new("detailed_balance", n_max);
    for n in 1..=n_max {
        let log_q = beta / n as f64;
        for d in dyck::enumerate_dyck_paths(n) {
            for pattern in CanonicalPattern::BOTH {
                let inv_d = dyck::inv_from_dyck(pattern, &d) as f64;
                for i in 1..2 * n {
                    let e = d.flip(i);
                    if e == d {
                        continue;
                    }
                    let delta = dyck::delta_inv(pattern, &d, i) as f64;
                    let accept_fwd = (log_q * delta).min(0.0).exp();
                    let accept_bwd = (-log_q * delta).min(0.0).exp();
                    // the 1/(2n-1) proposal factor cancels
                    let lhs = (log_q * inv_d).exp() * accept_fwd;
                    let rhs = (log_q * (inv_d + delta)).exp() * accept_bwd;
                    let ok = (lhs - rhs).abs() <= 1e-12 * lhs.abs().max(rhs.abs()).max(1.0);
                    r.record(ok, || {
                        format!("{pattern} d={} i={i}: {lhs} vs {rhs}", d.to_word())
                    });
                }
            }
        }
    }
    r
}

fn measure_pair_suite(n_max: usize) -> Result<SuiteResult> {
    let mut r = SuiteResult::new("measure_pair_domination", n_max);
    for n in 1..=n_max {
        for p in enumerate_avoiders(CanonicalPattern::P321, n)? {
            let ok = crate::permuton::empirical_measure_pair(&p).is_ok();
            r.record(ok, || format!("{p:?}"));
        }
    }
    Ok(r)
}

/// Round trip between staircases of 231-avoiders and grid permutons:
/// extracting the RLM curve of the permuton built from the staircase
/// recovers the staircase at the n-grid.
fn rlm_permuton_suite(n_max: usize) -> Result<SuiteResult> {
    let mut r = SuiteResult::new("rlm_permuton_round_trip", n_max);
    for n in 1..=n_max {
        for p in enumerate_avoiders(CanonicalPattern::P231, n)? {
            let curve = crate::permuton::RlmCurve::from_staircase(&p.rlm_staircase());
            let grid = crate::permuton::permuton_from_rlm(&curve, 4 * n)?;
            let tol = 1.0 / (2.0 * n as f64);
            let mut ok = true;
            for (x, &fx) in p.rlm_staircase().iter().enumerate() {
                let recovered =
                    grid.rlm_curve_at(x as f64 / n as f64, crate::permuton::DEFAULT_TOL_MASS);
                let expected = fx as f64 / n as f64;
                ok &= (recovered - expected).abs() <= tol + 1e-12;
            }
            r.record(ok, || format!("{p:?}"));
        }
    }
    Ok(r)
}
