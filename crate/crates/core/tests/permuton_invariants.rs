//! Cross-representation permuton invariants: the coupling-sum map against
//! pattern densities, the two constructions of a 231-avoider's permuton,
//! bicontinuity under excursion perturbations, and convexity probes for
//! the actions.

use mallows_avoid::perm::{CanonicalPattern, Permutation};
use mallows_avoid::permuton::{
    self, pattern_density_mc, permuton_from_rlm, psi_with, CellVariant, Excursion, GridSampler,
    PointSampler, RlmCurve,
};
use mallows_avoid::theory::{
    action_231, action_321, minimizer_231, minimizer_321, rate_h231, rate_h321,
};
use mallows_avoid::{oracle, rng};

/// The coupling-sum of a valid pair is a permuton whose 321 density
/// vanishes up to grid resolution.
#[test]
fn psi_output_is_a_321_avoiding_permuton() {
    let pair = minimizer_321(3.0, 1024);
    let grid = psi_with(&pair, 256, 1 << 16).unwrap();
    grid.check_invariants(5e-3).unwrap();
    let sampler = GridSampler::new(&grid);
    let mut rng = rng::derive_rng(17, 0);
    let est = pattern_density_mc(&[3, 2, 1], &sampler, 200_000, &mut rng);
    // mass is spread uniformly inside grid cells, so a small density of
    // order 1/G survives discretization
    assert!(
        est.estimate < 0.02,
        "dens(321) = {} +- {}",
        est.estimate,
        est.std_error
    );
}

/// For a 231-avoiding permutation, the antidiagonal-cell permuton IS the
/// unique permuton with the permutation's staircase as RLM curve, so the
/// two independent constructions must agree at the grid nodes.
#[test]
fn antidiagonal_variant_equals_rlm_construction() {
    for n in 1..=6 {
        for p in oracle::enumerate_avoiders(CanonicalPattern::P231, n).unwrap() {
            let g = 4 * n;
            let from_cells = permuton::permuton_of_perm(&p, CellVariant::Antidiagonal, g);
            let curve = RlmCurve::from_staircase(&p.rlm_staircase());
            let from_corner_formula = permuton_from_rlm(&curve, g).unwrap();
            let d = from_cells.sup_distance(&from_corner_formula).unwrap();
            assert!(d < 1e-9, "{p:?}: sup-CDF {d}");
        }
    }
}

/// Perturbing the excursion by epsilon moves the constructed permuton by
/// at most a few epsilon in sup-CDF, and the deviation shrinks with
/// epsilon (the bicontinuity regression).
#[test]
fn rlm_construction_is_continuous_in_the_excursion() {
    let beta = 2.0;
    let grid = 512usize;
    let g = 128usize;
    let base_phi = Excursion::from_fn(grid, |t| permuton::limit_excursion_231(beta, t));
    let base = permuton_from_rlm(&RlmCurve::from_excursion(&base_phi), g).unwrap();

    let mut last = f64::INFINITY;
    for eps in [0.04, 0.02, 0.01, 0.005] {
        // a fixed-shape bridge scaled to sup-norm eps (slope stays well
        // inside the Lipschitz band at beta=2)
        let perturbed_phi = Excursion::new(
            (0..=grid)
                .map(|k| {
                    let t = k as f64 / grid as f64;
                    (permuton::limit_excursion_231(beta, t)
                        + eps * (std::f64::consts::PI * t).sin().powi(2))
                    .max(0.0)
                })
                .collect(),
        )
        .unwrap();
        assert!((perturbed_phi.sup_distance(&base_phi).unwrap() - eps).abs() < 1e-9);
        let perturbed = permuton_from_rlm(&RlmCurve::from_excursion(&perturbed_phi), g).unwrap();
        let delta = perturbed.sup_distance(&base).unwrap();
        assert!(delta <= 4.0 * eps, "eps={eps}: delta={delta}");
        assert!(delta < last, "delta not shrinking at eps={eps}");
        last = delta;
    }
}

/// Midpoint strict-convexity probes for both actions: random feasible
/// pairs score strictly above their midpoint.
#[test]
fn actions_are_strictly_convex_on_random_pairs() {
    let mut rng = rng::derive_rng(23, 1);
    use rand::Rng as _;
    let beta = 2.0;
    let grid = 256usize;

    for _ in 0..10 {
        let mut draw_excursion = || {
            let a: f64 = rng.random_range(0.1..0.9);
            let k: usize = rng.random_range(1..4);
            Excursion::from_fn(grid, |t| {
                a / (k as f64 * std::f64::consts::PI) * (k as f64 * std::f64::consts::PI * t).sin().abs()
            })
        };
        let u = draw_excursion();
        let v = draw_excursion();
        if u.sup_distance(&v).unwrap() < 1e-6 {
            continue;
        }
        let mid = Excursion::new(
            u.values()
                .iter()
                .zip(v.values())
                .map(|(a, b)| 0.5 * (a + b))
                .collect(),
        )
        .unwrap();
        let lhs = action_231(beta, &mid);
        let rhs = 0.5 * (action_231(beta, &u) + action_231(beta, &v));
        assert!(lhs < rhs, "midpoint convexity: {lhs} vs {rhs}");
        // the rate alone is convex too
        assert!(rate_h231(&mid) <= 0.5 * (rate_h231(&u) + rate_h231(&v)) + 1e-12);
    }

    for trial in 0..10 {
        let mut draw_pair = || {
            let shift: f64 = rng.random_range(-0.2..0.2);
            let b: f64 = rng.random_range(0.5..4.0);
            minimizer_with_tweak(b, shift, grid)
        };
        let u = draw_pair();
        let v = draw_pair();
        let mid = mallows_avoid::permuton::MeasurePairD::new(
            mallows_avoid::permuton::StepMeasure::new(
                u.first
                    .cells()
                    .iter()
                    .zip(v.first.cells())
                    .map(|(a, b)| 0.5 * (a + b))
                    .collect(),
            )
            .unwrap(),
            mallows_avoid::permuton::StepMeasure::new(
                u.second
                    .cells()
                    .iter()
                    .zip(v.second.cells())
                    .map(|(a, b)| 0.5 * (a + b))
                    .collect(),
            )
            .unwrap(),
        )
        .unwrap();
        let gap = 0.5 * (action_321(beta, &u) + action_321(beta, &v)) - action_321(beta, &mid);
        let distinct = u
            .first
            .cells()
            .iter()
            .zip(v.first.cells())
            .any(|(a, b)| (a - b).abs() > 1e-9);
        if distinct {
            assert!(gap > 0.0, "trial {trial}: midpoint gap {gap}");
        }
        assert!(rate_h321(&mid) <= 0.5 * (rate_h321(&u) + rate_h321(&v)) + 1e-12);
    }
}

/// A dominated pair built from the logistic minimizer with the tilt
/// shifted, still valid by construction.
fn minimizer_with_tweak(
    beta: f64,
    shift: f64,
    cells: usize,
) -> mallows_avoid::permuton::MeasurePairD {
    let pair = minimizer_321(beta, cells);
    let squeeze = 1.0 - shift.abs();
    mallows_avoid::permuton::MeasurePairD::new(
        mallows_avoid::permuton::StepMeasure::new(
            pair.first.cells().iter().map(|&r| r * squeeze).collect(),
        )
        .unwrap(),
        mallows_avoid::permuton::StepMeasure::new(
            pair.second.cells().iter().map(|&r| r * squeeze).collect(),
        )
        .unwrap(),
    )
    .unwrap()
}

/// The empirical law of sampled points matches the exact CDF (a DKW-style
/// statistical check at fixed seed).
#[test]
fn curve_permuton_sampler_dkw_check() {
    let mu = permuton::limit_permuton(CanonicalPattern::P321, 3.0);
    let mut rng = rng::derive_rng(31, 0);
    let samples = 1_000_000u64;
    let grid = 10usize;
    let mut hits = vec![0u64; (grid + 1) * (grid + 1)];
    for _ in 0..samples {
        let (x, y) = mu.sample_point(&mut rng);
        for i in 0..=grid {
            for j in 0..=grid {
                if x <= i as f64 / grid as f64 && y <= j as f64 / grid as f64 {
                    hits[i * (grid + 1) + j] += 1;
                }
            }
        }
    }
    // 3/sqrt(N) times a small constant
    let tol = 3.0 / (samples as f64).sqrt() * 2.0;
    for i in 0..=grid {
        for j in 0..=grid {
            let empirical = hits[i * (grid + 1) + j] as f64 / samples as f64;
            let exact = mu.cdf(i as f64 / grid as f64, j as f64 / grid as f64);
            assert!(
                (empirical - exact).abs() < tol,
                "({i}, {j}): {empirical} vs {exact}"
            );
        }
    }
}

/// Identity permutation sanity: both empirical statistics sit at their
/// degenerate limits.
#[test]
fn identity_statistics_are_degenerate()
{
    let id = Permutation::identity(64);
    let phi = permuton::empirical_excursion(CanonicalPattern::P231, &id).unwrap();
    assert!(phi.sup_norm() <= 1.0 / 128.0 + 1e-12);
    let pair = permuton::empirical_measure_pair(&id).unwrap();
    assert_eq!(pair.first.mass(), 0.0);
}
