//! Property tests over randomized inputs. Avoider-valued strategies go
//! through the Dyck bijections (a shuffled permutation's staircase is a
//! valid path), so the generators never need rejection sampling.

use proptest::prelude::*;

use mallows_avoid::dyck::{self, DyckPath};
use mallows_avoid::perm::{CanonicalPattern, Pattern3, Permutation, Symmetry};
use mallows_avoid::permuton::{self, StepMeasure};

fn arb_permutation(max_n: usize) -> impl Strategy<Value = Permutation> {
    (1..=max_n).prop_flat_map(|n| {
        Just((1..=n as u32).collect::<Vec<u32>>())
            .prop_shuffle()
            .prop_map(|values| Permutation::new(values).unwrap())
    })
}

/// A Dyck path derived from a random permutation's staircase.
fn arb_dyck(max_n: usize) -> impl Strategy<Value = DyckPath> {
    arb_permutation(max_n).prop_map(|p| {
        let f = p.rlm_staircase();
        let mut steps = Vec::with_capacity(2 * p.len());
        for x in 0..p.len() {
            steps.push(1i8);
            for _ in f[x]..f[x + 1] {
                steps.push(-1);
            }
        }
        DyckPath::new(steps).unwrap()
    })
}

fn arb_subuniform(cells: usize) -> impl Strategy<Value = StepMeasure> {
    proptest::collection::vec(0.0f64..=1.0, cells)
        .prop_map(|densities| StepMeasure::new(densities).unwrap())
}

proptest! {
    #[test]
    fn inversions_match_occurrences_of_21(p in arb_permutation(30)) {
        prop_assert_eq!(p.inversions(), p.occurrences(&[2, 1]));
    }

    #[test]
    fn avoidance_scan_matches_naive_count(p in arb_permutation(12)) {
        for pat in Pattern3::ALL {
            prop_assert_eq!(p.avoids(pat), p.occurrences(&pat.one_line()) == 0);
        }
    }

    #[test]
    fn symmetries_are_involutions_and_preserve_or_flip_inversions(p in arb_permutation(25)) {
        let n = p.len() as u64;
        let total = n * (n - 1) / 2;
        for s in [Symmetry::Reverse, Symmetry::Complement, Symmetry::ReverseComplement] {
            let q = s.apply(&p);
            prop_assert_eq!(&s.apply(&q), &p);
            let expected = if s.flips_inversions() {
                total - p.inversions()
            } else {
                p.inversions()
            };
            prop_assert_eq!(q.inversions(), expected);
        }
    }

    #[test]
    fn flip_preserves_dyck_and_is_involutive(d in arb_dyck(20), i_raw in 1usize..1000) {
        let i = 1 + (i_raw % (2 * d.size() - 1).max(1));
        let e = d.flip(i);
        prop_assert!(DyckPath::new(e.steps().to_vec()).is_ok());
        if e != d {
            prop_assert_eq!(e.flip(i), d);
        }
    }

    #[test]
    fn delta_matches_recomputation_on_random_paths(d in arb_dyck(20), i_raw in 1usize..1000) {
        let i = 1 + (i_raw % (2 * d.size() - 1).max(1));
        for pattern in CanonicalPattern::BOTH {
            let expected = dyck::inv_from_dyck(pattern, &d.flip(i)) as i64
                - dyck::inv_from_dyck(pattern, &d) as i64;
            prop_assert_eq!(dyck::delta_inv(pattern, &d, i), expected);
        }
    }

    #[test]
    fn bijections_round_trip_on_random_paths(d in arb_dyck(24)) {
        for pattern in CanonicalPattern::BOTH {
            let p = dyck::dyck_to_perm(pattern, &d);
            prop_assert!(p.avoids(pattern.as_pattern()));
            prop_assert_eq!(&dyck::perm_to_dyck(pattern, &p).unwrap(), &d);
            prop_assert_eq!(
                dyck::inv_from_dyck(pattern, &d),
                p.inversions()
            );
        }
    }

    #[test]
    fn staircase_bounds(p in arb_permutation(40)) {
        let f = p.rlm_staircase();
        let n = p.len();
        prop_assert_eq!(f[n], n as u32);
        for x in 0..n {
            prop_assert!(f[x] <= x as u32);
            prop_assert!(f[x] <= f[x + 1]);
        }
    }

    #[test]
    fn empirical_excursions_are_valid(d in arb_dyck(24)) {
        let phi = permuton::excursion_of_dyck(&d);
        // the constructor re-validates endpoint, positivity and Lipschitz
        prop_assert!(permuton::Excursion::new(phi.values().to_vec()).is_ok());
        prop_assert!(phi.sup_norm() <= 0.5 + 1e-12);
    }

    #[test]
    fn quantile_is_a_right_inverse_of_the_cdf(m in arb_subuniform(32), u01 in 0.01f64..0.99) {
        prop_assume!(m.mass() > 1e-6);
        let u = u01 * m.mass();
        let x = m.quantile(u).unwrap();
        // cdf(quantile(u)) = u wherever the CDF is continuous (it always
        // is here), and the sup convention picks the rightmost preimage
        prop_assert!((m.cdf(x) - u).abs() < 1e-9);
        if x < 1.0 - 1e-9 {
            prop_assert!(m.cdf((x + 1e-7).min(1.0)) >= u - 1e-9);
        }
    }

    #[test]
    fn coupling_projections_match_marginals(
        m1 in arb_subuniform(16),
        m2 in arb_subuniform(16),
    ) {
        prop_assume!(m1.mass() > 0.05 && m2.mass() > 0.05);
        // rescale the second to equal mass by scaling densities
        let scale = m1.mass() / m2.mass();
        prop_assume!(scale <= 1.0);
        let m2 = StepMeasure::new(m2.cells().iter().map(|&c| c * scale).collect()).unwrap();
        let coupling = permuton::monotone_coupling(&m1, &m2, 1 << 14).unwrap();
        // support is nondecreasing
        for w in coupling.points.windows(2) {
            prop_assert!(w[1].0 >= w[0].0 - 1e-12);
            prop_assert!(w[1].1 >= w[0].1 - 1e-12);
        }
        let (p1, p2) = coupling.projections(16);
        prop_assert!(p1.kolmogorov_distance(&m1).unwrap() < 5e-3);
        prop_assert!(p2.kolmogorov_distance(&m2).unwrap() < 5e-3);
    }

    #[test]
    fn tilted_sampler_outputs_avoid_their_pattern(
        seed in 0u64..1000,
        beta in -4.0f64..4.0,
    ) {
        use mallows_avoid::sampler::{run_chain, RunConfig};
        for pattern in CanonicalPattern::BOTH {
            let cfg = RunConfig::new(pattern, 24, beta, 4000, seed);
            let (record, _) = run_chain(&cfg).unwrap();
            prop_assert!(record.final_permutation.avoids(pattern.as_pattern()));
        }
    }
}
