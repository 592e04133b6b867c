use proptest::prelude::*;
use trigroup_core::collapse::{Budget, Outcome};
use trigroup_core::threshold::boost::{boost_trial, default_r_fixed, BoostConfig};
use trigroup_core::threshold::estimate::{estimate_h, estimate_h_exhaustive, Counts, HEstimate};
use trigroup_core::threshold::sweep::{curve_from_trials, sweep_trial};

proptest! {
    #[test]
    fn estimate_brackets_are_ordered(t in 0u64..500, nt in 0u64..500, u in 0u64..500) {
        prop_assume!(t + nt + u > 0);
        let e = HEstimate::from_counts(3, 0.1, Counts { trivial: t, nontrivial: nt, undecided: u });
        prop_assert!(e.lower <= e.upper);
        prop_assert!((e.lower + e.nontrivial() + e.undecided - 1.0).abs() < 1e-12);
        prop_assert!((e.upper - e.lower - e.undecided).abs() < 1e-12);
        prop_assert!(e.ci_lower.0 <= e.lower && e.lower <= e.ci_lower.1);
        prop_assert!(e.ci_upper.0 <= e.upper && e.upper <= e.ci_upper.1);
    }

    #[test]
    fn coupled_indicators_are_monotone(n in 3u32..=8, seed in any::<u64>(), trial in 0u64..1000) {
        let grid: Vec<f64> = (1..=12).map(|i| 0.05 * i as f64).collect();
        let budget = Budget { cascade: true, abelianization: true, max_cosets: 0 };
        let t = sweep_trial(n, &grid, &budget, seed, trial);
        // with enumeration off every verdict comes from monotone stages
        prop_assert!(t.raw_monotone(), "{:?}", t.outcomes);
    }

    #[test]
    fn adding_relators_never_loses_triviality(seed in any::<u64>(), trial in 0u64..100, eps in 0.0f64..2.0) {
        let cfg = BoostConfig {
            n: 6,
            p: 0.03,
            eps,
            r_fixed: default_r_fixed(),
            trials: 1,
            seed,
            budget: Budget { cascade: true, abelianization: true, max_cosets: 0 },
        };
        let t = boost_trial(&cfg, trial);
        if t.base == Outcome::Trivial {
            prop_assert_eq!(t.fixed, Outcome::Trivial);
            prop_assert_eq!(t.sprinkled, Outcome::Trivial);
        }
        if t.fixed == Outcome::Trivial {
            prop_assert_eq!(t.strong, Outcome::Trivial);
        }
    }
}

#[test]
fn exhaustive_and_sampled_agree_at_one_generator() {
    let budget = Budget::default();
    for p in [0.1, 0.5, 0.9] {
        let exact = estimate_h_exhaustive(1, p, &budget).unwrap();
        assert_eq!((exact.lower, exact.upper), (0.0, 0.0));
        let mc = estimate_h(1, p, 200, &budget, 5);
        assert!(mc.ci_upper.0 <= exact.upper && exact.upper <= mc.ci_upper.1);
    }
    assert!(estimate_h_exhaustive(2, 0.5, &budget).is_none());
}

#[test]
fn synthetic_curve_has_ordered_window() {
    let grid: Vec<f64> = (1..=20).map(|i| 0.01 * i as f64).collect();
    let budget = Budget::default();
    let trials: Vec<_> = (0..40).map(|t| sweep_trial(12, &grid, &budget, 3, t)).collect();
    let curve = curve_from_trials(12, &grid, &trials, 3);
    for w in curve.points.windows(2) {
        assert!(w[0].estimate.lower <= w[1].estimate.lower);
    }
    if let Some(w) = curve.window {
        assert!(w.p10 <= w.p50 && w.p50 <= w.p90);
    }
}
