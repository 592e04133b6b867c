use proptest::prelude::*;
use trigroup_core::collapse::{
    cascade_close, coset_enumerate, decide, verify, Budget, CosetOutcome, Outcome, StageReport, Term,
};
use trigroup_core::presentation::RelatorSpace;
use trigroup_core::relator::reduction_failure;
use trigroup_core::rng::{Purpose, Stream};
use trigroup_core::sampling::CoupledSample;
use trigroup_core::{sample_presentation, Letter, Presentation, SampleConfig};

fn all_words(n: u32) -> impl Iterator<Item = [Letter; 3]> {
    let alpha: Vec<Letter> = Letter::alphabet(n).collect();
    let a2 = alpha.clone();
    let a3 = alpha.clone();
    alpha
        .into_iter()
        .flat_map(move |a| a2.clone().into_iter().map(move |b| (a, b)))
        .flat_map(move |(a, b)| a3.clone().into_iter().map(move |c| [a, b, c]))
}

#[test]
fn relator_space_matches_filtered_words() {
    for n in 1..=4u32 {
        let space = RelatorSpace::new(n);
        let brute = all_words(n).filter(|w| reduction_failure(*w).is_none()).count() as u64;
        let n64 = u64::from(n);
        assert_eq!(brute, 2 * n64 * (4 * n64 * n64 + 3 - 6 * n64));
        assert_eq!(space.count(), brute);
        let listed: Vec<_> = space.iter().collect();
        assert_eq!(listed.len() as u64, brute);
        assert!(listed.windows(2).all(|w| w[0] < w[1]));
    }
}

#[test]
fn sample_sizes_follow_binomial_mean() {
    // n = 3, p = 0.1: |R| ~ Bin(126, 0.1)
    let total: usize = (0..1000u64)
        .map(|seed| sample_presentation(&SampleConfig::new(3, 0.1, seed)).len())
        .sum();
    let mean = total as f64 / 1000.0;
    let sigma = (126.0 * 0.1 * 0.9 / 1000.0f64).sqrt();
    assert!((mean - 12.6).abs() < 3.0 * sigma, "mean {mean}");
}

fn presentation() -> impl Strategy<Value = Presentation> {
    (1u32..=4, 0.0f64..0.25, any::<u64>()).prop_map(|(n, p, seed)| sample_presentation(&SampleConfig::new(n, p, seed)))
}

fn terms(n: u32) -> Vec<Term> {
    core::iter::once(Term::Identity)
        .chain(Letter::alphabet(n).map(Term::Letter))
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn cascade_is_involution_closed(p in presentation()) {
        prop_assert!(cascade_close(&p).involution_closed());
    }

    #[test]
    fn cascade_is_monotone(p in presentation(), seed in any::<u64>(), q in 0.0f64..0.2) {
        let extra = sample_presentation(&SampleConfig::new(p.n(), q, seed));
        let bigger = p.union(&extra);
        let small = cascade_close(&p);
        let large = cascade_close(&bigger);
        let ts = terms(p.n());
        for &a in &ts {
            for &b in &ts {
                if small.equivalent(a, b) {
                    prop_assert!(large.equivalent(a, b), "{a} ~ {b} lost");
                }
            }
        }
        prop_assert!(!small.is_trivial() || large.is_trivial());
    }

    #[test]
    fn stages_never_contradict(p in presentation()) {
        let report = StageReport::run(&p, &[], 100_000);
        prop_assert!(report.contradictions().is_empty(), "{:?}", report.contradictions());
    }

    #[test]
    fn verdicts_carry_valid_certificates(p in presentation(), cascade in any::<bool>()) {
        let budget = Budget { cascade, abelianization: true, max_cosets: 2_000 };
        let v = decide(&p, &budget);
        prop_assert!(verify(&p, &v).is_ok());
        if v.outcome == Outcome::Undecided {
            prop_assert_eq!(v.certificate, trigroup_core::collapse::Certificate::None);
        }
    }

    #[test]
    fn coupled_sets_are_nested(n in 1u32..=4, seed in any::<u64>(), a in 0.0f64..1.0, b in 0.0f64..1.0) {
        let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
        let s = CoupledSample::draw(n, 1.0, false, &mut Stream::new(seed, Purpose::Relators, 0));
        prop_assert!(s.at(lo).is_subset_of(&s.at(hi)));
        prop_assert_eq!(s.at(hi), sample_presentation(&SampleConfig::new(n, hi, seed)));
    }

    #[test]
    fn sampling_is_reproducible(n in 1u32..=5, p in 0.0f64..=1.0, seed in any::<u64>()) {
        let cfg = SampleConfig::new(n, p, seed);
        prop_assert_eq!(sample_presentation(&cfg), sample_presentation(&cfg));
    }
}

#[test]
fn trivial_cascade_agrees_with_enumeration() {
    let budget = Budget::default();
    let mut checked = 0;
    for seed in 0..300u64 {
        let p = sample_presentation(&SampleConfig::new(2 + (seed % 3) as u32, 0.08, seed));
        if cascade_close(&p).is_trivial() {
            assert_eq!(coset_enumerate(&p, 100_000).outcome, CosetOutcome::Finite(1));
            checked += 1;
        }
        assert!(verify(&p, &decide(&p, &budget)).is_ok());
    }
    assert!(checked > 20, "only {checked} cascade-trivial samples");
}
