//! Bracketed estimates of the collapse probability at a single `p`.

use core::ops::AddAssign;

use serde::{Deserialize, Serialize};

use super::stats::{wilson, Z95};
use crate::collapse::{decide, Budget, BudgetSpent, Outcome, Stage};
use crate::presentation::{Presentation, RelatorSpace};
use crate::rng::{Purpose, Stream};
use crate::sampling::CoupledSample;

/// Relator spaces up to this many slots are enumerated instead of sampled.
pub const EXHAUSTIVE_MAX_SLOTS: u64 = 20;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Counts {
    pub trivial: u64,
    pub nontrivial: u64,
    pub undecided: u64,
}

impl Counts {
    pub fn record(&mut self, o: Outcome) {
        match o {
            Outcome::Trivial => self.trivial += 1,
            Outcome::Nontrivial => self.nontrivial += 1,
            Outcome::Undecided => self.undecided += 1,
        }
    }

    pub fn total(&self) -> u64 {
        self.trivial + self.nontrivial + self.undecided
    }
}

impl AddAssign for Counts {
    fn add_assign(&mut self, o: Counts) {
        self.trivial += o.trivial;
        self.nontrivial += o.nontrivial;
        self.undecided += o.undecided;
    }
}

impl FromIterator<Outcome> for Counts {
    fn from_iter<I: IntoIterator<Item = Outcome>>(iter: I) -> Self {
        let mut c = Counts::default();
        for o in iter {
            c.record(o);
        }
        c
    }
}

/// One line of a trial log.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrialRecord {
    pub trial: u64,
    pub seed: u64,
    pub n: u32,
    pub p: f64,
    pub verdict: Outcome,
    pub stage: Stage,
    pub budget_spent: BudgetSpent,
}

/// The relator set of trial `trial` under master `seed`.
pub fn trial_presentation(n: u32, p: f64, seed: u64, trial: u64) -> Presentation {
    let mut s = Stream::new(seed, Purpose::Relators, trial);
    CoupledSample::draw(n, p, false, &mut s).at(p)
}

pub fn run_trial(n: u32, p: f64, budget: &Budget, seed: u64, trial: u64) -> TrialRecord {
    let v = decide(&trial_presentation(n, p, seed, trial), budget);
    TrialRecord {
        trial,
        seed,
        n,
        p,
        verdict: v.outcome,
        stage: v.stage,
        budget_spent: v.budget_spent,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct HEstimate {
    pub n: u32,
    pub p: f64,
    pub trials: u64,
    pub exhaustive: bool,
    pub counts: Counts,
    /// Certified-trivial mass.
    pub lower: f64,
    /// One minus the certified-nontrivial mass.
    pub upper: f64,
    pub undecided: f64,
    pub ci_lower: (f64, f64),
    pub ci_upper: (f64, f64),
    pub ci_undecided: (f64, f64),
}

impl HEstimate {
    pub fn from_counts(n: u32, p: f64, c: Counts) -> Self {
        let t = c.total();
        let frac = |x: u64| if t == 0 { 0.0 } else { x as f64 / t as f64 };
        let (nlo, nhi) = wilson(c.nontrivial, t, Z95);
        HEstimate {
            n,
            p,
            trials: t,
            exhaustive: false,
            counts: c,
            lower: frac(c.trivial),
            upper: frac(c.trivial + c.undecided),
            undecided: frac(c.undecided),
            ci_lower: wilson(c.trivial, t, Z95),
            ci_upper: (1.0 - nhi, 1.0 - nlo),
            ci_undecided: wilson(c.undecided, t, Z95),
        }
    }

    pub fn nontrivial(&self) -> f64 {
        1.0 - self.upper
    }
}

/// Monte Carlo estimate over `trials` independent samples.
pub fn estimate_h(n: u32, p: f64, trials: u64, budget: &Budget, seed: u64) -> HEstimate {
    let c: Counts = (0..trials)
        .map(|t| run_trial(n, p, budget, seed, t).verdict)
        .collect();
    HEstimate::from_counts(n, p, c)
}

/// Exact masses by deciding every relator subset, weighted by its
/// probability. `None` when the space has more than
/// [`EXHAUSTIVE_MAX_SLOTS`] slots.
pub fn estimate_h_exhaustive(n: u32, p: f64, budget: &Budget) -> Option<HEstimate> {
    let space = RelatorSpace::new(n);
    let slots = space.count();
    if slots > EXHAUSTIVE_MAX_SLOTS {
        return None;
    }
    let all: alloc::vec::Vec<_> = space.iter().collect();
    let mut counts = Counts::default();
    let (mut triv, mut undec) = (0.0, 0.0);
    for mask in 0u32..1 << slots {
        let rels = all
            .iter()
            .enumerate()
            .filter(|(i, _)| mask >> i & 1 == 1)
            .map(|(_, r)| *r);
        let pres = Presentation::new(n, rels).expect("relators come from the space");
        let k = mask.count_ones() as i32;
        let w = libm::pow(p, k as f64) * libm::pow(1.0 - p, (slots as i32 - k) as f64);
        let o = decide(&pres, budget).outcome;
        counts.record(o);
        match o {
            Outcome::Trivial => triv += w,
            Outcome::Undecided => undec += w,
            Outcome::Nontrivial => {}
        }
    }
    let upper = triv + undec;
    Some(HEstimate {
        n,
        p,
        trials: counts.total(),
        exhaustive: true,
        counts,
        lower: triv,
        upper,
        undecided: undec,
        ci_lower: (triv, triv),
        ci_upper: (upper, upper),
        ci_undecided: (undec, undec),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exhaustive_n1_is_never_trivial() {
        for p in [0.0, 0.3, 1.0] {
            let h = estimate_h_exhaustive(1, p, &Budget::default()).unwrap();
            assert_eq!(h.trials, 4);
            assert_eq!(h.counts.nontrivial, 4);
            assert_eq!((h.lower, h.upper), (0.0, 0.0));
        }
        assert!(estimate_h_exhaustive(2, 0.5, &Budget::default()).is_none());
    }

    #[test]
    fn free_group_is_certified_nontrivial() {
        let h = estimate_h(3, 0.0, 20, &Budget::default(), 1);
        assert_eq!((h.lower, h.upper, h.undecided), (0.0, 0.0, 0.0));
    }

    #[test]
    fn full_relator_set_collapses() {
        let h = estimate_h(2, 1.0, 5, &Budget::default(), 9);
        assert_eq!(h.lower, 1.0);
    }

    #[test]
    fn fractions_sum_to_one() {
        let h = HEstimate::from_counts(4, 0.1, Counts { trivial: 3, nontrivial: 5, undecided: 2 });
        assert!((h.lower + h.undecided + h.nontrivial() - 1.0).abs() < 1e-15);
        assert!(h.lower <= h.upper);
        assert!(h.ci_upper.0 <= h.upper && h.upper <= h.ci_upper.1);
    }
}
