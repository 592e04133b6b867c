//! Paired comparison of collapse with and without added relators.
//!
//! Each trial shares its base relator set `R` across four presentations:
//! `R`, `R ∪ R_fixed`, `R ∪ R_εp` with an independent sprinkle at density
//! `εp`, and `R` with every generator of `R_fixed` forced to the identity.

use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use super::estimate::{trial_presentation, Counts, HEstimate};
use super::stats::{mcnemar_exact, paired_gap};
use crate::collapse::{decide, decide_with_killed, Budget, Outcome};
use crate::letter::Letter;
use crate::presentation::Presentation;
use crate::relator::Relator;
use crate::rng::{Purpose, Stream};
use crate::sampling::CoupledSample;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoostConfig {
    pub n: u32,
    pub p: f64,
    pub eps: f64,
    pub r_fixed: Vec<Relator>,
    pub trials: u64,
    pub seed: u64,
    pub budget: Budget,
}

/// `{g1 g1 g2, g2 g2 g3, g3 g3 g1}`; needs `n ≥ 3`.
pub fn default_r_fixed() -> Vec<Relator> {
    let g = Letter::pos;
    [[g(1), g(1), g(2)], [g(2), g(2), g(3)], [g(3), g(3), g(1)]]
        .into_iter()
        .map(|w| Relator::new(w, 3).expect("reduced words"))
        .collect()
}

impl BoostConfig {
    /// Letters of `R_fixed` together with their inverses, sorted.
    pub fn z(&self) -> Vec<Letter> {
        letter_closure(&self.r_fixed)
    }

    /// Generators of `R_fixed`, sorted.
    pub fn z_generators(&self) -> Vec<u32> {
        let mut g: Vec<u32> = self.z().iter().map(|l| l.generator()).collect();
        g.dedup();
        g
    }

    pub fn fixed_presentation(&self) -> Presentation {
        Presentation::new(self.n, self.r_fixed.iter().copied()).expect("R_fixed fits the alphabet")
    }
}

pub fn letter_closure(rels: &[Relator]) -> Vec<Letter> {
    let mut z: Vec<Letter> = rels
        .iter()
        .flat_map(|r| r.letters())
        .flat_map(|l| [l, l.inverse()])
        .collect();
    z.sort();
    z.dedup();
    z
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoostTrial {
    pub trial: u64,
    pub base: Outcome,
    pub fixed: Outcome,
    pub sprinkled: Outcome,
    pub strong: Outcome,
}

pub fn boost_trial(cfg: &BoostConfig, trial: u64) -> BoostTrial {
    let base = trial_presentation(cfg.n, cfg.p, cfg.seed, trial);
    let q = (cfg.eps * cfg.p).clamp(0.0, 1.0);
    let mut s = Stream::new(cfg.seed, Purpose::Sprinkle, trial);
    let sprinkle = CoupledSample::draw(cfg.n, q, false, &mut s).at(q);
    let b = &cfg.budget;
    BoostTrial {
        trial,
        base: decide(&base, b).outcome,
        fixed: decide(&base.union(&cfg.fixed_presentation()), b).outcome,
        sprinkled: decide(&base.union(&sprinkle), b).outcome,
        strong: decide_with_killed(&base, &cfg.z_generators(), b).outcome,
    }
}

/// Paired difference of certified-trivial indicators against the base.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Gap {
    pub mean: f64,
    pub ci: (f64, f64),
    /// Trivial only with the added relators.
    pub gained: u64,
    /// Trivial only without them.
    pub lost: u64,
    /// Exact McNemar significance level.
    pub alpha: f64,
}

impl Gap {
    fn from_pairs(pairs: impl Iterator<Item = (bool, bool)>) -> Self {
        let (mut gained, mut lost, mut total) = (0, 0, 0);
        for (before, after) in pairs {
            total += 1;
            match (before, after) {
                (false, true) => gained += 1,
                (true, false) => lost += 1,
                _ => {}
            }
        }
        let (mean, ci) = paired_gap(gained, lost, total);
        Gap {
            mean,
            ci,
            gained,
            lost,
            alpha: mcnemar_exact(gained, lost),
        }
    }

    pub fn nonnegative_within_ci(&self) -> bool {
        self.ci.1 >= 0.0
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoostReport {
    pub n: u32,
    pub p: f64,
    pub eps: f64,
    pub trials: u64,
    /// `|Z|`, letters of `R_fixed` with inverses.
    pub ell: usize,
    pub h_base: HEstimate,
    pub h_fixed: HEstimate,
    pub h_sprinkled: HEstimate,
    pub h_strong: HEstimate,
    pub gap_fixed: Gap,
    pub gap_sprinkled: Gap,
    /// Values of `δ` with `gap_fixed > 2δ` and `gap_sprinkled < δ`, if any.
    pub delta_window: Option<(f64, f64)>,
    /// Samples where `R ∪ R_fixed` is certified trivial but the strong
    /// variant is not.
    pub dominance_violations: u64,
    /// Samples where adding relators loses a Trivial verdict.
    pub monotonicity_violations: u64,
}

pub fn boost_report(cfg: &BoostConfig, trials: &[BoostTrial]) -> BoostReport {
    let mut sorted: Vec<BoostTrial> = trials.to_vec();
    sorted.sort_by_key(|t| t.trial);
    let est = |f: fn(&BoostTrial) -> Outcome| {
        HEstimate::from_counts(cfg.n, cfg.p, sorted.iter().map(f).collect::<Counts>())
    };
    let triv = |o: Outcome| o == Outcome::Trivial;
    let gap_fixed = Gap::from_pairs(sorted.iter().map(|t| (triv(t.base), triv(t.fixed))));
    let gap_sprinkled = Gap::from_pairs(sorted.iter().map(|t| (triv(t.base), triv(t.sprinkled))));
    let delta_window =
        (gap_sprinkled.mean < gap_fixed.mean / 2.0).then_some((gap_sprinkled.mean, gap_fixed.mean / 2.0));
    BoostReport {
        n: cfg.n,
        p: cfg.p,
        eps: cfg.eps,
        trials: sorted.len() as u64,
        ell: cfg.z().len(),
        h_base: est(|t| t.base),
        h_fixed: est(|t| t.fixed),
        h_sprinkled: est(|t| t.sprinkled),
        h_strong: est(|t| t.strong),
        gap_fixed,
        gap_sprinkled,
        delta_window,
        dominance_violations: sorted.iter().filter(|t| triv(t.fixed) && !triv(t.strong)).count() as u64,
        monotonicity_violations: sorted
            .iter()
            .filter(|t| triv(t.base) && !(triv(t.fixed) && triv(t.sprinkled)))
            .count() as u64,
    }
}

pub fn boost_experiment(cfg: &BoostConfig) -> BoostReport {
    let trials: Vec<BoostTrial> = (0..cfg.trials).map(|t| boost_trial(cfg, t)).collect();
    boost_report(cfg, &trials)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(eps: f64) -> BoostConfig {
        BoostConfig {
            n: 8,
            p: 1.5 * libm::pow(8.0, -1.5),
            eps,
            r_fixed: default_r_fixed(),
            trials: 40,
            seed: 17,
            budget: Budget::default(),
        }
    }

    #[test]
    fn z_is_closed_under_inversion() {
        let c = cfg(0.5);
        let z = c.z();
        assert_eq!(z.len(), 6);
        assert!(z.iter().all(|l| z.contains(&l.inverse())));
        assert_eq!(c.z_generators(), [1, 2, 3]);
    }

    #[test]
    fn zero_eps_reproduces_base() {
        let r = boost_experiment(&cfg(0.0));
        assert_eq!(r.h_sprinkled, r.h_base);
        assert_eq!((r.gap_sprinkled.gained, r.gap_sprinkled.lost), (0, 0));
    }

    #[test]
    fn paired_design_invariants() {
        let r = boost_experiment(&cfg(1.0));
        assert_eq!(r.dominance_violations, 0);
        assert_eq!(r.monotonicity_violations, 0);
        assert!(r.h_fixed.lower >= r.h_base.lower);
        assert!(r.h_strong.lower >= r.h_fixed.lower);
    }
}
