//! Coupled sweeps over `p = c·n^{−3/2}` and threshold location.
//!
//! Every trial draws one uniform per relator slot and reuses it along the
//! whole grid, so relator sets grow with `c`. A collapse certified at some
//! `c` therefore holds at every larger `c`, and a nontriviality certificate
//! at every smaller one; the curves below use these propagated indicators.

use alloc::vec::Vec;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::estimate::{Counts, HEstimate};
use super::stats::{bootstrap_sample, crossing, quantile, wilson, Z95};
use crate::collapse::{decide, Budget, BudgetSpent, Outcome, Stage};
use crate::rng::{Purpose, Stream};
use crate::sampling::CoupledSample;

pub const BOOTSTRAP_REPLICATES: u64 = 200;

pub fn p_of_c(n: u32, c: f64) -> f64 {
    (c * libm::pow(n as f64, -1.5)).min(1.0)
}

/// Raw verdicts of one trial along the grid.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SweepTrial {
    pub trial: u64,
    pub outcomes: Vec<Outcome>,
    pub stages: Vec<Stage>,
    pub spent: Vec<BudgetSpent>,
}

impl SweepTrial {
    /// First grid index certified trivial.
    pub fn first_trivial(&self) -> Option<usize> {
        self.outcomes.iter().position(|&o| o == Outcome::Trivial)
    }

    /// Last grid index certified nontrivial.
    pub fn last_nontrivial(&self) -> Option<usize> {
        self.outcomes.iter().rposition(|&o| o == Outcome::Nontrivial)
    }

    /// No verdict after the first Trivial one differs from Trivial.
    pub fn raw_monotone(&self) -> bool {
        match self.first_trivial() {
            Some(j) => self.outcomes[j..].iter().all(|&o| o == Outcome::Trivial),
            None => true,
        }
    }
}

pub fn coupled_sample(n: u32, p_max: f64, seed: u64, trial: u64) -> CoupledSample {
    let mut s = Stream::new(seed, Purpose::Relators, trial);
    CoupledSample::draw(n, p_max, false, &mut s)
}

pub fn sweep_trial(n: u32, c_grid: &[f64], budget: &Budget, seed: u64, trial: u64) -> SweepTrial {
    let c_max = c_grid.last().copied().unwrap_or(0.0);
    let sample = coupled_sample(n, p_of_c(n, c_max), seed, trial);
    let mut t = SweepTrial {
        trial,
        outcomes: Vec::with_capacity(c_grid.len()),
        stages: Vec::with_capacity(c_grid.len()),
        spent: Vec::with_capacity(c_grid.len()),
    };
    for &c in c_grid {
        let v = decide(&sample.at(p_of_c(n, c)), budget);
        t.outcomes.push(v.outcome);
        t.stages.push(v.stage);
        t.spent.push(v.budget_spent);
    }
    t
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CurvePoint {
    pub c: f64,
    pub estimate: HEstimate,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Window {
    pub c10: f64,
    pub c50: f64,
    pub c90: f64,
    pub p10: f64,
    pub p50: f64,
    pub p90: f64,
    /// `(p₀.₉ − p₀.₁) / p₀.₅`.
    pub relative_width: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ThresholdCurve {
    pub n: u32,
    pub trials: u64,
    pub points: Vec<CurvePoint>,
    /// `p̂₀.₅ · n^{3/2}` on the certified-trivial curve.
    pub c_hat: Option<f64>,
    pub window: Option<Window>,
    /// Bootstrap 95% percentile interval of the relative width.
    pub relative_width_ci: Option<(f64, f64)>,
    /// Trials whose raw verdicts leave Trivial after reaching it.
    pub raw_monotone_violations: u64,
    /// Trials certified trivial at some `c` and nontrivial at a larger one.
    pub contradictions: u64,
}

fn window_of(n: u32, c_grid: &[f64], lower: &[f64]) -> Option<Window> {
    let c10 = crossing(c_grid, lower, 0.1)?;
    let c50 = crossing(c_grid, lower, 0.5)?;
    let c90 = crossing(c_grid, lower, 0.9)?;
    Some(Window {
        c10,
        c50,
        c90,
        p10: p_of_c(n, c10),
        p50: p_of_c(n, c50),
        p90: p_of_c(n, c90),
        relative_width: (c90 - c10) / c50,
    })
}

fn lower_curve(len: usize, firsts: impl Iterator<Item = Option<usize>>) -> Vec<f64> {
    let mut hits = alloc::vec![0u64; len];
    let mut total = 0u64;
    for f in firsts {
        total += 1;
        if let Some(j) = f {
            hits[j] += 1;
        }
    }
    let mut acc = 0;
    hits.iter()
        .map(|&h| {
            acc += h;
            acc as f64 / total.max(1) as f64
        })
        .collect()
}

/// Aggregates trials into a curve. The result does not depend on the order
/// of `trials`.
pub fn curve_from_trials(n: u32, c_grid: &[f64], trials: &[SweepTrial], seed: u64) -> ThresholdCurve {
    let mut sorted: Vec<&SweepTrial> = trials.iter().collect();
    sorted.sort_by_key(|t| t.trial);
    let len = c_grid.len();
    let mut points = Vec::with_capacity(len);
    let mut contradictions = 0;
    for t in &sorted {
        if let (Some(a), Some(b)) = (t.first_trivial(), t.last_nontrivial()) {
            if a <= b {
                contradictions += 1;
            }
        }
    }
    for (j, &c) in c_grid.iter().enumerate() {
        let mut counts = Counts::default();
        for t in &sorted {
            let triv = t.first_trivial().is_some_and(|a| a <= j);
            let nontriv = t.last_nontrivial().is_some_and(|b| b >= j);
            counts.record(match (triv, nontriv) {
                (true, _) => Outcome::Trivial,
                (false, true) => Outcome::Nontrivial,
                (false, false) => Outcome::Undecided,
            });
        }
        points.push(CurvePoint {
            c,
            estimate: HEstimate::from_counts(n, p_of_c(n, c), counts),
        });
    }
    let lower: Vec<f64> = points.iter().map(|pt| pt.estimate.lower).collect();
    let window = window_of(n, c_grid, &lower);
    let relative_width_ci = window.and_then(|_| {
        let mut widths: Vec<f64> = (0..BOOTSTRAP_REPLICATES)
            .filter_map(|b| {
                let idx = bootstrap_sample(seed, b, sorted.len());
                let curve = lower_curve(len, idx.iter().map(|&i| sorted[i].first_trivial()));
                window_of(n, c_grid, &curve).map(|w| w.relative_width)
            })
            .collect();
        widths.sort_by(f64::total_cmp);
        Some((quantile(&widths, 0.025)?, quantile(&widths, 0.975)?))
    });
    ThresholdCurve {
        n,
        trials: sorted.len() as u64,
        c_hat: crossing(c_grid, &lower, 0.5),
        window,
        relative_width_ci,
        raw_monotone_violations: sorted.iter().filter(|t| !t.raw_monotone()).count() as u64,
        contradictions,
        points,
    }
}

pub fn sweep(n: u32, c_grid: &[f64], trials: u64, budget: &Budget, seed: u64) -> ThresholdCurve {
    let runs: Vec<SweepTrial> = (0..trials)
        .map(|t| sweep_trial(n, c_grid, budget, seed, t))
        .collect();
    curve_from_trials(n, c_grid, &runs, seed)
}

#[derive(Clone, Copy, Debug, PartialEq, Error, Serialize, Deserialize)]
pub enum SearchError {
    #[error("no bracket: certified fraction {lo_frac} at c = {lo} and {hi_frac} at c = {hi}")]
    NoBracket { lo: f64, hi: f64, lo_frac: f64, hi_frac: f64 },
    #[error("tolerance must be positive")]
    BadTolerance,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Evaluation {
    pub c: f64,
    pub estimate: HEstimate,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ThresholdSearch {
    pub n: u32,
    pub trials: u64,
    pub tol: f64,
    pub c_hat: f64,
    /// Final bracket: certified fraction below 1/2 at `lo`, above at `hi`.
    pub lo: f64,
    pub hi: f64,
    /// Largest evaluated `c` whose Wilson interval lies below 1/2 and
    /// smallest whose interval lies above.
    pub ci_bracket: (Option<f64>, Option<f64>),
    pub undecided_lo: f64,
    pub undecided_hi: f64,
    pub evaluations: Vec<Evaluation>,
}

/// Bisection on `c` for certified-trivial fraction 1/2. `eval` returns the
/// verdict counts at a given `c` on a fixed set of coupled trials.
pub fn find_threshold_with(
    n: u32,
    tol: f64,
    c_lo: f64,
    c_hi: f64,
    eval: &mut dyn FnMut(f64) -> Counts,
) -> Result<ThresholdSearch, SearchError> {
    if !(tol > 0.0) {
        return Err(SearchError::BadTolerance);
    }
    let mut evaluations = Vec::new();
    let mut at = |c: f64, evaluations: &mut Vec<Evaluation>| {
        let e = HEstimate::from_counts(n, p_of_c(n, c), eval(c));
        evaluations.push(Evaluation { c, estimate: e });
        e
    };
    let (mut lo, mut hi) = (c_lo, c_hi);
    let mut elo = at(lo, &mut evaluations);
    let mut ehi = at(hi, &mut evaluations);
    if !(elo.lower < 0.5 && ehi.lower > 0.5) {
        return Err(SearchError::NoBracket {
            lo,
            hi,
            lo_frac: elo.lower,
            hi_frac: ehi.lower,
        });
    }
    let mut exact = None;
    for _ in 0..64 {
        if hi - lo < tol {
            break;
        }
        let mid = 0.5 * (lo + hi);
        let e = at(mid, &mut evaluations);
        if e.lower < 0.5 {
            lo = mid;
            elo = e;
        } else if e.lower > 0.5 {
            hi = mid;
            ehi = e;
        } else {
            exact = Some(mid);
            break;
        }
    }
    let below = evaluations
        .iter()
        .filter(|e| wilson(e.estimate.counts.trivial, e.estimate.trials, Z95).1 < 0.5)
        .map(|e| e.c)
        .fold(None, |m: Option<f64>, c| Some(m.map_or(c, |m| m.max(c))));
    let above = evaluations
        .iter()
        .filter(|e| wilson(e.estimate.counts.trivial, e.estimate.trials, Z95).0 > 0.5)
        .map(|e| e.c)
        .fold(None, |m: Option<f64>, c| Some(m.map_or(c, |m| m.min(c))));
    Ok(ThresholdSearch {
        n,
        trials: ehi.trials,
        tol,
        c_hat: exact.unwrap_or(0.5 * (lo + hi)),
        lo,
        hi,
        ci_bracket: (below, above),
        undecided_lo: elo.undecided,
        undecided_hi: ehi.undecided,
        evaluations,
    })
}

/// Serial bisection over `trials` coupled samples drawn up to `c_hi`.
pub fn find_threshold(
    n: u32,
    trials: u64,
    tol: f64,
    seed: u64,
    budget: &Budget,
    c_lo: f64,
    c_hi: f64,
) -> Result<ThresholdSearch, SearchError> {
    let samples: Vec<CoupledSample> = (0..trials)
        .map(|t| coupled_sample(n, p_of_c(n, c_hi), seed, t))
        .collect();
    find_threshold_with(n, tol, c_lo, c_hi, &mut |c| {
        samples
            .iter()
            .map(|s| decide(&s.at(p_of_c(n, c)), budget).outcome)
            .collect()
    })
}

/// Parses `lo:hi:step` into an ascending grid including `hi` up to
/// rounding.
pub fn parse_grid(spec: &str) -> Option<Vec<f64>> {
    let mut it = spec.split(':').map(|s| s.trim().parse::<f64>().ok());
    let (lo, hi, step) = (it.next()??, it.next()??, it.next()??);
    if it.next().is_some() || !(step > 0.0) || !(lo <= hi) || !lo.is_finite() || !hi.is_finite() {
        return None;
    }
    let count = libm::floor((hi - lo) / step + 1e-9) as usize + 1;
    Some((0..count).map(|i| lo + i as f64 * step).collect())
}
