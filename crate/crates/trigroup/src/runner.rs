//! Parallel drivers for the core experiments.
//!
//! Trials are pure functions of `(seed, index)`; results are collected in
//! index order and aggregated by order-independent functions, so every
//! output is identical for any thread count.

use rayon::prelude::*;
use trigroup_core::collapse::{decide, Budget};
use trigroup_core::davkd::map::unrooted_maps;
use trigroup_core::davkd::verify::{map_histogram, Histogram};
use trigroup_core::letter::Letter;
use trigroup_core::threshold::boost::{boost_report, boost_trial, BoostConfig, BoostReport, BoostTrial};
use trigroup_core::threshold::estimate::{run_trial, Counts, HEstimate, TrialRecord};
use trigroup_core::threshold::paths::{path_stats, path_trial, planted_pairs, PathStats, PathTrial};
use trigroup_core::threshold::sweep::{
    coupled_sample, curve_from_trials, find_threshold_with, p_of_c, sweep_trial, SearchError, SweepTrial,
    ThresholdCurve, ThresholdSearch,
};
use trigroup_core::threshold::zgraph::{z_graph_summary, z_graph_trial, ZGraphStats, ZGraphSummary};

/// Runs `f` inside a pool of `threads` workers (0 means one per core).
pub fn with_threads<R: Send>(threads: usize, f: impl FnOnce() -> R + Send) -> R {
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .expect("thread pool")
        .install(f)
}

fn par_trials<T: Send>(trials: u64, f: impl Fn(u64) -> T + Sync + Send) -> Vec<T> {
    (0..trials).into_par_iter().map(f).collect()
}

pub fn estimate(n: u32, p: f64, trials: u64, budget: &Budget, seed: u64) -> (Vec<TrialRecord>, HEstimate) {
    let recs = par_trials(trials, |t| run_trial(n, p, budget, seed, t));
    let counts: Counts = recs.iter().map(|r| r.verdict).collect();
    (recs, HEstimate::from_counts(n, p, counts))
}

pub fn sweep(n: u32, c_grid: &[f64], trials: u64, budget: &Budget, seed: u64) -> (Vec<SweepTrial>, ThresholdCurve) {
    let runs = par_trials(trials, |t| sweep_trial(n, c_grid, budget, seed, t));
    let curve = curve_from_trials(n, c_grid, &runs, seed);
    (runs, curve)
}

pub fn find_threshold(
    n: u32,
    trials: u64,
    tol: f64,
    seed: u64,
    budget: &Budget,
    c_lo: f64,
    c_hi: f64,
) -> Result<ThresholdSearch, SearchError> {
    let samples = par_trials(trials, |t| coupled_sample(n, p_of_c(n, c_hi), seed, t));
    find_threshold_with(n, tol, c_lo, c_hi, &mut |c| {
        let p = p_of_c(n, c);
        samples
            .par_iter()
            .map(|s| decide(&s.at(p), budget).outcome)
            .collect::<Vec<_>>()
            .into_iter()
            .collect()
    })
}

pub fn boost(cfg: &BoostConfig) -> (Vec<BoostTrial>, BoostReport) {
    let runs = par_trials(cfg.trials, |t| boost_trial(cfg, t));
    let report = boost_report(cfg, &runs);
    (runs, report)
}

pub fn zgraph(n: u32, p: f64, z: &[Letter], trials: u64, seed: u64) -> (Vec<ZGraphStats>, ZGraphSummary) {
    let runs = par_trials(trials, |t| z_graph_trial(n, p, z, seed, t));
    let summary = z_graph_summary(n, p, z, &runs);
    (runs, summary)
}

pub fn paths(n: u32, m_pairs: usize, eps: f64, p: f64, trials: u64, seed: u64) -> (Vec<PathTrial>, PathStats) {
    let pairs = planted_pairs(n, m_pairs, seed);
    let q = (eps * p).clamp(0.0, 1.0);
    let runs = par_trials(trials, |t| path_trial(n, &pairs, q, seed, t));
    let stats = path_stats(n, m_pairs, eps, p, seed, &runs);
    (runs, stats)
}

/// Boundary-inequality histogram over all reduced raw diagrams with `m`
/// faces; chiral map pairs are evaluated once.
pub fn boundary_histogram(m: usize) -> Histogram {
    let maps = unrooted_maps(m);
    let parts: Vec<Histogram> = maps
        .par_iter()
        .filter_map(|(map, _)| {
            let own = map.canonical_code();
            let mirror = map.mirrored().canonical_code();
            if mirror < own {
                return None;
            }
            let weight = if mirror == own { 1 } else { 2 };
            let mut h = map_histogram(map);
            h.values_mut().for_each(|c| *c *= weight);
            Some(h)
        })
        .collect();
    let mut total = Histogram::new();
    for h in parts {
        for (k, c) in h {
            *total.entry(k).or_insert(0) += c;
        }
    }
    total
}
