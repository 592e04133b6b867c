//! Length-two paths in the graph built from planted prefix pairs.
//!
//! For a set `M` of unordered letter pairs `{a, b}`, letters `x ≠ y` with
//! `x ≠ y⁻¹` are adjacent when, for some `{a, b} ∈ M` and prefix
//! `uv ∈ {ab, ba}`, the sprinkled set contains `uvx` and `uvy⁻¹` (or `uvy`
//! and `uvx⁻¹`).

use alloc::vec;
use alloc::vec::Vec;

use hashbrown::HashMap;
use serde::{Deserialize, Serialize};

use super::stats::mean_sd;
use crate::letter::Letter;
use crate::presentation::Presentation;
use crate::relator::Relator;
use crate::rng::{Purpose, Stream};
use crate::sampling::CoupledSample;

/// Unordered letter pairs `{a, b}` with `a ≠ b` and `a ≠ b⁻¹`, as
/// `(a, b)` with `a < b`.
pub fn admissible_pairs(n: u32) -> Vec<(Letter, Letter)> {
    let letters: Vec<Letter> = Letter::alphabet(n).collect();
    let mut out = Vec::new();
    for (i, &a) in letters.iter().enumerate() {
        for &b in &letters[i + 1..] {
            if b != a.inverse() {
                out.push((a, b));
            }
        }
    }
    out
}

/// `m_pairs` distinct admissible pairs chosen uniformly from the auxiliary
/// stream of `seed`, sorted.
pub fn planted_pairs(n: u32, m_pairs: usize, seed: u64) -> Vec<(Letter, Letter)> {
    let mut pool = admissible_pairs(n);
    assert!(m_pairs <= pool.len(), "m_pairs exceeds the admissible pairs");
    let mut s = Stream::new(seed, Purpose::Auxiliary, 0);
    for i in 0..m_pairs {
        let j = i + s.below((pool.len() - i) as u64) as usize;
        pool.swap(i, j);
    }
    pool.truncate(m_pairs);
    pool.sort();
    pool
}

fn prefixes(pairs: &[(Letter, Letter)]) -> Vec<(Letter, Letter)> {
    pairs.iter().flat_map(|&(a, b)| [(a, b), (b, a)]).collect()
}

fn word(n: u32, u: Letter, v: Letter, w: Letter) -> Option<Relator> {
    Relator::new([u, v, w], n).ok()
}

/// Adjacency between letter codes.
pub fn gprime_edges(n: u32, pairs: &[(Letter, Letter)], r: &Presentation) -> Vec<(u32, u32)> {
    let has = |u, v, w| word(n, u, v, w).is_some_and(|x| r.contains(&x));
    let letters: Vec<Letter> = Letter::alphabet(n).collect();
    let pre = prefixes(pairs);
    let mut edges = Vec::new();
    for (i, &x) in letters.iter().enumerate() {
        for &y in &letters[i + 1..] {
            if y == x.inverse() {
                continue;
            }
            let adjacent = pre.iter().any(|&(u, v)| {
                (has(u, v, x) && has(u, v, y.inverse())) || (has(u, v, y) && has(u, v, x.inverse()))
            });
            if adjacent {
                edges.push((x.code(), y.code()));
            }
        }
    }
    edges
}

/// `(X, Y)`: paths with two edges, and unordered pairs of distinct such
/// paths sharing a vertex (by inclusion-exclusion over shared vertices).
pub fn path_counts(vertices: u32, edges: &[(u32, u32)]) -> (u64, u64) {
    let mut adj = vec![Vec::new(); vertices as usize];
    for &(a, b) in edges {
        adj[a as usize].push(b);
        adj[b as usize].push(a);
    }
    let mut single: HashMap<u32, u64> = HashMap::new();
    let mut double: HashMap<(u32, u32), u64> = HashMap::new();
    let mut triple: HashMap<[u32; 3], u64> = HashMap::new();
    let mut x = 0u64;
    for (mid, nb) in adj.iter().enumerate() {
        let mid = mid as u32;
        for (i, &a) in nb.iter().enumerate() {
            for &b in &nb[i + 1..] {
                x += 1;
                let mut vs = [a, mid, b];
                vs.sort_unstable();
                for &v in &vs {
                    *single.entry(v).or_insert(0) += 1;
                }
                for (p, q) in [(vs[0], vs[1]), (vs[0], vs[2]), (vs[1], vs[2])] {
                    *double.entry((p, q)).or_insert(0) += 1;
                }
                *triple.entry(vs).or_insert(0) += 1;
            }
        }
    }
    let pairs = |t: u64| t * t.saturating_sub(1) / 2;
    let y = single.values().map(|&t| pairs(t)).sum::<u64>() + triple.values().map(|&t| pairs(t)).sum::<u64>()
        - double.values().map(|&t| pairs(t)).sum::<u64>();
    (x, y)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PathTrial {
    pub trial: u64,
    pub edges: u64,
    pub x: u64,
    pub y: u64,
}

pub fn path_trial(n: u32, pairs: &[(Letter, Letter)], q: f64, seed: u64, trial: u64) -> PathTrial {
    let mut s = Stream::new(seed, Purpose::Sprinkle, trial);
    let r = CoupledSample::draw(n, q, false, &mut s).at(q);
    let edges = gprime_edges(n, pairs, &r);
    let (x, y) = path_counts(2 * n, &edges);
    PathTrial {
        trial,
        edges: edges.len() as u64,
        x,
        y,
    }
}

/// Exact `E[X]` when each word is present with probability `q`: the sum
/// over centres `v` and pairs `{x, y}` of `Pr[vx ∈ E ∧ vy ∈ E]`, where the
/// per-prefix events are independent and each involves at most six words.
pub fn exact_expected_x(n: u32, pairs: &[(Letter, Letter)], q: f64) -> f64 {
    let letters: Vec<Letter> = Letter::alphabet(n).collect();
    let pre = prefixes(pairs);
    let mut total = 0.0;
    for &v in &letters {
        let nbrs: Vec<Letter> = letters.iter().copied().filter(|&x| x != v && x != v.inverse()).collect();
        for (i, &x) in nbrs.iter().enumerate() {
            for &y in &nbrs[i + 1..] {
                let (mut none_x, mut none_y, mut none_both) = (1.0, 1.0, 1.0);
                for &(a, b) in &pre {
                    let (px, py, pxy) = prefix_probabilities(n, a, b, v, x, y, q);
                    none_x *= 1.0 - px;
                    none_y *= 1.0 - py;
                    none_both *= 1.0 - pxy;
                }
                total += 1.0 - none_x - none_y + none_both;
            }
        }
    }
    total
}

/// For one prefix: `Pr[A(v,x)]`, `Pr[A(v,y)]` and `Pr[A(v,x) ∨ A(v,y)]`.
fn prefix_probabilities(n: u32, u: Letter, w: Letter, v: Letter, x: Letter, y: Letter, q: f64) -> (f64, f64, f64) {
    let tails = [v, v.inverse(), x, x.inverse(), y, y.inverse()];
    let mut words: Vec<Relator> = tails.iter().filter_map(|&t| word(n, u, w, t)).collect();
    words.sort();
    words.dedup();
    let present = |mask: u32, t: Letter| {
        word(n, u, w, t).is_some_and(|r| mask >> words.binary_search(&r).expect("listed") & 1 == 1)
    };
    let adj = |mask, a: Letter, b: Letter| {
        (present(mask, a) && present(mask, b.inverse())) || (present(mask, b) && present(mask, a.inverse()))
    };
    let (mut px, mut py, mut pxy) = (0.0, 0.0, 0.0);
    for mask in 0u32..1 << words.len() {
        let k = mask.count_ones() as i32;
        let weight = libm::pow(q, k as f64) * libm::pow(1.0 - q, (words.len() as i32 - k) as f64);
        let (ex, ey) = (adj(mask, v, x), adj(mask, v, y));
        if ex {
            px += weight;
        }
        if ey {
            py += weight;
        }
        if ex || ey {
            pxy += weight;
        }
    }
    (px, py, pxy)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PathStats {
    pub n: u32,
    pub m_pairs: usize,
    pub eps: f64,
    pub p: f64,
    pub trials: u64,
    pub pairs: Vec<(Letter, Letter)>,
    pub mean_edges: f64,
    pub mean_x: f64,
    pub sd_x: f64,
    pub mean_y: f64,
    pub exact_ex: f64,
    /// `(mean_x − E X) / (sd_x / √trials)`.
    pub z_score: f64,
    /// `0.5 n³ m² (εp)⁴`.
    pub formula_ex: f64,
    /// `n⁴ m³ (εp)⁶`.
    pub formula_ey: f64,
    /// Trials with `Y > X(X−1)/2`.
    pub y_bound_violations: u64,
}

pub fn path_stats(n: u32, m_pairs: usize, eps: f64, p: f64, seed: u64, trials: &[PathTrial]) -> PathStats {
    let q = (eps * p).clamp(0.0, 1.0);
    let pairs = planted_pairs(n, m_pairs, seed);
    let t = trials.len();
    let (mean_x, sd_x) = mean_sd(trials.iter().map(|t| t.x as f64));
    let (mean_y, _) = mean_sd(trials.iter().map(|t| t.y as f64));
    let (mean_edges, _) = mean_sd(trials.iter().map(|t| t.edges as f64));
    let exact_ex = exact_expected_x(n, &pairs, q);
    let se = sd_x / libm::sqrt(t.max(1) as f64);
    let z_score = if se > 0.0 {
        (mean_x - exact_ex) / se
    } else if mean_x == exact_ex {
        0.0
    } else {
        f64::INFINITY
    };
    let (nf, mf) = (n as f64, m_pairs as f64);
    PathStats {
        n,
        m_pairs,
        eps,
        p,
        trials: t as u64,
        pairs,
        mean_edges,
        mean_x,
        sd_x,
        mean_y,
        exact_ex,
        z_score,
        formula_ex: 0.5 * nf * nf * nf * mf * mf * libm::pow(q, 4.0),
        formula_ey: nf * nf * nf * nf * mf * mf * mf * libm::pow(q, 6.0),
        y_bound_violations: trials
            .iter()
            .filter(|t| t.y > t.x * t.x.saturating_sub(1) / 2)
            .count() as u64,
    }
}

pub fn gprime_path_stats(n: u32, m_pairs: usize, eps: f64, p: f64, trials: u64, seed: u64) -> PathStats {
    let pairs = planted_pairs(n, m_pairs, seed);
    let q = (eps * p).clamp(0.0, 1.0);
    let runs: Vec<PathTrial> = (0..trials).map(|t| path_trial(n, &pairs, q, seed, t)).collect();
    path_stats(n, m_pairs, eps, p, seed, &runs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presentation::RelatorSpace;

    fn brute_y(edges: &[(u32, u32)], vertices: u32) -> u64 {
        let mut paths: Vec<[u32; 3]> = Vec::new();
        for v in 0..vertices {
            let nb: Vec<u32> = edges
                .iter()
                .filter_map(|&(a, b)| if a == v { Some(b) } else if b == v { Some(a) } else { None })
                .collect();
            for (i, &a) in nb.iter().enumerate() {
                for &b in &nb[i + 1..] {
                    paths.push([a, v, b]);
                }
            }
        }
        let mut y = 0;
        for (i, p) in paths.iter().enumerate() {
            for q in &paths[i + 1..] {
                if p.iter().any(|v| q.contains(v)) {
                    y += 1;
                }
            }
        }
        y
    }

    #[test]
    fn path_counts_match_brute_force() {
        let graphs: [&[(u32, u32)]; 4] = [
            &[],
            &[(0, 1), (1, 2)],
            &[(0, 1), (1, 2), (2, 0)],
            &[(0, 1), (1, 2), (2, 3), (3, 0), (0, 2), (4, 5), (5, 6), (1, 4)],
        ];
        for g in graphs {
            let (x, y) = path_counts(7, g);
            assert_eq!(y, brute_y(g, 7), "{g:?}");
            assert!(y <= x * x.saturating_sub(1) / 2);
        }
        assert_eq!(path_counts(3, &[(0, 1), (1, 2), (2, 0)]), (3, 3));
    }

    #[test]
    fn admissible_pair_count() {
        assert_eq!(admissible_pairs(6).len(), 60);
        let m = planted_pairs(6, 10, 3);
        assert_eq!(m.len(), 10);
        assert_eq!(m, planted_pairs(6, 10, 3));
    }

    #[test]
    fn zero_density_has_no_paths() {
        let s = gprime_path_stats(5, 6, 0.0, 0.5, 20, 1);
        assert_eq!((s.mean_x, s.mean_y, s.exact_ex), (0.0, 0.0, 0.0));
    }

    #[test]
    fn exact_expectation_matches_enumeration() {
        // n = 2 has 28 words; enumerate all subsets restricted to the words
        // that can matter and compare with the closed form
        let n = 2;
        let pairs = planted_pairs(n, 2, 5);
        let q = 0.3;
        let all: Vec<Relator> = RelatorSpace::new(n).iter().collect();
        let pre = prefixes(&pairs);
        let relevant: Vec<Relator> = all
            .iter()
            .copied()
            .filter(|r| pre.iter().any(|&(u, v)| r.letters()[..2] == [u, v]))
            .collect();
        assert!(relevant.len() <= 16);
        let mut ex = 0.0;
        for mask in 0u32..1 << relevant.len() {
            let rels = relevant.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, r)| *r);
            let p = Presentation::new(n, rels).unwrap();
            let k = mask.count_ones() as i32;
            let w = libm::pow(q, k as f64) * libm::pow(1.0 - q, (relevant.len() as i32 - k) as f64);
            let (x, _) = path_counts(2 * n, &gprime_edges(n, &pairs, &p));
            ex += w * x as f64;
        }
        assert!((ex - exact_expected_x(n, &pairs, q)).abs() < 1e-12, "{ex}");
    }
}
