//! The graph on letters outside `Z` induced by relators meeting `Z` once.

use alloc::vec;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use super::stats::mean_sd;
use crate::letter::Letter;
use crate::presentation::Presentation;
use crate::rng::{Purpose, Stream};
use crate::sampling::CoupledSample;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ZGraphStats {
    /// `2n − ℓ`.
    pub vertices: u32,
    /// Distinct edges, loops included.
    pub edges: u32,
    pub loops: u32,
    /// Components with at least one edge.
    pub nontrivial_components: u32,
    pub max_component_edges: u32,
}

impl ZGraphStats {
    /// Fewer than `n^0.6` nontrivial components, none with more than two
    /// edges.
    pub fn small_components(&self, n: u32) -> bool {
        (self.nontrivial_components as f64) < libm::pow(n as f64, 0.6) && self.max_component_edges <= 2
    }
}

fn find(parent: &mut [u32], mut x: u32) -> u32 {
    while parent[x as usize] != x {
        parent[x as usize] = parent[parent[x as usize] as usize];
        x = parent[x as usize];
    }
    x
}

/// Edge set of the graph: sorted pairs of letter codes `(x, y)`, `x ≤ y`.
pub fn z_graph_edges(p: &Presentation, z: &[Letter]) -> Vec<(u32, u32)> {
    debug_assert!(z.iter().all(|l| z.contains(&l.inverse())));
    let mut edges: Vec<(u32, u32)> = p
        .relators()
        .iter()
        .filter_map(|r| {
            let outside: Vec<Letter> = r.letters().into_iter().filter(|l| !z.contains(l)).collect();
            (outside.len() == 2).then(|| {
                let (a, b) = (outside[0].code(), outside[1].code());
                (a.min(b), a.max(b))
            })
        })
        .collect();
    edges.sort_unstable();
    edges.dedup();
    edges
}

pub fn z_graph_stats(p: &Presentation, z: &[Letter]) -> ZGraphStats {
    let edges = z_graph_edges(p, z);
    let letters = 2 * p.n();
    let mut parent: Vec<u32> = (0..letters).collect();
    for &(a, b) in &edges {
        let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
        if ra != rb {
            parent[ra as usize] = rb;
        }
    }
    let mut per_root = vec![0u32; letters as usize];
    for &(a, _) in &edges {
        per_root[find(&mut parent, a) as usize] += 1;
    }
    ZGraphStats {
        vertices: letters - z.len() as u32,
        edges: edges.len() as u32,
        loops: edges.iter().filter(|(a, b)| a == b).count() as u32,
        nontrivial_components: per_root.iter().filter(|&&e| e > 0).count() as u32,
        max_component_edges: per_root.iter().copied().max().unwrap_or(0),
    }
}

/// Exact edge probabilities when every relator is present with
/// probability `p`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ZGraphModel {
    pub n: u32,
    pub ell: u32,
    pub p: f64,
    /// Edge between distinct vertices `x ≠ y⁻¹`: `6ℓ` words can carry it.
    pub q: f64,
    /// Loop at `x`: `3ℓ` words.
    pub q_loop: f64,
    /// `6ℓp`.
    pub q_bound: f64,
    pub expected_edges: f64,
}

impl ZGraphModel {
    pub fn new(n: u32, ell: u32, p: f64) -> Self {
        let v = (2 * n - ell) as f64;
        let q = 1.0 - libm::pow(1.0 - p, 6.0 * ell as f64);
        let q_loop = 1.0 - libm::pow(1.0 - p, 3.0 * ell as f64);
        // vertices come in inverse pairs, which never share an edge
        let pairs = v * (v - 1.0) / 2.0 - v / 2.0;
        ZGraphModel {
            n,
            ell,
            p,
            q,
            q_loop,
            q_bound: 6.0 * ell as f64 * p,
            expected_edges: pairs * q + v * q_loop,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ZGraphSummary {
    pub model: ZGraphModel,
    pub trials: u64,
    pub mean_edges: f64,
    pub sd_edges: f64,
    pub mean_nontrivial_components: f64,
    pub max_component_edges: u32,
    /// Fraction of trials with small components.
    pub small_fraction: f64,
    pub n_pow_06: f64,
}

pub fn z_graph_trial(n: u32, p: f64, z: &[Letter], seed: u64, trial: u64) -> ZGraphStats {
    let mut s = Stream::new(seed, Purpose::Relators, trial);
    z_graph_stats(&CoupledSample::draw(n, p, false, &mut s).at(p), z)
}

pub fn z_graph_summary(n: u32, p: f64, z: &[Letter], stats: &[ZGraphStats]) -> ZGraphSummary {
    let t = stats.len().max(1) as f64;
    let (mean_edges, sd_edges) = mean_sd(stats.iter().map(|s| s.edges as f64));
    ZGraphSummary {
        model: ZGraphModel::new(n, z.len() as u32, p),
        trials: stats.len() as u64,
        mean_edges,
        sd_edges,
        mean_nontrivial_components: stats.iter().map(|s| s.nontrivial_components as f64).sum::<f64>() / t,
        max_component_edges: stats.iter().map(|s| s.max_component_edges).max().unwrap_or(0),
        small_fraction: stats.iter().filter(|s| s.small_components(n)).count() as f64 / t,
        n_pow_06: libm::pow(n as f64, 0.6),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presentation::RelatorSpace;

    fn zset(gens: &[u32]) -> Vec<Letter> {
        gens.iter().flat_map(|&g| [Letter::pos(g), Letter::neg(g)]).collect()
    }

    #[test]
    fn empty_presentation_is_edgeless() {
        let s = z_graph_stats(&Presentation::free(5), &zset(&[1]));
        assert_eq!((s.edges, s.nontrivial_components), (0, 0));
        assert_eq!(s.vertices, 8);
    }

    #[test]
    fn single_relator_gives_single_edge() {
        let p = Presentation::from_words(3, [[Letter::pos(1), Letter::pos(2), Letter::pos(3)]]).unwrap();
        let e = z_graph_edges(&p, &zset(&[1]));
        assert_eq!(e, [(Letter::pos(2).code(), Letter::pos(3).code())]);
        let s = z_graph_stats(&p, &zset(&[1]));
        assert_eq!((s.edges, s.nontrivial_components, s.max_component_edges), (1, 1, 1));
    }

    #[test]
    fn relators_with_two_z_letters_are_ignored() {
        let p = Presentation::from_words(3, [[Letter::pos(1), Letter::pos(2), Letter::pos(3)]]).unwrap();
        assert!(z_graph_edges(&p, &zset(&[1, 2])).is_empty());
    }

    #[test]
    fn word_counts_behind_q() {
        // over the full space every admissible pair is an edge, and the
        // number of words per edge matches the model
        let n = 4;
        let z = zset(&[1]);
        let all = Presentation::new(n, RelatorSpace::new(n).iter()).unwrap();
        let mut per_edge = alloc::collections::BTreeMap::new();
        for r in all.relators() {
            let single = Presentation::new(n, [*r]).unwrap();
            for e in z_graph_edges(&single, &z) {
                *per_edge.entry(e).or_insert(0u32) += 1;
            }
        }
        for (&(a, b), &c) in &per_edge {
            assert_eq!(c, if a == b { 3 } else { 6 } * z.len() as u32);
        }
        let m = ZGraphModel::new(n, z.len() as u32, 1.0);
        assert_eq!(m.expected_edges as usize, per_edge.len());
        assert!(m.q <= m.q_bound);
    }
}
