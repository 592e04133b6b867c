//! Exhaustive check of the boundary inequality over all decorations.
//!
//! With `d = 1/2 − f/3` and `S = Σ_i C_i (m_i − m_{i+1})` the inequality
//! reads `l₂ ≥ 2fm + 2S − (3 + 2f)m`, so only `S` (equivalently
//! `V = 3m − l₁ − S = Σ_j m_j · (unions at step j) − l₁`) has to be
//! enumerated. The dynamic program below processes faces in rank order and
//! keeps only the partition of constraint-graph vertices that later edges
//! can still touch, so each (map, labeling) costs far less than its `6^m`
//! decorations.
//!
//! Decorations of one label are acted on freely by the six affine
//! permutations of positions, which preserve ranks and reducedness; the
//! first face of each label is therefore fixed and counts are scaled by
//! `6^k`.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use hashbrown::HashMap;

use super::analysis::Q;
use super::diagram::{labelings, Decoration, Orientation};
use super::map::{unrooted_maps, Map, Side};

/// Key of the per-map histogram.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BoundKey {
    pub l1: u32,
    /// `Σ_j m_j · unions_j − l₁`; the inequality holds iff `V ≥ 0`.
    pub v: i32,
    /// Some edge forces a letter to equal its own inverse.
    pub self_inverse: bool,
}

/// Reduced raw diagrams by key.
pub type Histogram = BTreeMap<BoundKey, u64>;

const MAX_SLOTS: usize = 16;

const IDENTITY: [u8; MAX_SLOTS + 3] = {
    let mut a = [0u8; MAX_SLOTS + 3];
    let mut i = 0;
    while i < a.len() {
        a[i] = i as u8;
        i += 1;
    }
    a
};

/// Where a frontier slot after a step takes its class from.
#[derive(Clone, Copy)]
enum Source {
    /// Side of the current face; its partner carries the same label.
    Own(u8, bool),
    /// Slot of the previous frontier.
    Old(usize),
}

#[derive(Clone, Copy)]
struct FaceStep {
    face: u32,
    rank: u32,
    /// First face of its label in processing order.
    first: bool,
    /// Next face has the same label.
    continues: bool,
}

/// Histogram over all reduced raw diagrams with `m` faces. A map and its
/// mirror image have equal histograms, so chiral pairs are evaluated once.
pub fn histogram(m: usize) -> Histogram {
    let mut total = Histogram::new();
    for (map, _) in unrooted_maps(m) {
        let own = map.canonical_code();
        let mirror = map.mirrored().canonical_code();
        if mirror < own {
            continue;
        }
        let weight = if mirror == own { 1 } else { 2 };
        for (key, c) in map_histogram(&map) {
            *total.entry(key).or_insert(0) += weight * c;
        }
    }
    total
}

/// Histogram over every labeling and decoration of `map` (no folds).
pub fn map_histogram(map: &Map) -> Histogram {
    let mut total = Histogram::new();
    for lab in labelings(map.faces()) {
        for (key, c) in labeling_histogram(map, &lab) {
            *total.entry(key).or_insert(0) += c;
        }
    }
    total
}

/// Histogram over the decorations of `map` with fixed `labels` (1-based,
/// normalized).
pub fn labeling_histogram(map: &Map, labels: &[u32]) -> Histogram {
    assert!(!map.has_fold(), "folds are not supported by the frontier DP");
    let m = map.faces();
    let k = *labels.iter().max().expect("m >= 1") as usize;
    let mut count = vec![0u32; k + 1];
    let mut first_seen = vec![usize::MAX; k + 1];
    for (i, &l) in labels.iter().enumerate() {
        count[l as usize] += 1;
        first_seen[l as usize] = first_seen[l as usize].min(i);
    }
    let mut order_labels: Vec<u32> = (1..=k as u32).collect();
    order_labels.sort_by_key(|&l| (core::cmp::Reverse(count[l as usize]), first_seen[l as usize]));
    let mut rank_of = vec![0u32; k + 1];
    for (i, &l) in order_labels.iter().enumerate() {
        rank_of[l as usize] = i as u32 + 1;
    }
    let mult: Vec<i32> = core::iter::once(0)
        .chain(order_labels.iter().map(|&l| count[l as usize] as i32))
        .collect();

    let faces = processing_order(map, labels, &rank_of);
    let steps: Vec<FaceStep> = faces
        .iter()
        .enumerate()
        .map(|(t, &f)| {
            let rank = rank_of[labels[f as usize] as usize];
            let prev_same = t > 0 && rank_of[labels[faces[t - 1] as usize] as usize] == rank;
            let next_same =
                t + 1 < m && rank_of[labels[faces[t + 1] as usize] as usize] == rank;
            FaceStep {
                face: f,
                rank,
                first: !prev_same,
                continues: next_same,
            }
        })
        .collect();
    let mut when = vec![0usize; m];
    for (t, &f) in faces.iter().enumerate() {
        when[f as usize] = t;
    }
    // open sides after t faces: processed sides glued to unprocessed faces
    let open: Vec<Vec<Side>> = (0..=m)
        .map(|t| {
            let mut v: Vec<Side> = faces[..t]
                .iter()
                .flat_map(|&f| (0..3).map(move |s| Side::new(f, s)))
                .filter(|&s| map.partner(s).is_some_and(|o| when[o.face as usize] >= t))
                .collect();
            v.sort();
            v
        })
        .collect();
    let l1 = map.internal_edge_count() as u32;

    // layer: (classes, info, v, self_inverse) -> count
    let mut layer: HashMap<(u64, u64, i32, bool), u64> = HashMap::new();
    layer.insert((0, 0, 0, false), 1);
    for (t, step) in steps.iter().enumerate() {
        let before = &open[t];
        let label = labels[step.face as usize];
        let gain = mult[step.rank as usize];
        let all = Decoration::choices(label);
        let choices: &[Decoration] = if step.first { &all[..1] } else { &all[..] };
        // sides of this face glued to processed faces: (side, slot, same label)
        let glued: Vec<(u8, usize, bool)> = (0..3u8)
            .filter_map(|s| {
                let o = map.partner(Side::new(step.face, s))?;
                (when[o.face as usize] < t).then(|| {
                    let idx = before.binary_search(&o).expect("processed partner is open");
                    (s, idx, labels[o.face as usize] == label)
                })
            })
            .collect();
        let sources: Vec<Source> = open[t + 1]
            .iter()
            .map(|&side| {
                if side.face == step.face {
                    let partner = map.partner(side).expect("open sides are glued");
                    Source::Own(side.side, labels[partner.face as usize] == label)
                } else {
                    Source::Old(before.binary_search(&side).expect("still open"))
                }
            })
            .collect();
        let mut next: HashMap<(u64, u64, i32, bool), u64> =
            HashMap::with_capacity(layer.len() * choices.len());
        for (&(cls, info, v0, flag0), &cnt) in &layer {
            'deco: for d in choices {
                let pos = [d.position(0), d.position(1), d.position(2)];
                let cw = d.orientation == Orientation::Cw;
                // nodes: old class ids, then three fresh ones if first
                let mut parent = IDENTITY;
                let vertex_node = |p: u8| -> u8 {
                    if step.first {
                        MAX_SLOTS as u8 + p
                    } else {
                        ((cls >> (4 * (before.len() + p as usize))) & 0xf) as u8
                    }
                };
                let mut v = v0;
                let mut flag = flag0;
                for &(s, idx, same) in &glued {
                    let p = pos[s as usize];
                    if same {
                        let bits = (info >> (3 * idx)) & 0x7;
                        if (bits & 3) as u8 == p {
                            if (bits & 4 != 0) != cw {
                                continue 'deco;
                            }
                            flag = true;
                        }
                    }
                    let ra = root(&mut parent, ((cls >> (4 * idx)) & 0xf) as u8);
                    let rb = root(&mut parent, vertex_node(p));
                    if ra != rb {
                        parent[ra.max(rb) as usize] = ra.min(rb);
                        v += gain;
                    }
                    v -= 1;
                }
                // rebuild the frontier
                let mut ids = [u8::MAX; MAX_SLOTS + 3];
                let mut next_id = 0u8;
                let mut ncls = 0u64;
                let mut ninfo = 0u64;
                let mut slot = 0usize;
                let mut emit = |node: u8, parent: &mut [u8; MAX_SLOTS + 3]| {
                    let r = root(parent, node) as usize;
                    if ids[r] == u8::MAX {
                        ids[r] = next_id;
                        next_id += 1;
                    }
                    ncls |= (ids[r] as u64) << (4 * slot);
                    slot += 1;
                };
                for (j, src) in sources.iter().enumerate() {
                    let node = match *src {
                        Source::Own(s, same) => {
                            let p = pos[s as usize];
                            if same {
                                ninfo |= (cw as u64 * 4 + p as u64) << (3 * j);
                            }
                            vertex_node(p)
                        }
                        Source::Old(idx) => {
                            ninfo |= ((info >> (3 * idx)) & 0x7) << (3 * j);
                            ((cls >> (4 * idx)) & 0xf) as u8
                        }
                    };
                    emit(node, &mut parent);
                }
                if step.continues {
                    for p in 0..3 {
                        emit(vertex_node(p), &mut parent);
                    }
                }
                debug_assert!(slot <= MAX_SLOTS);
                *next.entry((ncls, ninfo, v, flag)).or_insert(0) += cnt;
            }
        }
        layer = next;
    }
    let scale = 6u64.pow(k as u32);
    let mut out = Histogram::new();
    for ((_, _, v, flag), cnt) in layer {
        *out.entry(BoundKey {
            l1,
            v,
            self_inverse: flag,
        })
        .or_insert(0) += cnt * scale;
    }
    out
}

/// Faces in rank order; within a rank, greedily the face closing the most
/// edges against already processed faces, which keeps the frontier small.
fn processing_order(map: &Map, labels: &[u32], rank_of: &[u32]) -> Vec<u32> {
    let m = map.faces();
    let mut done = vec![false; m];
    let mut out = Vec::with_capacity(m);
    let mut by_rank: Vec<u32> = (0..m as u32).collect();
    by_rank.sort_by_key(|&f| (rank_of[labels[f as usize] as usize], f));
    let mut start = 0;
    while start < m {
        let rank = rank_of[labels[by_rank[start] as usize] as usize];
        let mut end = start;
        while end < m && rank_of[labels[by_rank[end] as usize] as usize] == rank {
            end += 1;
        }
        for _ in start..end {
            let best = by_rank[start..end]
                .iter()
                .copied()
                .filter(|&f| !done[f as usize])
                .max_by_key(|&f| {
                    let closed = (0..3)
                        .filter(|&s| {
                            map.partner(Side::new(f, s))
                                .is_some_and(|o| done[o.face as usize])
                        })
                        .count();
                    (closed, core::cmp::Reverse(f))
                })
                .expect("rank group not exhausted");
            done[best as usize] = true;
            out.push(best);
        }
        start = end;
    }
    out
}

#[inline]
fn root(parent: &mut [u8; MAX_SLOTS + 3], mut x: u8) -> u8 {
    while parent[x as usize] != x {
        let up = parent[parent[x as usize] as usize];
        parent[x as usize] = up;
        x = up;
    }
    x
}

/// Exact sides of the inequality for a histogram key.
pub fn sides(m: usize, key: BoundKey, f: Q) -> (Q, Q) {
    let m = m as i64;
    let l1 = key.l1 as i64;
    let s = 3 * m - l1 - key.v as i64;
    let lhs = Q::from(3 * m - 2 * l1);
    let density = Q::new(1, 2) - f / 3;
    // 3m(1 − 2d) + 2(S − (3/2 + f)·m)
    let rhs = Q::from(3 * m) * (Q::from(1) - density * 2)
        + (Q::from(s) - (Q::new(3, 2) + f) * m) * 2;
    (lhs, rhs)
}

/// Outcome of the exhaustive check for one `m` and one `f`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct BoundTally {
    pub reduced: u64,
    pub violations: u64,
    pub equalities: u64,
    /// Equality although `G_k` has an edge.
    pub equality_with_edges: u64,
    /// Strict inequality although `G_k` is edgeless.
    pub strict_edgeless: u64,
    pub self_inverse: u64,
    pub violations_without_self_inverse: u64,
    pub equality_with_edges_without_self_inverse: u64,
}

impl BoundTally {
    pub fn holds_everywhere(&self) -> bool {
        self.violations == 0
    }

    pub fn equality_iff_edgeless(&self) -> bool {
        self.equality_with_edges == 0 && self.strict_edgeless == 0
    }
}

pub fn tally(m: usize, hist: &Histogram, f: Q) -> BoundTally {
    let mut t = BoundTally::default();
    for (&key, &c) in hist {
        let (lhs, rhs) = sides(m, key, f);
        let edgeless = key.l1 == 0;
        t.reduced += c;
        if key.self_inverse {
            t.self_inverse += c;
        }
        if lhs < rhs {
            t.violations += c;
            if !key.self_inverse {
                t.violations_without_self_inverse += c;
            }
        }
        if lhs == rhs {
            t.equalities += c;
            if !edgeless {
                t.equality_with_edges += c;
                if !key.self_inverse {
                    t.equality_with_edges_without_self_inverse += c;
                }
            }
        } else if lhs > rhs && edgeless {
            t.strict_edgeless += c;
        }
    }
    t
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::davkd::analysis::boundary_bound_check;
    use crate::davkd::diagram::{enumerate_davkd, Mode};

    /// Brute force over raw diagrams with the direct analysis.
    fn brute(m: usize) -> Histogram {
        let mut h = Histogram::new();
        for (d, _) in enumerate_davkd(m, Mode::Raw).unwrap() {
            if !d.is_reduced() {
                continue;
            }
            let c = boundary_bound_check(&d, Q::new(1, 10));
            let diff = c.lhs - c.rhs;
            assert!(diff.is_integer() && diff.to_integer() % 2 == 0);
            let key = BoundKey {
                l1: d.l1() as u32,
                v: (diff.to_integer() / 2) as i32,
                self_inverse: d.forces_self_inverse_letter(),
            };
            *h.entry(key).or_insert(0) += 1;
        }
        h
    }

    #[test]
    fn dp_matches_brute_force() {
        for m in 1..=4 {
            let mut dp = Histogram::new();
            for (map, _) in unrooted_maps(m) {
                for (k, c) in map_histogram(&map) {
                    *dp.entry(k).or_insert(0) += c;
                }
            }
            assert_eq!(dp, brute(m), "m = {m}");
            assert_eq!(histogram(m), dp, "m = {m}");
        }
    }

    #[test]
    fn mirror_images_share_histograms() {
        for (map, _) in unrooted_maps(5) {
            let mirror = map.mirrored();
            assert!(mirror.euler_characteristic() == 1);
            assert_eq!(map_histogram(&map), map_histogram(&mirror));
        }
    }

    #[test]
    fn sides_agree_with_direct_check() {
        // two faces, distinct labels, one edge: equality
        let key = BoundKey {
            l1: 1,
            v: 0,
            self_inverse: false,
        };
        for f in [Q::new(1, 10), Q::new(9, 10)] {
            let (l, r) = sides(2, key, f);
            assert_eq!(l, r);
        }
    }
}
