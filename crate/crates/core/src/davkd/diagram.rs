//! Decorated diagrams: a disc map plus a label, orientation and basepoint
//! per face.

use alloc::vec;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::map::{unrooted_maps, Map, MapError, Side};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Orientation {
    Ccw,
    Cw,
}

impl Orientation {
    pub fn flipped(self) -> Self {
        match self {
            Orientation::Ccw => Orientation::Cw,
            Orientation::Cw => Orientation::Ccw,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Decoration {
    /// 1-based.
    pub label: u32,
    pub orientation: Orientation,
    pub basepoint: u8,
}

impl Decoration {
    pub fn new(label: u32, orientation: Orientation, basepoint: u8) -> Self {
        Decoration {
            label,
            orientation,
            basepoint,
        }
    }

    /// Index of the relator letter read along planar side `side`.
    ///
    /// Counter-clockwise faces read `r` forward from the basepoint side;
    /// clockwise faces read it backwards, so the side reads the inverse
    /// letter when traversed counter-clockwise.
    #[inline]
    pub fn position(&self, side: u8) -> u8 {
        match self.orientation {
            Orientation::Ccw => (side + 3 - self.basepoint) % 3,
            Orientation::Cw => (self.basepoint + 2 + 3 - side) % 3,
        }
    }

    /// The six `(orientation, basepoint)` choices, in order.
    pub fn choices(label: u32) -> [Decoration; 6] {
        let mut out = [Decoration::new(label, Orientation::Ccw, 0); 6];
        for (i, d) in out.iter_mut().enumerate() {
            d.orientation = if i < 3 {
                Orientation::Ccw
            } else {
                Orientation::Cw
            };
            d.basepoint = (i % 3) as u8;
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum DiagramError {
    #[error(transparent)]
    Map(#[from] MapError),
    #[error("expected {expected} face decorations, got {got}")]
    FaceCount { expected: usize, got: usize },
    #[error("labels must form the range 1..=k")]
    Labels,
    #[error("basepoint must be 0, 1 or 2")]
    Basepoint,
    #[error("side {0:?} listed twice or missing from the edge list")]
    EdgeList(Side),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Diagram {
    map: Map,
    faces: Vec<Decoration>,
}

/// Renumbers labels by first appearance; returns the number of labels.
pub fn normalize_labels(faces: &mut [Decoration]) -> u32 {
    let mut map: Vec<(u32, u32)> = Vec::new();
    for d in faces.iter_mut() {
        let next = map.len() as u32 + 1;
        let new = match map.iter().find(|(old, _)| *old == d.label) {
            Some(&(_, new)) => new,
            None => {
                map.push((d.label, next));
                next
            }
        };
        d.label = new;
    }
    map.len() as u32
}

impl Diagram {
    pub fn new(map: Map, faces: Vec<Decoration>) -> Result<Self, DiagramError> {
        if faces.len() != map.faces() {
            return Err(DiagramError::FaceCount {
                expected: map.faces(),
                got: faces.len(),
            });
        }
        if faces.iter().any(|d| d.basepoint > 2) {
            return Err(DiagramError::Basepoint);
        }
        let k = faces.iter().map(|d| d.label).max().unwrap_or(0);
        let mut present = vec![false; k as usize + 1];
        for d in &faces {
            if d.label == 0 {
                return Err(DiagramError::Labels);
            }
            present[d.label as usize] = true;
        }
        if present[1..].iter().any(|&p| !p) {
            return Err(DiagramError::Labels);
        }
        Ok(Diagram { map, faces })
    }

    pub fn map(&self) -> &Map {
        &self.map
    }

    pub fn faces(&self) -> &[Decoration] {
        &self.faces
    }

    pub fn decoration(&self, face: u32) -> Decoration {
        self.faces[face as usize]
    }

    pub fn position(&self, s: Side) -> u8 {
        self.faces[s.face as usize].position(s.side)
    }

    /// `m = |D|`.
    pub fn m(&self) -> usize {
        self.faces.len()
    }

    pub fn k(&self) -> usize {
        self.faces.iter().map(|d| d.label).max().unwrap_or(0) as usize
    }

    pub fn l1(&self) -> usize {
        self.map.internal_edge_count()
    }

    pub fn l2(&self) -> usize {
        self.map.boundary_length()
    }

    /// Labels ordered by multiplicity (descending), ties by first
    /// appearance. Entry `i` is the label of rank `i + 1`.
    pub fn rank_order(&self) -> Vec<u32> {
        let k = self.k();
        let mut count = vec![0usize; k + 1];
        let mut first = vec![usize::MAX; k + 1];
        for (i, d) in self.faces.iter().enumerate() {
            count[d.label as usize] += 1;
            first[d.label as usize] = first[d.label as usize].min(i);
        }
        let mut labels: Vec<u32> = (1..=k as u32).collect();
        labels.sort_by_key(|&l| (core::cmp::Reverse(count[l as usize]), first[l as usize]));
        labels
    }

    /// Rank (1-based) of each label, indexed by label.
    pub fn ranks(&self) -> Vec<u32> {
        let order = self.rank_order();
        let mut rank = vec![0u32; order.len() + 1];
        for (i, &l) in order.iter().enumerate() {
            rank[l as usize] = i as u32 + 1;
        }
        rank
    }

    /// `m₁ ≥ m₂ ≥ … ≥ m_k`.
    pub fn multiplicities(&self) -> Vec<usize> {
        let k = self.k();
        let mut count = vec![0usize; k + 1];
        for d in &self.faces {
            count[d.label as usize] += 1;
        }
        self.rank_order()
            .iter()
            .map(|&l| count[l as usize])
            .collect()
    }

    /// No internal edge joins two equally labelled faces of opposite
    /// orientation at the same position.
    pub fn is_reduced(&self) -> bool {
        self.map.internal_edges().iter().all(|&(a, b)| {
            let (da, db) = (self.decoration(a.face), self.decoration(b.face));
            !(da.label == db.label
                && da.orientation != db.orientation
                && da.position(a.side) == db.position(b.side))
        })
    }

    /// Some internal edge joins equally labelled faces of equal orientation
    /// at the same position, so its letter would have to be its own inverse.
    pub fn forces_self_inverse_letter(&self) -> bool {
        self.map.internal_edges().iter().any(|&(a, b)| {
            let (da, db) = (self.decoration(a.face), self.decoration(b.face));
            da.label == db.label
                && da.orientation == db.orientation
                && da.position(a.side) == db.position(b.side)
        })
    }

    /// Image under a map automorphism (see [`Map::automorphisms`]), with
    /// labels renormalized.
    pub fn transported(&self, aut: &[(u32, u8)]) -> Diagram {
        let mut faces = vec![Decoration::new(1, Orientation::Ccw, 0); self.m()];
        for (f, d) in self.faces.iter().enumerate() {
            let (img, off) = aut[f];
            faces[img as usize] = Decoration {
                label: d.label,
                orientation: d.orientation,
                basepoint: (d.basepoint + off) % 3,
            };
        }
        normalize_labels(&mut faces);
        Diagram {
            map: self.map.clone(),
            faces,
        }
    }

    pub fn to_json(&self) -> DiagramJson {
        let mut edges = Vec::new();
        for (a, b) in self.map.internal_edges() {
            edges.push(EdgeJson {
                a: [a.face, a.side as u32],
                b: Some([b.face, b.side as u32]),
                boundary: false,
            });
        }
        for a in self.map.boundary_sides() {
            edges.push(EdgeJson {
                a: [a.face, a.side as u32],
                b: None,
                boundary: true,
            });
        }
        edges.sort_by_key(|e| e.a);
        DiagramJson {
            faces: self.faces.clone(),
            edges,
        }
    }

    pub fn from_json(j: &DiagramJson) -> Result<Diagram, DiagramError> {
        let m = j.faces.len();
        let mut glue: Vec<Option<Option<Side>>> = vec![None; 3 * m];
        let side = |x: [u32; 2]| -> Result<Side, DiagramError> {
            if x[0] as usize >= m || x[1] > 2 {
                return Err(DiagramError::Map(MapError::OutOfRange(Side::new(
                    x[0],
                    x[1].min(2) as u8,
                ))));
            }
            Ok(Side::new(x[0], x[1] as u8))
        };
        let mut put = |s: Side, v: Option<Side>| -> Result<(), DiagramError> {
            let slot = &mut glue[3 * s.face as usize + s.side as usize];
            if slot.is_some() {
                return Err(DiagramError::EdgeList(s));
            }
            *slot = Some(v);
            Ok(())
        };
        for e in &j.edges {
            let a = side(e.a)?;
            match (e.boundary, e.b) {
                (true, None) => put(a, None)?,
                (false, Some(b)) => {
                    let b = side(b)?;
                    if a == b {
                        return Err(DiagramError::Map(MapError::SelfGlued));
                    }
                    put(a, Some(b))?;
                    put(b, Some(a))?;
                }
                _ => return Err(DiagramError::EdgeList(a)),
            }
        }
        let mut full = Vec::with_capacity(3 * m);
        for (i, g) in glue.into_iter().enumerate() {
            match g {
                Some(v) => full.push(v),
                None => return Err(DiagramError::EdgeList(Side::new((i / 3) as u32, (i % 3) as u8))),
            }
        }
        Diagram::new(Map::from_glue(full)?, j.faces.clone())
    }
}

/// Interchange form: face decorations and an edge list of face-side pairs.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DiagramJson {
    pub faces: Vec<Decoration>,
    pub edges: Vec<EdgeJson>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeJson {
    /// `[face, side]`.
    pub a: [u32; 2],
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub b: Option<[u32; 2]>,
    pub boundary: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Raw,
    Canonical,
}

/// Restricted growth strings of length `m`: every set partition of the faces
/// with blocks numbered by first appearance.
pub fn labelings(m: usize) -> Vec<Vec<u32>> {
    fn rec(cur: &mut Vec<u32>, max: u32, m: usize, out: &mut Vec<Vec<u32>>) {
        if cur.len() == m {
            out.push(cur.clone());
            return;
        }
        for l in 1..=max + 1 {
            cur.push(l);
            rec(cur, max.max(l), m, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::with_capacity(m), 0, m, &mut out);
    out
}

/// Bell number `B(m)`.
pub fn bell(m: usize) -> u64 {
    let mut row = vec![1u64];
    for _ in 0..m {
        let mut next = vec![*row.last().expect("nonempty")];
        for &x in &row {
            let last = *next.last().expect("nonempty");
            next.push(last + x);
        }
        row = next;
    }
    row[0]
}

/// Raw diagram count for `m` faces: maps × labelings × `6^m`.
pub fn raw_count(m: usize) -> u64 {
    unrooted_maps(m).len() as u64 * bell(m) * 6u64.pow(m as u32)
}

/// Streams diagrams with `m` faces. Raw mode yields every decoration of
/// every map with orbit size 1; canonical mode yields one representative
/// per automorphism orbit together with the orbit size.
pub struct DiagramStream {
    mode: Mode,
    maps: Vec<(Map, Vec<Vec<(u32, u8)>>)>,
    labelings: Vec<Vec<u32>>,
    map_idx: usize,
    lab_idx: usize,
    deco: Vec<u8>,
    done: bool,
}

impl DiagramStream {
    pub fn new(m: usize, mode: Mode) -> Result<Self, MapError> {
        if m == 0 {
            return Err(MapError::Empty);
        }
        let maps = unrooted_maps(m)
            .into_iter()
            .map(|(map, _)| {
                let auts = map.automorphisms();
                (map, auts)
            })
            .collect();
        Ok(DiagramStream {
            mode,
            maps,
            labelings: labelings(m),
            map_idx: 0,
            lab_idx: 0,
            deco: vec![0; m],
            done: false,
        })
    }

    fn current(&self) -> Diagram {
        let (map, _) = &self.maps[self.map_idx];
        let labels = &self.labelings[self.lab_idx];
        let faces = self
            .deco
            .iter()
            .zip(labels)
            .map(|(&c, &l)| Decoration::choices(l)[c as usize])
            .collect();
        Diagram {
            map: map.clone(),
            faces,
        }
    }

    fn advance(&mut self) {
        for c in self.deco.iter_mut().rev() {
            *c += 1;
            if *c < 6 {
                return;
            }
            *c = 0;
        }
        self.lab_idx += 1;
        if self.lab_idx < self.labelings.len() {
            return;
        }
        self.lab_idx = 0;
        self.map_idx += 1;
        if self.map_idx == self.maps.len() {
            self.done = true;
        }
    }
}

impl Iterator for DiagramStream {
    type Item = (Diagram, u64);

    fn next(&mut self) -> Option<Self::Item> {
        while !self.done {
            let idx = self.map_idx;
            let d = self.current();
            self.advance();
            match self.mode {
                Mode::Raw => return Some((d, 1)),
                Mode::Canonical => {
                    let auts = &self.maps[idx].1;
                    let key = |x: &Diagram| x.faces.clone();
                    let own = key(&d);
                    let mut minimal = true;
                    let mut stab = 0u64;
                    for a in auts {
                        let img = key(&d.transported(a));
                        if img < own {
                            minimal = false;
                            break;
                        }
                        if img == own {
                            stab += 1;
                        }
                    }
                    if minimal {
                        return Some((d, auts.len() as u64 / stab));
                    }
                }
            }
        }
        None
    }
}

/// Convenience: collects [`DiagramStream`].
pub fn enumerate_davkd(m: usize, mode: Mode) -> Result<Vec<(Diagram, u64)>, MapError> {
    Ok(DiagramStream::new(m, mode)?.collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pair(labels: [u32; 2], o: [Orientation; 2], b: [u8; 2]) -> Diagram {
        // faces 0 and 1 share side 0 of each
        let glue = vec![
            Some(Side::new(1, 0)),
            None,
            None,
            Some(Side::new(0, 0)),
            None,
            None,
        ];
        let map = Map::from_glue(glue).unwrap();
        Diagram::new(
            map,
            vec![
                Decoration::new(labels[0], o[0], b[0]),
                Decoration::new(labels[1], o[1], b[1]),
            ],
        )
        .unwrap()
    }

    #[test]
    fn positions_are_permutations() {
        for d in Decoration::choices(1) {
            let mut seen = [false; 3];
            for s in 0..3 {
                seen[d.position(s) as usize] = true;
            }
            assert!(seen.iter().all(|&x| x));
        }
    }

    #[test]
    fn m1_raw_has_six() {
        let all = enumerate_davkd(1, Mode::Raw).unwrap();
        assert_eq!(all.len(), 6);
        assert!(all.iter().all(|(d, _)| d.l1() == 0 && d.l2() == 3));
        assert_eq!(raw_count(1), 6);
    }

    #[test]
    fn mirror_pair_is_not_reduced() {
        use Orientation::*;
        // side 0 has position 1 under ccw or cw with basepoint 2
        let d = pair([1, 1], [Ccw, Cw], [2, 2]);
        assert_eq!(d.position(Side::new(0, 0)), 1);
        assert_eq!(d.position(Side::new(1, 0)), 1);
        assert!(!d.is_reduced());
        let same = pair([1, 1], [Ccw, Ccw], [2, 2]);
        assert!(same.is_reduced());
        assert!(same.forces_self_inverse_letter());
        assert!(pair([1, 2], [Ccw, Cw], [2, 2]).is_reduced());
    }

    #[test]
    fn bell_numbers() {
        let b: Vec<u64> = (0..=8).map(bell).collect();
        assert_eq!(b, vec![1, 1, 2, 5, 15, 52, 203, 877, 4140]);
        for m in 1..=6 {
            assert_eq!(labelings(m).len() as u64, bell(m));
        }
    }

    #[test]
    fn canonical_orbits_sum_to_raw() {
        for m in 1..=3 {
            let raw = enumerate_davkd(m, Mode::Raw).unwrap().len() as u64;
            assert_eq!(raw, raw_count(m));
            let orbit_sum: u64 = enumerate_davkd(m, Mode::Canonical)
                .unwrap()
                .iter()
                .map(|(_, o)| o)
                .sum();
            assert_eq!(orbit_sum, raw);
        }
    }

    #[test]
    fn json_round_trip() {
        for (d, _) in enumerate_davkd(3, Mode::Canonical).unwrap().into_iter().take(50) {
            let back = Diagram::from_json(&d.to_json()).unwrap();
            assert_eq!(back, d);
        }
    }

    #[test]
    fn rank_order_breaks_ties_by_first_appearance() {
        use Orientation::*;
        let d = pair([1, 2], [Ccw, Ccw], [0, 0]);
        assert_eq!(d.rank_order(), vec![1, 2]);
        assert_eq!(d.multiplicities(), vec![1, 1]);
    }
}
