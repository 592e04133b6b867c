//! Triangulated disc maps.
//!
//! Face `f` has sides `0, 1, 2` in counter-clockwise order; side `s` runs
//! from corner `s` to corner `s + 1`. Gluing is orientation-reversing:
//! side `(f, s)` glued to `(g, t)` identifies corner `(f, s)` with corner
//! `(g, t + 1)` and corner `(f, s + 1)` with corner `(g, t)`.

use alloc::vec;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Side {
    pub face: u32,
    pub side: u8,
}

impl Side {
    pub fn new(face: u32, side: u8) -> Self {
        debug_assert!(side < 3);
        Side { face, side }
    }

    #[inline]
    fn slot(self) -> usize {
        3 * self.face as usize + self.side as usize
    }

    #[inline]
    fn from_slot(slot: usize) -> Self {
        Side {
            face: (slot / 3) as u32,
            side: (slot % 3) as u8,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum MapError {
    #[error("a map needs at least one face")]
    Empty,
    #[error("side {0:?} refers to a face out of range")]
    OutOfRange(Side),
    #[error("gluing of side {0:?} is not reciprocal")]
    NotReciprocal(Side),
    #[error("a side is glued to itself")]
    SelfGlued,
    #[error("faces are not connected")]
    Disconnected,
    #[error("surface is not a disc (Euler characteristic {chi}, {boundary_cycles} boundary cycles)")]
    NotDisc { chi: i64, boundary_cycles: usize },
}

/// A connected gluing of triangles that forms a disc.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Map {
    glue: Vec<Option<Side>>,
}

fn find(parent: &mut [u32], mut x: u32) -> u32 {
    while parent[x as usize] != x {
        parent[x as usize] = parent[parent[x as usize] as usize];
        x = parent[x as usize];
    }
    x
}

fn union(parent: &mut [u32], a: u32, b: u32) -> bool {
    let ra = find(parent, a);
    let rb = find(parent, b);
    if ra == rb {
        return false;
    }
    parent[ra.max(rb) as usize] = ra.min(rb);
    true
}

/// `(V, E, boundary cycles)` of a partial gluing in which `None` sides are
/// boundary.
fn surface_counts(glue: &[Option<Side>]) -> (usize, usize, usize) {
    let slots = glue.len();
    let mut parent: Vec<u32> = (0..slots as u32).collect();
    let mut glued = 0;
    for (i, g) in glue.iter().enumerate() {
        if let Some(o) = g {
            let (f, s) = (i / 3, i % 3);
            let (h, t) = (o.face as usize, o.side as usize);
            if i < o.slot() {
                glued += 1;
            }
            let corner = |face: usize, k: usize| (3 * face + k % 3) as u32;
            union(&mut parent, corner(f, s), corner(h, t + 1));
            union(&mut parent, corner(f, s + 1), corner(h, t));
        }
    }
    let vertices = (0..slots as u32).filter(|&c| find(&mut parent, c) == c).count();
    let open = glue.iter().filter(|g| g.is_none()).count();
    let edges = glued + open;

    // boundary walk: after boundary side (f, s), the next one starts at
    // corner (f, s + 1); rotate through glued sides around that corner
    let mut seen = vec![false; slots];
    let mut cycles = 0;
    for start in 0..slots {
        if glue[start].is_some() || seen[start] {
            continue;
        }
        cycles += 1;
        let mut cur = start;
        while !seen[cur] {
            seen[cur] = true;
            let (f, s) = (cur / 3, cur % 3);
            let mut next = 3 * f + (s + 1) % 3;
            while let Some(o) = glue[next] {
                next = 3 * o.face as usize + (o.side as usize + 1) % 3;
            }
            cur = next;
        }
    }
    (vertices, edges, cycles)
}

/// Twice the genus of a connected partial gluing.
fn twice_genus(glue: &[Option<Side>], faces: usize) -> i64 {
    let (v, e, b) = surface_counts(glue);
    let chi = v as i64 - e as i64 + faces as i64;
    2 - chi - b as i64
}

impl Map {
    /// Validates a gluing given per slot (`3f + s`).
    pub fn from_glue(glue: Vec<Option<Side>>) -> Result<Self, MapError> {
        if glue.is_empty() || glue.len() % 3 != 0 {
            return Err(MapError::Empty);
        }
        let faces = glue.len() / 3;
        for (i, g) in glue.iter().enumerate() {
            if let Some(o) = g {
                if o.face as usize >= faces || o.side >= 3 {
                    return Err(MapError::OutOfRange(*o));
                }
                if o.slot() == i {
                    return Err(MapError::SelfGlued);
                }
                if glue[o.slot()] != Some(Side::from_slot(i)) {
                    return Err(MapError::NotReciprocal(Side::from_slot(i)));
                }
            }
        }
        let map = Map { glue };
        if !map.is_connected() {
            return Err(MapError::Disconnected);
        }
        let (v, e, b) = surface_counts(&map.glue);
        let chi = v as i64 - e as i64 + faces as i64;
        if chi != 1 || b != 1 {
            return Err(MapError::NotDisc {
                chi,
                boundary_cycles: b,
            });
        }
        Ok(map)
    }

    pub fn single_face() -> Self {
        Map {
            glue: vec![None; 3],
        }
    }

    pub fn faces(&self) -> usize {
        self.glue.len() / 3
    }

    pub fn partner(&self, side: Side) -> Option<Side> {
        self.glue[side.slot()]
    }

    pub fn glue(&self) -> &[Option<Side>] {
        &self.glue
    }

    /// Internal edges as `(a, b)` with `a < b`.
    pub fn internal_edges(&self) -> Vec<(Side, Side)> {
        self.glue
            .iter()
            .enumerate()
            .filter_map(|(i, g)| {
                let a = Side::from_slot(i);
                g.filter(|&b| a < b).map(|b| (a, b))
            })
            .collect()
    }

    pub fn boundary_sides(&self) -> Vec<Side> {
        (0..self.glue.len())
            .filter(|&i| self.glue[i].is_none())
            .map(Side::from_slot)
            .collect()
    }

    /// `l₁`.
    pub fn internal_edge_count(&self) -> usize {
        self.glue.iter().filter(|g| g.is_some()).count() / 2
    }

    /// `l₂ = |∂D|`.
    pub fn boundary_length(&self) -> usize {
        self.glue.iter().filter(|g| g.is_none()).count()
    }

    pub fn vertex_count(&self) -> usize {
        surface_counts(&self.glue).0
    }

    pub fn boundary_cycle_count(&self) -> usize {
        surface_counts(&self.glue).2
    }

    /// `V − E + F`.
    pub fn euler_characteristic(&self) -> i64 {
        let (v, e, _) = surface_counts(&self.glue);
        v as i64 - e as i64 + self.faces() as i64
    }

    pub fn is_connected(&self) -> bool {
        let faces = self.faces();
        let mut parent: Vec<u32> = (0..faces as u32).collect();
        let mut comps = faces;
        for (a, b) in self.internal_edges() {
            if union(&mut parent, a.face, b.face) {
                comps -= 1;
            }
        }
        comps == 1
    }

    /// Some internal edge has the same face on both sides.
    pub fn has_fold(&self) -> bool {
        self.internal_edges().iter().any(|(a, b)| a.face == b.face)
    }

    /// Breadth-first relabelling from `root`: the root face becomes face 0
    /// with `root.side` as side 0, and each newly reached face is numbered
    /// in order of discovery with the reaching side as its side 0.
    ///
    /// Returns the code (`0` boundary, `1 + 3g + t` glued to new side
    /// `(g, t)`, per new face and side) and for each new face its original
    /// face and side offset.
    pub fn bfs_code(&self, root: Side) -> (Vec<u32>, Vec<(u32, u8)>) {
        let faces = self.faces();
        let mut new_index = vec![u32::MAX; faces];
        let mut offset = vec![0u8; faces];
        let mut order: Vec<(u32, u8)> = Vec::with_capacity(faces);
        new_index[root.face as usize] = 0;
        offset[root.face as usize] = root.side;
        order.push((root.face, root.side));
        let mut code = Vec::with_capacity(3 * faces);
        let mut i = 0;
        while i < order.len() {
            let (f, off) = order[i];
            for s in 0..3u8 {
                let orig = Side::new(f, (s + off) % 3);
                match self.partner(orig) {
                    None => code.push(0),
                    Some(o) => {
                        let g = o.face as usize;
                        if new_index[g] == u32::MAX {
                            new_index[g] = order.len() as u32;
                            offset[g] = o.side;
                            order.push((o.face, o.side));
                        }
                        let t = (o.side + 3 - offset[g]) % 3;
                        code.push(1 + 3 * new_index[g] + t as u32);
                    }
                }
            }
            i += 1;
        }
        (code, order)
    }

    /// Rebuilds a map from a BFS code (faces numbered as in the code).
    pub fn from_code(code: &[u32]) -> Result<Self, MapError> {
        let glue = code
            .iter()
            .map(|&c| {
                (c != 0).then(|| Side::from_slot(c as usize - 1))
            })
            .collect();
        Map::from_glue(glue)
    }

    /// Reflection of the map: each face has its side order reversed.
    pub fn mirrored(&self) -> Map {
        let flip = |s: Side| Side::new(s.face, (3 - s.side) % 3);
        let mut glue = vec![None; self.glue.len()];
        for (i, g) in self.glue.iter().enumerate() {
            glue[flip(Side::from_slot(i)).slot()] = g.map(flip);
        }
        Map { glue }
    }

    /// Minimal BFS code over all `3m` roots.
    pub fn canonical_code(&self) -> Vec<u32> {
        (0..self.glue.len())
            .map(|i| self.bfs_code(Side::from_slot(i)).0)
            .min()
            .expect("nonempty map")
    }

    /// The map renumbered so that its code from `(0, 0)` is canonical.
    pub fn canonical(&self) -> Map {
        Map::from_code(&self.canonical_code()).expect("relabelling preserves discs")
    }

    /// Orientation-preserving automorphisms, as `(image face, side offset)`
    /// per face: side `(f, s)` maps to `(image, s + offset)`.
    pub fn automorphisms(&self) -> Vec<Vec<(u32, u8)>> {
        let (base, base_order) = self.bfs_code(Side::new(0, 0));
        // base_order maps new -> original from root (0,0)
        let mut inv_base = vec![(0u32, 0u8); self.faces()];
        for (new, &(orig, off)) in base_order.iter().enumerate() {
            inv_base[orig as usize] = (new as u32, off);
        }
        let mut out = Vec::new();
        for i in 0..self.glue.len() {
            let (code, order) = self.bfs_code(Side::from_slot(i));
            if code != base {
                continue;
            }
            // original face f = base_order[k] corresponds to new face k,
            // which under this root is original face order[k]
            let mut aut = vec![(0u32, 0u8); self.faces()];
            for f in 0..self.faces() {
                let (k, off_a) = inv_base[f];
                let (img, off_b) = order[k as usize];
                aut[f] = (img, (off_b + 3 - off_a) % 3);
            }
            out.push(aut);
        }
        out
    }
}

/// All rooted triangulated discs with `m` faces and no folds, as BFS codes
/// from their root, in lexicographic order of generation.
pub fn rooted_codes(m: usize) -> Vec<Vec<u32>> {
    assert!(m >= 1);
    let mut glue: Vec<Option<Side>> = vec![None; 3 * m];
    let mut decided = vec![false; 3 * m];
    let mut out = Vec::new();
    extend(&mut glue, &mut decided, 1, 0, m, &mut out);
    out
}

fn extend(
    glue: &mut Vec<Option<Side>>,
    decided: &mut Vec<bool>,
    created: usize,
    from: usize,
    m: usize,
    out: &mut Vec<Vec<u32>>,
) {
    let Some(slot) = (from..3 * created).find(|&i| !decided[i]) else {
        let (v, e, b) = surface_counts(glue);
        if created == m && b == 1 && v as i64 - e as i64 + m as i64 == 1 {
            let code = glue
                .iter()
                .map(|g| g.map_or(0, |s| 1 + s.slot() as u32))
                .collect();
            out.push(code);
        }
        return;
    };
    let face = slot / 3;
    let view = 3 * created;

    decided[slot] = true;
    extend(glue, decided, created, slot + 1, m, out);

    for other in 3 * (face + 1)..view {
        if decided[other] {
            continue;
        }
        decided[other] = true;
        glue[slot] = Some(Side::from_slot(other));
        glue[other] = Some(Side::from_slot(slot));
        if twice_genus(&glue[..view], created) == 0 {
            extend(glue, decided, created, slot + 1, m, out);
        }
        glue[slot] = None;
        glue[other] = None;
        decided[other] = false;
    }

    if created < m {
        let new = 3 * created;
        decided[new] = true;
        glue[slot] = Some(Side::from_slot(new));
        glue[new] = Some(Side::from_slot(slot));
        extend(glue, decided, created + 1, slot + 1, m, out);
        glue[slot] = None;
        glue[new] = None;
        decided[new] = false;
    }
    decided[slot] = false;
}

/// One representative per isomorphism class, numbered canonically, with
/// the size of its automorphism group.
pub fn unrooted_maps(m: usize) -> Vec<(Map, usize)> {
    rooted_codes(m)
        .into_iter()
        .filter_map(|code| {
            let map = Map::from_code(&code).expect("generated codes are discs");
            let roots: Vec<Vec<u32>> = (0..3 * m)
                .map(|i| map.bfs_code(Side::from_slot(i)).0)
                .collect();
            let min = roots.iter().min().expect("nonempty");
            (*min == code).then(|| {
                let aut = roots.iter().filter(|c| **c == code).count();
                (map, aut)
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_triangle() {
        let m = Map::single_face();
        assert_eq!(m.internal_edge_count(), 0);
        assert_eq!(m.boundary_length(), 3);
        assert_eq!(m.vertex_count(), 3);
        assert_eq!(m.euler_characteristic(), 1);
        assert_eq!(rooted_codes(1).len(), 1);
    }

    #[test]
    fn small_rooted_counts() {
        let counts: Vec<usize> = (1..=5).map(|m| rooted_codes(m).len()).collect();
        assert_eq!(counts, vec![1, 6, 30, 109, 498]);
    }

    #[test]
    fn unrooted_orbits_sum_to_rooted() {
        for m in 1..=5 {
            let rooted = rooted_codes(m).len();
            let sum: usize = unrooted_maps(m).iter().map(|(_, aut)| 3 * m / aut).sum();
            assert_eq!(sum, rooted, "m = {m}");
        }
    }

    #[test]
    fn codes_round_trip() {
        for code in rooted_codes(4) {
            let map = Map::from_code(&code).unwrap();
            assert_eq!(map.bfs_code(Side::new(0, 0)).0, code);
            assert!(!map.has_fold());
        }
    }

    #[test]
    fn automorphisms_preserve_gluing() {
        for (map, aut) in unrooted_maps(4) {
            let auts = map.automorphisms();
            assert_eq!(auts.len(), aut);
            for a in auts {
                for (x, y) in map.internal_edges() {
                    let img = |s: Side| {
                        let (f, off) = a[s.face as usize];
                        Side::new(f, (s.side + off) % 3)
                    };
                    assert_eq!(map.partner(img(x)), Some(img(y)));
                }
            }
        }
    }

    #[test]
    fn fold_is_a_disc_but_rejected_self_glue() {
        // sides 0 and 1 of one triangle glued: a cone
        let glue = vec![Some(Side::new(0, 1)), Some(Side::new(0, 0)), None];
        let map = Map::from_glue(glue).unwrap();
        assert!(map.has_fold());
        assert_eq!(map.boundary_length(), 1);
        let bad = vec![Some(Side::new(0, 0)), None, None];
        assert_eq!(Map::from_glue(bad), Err(MapError::SelfGlued));
    }

    #[test]
    fn non_disc_rejected() {
        // two triangles glued along all three sides: a sphere
        let glue = vec![
            Some(Side::new(1, 0)),
            Some(Side::new(1, 2)),
            Some(Side::new(1, 1)),
            Some(Side::new(0, 0)),
            Some(Side::new(0, 2)),
            Some(Side::new(0, 1)),
        ];
        assert!(matches!(Map::from_glue(glue), Err(MapError::NotDisc { .. })));
    }
}
