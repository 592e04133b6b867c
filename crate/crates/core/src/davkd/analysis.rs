//! Constraint graphs, degrees of freedom and the boundary inequality.

use alloc::vec::Vec;

use num_rational::Ratio;

use super::diagram::Diagram;

pub type Q = Ratio<i64>;

/// Vertex `(rank, position)` of a constraint graph; rank is 1-based.
pub type Vertex = (u32, u8);

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ConstraintEdge {
    /// First `G_i` containing the edge.
    pub step: u32,
    pub a: Vertex,
    pub b: Vertex,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConstraintAnalysis {
    /// `m₁ ≥ … ≥ m_k`.
    pub multiplicities: Vec<usize>,
    pub edges: Vec<ConstraintEdge>,
    /// `C_1, …, C_k`.
    pub components: Vec<u32>,
    pub f: Q,
    /// `d_i = C_i − i(3/2 + f)`.
    pub d: Vec<Q>,
}

impl ConstraintAnalysis {
    pub fn k(&self) -> usize {
        self.components.len()
    }

    pub fn min_d(&self) -> Q {
        *self.d.iter().min().expect("k >= 1")
    }

    /// Edges of `G_i`.
    pub fn graph(&self, i: u32) -> impl Iterator<Item = &ConstraintEdge> {
        self.edges.iter().filter(move |e| e.step <= i)
    }

    /// `G_k` has no edges at all (loops included).
    pub fn final_graph_edgeless(&self) -> bool {
        self.edges.is_empty()
    }
}

fn find(parent: &mut [usize], mut x: usize) -> usize {
    while parent[x] != x {
        parent[x] = parent[parent[x]];
        x = parent[x];
    }
    x
}

pub fn constraint_analysis(diag: &Diagram, f: Q) -> ConstraintAnalysis {
    let ranks = diag.ranks();
    let k = diag.k();
    let vertex = |face: u32, side: u8| -> Vertex {
        let d = diag.decoration(face);
        (ranks[d.label as usize], d.position(side))
    };
    let mut edges: Vec<ConstraintEdge> = diag
        .map()
        .internal_edges()
        .iter()
        .map(|&(x, y)| {
            let a = vertex(x.face, x.side);
            let b = vertex(y.face, y.side);
            ConstraintEdge {
                step: a.0.max(b.0),
                a,
                b,
            }
        })
        .collect();
    edges.sort_by_key(|e| e.step);

    let idx = |v: Vertex| 3 * (v.0 as usize - 1) + v.1 as usize;
    let mut parent: Vec<usize> = (0..3 * k).collect();
    let mut unions = 0u32;
    let mut components = Vec::with_capacity(k);
    let mut e = 0;
    for i in 1..=k as u32 {
        while e < edges.len() && edges[e].step == i {
            let ra = find(&mut parent, idx(edges[e].a));
            let rb = find(&mut parent, idx(edges[e].b));
            if ra != rb {
                parent[ra] = rb;
                unions += 1;
            }
            e += 1;
        }
        components.push(3 * i - unions);
    }
    let shift = Q::new(3, 2) + f;
    let d = components
        .iter()
        .enumerate()
        .map(|(i, &c)| Q::from(c as i64) - Q::from(i as i64 + 1) * shift)
        .collect();
    ConstraintAnalysis {
        multiplicities: diag.multiplicities(),
        edges,
        components,
        f,
        d,
    }
}

/// `min(1, min_i n^{C_i} p^i)`, evaluated in log space.
pub fn fulfillability_upper_bound(diag: &Diagram, n: u32, p: f64) -> f64 {
    if p <= 0.0 {
        return 0.0;
    }
    let a = constraint_analysis(diag, Q::from(0));
    let ln_n = libm::log(n as f64);
    let ln_p = libm::log(p);
    let best = a
        .components
        .iter()
        .enumerate()
        .map(|(i, &c)| c as f64 * ln_n + (i + 1) as f64 * ln_p)
        .fold(f64::INFINITY, f64::min);
    libm::exp(best.min(0.0))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BoundaryCheck {
    /// `|∂D|`.
    pub lhs: Q,
    /// `3|D|(1 − 2d) + 2 Σ d_i (m_i − m_{i+1})` with `d = 1/2 − f/3`.
    pub rhs: Q,
    pub holds: bool,
    pub equality: bool,
    pub edgeless: bool,
}

pub fn boundary_bound_check(diag: &Diagram, f: Q) -> BoundaryCheck {
    let a = constraint_analysis(diag, f);
    boundary_bound_from(diag, &a)
}

pub fn boundary_bound_from(diag: &Diagram, a: &ConstraintAnalysis) -> BoundaryCheck {
    let density = Q::new(1, 2) - a.f / 3;
    let m = diag.m() as i64;
    let mut rhs = Q::from(3 * m) * (Q::from(1) - density * 2);
    let mult = &a.multiplicities;
    for (i, di) in a.d.iter().enumerate() {
        let next = mult.get(i + 1).copied().unwrap_or(0);
        rhs += *di * Q::from(2 * (mult[i] - next) as i64);
    }
    let lhs = Q::from(diag.l2() as i64);
    BoundaryCheck {
        lhs,
        rhs,
        holds: lhs >= rhs,
        equality: lhs == rhs,
        edgeless: a.final_graph_edgeless(),
    }
}

/// Parses a plain decimal such as `0.3` or `2` into an exact rational.
pub fn parse_decimal(s: &str) -> Option<Q> {
    let s = s.trim();
    let (neg, body) = match s.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, s),
    };
    let (int, frac) = body.split_once('.').unwrap_or((body, ""));
    if int.is_empty() && frac.is_empty() {
        return None;
    }
    if !int.bytes().chain(frac.bytes()).all(|b| b.is_ascii_digit()) || frac.len() > 15 {
        return None;
    }
    let mut num: i64 = 0;
    for b in int.bytes().chain(frac.bytes()) {
        num = num.checked_mul(10)?.checked_add((b - b'0') as i64)?;
    }
    let den = 10i64.checked_pow(frac.len() as u32)?;
    let q = Q::new(num, den);
    Some(if neg { -q } else { q })
}

/// Edges of a constraint graph as vertex-index pairs over `3k` vertices.
pub fn edge_indices(a: &ConstraintAnalysis, step: u32) -> Vec<(usize, usize)> {
    let idx = |v: Vertex| 3 * (v.0 as usize - 1) + v.1 as usize;
    a.graph(step).map(|e| (idx(e.a), idx(e.b))).collect()
}

/// Connected components of a graph on `vertices` nodes.
pub fn component_count(vertices: usize, edges: &[(usize, usize)]) -> usize {
    let mut parent: Vec<usize> = (0..vertices).collect();
    let mut comps = vertices;
    for &(a, b) in edges {
        let ra = find(&mut parent, a);
        let rb = find(&mut parent, b);
        if ra != rb {
            parent[ra] = rb;
            comps -= 1;
        }
    }
    comps
}
