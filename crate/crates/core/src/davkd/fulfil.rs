//! Fulfillability of decorated diagrams by concrete presentations.

use alloc::vec;
use alloc::vec::Vec;

use hashbrown::HashMap;
use thiserror::Error;

use super::diagram::{Decoration, Diagram, Orientation};
use crate::letter::Letter;
use crate::presentation::{Presentation, RelatorSpace};
use crate::relator::Relator;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Error)]
pub enum FulfilError {
    #[error("search budget of {0} nodes exhausted")]
    BudgetExceeded(u64),
    #[error("exact evaluation supports at most 128 relator slots")]
    TooLarge,
}

/// Relator per label and the counter-clockwise side letters per face.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Witness {
    pub relators: Vec<Relator>,
    pub side_letters: Vec<[Letter; 3]>,
}

/// Letter read counter-clockwise along `side` of a face carrying `r`.
#[inline]
pub fn side_letter(d: Decoration, r: &Relator, side: u8) -> Letter {
    let l = r.letters()[d.position(side) as usize];
    match d.orientation {
        Orientation::Ccw => l,
        Orientation::Cw => l.inverse(),
    }
}

/// Internal-edge constraints grouped by the larger label of their faces.
struct Constraints {
    k: usize,
    /// `(face a, side a, face b, side b)` checked once labels up to the
    /// index are assigned.
    by_label: Vec<Vec<(Decoration, u8, Decoration, u8)>>,
}

impl Constraints {
    fn new(diag: &Diagram) -> Self {
        let k = diag.k();
        let mut by_label = vec![Vec::new(); k + 1];
        for (a, b) in diag.map().internal_edges() {
            let (da, db) = (diag.decoration(a.face), diag.decoration(b.face));
            let top = da.label.max(db.label) as usize;
            by_label[top].push((da, a.side, db, b.side));
        }
        Constraints { k, by_label }
    }

    fn consistent(&self, label: usize, chosen: &[Relator]) -> bool {
        self.by_label[label].iter().all(|&(da, sa, db, sb)| {
            let ra = &chosen[da.label as usize - 1];
            let rb = &chosen[db.label as usize - 1];
            side_letter(da, ra, sa) == side_letter(db, rb, sb).inverse()
        })
    }

    /// Calls `visit` on every consistent tuple; stops early when it returns
    /// `true`.
    fn search(
        &self,
        candidates: &[Relator],
        budget: u64,
        visit: &mut dyn FnMut(&[Relator]) -> bool,
    ) -> Result<bool, FulfilError> {
        let mut chosen: Vec<Relator> = Vec::with_capacity(self.k);
        let mut nodes = 0u64;
        self.rec(candidates, &mut chosen, &mut nodes, budget, visit)
    }

    fn rec(
        &self,
        candidates: &[Relator],
        chosen: &mut Vec<Relator>,
        nodes: &mut u64,
        budget: u64,
        visit: &mut dyn FnMut(&[Relator]) -> bool,
    ) -> Result<bool, FulfilError> {
        if chosen.len() == self.k {
            return Ok(visit(chosen));
        }
        let label = chosen.len() + 1;
        for r in candidates {
            *nodes += 1;
            if *nodes > budget {
                return Err(FulfilError::BudgetExceeded(budget));
            }
            chosen.push(*r);
            if self.consistent(label, chosen) && self.rec(candidates, chosen, nodes, budget, visit)? {
                return Ok(true);
            }
            chosen.pop();
        }
        Ok(false)
    }
}

/// Searches for an assignment of relators of `p` to labels such that every
/// internal edge reads mutually inverse letters on its two sides.
pub fn is_fulfillable(
    diag: &Diagram,
    p: &Presentation,
    node_budget: u64,
) -> Result<Option<Witness>, FulfilError> {
    let cons = Constraints::new(diag);
    let mut found: Option<Vec<Relator>> = None;
    cons.search(p.relators(), node_budget, &mut |t| {
        found = Some(t.to_vec());
        true
    })?;
    Ok(found.map(|relators| {
        let side_letters = diag
            .faces()
            .iter()
            .map(|&d| {
                let r = &relators[d.label as usize - 1];
                [0, 1, 2].map(|s| side_letter(d, r, s))
            })
            .collect();
        Witness {
            relators,
            side_letters,
        }
    }))
}

/// Exact `Pr[D is fulfillable in Γ(n, p)]` (linear slots), by enumerating
/// every consistent relator tuple and evaluating the union of the events
/// "all relators of the tuple are present".
pub fn exact_fulfillability_probability(diag: &Diagram, n: u32, p: f64) -> Result<f64, FulfilError> {
    let space = RelatorSpace::new(n);
    if space.count() > 128 {
        return Err(FulfilError::TooLarge);
    }
    let all: Vec<Relator> = space.iter().collect();
    let cons = Constraints::new(diag);
    let mut terms: Vec<u128> = Vec::new();
    cons.search(&all, u64::MAX, &mut |t| {
        let mask = t.iter().fold(0u128, |acc, r| acc | 1u128 << space.rank(r));
        terms.push(mask);
        false
    })?;
    Ok(monotone_dnf_probability(terms, p))
}

/// `Pr[∪_T {all variables of T are 1}]` for independent Bernoulli(p)
/// variables, by Shannon expansion with absorption and splitting into
/// variable-disjoint blocks.
pub fn monotone_dnf_probability(terms: Vec<u128>, p: f64) -> f64 {
    let mut memo = HashMap::new();
    dnf(terms, p, &mut memo)
}

fn absorb(mut terms: Vec<u128>) -> Vec<u128> {
    terms.sort_by_key(|t| (t.count_ones(), *t));
    terms.dedup();
    let mut kept: Vec<u128> = Vec::with_capacity(terms.len());
    for t in terms {
        if !kept.iter().any(|&k| k & t == k) {
            kept.push(t);
        }
    }
    kept.sort_unstable();
    kept
}

fn blocks(terms: &[u128]) -> Vec<Vec<u128>> {
    let mut groups: Vec<(u128, Vec<u128>)> = Vec::new();
    for &t in terms {
        let mut merged = (t, vec![t]);
        let mut i = 0;
        while i < groups.len() {
            if groups[i].0 & merged.0 != 0 {
                let (vars, ts) = groups.swap_remove(i);
                merged.0 |= vars;
                merged.1.extend(ts);
            } else {
                i += 1;
            }
        }
        groups.push(merged);
    }
    groups
        .into_iter()
        .map(|(_, mut ts)| {
            ts.sort_unstable();
            ts
        })
        .collect()
}

fn dnf(terms: Vec<u128>, p: f64, memo: &mut HashMap<Vec<u128>, f64>) -> f64 {
    let terms = absorb(terms);
    if terms.is_empty() {
        return 0.0;
    }
    if terms[0] == 0 {
        return 1.0;
    }
    if let Some(&v) = memo.get(&terms) {
        return v;
    }
    let parts = blocks(&terms);
    let value = if parts.len() > 1 {
        let none: f64 = parts.into_iter().map(|b| 1.0 - dnf(b, p, memo)).product();
        1.0 - none
    } else if terms.len() == 1 {
        libm::pow(p, terms[0].count_ones() as f64)
    } else {
        let mut freq = [0u32; 128];
        for t in &terms {
            let mut x = *t;
            while x != 0 {
                freq[x.trailing_zeros() as usize] += 1;
                x &= x - 1;
            }
        }
        let var = (0..128).max_by_key(|&v| (freq[v], core::cmp::Reverse(v))).expect("128 slots");
        let bit = 1u128 << var;
        let with: Vec<u128> = terms.iter().map(|&t| t & !bit).collect();
        let without: Vec<u128> = terms.iter().copied().filter(|&t| t & bit == 0).collect();
        p * dnf(with, p, memo) + (1.0 - p) * dnf(without, p, memo)
    };
    memo.insert(terms, value);
    value
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::davkd::map::{Map, Side};

    fn pres(n: u32, words: &[&str]) -> Presentation {
        let ws = words.iter().map(|w| {
            let t: Vec<Letter> = w
                .split_whitespace()
                .map(|s| Letter::parse_token(s).unwrap())
                .collect();
            [t[0], t[1], t[2]]
        });
        Presentation::from_words(n, ws).unwrap()
    }

    fn single() -> Diagram {
        Diagram::new(Map::single_face(), vec![Decoration::new(1, Orientation::Ccw, 0)]).unwrap()
    }

    fn mirror() -> Diagram {
        let glue = vec![
            Some(Side::new(1, 0)),
            None,
            None,
            Some(Side::new(0, 0)),
            None,
            None,
        ];
        Diagram::new(
            Map::from_glue(glue).unwrap(),
            vec![
                Decoration::new(1, Orientation::Ccw, 2),
                Decoration::new(1, Orientation::Cw, 2),
            ],
        )
        .unwrap()
    }

    #[test]
    fn single_face_takes_any_relator() {
        let p = pres(2, &["g1 g1 g2"]);
        let w = is_fulfillable(&single(), &p, 1000).unwrap().unwrap();
        assert_eq!(w.relators, p.relators().to_vec());
        assert!(is_fulfillable(&single(), &Presentation::free(2), 1000)
            .unwrap()
            .is_none());
    }

    #[test]
    fn mirror_pair_is_fulfillable() {
        assert!(!mirror().is_reduced());
        let p = pres(2, &["g1 g1 g2"]);
        let w = is_fulfillable(&mirror(), &p, 1000).unwrap().unwrap();
        assert_eq!(w.side_letters[0][0], w.side_letters[1][0].inverse());
    }

    #[test]
    fn single_face_exact_probability() {
        let p = 0.02;
        let exact = exact_fulfillability_probability(&single(), 2, p).unwrap();
        let expected = 1.0 - libm::pow(1.0 - p, 28.0);
        assert!((exact - expected).abs() < 1e-12);
    }

    #[test]
    fn dnf_matches_brute_force() {
        // terms over 5 variables
        let terms = vec![0b00011, 0b00110, 0b11000, 0b10101];
        let p: f64 = 0.3;
        let mut brute = 0.0;
        for x in 0u32..32 {
            if terms.iter().any(|&t| (x as u128) & t == t) {
                let ones = x.count_ones() as i32;
                brute += p.powi(ones) * (1.0 - p).powi(5 - ones);
            }
        }
        assert!((monotone_dnf_probability(terms, p) - brute).abs() < 1e-12);
    }

    #[test]
    fn budget_is_enforced() {
        let p = Presentation::new(2, RelatorSpace::new(2).iter()).unwrap();
        assert_eq!(
            is_fulfillable(&mirror(), &Presentation::free(2), 0),
            Ok(None)
        );
        assert!(matches!(
            is_fulfillable(&single(), &p, 0),
            Err(FulfilError::BudgetExceeded(0))
        ));
    }
}
