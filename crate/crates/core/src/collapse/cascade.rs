//! Deduction cascade over the letters of a triangular presentation.
//!
//! Classes live in a union-find over the `2n` letters plus the identity.
//! Every merge of `x ~ y` is paired with `x⁻¹ ~ y⁻¹`, so the partition
//! commutes with inversion at all times. Rules, for a relation word `xyz = e`
//! taken from any rotation of a relator or of its formal inverse:
//!
//! * **R1** two words agreeing class-wise on `xy` force their `z` together;
//! * **R2** `x ~ y⁻¹` forces `z ~ e`;
//! * **R3** `x ~ e` forces `y ~ z⁻¹`.
//!
//! Each rule is a consequence of the relations, so every identification
//! holds in the presented group.

use alloc::collections::VecDeque;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use hashbrown::hash_map::Entry;
use hashbrown::HashMap;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::letter::Letter;
use crate::presentation::Presentation;
use crate::relator::Relator;

/// A node of the deduction state: a letter or the identity `e`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Term {
    Identity,
    Letter(Letter),
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Identity => f.write_str("e"),
            Term::Letter(l) => write!(f, "{l}"),
        }
    }
}

impl Serialize for Term {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Term {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        if s == "e" {
            return Ok(Term::Identity);
        }
        Letter::parse_token(&s)
            .map(Term::Letter)
            .ok_or_else(|| serde::de::Error::custom("expected e, gK or GK"))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Rule {
    /// A generator forced to `e` from outside (e.g. `R_strong`).
    #[serde(rename = "kill")]
    Kill,
    #[serde(rename = "R1")]
    PairMatch,
    #[serde(rename = "R2")]
    InverseAdjacent,
    #[serde(rename = "R3")]
    IdentityLetter,
}

/// One effective merge of the cascade.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CascadeStep {
    pub rule: Rule,
    /// Indices into the presentation's sorted relator list.
    pub relators: Vec<u32>,
    pub merged: (Term, Term),
}

#[derive(Clone, Debug)]
pub struct DeductionState {
    n: u32,
    parent: Vec<u32>,
    size: Vec<u32>,
    log: Vec<CascadeStep>,
}

impl DeductionState {
    pub fn new(n: u32) -> Self {
        let nodes = 2 * n as usize + 1;
        DeductionState {
            n,
            parent: (0..nodes as u32).collect(),
            size: vec![1; nodes],
            log: Vec::new(),
        }
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    #[inline]
    fn identity(&self) -> u32 {
        2 * self.n
    }

    #[inline]
    fn inv(&self, x: u32) -> u32 {
        if x == self.identity() {
            x
        } else {
            x ^ 1
        }
    }

    fn node(&self, t: Term) -> u32 {
        match t {
            Term::Identity => self.identity(),
            Term::Letter(l) => l.code(),
        }
    }

    fn term(&self, x: u32) -> Term {
        if x == self.identity() {
            Term::Identity
        } else {
            Term::Letter(Letter::from_code(x))
        }
    }

    fn find(&mut self, mut x: u32) -> u32 {
        let mut root = x;
        while self.parent[root as usize] != root {
            root = self.parent[root as usize];
        }
        while self.parent[x as usize] != root {
            let next = self.parent[x as usize];
            self.parent[x as usize] = root;
            x = next;
        }
        root
    }

    fn root(&self, mut x: u32) -> u32 {
        while self.parent[x as usize] != x {
            x = self.parent[x as usize];
        }
        x
    }

    pub fn equivalent(&self, a: Term, b: Term) -> bool {
        self.root(self.node(a)) == self.root(self.node(b))
    }

    pub fn is_identity(&self, a: Term) -> bool {
        self.equivalent(a, Term::Identity)
    }

    /// All generators collapsed into the identity class.
    pub fn is_trivial(&self) -> bool {
        let e = self.root(self.identity());
        (0..2 * self.n).all(|x| self.root(x) == e)
    }

    pub fn class_count(&self) -> usize {
        (0..self.parent.len() as u32)
            .filter(|&x| self.parent[x as usize] == x)
            .count()
    }

    /// Canonical partition: each node mapped to the least node of its class.
    pub fn partition(&self) -> Vec<u32> {
        let len = self.parent.len();
        let mut least = vec![u32::MAX; len];
        for x in 0..len as u32 {
            let r = self.root(x) as usize;
            least[r] = least[r].min(x);
        }
        (0..len as u32)
            .map(|x| least[self.root(x) as usize])
            .collect()
    }

    pub fn log(&self) -> &[CascadeStep] {
        &self.log
    }

    pub fn into_log(self) -> Vec<CascadeStep> {
        self.log
    }

    /// Full scan: `x ~ y ⇔ x⁻¹ ~ y⁻¹` for all node pairs.
    pub fn involution_closed(&self) -> bool {
        let len = self.parent.len() as u32;
        let roots: Vec<u32> = (0..len).map(|x| self.root(x)).collect();
        for x in 0..len {
            for y in x + 1..len {
                let same = roots[x as usize] == roots[y as usize];
                let same_inv =
                    roots[self.inv(x) as usize] == roots[self.inv(y) as usize];
                if same != same_inv {
                    return false;
                }
            }
        }
        true
    }

    /// Union of `a` with `b` and of `a⁻¹` with `b⁻¹`. Returns absorbed roots.
    fn merge_raw(&mut self, a: u32, b: u32) -> [Option<(u32, u32)>; 2] {
        let mut out = [None, None];
        for (slot, (x, y)) in [(a, b), (self.inv(a), self.inv(b))].into_iter().enumerate() {
            let rx = self.find(x);
            let ry = self.find(y);
            if rx == ry {
                continue;
            }
            let (keep, gone) = if self.size[rx as usize] >= self.size[ry as usize] {
                (rx, ry)
            } else {
                (ry, rx)
            };
            self.parent[gone as usize] = keep;
            self.size[keep as usize] += self.size[gone as usize];
            out[slot] = Some((keep, gone));
        }
        out
    }

    /// State reached by applying `log` blindly (premises unchecked).
    pub fn from_log(n: u32, log: &[CascadeStep]) -> Self {
        let mut st = DeductionState::new(n);
        for step in log {
            st.apply(step);
        }
        st.log = log.to_vec();
        st
    }

    /// Applies a logged step without checking its premise.
    fn apply(&mut self, step: &CascadeStep) {
        let a = self.node(step.merged.0);
        let b = self.node(step.merged.1);
        self.merge_raw(a, b);
    }
}

#[derive(Clone, Copy)]
struct Word {
    x: u32,
    y: u32,
    z: u32,
    relator: u32,
}

fn relation_words(r: &Relator) -> [[Letter; 3]; 6] {
    let inv = r.inverse();
    [
        r.letters(),
        r.rotation(1).letters(),
        r.rotation(2).letters(),
        inv.letters(),
        inv.rotation(1).letters(),
        inv.rotation(2).letters(),
    ]
}

struct Pending {
    a: u32,
    b: u32,
    rule: Rule,
    relators: Vec<u32>,
}

struct Closure<'a> {
    st: &'a mut DeductionState,
    words: Vec<Word>,
    uses: Vec<Vec<u32>>,
    table: HashMap<(u32, u32), u32>,
    queue: VecDeque<Pending>,
}

impl Closure<'_> {
    fn check(&mut self, w_idx: u32) {
        let w = self.words[w_idx as usize];
        let rx = self.st.find(w.x);
        let ry = self.st.find(w.y);
        let rz = self.st.find(w.z);
        let e = self.st.identity();
        let re = self.st.find(e);

        match self.table.entry((rx, ry)) {
            Entry::Occupied(o) => {
                let other = self.words[*o.get() as usize];
                if self.st.find(other.z) != rz {
                    self.queue.push_back(Pending {
                        a: other.z,
                        b: w.z,
                        rule: Rule::PairMatch,
                        relators: vec![other.relator, w.relator],
                    });
                }
            }
            Entry::Vacant(v) => {
                v.insert(w_idx);
            }
        }

        let y_inv = self.st.inv(w.y);
        if rx == self.st.find(y_inv) && rz != re {
            self.queue.push_back(Pending {
                a: w.z,
                b: e,
                rule: Rule::InverseAdjacent,
                relators: vec![w.relator],
            });
        }
        if rx == re {
            let z_inv = self.st.inv(w.z);
            if ry != self.st.find(z_inv) {
                self.queue.push_back(Pending {
                    a: w.y,
                    b: z_inv,
                    rule: Rule::IdentityLetter,
                    relators: vec![w.relator],
                });
            }
        }
    }

    fn run(&mut self) {
        while let Some(p) = self.queue.pop_front() {
            if self.st.find(p.a) == self.st.find(p.b) {
                continue;
            }
            let e = self.st.identity();
            let e_root_before = self.st.find(e);
            let a_root = self.st.find(p.a);
            let b_root = self.st.find(p.b);
            // the non-identity side newly joins e: its words need R3 checks
            let joining_e = if a_root == e_root_before {
                Some(b_root)
            } else if b_root == e_root_before {
                Some(a_root)
            } else {
                None
            };
            let mut recheck: Vec<u32> = Vec::new();
            if let Some(side) = joining_e {
                let inv_side = self.st.inv(side);
                let inv_side = self.st.find(inv_side);
                recheck.extend_from_slice(&self.uses[side as usize]);
                if inv_side != side {
                    recheck.extend_from_slice(&self.uses[inv_side as usize]);
                }
            }

            let step = CascadeStep {
                rule: p.rule,
                relators: p.relators,
                merged: (self.st.term(p.a), self.st.term(p.b)),
            };
            self.st.log.push(step);
            let absorbed = self.st.merge_raw(p.a, p.b);

            for (keep, gone) in absorbed.into_iter().flatten() {
                let moved = core::mem::take(&mut self.uses[gone as usize]);
                recheck.extend_from_slice(&moved);
                self.uses[keep as usize].extend(moved);
            }
            recheck.sort_unstable();
            recheck.dedup();
            for w in recheck {
                self.check(w);
            }
        }
    }
}

/// Least fixpoint of the cascade rules on `p`, with the generators in
/// `killed` (1-based) forced to the identity first.
pub fn cascade_close_with(p: &Presentation, killed: &[u32]) -> DeductionState {
    let mut st = DeductionState::new(p.n());
    let nodes = 2 * p.n() as usize + 1;
    let mut words = Vec::with_capacity(6 * p.len());
    for (i, r) in p.relators().iter().enumerate() {
        for w in relation_words(r) {
            words.push(Word {
                x: w[0].code(),
                y: w[1].code(),
                z: w[2].code(),
                relator: i as u32,
            });
        }
    }
    let mut uses = vec![Vec::new(); nodes];
    for (i, w) in words.iter().enumerate() {
        uses[w.x as usize].push(i as u32);
        if w.y != w.x {
            uses[w.y as usize].push(i as u32);
        }
    }
    let mut c = Closure {
        st: &mut st,
        words,
        uses,
        table: HashMap::new(),
        queue: VecDeque::new(),
    };
    for &g in killed {
        assert!(g >= 1 && g <= p.n(), "killed generator out of range");
        let e = c.st.identity();
        c.queue.push_back(Pending {
            a: Letter::pos(g).code(),
            b: e,
            rule: Rule::Kill,
            relators: Vec::new(),
        });
    }
    c.run();
    for w in 0..c.words.len() as u32 {
        c.check(w);
    }
    c.run();
    st
}

pub fn cascade_close(p: &Presentation) -> DeductionState {
    cascade_close_with(p, &[])
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum ReplayError {
    #[error("step {step}: relator index out of range")]
    BadIndex { step: usize },
    #[error("step {step}: premise of {rule:?} does not hold")]
    PremiseFails { step: usize, rule: Rule },
    #[error("step {step}: kill of a generator not in the killed set")]
    UnexpectedKill { step: usize },
    #[error("replayed partition differs from the claimed state")]
    StateMismatch,
}

/// Naive partition used by the replay checker: label per node, relabel on merge.
struct NaivePartition {
    n: u32,
    label: Vec<u32>,
}

impl NaivePartition {
    fn new(n: u32) -> Self {
        NaivePartition {
            n,
            label: (0..2 * n + 1).collect(),
        }
    }
    fn node(&self, t: Term) -> u32 {
        match t {
            Term::Identity => 2 * self.n,
            Term::Letter(l) => l.code(),
        }
    }
    fn same(&self, a: Term, b: Term) -> bool {
        self.label[self.node(a) as usize] == self.label[self.node(b) as usize]
    }
    fn inv(t: Term) -> Term {
        match t {
            Term::Identity => Term::Identity,
            Term::Letter(l) => Term::Letter(l.inverse()),
        }
    }
    fn merge(&mut self, a: Term, b: Term) {
        for (x, y) in [(a, b), (Self::inv(a), Self::inv(b))] {
            let lx = self.label[self.node(x) as usize];
            let ly = self.label[self.node(y) as usize];
            if lx != ly {
                for l in self.label.iter_mut() {
                    if *l == ly {
                        *l = lx;
                    }
                }
            }
        }
    }
}

fn same_pair(merged: (Term, Term), a: Term, b: Term) -> bool {
    (merged.0 == a && merged.1 == b) || (merged.0 == b && merged.1 == a)
}

/// Replays `log` against `p` from scratch, checking every premise, and
/// compares the result with `claimed`.
pub fn replay(
    p: &Presentation,
    killed: &[u32],
    log: &[CascadeStep],
    claimed: &DeductionState,
) -> Result<(), ReplayError> {
    let mut part = NaivePartition::new(p.n());
    let rels = p.relators();
    let get = |step: usize, i: u32| rels.get(i as usize).ok_or(ReplayError::BadIndex { step });
    let letter = |l: Letter| Term::Letter(l);

    for (k, step) in log.iter().enumerate() {
        let ok = match step.rule {
            Rule::Kill => match step.merged {
                (Term::Letter(l), Term::Identity) if killed.contains(&l.generator()) => true,
                _ => return Err(ReplayError::UnexpectedKill { step: k }),
            },
            Rule::PairMatch => {
                if step.relators.len() != 2 {
                    return Err(ReplayError::BadIndex { step: k });
                }
                let r1 = get(k, step.relators[0])?;
                let r2 = get(k, step.relators[1])?;
                relation_words(r1).iter().any(|u| {
                    relation_words(r2).iter().any(|v| {
                        part.same(letter(u[0]), letter(v[0]))
                            && part.same(letter(u[1]), letter(v[1]))
                            && same_pair(step.merged, letter(u[2]), letter(v[2]))
                    })
                })
            }
            Rule::InverseAdjacent => {
                let r = get(k, *step.relators.first().ok_or(ReplayError::BadIndex { step: k })?)?;
                relation_words(r).iter().any(|u| {
                    part.same(letter(u[0]), letter(u[1].inverse()))
                        && same_pair(step.merged, letter(u[2]), Term::Identity)
                })
            }
            Rule::IdentityLetter => {
                let r = get(k, *step.relators.first().ok_or(ReplayError::BadIndex { step: k })?)?;
                relation_words(r).iter().any(|u| {
                    part.same(letter(u[0]), Term::Identity)
                        && same_pair(step.merged, letter(u[1]), letter(u[2].inverse()))
                })
            }
        };
        if !ok {
            return Err(ReplayError::PremiseFails {
                step: k,
                rule: step.rule,
            });
        }
        part.merge(step.merged.0, step.merged.1);
    }

    let mut rebuilt = DeductionState::new(p.n());
    for step in log {
        rebuilt.apply(step);
    }
    let labels_match = {
        let a = rebuilt.partition();
        let b = claimed.partition();
        // naive labels must induce the same partition as well
        let len = part.label.len();
        a == b
            && (0..len).all(|x| {
                (0..len).all(|y| (part.label[x] == part.label[y]) == (a[x] == a[y]))
            })
    };
    if labels_match {
        Ok(())
    } else {
        Err(ReplayError::StateMismatch)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presentation::RelatorSpace;

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

    #[test]
    fn empty_presentation_has_no_merges() {
        let st = cascade_close(&Presentation::free(3));
        assert_eq!(st.class_count(), 7);
        assert!(st.log().is_empty());
        assert!(!st.is_trivial());
    }

    #[test]
    fn three_relator_collapse() {
        // aab, aac, abc⁻¹
        let p = pres(3, &["g1 g1 g2", "g1 g1 g3", "g1 g2 G3"]);
        let st = cascade_close(&p);
        assert!(st.is_trivial());
        assert!(st.involution_closed());
        replay(&p, &[], st.log(), &st).unwrap();
    }

    #[test]
    fn full_space_n2_collapses() {
        let p = Presentation::new(2, RelatorSpace::new(2).iter()).unwrap();
        let st = cascade_close(&p);
        assert!(st.is_trivial());
        replay(&p, &[], st.log(), &st).unwrap();
    }

    #[test]
    fn cyclic_group_does_not_collapse() {
        let p = pres(1, &["g1 g1 g1"]);
        let st = cascade_close(&p);
        assert!(!st.is_trivial());
    }

    #[test]
    fn kill_forces_identity() {
        let p = pres(2, &["g1 g2 g2"]);
        let st = cascade_close_with(&p, &[1]);
        // a = e, then R3 gives b = b⁻¹
        assert!(st.is_identity(Term::Letter(Letter::pos(1))));
        assert!(st.equivalent(
            Term::Letter(Letter::pos(2)),
            Term::Letter(Letter::neg(2))
        ));
        replay(&p, &[1], st.log(), &st).unwrap();
        assert!(replay(&p, &[], st.log(), &st).is_err());
    }

    #[test]
    fn tampered_log_is_rejected() {
        let p = pres(3, &["g1 g1 g2", "g1 g1 g3", "g1 g2 G3"]);
        let st = cascade_close(&p);
        let mut log = st.log().to_vec();
        log[0].merged = (Term::Letter(Letter::pos(1)), Term::Identity);
        assert!(replay(&p, &[], &log, &st).is_err());
    }
}
