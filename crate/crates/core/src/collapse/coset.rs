//! Coset enumeration of the trivial subgroup (HLT strategy with
//! coincidence processing).

use alloc::collections::VecDeque;
use alloc::vec;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::letter::Letter;
use crate::presentation::Presentation;

const NONE: u32 = u32::MAX;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum CosetOutcome {
    /// The group has exactly this order.
    Finite(u64),
    /// The coset table reached `max_cosets` rows.
    Exceeded,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CosetRun {
    pub outcome: CosetOutcome,
    /// Total rows ever defined (the budget currency).
    pub defined: u64,
}

struct Table {
    letters: usize,
    cells: Vec<u32>,
    forward: Vec<u32>,
    max: usize,
    queue: VecDeque<u32>,
}

struct OutOfBudget;

impl Table {
    fn new(letters: usize, max: usize) -> Self {
        let mut t = Table {
            letters,
            cells: Vec::new(),
            forward: Vec::new(),
            max,
            queue: VecDeque::new(),
        };
        t.push_row();
        t
    }

    fn rows(&self) -> usize {
        self.forward.len()
    }

    fn push_row(&mut self) -> u32 {
        let id = self.forward.len() as u32;
        self.cells.extend(core::iter::repeat(NONE).take(self.letters));
        self.forward.push(id);
        id
    }

    #[inline]
    fn get(&self, c: u32, x: u32) -> u32 {
        self.cells[c as usize * self.letters + x as usize]
    }

    #[inline]
    fn set(&mut self, c: u32, x: u32, d: u32) {
        self.cells[c as usize * self.letters + x as usize] = d;
    }

    #[inline]
    fn alive(&self, c: u32) -> bool {
        self.forward[c as usize] == c
    }

    fn define(&mut self, c: u32, x: u32) -> Result<u32, OutOfBudget> {
        if self.rows() >= self.max {
            return Err(OutOfBudget);
        }
        let d = self.push_row();
        self.set(c, x, d);
        self.set(d, x ^ 1, c);
        Ok(d)
    }

    fn rep(&mut self, c: u32) -> u32 {
        let mut r = c;
        while self.forward[r as usize] != r {
            r = self.forward[r as usize];
        }
        let mut x = c;
        while self.forward[x as usize] != r {
            let next = self.forward[x as usize];
            self.forward[x as usize] = r;
            x = next;
        }
        r
    }

    fn merge(&mut self, a: u32, b: u32) {
        let a = self.rep(a);
        let b = self.rep(b);
        if a == b {
            return;
        }
        let (keep, gone) = if a < b { (a, b) } else { (b, a) };
        self.forward[gone as usize] = keep;
        self.queue.push_back(gone);
    }

    fn coincidence(&mut self, a: u32, b: u32) {
        self.merge(a, b);
        while let Some(e) = self.queue.pop_front() {
            for x in 0..self.letters as u32 {
                let f = self.get(e, x);
                if f == NONE {
                    continue;
                }
                if self.get(f, x ^ 1) == e {
                    self.set(f, x ^ 1, NONE);
                }
                let e1 = self.rep(e);
                let f1 = self.rep(f);
                let ex = self.get(e1, x);
                if ex != NONE {
                    self.merge(f1, ex);
                } else {
                    let fx = self.get(f1, x ^ 1);
                    if fx != NONE {
                        self.merge(e1, fx);
                    } else {
                        self.set(e1, x, f1);
                        self.set(f1, x ^ 1, e1);
                    }
                }
            }
        }
    }

    /// Scans `word` at coset `alpha`, defining cosets to complete it.
    fn scan_and_fill(&mut self, alpha: u32, word: &[u32]) -> Result<(), OutOfBudget> {
        let mut f = alpha;
        let mut b = alpha;
        let mut i = 0usize;
        let mut j = word.len();
        loop {
            while i < j {
                let next = self.get(f, word[i]);
                if next == NONE {
                    break;
                }
                f = next;
                i += 1;
            }
            if i == j {
                if f != b {
                    self.coincidence(f, b);
                }
                return Ok(());
            }
            while j > i {
                let prev = self.get(b, word[j - 1] ^ 1);
                if prev == NONE {
                    break;
                }
                b = prev;
                j -= 1;
            }
            if j == i {
                self.coincidence(f, b);
                return Ok(());
            }
            if j == i + 1 {
                self.set(f, word[i], b);
                self.set(b, word[i] ^ 1, f);
                return Ok(());
            }
            self.define(f, word[i])?;
        }
    }
}

/// Enumerates cosets of the trivial subgroup of `⟨g1..gn | words⟩`,
/// where each word is a sequence of letter codes.
pub fn coset_enumerate_words(n: u32, words: &[Vec<u32>], max_cosets: usize) -> CosetRun {
    assert!(max_cosets >= 1);
    let letters = 2 * n as usize;
    let mut t = Table::new(letters, max_cosets);
    let mut alpha = 0u32;
    let result = (|| -> Result<(), OutOfBudget> {
        while (alpha as usize) < t.rows() {
            if t.alive(alpha) {
                for w in words {
                    t.scan_and_fill(alpha, w)?;
                    if !t.alive(alpha) {
                        break;
                    }
                }
                if t.alive(alpha) {
                    for x in 0..letters as u32 {
                        if t.get(alpha, x) == NONE {
                            t.define(alpha, x)?;
                        }
                    }
                }
            }
            alpha += 1;
        }
        Ok(())
    })();
    let defined = t.rows() as u64;
    match result {
        Ok(()) => {
            let live = (0..t.rows() as u32).filter(|&c| t.alive(c)).count() as u64;
            CosetRun {
                outcome: CosetOutcome::Finite(live),
                defined,
            }
        }
        Err(OutOfBudget) => CosetRun {
            outcome: CosetOutcome::Exceeded,
            defined,
        },
    }
}

/// Relators of `p` plus the length-one relators `g = e` for `killed`.
pub fn relator_words(p: &Presentation, killed: &[u32]) -> Vec<Vec<u32>> {
    let mut words: Vec<Vec<u32>> = killed.iter().map(|&g| vec![Letter::pos(g).code()]).collect();
    words.extend(
        p.relators()
            .iter()
            .map(|r| r.letters().iter().map(|l| l.code()).collect()),
    );
    words
}

pub fn coset_enumerate(p: &Presentation, max_cosets: usize) -> CosetRun {
    coset_enumerate_words(p.n(), &relator_words(p, &[]), max_cosets)
}
