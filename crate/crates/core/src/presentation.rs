use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::letter::Letter;
use crate::relator::{Relator, RelatorError};

/// A triangular presentation `⟨g1..gn | R⟩`.
///
/// Relators are kept sorted and deduplicated, which is the canonical order
/// used by the text format and by certificate indices.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Presentation {
    n: u32,
    relators: Vec<Relator>,
}

impl Presentation {
    pub fn free(n: u32) -> Self {
        Presentation {
            n,
            relators: Vec::new(),
        }
    }

    pub fn new<I>(n: u32, relators: I) -> Result<Self, RelatorError>
    where
        I: IntoIterator<Item = Relator>,
    {
        let mut rels: Vec<Relator> = relators.into_iter().collect();
        for r in &rels {
            if r.max_generator() > n {
                return Err(RelatorError::GeneratorOutOfRange {
                    generator: r.max_generator(),
                    n,
                });
            }
        }
        rels.sort_unstable();
        rels.dedup();
        Ok(Presentation { n, relators: rels })
    }

    /// Builds from raw words, validating each.
    pub fn from_words<I>(n: u32, words: I) -> Result<Self, RelatorError>
    where
        I: IntoIterator<Item = [Letter; 3]>,
    {
        let rels = words
            .into_iter()
            .map(|w| Relator::new(w, n))
            .collect::<Result<Vec<_>, _>>()?;
        Self::new(n, rels)
    }

    pub(crate) fn from_sorted_unchecked(n: u32, relators: Vec<Relator>) -> Self {
        debug_assert!(relators.windows(2).all(|w| w[0] < w[1]));
        Presentation { n, relators }
    }

    #[inline]
    pub fn n(&self) -> u32 {
        self.n
    }

    #[inline]
    pub fn relators(&self) -> &[Relator] {
        &self.relators
    }

    pub fn len(&self) -> usize {
        self.relators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.relators.is_empty()
    }

    pub fn contains(&self, r: &Relator) -> bool {
        self.relators.binary_search(r).is_ok()
    }

    /// Set union; both sides must share `n`.
    pub fn union(&self, other: &Presentation) -> Presentation {
        assert_eq!(self.n, other.n, "presentations over different alphabets");
        let mut rels = Vec::with_capacity(self.len() + other.len());
        let (mut i, mut j) = (0, 0);
        let (a, b) = (&self.relators, &other.relators);
        while i < a.len() && j < b.len() {
            match a[i].cmp(&b[j]) {
                core::cmp::Ordering::Less => {
                    rels.push(a[i]);
                    i += 1;
                }
                core::cmp::Ordering::Greater => {
                    rels.push(b[j]);
                    j += 1;
                }
                core::cmp::Ordering::Equal => {
                    rels.push(a[i]);
                    i += 1;
                    j += 1;
                }
            }
        }
        rels.extend_from_slice(&a[i..]);
        rels.extend_from_slice(&b[j..]);
        Presentation {
            n: self.n,
            relators: rels,
        }
    }

    pub fn is_subset_of(&self, other: &Presentation) -> bool {
        self.n == other.n && self.relators.iter().all(|r| other.contains(r))
    }
}

/// The set of all cyclically reduced length-3 words over `n` generators.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RelatorSpace {
    n: u32,
}

impl RelatorSpace {
    pub fn new(n: u32) -> Self {
        assert!(n >= 1);
        RelatorSpace { n }
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    /// `2n(4n² − 6n + 3)`.
    pub fn count(&self) -> u64 {
        let n = self.n as u64;
        2 * n * (4 * n * n + 3 - 6 * n)
    }

    /// Valid continuations `(b, c)` for any fixed first letter.
    fn per_first_letter(&self) -> u64 {
        let n = self.n as u64;
        4 * n * n + 3 - 6 * n
    }

    /// Every valid word exactly once, lexicographic in letter order.
    pub fn iter(&self) -> impl Iterator<Item = Relator> + Clone {
        let alphabet = 2 * self.n;
        (0..alphabet).flat_map(move |a| {
            (0..alphabet)
                .filter(move |&b| b != a ^ 1)
                .flat_map(move |b| {
                    (0..alphabet)
                        .filter(move |&c| c != b ^ 1 && c != a ^ 1)
                        .map(move |c| {
                            Relator::new_unchecked([
                                Letter::from_code(a),
                                Letter::from_code(b),
                                Letter::from_code(c),
                            ])
                        })
                })
        })
    }

    /// Position of `r` in [`RelatorSpace::iter`].
    pub fn rank(&self, r: &Relator) -> u64 {
        let [a, b, c] = r.letters().map(|l| l.code() as u64);
        let big = 2 * self.n as u64;
        let mut rank = a * self.per_first_letter();
        for b2 in 0..b {
            if b2 == a ^ 1 {
                continue;
            }
            rank += if b2 == a { big - 1 } else { big - 2 };
        }
        rank += (0..c).filter(|&c2| c2 != b ^ 1 && c2 != a ^ 1).count() as u64;
        rank
    }

    /// Number of rotation classes (slots under `cyclic_slots`).
    pub fn cyclic_class_count(&self) -> u64 {
        let powers = 2 * self.n as u64;
        (self.count() - powers) / 3 + powers
    }
}
