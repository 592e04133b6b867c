use core::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::letter::Letter;

/// Which of the three cyclic-reduction conditions failed.
///
/// `AB` is `a = b⁻¹`, `BC` is `b = c⁻¹`, `CA` is `c = a⁻¹` (the wrap-around).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum ReductionFailure {
    AB,
    BC,
    CA,
}

impl fmt::Display for ReductionFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ReductionFailure::AB => "a = b^-1",
            ReductionFailure::BC => "b = c^-1",
            ReductionFailure::CA => "c = a^-1",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum RelatorError {
    #[error("word is not cyclically reduced ({0})")]
    NotCyclicallyReduced(ReductionFailure),
    #[error("generator {generator} out of range for n = {n}")]
    GeneratorOutOfRange { generator: u32, n: u32 },
}

/// A cyclically reduced word `abc` of length three.
///
/// Identity is the exact linear word; `abc`, `bca` and `cab` are distinct.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(into = "[Letter; 3]", try_from = "[Letter; 3]")]
pub struct Relator([Letter; 3]);

impl From<Relator> for [Letter; 3] {
    fn from(r: Relator) -> Self {
        r.0
    }
}

/// Checks cyclic reduction only; the alphabet bound is the caller's.
impl TryFrom<[Letter; 3]> for Relator {
    type Error = RelatorError;

    fn try_from(word: [Letter; 3]) -> Result<Self, RelatorError> {
        match reduction_failure(word) {
            Some(fail) => Err(RelatorError::NotCyclicallyReduced(fail)),
            None => Ok(Relator(word)),
        }
    }
}

/// First failing reduction condition of `word`, if any.
pub fn reduction_failure(word: [Letter; 3]) -> Option<ReductionFailure> {
    let [a, b, c] = word;
    if a.is_inverse_of(b) {
        Some(ReductionFailure::AB)
    } else if b.is_inverse_of(c) {
        Some(ReductionFailure::BC)
    } else if c.is_inverse_of(a) {
        Some(ReductionFailure::CA)
    } else {
        None
    }
}

impl Relator {
    /// Validates `word` over `n` generators.
    pub fn new(word: [Letter; 3], n: u32) -> Result<Self, RelatorError> {
        for l in word {
            if l.generator() > n {
                return Err(RelatorError::GeneratorOutOfRange {
                    generator: l.generator(),
                    n,
                });
            }
        }
        match reduction_failure(word) {
            Some(fail) => Err(RelatorError::NotCyclicallyReduced(fail)),
            None => Ok(Relator(word)),
        }
    }

    /// Caller guarantees `word` is cyclically reduced.
    pub(crate) fn new_unchecked(word: [Letter; 3]) -> Self {
        debug_assert!(reduction_failure(word).is_none());
        Relator(word)
    }

    #[inline]
    pub fn letters(&self) -> [Letter; 3] {
        self.0
    }

    /// Rotation by `k` places: `rotation(1)` of `abc` is `bca`.
    pub fn rotation(&self, k: usize) -> Relator {
        let w = self.0;
        Relator([w[k % 3], w[(k + 1) % 3], w[(k + 2) % 3]])
    }

    /// The formal inverse `c⁻¹b⁻¹a⁻¹`.
    pub fn inverse(&self) -> Relator {
        let [a, b, c] = self.0;
        Relator([c.inverse(), b.inverse(), a.inverse()])
    }

    /// Lexicographically least rotation.
    pub fn canonical_rotation(&self) -> Relator {
        let r1 = self.rotation(1);
        let r2 = self.rotation(2);
        let mut best = *self;
        if r1 < best {
            best = r1;
        }
        if r2 < best {
            best = r2;
        }
        best
    }

    pub fn max_generator(&self) -> u32 {
        self.0.iter().map(|l| l.generator()).max().unwrap_or(0)
    }

    /// Signed exponent sum of each generator, indexed `0..n`.
    pub fn exponent_sums(&self, out: &mut [i64]) {
        for l in self.0 {
            let g = (l.generator() - 1) as usize;
            out[g] += if l.code() & 1 == 0 { 1 } else { -1 };
        }
    }
}

impl fmt::Display for Relator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {} {}", self.0[0], self.0[1], self.0[2])
    }
}

impl fmt::Debug for Relator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}{}", self.0[0], self.0[1], self.0[2])
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn a() -> Letter {
        Letter::pos(1)
    }
    fn b() -> Letter {
        Letter::pos(2)
    }

    #[test]
    fn single_letter_cube_is_valid() {
        let s = Letter::pos(1);
        assert!(Relator::new([s, s, s], 1).is_ok());
    }

    #[test]
    fn wraparound_failure_is_reported() {
        let err = Relator::new([a(), b(), a().inverse()], 2).unwrap_err();
        assert_eq!(err, RelatorError::NotCyclicallyReduced(ReductionFailure::CA));
    }

    #[test]
    fn aab_inverse_is_valid() {
        // a≠a⁻¹, a≠(b⁻¹)⁻¹=b, b⁻¹≠a⁻¹
        assert!(Relator::new([a(), a(), b().inverse()], 2).is_ok());
    }

    #[test]
    fn out_of_range_generator() {
        let err = Relator::new([a(), a(), Letter::pos(3)], 2).unwrap_err();
        assert_eq!(err, RelatorError::GeneratorOutOfRange { generator: 3, n: 2 });
    }

    #[test]
    fn inverse_and_rotation_stay_reduced() {
        let r = Relator::new([a(), a(), b().inverse()], 2).unwrap();
        assert!(reduction_failure(r.inverse().letters()).is_none());
        for k in 0..3 {
            assert!(reduction_failure(r.rotation(k).letters()).is_none());
        }
        assert_eq!(r.inverse().inverse(), r);
    }
}
