use core::fmt;

use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Sign {
    Pos,
    Neg,
}

/// A signed generator `g_k^{±1}`.
///
/// Packed as `2 * (k - 1) + neg`, so the derived ordering is
/// `g1 < G1 < g2 < G2 < ...` and inversion flips the low bit.
///
/// Serialized as its token, `g3` or `G3`.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Letter(u32);

impl Letter {
    /// `generator` is 1-based.
    pub fn new(generator: u32, sign: Sign) -> Self {
        assert!(generator >= 1, "generators are 1-based");
        let neg = matches!(sign, Sign::Neg) as u32;
        Letter(2 * (generator - 1) + neg)
    }

    pub fn pos(generator: u32) -> Self {
        Self::new(generator, Sign::Pos)
    }

    pub fn neg(generator: u32) -> Self {
        Self::new(generator, Sign::Neg)
    }

    #[inline]
    pub fn from_code(code: u32) -> Self {
        Letter(code)
    }

    #[inline]
    pub fn code(self) -> u32 {
        self.0
    }

    #[inline]
    pub fn generator(self) -> u32 {
        self.0 / 2 + 1
    }

    #[inline]
    pub fn sign(self) -> Sign {
        if self.0 & 1 == 0 {
            Sign::Pos
        } else {
            Sign::Neg
        }
    }

    #[inline]
    pub fn inverse(self) -> Self {
        Letter(self.0 ^ 1)
    }

    #[inline]
    pub fn is_inverse_of(self, other: Letter) -> bool {
        self.0 == other.0 ^ 1
    }

    /// Parses `gK` / `GK` (K ≥ 1, decimal).
    pub fn parse_token(token: &str) -> Option<Letter> {
        let (sign, digits) = match token.as_bytes().first()? {
            b'g' => (Sign::Pos, &token[1..]),
            b'G' => (Sign::Neg, &token[1..]),
            _ => return None,
        };
        if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
            return None;
        }
        let k: u32 = digits.parse().ok()?;
        (k >= 1).then(|| Letter::new(k, sign))
    }

    /// All `2n` letters in code order.
    pub fn alphabet(n: u32) -> impl Iterator<Item = Letter> + Clone {
        (0..2 * n).map(Letter)
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.sign() {
            Sign::Pos => write!(f, "g{}", self.generator()),
            Sign::Neg => write!(f, "G{}", self.generator()),
        }
    }
}

impl Serialize for Letter {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Letter {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        struct Token;
        impl serde::de::Visitor<'_> for Token {
            type Value = Letter;
            fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str("a letter token such as g1 or G2")
            }
            fn visit_str<E: serde::de::Error>(self, v: &str) -> Result<Letter, E> {
                Letter::parse_token(v).ok_or_else(|| E::custom(format_args!("bad letter token {v:?}")))
            }
        }
        d.deserialize_str(Token)
    }
}

impl fmt::Debug for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inverse_is_involution() {
        for l in Letter::alphabet(5) {
            assert_eq!(l.inverse().inverse(), l);
            assert_ne!(l.inverse(), l);
            assert_eq!(l.inverse().generator(), l.generator());
            assert_ne!(l.inverse().sign(), l.sign());
        }
    }

    #[test]
    fn ordering_interleaves_inverses() {
        assert!(Letter::pos(1) < Letter::neg(1));
        assert!(Letter::neg(1) < Letter::pos(2));
        assert_eq!(alloc::format!("{}", Letter::neg(12)), "G12");
    }

    #[test]
    fn token_parsing() {
        assert_eq!(Letter::parse_token("g3"), Some(Letter::pos(3)));
        assert_eq!(Letter::parse_token("G10"), Some(Letter::neg(10)));
        for bad in ["g0", "g", "x1", "g-1", "G1a", ""] {
            assert_eq!(Letter::parse_token(bad), None, "{bad}");
        }
    }
}
