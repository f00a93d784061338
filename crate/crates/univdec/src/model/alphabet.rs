//! Alphabets, sequences and the canonical rank encoding.
//!
//! Symbols are integers `0..size`. A sequence of blocklength `n` over an
//! alphabet of size `a` is rank-encoded into `[0, a^n)` by the base-`a`
//! positional code (first symbol most significant); this rank order is the
//! canonical enumeration order everywhere in the crate.

use serde::{Deserialize, Serialize};

use crate::error::{Result, UnivdecError};

/// Default enumeration cap, overridable through the `UNIVDEC_CAP` env var
/// or per-call configuration.
pub const DEFAULT_ENUM_CAP: u64 = 1 << 20;

/// Resolve the effective enumeration cap.
pub fn enumeration_cap() -> u64 {
    std::env::var("UNIVDEC_CAP")
        .ok()
        .and_then(|v| v.parse().ok())
        .unwrap_or(DEFAULT_ENUM_CAP)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Alphabet {
    pub size: usize,
}

impl Alphabet {
    pub fn new(size: usize) -> Self {
        assert!(size >= 1, "alphabet must have at least one symbol");
        Alphabet { size }
    }

    /// Number of sequences of length `n`, checked against the cap.
    pub fn space_size(&self, n: usize, cap: u64) -> Result<u64> {
        let mut total: u128 = 1;
        for _ in 0..n {
            total *= self.size as u128;
            if total > cap as u128 {
                return Err(UnivdecError::EnumerationCapExceeded { needed: total, cap });
            }
        }
        Ok(total as u64)
    }

    pub fn binary() -> Self {
        Alphabet::new(2)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Sequence {
    pub symbols: Vec<usize>,
}

impl Sequence {
    pub fn new(symbols: Vec<usize>, alphabet: Alphabet) -> Result<Self> {
        for &s in &symbols {
            if s >= alphabet.size {
                return Err(UnivdecError::SymbolOutOfRange {
                    symbol: s,
                    alphabet: alphabet.size,
                });
            }
        }
        Ok(Sequence { symbols })
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    /// Base-|X| positional rank in `[0, |X|^n)`.
    pub fn rank(&self, alphabet: Alphabet) -> u64 {
        let mut r: u64 = 0;
        for &s in &self.symbols {
            r = r * alphabet.size as u64 + s as u64;
        }
        r
    }

    /// Inverse of [`Sequence::rank`].
    pub fn from_rank(mut rank: u64, n: usize, alphabet: Alphabet) -> Self {
        let mut symbols = vec![0usize; n];
        for i in (0..n).rev() {
            symbols[i] = (rank % alphabet.size as u64) as usize;
            rank /= alphabet.size as u64;
        }
        Sequence { symbols }
    }

    pub fn check_len(&self, n: usize) -> Result<()> {
        if self.len() != n {
            return Err(UnivdecError::LengthMismatch {
                expected: n,
                got: self.len(),
            });
        }
        Ok(())
    }
}

/// Iterate every sequence of length `n` in rank order.
pub fn enumerate_sequences(
    alphabet: Alphabet,
    n: usize,
    cap: u64,
) -> Result<impl Iterator<Item = Sequence>> {
    let total = alphabet.space_size(n, cap)?;
    Ok((0..total).map(move |r| Sequence::from_rank(r, n, alphabet)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rank_roundtrip() {
        let a = Alphabet::new(3);
        for r in 0..27 {
            let s = Sequence::from_rank(r, 3, a);
            assert_eq!(s.rank(a), r);
        }
    }

    #[test]
    fn rank_order_is_lexicographic() {
        let a = Alphabet::binary();
        let s0 = Sequence::from_rank(0, 3, a);
        let s1 = Sequence::from_rank(1, 3, a);
        assert_eq!(s0.symbols, vec![0, 0, 0]);
        assert_eq!(s1.symbols, vec![0, 0, 1]);
    }

    #[test]
    fn cap_is_enforced() {
        let a = Alphabet::new(2);
        assert!(a.space_size(10, 1 << 20).is_ok());
        assert!(a.space_size(30, 1 << 20).is_err());
    }

    #[test]
    fn symbol_range_checked() {
        let a = Alphabet::binary();
        assert!(Sequence::new(vec![0, 2], a).is_err());
    }
}
