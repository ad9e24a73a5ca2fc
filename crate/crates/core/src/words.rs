//! Finite binary words, occurrence counting, prefix order and block
//! decomposition.
//!
//! Positions are 1-based wherever they surface in the public API: position
//! `i` of a word is its `i`-th symbol.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// A finite word over `{0, 1}`. Each symbol is stored as a `u8` equal to 0 or 1.
///
/// The derived ordering is lexicographic with a proper prefix sorting before
/// its extensions, which `measure::prefix_free_reduce` relies on.
#[derive(Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Word(Vec<u8>);

impl Word {
    pub fn empty() -> Self {
        Word(Vec::new())
    }

    /// Builds a word from raw symbols, rejecting anything other than 0 and 1.
    pub fn from_bits(bits: Vec<u8>) -> Result<Self> {
        if let Some(&b) = bits.iter().find(|&&b| b > 1) {
            return Err(Error::InvalidSymbol(char::from(b'0'.wrapping_add(b))));
        }
        Ok(Word(bits))
    }

    /// The word of length `len` whose symbols are the low `len` bits of
    /// `value`, most significant first. Enumerating `value` over `0..2^len`
    /// therefore visits `{0,1}^len` in lexicographic order.
    pub fn from_u64(value: u64, len: u32) -> Self {
        Word(
            (0..len)
                .map(|i| ((value >> (len - 1 - i)) & 1) as u8)
                .collect(),
        )
    }

    /// `b^len`.
    pub fn constant(bit: u8, len: usize) -> Self {
        Word(vec![bit & 1; len])
    }

    /// Every word of length `len`, in lexicographic order.
    pub fn all_of_length(len: u32) -> impl Iterator<Item = Word> {
        (0..1u64 << len).map(move |v| Word::from_u64(v, len))
    }

    /// Every word of length at most `max_len`, shortest first.
    pub fn all_up_to(max_len: u32) -> impl Iterator<Item = Word> {
        (0..=max_len).flat_map(Word::all_of_length)
    }

    pub fn bits(&self) -> &[u8] {
        &self.0
    }

    pub fn into_bits(self) -> Vec<u8> {
        self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn push(&mut self, bit: u8) {
        debug_assert!(bit <= 1);
        self.0.push(bit & 1);
    }

    pub fn count_ones(&self) -> usize {
        self.0.iter().filter(|&&b| b == 1).count()
    }

    /// Number of occurrences of the symbol `a`.
    pub fn count_symbol(&self, a: u8) -> usize {
        self.0.iter().filter(|&&b| b == a).count()
    }

    /// The first `len` symbols (the whole word if it is shorter).
    pub fn prefix(&self, len: usize) -> Word {
        Word(self.0[..len.min(self.len())].to_vec())
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut bits = self.0.clone();
        bits.extend_from_slice(&other.0);
        Word(bits)
    }

    /// `self ⪯ other`.
    pub fn is_prefix_of(&self, other: &Word) -> bool {
        is_prefix(self, other)
    }

    /// `self ≺ other`.
    pub fn is_strict_prefix_of(&self, other: &Word) -> bool {
        is_strict_prefix(self, other)
    }
}

impl FromStr for Word {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        s.chars()
            .map(|c| match c {
                '0' => Ok(0),
                '1' => Ok(1),
                other => Err(Error::InvalidSymbol(other)),
            })
            .collect::<Result<Vec<u8>>>()
            .map(Word)
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in &self.0 {
            f.write_str(if b == 1 { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Word(\"{self}\")")
    }
}

impl Serialize for Word {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Word {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

impl From<Word> for Vec<u8> {
    fn from(w: Word) -> Self {
        w.0
    }
}

impl FromIterator<u8> for Word {
    fn from_iter<I: IntoIterator<Item = u8>>(iter: I) -> Self {
        Word(iter.into_iter().map(|b| b & 1).collect())
    }
}

/// Overlapping occurrences of `pattern` in `text`.
pub fn count_occurrences(pattern: &Word, text: &Word) -> Result<usize> {
    if pattern.is_empty() {
        return Err(Error::EmptyPattern);
    }
    if pattern.len() > text.len() {
        return Ok(0);
    }
    Ok(text
        .bits()
        .windows(pattern.len())
        .filter(|w| *w == pattern.bits())
        .count())
}

pub fn is_prefix(u: &Word, w: &Word) -> bool {
    w.bits().starts_with(u.bits())
}

pub fn is_strict_prefix(u: &Word, w: &Word) -> bool {
    u.len() < w.len() && is_prefix(u, w)
}

/// The n-block decomposition of a word: consecutive non-overlapping blocks of
/// length `block_length`. Block `r` (1-based) covers positions
/// `n(r-1)+1 ..= nr`; a trailing partial block is dropped.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlockView {
    pub block_length: usize,
    pub blocks: Vec<Word>,
}

impl BlockView {
    /// Concatenation of the blocks, a prefix of the source.
    pub fn concatenated(&self) -> Word {
        self.blocks.iter().flat_map(|b| b.bits().iter().copied()).collect()
    }
}

pub fn block_decompose(text: &Word, n: usize) -> Result<BlockView> {
    if n == 0 {
        return Err(Error::ZeroBlockLength);
    }
    let blocks = text
        .bits()
        .chunks_exact(n)
        .map(|c| Word(c.to_vec()))
        .collect();
    Ok(BlockView {
        block_length: n,
        blocks,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn w(s: &str) -> Word {
        s.parse().unwrap()
    }

    #[test]
    fn count_examples() {
        assert_eq!(count_occurrences(&w("01"), &w("0101")).unwrap(), 2);
        assert_eq!(count_occurrences(&w("11"), &w("0101")).unwrap(), 0);
        assert_eq!(count_occurrences(&w("1"), &w("110100")).unwrap(), 3);
        // overlapping
        assert_eq!(count_occurrences(&w("11"), &w("1111")).unwrap(), 3);
        assert_eq!(count_occurrences(&w("0101"), &w("01")).unwrap(), 0);
    }

    #[test]
    fn count_rejects_empty_pattern() {
        let err = count_occurrences(&Word::empty(), &w("01")).unwrap_err();
        assert_eq!(err.to_string(), "empty pattern");
    }

    #[test]
    fn prefix_examples() {
        assert!(is_prefix(&Word::empty(), &w("0110")));
        assert!(is_prefix(&Word::empty(), &Word::empty()));
        assert!(is_prefix(&w("01"), &w("011")));
        assert!(!is_prefix(&w("10"), &w("011")));
        assert!(is_strict_prefix(&w("01"), &w("011")));
        assert!(!is_strict_prefix(&w("011"), &w("011")));
        assert!(is_prefix(&w("011"), &w("011")));
    }

    #[test]
    fn block_examples() {
        let view = block_decompose(&w("011010"), 2).unwrap();
        assert_eq!(view.blocks, vec![w("01"), w("10"), w("10")]);
        let view = block_decompose(&w("01101"), 2).unwrap();
        assert_eq!(view.blocks, vec![w("01"), w("10")]);
        let x = w("0110100");
        assert_eq!(block_decompose(&x, x.len()).unwrap().blocks, vec![x.clone()]);
        assert!(matches!(block_decompose(&x, 0), Err(Error::ZeroBlockLength)));
    }

    #[test]
    fn parse_and_display_roundtrip() {
        assert_eq!(w("0110").to_string(), "0110");
        assert_eq!(Word::empty().to_string(), "");
        assert!(matches!("012".parse::<Word>(), Err(Error::InvalidSymbol('2'))));
        assert!(Word::from_bits(vec![0, 2]).is_err());
    }

    #[test]
    fn from_u64_is_lexicographic() {
        let all: Vec<Word> = Word::all_of_length(3).collect();
        let mut sorted = all.clone();
        sorted.sort();
        assert_eq!(all, sorted);
        assert_eq!(all[5], w("101"));
        assert_eq!(Word::all_up_to(2).count(), 7);
    }

    fn word_strategy(max: usize) -> impl Strategy<Value = Word> {
        proptest::collection::vec(0u8..2, 0..max).prop_map(|v| Word::from_bits(v).unwrap())
    }

    proptest! {
        #[test]
        fn occurrences_bounded(u in word_strategy(5), t in word_strategy(40)) {
            prop_assume!(!u.is_empty());
            let c = count_occurrences(&u, &t).unwrap();
            if u.len() <= t.len() {
                prop_assert!(c <= t.len() - u.len() + 1);
            } else {
                prop_assert_eq!(c, 0);
            }
        }

        #[test]
        fn occurrences_sum_over_all_patterns(t in word_strategy(30), k in 1u32..5) {
            prop_assume!(k as usize <= t.len());
            let total: usize = Word::all_of_length(k)
                .map(|u| count_occurrences(&u, &t).unwrap())
                .sum();
            prop_assert_eq!(total, t.len() - k as usize + 1);
        }

        #[test]
        fn blocks_concatenate_to_truncation(t in word_strategy(50), n in 1usize..8) {
            let view = block_decompose(&t, n).unwrap();
            prop_assert!(view.blocks.iter().all(|b| b.len() == n));
            prop_assert_eq!(view.concatenated(), t.prefix(n * (t.len() / n)));
        }
    }
}
