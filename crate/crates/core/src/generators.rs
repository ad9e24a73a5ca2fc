//! Reproducible binary sequence sources.
//!
//! A [`SourceSpec`] fully determines an infinite (or, for files, finite)
//! stream; [`SourceSpec::open`] instantiates a fresh iterator over it, so any
//! number of independent consumers can replay the same sequence.

use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::measure::BernoulliParam;
use crate::ratio::{format_rational, parse_rational, Rational};
use crate::rng;
use crate::words::Word;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SourceSpec {
    /// Binary expansions of 0, 1, 2, 3, ... concatenated: `0 1 10 11 100 ...`.
    Champernowne,
    /// The given nonempty word repeated forever.
    Periodic(Word),
    /// I.i.d. symbols with `P(1) = p1` from the pinned stream of `seed`.
    Bernoulli { p1: Rational, seed: u64 },
    /// `head` followed by `bit` forever.
    LiteralThenConstant { head: Word, bit: u8 },
    /// Raw ASCII '0'/'1' read from a file (whitespace ignored); finite.
    File(PathBuf),
}

/// A positive-probability Bernoulli source. `p1` of 0 or 1 is rejected: such
/// a distribution is not positive.
pub fn bernoulli_source(p1: Rational, seed: u64) -> Result<SourceSpec> {
    BernoulliParam::new(p1.clone())?.require_positive()?;
    Ok(SourceSpec::Bernoulli { p1, seed })
}

impl SourceSpec {
    pub fn periodic(pattern: Word) -> Result<Self> {
        if pattern.is_empty() {
            return Err(Error::EmptyPattern);
        }
        Ok(SourceSpec::Periodic(pattern))
    }

    pub fn open(&self) -> Result<Source> {
        Ok(match self {
            SourceSpec::Champernowne => Source::Champernowne(Champernowne::new()),
            SourceSpec::Periodic(w) => {
                if w.is_empty() {
                    return Err(Error::EmptyPattern);
                }
                Source::Cycle {
                    bits: w.bits().to_vec(),
                    pos: 0,
                }
            }
            SourceSpec::Bernoulli { p1, seed } => {
                BernoulliParam::new(p1.clone())?;
                Source::Bernoulli {
                    threshold: rng::threshold(p1),
                    stream: Box::new(rng::stream(*seed)),
                }
            }
            SourceSpec::LiteralThenConstant { head, bit } => Source::Literal {
                head: head.bits().to_vec(),
                pos: 0,
                bit: *bit & 1,
            },
            SourceSpec::File(path) => {
                let text = std::fs::read_to_string(path)?;
                let bits = text
                    .chars()
                    .filter(|c| !c.is_whitespace())
                    .map(|c| match c {
                        '0' => Ok(0),
                        '1' => Ok(1),
                        other => Err(Error::InvalidSymbol(other)),
                    })
                    .collect::<Result<Vec<u8>>>()?;
                Source::Finite { bits, pos: 0 }
            }
        })
    }

    /// Whether the stream never ends.
    pub fn is_infinite(&self) -> bool {
        !matches!(self, SourceSpec::File(_))
    }
}

/// The first `n` symbols of the source.
pub fn generate(spec: &SourceSpec, n: usize) -> Result<Word> {
    let word: Word = spec.open()?.take(n).collect();
    if word.len() < n {
        return Err(Error::SourceExhausted {
            consumed: word.len(),
            requested: n,
        });
    }
    Ok(word)
}

impl FromStr for SourceSpec {
    type Err = Error;

    /// `champernowne`, `periodic:<bits>`, `random:<num>/<den>:<seed>`,
    /// `literal:<bits>:<bit>` or `file:<path>`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = |why: &str| Error::InvalidParameter(format!("source {s:?}: {why}"));
        let (kind, rest) = s.split_once(':').unwrap_or((s, ""));
        match kind {
            "champernowne" if rest.is_empty() => Ok(SourceSpec::Champernowne),
            "periodic" => SourceSpec::periodic(rest.parse()?),
            "random" => {
                let (p, seed) = rest
                    .rsplit_once(':')
                    .ok_or_else(|| bad("expected random:<num>/<den>:<seed>"))?;
                let seed = seed.parse().map_err(|_| bad("seed must be a u64"))?;
                bernoulli_source(parse_rational(p)?, seed)
            }
            "literal" => {
                let (head, bit) = rest
                    .rsplit_once(':')
                    .ok_or_else(|| bad("expected literal:<bits>:<bit>"))?;
                let bit = match bit {
                    "0" => 0,
                    "1" => 1,
                    _ => return Err(bad("constant bit must be 0 or 1")),
                };
                Ok(SourceSpec::LiteralThenConstant {
                    head: head.parse()?,
                    bit,
                })
            }
            "file" if !rest.is_empty() => Ok(SourceSpec::File(PathBuf::from(rest))),
            _ => Err(bad("unknown source kind")),
        }
    }
}

impl fmt::Display for SourceSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SourceSpec::Champernowne => f.write_str("champernowne"),
            SourceSpec::Periodic(w) => write!(f, "periodic:{w}"),
            SourceSpec::Bernoulli { p1, seed } => write!(f, "random:{}:{seed}", format_rational(p1)),
            SourceSpec::LiteralThenConstant { head, bit } => write!(f, "literal:{head}:{bit}"),
            SourceSpec::File(path) => write!(f, "file:{}", path.display()),
        }
    }
}

impl Serialize for SourceSpec {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

/// Binary Champernowne stream.
#[derive(Clone, Debug)]
pub struct Champernowne {
    next_number: u64,
    current: u64,
    remaining: u32,
}

impl Champernowne {
    pub fn new() -> Self {
        Champernowne {
            next_number: 1,
            current: 0,
            remaining: 1,
        }
    }
}

impl Default for Champernowne {
    fn default() -> Self {
        Self::new()
    }
}

impl Iterator for Champernowne {
    type Item = u8;

    fn next(&mut self) -> Option<u8> {
        if self.remaining == 0 {
            self.current = self.next_number;
            self.next_number += 1;
            self.remaining = 64 - self.current.leading_zeros();
        }
        self.remaining -= 1;
        Some(((self.current >> self.remaining) & 1) as u8)
    }
}

/// A live stream instantiated from a [`SourceSpec`].
pub enum Source {
    Champernowne(Champernowne),
    Cycle { bits: Vec<u8>, pos: usize },
    Bernoulli { threshold: u128, stream: Box<rng::Stream> },
    Literal { head: Vec<u8>, pos: usize, bit: u8 },
    Finite { bits: Vec<u8>, pos: usize },
}

impl fmt::Debug for Source {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let kind = match self {
            Source::Champernowne(_) => "champernowne",
            Source::Cycle { .. } => "periodic",
            Source::Bernoulli { .. } => "random",
            Source::Literal { .. } => "literal",
            Source::Finite { .. } => "file",
        };
        write!(f, "Source({kind})")
    }
}

impl Iterator for Source {
    type Item = u8;

    #[inline]
    fn next(&mut self) -> Option<u8> {
        match self {
            Source::Champernowne(c) => c.next(),
            Source::Cycle { bits, pos } => {
                let b = bits[*pos];
                *pos = (*pos + 1) % bits.len();
                Some(b)
            }
            Source::Bernoulli { threshold, stream } => Some(rng::draw_below(stream, *threshold) as u8),
            Source::Literal { head, pos, bit } => {
                if *pos < head.len() {
                    *pos += 1;
                    Some(head[*pos - 1])
                } else {
                    Some(*bit)
                }
            }
            Source::Finite { bits, pos } => {
                let b = bits.get(*pos).copied();
                *pos += 1;
                b
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ratio::rational;
    use crate::words::count_occurrences;

    fn w(s: &str) -> Word {
        s.parse().unwrap()
    }

    /// Champernowne prefix built by formatting each integer in binary.
    fn champernowne_oracle(n: usize) -> Word {
        let mut s = String::new();
        let mut k = 0u64;
        while s.len() < n {
            s.push_str(&format!("{k:b}"));
            k += 1;
        }
        s[..n].parse().unwrap()
    }

    #[test]
    fn champernowne_prefix() {
        let x = generate(&SourceSpec::Champernowne, 10).unwrap();
        assert_eq!(x, w("0110111001"));
        assert_eq!(generate(&SourceSpec::Champernowne, 50_000).unwrap(), champernowne_oracle(50_000));
    }

    #[test]
    fn periodic_and_literal() {
        let p = SourceSpec::periodic(w("01")).unwrap();
        assert_eq!(generate(&p, 6).unwrap(), w("010101"));
        assert!(SourceSpec::periodic(Word::empty()).is_err());
        let l = SourceSpec::LiteralThenConstant { head: w("1"), bit: 0 };
        assert_eq!(generate(&l, 5).unwrap(), w("10000"));
    }

    #[test]
    fn bernoulli_determinism_and_validation() {
        let s = bernoulli_source(rational(1, 3), 42).unwrap();
        assert_eq!(generate(&s, 4096).unwrap(), generate(&s, 4096).unwrap());
        let other = bernoulli_source(rational(1, 3), 43).unwrap();
        assert_ne!(generate(&s, 256).unwrap(), generate(&other, 256).unwrap());
        assert!(matches!(bernoulli_source(rational(0, 1), 1), Err(Error::NonPositiveParam(_))));
        assert!(matches!(bernoulli_source(rational(1, 1), 1), Err(Error::NonPositiveParam(_))));
        assert!(bernoulli_source(rational(3, 2), 1).is_err());
    }

    #[test]
    fn bernoulli_frequency() {
        // Chebyshev: P(|f - 1/2| >= 0.01) <= (1/4) / (10^6 * 10^-4) = 1/400.
        for seed in [1, 2, 3] {
            let s = bernoulli_source(rational(1, 2), seed).unwrap();
            let x = generate(&s, 1_000_000).unwrap();
            let f = x.count_ones() as f64 / 1e6;
            assert!((f - 0.5).abs() < 0.01, "seed {seed}: {f}");
        }
    }

    #[test]
    fn streams_are_prefix_consistent() {
        let specs = [
            SourceSpec::Champernowne,
            SourceSpec::periodic(w("0110")).unwrap(),
            bernoulli_source(rational(2, 5), 9).unwrap(),
            SourceSpec::LiteralThenConstant { head: w("101"), bit: 1 },
        ];
        for spec in &specs {
            let long = generate(spec, 3000).unwrap();
            for n in [0, 1, 17, 1000, 2999] {
                assert!(generate(spec, n).unwrap().is_prefix_of(&long), "{spec}");
            }
        }
    }

    #[test]
    fn champernowne_contains_all_short_words() {
        let x = generate(&SourceSpec::Champernowne, 1 << 20).unwrap();
        for k in 1..=8 {
            for v in Word::all_of_length(k) {
                assert!(count_occurrences(&v, &x).unwrap() > 0, "{v} missing");
            }
        }
    }

    #[test]
    fn parse_and_display() {
        for text in ["champernowne", "periodic:01", "random:1/3:7", "literal:10:0", "file:/tmp/x.txt"] {
            let spec: SourceSpec = text.parse().unwrap();
            assert_eq!(spec.to_string(), text);
        }
        assert_eq!("random:2/6:7".parse::<SourceSpec>().unwrap().to_string(), "random:1/3:7");
        for bad in ["", "periodic:", "random:0.5:1", "random:1/2", "literal:10:2", "noise", "champernowne:1", "random:0/1:3"] {
            assert!(bad.parse::<SourceSpec>().is_err(), "{bad:?}");
        }
    }

    #[test]
    fn file_source() {
        let dir = std::env::temp_dir().join(format!("normality-gen-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("bits.txt");
        std::fs::write(&path, "0110\n10\n").unwrap();
        let spec = SourceSpec::File(path.clone());
        assert_eq!(generate(&spec, 6).unwrap(), w("011010"));
        assert!(matches!(
            generate(&spec, 7),
            Err(Error::SourceExhausted { consumed: 6, requested: 7 })
        ));
        std::fs::write(&path, "01x").unwrap();
        assert!(matches!(spec.open(), Err(Error::InvalidSymbol('x'))));
        assert!(matches!(SourceSpec::File(dir.join("missing")).open(), Err(Error::Io(_))));
        std::fs::remove_dir_all(&dir).unwrap();
    }
}
