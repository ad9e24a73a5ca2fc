//! Strategies: predicates on finite words. A strategy selects position `j` of
//! its input iff the prefix of length `j − 1` satisfies the predicate.
//!
//! Because a strategy only sees the prefix, it can never decide on the value
//! of the symbol it is about to pick. In particular no strategy selects
//! exactly the 1s of every input.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use crate::automata::Dfa;
use crate::error::{Error, Result};
use crate::words::Word;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Provenance {
    Dfa,
    Suffix,
    Custom,
}

type Predicate = Arc<dyn Fn(&[u8]) -> bool + Send + Sync>;

#[derive(Clone)]
pub enum Strategy {
    /// Words accepted by the automaton from its start state.
    Dfa(Dfa),
    /// Words ending with the given nonempty word.
    Suffix(Word),
    /// A user-supplied pure predicate. Never part of verification catalogs.
    Custom { name: String, predicate: Predicate },
}

impl Strategy {
    pub fn custom<F>(name: impl Into<String>, predicate: F) -> Self
    where
        F: Fn(&[u8]) -> bool + Send + Sync + 'static,
    {
        Strategy::Custom {
            name: name.into(),
            predicate: Arc::new(predicate),
        }
    }

    /// Membership of a prefix.
    pub fn contains(&self, prefix: &[u8]) -> bool {
        match self {
            Strategy::Dfa(d) => d.accepts(prefix),
            Strategy::Suffix(v) => prefix.ends_with(v.bits()),
            Strategy::Custom { predicate, .. } => predicate(prefix),
        }
    }

    pub fn provenance(&self) -> Provenance {
        match self {
            Strategy::Dfa(_) => Provenance::Dfa,
            Strategy::Suffix(_) => Provenance::Suffix,
            Strategy::Custom { .. } => Provenance::Custom,
        }
    }

    /// Selected subsequence, computed incrementally where the strategy
    /// allows it.
    pub fn picked(&self, input: &Word) -> Word {
        match self {
            Strategy::Dfa(d) => d
                .select(d.start(), input)
                .expect("start state is valid")
                .selected,
            _ => apply_strategy(self, input).selected,
        }
    }
}

impl fmt::Debug for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Strategy::Dfa(d) => write!(f, "Strategy::Dfa({})", d.to_json_string()),
            Strategy::Suffix(v) => write!(f, "Strategy::Suffix({v})"),
            Strategy::Custom { name, .. } => write!(f, "Strategy::Custom({name})"),
        }
    }
}

/// Selected symbols and their 1-based positions.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Selection {
    pub selected: Word,
    pub selected_positions: Vec<usize>,
}

/// Evaluates the predicate on every proper prefix of `input`. Quadratic, and
/// deliberately independent of the automaton machinery.
pub fn apply_strategy(strategy: &Strategy, input: &Word) -> Selection {
    let bits = input.bits();
    let mut out = Selection::default();
    for (i, &b) in bits.iter().enumerate() {
        if strategy.contains(&bits[..i]) {
            out.selected.push(b);
            out.selected_positions.push(i + 1);
        }
    }
    out
}

pub fn suffix_strategy(v: Word) -> Result<Strategy> {
    if v.is_empty() {
        return Err(Error::EmptyPattern);
    }
    Ok(Strategy::Suffix(v))
}

pub fn dfa_strategy(dfa: Dfa) -> Strategy {
    Strategy::Dfa(dfa)
}

/// Whether `strategy` picks exactly the 1s from every word of length at most
/// `max_len`.
pub fn selects_exactly_the_ones(strategy: &Strategy, max_len: u32) -> bool {
    Word::all_up_to(max_len).all(|w| {
        let s = apply_strategy(strategy, &w);
        let ones: Vec<usize> = (1..=w.len()).filter(|&i| w.bits()[i - 1] == 1).collect();
        s.selected_positions == ones
    })
}

/// A strategy named on the command line: `suffix:<bits>` or `dfa:<path>`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum StrategyRef {
    Suffix(Word),
    DfaFile(std::path::PathBuf),
}

impl StrategyRef {
    pub fn load(&self) -> Result<Strategy> {
        match self {
            StrategyRef::Suffix(v) => suffix_strategy(v.clone()),
            StrategyRef::DfaFile(path) => {
                let text = std::fs::read_to_string(path)?;
                Ok(dfa_strategy(Dfa::from_json_str(&text)?))
            }
        }
    }
}

impl FromStr for StrategyRef {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.split_once(':') {
            Some(("suffix", bits)) => {
                let v: Word = bits.parse()?;
                if v.is_empty() {
                    return Err(Error::EmptyPattern);
                }
                Ok(StrategyRef::Suffix(v))
            }
            Some(("dfa", path)) if !path.is_empty() => Ok(StrategyRef::DfaFile(path.into())),
            _ => Err(Error::InvalidParameter(format!(
                "strategy {s:?}: expected suffix:<bits> or dfa:<file.json>"
            ))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> Word {
        s.parse().unwrap()
    }

    #[test]
    fn apply_examples() {
        let all = Strategy::custom("all", |_| true);
        assert_eq!(apply_strategy(&all, &w("011010")).selected, w("011010"));
        let even = Strategy::custom("even-length", |p| p.len() % 2 == 0);
        assert_eq!(apply_strategy(&even, &w("011010")).selected_positions, vec![1, 3, 5]);
        let none = Strategy::custom("none", |_| false);
        assert!(apply_strategy(&none, &w("011010")).selected.is_empty());
        assert_eq!(none.provenance(), Provenance::Custom);
    }

    #[test]
    fn suffix_examples() {
        let s = suffix_strategy(w("1")).unwrap();
        assert_eq!(apply_strategy(&s, &w("110100")).selected, w("100"));
        let s = suffix_strategy(w("00")).unwrap();
        assert!(apply_strategy(&s, &w("0101010101")).selected.is_empty());
        let s = suffix_strategy(w("01")).unwrap();
        let r = apply_strategy(&s, &w("0101"));
        assert_eq!(r.selected_positions, vec![3]);
        assert_eq!(r.selected, w("0"));
        assert!(matches!(suffix_strategy(Word::empty()), Err(Error::EmptyPattern)));
    }

    #[test]
    fn dfa_strategy_examples() {
        let even = Strategy::custom("even-length", |p| p.len() % 2 == 0);
        let toggle = dfa_strategy(Dfa::toggle());
        for x in Word::all_up_to(12) {
            assert_eq!(apply_strategy(&toggle, &x), apply_strategy(&even, &x));
        }
        let x = w("0011101");
        assert_eq!(apply_strategy(&dfa_strategy(Dfa::accept_all()), &x).selected, x);
        assert!(apply_strategy(&dfa_strategy(Dfa::accept_none()), &x).selected.is_empty());
    }

    #[test]
    fn picked_agrees_with_apply() {
        for seed in 0..10 {
            let s = dfa_strategy(Dfa::random(3, seed));
            for x in Word::all_up_to(8) {
                assert_eq!(s.picked(&x), apply_strategy(&s, &x).selected);
            }
        }
        let s = suffix_strategy(w("10")).unwrap();
        assert_eq!(s.picked(&w("1010")), w("1"));
    }

    #[test]
    fn no_two_state_dfa_picks_exactly_the_ones() {
        for d in Dfa::enumerate_all(2) {
            assert!(!selects_exactly_the_ones(&dfa_strategy(d), 8));
        }
        // the predicate that would need to peek at the next symbol
        let cheat = Strategy::custom("all", |_| true);
        assert!(!selects_exactly_the_ones(&cheat, 4));
    }

    #[test]
    fn strategy_refs() {
        assert_eq!("suffix:11".parse::<StrategyRef>().unwrap(), StrategyRef::Suffix(w("11")));
        assert_eq!(
            "dfa:toggle.json".parse::<StrategyRef>().unwrap(),
            StrategyRef::DfaFile("toggle.json".into())
        );
        for bad in ["suffix:", "suffix:12", "dfa:", "prefix:01", "toggle"] {
            assert!(bad.parse::<StrategyRef>().is_err(), "{bad}");
        }
    }
}
