//! The Bernoulli measure on words and finite word sets, in exact rational
//! arithmetic.

use std::collections::BTreeSet;
use std::fmt;
use std::iter::FromIterator;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::ratio::{self, format_rational, parse_rational, Rational};
use crate::words::Word;

/// A Bernoulli distribution on `{0,1}`, stored as the probability of `1`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BernoulliParam {
    p1: Rational,
    p0: Rational,
}

impl BernoulliParam {
    pub fn new(p1: Rational) -> Result<Self> {
        if !ratio::in_unit_interval(&p1) {
            return Err(Error::ProbabilityOutOfRange(format_rational(&p1)));
        }
        let p0 = Rational::one() - &p1;
        Ok(BernoulliParam { p1, p0 })
    }

    pub fn from_ratio(num: i64, den: i64) -> Result<Self> {
        if den == 0 {
            return Err(Error::InvalidRational(format!("{num}/{den}")));
        }
        Self::new(ratio::rational(num, den))
    }

    /// The uniform distribution.
    pub fn half() -> Self {
        Self::from_ratio(1, 2).expect("1/2 is a probability")
    }

    pub fn p1(&self) -> &Rational {
        &self.p1
    }

    pub fn p0(&self) -> &Rational {
        &self.p0
    }

    /// `p(a)` for a symbol `a`.
    pub fn p(&self, symbol: u8) -> &Rational {
        if symbol == 1 {
            &self.p1
        } else {
            &self.p0
        }
    }

    /// True iff both symbols have nonzero probability.
    pub fn is_positive(&self) -> bool {
        !self.p1.is_zero() && !self.p0.is_zero()
    }

    pub fn require_positive(&self) -> Result<()> {
        if self.is_positive() {
            Ok(())
        } else {
            Err(Error::NonPositiveParam(self.to_string()))
        }
    }
}

impl FromStr for BernoulliParam {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::new(parse_rational(s)?)
    }
}

impl fmt::Display for BernoulliParam {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format_rational(&self.p1))
    }
}

impl fmt::Debug for BernoulliParam {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BernoulliParam({self})")
    }
}

/// An exact, nonnegative measure value. At most 1 for prefix-free sets;
/// sets with prefix relations can exceed it since `μ` is additive.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Measure(Rational);

impl Measure {
    pub fn zero() -> Self {
        Measure(Rational::zero())
    }

    pub fn one() -> Self {
        Measure(Rational::one())
    }

    pub(crate) fn from_rational(value: Rational) -> Self {
        debug_assert!(!value.is_negative(), "negative measure {value}");
        Measure(value)
    }

    pub fn value(&self) -> &Rational {
        &self.0
    }

    pub fn into_rational(self) -> Rational {
        self.0
    }

    pub fn to_f64(&self) -> f64 {
        ratio::to_f64(&self.0)
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }
}

impl fmt::Display for Measure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format_rational(&self.0))
    }
}

impl fmt::Debug for Measure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Measure({self})")
    }
}

impl Serialize for Measure {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

/// A finite set of words, possibly of mixed lengths.
#[derive(Clone, Default, PartialEq, Eq, Debug)]
pub struct WordSet {
    members: BTreeSet<Word>,
}

impl WordSet {
    pub fn new() -> Self {
        Self::default()
    }

    /// All of `{0,1}^n`.
    pub fn full(n: u32) -> Self {
        Word::all_of_length(n).collect()
    }

    pub fn insert(&mut self, w: Word) -> bool {
        self.members.insert(w)
    }

    pub fn contains(&self, w: &Word) -> bool {
        self.members.contains(w)
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// Members in lexicographic order.
    pub fn iter(&self) -> impl Iterator<Item = &Word> {
        self.members.iter()
    }

    /// `Some(n)` if every member has length `n`.
    pub fn uniform_length(&self) -> Option<usize> {
        let mut lens = self.members.iter().map(Word::len);
        let first = lens.next()?;
        lens.all(|l| l == first).then_some(first)
    }

    pub fn max_len(&self) -> usize {
        self.members.iter().map(Word::len).max().unwrap_or(0)
    }

    pub fn union(&self, other: &WordSet) -> WordSet {
        self.members.union(&other.members).cloned().collect()
    }

    pub fn intersection(&self, other: &WordSet) -> WordSet {
        self.members.intersection(&other.members).cloned().collect()
    }

    pub fn is_disjoint(&self, other: &WordSet) -> bool {
        self.members.is_disjoint(&other.members)
    }

    /// True iff no member is a proper prefix of another.
    pub fn is_prefix_free(&self) -> bool {
        let v: Vec<&Word> = self.members.iter().collect();
        // If u is a proper prefix of anything, its sorted successor extends u.
        v.windows(2).all(|pair| !pair[0].is_strict_prefix_of(pair[1]))
    }
}

impl FromIterator<Word> for WordSet {
    fn from_iter<I: IntoIterator<Item = Word>>(iter: I) -> Self {
        WordSet {
            members: iter.into_iter().collect(),
        }
    }
}

impl<'a> IntoIterator for &'a WordSet {
    type Item = &'a Word;
    type IntoIter = std::collections::btree_set::Iter<'a, Word>;

    fn into_iter(self) -> Self::IntoIter {
        self.members.iter()
    }
}

/// `μ_p(w) = p(1)^{#1} · p(0)^{#0}`; the empty word has measure 1.
pub fn mu_word(p: &BernoulliParam, w: &Word) -> Measure {
    let ones = w.count_ones() as u32;
    let zeros = w.len() as u32 - ones;
    Measure(ratio::pow(p.p1(), ones) * ratio::pow(p.p0(), zeros))
}

/// `μ_p(M) = Σ_{w ∈ M} μ_p(w)`, with `μ_p(∅) = 0`.
pub fn mu_set(p: &BernoulliParam, set: &WordSet) -> Measure {
    // Group by (length, ones) so each distinct monomial is evaluated once.
    let mut counts = std::collections::BTreeMap::<(usize, usize), u64>::new();
    for w in set {
        *counts.entry((w.len(), w.count_ones())).or_default() += 1;
    }
    let total = counts
        .into_iter()
        .fold(Rational::zero(), |acc, ((len, ones), count)| {
            let m = ratio::pow(p.p1(), ones as u32) * ratio::pow(p.p0(), (len - ones) as u32);
            acc + m * Rational::from_integer(BigInt::from(count))
        });
    Measure::from_rational(total)
}

/// Removes every word that has a proper prefix in the set. The result is
/// prefix-free and every removed word has a prefix among the survivors.
pub fn prefix_free_reduce(set: &WordSet) -> WordSet {
    // In lexicographic order a word's prefixes precede it, and everything
    // between a prefix `u` and an extension of `u` also extends `u`. So the
    // only survivor that can prefix the current word is the last one kept.
    let mut kept: Vec<Word> = Vec::with_capacity(set.len());
    for w in set {
        match kept.last() {
            Some(last) if last.is_strict_prefix_of(w) => {}
            _ => kept.push(w.clone()),
        }
    }
    kept.into_iter().collect()
}

/// Counts of length-`n` words bucketed by their number of ones. Enough to
/// recover the exact Bernoulli measure of any set of length-`n` words, which
/// lets the enumeration code avoid materialising huge word sets.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OnesHistogram {
    length: u32,
    counts: Vec<u64>,
}

impl OnesHistogram {
    pub fn new(length: u32) -> Self {
        OnesHistogram {
            length,
            counts: vec![0; length as usize + 1],
        }
    }

    pub fn length(&self) -> u32 {
        self.length
    }

    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    pub fn add(&mut self, ones: u32) {
        self.counts[ones as usize] += 1;
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }

    pub fn merge(&mut self, other: &OnesHistogram) {
        assert_eq!(self.length, other.length, "histograms over different lengths");
        for (a, b) in self.counts.iter_mut().zip(&other.counts) {
            *a += *b;
        }
    }

    pub fn measure(&self, p: &BernoulliParam) -> Measure {
        let n = self.length;
        let total = self
            .counts
            .iter()
            .enumerate()
            .filter(|(_, &c)| c > 0)
            .fold(Rational::zero(), |acc, (k, &c)| {
                let k = k as u32;
                acc + ratio::pow(p.p1(), k)
                    * ratio::pow(p.p0(), n - k)
                    * Rational::from_integer(BigInt::from(c))
            });
        Measure::from_rational(total)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ratio::rational;
    use proptest::prelude::*;

    fn w(s: &str) -> Word {
        s.parse().unwrap()
    }

    fn set(words: &[&str]) -> WordSet {
        words.iter().map(|s| w(s)).collect()
    }

    #[test]
    fn mu_word_examples() {
        let half = BernoulliParam::half();
        let third = BernoulliParam::from_ratio(1, 3).unwrap();
        assert_eq!(mu_word(&half, &w("0110")).value(), &rational(1, 16));
        assert_eq!(mu_word(&third, &w("1")).value(), &rational(1, 3));
        assert_eq!(mu_word(&third, &w("10")).value(), &rational(2, 9));
        assert_eq!(mu_word(&third, &Word::empty()), Measure::one());
    }

    #[test]
    fn mu_set_examples() {
        let third = BernoulliParam::from_ratio(1, 3).unwrap();
        for n in 0..8 {
            assert_eq!(mu_set(&third, &WordSet::full(n)), Measure::one());
        }
        assert_eq!(mu_set(&third, &WordSet::new()), Measure::zero());
        let half = BernoulliParam::half();
        assert_eq!(mu_set(&half, &set(&["0", "10"])).value(), &rational(3, 4));
    }

    #[test]
    fn param_validation() {
        assert!(BernoulliParam::from_ratio(3, 2).is_err());
        assert!(BernoulliParam::from_ratio(-1, 2).is_err());
        let zero = BernoulliParam::from_ratio(0, 1).unwrap();
        assert!(!zero.is_positive());
        assert!(zero.require_positive().is_err());
        assert!(BernoulliParam::half().is_positive());
        assert_eq!("2/6".parse::<BernoulliParam>().unwrap().to_string(), "1/3");
        assert_eq!(BernoulliParam::half().p(0), &rational(1, 2));
    }

    #[test]
    fn reduce_examples() {
        assert_eq!(prefix_free_reduce(&set(&["1", "10", "11"])), set(&["1"]));
        let full = set(&["00", "01", "10", "11"]);
        assert_eq!(prefix_free_reduce(&full), full);
        assert_eq!(prefix_free_reduce(&set(&["0", "01", "1"])), set(&["0", "1"]));
        assert_eq!(prefix_free_reduce(&set(&["", "0", "101"])), set(&[""]));
        assert_eq!(prefix_free_reduce(&WordSet::new()), WordSet::new());
    }

    #[test]
    fn histogram_matches_mu_set() {
        let p = BernoulliParam::from_ratio(2, 7).unwrap();
        let members: WordSet = Word::all_of_length(6).filter(|x| x.bits()[0] == 1 || x.count_ones() == 2).collect();
        let mut hist = OnesHistogram::new(6);
        for x in &members {
            hist.add(x.count_ones() as u32);
        }
        assert_eq!(hist.total(), members.len() as u64);
        assert_eq!(hist.measure(&p), mu_set(&p, &members));
    }

    /// Brute-force reduction straight from the definition.
    fn reduce_oracle(f: &WordSet) -> WordSet {
        f.iter()
            .filter(|x| !f.iter().any(|u| u.is_strict_prefix_of(x)))
            .cloned()
            .collect()
    }

    fn word_set_strategy() -> impl Strategy<Value = WordSet> {
        proptest::collection::vec(proptest::collection::vec(0u8..2, 0..6), 0..12)
            .prop_map(|ws| ws.into_iter().map(|b| Word::from_bits(b).unwrap()).collect())
    }

    fn param_strategy() -> impl Strategy<Value = BernoulliParam> {
        (1i64..10, 0i64..10).prop_map(|(den, num)| {
            BernoulliParam::from_ratio(num.min(den), den).unwrap()
        })
    }

    proptest! {
        #[test]
        fn reduce_matches_oracle_and_is_idempotent(f in word_set_strategy()) {
            let r = prefix_free_reduce(&f);
            prop_assert_eq!(&r, &reduce_oracle(&f));
            prop_assert!(r.is_prefix_free());
            prop_assert_eq!(prefix_free_reduce(&r), r.clone());
            for x in &f {
                prop_assert!(r.iter().any(|u| u.is_prefix_of(x)));
            }
        }

        #[test]
        fn prefix_free_sets_have_measure_at_most_one(f in word_set_strategy(), p in param_strategy()) {
            let r = prefix_free_reduce(&f);
            prop_assert!(mu_set(&p, &r) <= Measure::one());
        }

        #[test]
        fn multiplicative_and_monotone(
            u in proptest::collection::vec(0u8..2, 0..10),
            v in proptest::collection::vec(0u8..2, 0..10),
            p in param_strategy(),
        ) {
            let u = Word::from_bits(u).unwrap();
            let v = Word::from_bits(v).unwrap();
            let uv = u.concat(&v);
            prop_assert_eq!(
                mu_word(&p, &uv).into_rational(),
                mu_word(&p, &u).into_rational() * mu_word(&p, &v).into_rational()
            );
            for a in 0..2u8 {
                let mut ua = u.clone();
                ua.push(a);
                prop_assert!(mu_word(&p, &u) >= mu_word(&p, &ua));
            }
        }
    }
}
