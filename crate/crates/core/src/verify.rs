//! Exhaustive enumeration of the word sets behind the selection lemmas, with
//! exact Bernoulli measures.
//!
//! For a selector `A`, word length `n`, density `b` and tolerance `ε`:
//!
//! * `E_n(b,q)`: `|A_q[w]| ≤ bn` (too few symbols picked from state `q`);
//! * `G_n(b,ε,q)`: `|A_q[w]| > bn` and the picked frequency of 1 is at least
//!   `ε` away from `p(1)`;
//! * `D_n(b,ε,q)`: `|A_q[w]| > bn` and the deviation is below `ε`.
//!
//! `E` and `G` aggregate by union over states, `D` by intersection, so
//! `{0,1}^n = D ∪ E ∪ G` with `D` disjoint from the other two. On a binary
//! alphabet the deviations of the two symbols coincide, so the maximum over
//! symbols reduces to the deviation of 1.
//!
//! `H`, `F` and `R` are the strategy-level sets: `H_n` are the words whose
//! selection is long and deviant for a chosen symbol, `F_n` the long deviant
//! words themselves (lengths in `(bn, n]`) and `R_n` the prefix-free
//! reduction of `F_n`.
//!
//! Everything is enumerated, never sampled; word length is capped (22 by
//! default) and larger requests are rejected.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::automata::{Dfa, StateId};
use crate::error::{Error, Result};
use crate::markov::{min_accepting_mass, TransitionMatrix};
use crate::measure::{mu_set, mu_word, prefix_free_reduce, BernoulliParam, Measure, OnesHistogram, WordSet};
use crate::ratio::{self, format_rational, Rational};
use crate::strategies::Strategy;
use crate::words::Word;

pub const DEFAULT_ENUMERATION_CAP: u32 = 22;

#[derive(Clone, Debug)]
pub struct VerifyConfig {
    /// Longest word length enumerated.
    pub cap: u32,
    /// Threshold for "small final value" verdicts.
    pub final_tolerance: Rational,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig {
            cap: DEFAULT_ENUMERATION_CAP,
            final_tolerance: ratio::rational(1, 20),
        }
    }
}

impl VerifyConfig {
    fn check_n(&self, n: u32) -> Result<()> {
        if n > self.cap {
            Err(Error::OverCap { n, cap: self.cap })
        } else if n == 0 {
            Err(Error::InvalidParameter("word length n must be at least 1".into()))
        } else {
            Ok(())
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum SetKind {
    E,
    G,
    D,
    H,
    F,
    R,
}

impl FromStr for SetKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "E" | "e" => SetKind::E,
            "G" | "g" => SetKind::G,
            "D" | "d" => SetKind::D,
            "H" | "h" => SetKind::H,
            "F" | "f" => SetKind::F,
            "R" | "r" => SetKind::R,
            _ => return Err(Error::InvalidParameter(format!("unknown set kind {s:?}"))),
        })
    }
}

impl fmt::Display for SetKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

/// Which set to enumerate. `state` selects the per-state variant of `E`,
/// `G`, `D` (and the start state used for `H`); `symbol` is the `a` of the
/// strategy-level sets.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SetSpec {
    pub kind: SetKind,
    pub n: u32,
    pub b: Rational,
    pub epsilon: Rational,
    pub state: Option<StateId>,
    pub symbol: u8,
}

impl SetSpec {
    pub fn new(kind: SetKind, n: u32, b: Rational, epsilon: Rational) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidParameter("n must be at least 1".into()));
        }
        check_b(&b)?;
        check_epsilon(&epsilon)?;
        Ok(SetSpec {
            kind,
            n,
            b,
            epsilon,
            state: None,
            symbol: 1,
        })
    }

    pub fn at_state(mut self, q: StateId) -> Self {
        self.state = Some(q);
        self
    }

    pub fn for_symbol(mut self, a: u8) -> Self {
        self.symbol = a & 1;
        self
    }
}

fn check_b(b: &Rational) -> Result<()> {
    if !b.is_positive() || *b > Rational::one() {
        return Err(Error::InvalidParameter(format!("b = {} must lie in (0, 1]", format_rational(b))));
    }
    Ok(())
}

fn check_epsilon(eps: &Rational) -> Result<()> {
    if !eps.is_positive() {
        return Err(Error::InvalidParameter(format!("epsilon = {} must be positive", format_rational(eps))));
    }
    Ok(())
}

#[derive(Clone, Copy, Debug)]
struct Frac {
    num: i128,
    den: i128,
}

impl Frac {
    fn of(x: &Rational, what: &str) -> Result<Self> {
        const LIMIT: i128 = 1 << 40;
        let num = x.numer().to_i128();
        let den = x.denom().to_i128();
        match (num, den) {
            (Some(num), Some(den)) if num.abs() < LIMIT && den < LIMIT => Ok(Frac { num, den }),
            _ => Err(Error::InvalidParameter(format!(
                "{what} = {} has too large a numerator or denominator",
                format_rational(x)
            ))),
        }
    }
}

/// The membership tests with every rational comparison cleared of
/// denominators, so the hot loops run on integers.
#[derive(Clone, Copy, Debug)]
struct Criteria {
    b: Frac,
    eps: Frac,
    p1: Frac,
}

impl Criteria {
    fn new(p: &BernoulliParam, b: &Rational, eps: &Rational) -> Result<Self> {
        Ok(Criteria {
            b: Frac::of(b, "b")?,
            eps: Frac::of(eps, "epsilon")?,
            p1: Frac::of(p.p1(), "p")?,
        })
    }

    /// `len > b·n`
    #[inline]
    fn long_enough(&self, len: u32, n: u32) -> bool {
        len as i128 * self.b.den > self.b.num * n as i128
    }

    /// `|p(a) − count_a/len| ≥ ε`, for `len > 0`.
    #[inline]
    fn deviates(&self, count_a: u32, len: u32, a: u8) -> bool {
        debug_assert!(len > 0);
        let pa = if a == 1 { self.p1.num } else { self.p1.den - self.p1.num };
        let diff = (count_a as i128 * self.p1.den - pa * len as i128).abs();
        diff * self.eps.den >= self.eps.num * len as i128 * self.p1.den
    }

    /// Deviation test given the number of ones in a selection.
    #[inline]
    fn deviates_ones(&self, ones: u32, len: u32, a: u8) -> bool {
        let count = if a == 1 { ones } else { len - ones };
        self.deviates(count, len, a)
    }
}

/// Per-state membership of one word, from its selection counts.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Class {
    E,
    G,
    D,
}

#[inline]
fn classify(c: &Criteria, n: u32, (len, ones): (u32, u32)) -> Class {
    if !c.long_enough(len, n) {
        Class::E
    } else if c.deviates_ones(ones, len, 1) {
        Class::G
    } else {
        Class::D
    }
}

/// Splits `{0,1}^n` into chunks, runs `visit` over each chunk in parallel
/// with its own accumulator, and merges the accumulators in chunk order.
fn par_words<A, I, V, M>(n: u32, init: I, visit: V, merge: M) -> A
where
    A: Send,
    I: Fn() -> A + Sync,
    V: Fn(&mut A, u64) + Sync,
    M: Fn(&mut A, A) + Sync,
{
    let total = 1u64 << n;
    let chunk = (total / 256).max(1 << 10);
    let chunks = total.div_ceil(chunk);
    let parts: Vec<A> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut acc = init();
            for v in c * chunk..((c + 1) * chunk).min(total) {
                visit(&mut acc, v);
            }
            acc
        })
        .collect();
    let mut parts = parts.into_iter();
    let mut acc = parts.next().unwrap_or_else(&init);
    for part in parts {
        merge(&mut acc, part);
    }
    acc
}

/// Exact measures of the `D/E/G` family at one `(n, b, ε)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SetMeasures {
    pub n: u32,
    pub d: Measure,
    pub e: Measure,
    pub g: Measure,
    pub d_per_state: Vec<Measure>,
    pub e_per_state: Vec<Measure>,
    pub g_per_state: Vec<Measure>,
}

impl SetMeasures {
    pub fn e_state_sum(&self) -> Rational {
        self.e_per_state.iter().map(|m| m.value().clone()).sum()
    }

    pub fn g_state_sum(&self) -> Rational {
        self.g_per_state.iter().map(|m| m.value().clone()).sum()
    }
}

/// One enumeration pass computing every `D/E/G` measure, aggregated and per
/// state.
pub fn set_measures(
    dfa: &Dfa,
    p: &BernoulliParam,
    n: u32,
    b: &Rational,
    epsilon: &Rational,
    config: &VerifyConfig,
) -> Result<SetMeasures> {
    config.check_n(n)?;
    check_b(b)?;
    check_epsilon(epsilon)?;
    let crit = Criteria::new(p, b, epsilon)?;
    let k = dfa.state_count();
    // slots: D, E, G, then per state D_q, E_q, G_q
    let slots = 3 + 3 * k;
    let hists = par_words(
        n,
        || vec![OnesHistogram::new(n); slots],
        |acc, v| {
            let ones = v.count_ones();
            let (mut all_d, mut any_e, mut any_g) = (true, false, false);
            for q in 0..k {
                match classify(&crit, n, dfa.selection_counts(q, v, n)) {
                    Class::E => {
                        any_e = true;
                        all_d = false;
                        acc[3 + 3 * q + 1].add(ones);
                    }
                    Class::G => {
                        any_g = true;
                        all_d = false;
                        acc[3 + 3 * q + 2].add(ones);
                    }
                    Class::D => acc[3 + 3 * q].add(ones),
                }
            }
            if all_d {
                acc[0].add(ones);
            }
            if any_e {
                acc[1].add(ones);
            }
            if any_g {
                acc[2].add(ones);
            }
        },
        merge_hists,
    );
    let m: Vec<Measure> = hists.iter().map(|h| h.measure(p)).collect();
    Ok(SetMeasures {
        n,
        d: m[0].clone(),
        e: m[1].clone(),
        g: m[2].clone(),
        d_per_state: (0..k).map(|q| m[3 + 3 * q].clone()).collect(),
        e_per_state: (0..k).map(|q| m[3 + 3 * q + 1].clone()).collect(),
        g_per_state: (0..k).map(|q| m[3 + 3 * q + 2].clone()).collect(),
    })
}

fn merge_hists(acc: &mut Vec<OnesHistogram>, other: Vec<OnesHistogram>) {
    for (a, b) in acc.iter_mut().zip(&other) {
        a.merge(b);
    }
}

/// Membership of a single length-`n` word in the requested set.
fn member(dfa: &Dfa, crit: &Criteria, spec: &SetSpec, strategy: Option<&Strategy>, v: u64) -> bool {
    let n = spec.n;
    let class_at = |q: StateId| classify(crit, n, dfa.selection_counts(q, v, n));
    let states: Vec<StateId> = match spec.state {
        Some(q) => vec![q],
        None => (0..dfa.state_count()).collect(),
    };
    match spec.kind {
        SetKind::E => states.iter().any(|&q| class_at(q) == Class::E),
        SetKind::G => states.iter().any(|&q| class_at(q) == Class::G),
        SetKind::D => states.iter().all(|&q| class_at(q) == Class::D),
        SetKind::H => {
            let (len, ones) = match strategy {
                Some(s) => {
                    let picked = s.picked(&Word::from_u64(v, n));
                    (picked.len() as u32, picked.count_ones() as u32)
                }
                None => dfa.selection_counts(spec.state.unwrap_or(dfa.start()), v, n),
            };
            crit.long_enough(len, n) && crit.deviates_ones(ones, len, spec.symbol)
        }
        SetKind::F | SetKind::R => unreachable!("F and R are not sets of length-n words"),
    }
}

/// Materialises the set and its exact measure. `H` uses `A` started from
/// `spec.state` (default: its start state) as the strategy.
pub fn enumerate_set(dfa: &Dfa, p: &BernoulliParam, spec: &SetSpec, config: &VerifyConfig) -> Result<(WordSet, Measure)> {
    config.check_n(spec.n)?;
    if let Some(q) = spec.state {
        if q >= dfa.state_count() {
            return Err(Error::InvalidState { state: q, states: dfa.state_count() });
        }
    }
    let crit = Criteria::new(p, &spec.b, &spec.epsilon)?;
    let set: WordSet = match spec.kind {
        SetKind::F => long_deviant_words(&crit, spec),
        SetKind::R => prefix_free_reduce(&long_deviant_words(&crit, spec)),
        _ => (0..1u64 << spec.n)
            .into_par_iter()
            .filter(|&v| member(dfa, &crit, spec, None, v))
            .map(|v| Word::from_u64(v, spec.n))
            .collect::<Vec<_>>()
            .into_iter()
            .collect(),
    };
    let m = mu_set(p, &set);
    Ok((set, m))
}

/// Exact measure without materialising the set.
pub fn measure_set(dfa: &Dfa, p: &BernoulliParam, spec: &SetSpec, config: &VerifyConfig) -> Result<Measure> {
    config.check_n(spec.n)?;
    let crit = Criteria::new(p, &spec.b, &spec.epsilon)?;
    match spec.kind {
        SetKind::F => Ok(long_deviant_measure(p, &crit, spec.n, spec.symbol, false)),
        SetKind::R => Ok(long_deviant_measure(p, &crit, spec.n, spec.symbol, true)),
        _ => {
            let hist = par_words(
                spec.n,
                || OnesHistogram::new(spec.n),
                |acc, v| {
                    if member(dfa, &crit, spec, None, v) {
                        acc.add(v.count_ones());
                    }
                },
                |a, b| a.merge(&b),
            );
            Ok(hist.measure(p))
        }
    }
}

/// `F_n`: words of every length in `(bn, n]` whose frequency of `a` is at
/// least `ε` from `p(a)`.
fn long_deviant_words(crit: &Criteria, spec: &SetSpec) -> WordSet {
    (1..=spec.n)
        .filter(|&len| crit.long_enough(len, spec.n))
        .flat_map(|len| {
            Word::all_of_length(len)
                .filter(move |y| crit.deviates_ones(y.count_ones() as u32, len, spec.symbol))
        })
        .collect()
}

/// `μ(F_n)` or `μ(R_n)` by dynamic programming over (length, ones): whether
/// a word is in `F_n` depends only on those two numbers, so the words with no
/// proper prefix in `F_n` can be counted per lattice point.
fn long_deviant_measure(p: &BernoulliParam, crit: &Criteria, n: u32, a: u8, reduce: bool) -> Measure {
    let in_f = |len: u32, ones: u32| len > 0 && crit.long_enough(len, n) && crit.deviates_ones(ones, len, a);
    // alive[k]: words of the current length with k ones and no proper prefix in F
    let mut alive: Vec<BigInt> = vec![BigInt::one()];
    let mut total = Rational::zero();
    for len in 0..=n {
        let mut next = vec![BigInt::zero(); len as usize + 2];
        for (k, count) in alive.iter().enumerate() {
            if count.is_zero() {
                continue;
            }
            let k32 = k as u32;
            let absorbed = in_f(len, k32);
            if absorbed {
                total += ratio::pow(p.p1(), k32)
                    * ratio::pow(p.p0(), len - k32)
                    * Rational::from_integer(count.clone());
            }
            if !absorbed || !reduce {
                next[k] += count;
                next[k + 1] += count;
            }
        }
        alive = next;
    }
    Measure::from_rational(total)
}

/// Row of a [`TrendReport`]: the primary measure, an optional analytic
/// bound, named auxiliary exact values and a per-row check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TrendRow {
    pub n: u32,
    pub measure: Measure,
    pub bound: Option<Rational>,
    pub values: Vec<Rational>,
    pub ok: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Verdict {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl Verdict {
    fn new(name: &str, passed: bool, detail: String) -> Self {
        Verdict {
            name: name.to_string(),
            passed,
            detail,
        }
    }
}

/// Per-`n` table of exact measures plus verdicts; sorted by `n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TrendReport {
    pub title: String,
    pub parameters: Vec<(String, String)>,
    pub columns: Vec<String>,
    pub rows: Vec<TrendRow>,
    pub verdicts: Vec<Verdict>,
}

impl TrendReport {
    pub fn passed(&self) -> bool {
        self.verdicts.iter().all(|v| v.passed)
    }

    pub fn measures(&self) -> Vec<&Measure> {
        self.rows.iter().map(|r| &r.measure).collect()
    }

    pub fn row(&self, n: u32) -> Option<&TrendRow> {
        self.rows.iter().find(|r| r.n == n)
    }

    /// Auxiliary column by name.
    pub fn column(&self, name: &str) -> Option<Vec<&Rational>> {
        let idx = self.columns.iter().position(|c| c == name)?;
        Some(self.rows.iter().map(|r| &r.values[idx]).collect())
    }

    pub fn verdict(&self, name: &str) -> Option<&Verdict> {
        self.verdicts.iter().find(|v| v.name == name)
    }

    /// Columns: `n, measure, measure_f64, bound, <auxiliary...>, ok`. Exact
    /// values are `num/den`; a missing bound is empty.
    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        let mut header = vec!["n".to_string(), "measure".into(), "measure_f64".into(), "bound".into()];
        header.extend(self.columns.iter().cloned());
        header.push("ok".into());
        w.write_record(&header)?;
        for row in &self.rows {
            let mut rec = vec![
                row.n.to_string(),
                row.measure.to_string(),
                format!("{:.9}", row.measure.to_f64()),
                row.bound.as_ref().map(format_rational).unwrap_or_default(),
            ];
            rec.extend(row.values.iter().map(format_rational));
            rec.push(row.ok.to_string());
            w.write_record(&rec)?;
        }
        let bytes = w.into_inner().map_err(|e| Error::Io(e.into_error()))?;
        Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
    }

    pub fn to_json(&self) -> Result<String> {
        #[derive(Serialize)]
        struct Row<'a> {
            n: u32,
            measure: &'a Measure,
            bound: Option<String>,
            values: BTreeMap<&'a str, String>,
            ok: bool,
        }
        #[derive(Serialize)]
        struct Out<'a> {
            title: &'a str,
            parameters: BTreeMap<&'a str, &'a str>,
            rows: Vec<Row<'a>>,
            verdicts: &'a [Verdict],
            passed: bool,
        }
        let out = Out {
            title: &self.title,
            parameters: self.parameters.iter().map(|(k, v)| (k.as_str(), v.as_str())).collect(),
            rows: self
                .rows
                .iter()
                .map(|r| Row {
                    n: r.n,
                    measure: &r.measure,
                    bound: r.bound.as_ref().map(format_rational),
                    values: self
                        .columns
                        .iter()
                        .map(String::as_str)
                        .zip(r.values.iter().map(format_rational))
                        .collect(),
                    ok: r.ok,
                })
                .collect(),
            verdicts: &self.verdicts,
            passed: self.passed(),
        };
        Ok(serde_json::to_string_pretty(&out)?)
    }
}

fn sorted_range(n_range: &[u32], config: &VerifyConfig) -> Result<Vec<u32>> {
    let mut ns = n_range.to_vec();
    ns.sort_unstable();
    ns.dedup();
    if ns.is_empty() {
        return Err(Error::InvalidParameter("empty n range".into()));
    }
    for &n in &ns {
        config.check_n(n)?;
    }
    Ok(ns)
}

fn rows_ok_verdict(name: &str, rows: &[TrendRow]) -> Verdict {
    let bad: Vec<String> = rows.iter().filter(|r| !r.ok).map(|r| r.n.to_string()).collect();
    Verdict::new(
        name,
        bad.is_empty(),
        if bad.is_empty() { "all rows".into() } else { format!("fails at n = {}", bad.join(", ")) },
    )
}

/// Result of a single Lemma-3 check.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Lemma3Outcome {
    pub n: u32,
    pub mu_m: Measure,
    pub mu_r: Measure,
    pub holds: bool,
}

/// `M_n = {w ∈ {0,1}^n : S(w) ∈ F}` against `R = prefix_free_reduce(F)`:
/// checks `μ(M_n) ≤ μ(R)` exactly.
pub fn verify_lemma3(strategy: &Strategy, f: &WordSet, n: u32, p: &BernoulliParam, config: &VerifyConfig) -> Result<Lemma3Outcome> {
    config.check_n(n)?;
    if f.max_len() > n as usize {
        return Err(Error::InvalidParameter(format!(
            "n = {n} is shorter than the longest word of F ({})",
            f.max_len()
        )));
    }
    let hist = par_words(
        n,
        || OnesHistogram::new(n),
        |acc, v| {
            if f.contains(&strategy.picked(&Word::from_u64(v, n))) {
                acc.add(v.count_ones());
            }
        },
        |a, b| a.merge(&b),
    );
    let mu_m = hist.measure(p);
    let mu_r = mu_set(p, &prefix_free_reduce(f));
    let holds = mu_m <= mu_r;
    Ok(Lemma3Outcome { n, mu_m, mu_r, holds })
}

/// The exhaustive Lemma-3 catalog: strategies × families `F` × lengths ×
/// parameters.
#[derive(Clone, Debug)]
pub struct Lemma3Catalog {
    pub strategies: Vec<Dfa>,
    /// Longest word allowed in `F`.
    pub max_word_len: u32,
    /// Largest `|F|`.
    pub max_family_size: usize,
    pub n_values: Vec<u32>,
    pub params: Vec<BernoulliParam>,
}

impl Default for Lemma3Catalog {
    /// All 2-state DFAs plus 50 seeded 3-state DFAs; every `F ⊆ {0,1}^{≤3}`
    /// with `|F| ≤ 4`; `n ≤ 10`; `p ∈ {1/2, 1/3}`.
    fn default() -> Self {
        let mut strategies = Dfa::enumerate_all(2);
        strategies.extend((0..50).map(|seed| Dfa::random(3, 1000 + seed)));
        Lemma3Catalog {
            strategies,
            max_word_len: 3,
            max_family_size: 4,
            n_values: (1..=10).collect(),
            params: vec![BernoulliParam::half(), BernoulliParam::from_ratio(1, 3).unwrap()],
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Lemma3Violation {
    pub strategy: usize,
    pub family: Vec<Word>,
    pub n: u32,
    pub p: String,
    pub mu_m: Measure,
    pub mu_r: Measure,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Lemma3CatalogReport {
    pub strategies: usize,
    pub families: usize,
    pub checks: u64,
    pub violations: Vec<Lemma3Violation>,
    /// Largest observed `μ(M_n)/μ(R)` over checks with `μ(R) > 0`.
    pub max_ratio: f64,
}

impl Lemma3CatalogReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// All subsets of `words` of size at most `max_size`, in a fixed order.
fn small_subsets(words: &[Word], max_size: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, len: usize, max: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        out.push(cur.clone());
        if cur.len() == max {
            return;
        }
        for i in start..len {
            cur.push(i);
            rec(i + 1, len, max, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, words.len(), max_size, &mut Vec::new(), &mut out);
    out
}

/// Runs the catalog. For each (strategy, n) the words are enumerated once
/// and bucketed by the short selection they produce; every family `F` is then
/// checked as a sum over those buckets, in integers scaled by `den(p)^n`.
pub fn lemma3_catalog(catalog: &Lemma3Catalog, config: &VerifyConfig) -> Result<Lemma3CatalogReport> {
    let short: Vec<Word> = Word::all_up_to(catalog.max_word_len).collect();
    let index: BTreeMap<Word, usize> = short.iter().cloned().enumerate().map(|(i, w)| (w, i)).collect();
    let families = small_subsets(&short, catalog.max_family_size);
    for &n in &catalog.n_values {
        config.check_n(n)?;
    }

    // μ(R) per (family, param), scaled later.
    let reduced: Vec<WordSet> = families
        .iter()
        .map(|fam| prefix_free_reduce(&fam.iter().map(|&i| short[i].clone()).collect()))
        .collect();
    let mu_r: Vec<Vec<Rational>> = catalog
        .params
        .iter()
        .map(|p| reduced.iter().map(|r| mu_set(p, r).into_rational()).collect())
        .collect();

    let jobs: Vec<(usize, u32)> = (0..catalog.strategies.len())
        .flat_map(|s| catalog.n_values.iter().map(move |&n| (s, n)))
        .collect();

    let results: Vec<(u64, Vec<Lemma3Violation>, f64)> = jobs
        .par_iter()
        .map(|&(s, n)| {
            let dfa = &catalog.strategies[s];
            // bucket[i]: words whose selection is short[i]
            let mut buckets = vec![OnesHistogram::new(n); short.len()];
            for v in 0..1u64 << n {
                let (len, _) = dfa.selection_counts(dfa.start(), v, n);
                if len > catalog.max_word_len {
                    continue;
                }
                let picked = dfa.select(dfa.start(), &Word::from_u64(v, n)).expect("valid start").selected;
                buckets[index[&picked]].add(v.count_ones());
            }
            let mut checks = 0u64;
            let mut violations = Vec::new();
            let mut max_ratio = 0f64;
            for (pi, p) in catalog.params.iter().enumerate() {
                let t: Vec<Rational> = buckets.iter().map(|h| h.measure(p).into_rational()).collect();
                let scale = Rational::from_integer(ratio::pow(&Rational::from_integer(p.p1().denom().clone()), n).to_integer());
                let to_int = |x: &Rational| -> Option<u128> {
                    let y = x * &scale;
                    y.is_integer().then(|| y.to_integer().to_u128()).flatten()
                };
                let t_int: Option<Vec<u128>> = t.iter().map(to_int).collect();
                for (fi, fam) in families.iter().enumerate() {
                    if fam.iter().any(|&i| short[i].len() > n as usize) {
                        continue;
                    }
                    checks += 1;
                    let r = &mu_r[pi][fi];
                    let holds = match (&t_int, to_int(r)) {
                        (Some(ti), Some(ri)) => fam.iter().map(|&i| ti[i]).sum::<u128>() <= ri,
                        _ => fam.iter().map(|&i| t[i].clone()).sum::<Rational>() <= *r,
                    };
                    if !holds || r.is_positive() {
                        let m: Rational = fam.iter().map(|&i| t[i].clone()).sum();
                        if r.is_positive() {
                            max_ratio = max_ratio.max(ratio::to_f64(&(&m / r)));
                        }
                        if !holds {
                            violations.push(Lemma3Violation {
                                strategy: s,
                                family: fam.iter().map(|&i| short[i].clone()).collect(),
                                n,
                                p: p.to_string(),
                                mu_m: Measure::from_rational(m),
                                mu_r: Measure::from_rational(r.clone()),
                            });
                        }
                    }
                }
            }
            (checks, violations, max_ratio)
        })
        .collect();

    let mut report = Lemma3CatalogReport {
        strategies: catalog.strategies.len(),
        families: families.len(),
        checks: 0,
        violations: Vec::new(),
        max_ratio: 0.0,
    };
    for (checks, violations, max_ratio) in results {
        report.checks += checks;
        report.violations.extend(violations);
        report.max_ratio = report.max_ratio.max(max_ratio);
    }
    Ok(report)
}

/// Parameters shared by the Lemma-1 and main-claim checks.
#[derive(Clone, Debug)]
pub struct DensityParams {
    pub epsilon: Rational,
    /// Divisor of `c − ε`; defaults to the period of the induced chain.
    pub d: Option<Rational>,
}

/// `c`, `d` and `b = (c − ε)/d` for a strongly connected selector.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Density {
    pub c: Rational,
    pub d: Rational,
    pub b: Rational,
}

pub fn density(dfa: &Dfa, p: &BernoulliParam, params: &DensityParams) -> Result<Density> {
    check_epsilon(&params.epsilon)?;
    p.require_positive()?;
    let c = min_accepting_mass(dfa, p)?.into_rational();
    if params.epsilon >= c {
        return Err(Error::EpsilonExceedsMass {
            epsilon: format_rational(&params.epsilon),
            c: format_rational(&c),
        });
    }
    let d = match &params.d {
        Some(d) if d.is_positive() => d.clone(),
        Some(d) => return Err(Error::InvalidParameter(format!("d = {} must be positive", format_rational(d)))),
        None => ratio::from_int(TransitionMatrix::induced(dfa, p).period()? as i64),
    };
    let b = (&c - &params.epsilon) / &d;
    if b > Rational::one() {
        return Err(Error::InvalidParameter(format!("b = {} exceeds 1", format_rational(&b))));
    }
    Ok(Density { c, d, b })
}

/// Tabulates `μ(E_n((c − ε)/d))` and checks it against the union bound
/// `Σ_q μ(E_n(b,q))`. Verdicts: union bound at every row, last value no
/// larger than the first, last value within the configured tolerance.
pub fn verify_lemma1(
    dfa: &Dfa,
    p: &BernoulliParam,
    params: &DensityParams,
    n_range: &[u32],
    config: &VerifyConfig,
) -> Result<TrendReport> {
    let ns = sorted_range(n_range, config)?;
    let dens = density(dfa, p, params)?;
    // G and D need some ε; only E is reported here.
    let eps = params.epsilon.clone();
    let mut rows = Vec::new();
    for &n in &ns {
        let m = set_measures(dfa, p, n, &dens.b, &eps, config)?;
        let sum = m.e_state_sum();
        rows.push(TrendRow {
            n,
            ok: *m.e.value() <= sum,
            measure: m.e,
            bound: None,
            values: vec![sum],
        });
    }
    let first = rows.first().unwrap().measure.clone();
    let last = rows.last().unwrap().measure.clone();
    let verdicts = vec![
        rows_ok_verdict("union_bound", &rows),
        Verdict::new("tail_decrease", last <= first, format!("{first} -> {last}")),
        Verdict::new(
            "final_small",
            *last.value() <= config.final_tolerance,
            format!("{last} <= {}", format_rational(&config.final_tolerance)),
        ),
    ];
    Ok(TrendReport {
        title: "lemma1".into(),
        parameters: vec![
            ("p".into(), p.to_string()),
            ("epsilon".into(), format_rational(&params.epsilon)),
            ("c".into(), format_rational(&dens.c)),
            ("d".into(), format_rational(&dens.d)),
            ("b".into(), format_rational(&dens.b)),
        ],
        columns: vec!["sum_q_E".into()],
        rows,
        verdicts,
    })
}

/// `μ(D_n)`, `μ(E_n)`, `μ(G_n)` with `b = (c − ε)/d`; checks
/// `1 − μ(D) ≤ μ(E) + μ(G)` at every `n` and that `μ(D)` grows over the
/// range (or already equals 1).
pub fn verify_mainclaim(
    dfa: &Dfa,
    p: &BernoulliParam,
    params: &DensityParams,
    n_range: &[u32],
    config: &VerifyConfig,
) -> Result<TrendReport> {
    let dens = density(dfa, p, params)?;
    mainclaim_with_b(dfa, p, &dens.b, &params.epsilon, n_range, config).map(|mut r| {
        r.parameters.insert(2, ("c".into(), format_rational(&dens.c)));
        r.parameters.insert(3, ("d".into(), format_rational(&dens.d)));
        r
    })
}

/// The main-claim table for an explicit `b`.
pub fn mainclaim_with_b(
    dfa: &Dfa,
    p: &BernoulliParam,
    b: &Rational,
    epsilon: &Rational,
    n_range: &[u32],
    config: &VerifyConfig,
) -> Result<TrendReport> {
    let ns = sorted_range(n_range, config)?;
    let mut rows = Vec::new();
    for &n in &ns {
        let m = set_measures(dfa, p, n, b, epsilon, config)?;
        let e_plus_g = m.e.value() + m.g.value();
        let complement = Rational::one() - m.d.value();
        rows.push(TrendRow {
            n,
            ok: complement <= e_plus_g,
            measure: m.d.clone(),
            bound: None,
            values: vec![
                m.e.value().clone(),
                m.g.value().clone(),
                e_plus_g,
                complement,
                m.g_state_sum(),
            ],
        });
    }
    let first = rows.first().unwrap().measure.clone();
    let last = rows.last().unwrap().measure.clone();
    let increasing = last > first || last == Measure::one();
    let g_union_ok = rows.iter().all(|r| r.values[1] <= r.values[4]);
    let verdicts = vec![
        rows_ok_verdict("complement_bound", &rows),
        Verdict::new("g_union_bound", g_union_ok, "mu(G) <= sum_q mu(G_q)".into()),
        Verdict::new("increasing_tail", increasing, format!("{first} -> {last}")),
    ];
    Ok(TrendReport {
        title: "mainclaim".into(),
        parameters: vec![
            ("p".into(), p.to_string()),
            ("epsilon".into(), format_rational(epsilon)),
            ("b".into(), format_rational(b)),
        ],
        columns: vec!["E".into(), "G".into(), "E_plus_G".into(), "one_minus_D".into(), "sum_q_G".into()],
        rows,
        verdicts,
    })
}

/// Parameters of the Lemma-2 check.
#[derive(Clone, Debug)]
pub struct Lemma2Params {
    pub b: Rational,
    pub epsilon: Rational,
    pub symbol: u8,
}

/// Chebyshev bound `p(a)(1 − p(a)) / (⌊bn⌋ ε²)`, or `None` when `⌊bn⌋ = 0`.
pub fn chebyshev_bound(p: &BernoulliParam, a: u8, b: &Rational, epsilon: &Rational, n: u32) -> Option<Rational> {
    let ell = (b * ratio::from_int(n as i64)).floor();
    if ell.is_zero() {
        return None;
    }
    let pa = p.p(a);
    Some(pa * (Rational::one() - pa) / (ell * epsilon * epsilon))
}

/// The bound with the squared variance, `p(a)²(1 − p(a))² / (⌊bn⌋ ε²)`, as
/// printed in some sources. Reported alongside, never used as a verdict.
pub fn squared_variance_bound(p: &BernoulliParam, a: u8, b: &Rational, epsilon: &Rational, n: u32) -> Option<Rational> {
    let ell = (b * ratio::from_int(n as i64)).floor();
    if ell.is_zero() {
        return None;
    }
    let v = p.p(a) * (Rational::one() - p.p(a));
    Some(&v * &v / (ell * epsilon * epsilon))
}

/// Exact `μ(H_n)` for a strategy, with `μ(R_n)` and the Chebyshev bound.
/// Verdicts: `μ(H_n) ≤` bound wherever the bound exists, `μ(H_n) ≤ μ(R_n)`,
/// and the last value no larger than the first.
pub fn verify_lemma2(
    strategy: &Strategy,
    p: &BernoulliParam,
    params: &Lemma2Params,
    n_range: &[u32],
    config: &VerifyConfig,
) -> Result<TrendReport> {
    p.require_positive()?;
    check_b(&params.b)?;
    check_epsilon(&params.epsilon)?;
    let ns = sorted_range(n_range, config)?;
    let crit = Criteria::new(p, &params.b, &params.epsilon)?;
    let a = params.symbol & 1;
    let mut rows = Vec::new();
    for &n in &ns {
        let hist = par_words(
            n,
            || OnesHistogram::new(n),
            |acc, v| {
                let picked = strategy.picked(&Word::from_u64(v, n));
                let len = picked.len() as u32;
                if crit.long_enough(len, n) && crit.deviates_ones(picked.count_ones() as u32, len, a) {
                    acc.add(v.count_ones());
                }
            },
            |x, y| x.merge(&y),
        );
        let mu_h = hist.measure(p);
        let mu_r = long_deviant_measure(p, &crit, n, a, true);
        let bound = chebyshev_bound(p, a, &params.b, &params.epsilon, n);
        let printed = squared_variance_bound(p, a, &params.b, &params.epsilon, n);
        let under_bound = bound.as_ref().is_none_or(|bd| mu_h.value() <= bd);
        rows.push(TrendRow {
            n,
            ok: under_bound && mu_h <= mu_r,
            values: vec![mu_r.into_rational(), printed.unwrap_or_else(Rational::zero)],
            measure: mu_h,
            bound,
        });
    }
    let first = rows.first().unwrap().measure.clone();
    let last = rows.last().unwrap().measure.clone();
    let cheb_ok = rows
        .iter()
        .all(|r| r.bound.as_ref().is_none_or(|bd| r.measure.value() <= bd));
    let r_ok = rows.iter().all(|r| r.measure.value() <= &r.values[0]);
    let verdicts = vec![
        Verdict::new("chebyshev_bound", cheb_ok, "mu(H_n) <= p(a)(1-p(a))/(floor(bn) eps^2)".into()),
        Verdict::new("prefix_free_bound", r_ok, "mu(H_n) <= mu(R_n)".into()),
        Verdict::new("tail_decrease", last <= first, format!("{first} -> {last}")),
    ];
    Ok(TrendReport {
        title: "lemma2".into(),
        parameters: vec![
            ("p".into(), p.to_string()),
            ("b".into(), format_rational(&params.b)),
            ("epsilon".into(), format_rational(&params.epsilon)),
            ("symbol".into(), a.to_string()),
        ],
        columns: vec!["R".into(), "squared_variance_bound".into()],
        rows,
        verdicts,
    })
}

/// Outcome of the three-way cover check at one `n`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PartitionReport {
    pub n: u32,
    pub words: u64,
    pub in_d: u64,
    pub in_e: u64,
    pub in_g: u64,
    pub in_e_and_g: u64,
    /// Words in none of the three sets.
    pub uncovered: u64,
    /// Words in `D` and in `E` or `G`.
    pub d_overlaps: u64,
}

impl PartitionReport {
    pub fn passed(&self) -> bool {
        self.uncovered == 0 && self.d_overlaps == 0
    }
}

/// Evaluates `E`, `G` and `D` membership of every word straight from their
/// definitions (with exact rational comparisons, independent of the integer
/// fast path) and counts cover and disjointness failures.
pub fn verify_partition(
    dfa: &Dfa,
    p: &BernoulliParam,
    b: &Rational,
    epsilon: &Rational,
    n: u32,
    config: &VerifyConfig,
) -> Result<PartitionReport> {
    config.check_n(n)?;
    check_b(b)?;
    check_epsilon(epsilon)?;
    let bn = b * ratio::from_int(n as i64);
    let k = dfa.state_count();
    let counts = par_words(
        n,
        || [0u64; 7],
        |acc, v| {
            let w = Word::from_u64(v, n);
            let picks: Vec<Word> = (0..k).map(|q| dfa.select(q, &w).expect("valid state").selected).collect();
            let len = |s: &Word| ratio::from_int(s.len() as i64);
            let deviation = |s: &Word| {
                (0..2u8)
                    .map(|a| (ratio::rational(s.count_symbol(a) as i64, s.len() as i64) - p.p(a)).abs())
                    .max()
                    .expect("two symbols")
            };
            let in_e = picks.iter().any(|s| len(s) <= bn);
            let in_g = picks.iter().any(|s| len(s) > bn && deviation(s) >= *epsilon);
            let in_d = picks.iter().all(|s| len(s) > bn && deviation(s) < *epsilon);
            acc[0] += 1;
            acc[1] += in_d as u64;
            acc[2] += in_e as u64;
            acc[3] += in_g as u64;
            acc[4] += (in_e && in_g) as u64;
            acc[5] += !(in_d || in_e || in_g) as u64;
            acc[6] += (in_d && (in_e || in_g)) as u64;
        },
        |a, b| {
            for (x, y) in a.iter_mut().zip(b) {
                *x += y;
            }
        },
    );
    Ok(PartitionReport {
        n,
        words: counts[0],
        in_d: counts[1],
        in_e: counts[2],
        in_g: counts[3],
        in_e_and_g: counts[4],
        uncovered: counts[5],
        d_overlaps: counts[6],
    })
}

/// `D_n(b,ε)` membership of every length-`n` word, indexed by its packed
/// value (most significant bit first).
pub fn d_membership_table(dfa: &Dfa, p: &BernoulliParam, b: &Rational, epsilon: &Rational, n: u32, config: &VerifyConfig) -> Result<Vec<bool>> {
    config.check_n(n)?;
    check_b(b)?;
    check_epsilon(epsilon)?;
    let crit = Criteria::new(p, b, epsilon)?;
    Ok((0..1u64 << n)
        .into_par_iter()
        .map(|v| (0..dfa.state_count()).all(|q| classify(&crit, n, dfa.selection_counts(q, v, n)) == Class::D))
        .collect())
}

/// Exact measure of a single word, re-exported for report code.
pub fn word_measure(p: &BernoulliParam, w: &Word) -> Measure {
    mu_word(p, w)
}
