//! Deterministic finite automata over `{0,1}` used as selectors.
//!
//! A selector run from state `q` on `a_1 a_2 ... a_n` picks `a_i` exactly when
//! the state reached after reading `a_1 ... a_{i-1}` is accepting. The empty
//! prefix counts, so an accepting start state picks the first symbol.

use std::collections::VecDeque;

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::words::Word;

pub type StateId = usize;

/// A complete DFA with dense state ids `0..state_count`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Dfa {
    delta: Vec<[StateId; 2]>,
    start: StateId,
    accepting: Vec<bool>,
}

/// On-disk form: `{"states": N, "start": s, "accepting": [...], "delta": [[to0, to1], ...]}`.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct DfaJson {
    pub states: usize,
    pub start: StateId,
    pub accepting: Vec<StateId>,
    pub delta: Vec<[StateId; 2]>,
}

impl Dfa {
    pub fn new(delta: Vec<[StateId; 2]>, start: StateId, accepting: &[StateId]) -> Result<Self> {
        let n = delta.len();
        if n == 0 {
            return Err(Error::InvalidDfa("states: must be positive".into()));
        }
        if start >= n {
            return Err(Error::InvalidDfa(format!("start: state {start} out of range 0..{n}")));
        }
        for (q, row) in delta.iter().enumerate() {
            for (b, &to) in row.iter().enumerate() {
                if to >= n {
                    return Err(Error::InvalidDfa(format!(
                        "delta[{q}][{b}]: target {to} out of range 0..{n}"
                    )));
                }
            }
        }
        let mut flags = vec![false; n];
        for &q in accepting {
            if q >= n {
                return Err(Error::InvalidDfa(format!("accepting: state {q} out of range 0..{n}")));
            }
            flags[q] = true;
        }
        Ok(Dfa {
            delta,
            start,
            accepting: flags,
        })
    }

    pub fn from_json_value(json: &DfaJson) -> Result<Self> {
        if json.delta.len() != json.states {
            return Err(Error::InvalidDfa(format!(
                "delta: expected {} rows, found {}",
                json.states,
                json.delta.len()
            )));
        }
        Dfa::new(json.delta.clone(), json.start, &json.accepting)
    }

    pub fn from_json_str(text: &str) -> Result<Self> {
        let json: DfaJson =
            serde_json::from_str(text).map_err(|e| Error::InvalidDfa(e.to_string()))?;
        Self::from_json_value(&json)
    }

    pub fn to_json_value(&self) -> DfaJson {
        DfaJson {
            states: self.state_count(),
            start: self.start,
            accepting: self.accepting_states().collect(),
            delta: self.delta.clone(),
        }
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string(&self.to_json_value()).expect("DFA JSON is always serialisable")
    }

    /// Two states swapping on every symbol, state 0 accepting: picks the odd
    /// positions from state 0 and the even ones from state 1.
    pub fn toggle() -> Self {
        Dfa::new(vec![[1, 1], [0, 0]], 0, &[0]).unwrap()
    }

    /// `k` states in a ring advancing on every symbol, state 0 accepting.
    pub fn rotator(k: usize) -> Self {
        assert!(k > 0);
        Dfa::new((0..k).map(|i| [(i + 1) % k, (i + 1) % k]).collect(), 0, &[0]).unwrap()
    }

    /// A single accepting state: selects every symbol.
    pub fn accept_all() -> Self {
        Dfa::new(vec![[0, 0]], 0, &[0]).unwrap()
    }

    /// A single rejecting state: selects nothing.
    pub fn accept_none() -> Self {
        Dfa::new(vec![[0, 0]], 0, &[]).unwrap()
    }

    /// Strongly connected selector that picks only the first symbol of
    /// `1 0^N`: after the leading 1 it sits in a rejecting state that only a
    /// 1 leaves. Under `p(1) = 0` the input is p-distributed yet the selected
    /// sequence is finite.
    pub fn nonpositive_demo() -> Self {
        Dfa::new(vec![[0, 1], [1, 0]], 0, &[0]).unwrap()
    }

    /// Every DFA with `k` states and start state 0, in a fixed order.
    pub fn enumerate_all(k: usize) -> Vec<Dfa> {
        assert!((1..=3).contains(&k), "enumeration is only sensible for tiny k");
        let rows = k * 2;
        let n_delta = k.pow(rows as u32);
        let mut out = Vec::new();
        for code in 0..n_delta {
            let mut c = code;
            let mut delta = vec![[0; 2]; k];
            for slot in 0..rows {
                delta[slot / 2][slot % 2] = c % k;
                c /= k;
            }
            for mask in 0..(1u32 << k) {
                let acc: Vec<StateId> = (0..k).filter(|q| mask >> q & 1 == 1).collect();
                out.push(Dfa::new(delta.clone(), 0, &acc).unwrap());
            }
        }
        out
    }

    /// A seeded random strongly connected DFA with `k` states and at least
    /// one accepting state. Deterministic in `seed`.
    pub fn random_strongly_connected(k: usize, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        loop {
            let delta: Vec<[StateId; 2]> = (0..k)
                .map(|_| {
                    [
                        (rng.next_u64() % k as u64) as usize,
                        (rng.next_u64() % k as u64) as usize,
                    ]
                })
                .collect();
            let mask = rng.next_u64() % (1 << k);
            if mask == 0 {
                continue;
            }
            let acc: Vec<StateId> = (0..k).filter(|q| mask >> q & 1 == 1).collect();
            let dfa = Dfa::new(delta, 0, &acc).unwrap();
            if dfa.is_strongly_connected() {
                return dfa;
            }
        }
    }

    /// A seeded random DFA with `k` states, no structural constraints.
    pub fn random(k: usize, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let delta = (0..k)
            .map(|_| {
                [
                    (rng.next_u64() % k as u64) as usize,
                    (rng.next_u64() % k as u64) as usize,
                ]
            })
            .collect();
        let start = (rng.next_u64() % k as u64) as usize;
        let mask = rng.next_u64() % (1 << k);
        let acc: Vec<StateId> = (0..k).filter(|q| mask >> q & 1 == 1).collect();
        Dfa::new(delta, start, &acc).unwrap()
    }

    pub fn state_count(&self) -> usize {
        self.delta.len()
    }

    pub fn start(&self) -> StateId {
        self.start
    }

    pub fn is_accepting(&self, q: StateId) -> bool {
        self.accepting[q]
    }

    pub fn accepting_states(&self) -> impl Iterator<Item = StateId> + '_ {
        (0..self.state_count()).filter(|&q| self.accepting[q])
    }

    pub fn has_accepting(&self) -> bool {
        self.accepting.iter().any(|&a| a)
    }

    #[inline]
    pub fn step(&self, q: StateId, bit: u8) -> StateId {
        self.delta[q][(bit & 1) as usize]
    }

    pub fn delta(&self) -> &[[StateId; 2]] {
        &self.delta
    }

    /// The same automaton started from `q` (`A_q`).
    pub fn with_start(&self, q: StateId) -> Result<Dfa> {
        self.check_state(q)?;
        Ok(Dfa {
            start: q,
            ..self.clone()
        })
    }

    fn check_state(&self, q: StateId) -> Result<()> {
        if q < self.state_count() {
            Ok(())
        } else {
            Err(Error::InvalidState {
                state: q,
                states: self.state_count(),
            })
        }
    }

    /// State reached from `q` after reading `input`.
    pub fn run(&self, q: StateId, input: &[u8]) -> StateId {
        input.iter().fold(q, |s, &b| self.step(s, b))
    }

    /// Whether the start state reaches an accepting state on `word`.
    pub fn accepts(&self, word: &[u8]) -> bool {
        self.is_accepting(self.run(self.start, word))
    }

    pub fn select(&self, from: StateId, input: &Word) -> Result<SelectionResult> {
        self.check_state(from)?;
        let mut sel = Selector::new(self, from);
        for &b in input.bits() {
            sel.feed(b);
        }
        Ok(sel.finish())
    }

    /// Selects from the first `n_symbols` of `source`, one symbol at a time.
    pub fn select_stream<I>(&self, from: StateId, source: I, n_symbols: usize) -> Result<SelectionResult>
    where
        I: IntoIterator<Item = u8>,
    {
        self.check_state(from)?;
        let mut sel = Selector::new(self, from);
        let mut consumed = 0;
        for b in source.into_iter().take(n_symbols) {
            sel.feed(b);
            consumed += 1;
        }
        if consumed < n_symbols {
            return Err(Error::SourceExhausted {
                consumed,
                requested: n_symbols,
            });
        }
        Ok(sel.finish())
    }

    /// Length and number of ones of `A_q[w]` for the `len`-bit word packed in
    /// `bits` (most significant bit first). The hot loop of exhaustive
    /// enumeration.
    #[inline]
    pub fn selection_counts(&self, q: StateId, bits: u64, len: u32) -> (u32, u32) {
        let mut state = q;
        let mut selected = 0;
        let mut ones = 0;
        for i in (0..len).rev() {
            let b = ((bits >> i) & 1) as u8;
            if self.accepting[state] {
                selected += 1;
                ones += b as u32;
            }
            state = self.delta[state][b as usize];
        }
        (selected, ones)
    }

    /// The product selector `C` with `C[w] = B[A[w]]` for every word `w`.
    ///
    /// States are pairs `(qa, qb)` numbered `qa * |Q_B| + qb`. B's component
    /// is frozen except on symbols read from an accepting A-state, i.e. on
    /// exactly the symbols A selects.
    pub fn compose(a: &Dfa, b: &Dfa) -> Dfa {
        let nb = b.state_count();
        let id = |qa: StateId, qb: StateId| qa * nb + qb;
        let mut delta = Vec::with_capacity(a.state_count() * nb);
        let mut accepting = Vec::new();
        for qa in 0..a.state_count() {
            for qb in 0..nb {
                let row = [0u8, 1].map(|sym| {
                    let ra = a.step(qa, sym);
                    let rb = if a.is_accepting(qa) { b.step(qb, sym) } else { qb };
                    id(ra, rb)
                });
                delta.push(row);
                if a.is_accepting(qa) && b.is_accepting(qb) {
                    accepting.push(id(qa, qb));
                }
            }
        }
        Dfa::new(delta, id(a.start, b.start), &accepting).expect("product of valid DFAs")
    }

    /// Sliding-window selector for `v` (length `k`): one state per word of
    /// length `k`, holding the last `k` symbols read. The only accepting
    /// state is `v`, so once `k` symbols have been read it picks exactly the
    /// symbol after each occurrence of `v`. Starts from `0^k`, or `1 0^{k-1}`
    /// when `v = 0^k`.
    pub fn sliding_window(v: &Word) -> Result<Dfa> {
        let k = v.len();
        if k == 0 {
            return Err(Error::EmptyPattern);
        }
        if k > 20 {
            return Err(Error::InvalidParameter(format!(
                "sliding window of length {k} needs 2^{k} states"
            )));
        }
        let size = 1usize << k;
        let mask = size - 1;
        let delta = (0..size).map(|s| [(s << 1) & mask, ((s << 1) | 1) & mask]).collect();
        let target = v.bits().iter().fold(0usize, |acc, &b| (acc << 1) | b as usize);
        let start = if target == 0 { 1 << (k - 1) } else { 0 };
        Dfa::new(delta, start, &[target])
    }

    fn successors(&self, q: StateId) -> impl Iterator<Item = StateId> + '_ {
        self.delta[q].iter().copied()
    }

    fn reachable_from(&self, q: StateId, reverse: bool) -> Vec<bool> {
        let n = self.state_count();
        let mut preds = vec![Vec::new(); n];
        if reverse {
            for s in 0..n {
                for t in self.successors(s) {
                    preds[t].push(s);
                }
            }
        }
        let mut seen = vec![false; n];
        let mut queue = VecDeque::from([q]);
        seen[q] = true;
        while let Some(s) = queue.pop_front() {
            let next: Vec<StateId> = if reverse {
                preds[s].clone()
            } else {
                self.successors(s).collect()
            };
            for t in next {
                if !seen[t] {
                    seen[t] = true;
                    queue.push_back(t);
                }
            }
        }
        seen
    }

    /// Every state reaches every other state (symbol labels ignored).
    pub fn is_strongly_connected(&self) -> bool {
        self.reachable_from(0, false).iter().all(|&r| r)
            && self.reachable_from(0, true).iter().all(|&r| r)
    }

    /// True iff the subgraph induced by the rejecting states is acyclic.
    pub fn every_cycle_hits_accepting(&self) -> bool {
        self.max_accept_gap().is_some()
    }

    /// Longest run of consecutive rejecting states along any path, or `None`
    /// when some cycle avoids the accepting states. Runs are measured from
    /// every state, not just from successors of accepting ones, so the bound
    /// holds for every start state.
    pub fn max_accept_gap(&self) -> Option<usize> {
        let n = self.state_count();
        // Longest vertex-path in the DAG of rejecting states via Kahn's order.
        let rejecting = |q: StateId| !self.accepting[q];
        let mut indeg = vec![0usize; n];
        for s in (0..n).filter(|&s| rejecting(s)) {
            for t in self.successors(s).filter(|&t| rejecting(t)) {
                indeg[t] += 1;
            }
        }
        let mut longest = vec![0usize; n];
        let mut queue: VecDeque<StateId> =
            (0..n).filter(|&s| rejecting(s) && indeg[s] == 0).collect();
        for &s in &queue {
            longest[s] = 1;
        }
        let mut visited = 0;
        while let Some(s) = queue.pop_front() {
            visited += 1;
            for t in self.successors(s).filter(|&t| rejecting(t)) {
                longest[t] = longest[t].max(longest[s] + 1);
                indeg[t] -= 1;
                if indeg[t] == 0 {
                    queue.push_back(t);
                }
            }
        }
        let rejecting_count = (0..n).filter(|&s| rejecting(s)).count();
        (visited == rejecting_count).then(|| longest.into_iter().max().unwrap_or(0))
    }
}

/// Output of a selector run.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SelectionResult {
    pub selected: Word,
    /// 1-based positions of the selected symbols, increasing.
    pub selected_positions: Vec<usize>,
    /// `trajectory[i]` is the state after reading `i` symbols; length is
    /// input length + 1.
    pub trajectory: Vec<StateId>,
}

impl SelectionResult {
    /// Visits per state over the first `n` trajectory entries (the states in
    /// which each input symbol was read).
    pub fn visit_counts(&self, state_count: usize) -> Vec<u64> {
        let mut counts = vec![0u64; state_count];
        let n = self.trajectory.len().saturating_sub(1);
        for &q in &self.trajectory[..n] {
            counts[q] += 1;
        }
        counts
    }
}

/// Incremental selector: feeds one symbol at a time.
#[derive(Debug, Clone)]
pub struct Selector<'a> {
    dfa: &'a Dfa,
    state: StateId,
    read: usize,
    selected: Word,
    positions: Vec<usize>,
    trajectory: Vec<StateId>,
}

impl<'a> Selector<'a> {
    pub fn new(dfa: &'a Dfa, from: StateId) -> Self {
        Selector {
            dfa,
            state: from,
            read: 0,
            selected: Word::empty(),
            positions: Vec::new(),
            trajectory: vec![from],
        }
    }

    pub fn state(&self) -> StateId {
        self.state
    }

    /// Reads one symbol; returns it if it was selected.
    pub fn feed(&mut self, bit: u8) -> Option<u8> {
        self.read += 1;
        let picked = self.dfa.is_accepting(self.state);
        if picked {
            self.selected.push(bit);
            self.positions.push(self.read);
        }
        self.state = self.dfa.step(self.state, bit);
        self.trajectory.push(self.state);
        picked.then_some(bit)
    }

    pub fn finish(self) -> SelectionResult {
        SelectionResult {
            selected: self.selected,
            selected_positions: self.positions,
            trajectory: self.trajectory,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn w(s: &str) -> Word {
        s.parse().unwrap()
    }

    /// Picks the symbol right after each occurrence of `v`, straight from the
    /// definition.
    pub(crate) fn after_occurrence_scanner(v: &Word, input: &Word) -> (Word, Vec<usize>) {
        let k = v.len();
        let bits = input.bits();
        let mut sel = Word::empty();
        let mut pos = Vec::new();
        for i in k..bits.len() {
            if &bits[i - k..i] == v.bits() {
                sel.push(bits[i]);
                pos.push(i + 1);
            }
        }
        (sel, pos)
    }

    #[test]
    fn toggle_selects_odd_positions() {
        let t = Dfa::toggle();
        let r = t.select(0, &w("0110")).unwrap();
        assert_eq!(r.selected, w("01"));
        assert_eq!(r.selected_positions, vec![1, 3]);
        assert_eq!(r.trajectory, vec![0, 1, 0, 1, 0]);
        let r = t.select(1, &w("0110")).unwrap();
        // a_2 a_4
        assert_eq!(r.selected, w("10"));
        assert_eq!(r.selected_positions, vec![2, 4]);
    }

    #[test]
    fn empty_accepting_selects_nothing() {
        let d = Dfa::new(vec![[1, 0], [0, 1]], 0, &[]).unwrap();
        assert!(d.select(0, &w("011010")).unwrap().selected.is_empty());
    }

    #[test]
    fn select_rejects_bad_state() {
        assert!(matches!(
            Dfa::toggle().select(2, &w("0")),
            Err(Error::InvalidState { state: 2, states: 2 })
        ));
    }

    #[test]
    fn select_stream_examples() {
        let t = Dfa::toggle();
        let r = t.select_stream(0, [0u8, 1].into_iter().cycle(), 6).unwrap();
        // odd positions of 010101
        assert_eq!(r.selected, w("000"));
        assert_eq!(r.selected_positions, vec![1, 3, 5]);
        let r = t.select_stream(0, std::iter::repeat(1u8), 0).unwrap();
        assert!(r.selected.is_empty());
        assert_eq!(r.trajectory, vec![0]);
        let err = t.select_stream(0, [1u8, 0, 1], 5).unwrap_err();
        assert!(matches!(err, Error::SourceExhausted { consumed: 3, requested: 5 }));
    }

    #[test]
    fn compose_example_matches_two_step_oracle() {
        let t = Dfa::toggle();
        let input = w("110100101");
        let first = t.select(0, &input).unwrap().selected;
        let oracle = t.select(0, &first).unwrap().selected;
        let c = Dfa::compose(&t, &t);
        let r = c.select(c.start(), &input).unwrap();
        assert_eq!(r.selected, oracle);
        assert_eq!(r.selected_positions, vec![1, 5, 9]);
        assert_eq!(r.selected, w("101"));
    }

    #[test]
    fn compose_with_identity() {
        let a = Dfa::random(3, 7);
        let id = Dfa::accept_all();
        for x in Word::all_up_to(8) {
            let base = a.select(a.start(), &x).unwrap();
            let ab = Dfa::compose(&a, &id);
            assert_eq!(ab.select(ab.start(), &x).unwrap().selected, base.selected);
            let ba = Dfa::compose(&id, &a);
            assert_eq!(ba.select(ba.start(), &x).unwrap().selected, base.selected);
        }
    }

    #[test]
    fn compose_state_numbering_is_row_major() {
        let c = Dfa::compose(&Dfa::toggle(), &Dfa::rotator(3));
        assert_eq!(c.state_count(), 6);
        assert_eq!(c.start(), 0);
        assert_eq!(c.accepting_states().collect::<Vec<_>>(), vec![0]);
        // (0,0) -> (1,1) on either symbol; (1,1) -> (0,1).
        assert_eq!(c.delta()[0], [4, 4]);
        assert_eq!(c.delta()[4], [1, 1]);
    }

    #[test]
    fn sliding_window_examples() {
        let d = Dfa::sliding_window(&w("1")).unwrap();
        let r = d.select(d.start(), &w("110100")).unwrap();
        assert_eq!(r.selected_positions, vec![2, 3, 5]);
        assert_eq!(r.selected, w("100"));
        assert_eq!(r.selected, after_occurrence_scanner(&w("1"), &w("110100")).0);

        let d = Dfa::sliding_window(&w("0")).unwrap();
        assert!(d.select(d.start(), &w("11111111")).unwrap().selected.is_empty());

        let d = Dfa::sliding_window(&w("01")).unwrap();
        let r = d.select(d.start(), &w("010101")).unwrap();
        assert_eq!(r.selected_positions, vec![3, 5]);
        // a_3 = a_5 = 0
        assert_eq!(r.selected, w("00"));
        assert_eq!(r.selected, after_occurrence_scanner(&w("01"), &w("010101")).0);

        assert!(matches!(Dfa::sliding_window(&Word::empty()), Err(Error::EmptyPattern)));
    }

    #[test]
    fn sliding_window_structure() {
        for v in Word::all_up_to(4).filter(|v| !v.is_empty()) {
            let d = Dfa::sliding_window(&v).unwrap();
            assert_eq!(d.state_count(), 1 << v.len());
            assert!(d.is_strongly_connected());
            assert_eq!(d.accepting_states().count(), 1);
            // reading v from the start state lands on the accepting state
            assert!(d.is_accepting(d.run(d.start(), v.bits())));
            assert!(!d.is_accepting(d.start()));
        }
        let d = Dfa::sliding_window(&w("000")).unwrap();
        assert_eq!(d.start(), 0b100);
    }

    #[test]
    fn connectivity_examples() {
        assert!(Dfa::toggle().is_strongly_connected());
        assert!(Dfa::accept_all().is_strongly_connected());
        let sink = Dfa::new(vec![[1, 1], [1, 1]], 0, &[0]).unwrap();
        assert!(!sink.is_strongly_connected());
        assert!(Dfa::nonpositive_demo().is_strongly_connected());
    }

    #[test]
    fn accept_gap_examples() {
        assert_eq!(Dfa::toggle().max_accept_gap(), Some(1));
        assert!(Dfa::toggle().every_cycle_hits_accepting());
        assert_eq!(Dfa::accept_none().max_accept_gap(), None);
        let all = Dfa::new(vec![[1, 0], [0, 1]], 0, &[0, 1]).unwrap();
        assert_eq!(all.max_accept_gap(), Some(0));
        assert_eq!(Dfa::rotator(4).max_accept_gap(), Some(3));
        assert!(!Dfa::nonpositive_demo().every_cycle_hits_accepting());
    }

    /// Longest rejecting run found by walking every input word; exhaustive over
    /// words long enough to traverse any acyclic run.
    fn gap_by_path_search(d: &Dfa) -> Option<usize> {
        let n = d.state_count();
        let len = (2 * n + 2) as u32;
        let mut best = 0;
        for q in 0..n {
            for v in 0..1u64 << len {
                let mut s = q;
                let mut run = 0;
                for i in (0..len).rev() {
                    if d.is_accepting(s) {
                        run = 0;
                    } else {
                        run += 1;
                        if run > n {
                            return None;
                        }
                        best = best.max(run);
                    }
                    s = d.step(s, ((v >> i) & 1) as u8);
                }
            }
        }
        Some(best)
    }

    #[test]
    fn accept_gap_matches_path_search() {
        for d in Dfa::enumerate_all(2) {
            assert_eq!(d.max_accept_gap(), gap_by_path_search(&d), "{d:?}");
        }
        for seed in 0..40 {
            let d = Dfa::random(3, seed);
            assert_eq!(d.max_accept_gap(), gap_by_path_search(&d), "{d:?}");
        }
    }

    #[test]
    fn selection_density_lower_bound() {
        // Every run of rejecting states has at most k states, so n symbols
        // yield at least floor(n / (k+1)) selections, which is >= n/(k+2)
        // once n >= (k+1)(k+2).
        for seed in 0..60 {
            let d = Dfa::random(4, seed);
            let Some(k) = d.max_accept_gap() else { continue };
            for q in 0..d.state_count() {
                for n in 1..=14u32 {
                    for v in 0..1u64 << n {
                        let (len, _) = d.selection_counts(q, v, n);
                        assert!(len as usize >= n as usize / (k + 1));
                        if n as usize >= (k + 1) * (k + 2) {
                            assert!(len as usize * (k + 2) >= n as usize);
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn density_bound_fails_below_quadratic_threshold() {
        // 4-ring accepting only state 0, started at state 1: runs of three
        // rejecting states (k = 3). n = 11 > 2(k+1) yet only 2 < 11/5 symbols
        // are picked.
        let d = Dfa::rotator(4);
        let (len, _) = d.selection_counts(1, 0, 11);
        assert_eq!(len, 2);
        assert!((len as f64) < 11.0 / 5.0);
    }

    #[test]
    fn nonpositive_demo_selects_finitely() {
        let d = Dfa::nonpositive_demo();
        for n in 1..50 {
            let mut x = w("1");
            x = x.concat(&Word::constant(0, n));
            assert_eq!(d.select(d.start(), &x).unwrap().selected, w("1"));
        }
    }

    #[test]
    fn json_roundtrip_and_errors() {
        let c = Dfa::compose(&Dfa::toggle(), &Dfa::rotator(3));
        let text = c.to_json_string();
        assert_eq!(Dfa::from_json_str(&text).unwrap(), c);
        assert_eq!(
            Dfa::toggle().to_json_string(),
            r#"{"states":2,"start":0,"accepting":[0],"delta":[[1,1],[0,0]]}"#
        );
        for bad in [
            r#"{"states":2,"start":0,"accepting":[0],"delta":[[1,1]]}"#,
            r#"{"states":2,"start":5,"accepting":[0],"delta":[[1,1],[0,0]]}"#,
            r#"{"states":2,"start":0,"accepting":[9],"delta":[[1,1],[0,0]]}"#,
            r#"{"states":2,"start":0,"accepting":[0],"delta":[[1,2],[0,0]]}"#,
            r#"{"states":2,"start":0,"accepting":[0]}"#,
            r#"not json"#,
        ] {
            assert!(matches!(Dfa::from_json_str(bad), Err(Error::InvalidDfa(_))), "{bad}");
        }
    }

    #[test]
    fn enumeration_counts() {
        assert_eq!(Dfa::enumerate_all(1).len(), 2);
        assert_eq!(Dfa::enumerate_all(2).len(), 16 * 4);
        for seed in 0..20 {
            let d = Dfa::random_strongly_connected(3, seed);
            assert!(d.is_strongly_connected());
            assert!(d.has_accepting());
            assert_eq!(d, Dfa::random_strongly_connected(3, seed));
        }
    }

    #[test]
    fn compose_exhaustive_small_pairs() {
        let dfas = Dfa::enumerate_all(2);
        for (i, a) in dfas.iter().enumerate().step_by(7) {
            for b in dfas.iter().skip(i % 5).step_by(11) {
                let c = Dfa::compose(a, b);
                for x in Word::all_up_to(10) {
                    let inner = a.select(a.start(), &x).unwrap().selected;
                    let outer = b.select(b.start(), &inner).unwrap().selected;
                    assert_eq!(c.select(c.start(), &x).unwrap().selected, outer);
                }
            }
        }
    }

    fn word_strategy(max: usize) -> impl Strategy<Value = Word> {
        proptest::collection::vec(0u8..2, 0..max).prop_map(|v| Word::from_bits(v).unwrap())
    }

    proptest! {
        #[test]
        fn compose_exact_on_random_words(sa in any::<u64>(), sb in any::<u64>(), x in word_strategy(64)) {
            let a = Dfa::random(3, sa);
            let b = Dfa::random(3, sb);
            let c = Dfa::compose(&a, &b);
            let inner = a.select(a.start(), &x).unwrap().selected;
            let outer = b.select(b.start(), &inner).unwrap().selected;
            prop_assert_eq!(c.select(c.start(), &x).unwrap().selected, outer);
        }

        #[test]
        fn selection_is_prefix_monotone(seed in any::<u64>(), x in word_strategy(40), cut in 0usize..40) {
            let a = Dfa::random(3, seed);
            let full = a.select(a.start(), &x).unwrap();
            let part = a.select(a.start(), &x.prefix(cut)).unwrap();
            prop_assert!(full.selected_positions.starts_with(&part.selected_positions));
            prop_assert!(part.selected.is_prefix_of(&full.selected));
        }

        #[test]
        fn selection_invariants(seed in any::<u64>(), x in word_strategy(40)) {
            let a = Dfa::random(4, seed);
            for q in 0..a.state_count() {
                let r = a.select(q, &x).unwrap();
                prop_assert_eq!(r.trajectory.len(), x.len() + 1);
                prop_assert_eq!(r.selected.len(), r.selected_positions.len());
                for i in 1..=x.len() {
                    prop_assert_eq!(r.selected_positions.contains(&i), a.is_accepting(r.trajectory[i - 1]));
                }
                let packed = x.bits().iter().fold(0u64, |acc, &b| (acc << 1) | b as u64);
                prop_assert_eq!(
                    a.selection_counts(q, packed, x.len() as u32),
                    (r.selected.len() as u32, r.selected.count_ones() as u32)
                );
            }
        }

        #[test]
        fn toggle_length_law(x in word_strategy(80)) {
            let t = Dfa::toggle();
            prop_assert_eq!(t.select(0, &x).unwrap().selected.len(), (x.len() + 1) / 2);
            prop_assert_eq!(t.select(1, &x).unwrap().selected.len(), x.len() / 2);
        }

        #[test]
        fn sliding_window_matches_scanner(v in word_strategy(5), x in word_strategy(200)) {
            prop_assume!(!v.is_empty());
            let d = Dfa::sliding_window(&v).unwrap();
            let r = d.select(d.start(), &x).unwrap();
            let (_, oracle_pos) = after_occurrence_scanner(&v, &x);
            let k = v.len();
            let dfa_tail: Vec<usize> = r.selected_positions.iter().copied().filter(|&p| p > k).collect();
            prop_assert_eq!(dfa_tail, oracle_pos);
        }
    }
}
