//! The Markov chain a selector induces under a Bernoulli measure.
//!
//! Row `i` of the induced matrix spreads `p(0)` and `p(1)` over the targets of
//! state `i` on `0` and `1`. Everything except trajectory sampling is exact.

use std::collections::VecDeque;

use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::ser::SerializeSeq;
use serde::{Serialize, Serializer};

use crate::automata::{Dfa, StateId};
use crate::error::{Error, Result};
use crate::measure::{BernoulliParam, Measure};
use crate::ratio::{self, format_rational, Rational};
use crate::rng;

/// A row-stochastic matrix with exact rational entries.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TransitionMatrix {
    rows: Vec<Vec<Rational>>,
}

impl TransitionMatrix {
    /// Checks squareness, entries in `[0,1]` and exact unit row sums.
    pub fn new(rows: Vec<Vec<Rational>>) -> Result<Self> {
        let n = rows.len();
        if n == 0 {
            return Err(Error::InvalidParameter("empty transition matrix".into()));
        }
        for (i, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(Error::InvalidParameter(format!("row {i} has {} entries, expected {n}", row.len())));
            }
            if row.iter().any(|x| !ratio::in_unit_interval(x)) {
                return Err(Error::InvalidParameter(format!("row {i} has an entry outside [0,1]")));
            }
            let sum: Rational = row.iter().sum();
            if !sum.is_one() {
                return Err(Error::InvalidParameter(format!("row {i} sums to {}", format_rational(&sum))));
            }
        }
        Ok(TransitionMatrix { rows })
    }

    /// `P[i][j] = Σ_a p(a)·[δ(i,a) = j]`.
    pub fn induced(dfa: &Dfa, p: &BernoulliParam) -> Self {
        let n = dfa.state_count();
        let mut rows = vec![vec![Rational::zero(); n]; n];
        for (i, row) in rows.iter_mut().enumerate() {
            for a in [0u8, 1] {
                row[dfa.step(i, a)] += p.p(a);
            }
        }
        TransitionMatrix { rows }
    }

    pub fn dimension(&self) -> usize {
        self.rows.len()
    }

    pub fn entry(&self, i: usize, j: usize) -> &Rational {
        &self.rows[i][j]
    }

    pub fn rows(&self) -> &[Vec<Rational>] {
        &self.rows
    }

    fn positive_successors(&self, i: usize) -> impl Iterator<Item = usize> + '_ {
        self.rows[i]
            .iter()
            .enumerate()
            .filter(|(_, x)| x.is_positive())
            .map(|(j, _)| j)
    }

    fn reaches_all(&self, transpose: bool) -> bool {
        let n = self.dimension();
        let mut seen = vec![false; n];
        seen[0] = true;
        let mut queue = VecDeque::from([0]);
        while let Some(i) = queue.pop_front() {
            for j in 0..n {
                let edge = if transpose { &self.rows[j][i] } else { &self.rows[i][j] };
                if edge.is_positive() && !seen[j] {
                    seen[j] = true;
                    queue.push_back(j);
                }
            }
        }
        seen.into_iter().all(|s| s)
    }

    /// Strong connectivity of the positive-entry digraph.
    pub fn is_irreducible(&self) -> bool {
        self.reaches_all(false) && self.reaches_all(true)
    }

    /// The gcd of all cycle lengths, computed from BFS levels: for every edge
    /// `u → v`, `level(u) + 1 − level(v)` is a multiple of the period and
    /// their gcd is exactly the period.
    pub fn period(&self) -> Result<usize> {
        if !self.is_irreducible() {
            return Err(Error::NotIrreducible);
        }
        let n = self.dimension();
        let mut level = vec![usize::MAX; n];
        level[0] = 0;
        let mut queue = VecDeque::from([0]);
        while let Some(i) = queue.pop_front() {
            let succ: Vec<usize> = self.positive_successors(i).collect();
            for j in succ {
                if level[j] == usize::MAX {
                    level[j] = level[i] + 1;
                    queue.push_back(j);
                }
            }
        }
        let mut g = 0usize;
        for i in 0..n {
            for j in self.positive_successors(i) {
                let diff = (level[i] + 1).abs_diff(level[j]);
                g = g.gcd(&diff);
            }
        }
        Ok(g)
    }

    /// The unique stationary distribution, by exact Gaussian elimination on
    /// `π(P − I) = 0` with one equation swapped for `Σπ = 1`.
    pub fn stationary(&self) -> Result<StationaryDistribution> {
        if !self.is_irreducible() {
            return Err(Error::NotIrreducible);
        }
        let n = self.dimension();
        // Unknowns π_0..π_{n-1}; equation j: Σ_i π_i (P_ij − [i=j]) = 0.
        let mut a: Vec<Vec<Rational>> = (0..n)
            .map(|j| {
                let mut eq: Vec<Rational> = (0..n)
                    .map(|i| {
                        let mut x = self.rows[i][j].clone();
                        if i == j {
                            x -= Rational::one();
                        }
                        x
                    })
                    .collect();
                eq.push(Rational::zero());
                eq
            })
            .collect();
        a[n - 1] = vec![Rational::one(); n + 1];

        for col in 0..n {
            let pivot = (col..n)
                .find(|&r| !a[r][col].is_zero())
                .ok_or(Error::NotIrreducible)?;
            a.swap(col, pivot);
            let inv = a[col][col].recip();
            for x in a[col].iter_mut() {
                *x *= &inv;
            }
            for r in 0..n {
                if r != col && !a[r][col].is_zero() {
                    let factor = a[r][col].clone();
                    for c in col..=n {
                        let delta = &factor * &a[col][c];
                        a[r][c] -= delta;
                    }
                }
            }
        }
        Ok(StationaryDistribution {
            pi: a.into_iter().map(|row| row[n].clone()).collect(),
        })
    }

    /// `πP`.
    pub fn left_multiply(&self, v: &[Rational]) -> Vec<Rational> {
        let n = self.dimension();
        (0..n)
            .map(|j| (0..n).map(|i| &v[i] * &self.rows[i][j]).sum())
            .collect()
    }
}

impl Serialize for TransitionMatrix {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = serializer.serialize_seq(Some(self.rows.len()))?;
        for row in &self.rows {
            let row: Vec<String> = row.iter().map(format_rational).collect();
            seq.serialize_element(&row)?;
        }
        seq.end()
    }
}

/// An exact stationary row vector.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StationaryDistribution {
    pi: Vec<Rational>,
}

impl StationaryDistribution {
    pub fn values(&self) -> &[Rational] {
        &self.pi
    }

    pub fn get(&self, state: StateId) -> &Rational {
        &self.pi[state]
    }

    /// Expected return time `1/π(i)`.
    pub fn expected_return_time(&self, state: StateId) -> Rational {
        self.pi[state].recip()
    }

    /// `πP − π`, all zero for a true fixed point.
    pub fn residual(&self, p: &TransitionMatrix) -> Vec<Rational> {
        p.left_multiply(&self.pi)
            .into_iter()
            .zip(&self.pi)
            .map(|(x, y)| x - y)
            .collect()
    }
}

impl Serialize for StationaryDistribution {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_seq(self.pi.iter().map(format_rational))
    }
}

/// `c = min_{q ∈ F} π(q)`, the guaranteed long-run selection density.
pub fn min_accepting_mass(dfa: &Dfa, p: &BernoulliParam) -> Result<Measure> {
    if !dfa.has_accepting() {
        return Err(Error::NoAcceptingStates);
    }
    if !dfa.is_strongly_connected() {
        return Err(Error::NotStronglyConnected);
    }
    p.require_positive()?;
    let pi = TransitionMatrix::induced(dfa, p).stationary()?;
    let c = dfa
        .accepting_states()
        .map(|q| pi.get(q).clone())
        .min()
        .expect("accepting set is nonempty");
    Ok(Measure::from_rational(c))
}

/// Visit counts `V_i(n)`: how often the chain sat in state `i` during steps
/// `0..n`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VisitStats {
    pub n: u64,
    pub counts: Vec<u64>,
}

impl VisitStats {
    pub fn from_counts(counts: Vec<u64>) -> Self {
        VisitStats {
            n: counts.iter().sum(),
            counts,
        }
    }

    pub fn frequency(&self, state: StateId) -> f64 {
        if self.n == 0 {
            0.0
        } else {
            self.counts[state] as f64 / self.n as f64
        }
    }

    /// `max_i |V_i(n)/n − π(i)|`.
    pub fn max_deviation(&self, pi: &StationaryDistribution) -> f64 {
        (0..self.counts.len())
            .map(|i| (self.frequency(i) - ratio::to_f64(pi.get(i))).abs())
            .fold(0.0, f64::max)
    }
}

/// Samples `n` steps of the chain from `start` using the pinned stream of
/// `seed`; one draw per step, next state is the first `j` whose cumulative
/// threshold exceeds the draw.
pub fn simulate_trajectory(p: &TransitionMatrix, start: StateId, n: u64, seed: u64) -> Result<VisitStats> {
    let dim = p.dimension();
    if start >= dim {
        return Err(Error::InvalidState { state: start, states: dim });
    }
    let cumulative: Vec<Vec<(u128, usize)>> = p
        .rows()
        .iter()
        .map(|row| {
            let mut acc = Rational::zero();
            let positive: Vec<usize> = (0..dim).filter(|&j| row[j].is_positive()).collect();
            positive
                .iter()
                .enumerate()
                .map(|(k, &j)| {
                    acc += &row[j];
                    let t = if k + 1 == positive.len() { 1u128 << 64 } else { rng::threshold(&acc) };
                    (t, j)
                })
                .collect()
        })
        .collect();
    let mut stream = rng::stream(seed);
    let mut counts = vec![0u64; dim];
    let mut state = start;
    for _ in 0..n {
        counts[state] += 1;
        let draw = rand_core::RngCore::next_u64(&mut stream) as u128;
        state = cumulative[state]
            .iter()
            .find(|(t, _)| draw < *t)
            .map(|&(_, j)| j)
            .expect("last threshold is 2^64");
    }
    Ok(VisitStats { n, counts })
}
