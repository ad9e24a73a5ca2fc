//! Empirical frequency estimators for the classical normality notions, run
//! over finite prefixes of a source.
//!
//! Each estimator makes one streaming pass and records the observed frequency
//! at every point of a [`Schedule`]. What a schedule point counts depends on
//! the notion: input symbols for word and caterpillar frequencies, blocks for
//! block frequency, tuples for Postnikov tuples, progression terms for
//! Copeland progressions.
//!
//! Limits cannot be checked in finite time, so the verdict is a two-point
//! test: the final deviation must be below the tolerance and no larger than
//! the deviation at the schedule point nearest `N/64`.

use std::collections::VecDeque;
use std::fmt;
use std::str::FromStr;

use num_traits::{Signed, Zero};
use serde::Serialize;

use crate::automata::Dfa;
use crate::error::{Error, Result};
use crate::generators::{Source, SourceSpec};
use crate::measure::{mu_word, BernoulliParam};
use crate::ratio::{self, format_rational, Rational};
use crate::verify::{d_membership_table, VerifyConfig};
use crate::words::Word;

pub const DEFAULT_TOLERANCE: f64 = 0.05;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Notion {
    /// Overlapping occurrences per input symbol.
    PDistributed,
    /// Aligned non-overlapping blocks.
    Block,
    /// Sliding windows of stride 1.
    Caterpillar,
    /// All-ones tuples at the 1-positions of a pattern.
    Postnikov,
    /// Arithmetic progressions.
    Copeland,
    /// Frequency inside the subsequence picked by a selector.
    Selection,
}

impl FromStr for Notion {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "word" | "p-distributed" => Notion::PDistributed,
            "block" => Notion::Block,
            "caterpillar" => Notion::Caterpillar,
            "postnikov" => Notion::Postnikov,
            "copeland" => Notion::Copeland,
            "selection" => Notion::Selection,
            _ => return Err(Error::InvalidParameter(format!("unknown notion {s:?}"))),
        })
    }
}

impl fmt::Display for Notion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Notion::PDistributed => "p-distributed",
            Notion::Block => "block",
            Notion::Caterpillar => "caterpillar",
            Notion::Postnikov => "postnikov",
            Notion::Copeland => "copeland",
            Notion::Selection => "selection",
        })
    }
}

/// Strictly increasing positive checkpoints.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Schedule(Vec<u64>);

impl Schedule {
    pub fn new(points: Vec<u64>) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::InvalidParameter("empty schedule".into()));
        }
        if points[0] == 0 || points.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidParameter("schedule must be strictly increasing and positive".into()));
        }
        Ok(Schedule(points))
    }

    /// Powers of two from `2^lo` to `2^hi`.
    pub fn powers_of_two(lo: u32, hi: u32) -> Result<Self> {
        if lo > hi || hi > 62 {
            return Err(Error::InvalidParameter(format!("bad power range {lo}..{hi}")));
        }
        Schedule::new((lo..=hi).map(|e| 1u64 << e).collect())
    }

    /// Doubling schedule ending exactly at `n`, starting near `n/2^10`.
    pub fn up_to(n: u64) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidParameter("schedule end must be positive".into()));
        }
        let mut pts: Vec<u64> = (0..=10).rev().map(|s| n >> s).filter(|&x| x > 0).collect();
        pts.dedup();
        Schedule::new(pts)
    }

    pub fn points(&self) -> &[u64] {
        &self.0
    }

    pub fn last(&self) -> u64 {
        *self.0.last().expect("schedule is nonempty")
    }

    /// Index of the point nearest `last/64` (ties to the earlier point).
    pub fn early_index(&self) -> usize {
        let target = self.last() as f64 / 64.0;
        let mut best = 0;
        for (i, &x) in self.0.iter().enumerate() {
            if (x as f64 - target).abs() < (self.0[best] as f64 - target).abs() {
                best = i;
            }
        }
        best
    }
}

impl FromStr for Schedule {
    type Err = Error;

    /// `N` for a doubling schedule ending at `N`, or a comma list. Each
    /// number may be written `2^k`.
    fn from_str(s: &str) -> Result<Self> {
        let parse_one = |t: &str| -> Result<u64> {
            let t = t.trim();
            let bad = || Error::InvalidParameter(format!("bad schedule point {t:?}"));
            match t.split_once('^') {
                Some((base, exp)) => {
                    let base: u64 = base.parse().map_err(|_| bad())?;
                    let exp: u32 = exp.parse().map_err(|_| bad())?;
                    base.checked_pow(exp).ok_or_else(bad)
                }
                None => t.parse().map_err(|_| bad()),
            }
        };
        if s.contains(',') {
            Schedule::new(s.split(',').map(parse_one).collect::<Result<_>>()?)
        } else {
            Schedule::up_to(parse_one(s)?)
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FrequencyPoint {
    pub n: u64,
    pub observed: f64,
    pub deviation: f64,
}

/// Joint frequency of `(1,1)` at two offsets of a progression against the
/// product of their marginals.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PairProbe {
    pub i: u64,
    pub j: u64,
    pub joint: f64,
    pub product: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConvergenceVerdict {
    pub passed: bool,
    pub final_deviation: f64,
    pub early_n: u64,
    pub early_deviation: f64,
    pub tolerance: f64,
    /// Largest `|joint − product|` over the pair probes, if any.
    pub pair_deviation: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FrequencyReport {
    pub notion: Notion,
    pub target: String,
    pub source: String,
    pub p: String,
    /// Exact reference value as `num/den`.
    pub reference_exact: String,
    pub reference: f64,
    pub tolerance: f64,
    pub points: Vec<FrequencyPoint>,
    pub pairs: Vec<PairProbe>,
}

impl FrequencyReport {
    fn new(notion: Notion, target: String, source: &SourceSpec, p: &BernoulliParam, reference: Rational) -> Self {
        FrequencyReport {
            notion,
            target,
            source: source.to_string(),
            p: p.to_string(),
            reference: ratio::to_f64(&reference),
            reference_exact: format_rational(&reference),
            tolerance: DEFAULT_TOLERANCE,
            points: Vec::new(),
            pairs: Vec::new(),
        }
    }

    fn push(&mut self, n: u64, hits: u64, total: u64) {
        let observed = if total == 0 { 0.0 } else { hits as f64 / total as f64 };
        self.points.push(FrequencyPoint {
            n,
            observed,
            deviation: (observed - self.reference).abs(),
        });
    }

    pub fn with_tolerance(mut self, tolerance: f64) -> Self {
        self.tolerance = tolerance;
        self
    }

    pub fn final_observed(&self) -> f64 {
        self.points.last().map_or(0.0, |p| p.observed)
    }

    pub fn final_deviation(&self) -> f64 {
        self.points.last().map_or(f64::INFINITY, |p| p.deviation)
    }

    pub fn deviation_at(&self, n: u64) -> Option<f64> {
        self.points.iter().find(|p| p.n == n).map(|p| p.deviation)
    }

    pub fn verdict(&self) -> ConvergenceVerdict {
        let last = self.points.last().expect("reports have at least one point");
        let target = last.n as f64 / 64.0;
        let early = self
            .points
            .iter()
            .min_by(|a, b| {
                (a.n as f64 - target)
                    .abs()
                    .partial_cmp(&(b.n as f64 - target).abs())
                    .expect("finite")
            })
            .expect("nonempty");
        let pair_deviation = self
            .pairs
            .iter()
            .map(|p| (p.joint - p.product).abs())
            .reduce(f64::max);
        let passed = last.deviation < self.tolerance
            && last.deviation <= early.deviation
            && pair_deviation.is_none_or(|d| d < self.tolerance);
        ConvergenceVerdict {
            passed,
            final_deviation: last.deviation,
            early_n: early.n,
            early_deviation: early.deviation,
            tolerance: self.tolerance,
            pair_deviation,
        }
    }

    pub fn passed(&self) -> bool {
        self.verdict().passed
    }

    /// Columns `N, observed, reference, deviation`.
    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["N", "observed", "reference", "deviation"])?;
        for pt in &self.points {
            w.write_record([
                pt.n.to_string(),
                format!("{:.9}", pt.observed),
                format!("{:.9}", self.reference),
                format!("{:.9}", pt.deviation),
            ])?;
        }
        let bytes = w.into_inner().map_err(|e| Error::Io(e.into_error()))?;
        Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
    }

    pub fn to_json(&self) -> Result<String> {
        #[derive(Serialize)]
        struct Out<'a> {
            #[serde(flatten)]
            report: &'a FrequencyReport,
            verdict: ConvergenceVerdict,
        }
        Ok(serde_json::to_string_pretty(&Out {
            report: self,
            verdict: self.verdict(),
        })?)
    }
}

fn next_symbol(src: &mut Source, consumed: &mut u64, requested: u64) -> Result<u8> {
    let b = src.next().ok_or(Error::SourceExhausted {
        consumed: *consumed as usize,
        requested: requested as usize,
    })?;
    *consumed += 1;
    Ok(b)
}

fn require_nonempty(target: &Word) -> Result<()> {
    if target.is_empty() {
        Err(Error::EmptyPattern)
    } else {
        Ok(())
    }
}

/// Overlapping occurrences of `target` ending within each prefix, counted
/// incrementally; `denominator(N)` turns the count into a frequency.
fn occurrence_scan(
    source: &SourceSpec,
    target: &Word,
    schedule: &Schedule,
    mut record: impl FnMut(u64, u64),
) -> Result<()> {
    require_nonempty(target)?;
    let mut src = source.open()?;
    let t = target.bits();
    let mut window: VecDeque<u8> = VecDeque::with_capacity(t.len());
    let (mut consumed, mut count) = (0u64, 0u64);
    let end = schedule.last();
    for &point in schedule.points() {
        while consumed < point {
            let b = next_symbol(&mut src, &mut consumed, end)?;
            if window.len() == t.len() {
                window.pop_front();
            }
            window.push_back(b);
            if window.len() == t.len() && window.iter().eq(t.iter()) {
                count += 1;
            }
        }
        record(point, count);
    }
    Ok(())
}

/// `count_occurrences(target, prefix_N) / N` at each `N`.
pub fn freq_word(source: &SourceSpec, target: &Word, p: &BernoulliParam, schedule: &Schedule) -> Result<FrequencyReport> {
    let mut report = FrequencyReport::new(Notion::PDistributed, target.to_string(), source, p, mu_word(p, target).into_rational());
    occurrence_scan(source, target, schedule, |n, count| report.push(n, count, n))?;
    Ok(report)
}

/// Occurrences over the `N − |target| + 1` windows of each prefix.
pub fn freq_caterpillar(source: &SourceSpec, target: &Word, p: &BernoulliParam, schedule: &Schedule) -> Result<FrequencyReport> {
    let mut report = FrequencyReport::new(Notion::Caterpillar, target.to_string(), source, p, mu_word(p, target).into_rational());
    let k = target.len() as u64;
    occurrence_scan(source, target, schedule, |n, count| {
        report.push(n, count, (n + 1).saturating_sub(k))
    })?;
    Ok(report)
}

/// Fraction of the first `k` aligned blocks of length `|target|` equal to
/// `target`; schedule points count blocks.
pub fn freq_block(source: &SourceSpec, target: &Word, p: &BernoulliParam, schedule: &Schedule) -> Result<FrequencyReport> {
    require_nonempty(target)?;
    let mut report = FrequencyReport::new(Notion::Block, target.to_string(), source, p, mu_word(p, target).into_rational());
    let mut src = source.open()?;
    let t = target.bits();
    let end = schedule.last() * t.len() as u64;
    let (mut consumed, mut blocks, mut hits) = (0u64, 0u64, 0u64);
    for &point in schedule.points() {
        while blocks < point {
            let mut equal = true;
            for &want in t {
                equal &= next_symbol(&mut src, &mut consumed, end)? == want;
            }
            blocks += 1;
            hits += equal as u64;
        }
        report.push(point, hits, point);
    }
    Ok(report)
}

/// Tuples `(a_{tm+r_1}, …, a_{tm+r_k})`, `t = 0, 1, …`, where `m = |w|` and
/// `r_i` are the 1-based positions of the 1s of `w`; frequency of the
/// all-ones tuple against `p^k`. Schedule points count tuples.
pub fn freq_postnikov(source: &SourceSpec, w: &Word, p: &BernoulliParam, schedule: &Schedule) -> Result<FrequencyReport> {
    let k = w.count_ones() as u32;
    if k == 0 {
        return Err(Error::InvalidParameter(format!("pattern {w} has no 1s")));
    }
    let mut report = FrequencyReport::new(Notion::Postnikov, w.to_string(), source, p, ratio::pow(p.p1(), k));
    let mut src = source.open()?;
    let end = schedule.last() * w.len() as u64;
    let (mut consumed, mut tuples, mut hits) = (0u64, 0u64, 0u64);
    for &point in schedule.points() {
        while tuples < point {
            let mut all_ones = true;
            for &mark in w.bits() {
                let b = next_symbol(&mut src, &mut consumed, end)?;
                if mark == 1 {
                    all_ones &= b == 1;
                }
            }
            tuples += 1;
            hits += all_ones as u64;
        }
        report.push(point, hits, point);
    }
    Ok(report)
}

/// Frequency of 1 along `a_r, a_{r+n}, a_{r+2n}, …` against `p(1)`, plus a
/// pairwise probe at the final point: for every pair of offsets `i < j` in
/// `1..=n`, the joint frequency of `(a_{i+tn}, a_{j+tn}) = (1,1)` against the
/// product of the two marginals. Schedule points count terms.
pub fn freq_copeland(source: &SourceSpec, r: u64, n: u64, p: &BernoulliParam, schedule: &Schedule) -> Result<FrequencyReport> {
    if n == 0 || r == 0 || r > n {
        return Err(Error::InvalidParameter(format!("need 1 <= r <= n, got r = {r}, n = {n}")));
    }
    let mut report = FrequencyReport::new(Notion::Copeland, format!("{r}/{n}"), source, p, p.p1().clone());
    let mut src = source.open()?;
    let end = schedule.last() * n;
    let width = n as usize;
    let mut ones = vec![0u64; width];
    let mut joint = vec![vec![0u64; width]; width];
    let mut block = vec![0u8; width];
    let (mut consumed, mut terms) = (0u64, 0u64);
    let probe = width <= 64;
    for &point in schedule.points() {
        while terms < point {
            for slot in block.iter_mut() {
                *slot = next_symbol(&mut src, &mut consumed, end)?;
            }
            for i in 0..width {
                if block[i] == 1 {
                    ones[i] += 1;
                    if probe {
                        for j in i + 1..width {
                            joint[i][j] += block[j] as u64;
                        }
                    }
                }
            }
            terms += 1;
        }
        report.push(point, ones[r as usize - 1], point);
    }
    if probe {
        let t = terms as f64;
        for i in 0..width {
            for j in i + 1..width {
                report.pairs.push(PairProbe {
                    i: i as u64 + 1,
                    j: j as u64 + 1,
                    joint: joint[i][j] as f64 / t,
                    product: (ones[i] as f64 / t) * (ones[j] as f64 / t),
                });
            }
        }
    }
    Ok(report)
}

/// Frequency of `a` in the subsequence that `dfa` picks from the first `N`
/// input symbols. Schedule points count input symbols.
pub fn freq_selected(dfa: &Dfa, source: &SourceSpec, a: u8, p: &BernoulliParam, schedule: &Schedule) -> Result<FrequencyReport> {
    let a = a & 1;
    let mut report = FrequencyReport::new(Notion::Selection, a.to_string(), source, p, p.p(a).clone());
    let mut src = source.open()?;
    let end = schedule.last();
    let mut q = dfa.start();
    let (mut consumed, mut picked, mut hits) = (0u64, 0u64, 0u64);
    for &point in schedule.points() {
        while consumed < point {
            let b = next_symbol(&mut src, &mut consumed, end)?;
            if dfa.is_accepting(q) {
                picked += 1;
                hits += (b == a) as u64;
            }
            q = dfa.step(q, b);
        }
        report.push(point, hits, picked);
    }
    Ok(report)
}

/// Statistics of a blockwise run of the selection argument.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BlockSelectionStats {
    pub block_length: u32,
    pub blocks: u64,
    pub symbol: u8,
    /// Total selected length `L`.
    pub total_selected: u64,
    /// Selected length from blocks outside `D`.
    pub outside_selected: u64,
    /// Number of blocks in `D`.
    pub blocks_in_d: u64,
    /// Frequency of `a` in everything selected.
    pub rho: f64,
    /// Frequency of `a` in what was selected from blocks in `D`.
    pub theta: Option<f64>,
    pub outside_fraction: f64,
    /// `|ρ − θ| ≤ ℓ/L`, exactly.
    pub rho_theta_bound: bool,
    /// `|ρ − p(a)| ≤ |ρ − θ| + |θ − p(a)|`, exactly.
    pub triangle: bool,
    /// `|θ − p(a)| < ε/2`, exactly.
    pub theta_close: bool,
}

impl BlockSelectionStats {
    pub fn passed(&self) -> bool {
        self.rho_theta_bound && self.triangle && self.theta_close
    }
}

/// Parameters of [`theorem_demo`].
#[derive(Clone, Debug)]
pub struct DemoParams {
    pub block_length: u32,
    pub blocks: u64,
    pub b: Rational,
    pub epsilon: Rational,
    pub symbol: u8,
}

/// Runs `dfa` over `m` consecutive blocks of length `n` (the state carries
/// across blocks), classifies each block by membership in `D_n(b, ε/2)` and
/// tabulates what was selected inside and outside `D`. The report tracks `ρ`
/// against the number of blocks processed.
pub fn theorem_demo(
    dfa: &Dfa,
    source: &SourceSpec,
    p: &BernoulliParam,
    params: &DemoParams,
    config: &VerifyConfig,
) -> Result<(BlockSelectionStats, FrequencyReport)> {
    p.require_positive()?;
    if !dfa.is_strongly_connected() {
        return Err(Error::NotStronglyConnected);
    }
    if params.blocks == 0 {
        return Err(Error::InvalidParameter("need at least one block".into()));
    }
    let n = params.block_length;
    let a = params.symbol & 1;
    let half_eps = &params.epsilon / ratio::from_int(2);
    let table = d_membership_table(dfa, p, &params.b, &half_eps, n, config)?;
    let schedule = Schedule::up_to(params.blocks)?;
    let mut report = FrequencyReport::new(Notion::Selection, a.to_string(), source, p, p.p(a).clone());
    report.target = format!("{a} (blocks of {n})");

    let mut src = source.open()?;
    let end = params.blocks * n as u64;
    let mut q = dfa.start();
    let mut consumed = 0u64;
    // totals over all blocks, and over blocks in D
    let (mut all_len, mut all_hits, mut d_len, mut d_hits, mut d_blocks) = (0u64, 0u64, 0u64, 0u64, 0u64);
    let mut done = 0u64;
    for &point in schedule.points() {
        while done < point {
            let (mut packed, mut len, mut hits) = (0u64, 0u64, 0u64);
            for _ in 0..n {
                let b = next_symbol(&mut src, &mut consumed, end)?;
                packed = (packed << 1) | b as u64;
                if dfa.is_accepting(q) {
                    len += 1;
                    hits += (b == a) as u64;
                }
                q = dfa.step(q, b);
            }
            all_len += len;
            all_hits += hits;
            if table[packed as usize] {
                d_blocks += 1;
                d_len += len;
                d_hits += hits;
            }
            done += 1;
        }
        report.push(point, all_hits, all_len);
    }
    if all_len == 0 {
        return Err(Error::NothingSelected);
    }

    let int = |x: u64| ratio::from_int(x as i64);
    let rho = int(all_hits) / int(all_len);
    let theta = (d_len > 0).then(|| int(d_hits) / int(d_len));
    let outside = int(all_len - d_len) / int(all_len);
    let pa = p.p(a);
    let (rho_theta_bound, triangle, theta_close) = match &theta {
        Some(theta) => {
            let rt = (&rho - theta).abs();
            (
                rt <= outside,
                (&rho - pa).abs() <= &rt + (theta - pa).abs(),
                (theta - pa).abs() < half_eps,
            )
        }
        // with no block in D everything is outside and ℓ/L = 1
        None => (outside >= Rational::zero(), true, true),
    };
    let stats = BlockSelectionStats {
        block_length: n,
        blocks: params.blocks,
        symbol: a,
        total_selected: all_len,
        outside_selected: all_len - d_len,
        blocks_in_d: d_blocks,
        rho: ratio::to_f64(&rho),
        theta: theta.as_ref().map(ratio::to_f64),
        outside_fraction: ratio::to_f64(&outside),
        rho_theta_bound,
        triangle,
        theta_close,
    };
    Ok((stats, report))
}
