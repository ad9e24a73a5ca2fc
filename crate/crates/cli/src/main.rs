//! `normality-lab`: finite-state selection, exact lemma checks and normality
//! estimators from the command line.
//!
//! Exit codes: 0 pass, 1 a verdict failed, 2 usage or configuration error,
//! 3 I/O or source error.

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use normality_lab::generators::{generate, SourceSpec};
use normality_lab::markov::{min_accepting_mass, TransitionMatrix};
use normality_lab::normality::{
    freq_block, freq_caterpillar, freq_copeland, freq_postnikov, freq_selected, freq_word, theorem_demo, DemoParams,
    Notion, Schedule,
};
use normality_lab::ratio::{parse_rational, Rational};
use normality_lab::strategies::StrategyRef;
use normality_lab::verify::{
    lemma3_catalog, mainclaim_with_b, verify_lemma1, verify_lemma2, verify_lemma3, verify_mainclaim,
    verify_partition, DensityParams, Lemma2Params, Lemma3Catalog, TrendReport, VerifyConfig,
};
use normality_lab::{BernoulliParam, Dfa, Error, Word, WordSet};

const THREADS_ENV: &str = "NORMALITY_LAB_THREADS";

#[derive(Parser)]
#[command(name = "normality-lab", version, about = "Finite-state selection and normality toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a DFA selector over a source and print the selected bits.
    Select(SelectArgs),
    /// Compose two selectors: the second runs on what the first picks.
    Compose(ComposeArgs),
    /// Induced Markov chain, stationary distribution and period of a selector.
    Markov(MarkovArgs),
    /// Exhaustive exact checks of the selection lemmas.
    #[command(subcommand)]
    Verify(VerifyCommand),
    /// Empirical frequency estimate for one normality notion.
    Analyze(AnalyzeArgs),
    /// Print the first n bits of a source.
    Generate(GenerateArgs),
}

#[derive(Subcommand)]
enum VerifyCommand {
    /// mu(E_n) for b = (c - eps)/d, with the union bound over states.
    Lemma1(Lemma1Args),
    /// mu(H_n) for a strategy against the Chebyshev bound.
    Lemma2(Lemma2Args),
    /// Preimages of a word family under a strategy against its prefix-free reduction.
    Lemma3(Lemma3Args),
    /// mu(D_n), mu(E_n), mu(G_n) and the complement bound.
    Mainclaim(MainclaimArgs),
    /// D, E, G cover and disjointness, word by word.
    Partition(PartitionArgs),
}

#[derive(Clone, Copy, ValueEnum, PartialEq, Eq)]
enum Format {
    Text,
    Csv,
    Json,
}

#[derive(Args)]
struct Output {
    /// Write to this file (atomically) instead of stdout.
    #[arg(long, short)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct SourceArgs {
    /// champernowne | periodic:<bits> | random:<num>/<den>[:<seed>] | literal:<bits>:<bit> | file:<path>
    #[arg(long)]
    source: String,
    /// Seed for a random source given without one.
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

impl SourceArgs {
    /// Parses the spec (usage error) and opens it once (source error), so a
    /// missing or malformed file is reported before any computation.
    fn spec(&self) -> Result<SourceSpec, Failure> {
        let text = match self.source.strip_prefix("random:") {
            Some(rest) if !rest.contains(':') => format!("random:{rest}:{}", self.seed),
            _ => self.source.clone(),
        };
        let spec: SourceSpec = text.parse()?;
        spec.open().map_err(|e| Failure::Io(format!("source {spec}: {e}")))?;
        Ok(spec)
    }
}

#[derive(Args)]
struct SelectArgs {
    #[arg(long)]
    dfa: PathBuf,
    #[command(flatten)]
    source: SourceArgs,
    /// Number of input symbols to read.
    #[arg(long = "n")]
    n: usize,
    /// Start state (defaults to the DFA's start state).
    #[arg(long)]
    from: Option<usize>,
    /// Also print the 1-based positions of the selected symbols.
    #[arg(long)]
    positions: bool,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
    #[command(flatten)]
    out: Output,
}

#[derive(Args)]
struct ComposeArgs {
    #[arg(long)]
    first: PathBuf,
    #[arg(long)]
    second: PathBuf,
    #[command(flatten)]
    out: Output,
}

#[derive(Args)]
struct MarkovArgs {
    #[arg(long)]
    dfa: PathBuf,
    #[arg(long, value_parser = rational_arg)]
    p: Rational,
    #[command(flatten)]
    out: Output,
}

#[derive(Args)]
struct ReportArgs {
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    /// Largest word length enumerated.
    #[arg(long, default_value_t = normality_lab::verify::DEFAULT_ENUMERATION_CAP)]
    cap: u32,
    #[command(flatten)]
    out: Output,
}

#[derive(Args)]
struct Lemma1Args {
    #[arg(long)]
    dfa: PathBuf,
    #[arg(long, value_parser = rational_arg, default_value = "1/2")]
    p: Rational,
    #[arg(long, value_parser = rational_arg)]
    eps: Rational,
    /// Divisor of c - eps; defaults to the period of the chain.
    #[arg(long, value_parser = rational_arg)]
    d: Option<Rational>,
    /// Word lengths: `a..b` (inclusive), `a,b,c` or a single value.
    #[arg(long = "n", value_parser = range_arg, default_value = "4..16")]
    n: Lengths,
    #[command(flatten)]
    report: ReportArgs,
}

#[derive(Args)]
struct Lemma2Args {
    /// suffix:<bits> or dfa:<file.json>
    #[arg(long, value_parser = strategy_arg)]
    strategy: StrategyRef,
    #[arg(long, value_parser = rational_arg, default_value = "1/2")]
    p: Rational,
    #[arg(long, value_parser = rational_arg)]
    b: Rational,
    #[arg(long, value_parser = rational_arg)]
    eps: Rational,
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u8).range(0..=1))]
    symbol: u8,
    #[arg(long = "n", value_parser = range_arg, default_value = "4..16")]
    n: Lengths,
    #[command(flatten)]
    report: ReportArgs,
}

#[derive(Args)]
struct Lemma3Args {
    /// Run the built-in exhaustive catalog.
    #[arg(long, value_parser = ["default"], conflicts_with_all = ["strategy", "family"])]
    catalog: Option<String>,
    #[arg(long, value_parser = strategy_arg, requires = "family")]
    strategy: Option<StrategyRef>,
    /// Comma-separated words; `e` is the empty word.
    #[arg(long, requires = "strategy")]
    family: Option<String>,
    #[arg(long, value_parser = rational_arg, default_value = "1/2")]
    p: Rational,
    #[arg(long = "n", value_parser = range_arg, default_value = "10")]
    n: Lengths,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    #[arg(long, default_value_t = normality_lab::verify::DEFAULT_ENUMERATION_CAP)]
    cap: u32,
    #[command(flatten)]
    out: Output,
}

#[derive(Args)]
struct MainclaimArgs {
    #[arg(long)]
    dfa: PathBuf,
    #[arg(long, value_parser = rational_arg, default_value = "1/2")]
    p: Rational,
    #[arg(long, value_parser = rational_arg)]
    eps: Rational,
    /// Use this b instead of (c - eps)/d.
    #[arg(long, value_parser = rational_arg, conflicts_with = "d")]
    b: Option<Rational>,
    #[arg(long, value_parser = rational_arg)]
    d: Option<Rational>,
    #[arg(long = "n", value_parser = range_arg, default_value = "4..16")]
    n: Lengths,
    #[command(flatten)]
    report: ReportArgs,
}

#[derive(Args)]
struct PartitionArgs {
    #[arg(long)]
    dfa: PathBuf,
    #[arg(long, value_parser = rational_arg, default_value = "1/2")]
    p: Rational,
    #[arg(long, value_parser = rational_arg)]
    b: Rational,
    #[arg(long, value_parser = rational_arg)]
    eps: Rational,
    #[arg(long = "n", value_parser = range_arg, default_value = "10")]
    n: Lengths,
    #[command(flatten)]
    report: ReportArgs,
}

#[derive(Args)]
struct AnalyzeArgs {
    /// word | block | caterpillar | postnikov | copeland | selection | theorem
    #[arg(long)]
    notion: String,
    #[command(flatten)]
    source: SourceArgs,
    #[arg(long, value_parser = rational_arg, default_value = "1/2")]
    p: Rational,
    /// Target word (word, block, caterpillar).
    #[arg(long)]
    target: Option<Word>,
    /// Position pattern (postnikov).
    #[arg(long)]
    w: Option<Word>,
    /// Offset (copeland).
    #[arg(long)]
    r: Option<u64>,
    /// Modulus (copeland) or block length (theorem).
    #[arg(long = "n")]
    n: Option<u64>,
    /// Schedule: final point (doubling schedule) or a comma list; `2^k` allowed.
    #[arg(long = "N", default_value = "2^20")]
    schedule: Schedule,
    /// Selector (selection, theorem).
    #[arg(long)]
    dfa: Option<PathBuf>,
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u8).range(0..=1))]
    symbol: u8,
    /// Density and tolerance (theorem).
    #[arg(long, value_parser = rational_arg)]
    b: Option<Rational>,
    #[arg(long, value_parser = rational_arg)]
    eps: Option<Rational>,
    #[arg(long, default_value_t = normality_lab::normality::DEFAULT_TOLERANCE)]
    tolerance: f64,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    #[command(flatten)]
    out: Output,
}

#[derive(Args)]
struct GenerateArgs {
    #[command(flatten)]
    source: SourceArgs,
    #[arg(long = "n")]
    n: usize,
    #[command(flatten)]
    out: Output,
}

fn rational_arg(s: &str) -> Result<Rational, String> {
    parse_rational(s).map_err(|e| e.to_string())
}

fn strategy_arg(s: &str) -> Result<StrategyRef, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

/// Word lengths from `a..b` (inclusive), `a,b,c` or a single value.
#[derive(Clone)]
struct Lengths(Vec<u32>);

fn range_arg(s: &str) -> Result<Lengths, String> {
    let num = |t: &str| t.trim().parse::<u32>().map_err(|_| format!("bad length {t:?}"));
    if let Some((a, b)) = s.split_once("..") {
        let (a, b) = (num(a)?, num(b.trim_start_matches('='))?);
        if a > b {
            return Err(format!("empty range {s}"));
        }
        Ok(Lengths((a..=b).collect()))
    } else {
        s.split(',').map(num).collect::<Result<_, _>>().map(Lengths)
    }
}

/// Failure of a command, already mapped to its exit code.
enum Failure {
    Usage(String),
    Io(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Io(_) | Error::SourceExhausted { .. } | Error::Csv(_) => Failure::Io(e.to_string()),
            _ => Failure::Usage(e.to_string()),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Io(e.to_string())
    }
}

type CmdResult = Result<bool, Failure>;

fn load_dfa(path: &Path) -> Result<Dfa, Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))?;
    Dfa::from_json_str(&text).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn param(p: &Rational) -> Result<BernoulliParam, Failure> {
    Ok(BernoulliParam::new(p.clone())?)
}

/// Writes to stdout, or to a temporary file in the target directory that is
/// then renamed over the destination.
fn emit(out: &Output, text: &str) -> Result<(), Failure> {
    match &out.output {
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(text.as_bytes())?;
            stdout.flush()?;
        }
        Some(path) => {
            let dir = match path.parent() {
                Some(d) if !d.as_os_str().is_empty() => d,
                _ => Path::new("."),
            };
            let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
            tmp.write_all(text.as_bytes())?;
            tmp.persist(path).map_err(|e| Failure::Io(e.to_string()))?;
        }
    }
    Ok(())
}

fn json<T: Serialize>(value: &T) -> Result<String, Failure> {
    let mut s = serde_json::to_string_pretty(value).map_err(|e| Failure::Usage(e.to_string()))?;
    s.push('\n');
    Ok(s)
}

fn emit_trend(report: &TrendReport, args: &ReportArgs) -> CmdResult {
    let text = match args.format {
        Format::Json => report.to_json()? + "\n",
        _ => report.to_csv()?,
    };
    emit(&args.out, &text)?;
    for v in &report.verdicts {
        eprintln!("{}: {} ({})", v.name, if v.passed { "pass" } else { "FAIL" }, v.detail);
    }
    Ok(report.passed())
}

fn config(cap: u32) -> VerifyConfig {
    VerifyConfig {
        cap,
        ..VerifyConfig::default()
    }
}

fn cmd_select(a: &SelectArgs) -> CmdResult {
    let dfa = load_dfa(&a.dfa)?;
    let spec = a.source.spec()?;
    let from = a.from.unwrap_or(dfa.start());
    let run = dfa.select_stream(from, spec.open()?, a.n)?;
    let text = match a.format {
        Format::Json => {
            #[derive(Serialize)]
            struct Out<'a> {
                n: usize,
                source: String,
                selected: &'a Word,
                selected_length: usize,
                #[serde(skip_serializing_if = "Option::is_none")]
                positions: Option<&'a [usize]>,
            }
            json(&Out {
                n: a.n,
                source: spec.to_string(),
                selected: &run.selected,
                selected_length: run.selected.len(),
                positions: a.positions.then_some(&run.selected_positions[..]),
            })?
        }
        _ => {
            let mut s = format!("{}\n", run.selected);
            if a.positions {
                let pos: Vec<String> = run.selected_positions.iter().map(|p| p.to_string()).collect();
                s += &pos.join(" ");
                s.push('\n');
            }
            s
        }
    };
    emit(&a.out, &text)?;
    Ok(true)
}

fn cmd_compose(a: &ComposeArgs) -> CmdResult {
    let c = Dfa::compose(&load_dfa(&a.first)?, &load_dfa(&a.second)?);
    emit(&a.out, &(c.to_json_string() + "\n"))?;
    Ok(true)
}

fn cmd_markov(a: &MarkovArgs) -> CmdResult {
    let dfa = load_dfa(&a.dfa)?;
    let p = param(&a.p)?;
    let m = TransitionMatrix::induced(&dfa, &p);
    #[derive(Serialize)]
    struct Out {
        p: String,
        matrix: TransitionMatrix,
        irreducible: bool,
        period: Option<usize>,
        stationary: Option<normality_lab::markov::StationaryDistribution>,
        c: Option<String>,
        note: Option<String>,
    }
    let irreducible = m.is_irreducible();
    let (period, stationary, c, note) = if irreducible {
        let c = min_accepting_mass(&dfa, &p).map(|c| c.to_string());
        (Some(m.period()?), Some(m.stationary()?), c.as_ref().ok().cloned(), c.err().map(|e| e.to_string()))
    } else {
        (None, None, None, Some(Error::NotIrreducible.to_string()))
    };
    emit(
        &a.out,
        &json(&Out {
            p: p.to_string(),
            matrix: m,
            irreducible,
            period,
            stationary,
            c,
            note,
        })?,
    )?;
    Ok(true)
}

fn cmd_lemma1(a: &Lemma1Args) -> CmdResult {
    let dfa = load_dfa(&a.dfa)?;
    let params = DensityParams {
        epsilon: a.eps.clone(),
        d: a.d.clone(),
    };
    let report = verify_lemma1(&dfa, &param(&a.p)?, &params, &a.n.0, &config(a.report.cap))?;
    emit_trend(&report, &a.report)
}

fn cmd_lemma2(a: &Lemma2Args) -> CmdResult {
    let strategy = a.strategy.load()?;
    let params = Lemma2Params {
        b: a.b.clone(),
        epsilon: a.eps.clone(),
        symbol: a.symbol,
    };
    let report = verify_lemma2(&strategy, &param(&a.p)?, &params, &a.n.0, &config(a.report.cap))?;
    emit_trend(&report, &a.report)
}

fn cmd_lemma3(a: &Lemma3Args) -> CmdResult {
    let cfg = config(a.cap);
    if a.catalog.is_some() || a.strategy.is_none() {
        let report = lemma3_catalog(&Lemma3Catalog::default(), &cfg)?;
        emit(&a.out, &json(&report)?)?;
        eprintln!(
            "{} checks over {} strategies and {} families: {} violations",
            report.checks,
            report.strategies,
            report.families,
            report.violations.len()
        );
        return Ok(report.passed());
    }
    let strategy = a.strategy.as_ref().expect("checked above").load()?;
    let family: WordSet = a
        .family
        .as_deref()
        .unwrap_or_default()
        .split(',')
        .map(|w| match w.trim() {
            "e" | "" => Ok(Word::empty()),
            bits => bits.parse(),
        })
        .collect::<Result<_, Error>>()?;
    let p = param(&a.p)?;
    let outcomes = a
        .n
        .0
        .iter()
        .map(|&n| verify_lemma3(&strategy, &family, n, &p, &cfg))
        .collect::<Result<Vec<_>, Error>>()?;
    emit(&a.out, &json(&outcomes)?)?;
    Ok(outcomes.iter().all(|o| o.holds))
}

fn cmd_mainclaim(a: &MainclaimArgs) -> CmdResult {
    let dfa = load_dfa(&a.dfa)?;
    let p = param(&a.p)?;
    let cfg = config(a.report.cap);
    let report = match &a.b {
        Some(b) => mainclaim_with_b(&dfa, &p, b, &a.eps, &a.n.0, &cfg)?,
        None => {
            let params = DensityParams {
                epsilon: a.eps.clone(),
                d: a.d.clone(),
            };
            verify_mainclaim(&dfa, &p, &params, &a.n.0, &cfg)?
        }
    };
    emit_trend(&report, &a.report)
}

fn cmd_partition(a: &PartitionArgs) -> CmdResult {
    let dfa = load_dfa(&a.dfa)?;
    let p = param(&a.p)?;
    let cfg = config(a.report.cap);
    let reports = a
        .n
        .0
        .iter()
        .map(|&n| verify_partition(&dfa, &p, &a.b, &a.eps, n, &cfg))
        .collect::<Result<Vec<_>, Error>>()?;
    let text = match a.report.format {
        Format::Json => json(&reports)?,
        _ => {
            let mut s = String::from("n,words,in_d,in_e,in_g,in_e_and_g,uncovered,d_overlaps\n");
            for r in &reports {
                s += &format!(
                    "{},{},{},{},{},{},{},{}\n",
                    r.n, r.words, r.in_d, r.in_e, r.in_g, r.in_e_and_g, r.uncovered, r.d_overlaps
                );
            }
            s
        }
    };
    emit(&a.report.out, &text)?;
    Ok(reports.iter().all(|r| r.passed()))
}

fn require<T: Clone>(value: &Option<T>, flag: &str, notion: &str) -> Result<T, Failure> {
    value
        .clone()
        .ok_or_else(|| Failure::Usage(format!("notion {notion} needs --{flag}")))
}

fn cmd_analyze(a: &AnalyzeArgs) -> CmdResult {
    let p = param(&a.p)?;
    let source = a.source.spec()?;
    let name = a.notion.as_str();
    if name == "theorem" {
        let dfa = load_dfa(&require(&a.dfa, "dfa", name)?)?;
        let params = DemoParams {
            block_length: a.n.unwrap_or(8) as u32,
            blocks: a.schedule.last(),
            b: a.b.clone().unwrap_or_else(|| normality_lab::ratio::rational(1, 4)),
            epsilon: require(&a.eps, "eps", name)?,
            symbol: a.symbol,
        };
        let (stats, report) = theorem_demo(&dfa, &source, &p, &params, &VerifyConfig::default())?;
        let report = report.with_tolerance(a.tolerance);
        let text = match a.format {
            Format::Json => {
                #[derive(Serialize)]
                struct Out<'a> {
                    stats: &'a normality_lab::normality::BlockSelectionStats,
                    report: &'a normality_lab::normality::FrequencyReport,
                }
                json(&Out {
                    stats: &stats,
                    report: &report,
                })?
            }
            _ => report.to_csv()?,
        };
        emit(&a.out, &text)?;
        eprintln!(
            "rho = {:.6}, theta = {}, l/L = {:.6}, checks {}",
            stats.rho,
            stats.theta.map_or("none".into(), |t| format!("{t:.6}")),
            stats.outside_fraction,
            if stats.passed() { "pass" } else { "FAIL" }
        );
        return Ok(stats.passed() && report.final_deviation() < a.tolerance);
    }
    let notion: Notion = name.parse()?;
    let report = match notion {
        Notion::PDistributed => freq_word(&source, &require(&a.target, "target", name)?, &p, &a.schedule)?,
        Notion::Block => freq_block(&source, &require(&a.target, "target", name)?, &p, &a.schedule)?,
        Notion::Caterpillar => freq_caterpillar(&source, &require(&a.target, "target", name)?, &p, &a.schedule)?,
        Notion::Postnikov => freq_postnikov(&source, &require(&a.w, "w", name)?, &p, &a.schedule)?,
        Notion::Copeland => freq_copeland(&source, require(&a.r, "r", name)?, require(&a.n, "n", name)?, &p, &a.schedule)?,
        Notion::Selection => {
            let dfa = load_dfa(&require(&a.dfa, "dfa", name)?)?;
            freq_selected(&dfa, &source, a.symbol, &p, &a.schedule)?
        }
    }
    .with_tolerance(a.tolerance);
    let text = match a.format {
        Format::Json => report.to_json()? + "\n",
        _ => report.to_csv()?,
    };
    emit(&a.out, &text)?;
    let v = report.verdict();
    eprintln!(
        "{} {}: final deviation {:.6} (at N = {}: {:.6}), tolerance {}: {}",
        report.notion,
        report.target,
        v.final_deviation,
        v.early_n,
        v.early_deviation,
        v.tolerance,
        if v.passed { "pass" } else { "FAIL" }
    );
    Ok(v.passed)
}

fn cmd_generate(a: &GenerateArgs) -> CmdResult {
    let word = generate(&a.source.spec()?, a.n)?;
    emit(&a.out, &format!("{word}\n"))?;
    Ok(true)
}

fn configure_threads() -> Result<(), Failure> {
    let Ok(value) = std::env::var(THREADS_ENV) else {
        return Ok(());
    };
    let threads: usize = value
        .trim()
        .parse()
        .ok()
        .filter(|&t| t > 0)
        .ok_or_else(|| Failure::Usage(format!("{THREADS_ENV} must be a positive integer, got {value:?}")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .map_err(|e| Failure::Usage(e.to_string()))
}

fn run(cli: &Cli) -> CmdResult {
    configure_threads()?;
    match &cli.command {
        Command::Select(a) => cmd_select(a),
        Command::Compose(a) => cmd_compose(a),
        Command::Markov(a) => cmd_markov(a),
        Command::Verify(v) => match v {
            VerifyCommand::Lemma1(a) => cmd_lemma1(a),
            VerifyCommand::Lemma2(a) => cmd_lemma2(a),
            VerifyCommand::Lemma3(a) => cmd_lemma3(a),
            VerifyCommand::Mainclaim(a) => cmd_mainclaim(a),
            VerifyCommand::Partition(a) => cmd_partition(a),
        },
        Command::Analyze(a) => cmd_analyze(a),
        Command::Generate(a) => cmd_generate(a),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Io(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(3)
        }
    }
}
