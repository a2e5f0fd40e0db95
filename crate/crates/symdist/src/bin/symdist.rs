//! Command-line front end for the distinct-evaluation toolkit.
//!
//! Exit codes: 0 = success / pass / found; 1 = a definitive negative answer
//! (verification failure, infeasibility, a violated identity); 2 = usage or
//! parse error; 3 = an exhausted budget (nodes, time, memory, retries).
//!
//! Reports written to stdout are byte-identical for identical configuration,
//! inputs, and seed at any thread count. Quantities that depend on thread
//! scheduling (nodes expanded, wall time) go to stderr only.

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigUint;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Duration;

use symdist::bounds::{
    allones_variance_bound, constants_table, pigeonhole_lower, prob_upper, prob_upper_full,
    variance_lower_general, variance_lower_small, variance_upper_sequence, BoundValue, Side,
};
use symdist::construct::{construct_integer, construct_probabilistic, construct_real, ProbRecipe};
use symdist::esp::eval_subset;
use symdist::interval::format_rat_auto;
use symdist::params::{format_ratio, parse_ratio};
use symdist::report::{
    bound_rows, merge_reports, Csv, BOUNDS_HEADER, SEARCH_HEADER, STATS_HEADER, VALUE_DIGITS,
};
use symdist::rng::{derive_seed, one_to, rng_from};
use symdist::scalar::Scalar;
use symdist::search::{min_m_search, mitm_verify, Budget, SearchStatus, Strategy};
use symdist::seqfile::{any_from_json, load_any, sequence_to_json, AnySequence};
use symdist::stats::{
    allones_exact, bound_comparison, coefficient_identity, exact_moments, montecarlo_moments,
    MomentReport,
};
use symdist::verify::{verify_distinct, VerificationResult, VerifyMode, VerifyOptions};
use symdist::{Error, Int, ProblemParams, Rat, Result, Sequence};

const VERIFY_HEADER: [&str; 12] = [
    "op",
    "n",
    "k",
    "m",
    "lambda",
    "mode",
    "status",
    "compared",
    "witness_a",
    "witness_b",
    "value_a",
    "value_b",
];

const EVAL_HEADER: [&str; 7] = ["op", "n", "k", "m", "lambda", "subset", "value"];

const CONSTRUCT_HEADER: [&str; 10] = [
    "op", "kind", "n", "k", "m", "lambda", "epsilon", "bound", "attempts", "out",
];

#[derive(Parser)]
#[command(
    name = "symdist",
    disable_version_flag = true,
    about = "Distinct evaluations of elementary symmetric polynomials over subset families"
)]
struct Cli {
    /// Worker threads (default: SYMDIST_THREADS, then all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Root seed for every randomized path.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Wall-clock budget for operations that support one.
    #[arg(long, global = true)]
    budget_seconds: Option<u64>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    format: Format,
    /// Print the version and the coefficient-identity self-check status.
    #[arg(long)]
    version: bool,
    #[command(subcommand)]
    cmd: Option<Cmd>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Subcommand)]
enum Cmd {
    /// Check that all qualifying subsets evaluate distinctly.
    Verify(VerifyArgs),
    /// Evaluate the degree-m elementary symmetric polynomial on one subset.
    Eval(EvalArgs),
    /// Closed-form lower/upper bounds for the minimal entry bound M.
    Bounds(BoundsArgs),
    /// Build sequences: explicit doubling constructions or sample-and-repair.
    Construct(ConstructArgs),
    /// Exact or sampled moments of the evaluation over the subset family.
    Stats(StatsArgs),
    /// Exhaustive search for the least feasible entry bound M.
    Search(SearchArgs),
    /// Merge report CSVs into one table keyed by (n, k, m, lambda).
    Report(ReportArgs),
}

#[derive(Args)]
struct VerifyArgs {
    /// Sequence file to check.
    #[arg(long = "in")]
    input: PathBuf,
    #[arg(long, value_enum, default_value_t = ModeArg::Exact)]
    mode: ModeArg,
    /// Smallest subset size compared (default: the polynomial degree m).
    #[arg(long)]
    min_size: Option<u32>,
    /// Cap on stored table entries; exceeding it is a budget error unless
    /// --chunked is set.
    #[arg(long)]
    memory_budget: Option<u64>,
    /// Fall back to multi-pass verification under the memory budget.
    #[arg(long)]
    chunked: bool,
    /// Stop at the first collision (witness is scan order, not canonical).
    #[arg(long)]
    early_exit: bool,
    /// Use the meet-in-the-middle engine (integer entries, m = 1, lambda = 1).
    #[arg(long)]
    mitm: bool,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ModeArg {
    Exact,
    Real,
}

#[derive(Args)]
struct EvalArgs {
    #[arg(long = "in")]
    input: PathBuf,
    /// Comma-separated 1-based indices, strictly increasing (default: full set).
    #[arg(long)]
    subset: Option<String>,
}

#[derive(Args)]
struct BoundsArgs {
    #[arg(long)]
    n: u32,
    #[arg(long, default_value_t = 1)]
    m: u32,
    #[arg(long, default_value_t = 1)]
    k: u32,
    #[arg(long, default_value = "1")]
    lambda: String,
    /// Entry bound M for the sequence-variance upper bound row.
    #[arg(long)]
    bound: Option<String>,
    /// Use the real-spacing variant of the general variance lower bound.
    #[arg(long)]
    real_spacing: bool,
    /// Emit the leading-constant comparison rows for degrees 1..=COUNT
    /// instead of the parameterized bounds.
    #[arg(long, value_name = "COUNT")]
    constants: Option<u32>,
}

#[derive(Args)]
struct ConstructArgs {
    #[arg(long, value_enum)]
    kind: KindArg,
    #[arg(long)]
    n: u32,
    #[arg(long)]
    m: u32,
    #[arg(long, default_value_t = 1)]
    k: u32,
    #[arg(long, default_value = "1")]
    lambda: String,
    /// Rational excess for the explicit constructions (kind real/integer).
    #[arg(long)]
    epsilon: Option<String>,
    /// Entry bound M for sample-and-repair (default: the closed-form upper
    /// bound for the parameters).
    #[arg(long)]
    bound: Option<String>,
    #[arg(long, default_value_t = 20)]
    retries: u32,
    /// Extra elements sampled beyond n (default: the entropy-optimal count).
    #[arg(long)]
    overshoot: Option<u32>,
    /// Output sequence file; sample-and-repair also writes a `.repair.json`
    /// sidecar with the full attempt log.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum KindArg {
    Real,
    Integer,
    Probabilistic,
}

#[derive(Args)]
struct StatsArgs {
    #[arg(long, value_enum)]
    op: StatsOp,
    /// Sequence file (ops exact, identity, montecarlo).
    #[arg(long = "in")]
    input: Option<PathBuf>,
    /// Parameters for the closed-form ops (allones, compare).
    #[arg(long)]
    n: Option<u32>,
    #[arg(long)]
    m: Option<u32>,
    #[arg(long, default_value = "1")]
    lambda: String,
    /// Smallest subset size enumerated (op exact).
    #[arg(long, default_value_t = 0)]
    min_size: u32,
    #[arg(long, default_value_t = 10000)]
    samples: u64,
    /// Cap on enumerated subsets for the exact ops.
    #[arg(long)]
    budget_nodes: Option<u64>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum StatsOp {
    /// Exact moments by full enumeration.
    Exact,
    /// The exact variance-decomposition identity (lambda = 1).
    Identity,
    /// Closed-form moments of the all-ones sequence.
    Allones,
    /// Monte Carlo moment estimates.
    Montecarlo,
    /// Exact all-ones variance against its closed-form bound.
    Compare,
}

#[derive(Args)]
struct SearchArgs {
    #[arg(long)]
    n: u32,
    #[arg(long, default_value_t = 1)]
    m: u32,
    #[arg(long, default_value_t = 1)]
    k: u32,
    #[arg(long, default_value = "1")]
    lambda: String,
    /// Largest entry bound tried.
    #[arg(long)]
    mmax: String,
    #[arg(long)]
    budget_nodes: Option<u64>,
    #[arg(long, value_enum, default_value_t = StrategyArg::Linear)]
    strategy: StrategyArg,
    /// Write the found witness as a sequence file.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum StrategyArg {
    Linear,
    Bisect,
}

#[derive(Args)]
struct ReportArgs {
    /// Input CSV files.
    inputs: Vec<PathBuf>,
    /// Write the merged table here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

struct Globals {
    seed: u64,
    budget_seconds: Option<u64>,
    format: Format,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    init_threads(cli.threads);
    if cli.version {
        let gate = if coefficient_gate() { "pass" } else { "fail" };
        println!("symdist {}", env!("CARGO_PKG_VERSION"));
        println!("coefficient-identity: {gate}");
        return ExitCode::SUCCESS;
    }
    let Some(cmd) = cli.cmd else {
        eprintln!("error: a subcommand is required (see --help)");
        return ExitCode::from(2);
    };
    let globals = Globals {
        seed: cli.seed,
        budget_seconds: cli.budget_seconds,
        format: cli.format,
    };
    let outcome = match cmd {
        Cmd::Verify(a) => cmd_verify(a, &globals),
        Cmd::Eval(a) => cmd_eval(a, &globals),
        Cmd::Bounds(a) => cmd_bounds(a, &globals),
        Cmd::Construct(a) => cmd_construct(a, &globals),
        Cmd::Stats(a) => cmd_stats(a, &globals),
        Cmd::Search(a) => cmd_search(a, &globals),
        Cmd::Report(a) => cmd_report(a, &globals),
    };
    match outcome {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_for(&e))
        }
    }
}

fn init_threads(flag: Option<usize>) {
    let n = flag.or_else(|| {
        std::env::var("SYMDIST_THREADS")
            .ok()
            .and_then(|v| v.parse().ok())
    });
    if let Some(n) = n {
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global();
    }
}

fn exit_for(e: &Error) -> u8 {
    match e {
        Error::BudgetExceeded { .. }
        | Error::MemoryBudgetExceeded { .. }
        | Error::RetriesExhausted { .. } => 3,
        Error::IdentityViolated { .. } => 1,
        _ => 2,
    }
}

/// Self-check printed by --version: the exact variance decomposition must
/// balance on fixed pseudo-random instances for degrees 1..=3.
fn coefficient_gate() -> bool {
    (1..=3u32).all(|m| {
        let n = 2 * m + 2;
        let Ok(p) = ProblemParams::new(n, 1, m, Rat::from_integer(Int::from(1))) else {
            return false;
        };
        let mut rng = rng_from(derive_seed(0xC0EF_1DE7, m as u64));
        let vals = (0..n)
            .map(|_| Int::from(one_to(&mut rng, &BigUint::from(97u32))))
            .collect();
        let Ok(seq) = Sequence::from_scalars(p, vals, None) else {
            return false;
        };
        matches!(coefficient_identity(&seq, None), Ok(r) if r.lhs == r.rhs)
    })
}

fn emit(csv: &Csv, format: Format) {
    match format {
        Format::Csv => print!("{}", csv.render()),
        Format::Json => {
            let rows: Vec<serde_json::Value> = csv
                .rows
                .iter()
                .map(|row| {
                    let mut obj = serde_json::Map::new();
                    for (h, c) in csv.header.iter().zip(row) {
                        obj.insert(h.clone(), serde_json::Value::String(c.clone()));
                    }
                    serde_json::Value::Object(obj)
                })
                .collect();
            println!(
                "{}",
                serde_json::to_string_pretty(&serde_json::Value::Array(rows)).expect("json")
            );
        }
    }
}

fn parse_params(n: u32, k: u32, m: u32, lambda: &str) -> Result<ProblemParams> {
    ProblemParams::new(n, k, m, parse_ratio(lambda)?)
}

fn parse_int(s: &str) -> Result<Int> {
    s.parse::<Int>()
        .map_err(|_| Error::Parse(format!("not an integer: {s:?}")))
}

fn indices_cell(s: &symdist::SubsetRef) -> String {
    let parts: Vec<String> = s.to_indices().iter().map(|i| i.to_string()).collect();
    parts.join(";")
}

fn coords_cell<T: Scalar>(v: &[T]) -> String {
    let parts: Vec<String> = v.iter().map(|c| c.format_scalar()).collect();
    parts.join(";")
}

fn rat_cell(r: &Rat) -> String {
    format_rat_auto(r, VALUE_DIGITS)
}

/// Writes a sequence file and re-reads it, insisting on byte identity.
fn save_checked<T: Scalar>(seq: &Sequence<T>, path: &Path) -> Result<()> {
    let text = sequence_to_json(seq);
    fs::write(path, &text)?;
    let echoed = match any_from_json(&fs::read_to_string(path)?)? {
        AnySequence::Int(s) => sequence_to_json(&s),
        AnySequence::Rat(s) => sequence_to_json(&s),
    };
    if echoed != text {
        return Err(Error::Io(format!(
            "sequence file round-trip mismatch at {}",
            path.display()
        )));
    }
    Ok(())
}

fn cmd_verify(a: VerifyArgs, g: &Globals) -> Result<u8> {
    let opts = VerifyOptions {
        mode: match a.mode {
            ModeArg::Exact => VerifyMode::Exact,
            ModeArg::Real => VerifyMode::RealSpacing,
        },
        min_size: a.min_size,
        memory_budget: a.memory_budget,
        chunked: a.chunked,
        early_exit: a.early_exit,
    };
    match load_any(&a.input)? {
        AnySequence::Int(s) => {
            let r = if a.mitm {
                mitm_verify(&s)?
            } else {
                verify_distinct(&s, &opts)?
            };
            report_verify(&s, &r, g)
        }
        AnySequence::Rat(s) => {
            if a.mitm {
                return Err(Error::HypothesisViolated(
                    "the meet-in-the-middle engine needs integer entries".into(),
                ));
            }
            let r = verify_distinct(&s, &opts)?;
            report_verify(&s, &r, g)
        }
    }
}

fn report_verify<T: Scalar>(
    seq: &Sequence<T>,
    r: &VerificationResult<T>,
    g: &Globals,
) -> Result<u8> {
    let p = seq.params();
    let mode = match r.mode {
        VerifyMode::Exact => "exact",
        VerifyMode::RealSpacing => "realSpacing",
    };
    let status = if r.distinct { "pass" } else { "fail" };
    let (wa, wb, va, vb) = match &r.witness {
        Some(w) => (
            indices_cell(&w.a),
            indices_cell(&w.b),
            coords_cell(&w.value_a),
            coords_cell(&w.value_b),
        ),
        None => Default::default(),
    };
    let mut csv = Csv::new(&VERIFY_HEADER);
    csv.push(vec![
        "verify".into(),
        p.n().to_string(),
        p.k().to_string(),
        p.m().to_string(),
        format_ratio(p.lambda()),
        mode.into(),
        status.into(),
        r.compared.to_string(),
        wa,
        wb,
        va,
        vb,
    ]);
    emit(&csv, g.format);
    Ok(if r.distinct { 0 } else { 1 })
}

fn parse_subset(spec: &str, n: u32) -> Result<Vec<u32>> {
    let mut out = Vec::new();
    for part in spec.split(',') {
        let i: u32 = part
            .trim()
            .parse()
            .map_err(|_| Error::Parse(format!("bad subset index {part:?}")))?;
        if i < 1 || i > n {
            return Err(Error::IndexOutOfRange { index: i, n });
        }
        if let Some(&last) = out.last() {
            if i <= last {
                return Err(Error::Parse(
                    "subset indices must be strictly increasing".into(),
                ));
            }
        }
        out.push(i);
    }
    Ok(out)
}

fn cmd_eval(a: EvalArgs, g: &Globals) -> Result<u8> {
    fn run<T: Scalar>(seq: &Sequence<T>, spec: Option<&str>, g: &Globals) -> Result<u8> {
        let p = seq.params();
        let indices = match spec {
            Some(s) => parse_subset(s, p.n())?,
            None => (1..=p.n()).collect(),
        };
        let subset = symdist::SubsetRef::from_sorted(&indices);
        let value = eval_subset(seq, &subset)?;
        let mut csv = Csv::new(&EVAL_HEADER);
        csv.push(vec![
            "eval".into(),
            p.n().to_string(),
            p.k().to_string(),
            p.m().to_string(),
            format_ratio(p.lambda()),
            indices_cell(&subset),
            coords_cell(&value),
        ]);
        emit(&csv, g.format);
        Ok(0)
    }
    match load_any(&a.input)? {
        AnySequence::Int(s) => run(&s, a.subset.as_deref(), g),
        AnySequence::Rat(s) => run(&s, a.subset.as_deref(), g),
    }
}

fn cmd_bounds(a: BoundsArgs, g: &Globals) -> Result<u8> {
    let mut csv = Csv::new(&BOUNDS_HEADER);
    if let Some(m_max) = a.constants {
        for row in constants_table(m_max)? {
            for (name, value) in [
                ("variance_route_constant", row.variance_route),
                ("packing_route_constant", row.packing_route),
            ] {
                let v = BoundValue::Enclosure(value);
                csv.push(vec![
                    name.into(),
                    "0".into(),
                    "1".into(),
                    row.m.to_string(),
                    "1/1".into(),
                    Side::Lower.as_str().into(),
                    "false".into(),
                    v.decimal(VALUE_DIGITS),
                    v.log2_decimal(symdist::report::LOG2_DIGITS),
                ]);
            }
        }
        emit(&csv, g.format);
        return Ok(0);
    }
    let p = parse_params(a.n, a.k, a.m, &a.lambda)?;
    let mut reports = vec![pigeonhole_lower(&p)?];
    if a.k == 1 {
        reports.push(variance_lower_small(a.n, a.m)?);
    }
    reports.push(variance_lower_general(&p, a.real_spacing)?);
    reports.push(allones_variance_bound(a.n, a.m, p.lambda())?);
    match prob_upper(&p) {
        Ok(r) => reports.push(r),
        Err(Error::HypothesisViolated(_)) => {}
        Err(e) => return Err(e),
    }
    reports.push(prob_upper_full(a.n, a.m, a.k)?);
    if let Some(b) = &a.bound {
        reports.push(variance_upper_sequence(&p, &parse_int(b)?)?);
    }
    for r in &reports {
        for row in bound_rows(r) {
            csv.push(row);
        }
    }
    emit(&csv, g.format);
    Ok(0)
}

fn ceil_to_int(v: &BoundValue) -> Int {
    let r = match v {
        BoundValue::Exact(r) => r.clone(),
        BoundValue::Enclosure(i) => i.hi().clone(),
    };
    r.ceil().to_integer()
}

fn cmd_construct(a: ConstructArgs, g: &Globals) -> Result<u8> {
    let lambda = parse_ratio(&a.lambda)?;
    let need_eps = || {
        a.epsilon
            .as_deref()
            .ok_or_else(|| Error::Parse("--epsilon is required for this kind".into()))
            .and_then(parse_ratio)
    };
    let mut row = vec![
        "construct".into(),
        String::new(),
        a.n.to_string(),
        a.k.to_string(),
        a.m.to_string(),
        format_ratio(&lambda),
        String::new(),
        String::new(),
        String::new(),
        a.out.display().to_string(),
    ];
    match a.kind {
        KindArg::Real => {
            let eps = need_eps()?;
            let seq = construct_real(a.n, a.m, &eps)?;
            save_checked(&seq, &a.out)?;
            row[1] = "real".into();
            row[6] = format_ratio(&eps);
            row[7] = seq.bound().map(|b| b.format_scalar()).unwrap_or_default();
        }
        KindArg::Integer => {
            let eps = need_eps()?;
            let seq = construct_integer(a.n, a.m, &eps)?;
            save_checked(&seq, &a.out)?;
            row[1] = "integer".into();
            row[6] = format_ratio(&eps);
            row[7] = seq.bound().map(|b| b.format_scalar()).unwrap_or_default();
        }
        KindArg::Probabilistic => {
            let p = parse_params(a.n, a.k, a.m, &a.lambda)?;
            let m_bound = match &a.bound {
                Some(b) => parse_int(b)?,
                None => {
                    let report = if p.lambda() < &parse_ratio("1/2")? {
                        prob_upper(&p)?
                    } else {
                        prob_upper_full(a.n, a.m, a.k)?
                    };
                    ceil_to_int(&report.value)
                }
            };
            let recipe = ProbRecipe {
                m_bound: m_bound.clone(),
                overshoot: a.overshoot,
                max_retries: a.retries,
                seed: g.seed,
            };
            let (seq, log) = construct_probabilistic(&p, &recipe)?;
            save_checked(&seq, &a.out)?;
            let sidecar = a.out.with_extension("repair.json");
            let mut text =
                serde_json::to_string_pretty(&log).map_err(|e| Error::Io(e.to_string()))?;
            text.push('\n');
            fs::write(&sidecar, text)?;
            row[1] = "probabilistic".into();
            row[7] = m_bound.to_string();
            row[8] = log.attempts.len().to_string();
        }
    }
    let mut csv = Csv::new(&CONSTRUCT_HEADER);
    csv.push(row);
    emit(&csv, g.format);
    Ok(0)
}

fn stats_row(
    op: &str,
    n: u32,
    k: u32,
    m: u32,
    lambda: &Rat,
    mu: String,
    sigma2: String,
    bound: String,
    ratio: String,
    samples: String,
    stderr: String,
    seed: String,
) -> Vec<String> {
    vec![
        op.into(),
        n.to_string(),
        k.to_string(),
        m.to_string(),
        format_ratio(lambda),
        mu,
        sigma2,
        bound,
        ratio,
        samples,
        stderr,
        seed,
    ]
}

fn mu_cell(r: &MomentReport) -> String {
    let parts: Vec<String> = r.mu.iter().map(rat_cell).collect();
    parts.join(";")
}

fn cmd_stats(a: StatsArgs, g: &Globals) -> Result<u8> {
    let need_input = || {
        a.input
            .clone()
            .ok_or_else(|| Error::Parse("--in is required for this op".into()))
    };
    let need_nm = || match (a.n, a.m) {
        (Some(n), Some(m)) => Ok((n, m)),
        _ => Err(Error::Parse("--n and --m are required for this op".into())),
    };
    let mut csv = Csv::new(&STATS_HEADER);
    match a.op {
        StatsOp::Exact => {
            let path = need_input()?;
            fn run<T: Scalar>(
                seq: &Sequence<T>,
                min_size: u32,
                budget: Option<u64>,
                csv: &mut Csv,
            ) -> Result<()> {
                let p = seq.params();
                let r = exact_moments(seq, p.lambda(), min_size, budget)?;
                csv.push(stats_row(
                    "exact_moments",
                    p.n(),
                    p.k(),
                    p.m(),
                    p.lambda(),
                    mu_cell(&r),
                    rat_cell(&r.sigma2),
                    String::new(),
                    String::new(),
                    r.family_count.to_string(),
                    String::new(),
                    String::new(),
                ));
                Ok(())
            }
            match load_any(&path)? {
                AnySequence::Int(s) => run(&s, a.min_size, a.budget_nodes, &mut csv)?,
                AnySequence::Rat(s) => run(&s, a.min_size, a.budget_nodes, &mut csv)?,
            }
        }
        StatsOp::Identity => {
            let path = need_input()?;
            fn run<T: Scalar>(seq: &Sequence<T>, budget: Option<u64>, csv: &mut Csv) -> Result<()> {
                let p = seq.params();
                let r = coefficient_identity(seq, budget)?;
                csv.push(stats_row(
                    "coefficient_identity",
                    p.n(),
                    p.k(),
                    p.m(),
                    p.lambda(),
                    String::new(),
                    rat_cell(&r.lhs),
                    rat_cell(&r.rhs),
                    "1".into(),
                    String::new(),
                    String::new(),
                    String::new(),
                ));
                Ok(())
            }
            match load_any(&path)? {
                AnySequence::Int(s) => run(&s, a.budget_nodes, &mut csv)?,
                AnySequence::Rat(s) => run(&s, a.budget_nodes, &mut csv)?,
            }
        }
        StatsOp::Allones => {
            let (n, m) = need_nm()?;
            let lambda = parse_ratio(&a.lambda)?;
            let r = allones_exact(n, m, &lambda)?;
            csv.push(stats_row(
                "allones_exact",
                n,
                1,
                m,
                &lambda,
                mu_cell(&r),
                rat_cell(&r.sigma2),
                String::new(),
                String::new(),
                r.family_count.to_string(),
                String::new(),
                String::new(),
            ));
        }
        StatsOp::Montecarlo => {
            let path = need_input()?;
            fn run<T: Scalar>(
                seq: &Sequence<T>,
                samples: u64,
                seed: u64,
                csv: &mut Csv,
            ) -> Result<()> {
                let p = seq.params();
                let r = montecarlo_moments(seq, p.lambda(), samples, seed)?;
                csv.push(stats_row(
                    "montecarlo_moments",
                    p.n(),
                    p.k(),
                    p.m(),
                    p.lambda(),
                    mu_cell(&r),
                    rat_cell(&r.sigma2),
                    String::new(),
                    String::new(),
                    samples.to_string(),
                    r.stderr.as_ref().map(rat_cell).unwrap_or_default(),
                    seed.to_string(),
                ));
                Ok(())
            }
            match load_any(&path)? {
                AnySequence::Int(s) => run(&s, a.samples, g.seed, &mut csv)?,
                AnySequence::Rat(s) => run(&s, a.samples, g.seed, &mut csv)?,
            }
        }
        StatsOp::Compare => {
            let (n, m) = need_nm()?;
            let lambda = parse_ratio(&a.lambda)?;
            let r = bound_comparison(n, m, &lambda)?;
            csv.push(stats_row(
                "bound_comparison",
                n,
                1,
                m,
                &lambda,
                String::new(),
                rat_cell(&r.exact_sigma2),
                r.bound.decimal(VALUE_DIGITS),
                r.ratio.to_decimal(15),
                String::new(),
                String::new(),
                String::new(),
            ));
        }
    }
    emit(&csv, g.format);
    Ok(0)
}

fn cmd_search(a: SearchArgs, g: &Globals) -> Result<u8> {
    let p = parse_params(a.n, a.k, a.m, &a.lambda)?;
    let m_max = parse_int(&a.mmax)?;
    let budget = Budget {
        max_nodes: a.budget_nodes,
        max_wall: g.budget_seconds.map(Duration::from_secs),
    };
    let strategy = match a.strategy {
        StrategyArg::Linear => Strategy::Linear,
        StrategyArg::Bisect => Strategy::Bisect,
    };
    let out = min_m_search(&p, &m_max, &budget, strategy)?;
    // Scheduling-dependent diagnostics stay off the report stream.
    eprintln!(
        "nodesExpanded={} wallTimeMs={}",
        out.nodes_expanded,
        out.wall_time.as_millis()
    );
    if let (Some(w), Some(path)) = (&out.witness, &a.out) {
        save_checked(w, path)?;
    }
    match g.format {
        Format::Csv => {
            let mut csv = Csv::new(&SEARCH_HEADER);
            csv.push(vec![
                "min_m_search".into(),
                a.n.to_string(),
                a.k.to_string(),
                a.m.to_string(),
                format_ratio(p.lambda()),
                out.status.as_str().into(),
                out.m_min
                    .as_ref()
                    .map(|v| v.to_string())
                    .unwrap_or_default(),
                String::new(),
            ]);
            emit(&csv, Format::Csv);
        }
        Format::Json => {
            let mut obj = serde_json::Map::new();
            obj.insert("op".into(), "min_m_search".into());
            obj.insert("n".into(), a.n.into());
            obj.insert("k".into(), a.k.into());
            obj.insert("m".into(), a.m.into());
            obj.insert("lambda".into(), format_ratio(p.lambda()).into());
            obj.insert("status".into(), out.status.as_str().into());
            obj.insert(
                "mMin".into(),
                match &out.m_min {
                    Some(v) => v.to_string().into(),
                    None => serde_json::Value::Null,
                },
            );
            obj.insert(
                "witness".into(),
                match &out.witness {
                    Some(w) => {
                        let elems: Vec<serde_json::Value> = w
                            .elements()
                            .iter()
                            .map(|e| {
                                e.0.iter()
                                    .map(|c| serde_json::Value::String(c.format_scalar()))
                                    .collect::<Vec<_>>()
                                    .into()
                            })
                            .collect();
                        elems.into()
                    }
                    None => serde_json::Value::Null,
                },
            );
            println!(
                "{}",
                serde_json::to_string_pretty(&serde_json::Value::Object(obj)).expect("json")
            );
        }
    }
    Ok(match out.status {
        SearchStatus::Found => 0,
        SearchStatus::InfeasibleUpTo => 1,
        SearchStatus::BudgetExceeded => 3,
    })
}

fn cmd_report(a: ReportArgs, g: &Globals) -> Result<u8> {
    if a.inputs.is_empty() {
        return Err(Error::Parse("report needs at least one input CSV".into()));
    }
    let mut tables = Vec::with_capacity(a.inputs.len());
    for path in &a.inputs {
        tables.push(Csv::parse(&fs::read_to_string(path)?)?);
    }
    let merged = merge_reports(&tables)?;
    match &a.out {
        Some(path) => fs::write(path, merged.render())?,
        None => emit(&merged, g.format),
    }
    Ok(0)
}
