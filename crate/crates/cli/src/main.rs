//! Command-line front end: evaluation, enumeration, complexity sweeps,
//! pair numberings, mass tables, sampling, and rank-frequency fitting.
//!
//! Every command is deterministic given its flags and seed; worker counts
//! only partition work, never change output bytes. Exit codes: 0 success,
//! 2 parse errors, 3 domain errors, 4 horizon errors.

use clap::{Args, Parser, Subcommand, ValueEnum};
use opgraph::complexity::{value_complexity_table_parallel, Exactness, Horizon, SweepWorld};
use opgraph::context::{AdmissibleContext, LibEntry};
use opgraph::eval::{eval_traced, EvalOutcome, Fuel, Value};
use opgraph::levin::{mass_table_parallel, sample, MassTable, GENERATOR_ID};
use opgraph::numbering::{check_bounds, PairNumbering, RateSequence};
use opgraph::text;
use opgraph::zipf::{
    fit_power_law, fit_power_law_auto, numeral_profile, parse_corpus_tsv, rank_frequency,
    FitMethod, PowerLawFit, RankedCorpus,
};
use serde_json::{json, Value as Json};
use std::collections::BTreeMap;
use std::path::PathBuf;
use std::process::ExitCode;

const EXIT_PARSE: u8 = 2;
const EXIT_DOMAIN: u8 = 3;
const EXIT_HORIZON: u8 = 4;

#[derive(Parser)]
#[command(name = "opgraph", version, about = "Operator-graph program workbench")]
struct Cli {
    /// Emit machine-readable error diagnostics on stderr as JSON.
    #[arg(long, global = true)]
    json_errors: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct ContextArgs {
    /// Register constant oracle tables `id ↦ {() ↦ id}` for ids `1..=N`.
    /// Defaults: 0 for `eval` and `enum`, 4096 for `k`, `kp`, `levin`.
    #[arg(long)]
    numerals: Option<u32>,
    /// Program files loaded into the library, addresses in order from 1.
    #[arg(long)]
    lib: Vec<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate a program on an argument tuple.
    Eval {
        /// Program text inline.
        #[arg(long, conflicts_with = "file")]
        inline: Option<String>,
        /// Program text file.
        #[arg(long)]
        file: Option<PathBuf>,
        /// Comma-separated argument components (empty for nullary).
        #[arg(long, default_value = "")]
        args: String,
        #[arg(long, default_value_t = 10_000)]
        fuel: u64,
        #[arg(long, default_value_t = (1u64 << 63) - 1)]
        value_cap: u64,
        #[command(flatten)]
        ctx: ContextArgs,
    },
    /// Enumerate the program world in shortlex order as a rank table.
    Enum {
        #[arg(long, default_value_t = 28)]
        max_bits: u32,
        /// Emit at most this many ranks.
        #[arg(long, default_value_t = 100_000)]
        limit: u64,
        #[command(flatten)]
        ctx: ContextArgs,
    },
    /// Minimal-rank complexity of integers (index and bit forms).
    K(KArgs),
    /// Prefix-code complexity of integers; same sweep, prefix accounting.
    Kp(KArgs),
    /// Pair-numbering ranks, inverses, and rank-bound reports.
    Pairing {
        #[command(subcommand)]
        op: PairingOp,
    },
    /// Build the truncated a-priori mass table as TSV.
    Levin {
        #[arg(long, default_value_t = 28)]
        max_bits: u32,
        #[arg(long, default_value_t = 10_000)]
        fuel: u64,
        #[arg(long, default_value_t = 1)]
        workers: usize,
        #[command(flatten)]
        ctx: ContextArgs,
    },
    /// Draw a corpus from a mass table.
    Sample {
        /// Mass-table TSV produced by `levin`.
        #[arg(long)]
        table: PathBuf,
        #[arg(long, default_value_t = 100_000)]
        n: u64,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        /// Restrict sampling to the heaviest values.
        #[arg(long, default_value_t = 512)]
        top: usize,
    },
    /// Fit a power law to a token-count corpus.
    Zipf {
        #[arg(long)]
        corpus: PathBuf,
        #[arg(long, value_enum, default_value_t = MethodArg::Both)]
        method: MethodArg,
        /// First rank of the fit range; omit for automatic selection.
        #[arg(long)]
        rmin: Option<usize>,
        /// Last rank of the fit range (defaults to the corpus size).
        #[arg(long)]
        rmax: Option<usize>,
        /// Write per-rank log residuals as TSV.
        #[arg(long)]
        residuals: Option<PathBuf>,
    },
    /// Numeral-frequency profile of a corpus against a mass table.
    Numerals {
        #[arg(long)]
        corpus: PathBuf,
        /// TSV mapping `token<TAB>integer`.
        #[arg(long)]
        map: PathBuf,
        #[arg(long)]
        table: PathBuf,
        #[arg(long, default_value_t = 2.0)]
        peak_factor: f64,
    },
}

#[derive(Args)]
struct KArgs {
    /// Smallest integer of the queried range.
    #[arg(long, default_value_t = 1)]
    min: u64,
    /// Largest integer of the queried range.
    #[arg(long, default_value_t = 64)]
    max: u64,
    #[arg(long, default_value_t = 28)]
    max_bits: u32,
    #[arg(long, default_value_t = 100_000)]
    max_ranks: u64,
    #[arg(long, default_value_t = 10_000)]
    fuel: u64,
    #[arg(long, default_value_t = 1)]
    workers: usize,
    #[command(flatten)]
    ctx: ContextArgs,
}

#[derive(Subcommand)]
enum PairingOp {
    /// Rank of the pair `(k, l)`.
    Rank {
        #[arg(long)]
        k: u64,
        #[arg(long)]
        l: u64,
        #[arg(long, value_enum, default_value_t = SeqArg::Square)]
        r_seq: SeqArg,
        #[arg(long, default_value_t = 100_000)]
        horizon: u64,
    },
    /// Pair of the given rank.
    Unrank {
        #[arg(long)]
        rank: u64,
        #[arg(long, value_enum, default_value_t = SeqArg::Square)]
        r_seq: SeqArg,
        #[arg(long, default_value_t = 100_000)]
        horizon: u64,
    },
    /// Sweep the rank bounds and report the worst ratio.
    Bounds {
        #[arg(long, value_enum, default_value_t = SeqArg::Square)]
        r_seq: SeqArg,
        #[arg(long, default_value_t = 1_000)]
        max_value: u64,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum SeqArg {
    Square,
    Linear,
    LinearLogSq,
}

impl From<SeqArg> for RateSequence {
    fn from(s: SeqArg) -> Self {
        match s {
            SeqArg::Square => RateSequence::Square,
            SeqArg::Linear => RateSequence::Linear,
            SeqArg::LinearLogSq => RateSequence::LinearLogSq,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum MethodArg {
    Ls,
    Mle,
    Both,
}

struct CmdError {
    exit: u8,
    message: String,
}

impl CmdError {
    fn parse(message: impl Into<String>) -> Self {
        CmdError { exit: EXIT_PARSE, message: message.into() }
    }

    fn domain(message: impl Into<String>) -> Self {
        CmdError { exit: EXIT_DOMAIN, message: message.into() }
    }

    fn horizon(message: impl Into<String>) -> Self {
        CmdError { exit: EXIT_HORIZON, message: message.into() }
    }
}

fn metadata(command: &str, params: Json) -> Json {
    json!({
        "tool": "opgraph",
        "version": env!("CARGO_PKG_VERSION"),
        "command": command,
        "params": params,
    })
}

fn tsv_metadata(command: &str, params: &[(&str, String)]) -> String {
    let mut out = String::new();
    out.push_str(&format!("# tool\topgraph {}\n", env!("CARGO_PKG_VERSION")));
    out.push_str(&format!("# command\t{command}\n"));
    for (k, v) in params {
        out.push_str(&format!("# {k}\t{v}\n"));
    }
    out
}

fn read_file(path: &PathBuf) -> Result<String, CmdError> {
    std::fs::read_to_string(path)
        .map_err(|e| CmdError::parse(format!("cannot read {}: {e}", path.display())))
}

fn build_context(args: &ContextArgs, default_numerals: u32) -> Result<AdmissibleContext, CmdError> {
    let numerals = args.numerals.unwrap_or(default_numerals);
    let mut ctx = AdmissibleContext::with_numerals(numerals);
    for path in &args.lib {
        let src = read_file(path)?;
        let program = text::parse(&src)
            .map_err(|e| CmdError::parse(format!("library file {}: {e}", path.display())))?;
        ctx.push_library(LibEntry::Program(program));
    }
    Ok(ctx)
}

fn parse_args_list(list: &str) -> Result<Value, CmdError> {
    if list.trim().is_empty() {
        return Ok(Value::empty());
    }
    let mut components = Vec::new();
    for part in list.split(',') {
        let v: u64 = part
            .trim()
            .parse()
            .map_err(|_| CmdError::domain(format!("bad argument component '{part}'")))?;
        components.push(v);
    }
    Value::new(components).map_err(|e| CmdError::domain(e.to_string()))
}

#[allow(clippy::too_many_arguments)]
fn cmd_eval(
    inline: Option<String>,
    file: Option<PathBuf>,
    args: String,
    fuel: u64,
    value_cap: u64,
    ctx_args: ContextArgs,
) -> Result<(), CmdError> {
    let src = match (inline, file) {
        (Some(s), _) => s,
        (None, Some(p)) => read_file(&p)?,
        (None, None) => return Err(CmdError::parse("need --inline or --file")),
    };
    let program = text::parse(&src).map_err(|e| CmdError::parse(e.to_string()))?;
    let ctx = build_context(&ctx_args, 0)?;
    let value = parse_args_list(&args)?;
    let fuel = Fuel::new(fuel.max(1), value_cap.max(1));
    let (outcome, steps) =
        eval_traced(&program, &value, fuel, &ctx).map_err(|e| CmdError::domain(e.to_string()))?;
    let outcome_json = match outcome {
        EvalOutcome::Defined(v) => json!({"defined": v.components()}),
        EvalOutcome::UndefinedProven => json!({"undefined_proven": true}),
        EvalOutcome::FuelExhausted { steps_used, cause } => {
            json!({"fuel_exhausted": {"steps_used": steps_used, "cause": format!("{cause:?}")}})
        }
    };
    let doc = json!({
        "metadata": metadata("eval", json!({"fuel": fuel.budget, "value_cap": fuel.value_cap})),
        "arity": {"m": program.arity().m, "n": program.arity().n},
        "outcome": outcome_json,
        "steps_used": steps,
    });
    println!("{}", serde_json::to_string_pretty(&doc).unwrap());
    Ok(())
}

fn cmd_enum(max_bits: u32, limit: u64, ctx_args: ContextArgs) -> Result<(), CmdError> {
    let ctx = build_context(&ctx_args, 0)?;
    let world = SweepWorld::prepare(&ctx, Horizon::new(max_bits, limit));
    let mut out = tsv_metadata(
        "enum",
        &[
            ("max_bits", max_bits.to_string()),
            ("numerals", ctx_args.numerals.unwrap_or(0).to_string()),
            ("programs", world.enumeration.len().to_string()),
        ],
    );
    out.push_str("rank\tbits\tlen\tm\tn\tprogram\n");
    for (rank, code, program) in world.enumeration.iter().take(limit as usize) {
        let a = program.arity();
        out.push_str(&format!(
            "{}\t{}\t{}\t{}\t{}\t{}\n",
            rank.0,
            code,
            code.len(),
            a.m,
            a.n,
            text::serialize_compact(program)
        ));
    }
    print!("{out}");
    Ok(())
}

fn cmd_k(args: KArgs, prefix_form: bool) -> Result<(), CmdError> {
    let ctx = build_context(&args.ctx, 4096)?;
    let world = SweepWorld::prepare(&ctx, Horizon::new(args.max_bits, args.max_ranks));
    let fuel = Fuel::with_budget(args.fuel.max(1));
    let table = value_complexity_table_parallel(&world, &ctx, fuel, args.workers);
    let meta = metadata(
        if prefix_form { "kp" } else { "k" },
        json!({
            "max_bits": args.max_bits,
            "max_ranks": args.max_ranks,
            "fuel": args.fuel,
            "numerals": args.ctx.numerals.unwrap_or(4096),
            "scanned": table.scanned,
        }),
    );
    println!("{}", serde_json::to_string(&meta).unwrap());
    for x in args.min..=args.max {
        let row = match table.khat(x) {
            Ok(cv) => json!({
                "x": x,
                "index_form": cv.index_form,
                "bits_form": cv.bits_form,
                "witness_rank": cv.witness.0,
                "status": match cv.status {
                    Exactness::ExactAtHorizon => "exact-at-horizon",
                    Exactness::UpperBoundOnly => "upper-bound-only",
                },
            }),
            Err(_) => json!({"x": x, "status": "not-found-within-horizon"}),
        };
        println!("{}", serde_json::to_string(&row).unwrap());
    }
    Ok(())
}

fn cmd_pairing(op: PairingOp) -> Result<(), CmdError> {
    match op {
        PairingOp::Rank { k, l, r_seq, horizon } => {
            let seq: RateSequence = r_seq.into();
            if k == 0 || l == 0 {
                return Err(CmdError::domain("pair components start at 1"));
            }
            let table = PairNumbering::build(seq, u128::from(horizon));
            let rank = table.rank(k, l).map_err(|e| CmdError::horizon(e.to_string()))?;
            let doc = json!({
                "metadata": metadata("pairing rank", json!({"r_seq": seq.name(), "horizon": horizon})),
                "k": k, "l": l, "rank": rank,
            });
            println!("{}", serde_json::to_string_pretty(&doc).unwrap());
        }
        PairingOp::Unrank { rank, r_seq, horizon } => {
            let seq: RateSequence = r_seq.into();
            let table = PairNumbering::build(seq, u128::from(horizon));
            let (k, l) = table.unrank(rank).map_err(|e| CmdError::horizon(e.to_string()))?;
            let doc = json!({
                "metadata": metadata("pairing unrank", json!({"r_seq": seq.name(), "horizon": horizon})),
                "rank": rank, "k": k, "l": l,
            });
            println!("{}", serde_json::to_string_pretty(&doc).unwrap());
        }
        PairingOp::Bounds { r_seq, max_value } => {
            let seq: RateSequence = r_seq.into();
            let table = PairNumbering::build(seq, u128::from(max_value));
            let report = check_bounds(&table, u128::from(max_value))
                .map_err(|e| CmdError::domain(e.to_string()))?;
            let doc = json!({
                "metadata": metadata("pairing bounds", json!({"r_seq": seq.name(), "max_value": max_value})),
                "report": report,
            });
            println!("{}", serde_json::to_string_pretty(&doc).unwrap());
        }
    }
    Ok(())
}

fn cmd_levin(
    max_bits: u32,
    fuel: u64,
    workers: usize,
    ctx_args: ContextArgs,
) -> Result<(), CmdError> {
    let ctx = build_context(&ctx_args, 4096)?;
    let world = SweepWorld::prepare(&ctx, Horizon::bits(max_bits));
    let table = mass_table_parallel(&world, &ctx, Fuel::with_budget(fuel.max(1)), workers);
    let mut out = tsv_metadata(
        "levin",
        &[
            ("numerals", ctx_args.numerals.unwrap_or(4096).to_string()),
            ("generator", GENERATOR_ID.to_string()),
        ],
    );
    out.push_str(&table.to_tsv());
    print!("{out}");
    Ok(())
}

fn cmd_sample(table_path: PathBuf, n: u64, seed: u64, top: usize) -> Result<(), CmdError> {
    let text = read_file(&table_path)?;
    let table = MassTable::from_tsv(&text).map_err(|e| CmdError::parse(e.to_string()))?;
    if n == 0 {
        return Err(CmdError::domain("sample size must be at least 1"));
    }
    let support = table.top_support(top);
    let counts = sample(&support, n, seed).map_err(|e| CmdError::domain(e.to_string()))?;
    let mut out = tsv_metadata(
        "sample",
        &[
            ("generator", GENERATOR_ID.to_string()),
            ("seed", seed.to_string()),
            ("n", n.to_string()),
            ("top", top.to_string()),
        ],
    );
    out.push_str("token\tcount\n");
    for (value, count) in &counts {
        out.push_str(&format!("{value}\t{count}\n"));
    }
    print!("{out}");
    Ok(())
}

fn fit_to_json(fit: &PowerLawFit) -> Json {
    json!({
        "exponent": fit.exponent,
        "method": match fit.method {
            FitMethod::LsLogLog => "ls-loglog",
            FitMethod::DiscreteMle => "discrete-mle",
        },
        "r_min": fit.r_min,
        "r_max": fit.r_max,
        "ks_stat": fit.ks_stat,
        "log_amplitude": fit.log_amplitude,
    })
}

fn run_fit(
    ranked: &RankedCorpus,
    method: FitMethod,
    rmin: Option<usize>,
    rmax: Option<usize>,
) -> Result<PowerLawFit, CmdError> {
    let result = match rmin {
        Some(lo) => fit_power_law(ranked, method, lo, rmax.unwrap_or(ranked.len())),
        None => fit_power_law_auto(ranked, method),
    };
    result.map_err(|e| CmdError::domain(e.to_string()))
}

fn cmd_zipf(
    corpus: PathBuf,
    method: MethodArg,
    rmin: Option<usize>,
    rmax: Option<usize>,
    residuals: Option<PathBuf>,
) -> Result<(), CmdError> {
    let text = read_file(&corpus)?;
    let counts = parse_corpus_tsv(&text).map_err(|e| CmdError::parse(e.to_string()))?;
    let ranked = rank_frequency(&counts).map_err(|e| CmdError::domain(e.to_string()))?;
    let mut fits = Vec::new();
    match method {
        MethodArg::Ls => fits.push(run_fit(&ranked, FitMethod::LsLogLog, rmin, rmax)?),
        MethodArg::Mle => fits.push(run_fit(&ranked, FitMethod::DiscreteMle, rmin, rmax)?),
        MethodArg::Both => {
            fits.push(run_fit(&ranked, FitMethod::LsLogLog, rmin, rmax)?);
            fits.push(run_fit(&ranked, FitMethod::DiscreteMle, rmin, rmax)?);
        }
    }
    let deviations: Vec<Json> = fits
        .iter()
        .map(|f| {
            let d = opgraph::zipf::zipf_deviation(&ranked, f);
            json!({
                "method": fit_to_json(f)["method"],
                "max_abs_log_residual": d.max_abs_log_residual,
                "mean_abs_log_residual": d.mean_abs_log_residual,
            })
        })
        .collect();
    let doc = json!({
        "metadata": metadata("zipf", json!({"corpus_tokens": ranked.len(), "total": ranked.total})),
        "fits": fits.iter().map(fit_to_json).collect::<Vec<_>>(),
        "deviation": deviations,
    });
    println!("{}", serde_json::to_string_pretty(&doc).unwrap());
    if let Some(path) = residuals {
        let fit = &fits[0];
        let mut out = tsv_metadata("zipf residuals", &[("method", "first-fit".into())]);
        out.push_str("rank\tcount\tpredicted\tlog_residual\n");
        for r in fit.r_min..=fit.r_max.min(ranked.len()) {
            let c = ranked.count_at(r) as f64;
            let predicted = (fit.log_amplitude - fit.exponent * (r as f64).ln()).exp();
            out.push_str(&format!(
                "{r}\t{}\t{predicted:.6}\t{:.6}\n",
                ranked.count_at(r),
                c.ln() - predicted.ln()
            ));
        }
        std::fs::write(&path, out)
            .map_err(|e| CmdError::parse(format!("cannot write {}: {e}", path.display())))?;
    }
    Ok(())
}

fn cmd_numerals(
    corpus: PathBuf,
    map: PathBuf,
    table: PathBuf,
    peak_factor: f64,
) -> Result<(), CmdError> {
    let counts =
        parse_corpus_tsv(&read_file(&corpus)?).map_err(|e| CmdError::parse(e.to_string()))?;
    let ranked = rank_frequency(&counts).map_err(|e| CmdError::domain(e.to_string()))?;
    let map_text = read_file(&map)?;
    let mut numeral_map: BTreeMap<String, u64> = BTreeMap::new();
    for (i, line) in map_text.lines().enumerate() {
        if line.is_empty() || line.starts_with('#') || line == "token\tvalue" {
            continue;
        }
        let mut parts = line.split('\t');
        let token = parts.next().unwrap_or("");
        let value = parts.next().and_then(|v| v.parse::<u64>().ok()).ok_or_else(|| {
            CmdError::parse(format!("map line {}: expected token<TAB>integer", i + 1))
        })?;
        numeral_map.insert(token.to_string(), value);
    }
    let mass =
        MassTable::from_tsv(&read_file(&table)?).map_err(|e| CmdError::parse(e.to_string()))?;
    let report = numeral_profile(&ranked, &numeral_map, &mass, peak_factor)
        .map_err(|e| CmdError::domain(e.to_string()))?;
    let doc = json!({
        "metadata": metadata("numerals", json!({"peak_factor": peak_factor})),
        "report": report,
    });
    println!("{}", serde_json::to_string_pretty(&doc).unwrap());
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let json_errors = cli.json_errors;
    let result = match cli.command {
        Command::Eval { inline, file, args, fuel, value_cap, ctx } => {
            cmd_eval(inline, file, args, fuel, value_cap, ctx)
        }
        Command::Enum { max_bits, limit, ctx } => cmd_enum(max_bits, limit, ctx),
        Command::K(args) => cmd_k(args, false),
        Command::Kp(args) => cmd_k(args, true),
        Command::Pairing { op } => cmd_pairing(op),
        Command::Levin { max_bits, fuel, workers, ctx } => cmd_levin(max_bits, fuel, workers, ctx),
        Command::Sample { table, n, seed, top } => cmd_sample(table, n, seed, top),
        Command::Zipf { corpus, method, rmin, rmax, residuals } => {
            cmd_zipf(corpus, method, rmin, rmax, residuals)
        }
        Command::Numerals { corpus, map, table, peak_factor } => {
            cmd_numerals(corpus, map, table, peak_factor)
        }
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            if json_errors {
                eprintln!("{}", json!({"error": e.message, "exit_code": e.exit}));
            } else {
                eprintln!("error: {}", e.message);
            }
            ExitCode::from(e.exit)
        }
    }
}
