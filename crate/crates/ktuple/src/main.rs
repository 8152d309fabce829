//! Command-line front end: solving, sieving, benchmarking, verification, and
//! small inspection helpers around the library.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use ktuple::baselines::{
    eratosthenes_tuple, hensley_richards, primes_past_k, schinzel, shifted_greedy,
};
use ktuple::context::build_context;
use ktuple::primes::primes_up_to;
use ktuple::rals::{rals_solve, RalsConfig};
use ktuple::state::TupleState;
use ktuple::tuplefile::{read_tuple, write_tuple};
use ktuple::verify::{brute_force_optimal, full_verify};
use ktuple::{custom_context, default_search_bound, diameter_of};

#[derive(Parser)]
#[command(
    name = "ktuple",
    version,
    about = "Find, sieve and verify narrow admissible k-tuples",
    propagate_version = true
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the adaptive search and report the narrowest tuple found.
    #[command(after_help = "Prints a `k,diameter,seconds` summary line on success.\n\
        Trace CSV columns: iter,best_d,selected_v,op,accepted (accepted is 1/0).\n\
        Landscape CSV columns: v,f_v.\n\
        Config file: one key=value per line (T, regions, gamma, nt, nl, beta, level,\n\
        ni1, ni2, ns1, ns2, seed, U, preset); `#` starts a comment.\n\
        Precedence: flags > config file > preset > defaults.")]
    Solve(SolveArgs),
    /// Run one classical sieve construction.
    #[command(after_help = "Prints a `method,k,diameter,seconds` CSV record.")]
    Sieve(SieveArgs),
    /// Compare methods over several k values and runs.
    #[command(after_help = "CSV columns: method,k,runs,min_d,mean_d,mean_seconds,succ_rate.\n\
        succ_rate is filled for the rals method when --target is given, else empty.\n\
        Run r of a method uses seed `--seed + r`.")]
    Bench(BenchArgs),
    /// Check a tuple file against the full admissibility definition.
    Verify(VerifyArgs),
    /// Exhaustive minimum diameter for tiny k.
    #[command(after_help = "Prints the optimal diameter, then the witness tuple.")]
    Oracle(OracleArgs),
    /// Print the candidate pool and prime sets for a given k.
    SieveContext(SieveContextArgs),
    /// Apply local-search passes to the tuple in a file.
    #[command(after_help = "Prints a `k,diameter_in,diameter_out` summary line.")]
    Improve(ImproveArgs),
}

#[derive(Args)]
struct SolveArgs {
    /// Tuple size.
    #[arg(long)]
    k: usize,
    /// Iteration count.
    #[arg(long = "T")]
    iterations: Option<u64>,
    /// Start-region count.
    #[arg(long)]
    regions: Option<u32>,
    /// Random-selection probability.
    #[arg(long)]
    gamma: Option<f64>,
    /// Tournament size.
    #[arg(long)]
    nt: Option<u32>,
    /// Shift budget per shift search.
    #[arg(long)]
    nl: Option<u32>,
    /// Worsening-acceptance exponent.
    #[arg(long)]
    beta: Option<f64>,
    /// Insert-move level (0, 1 or 2).
    #[arg(long)]
    level: Option<u8>,
    /// Insert budget of the first local search.
    #[arg(long)]
    ni1: Option<u32>,
    /// Insert budget of the second local search (0 skips it).
    #[arg(long)]
    ni2: Option<u32>,
    /// Endpoints removed by the first local search.
    #[arg(long)]
    ns1: Option<u32>,
    /// Endpoints removed by the second local search.
    #[arg(long)]
    ns2: Option<u32>,
    /// Random seed (default 1, never from entropy).
    #[arg(long)]
    seed: Option<u64>,
    /// Search range override.
    #[arg(long = "U")]
    bound: Option<i64>,
    /// Run each insert level in isolation.
    #[arg(long)]
    strict_levels: bool,
    /// Treat the two local-search stages as insert levels 1 and 2.
    #[arg(long)]
    literal_levels: bool,
    /// Parameter preset to start from.
    #[arg(long, value_enum)]
    preset: Option<Preset>,
    /// Key=value parameter file.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Write the tuple here.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Write the per-step run log here.
    #[arg(long)]
    trace: Option<PathBuf>,
    /// Write the final start-value landscape here.
    #[arg(long)]
    landscape: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Preset {
    /// Conservative defaults.
    #[value(name = "basever", alias = "base")]
    Basever,
    /// Tuned defaults (more exploration, second search stage).
    Best,
}

impl Preset {
    fn config(self) -> RalsConfig {
        match self {
            Preset::Basever => RalsConfig::base(),
            Preset::Best => RalsConfig::best(),
        }
    }
}

#[derive(Args)]
struct SieveArgs {
    #[arg(long, value_enum)]
    method: Method,
    #[arg(long)]
    k: usize,
    /// Greedy threshold constant.
    #[arg(long, default_value_t = 1.0)]
    tau: f64,
    /// Fixed interval start for the shifted methods (default: scan).
    #[arg(long)]
    shift: Option<i64>,
    /// Write the tuple here.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Method {
    PrimesPastK,
    Eratosthenes,
    HensleyRichards,
    Schinzel,
    ShiftedSchinzel,
    ShiftedGreedy,
}

impl Method {
    fn name(self) -> &'static str {
        match self {
            Method::PrimesPastK => "primes-past-k",
            Method::Eratosthenes => "eratosthenes",
            Method::HensleyRichards => "hensley-richards",
            Method::Schinzel => "schinzel",
            Method::ShiftedSchinzel => "shifted-schinzel",
            Method::ShiftedGreedy => "shifted-greedy",
        }
    }

    fn run(self, k: usize, shift: Option<i64>, tau: f64) -> Vec<i64> {
        match self {
            Method::PrimesPastK => primes_past_k(k),
            Method::Eratosthenes => eratosthenes_tuple(k),
            Method::HensleyRichards => hensley_richards(k),
            Method::Schinzel => schinzel(k, false, None),
            Method::ShiftedSchinzel => schinzel(k, true, shift),
            Method::ShiftedGreedy => shifted_greedy(k, shift, tau),
        }
    }
}

#[derive(Args)]
struct BenchArgs {
    /// Comma-separated tuple sizes.
    #[arg(long = "k-list", value_delimiter = ',', required = true)]
    k_list: Vec<usize>,
    /// Comma-separated methods (default: all).
    #[arg(long, value_enum, value_delimiter = ',')]
    methods: Vec<BenchMethod>,
    /// Runs per (method, k).
    #[arg(long, default_value_t = 1)]
    runs: u32,
    /// Base seed; run r uses seed + r.
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Per-k target diameters for the success rate, aligned with --k-list.
    #[arg(long, value_delimiter = ',')]
    target: Vec<i64>,
    /// Iteration count for the rals method.
    #[arg(long = "T")]
    iterations: Option<u64>,
    /// Parameter preset for the rals method.
    #[arg(long, value_enum, default_value_t = Preset::Best)]
    preset: Preset,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum BenchMethod {
    Rals,
    PrimesPastK,
    Eratosthenes,
    HensleyRichards,
    Schinzel,
    ShiftedSchinzel,
    ShiftedGreedy,
}

impl BenchMethod {
    fn name(self) -> &'static str {
        match self {
            BenchMethod::Rals => "rals",
            BenchMethod::PrimesPastK => "primes-past-k",
            BenchMethod::Eratosthenes => "eratosthenes",
            BenchMethod::HensleyRichards => "hensley-richards",
            BenchMethod::Schinzel => "schinzel",
            BenchMethod::ShiftedSchinzel => "shifted-schinzel",
            BenchMethod::ShiftedGreedy => "shifted-greedy",
        }
    }

    fn all() -> Vec<BenchMethod> {
        vec![
            BenchMethod::Rals,
            BenchMethod::PrimesPastK,
            BenchMethod::Eratosthenes,
            BenchMethod::HensleyRichards,
            BenchMethod::Schinzel,
            BenchMethod::ShiftedSchinzel,
            BenchMethod::ShiftedGreedy,
        ]
    }
}

#[derive(Args)]
struct VerifyArgs {
    /// Tuple file to check.
    file: PathBuf,
    /// Expected tuple size.
    #[arg(long)]
    k: usize,
}

#[derive(Args)]
struct OracleArgs {
    #[arg(long)]
    k: usize,
    /// Largest diameter considered.
    #[arg(long)]
    cap: Option<i64>,
}

#[derive(Args)]
struct SieveContextArgs {
    #[arg(long)]
    k: usize,
    /// Search range override.
    #[arg(long = "U")]
    bound: Option<i64>,
}

#[derive(Args)]
struct ImproveArgs {
    /// Tuple file to improve.
    file: PathBuf,
    /// Local-search passes.
    #[arg(long, default_value_t = 100)]
    iterations: u32,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long, default_value_t = 2)]
    level: u8,
    /// Endpoints removed per pass.
    #[arg(long, default_value_t = 1)]
    ns: u32,
    /// Insert budget per pass.
    #[arg(long, default_value_t = 500)]
    ni: u32,
    /// Write the improved tuple here (default: summary only).
    #[arg(long)]
    out: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Solve(args) => cmd_solve(args),
        Command::Sieve(args) => cmd_sieve(args),
        Command::Bench(args) => cmd_bench(args),
        Command::Verify(args) => cmd_verify(args),
        Command::Oracle(args) => cmd_oracle(args),
        Command::SieveContext(args) => cmd_sieve_context(args),
        Command::Improve(args) => cmd_improve(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::FAILURE
        }
    }
}

/// Assemble the solver configuration: defaults, then preset, then config
/// file, then explicit flags, later layers winning.
fn build_solver_config(args: &SolveArgs) -> Result<RalsConfig> {
    let mut file_preset = None;
    let mut file_overrides = Vec::new();
    if let Some(path) = &args.config {
        (file_preset, file_overrides) = parse_config_file(path)?;
    }
    let mut cfg = file_preset.unwrap_or(Preset::Basever).config();
    if let Some(p) = args.preset {
        cfg = p.config();
    }
    for (key, value) in &file_overrides {
        apply_key(&mut cfg, key, value)
            .with_context(|| format!("config file key {key:?}"))?;
    }
    let flags = [
        ("T", args.iterations.map(|v| v.to_string())),
        ("regions", args.regions.map(|v| v.to_string())),
        ("gamma", args.gamma.map(|v| v.to_string())),
        ("nt", args.nt.map(|v| v.to_string())),
        ("nl", args.nl.map(|v| v.to_string())),
        ("beta", args.beta.map(|v| v.to_string())),
        ("level", args.level.map(|v| v.to_string())),
        ("ni1", args.ni1.map(|v| v.to_string())),
        ("ni2", args.ni2.map(|v| v.to_string())),
        ("ns1", args.ns1.map(|v| v.to_string())),
        ("ns2", args.ns2.map(|v| v.to_string())),
        ("seed", args.seed.map(|v| v.to_string())),
        ("U", args.bound.map(|v| v.to_string())),
    ];
    for (key, value) in flags {
        if let Some(value) = value {
            apply_key(&mut cfg, key, &value).expect("flag keys are well-formed");
        }
    }
    if args.strict_levels {
        cfg.strict_levels = true;
    }
    if args.literal_levels {
        cfg.literal_levels = true;
    }
    Ok(cfg)
}

fn parse_config_file(path: &Path) -> Result<(Option<Preset>, Vec<(String, String)>)> {
    let text = fs::read_to_string(path)
        .with_context(|| format!("reading config file {}", path.display()))?;
    let mut preset = None;
    let mut overrides = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| anyhow!("line {}: expected key=value, got {line:?}", i + 1))?;
        let (key, value) = (key.trim(), value.trim());
        if key == "preset" {
            preset = Some(
                Preset::from_str(value, true)
                    .map_err(|_| anyhow!("line {}: unknown preset {value:?}", i + 1))?,
            );
        } else {
            overrides.push((key.to_string(), value.to_string()));
        }
    }
    Ok((preset, overrides))
}

fn apply_key(cfg: &mut RalsConfig, key: &str, value: &str) -> Result<()> {
    fn parse<T: std::str::FromStr>(value: &str) -> Result<T> {
        value.parse().map_err(|_| anyhow!("bad value {value:?}"))
    }
    match key {
        "T" | "t" | "iterations" => cfg.iterations = parse(value)?,
        "regions" => cfg.regions = parse(value)?,
        "gamma" => cfg.gamma = parse(value)?,
        "nt" => cfg.tournament = parse(value)?,
        "nl" => cfg.max_shifts = parse(value)?,
        "beta" => cfg.beta = parse(value)?,
        "level" => cfg.level = parse(value)?,
        "ni1" => cfg.inserts_first = parse(value)?,
        "ni2" => cfg.inserts_second = parse(value)?,
        "ns1" => cfg.shrink_first = parse(value)?,
        "ns2" => cfg.shrink_second = parse(value)?,
        "seed" => cfg.seed = parse(value)?,
        "U" | "u" => cfg.bound = Some(parse(value)?),
        "strict_levels" => cfg.strict_levels = parse(value)?,
        "literal_levels" => cfg.literal_levels = parse(value)?,
        _ => bail!("unknown key"),
    }
    Ok(())
}

fn cmd_solve(args: SolveArgs) -> Result<()> {
    let cfg = build_solver_config(&args)?;
    let report = rals_solve(args.k, &cfg)?;
    full_verify(&report.tuple, args.k)
        .map_err(|e| anyhow!("result failed verification: {e}"))?;
    if let Some(path) = &args.out {
        write_tuple(path, &report.tuple)?;
    }
    if let Some(path) = &args.trace {
        let mut csv = String::from("iter,best_d,selected_v,op,accepted\n");
        for row in &report.trace {
            writeln!(
                csv,
                "{},{},{},{},{}",
                row.iteration,
                row.best_diameter,
                row.selected_start,
                row.op.as_str(),
                row.accepted as u8
            )
            .unwrap();
        }
        fs::write(path, csv)?;
    }
    if let Some(path) = &args.landscape {
        let mut csv = String::from("v,f_v\n");
        for (v, f) in &report.landscape {
            writeln!(csv, "{v},{f}").unwrap();
        }
        fs::write(path, csv)?;
    }
    println!("{},{},{:.3}", args.k, report.diameter, report.seconds);
    Ok(())
}

fn cmd_sieve(args: SieveArgs) -> Result<()> {
    let clock = Instant::now();
    let tuple = args.method.run(args.k, args.shift, args.tau);
    let seconds = clock.elapsed().as_secs_f64();
    full_verify(&tuple, args.k)
        .map_err(|e| anyhow!("{} produced an invalid tuple: {e}", args.method.name()))?;
    if let Some(path) = &args.out {
        write_tuple(path, &tuple)?;
    }
    println!("{},{},{},{:.3}", args.method.name(), args.k, diameter_of(&tuple), seconds);
    Ok(())
}

fn cmd_bench(args: BenchArgs) -> Result<()> {
    if !args.target.is_empty() && args.target.len() != args.k_list.len() {
        // Usage error, reported like a flag-parsing failure.
        clap::Error::raw(
            clap::error::ErrorKind::ValueValidation,
            "--target must list one diameter per entry of --k-list\n",
        )
        .exit();
    }
    let methods =
        if args.methods.is_empty() { BenchMethod::all() } else { args.methods.clone() };
    let mut cfg = args.preset.config();
    if let Some(t) = args.iterations {
        cfg.iterations = t;
    }
    println!("method,k,runs,min_d,mean_d,mean_seconds,succ_rate");
    for &method in &methods {
        for (i, &k) in args.k_list.iter().enumerate() {
            let mut diameters = Vec::new();
            let mut seconds = Vec::new();
            for run in 0..args.runs.max(1) {
                let clock = Instant::now();
                let tuple = match method {
                    BenchMethod::Rals => {
                        let cfg = cfg.clone().with_seed(args.seed + run as u64);
                        rals_solve(k, &cfg)?.tuple
                    }
                    BenchMethod::PrimesPastK => primes_past_k(k),
                    BenchMethod::Eratosthenes => eratosthenes_tuple(k),
                    BenchMethod::HensleyRichards => hensley_richards(k),
                    BenchMethod::Schinzel => schinzel(k, false, None),
                    BenchMethod::ShiftedSchinzel => schinzel(k, true, None),
                    BenchMethod::ShiftedGreedy => shifted_greedy(k, None, 1.0),
                };
                seconds.push(clock.elapsed().as_secs_f64());
                full_verify(&tuple, k)
                    .map_err(|e| anyhow!("{} k={k}: invalid tuple: {e}", method.name()))?;
                diameters.push(diameter_of(&tuple));
            }
            let n = diameters.len() as f64;
            let min = diameters.iter().min().unwrap();
            let mean = diameters.iter().sum::<i64>() as f64 / n;
            let mean_secs = seconds.iter().sum::<f64>() / n;
            let succ = if method == BenchMethod::Rals && !args.target.is_empty() {
                let hits = diameters.iter().filter(|&&d| d <= args.target[i]).count();
                format!("{:.3}", hits as f64 / n)
            } else {
                String::new()
            };
            println!("{},{k},{},{min},{mean:.1},{mean_secs:.3},{succ}", method.name(), diameters.len());
        }
    }
    Ok(())
}

fn cmd_verify(args: VerifyArgs) -> Result<()> {
    let tuple = read_tuple(&args.file)?;
    full_verify(&tuple, args.k).map_err(|e| anyhow!("{e}"))?;
    println!("ok: k={}, diameter={}", args.k, diameter_of(&tuple));
    Ok(())
}

fn cmd_oracle(args: OracleArgs) -> Result<()> {
    let cap = args.cap.unwrap_or_else(|| default_search_bound(args.k));
    let (d, tuple) = brute_force_optimal(args.k, cap)?;
    println!("{d}");
    println!("{}", join(&tuple));
    Ok(())
}

fn cmd_sieve_context(args: SieveContextArgs) -> Result<()> {
    let bound = args.bound.unwrap_or_else(|| default_search_bound(args.k));
    let ctx = build_context(args.k, bound)?;
    println!("k={} U={}", ctx.k(), ctx.bound());
    println!("sieve primes: {}", join(ctx.sieve_primes()));
    println!("exempt primes: {}", join(ctx.exempt_primes()));
    println!("active primes: {}", join(ctx.active_primes()));
    println!("candidates ({}, {:.3} of range): {}",
        ctx.candidates().len(),
        ctx.surviving_fraction(),
        join(ctx.candidates()),
    );
    Ok(())
}

fn cmd_improve(args: ImproveArgs) -> Result<()> {
    use rand::SeedableRng;
    let tuple = read_tuple(&args.file)?;
    let k = tuple.len();
    full_verify(&tuple, k).map_err(|e| anyhow!("input tuple is not admissible: {e}"))?;
    let d_in = diameter_of(&tuple);
    // Work on a plain unsieved pool around the tuple, shifted to start at 0.
    let offset = tuple[0];
    let shifted: Vec<i64> = tuple.iter().map(|v| v - offset).collect();
    let cap = default_search_bound(k).max(d_in * 3 / 2);
    let ctx = custom_context(k, (0..=cap).collect(), primes_up_to(k as i64))?;
    let mut state = TupleState::from_values(&ctx, &shifted);
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(args.seed);
    let mut best = shifted.clone();
    for _ in 0..args.iterations {
        ktuple::operators::local_search(&mut state, &mut rng, args.ns, args.ni, args.level, false);
        if state.diameter() < diameter_of(&best) {
            best = state.values().to_vec();
        }
    }
    let improved: Vec<i64> = best.iter().map(|v| v - best[0]).collect();
    full_verify(&improved, k).map_err(|e| anyhow!("improved tuple failed verification: {e}"))?;
    if let Some(path) = &args.out {
        write_tuple(path, &improved)?;
    }
    println!("{k},{d_in},{}", diameter_of(&improved));
    Ok(())
}

fn join(values: &[i64]) -> String {
    let mut out = String::new();
    for (i, v) in values.iter().enumerate() {
        if i > 0 {
            out.push(' ');
        }
        write!(out, "{v}").unwrap();
    }
    out
}
