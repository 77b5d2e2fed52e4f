//! Command-line interface: find / check / oracle / gen / bench.
//!
//! Exit codes: 0 success, 1 input or verification failure, 2 hypothesis
//! (outdegree) violation, 3 enumeration cap exceeded.

use std::fmt;
use std::fs;
use std::io::Write as _;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};

use heavycycle::certificate::verify_raw;
use heavycycle::digraph::WeightedDigraph;
use heavycycle::generators::GenSpec;
use heavycycle::heavy::{
    find_heavy_cycle_traced_with_tolerance, find_heavy_cycle_with_tolerance, HeavyCycleError,
    DEFAULT_TOLERANCE,
};
use heavycycle::io::{parse_certificate, parse_edge_list, write_certificate, write_edge_list};
use heavycycle::oracle::{max_weight_cycle, OracleError, DEFAULT_CYCLE_CAP};

const ORACLE_CAP_ENV: &str = "HEAVYCYCLE_ORACLE_CAP";

#[derive(Parser)]
#[command(
    name = "heavycycle",
    version,
    about = "Heavy directed cycles with certificates"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Find a cycle of weight >= 1/log2(n+r) and print its certificate.
    Find(FindArgs),
    /// Re-verify a certificate against its graph.
    Check(CheckArgs),
    /// Exact maximum-weight cycle by exhaustive enumeration (small n).
    Oracle(OracleArgs),
    /// Generate a seeded instance as an edge-list file.
    Gen(GenArgs),
    /// Sweep seeded instances and emit a CSV of bounds vs. achieved weight.
    Bench(BenchArgs),
}

#[derive(Args)]
struct FindArgs {
    /// Edge-list input file.
    input: PathBuf,
    /// Print the reduction step stack to stderr.
    #[arg(long)]
    trace: bool,
    /// Slack for the outdegree precondition and the bound check.
    #[arg(long, default_value_t = DEFAULT_TOLERANCE)]
    tolerance: f64,
}

#[derive(Args)]
struct CheckArgs {
    /// Edge-list graph file.
    graph: PathBuf,
    /// Certificate file produced by `find`.
    certificate: PathBuf,
}

#[derive(Args)]
struct OracleArgs {
    /// Edge-list input file.
    input: PathBuf,
    /// Cycle-count cap (default: HEAVYCYCLE_ORACLE_CAP or 10^7).
    #[arg(long)]
    cap: Option<usize>,
}

#[derive(Args)]
struct GenArgs {
    #[command(subcommand)]
    family: GenFamily,
    /// Output file (stdout when omitted).
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum GenFamily {
    /// Each vertex: k out-neighbors (self allowed), outdegree exactly 1.
    Normalized {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Every vertex looped with weight eps, rest of the unit outdegree
    /// on a seeded ring.
    Loopheavy {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        eps: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Loopless, every out-degree exactly d, all weights 1.
    Unweighted {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        d: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Chain of strongly connected blocks; only the sink block matters.
    Layered {
        #[arg(long)]
        layers: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Args)]
struct BenchArgs {
    /// Instance family: normalized | loopheavy | unweighted | layered.
    #[arg(long)]
    family: String,
    /// Sweep values: vertex counts (or layer counts for `layered`).
    #[arg(long, value_delimiter = ',', required = true)]
    n: Vec<usize>,
    /// Out-neighbors per vertex for `normalized`.
    #[arg(long, default_value_t = 2)]
    k: usize,
    /// Loop weight for `loopheavy`.
    #[arg(long, default_value_t = 0.2)]
    eps: f64,
    /// Out-degree for `unweighted`.
    #[arg(long, default_value_t = 2)]
    d: usize,
    /// Seeds per sweep value.
    #[arg(long, default_value_t = 10)]
    seeds: u64,
    #[arg(long, default_value_t = 1)]
    base_seed: u64,
    /// Largest n for which the exact oracle column is computed.
    #[arg(long, default_value_t = 10)]
    oracle_limit: usize,
    /// Cycle-count cap for the oracle column.
    #[arg(long)]
    cap: Option<usize>,
    /// Output CSV file (stdout when omitted).
    #[arg(long)]
    out: Option<PathBuf>,
}

enum CliError {
    Input(String),
    CheckFailed(String),
    Precondition(String),
    Cap(String),
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Input(m)
            | CliError::CheckFailed(m)
            | CliError::Precondition(m)
            | CliError::Cap(m) => write!(f, "{}", m),
        }
    }
}

impl CliError {
    fn exit_code(&self) -> i32 {
        match self {
            CliError::Input(_) | CliError::CheckFailed(_) => 1,
            CliError::Precondition(_) => 2,
            CliError::Cap(_) => 3,
        }
    }
}

fn from_heavy_error(e: HeavyCycleError) -> CliError {
    match e {
        HeavyCycleError::PreconditionViolated { .. } | HeavyCycleError::DegenerateSize { .. } => {
            CliError::Precondition(e.to_string())
        }
        other => CliError::Input(other.to_string()),
    }
}

fn from_oracle_error(e: OracleError) -> CliError {
    match e {
        OracleError::CapExceeded { .. } => CliError::Cap(e.to_string()),
        OracleError::NoCycle => CliError::Precondition(e.to_string()),
    }
}

fn read_file(path: &PathBuf) -> Result<String, CliError> {
    fs::read_to_string(path)
        .map_err(|e| CliError::Input(format!("cannot read {}: {}", path.display(), e)))
}

fn read_graph(path: &PathBuf) -> Result<WeightedDigraph, CliError> {
    let text = read_file(path)?;
    parse_edge_list(&text).map_err(|e| CliError::Input(format!("{}: {}", path.display(), e)))
}

fn write_output(out: &Option<PathBuf>, content: &str) -> Result<(), CliError> {
    match out {
        Some(path) => fs::write(path, content)
            .map_err(|e| CliError::Input(format!("cannot write {}: {}", path.display(), e))),
        None => {
            print!("{}", content);
            std::io::stdout().flush().ok();
            Ok(())
        }
    }
}

fn resolve_cap(flag: Option<usize>) -> usize {
    flag.or_else(|| {
        std::env::var(ORACLE_CAP_ENV)
            .ok()
            .and_then(|v| v.parse().ok())
    })
    .unwrap_or(DEFAULT_CYCLE_CAP)
}

fn main() {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Find(args) => cmd_find(args),
        Command::Check(args) => cmd_check(args),
        Command::Oracle(args) => cmd_oracle(args),
        Command::Gen(args) => cmd_gen(args),
        Command::Bench(args) => cmd_bench(args),
    };
    if let Err(err) = result {
        eprintln!("error: {}", err);
        std::process::exit(err.exit_code());
    }
}

fn cmd_find(args: FindArgs) -> Result<(), CliError> {
    let g = read_graph(&args.input)?;
    let cert = if args.trace {
        let (cert, trace) =
            find_heavy_cycle_traced_with_tolerance(&g, args.tolerance).map_err(from_heavy_error)?;
        eprintln!("reduction steps ({}):", trace.steps.len());
        for (i, step) in trace.steps.iter().enumerate() {
            eprintln!("  {:>3}: {}", i + 1, step);
        }
        cert
    } else {
        find_heavy_cycle_with_tolerance(&g, args.tolerance).map_err(from_heavy_error)?
    };
    print!("{}", write_certificate(&cert));
    if !cert.valid {
        return Err(CliError::Precondition(format!(
            "cycle weight {} misses the bound {}",
            cert.achieved, cert.bound
        )));
    }
    Ok(())
}

fn cmd_check(args: CheckArgs) -> Result<(), CliError> {
    let g = read_graph(&args.graph)?;
    let text = read_file(&args.certificate)?;
    let raw = parse_certificate(&text)
        .map_err(|e| CliError::Input(format!("{}: {}", args.certificate.display(), e)))?;
    match verify_raw(&g, &raw) {
        Ok(()) => {
            println!(
                "certificate OK: weight {} >= bound {}",
                raw.achieved, raw.bound
            );
            Ok(())
        }
        Err(failure) => Err(CliError::CheckFailed(format!(
            "certificate rejected: {}",
            failure
        ))),
    }
}

fn cmd_oracle(args: OracleArgs) -> Result<(), CliError> {
    let g = read_graph(&args.input)?;
    let cap = resolve_cap(args.cap);
    let (cycle, weight) = max_weight_cycle(&g, cap).map_err(from_oracle_error)?;
    println!("weight {:.16e}", weight);
    let seq: Vec<String> = cycle
        .vertex_sequence()
        .iter()
        .map(|v| v.to_string())
        .collect();
    println!("cycle {}", seq.join(" "));
    Ok(())
}

fn cmd_gen(args: GenArgs) -> Result<(), CliError> {
    let spec = match args.family {
        GenFamily::Normalized { n, k, seed } => GenSpec::NormalizedRandom { n, k, seed },
        GenFamily::Loopheavy { n, eps, seed } => GenSpec::LoopHeavy { n, eps, seed },
        GenFamily::Unweighted { n, d, seed } => GenSpec::UnweightedOutdegreeD { n, d, seed },
        GenFamily::Layered { layers, seed } => GenSpec::LayeredSink { layers, seed },
    };
    let g = spec.build().map_err(|e| CliError::Input(e.to_string()))?;
    write_output(&args.out, &write_edge_list(&g))
}

fn cmd_bench(args: BenchArgs) -> Result<(), CliError> {
    let cap = resolve_cap(args.cap);
    let mut csv = String::from(
        "family,n,r,seed,bound_guarantee,bound_conjectured,bound_cuberoot,achieved_algorithm,oracle_max,runtime_ms\n",
    );
    for &size in &args.n {
        for offset in 0..args.seeds {
            let seed = args.base_seed + offset;
            let spec = match args.family.as_str() {
                "normalized" => GenSpec::NormalizedRandom {
                    n: size,
                    k: args.k.min(size),
                    seed,
                },
                "loopheavy" => GenSpec::LoopHeavy {
                    n: size,
                    eps: args.eps,
                    seed,
                },
                "unweighted" => GenSpec::UnweightedOutdegreeD {
                    n: size,
                    d: args.d,
                    seed,
                },
                "layered" => GenSpec::LayeredSink { layers: size, seed },
                other => return Err(CliError::Input(format!("unknown family `{}`", other))),
            };
            let g = spec.build().map_err(|e| CliError::Input(e.to_string()))?;
            let n = g.vertex_count();
            let r = g.loop_count();
            let started = Instant::now();
            let cert =
                find_heavy_cycle_with_tolerance(&g, DEFAULT_TOLERANCE).map_err(from_heavy_error)?;
            let runtime_ms = started.elapsed().as_secs_f64() * 1e3;
            let bound_guarantee = 1.0 / ((n + r) as f64).log2();
            let bound_conjectured = if n >= 2 {
                format!("{:.10e}", 2.0 / (n as f64).log2())
            } else {
                String::new()
            };
            let bound_cuberoot = (24.0 * n as f64).powf(-1.0 / 3.0);
            let oracle_max = if n <= args.oracle_limit {
                match max_weight_cycle(&g, cap) {
                    Ok((_, w)) => format!("{:.16e}", w),
                    Err(OracleError::CapExceeded { .. }) => String::new(),
                    Err(e) => return Err(from_oracle_error(e)),
                }
            } else {
                String::new()
            };
            csv.push_str(&format!(
                "{},{},{},{},{:.10e},{},{:.10e},{:.16e},{},{:.3}\n",
                spec.family_name(),
                n,
                r,
                seed,
                bound_guarantee,
                bound_conjectured,
                bound_cuberoot,
                cert.achieved,
                oracle_max,
                runtime_ms
            ));
        }
    }
    write_output(&args.out, &csv)
}
