//! Command-line driver: one-off selection, benchmark sweeps to CSV, and the
//! randomized verification runner.
//!
//! Exit codes: 0 success (verify: all checks passed), 1 verify found
//! failures, 2 usage error, 3 exchange-phase cap exceeded.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use dualheap::harness::{
    generate_case, run_trials, verify_run, write_csv, Algo, ExperimentConfig, KRule,
    DEFAULT_VALUE_BOUND,
};
use dualheap::{dualheap_select, Element, SelectError, SelectOptions};

#[derive(Parser)]
#[command(
    name = "dualheap",
    about = "Dualheap selection: instrumented k-th largest, benchmarks and verification"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Select the k-th largest of a generated or supplied input and print
    /// the answer with its operation counts
    Select {
        /// Input length for seeded generation (ignored with --input)
        #[arg(long)]
        n: Option<usize>,
        /// Rank to select, 1-based from the top
        #[arg(long)]
        k: usize,
        /// Seed for input generation
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Newline-delimited decimal 64-bit integers; overrides --n/--seed
        #[arg(long)]
        input: Option<PathBuf>,
        /// Run phase 2 directly on the raw input
        #[arg(long)]
        skip_phase1: bool,
        /// Workers for the heap-construction phases
        #[arg(long, default_value_t = 1)]
        parallel: usize,
        /// Override the exchange-phase iteration cap
        #[arg(long)]
        cap: Option<u64>,
    },
    /// Run a benchmark sweep and write one CSV row per (algorithm, n, trial)
    Bench {
        /// Comma-separated input lengths, e.g. 100,1000,10000
        #[arg(long = "n-list", value_delimiter = ',', required = true)]
        n_list: Vec<usize>,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Comma-separated subset of dualheap,dualheap_nophase1,quickselect,
        /// quickselect_median3, or "all"
        #[arg(long, default_value = "all")]
        algos: String,
        #[arg(long, default_value_t = 1)]
        parallel: usize,
        /// Select an explicit k instead of k = n/2
        #[arg(long)]
        k: Option<usize>,
        /// Fill elapsed_ns from a wall clock (makes the CSV nondeterministic)
        #[arg(long)]
        timing: bool,
        /// Override the exchange-phase iteration cap
        #[arg(long)]
        cap: Option<u64>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Cross-check every algorithm against the sort oracle on random cases
    Verify {
        #[arg(long, default_value_t = 1000)]
        trials: usize,
        #[arg(long = "max-n", default_value_t = 2000)]
        max_n: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
}

const EXIT_USAGE: u8 = 2;
const EXIT_CAP: u8 = 3;

fn usage_error(msg: &str) -> ExitCode {
    eprintln!("error: {msg}");
    ExitCode::from(EXIT_USAGE)
}

fn read_input_file(path: &PathBuf) -> Result<Vec<Element>, String> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| format!("cannot read {}: {e}", path.display()))?;
    let mut values = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let v: Element = line
            .parse()
            .map_err(|e| format!("{}:{}: {e}", path.display(), lineno + 1))?;
        values.push(v);
    }
    if values.is_empty() {
        return Err(format!("{}: no values", path.display()));
    }
    Ok(values)
}

fn cmd_select(
    n: Option<usize>,
    k: usize,
    seed: u64,
    input: Option<PathBuf>,
    skip_phase1: bool,
    parallel: usize,
    cap: Option<u64>,
) -> ExitCode {
    if parallel < 1 {
        return usage_error("--parallel must be >= 1");
    }
    if cap == Some(0) {
        return usage_error("--cap must be >= 1");
    }
    let mut data = match (&input, n) {
        (Some(path), _) => match read_input_file(path) {
            Ok(values) => values,
            Err(msg) => return usage_error(&msg),
        },
        (None, Some(n)) if n >= 1 => generate_case(seed, n, DEFAULT_VALUE_BOUND),
        (None, _) => return usage_error("either --input or --n >= 1 is required"),
    };
    let opts = SelectOptions {
        skip_phase1,
        treeswap_cap: cap,
        parallel_workers: parallel,
    };
    match dualheap_select(&mut data, k, &opts) {
        Ok(sel) => {
            let c = &sel.counters;
            println!("kth={}", sel.kth);
            println!(
                "comparisons={} moves={} promotions={} treeswaps_toplevel={} \
treeswaps_recursive={} max_treeswap_depth={} transfers={}",
                c.total_comparisons(),
                c.total_moves(),
                c.total_promotions(),
                c.treeswaps_toplevel,
                c.treeswaps_recursive,
                c.max_treeswap_depth,
                c.transfers
            );
            ExitCode::SUCCESS
        }
        Err(e @ SelectError::InvalidK { .. }) => usage_error(&e.to_string()),
        Err(e @ SelectError::CapExceeded { .. }) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_CAP)
        }
    }
}

fn parse_algos(spec: &str) -> Result<Vec<Algo>, String> {
    if spec == "all" {
        return Ok(Algo::ALL.to_vec());
    }
    let mut algos = Vec::new();
    for name in spec.split(',') {
        let name = name.trim();
        match Algo::from_name(name) {
            Some(a) if !algos.contains(&a) => algos.push(a),
            Some(_) => {}
            None => return Err(format!("unknown algorithm {name:?}")),
        }
    }
    if algos.is_empty() {
        return Err("empty algorithm list".into());
    }
    Ok(algos)
}

#[allow(clippy::too_many_arguments)]
fn cmd_bench(
    n_list: Vec<usize>,
    trials: usize,
    seed: u64,
    algos: String,
    parallel: usize,
    k: Option<usize>,
    timing: bool,
    cap: Option<u64>,
    out: PathBuf,
) -> ExitCode {
    let algorithms = match parse_algos(&algos) {
        Ok(a) => a,
        Err(msg) => return usage_error(&msg),
    };
    if n_list.iter().any(|&n| n < 1) {
        return usage_error("every n must be >= 1");
    }
    let config = ExperimentConfig {
        n_values: n_list,
        k_rule: k.map_or(KRule::Half, KRule::Explicit),
        trials_per_n: trials,
        base_seed: seed,
        algorithms,
        workers: parallel,
        treeswap_cap: cap,
        out_path: Some(out.clone()),
        measure_time: timing,
    };
    let records = match run_trials(&config) {
        Ok(records) => records,
        Err(e) if e.is_cap_exceeded() => {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_CAP);
        }
        Err(e) => return usage_error(&e.to_string()),
    };
    if let Err(e) = write_csv(&records, &out) {
        eprintln!("error: {e}");
        return ExitCode::FAILURE;
    }
    println!("wrote {} records to {}", records.len(), out.display());
    ExitCode::SUCCESS
}

fn cmd_verify(trials: usize, max_n: usize, seed: u64) -> ExitCode {
    if trials < 1 || max_n < 1 {
        return usage_error("--trials and --max-n must be >= 1");
    }
    let summary = verify_run(trials, max_n, seed);
    print!("{}", summary.report());
    if summary.passed() {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}

fn main() -> ExitCode {
    match Cli::parse().cmd {
        Cmd::Select {
            n,
            k,
            seed,
            input,
            skip_phase1,
            parallel,
            cap,
        } => cmd_select(n, k, seed, input, skip_phase1, parallel, cap),
        Cmd::Bench {
            n_list,
            trials,
            seed,
            algos,
            parallel,
            k,
            timing,
            cap,
            out,
        } => cmd_bench(n_list, trials, seed, algos, parallel, k, timing, cap, out),
        Cmd::Verify {
            trials,
            max_n,
            seed,
        } => cmd_verify(trials, max_n, seed),
    }
}
