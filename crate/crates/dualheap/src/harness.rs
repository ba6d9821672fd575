//! Deterministic test-case generation, experiment sweeps, CSV output and the
//! verification runner behind the CLI. Everything downstream of a seed is a
//! pure function: the same config always produces the same records.

use std::fmt;
use std::io;
use std::path::{Path, PathBuf};
use std::time::Instant;

use crate::baselines::{kth_by_sort, quickselect, PivotRule};
use crate::counters::{OpCounters, Phase};
use crate::heap::{
    build_whole_heap, ceil_lg, default_treeswap_cap, dualheap_select, floor_lg, verify_partition,
    DualHeapView, Element, SelectError, SelectOptions,
};

/// Upper bound (exclusive) on generated element values.
pub const DEFAULT_VALUE_BOUND: i64 = 1 << 31;

/// One SplitMix64 step: returns the output value and the successor state.
pub fn rng_step(state: u64) -> (u64, u64) {
    let state = state.wrapping_add(0x9E37_79B9_7F4A_7C15);
    let mut z = state;
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    (z ^ (z >> 31), state)
}

/// SplitMix64 generator state; the sequence is a pure function of the seed.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RngState {
    state: u64,
}

impl RngState {
    pub fn new(seed: u64) -> RngState {
        RngState { state: seed }
    }

    pub fn next_value(&mut self) -> u64 {
        let (value, state) = rng_step(self.state);
        self.state = state;
        value
    }

    /// Uniform draw in `[1, bound]`.
    fn next_in(&mut self, bound: usize) -> usize {
        debug_assert!(bound >= 1);
        1 + (self.next_value() % bound as u64) as usize
    }
}

/// `n` pseudo-random elements in `[0, value_bound)`, fully determined by the
/// arguments.
pub fn generate_case(seed: u64, n: usize, value_bound: i64) -> Vec<Element> {
    assert!(value_bound >= 2);
    let mut rng = RngState::new(seed);
    (0..n)
        .map(|_| (rng.next_value() % value_bound as u64) as i64)
        .collect()
}

/// Per-trial seed: mixes (n, trial) into the base seed so any single record
/// is reproducible in isolation from its CSV row.
pub fn trial_seed(base_seed: u64, n: usize, trial: usize) -> u64 {
    let (mixed, _) = rng_step(
        base_seed
            .wrapping_add(0x1000 * n as u64)
            .wrapping_add(trial as u64),
    );
    base_seed ^ mixed
}

/// Algorithms the harness can run.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Algo {
    Dualheap,
    DualheapNoPhase1,
    Quickselect,
    QuickselectMedian3,
}

impl Algo {
    pub const ALL: [Algo; 4] = [
        Algo::Dualheap,
        Algo::DualheapNoPhase1,
        Algo::Quickselect,
        Algo::QuickselectMedian3,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Algo::Dualheap => "dualheap",
            Algo::DualheapNoPhase1 => "dualheap_nophase1",
            Algo::Quickselect => "quickselect",
            Algo::QuickselectMedian3 => "quickselect_median3",
        }
    }

    pub fn from_name(name: &str) -> Option<Algo> {
        Algo::ALL.into_iter().find(|a| a.name() == name)
    }
}

impl fmt::Display for Algo {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// How k is chosen for each n.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum KRule {
    /// k = floor(n/2), clamped to at least 1 so n = 1 stays legal.
    Half,
    Explicit(usize),
}

impl KRule {
    pub fn k_for(self, n: usize) -> usize {
        match self {
            KRule::Half => (n / 2).max(1),
            KRule::Explicit(k) => k,
        }
    }
}

/// Declarative benchmark sweep.
#[derive(Clone, Debug)]
pub struct ExperimentConfig {
    pub n_values: Vec<usize>,
    pub k_rule: KRule,
    pub trials_per_n: usize,
    pub base_seed: u64,
    pub algorithms: Vec<Algo>,
    pub workers: usize,
    pub treeswap_cap: Option<u64>,
    pub out_path: Option<PathBuf>,
    /// Fill `elapsed_ns` from a wall clock. Off by default so that the CSV
    /// bytes stay a pure function of the config.
    pub measure_time: bool,
}

impl ExperimentConfig {
    pub fn new(n_values: Vec<usize>) -> ExperimentConfig {
        ExperimentConfig {
            n_values,
            k_rule: KRule::Half,
            trials_per_n: 100,
            base_seed: 1,
            algorithms: Algo::ALL.to_vec(),
            workers: 1,
            treeswap_cap: None,
            out_path: None,
            measure_time: false,
        }
    }
}

/// One CSV row: a single (algorithm, n, trial) run.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TrialRecord {
    pub algo: Algo,
    pub n: usize,
    pub k: usize,
    pub seed: u64,
    pub comparisons: u64,
    pub moves: u64,
    pub promotions: u64,
    pub treeswaps_toplevel: u64,
    pub treeswaps_recursive: u64,
    pub max_treeswap_depth: u32,
    pub transfers: u64,
    pub phase1_comparisons: u64,
    pub phase1_moves: u64,
    pub phase2_comparisons: u64,
    pub phase2_moves: u64,
    pub phase3_comparisons: u64,
    pub phase3_moves: u64,
    pub elapsed_ns: u64,
    pub workers: usize,
}

impl TrialRecord {
    fn new(
        algo: Algo,
        n: usize,
        k: usize,
        seed: u64,
        c: &OpCounters,
        elapsed_ns: u64,
        workers: usize,
    ) -> TrialRecord {
        TrialRecord {
            algo,
            n,
            k,
            seed,
            comparisons: c.total_comparisons(),
            moves: c.total_moves(),
            promotions: c.total_promotions(),
            treeswaps_toplevel: c.treeswaps_toplevel,
            treeswaps_recursive: c.treeswaps_recursive,
            max_treeswap_depth: c.max_treeswap_depth,
            transfers: c.transfers,
            phase1_comparisons: c.comparisons(Phase::Phase1),
            phase1_moves: c.moves(Phase::Phase1),
            phase2_comparisons: c.comparisons(Phase::Phase2),
            phase2_moves: c.moves(Phase::Phase2),
            phase3_comparisons: c.comparisons(Phase::Phase3),
            phase3_moves: c.moves(Phase::Phase3),
            elapsed_ns,
            workers,
        }
    }

    pub fn total_ops(&self) -> u64 {
        self.comparisons + self.moves
    }
}

#[derive(Debug, thiserror::Error)]
pub enum HarnessError {
    #[error("invalid config: {0}")]
    Config(String),
    #[error("{algo} aborted on n={n} k={k} seed={seed}: {source}")]
    Run {
        algo: Algo,
        n: usize,
        k: usize,
        seed: u64,
        source: SelectError,
    },
    #[error("cannot write {path}: {source}")]
    Io { path: String, source: io::Error },
}

impl HarnessError {
    /// True when the underlying cause is an exceeded exchange-phase cap.
    pub fn is_cap_exceeded(&self) -> bool {
        matches!(
            self,
            HarnessError::Run {
                source: SelectError::CapExceeded { .. },
                ..
            }
        )
    }
}

fn checksum(data: &[Element]) -> u64 {
    let mut h = 0xcbf2_9ce4_8422_2325u64;
    for &v in data {
        h ^= v as u64;
        h = h.wrapping_mul(0x0000_0100_0000_01b3);
    }
    h
}

fn run_algo(
    algo: Algo,
    data: &mut [Element],
    k: usize,
    cap: Option<u64>,
    workers: usize,
) -> Result<(Element, OpCounters), SelectError> {
    match algo {
        Algo::Dualheap | Algo::DualheapNoPhase1 => {
            let opts = SelectOptions {
                skip_phase1: algo == Algo::DualheapNoPhase1,
                treeswap_cap: cap,
                parallel_workers: workers,
            };
            let sel = dualheap_select(data, k, &opts)?;
            Ok((sel.kth, sel.counters))
        }
        Algo::Quickselect | Algo::QuickselectMedian3 => {
            let rule = if algo == Algo::Quickselect {
                PivotRule::LastElement
            } else {
                PivotRule::MedianOfThree
            };
            let mut c = OpCounters::new();
            let kth = quickselect(data, k, rule, &mut c)?;
            Ok((kth, c))
        }
    }
}

/// Run the configured sweep. Every algorithm of a trial consumes an
/// identical copy of the same generated input; records appear in config
/// order (n, trial, algorithm).
pub fn run_trials(config: &ExperimentConfig) -> Result<Vec<TrialRecord>, HarnessError> {
    if config.n_values.is_empty() {
        return Err(HarnessError::Config("n_values must be non-empty".into()));
    }
    if config.trials_per_n < 1 {
        return Err(HarnessError::Config("trials_per_n must be >= 1".into()));
    }
    if config.workers < 1 {
        return Err(HarnessError::Config("workers must be >= 1".into()));
    }
    if let KRule::Explicit(k) = config.k_rule {
        for &n in &config.n_values {
            if k < 1 || k > n {
                return Err(HarnessError::Config(format!(
                    "explicit k={k} out of range for n={n}"
                )));
            }
        }
    }

    let mut records =
        Vec::with_capacity(config.n_values.len() * config.trials_per_n * config.algorithms.len());
    for &n in &config.n_values {
        let k = config.k_rule.k_for(n);
        for trial in 0..config.trials_per_n {
            let seed = trial_seed(config.base_seed, n, trial);
            let input = generate_case(seed, n, DEFAULT_VALUE_BOUND);
            let input_checksum = checksum(&input);
            for &algo in &config.algorithms {
                let mut data = input.clone();
                debug_assert_eq!(checksum(&data), input_checksum, "input copy drifted");
                let started = Instant::now();
                let (_, counters) =
                    run_algo(algo, &mut data, k, config.treeswap_cap, config.workers).map_err(
                        |source| HarnessError::Run {
                            algo,
                            n,
                            k,
                            seed,
                            source,
                        },
                    )?;
                let elapsed_ns = if config.measure_time {
                    started.elapsed().as_nanos() as u64
                } else {
                    0
                };
                records.push(TrialRecord::new(
                    algo,
                    n,
                    k,
                    seed,
                    &counters,
                    elapsed_ns,
                    config.workers,
                ));
            }
        }
    }
    Ok(records)
}

/// Canonical CSV column order; the counter names double as column names.
pub const CSV_HEADER: &str = "algo,n,k,seed,comparisons,moves,promotions,treeswaps_toplevel,\
treeswaps_recursive,max_treeswap_depth,transfers,phase1_comparisons,phase1_moves,\
phase2_comparisons,phase2_moves,phase3_comparisons,phase3_moves,elapsed_ns,workers";

/// Records as CSV text: header line plus one newline-terminated row per
/// record, plain decimal integers throughout.
pub fn render_csv(records: &[TrialRecord]) -> String {
    let mut out = String::with_capacity(64 + records.len() * 96);
    out.push_str(CSV_HEADER);
    out.push('\n');
    for r in records {
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{}\n",
            r.algo,
            r.n,
            r.k,
            r.seed,
            r.comparisons,
            r.moves,
            r.promotions,
            r.treeswaps_toplevel,
            r.treeswaps_recursive,
            r.max_treeswap_depth,
            r.transfers,
            r.phase1_comparisons,
            r.phase1_moves,
            r.phase2_comparisons,
            r.phase2_moves,
            r.phase3_comparisons,
            r.phase3_moves,
            r.elapsed_ns,
            r.workers,
        ));
    }
    out
}

pub fn write_csv(records: &[TrialRecord], path: &Path) -> Result<(), HarnessError> {
    std::fs::write(path, render_csv(records)).map_err(|source| HarnessError::Io {
        path: path.display().to_string(),
        source,
    })
}

/// One failed check in a verification run, with everything needed to
/// reproduce it.
#[derive(Clone, Debug)]
pub struct VerifyFailure {
    pub trial: usize,
    pub n: usize,
    pub k: usize,
    pub case_seed: u64,
    pub what: String,
}

/// Outcome of [`verify_run`]. Correctness failures decide pass/fail; the
/// bound tallies are measurements over every bottom-up construction and
/// every exchange phase the run performed.
#[derive(Clone, Debug, Default)]
pub struct VerifySummary {
    pub trials: usize,
    pub failures: Vec<VerifyFailure>,
    /// Bottom-up constructions observed (whole, small and large builds).
    pub constructions: u64,
    /// Constructions whose promotions exceeded m - floor(lg m) - 1. That
    /// bound is exact only for perfect trees (m = 2^j - 1); see
    /// `promotion_height_violations` for the sum-of-subtree-heights bound.
    pub promotion_bound_violations: u64,
    /// Constructions whose promotions exceeded m - ones(m), the exact
    /// sum-of-subtree-heights bound for any m.
    pub promotion_height_violations: u64,
    /// Runs whose recorded exchange depth exceeded 2*ceil(lg n) + 2.
    pub depth_bound_violations: u64,
    pub max_depth_seen: u32,
}

impl VerifySummary {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn report(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!(
            "verify: {} trials, {} failures\n",
            self.trials,
            self.failures.len()
        ));
        for f in self.failures.iter().take(20) {
            out.push_str(&format!(
                "  FAIL trial={} n={} k={} seed={}: {}\n",
                f.trial, f.n, f.k, f.case_seed, f.what
            ));
        }
        if self.failures.len() > 20 {
            out.push_str(&format!("  ... and {} more\n", self.failures.len() - 20));
        }
        out.push_str(&format!(
            "constructions: {} (promotions > m-floor(lg m)-1: {}, promotions > m-ones(m): {})\n",
            self.constructions, self.promotion_bound_violations, self.promotion_height_violations
        ));
        out.push_str(&format!(
            "exchange depth: max {} seen, {} bound violations\n",
            self.max_depth_seen, self.depth_bound_violations
        ));
        out.push_str(if self.passed() { "PASS\n" } else { "FAIL\n" });
        out
    }

    fn construction(&mut self, m: usize, promotions: u64) {
        if m == 0 {
            return;
        }
        self.constructions += 1;
        if promotions > (m as u64).saturating_sub(u64::from(floor_lg(m)) + 1) {
            self.promotion_bound_violations += 1;
        }
        if promotions > m as u64 - u64::from(m.count_ones()) {
            self.promotion_height_violations += 1;
        }
    }
}

/// Randomized oracle check: for each trial draw n in `[1, max_n]`, k in
/// `[1, n]` and a fresh case, run every algorithm plus the sort oracle,
/// and check agreement and the partition property of the dualheap outputs.
/// Also measures the promotion and exchange-depth bounds along the way.
pub fn verify_run(trials: usize, max_n: usize, seed: u64) -> VerifySummary {
    assert!(trials >= 1 && max_n >= 1);
    let mut rng = RngState::new(seed);
    let mut summary = VerifySummary {
        trials,
        ..VerifySummary::default()
    };

    for trial in 0..trials {
        let n = rng.next_in(max_n);
        let k = rng.next_in(n);
        let case_seed = rng.next_value();
        let input = generate_case(case_seed, n, DEFAULT_VALUE_BOUND);
        let expected = kth_by_sort(&input, k).expect("k validated");
        let ns = n - k;

        let fail = |what: String, failures: &mut Vec<VerifyFailure>| {
            failures.push(VerifyFailure {
                trial,
                n,
                k,
                case_seed,
                what,
            });
        };

        for algo in Algo::ALL {
            let mut data = input.clone();
            match run_algo(algo, &mut data, k, None, 1) {
                Ok((kth, counters)) => {
                    if kth != expected {
                        fail(
                            format!("{algo}: got {kth}, oracle says {expected}"),
                            &mut summary.failures,
                        );
                    }
                    if matches!(algo, Algo::Dualheap | Algo::DualheapNoPhase1) {
                        let report = verify_partition(&data, ns, expected);
                        if !report.ok {
                            fail(
                                format!(
                                    "{algo}: partition violated at index {:?}",
                                    report.first_violation
                                ),
                                &mut summary.failures,
                            );
                        }
                        summary.max_depth_seen =
                            summary.max_depth_seen.max(counters.max_treeswap_depth);
                        if counters.max_treeswap_depth > 2 * ceil_lg(n) + 2 {
                            summary.depth_bound_violations += 1;
                            fail(
                                format!(
                                    "{algo}: exchange depth {} exceeds 2*ceil(lg {n})+2",
                                    counters.max_treeswap_depth
                                ),
                                &mut summary.failures,
                            );
                        }
                    }
                }
                Err(e) => fail(format!("{algo}: {e}"), &mut summary.failures),
            }
        }

        // per-construction promotion accounting, phase by phase
        let mut data = input.clone();
        let mut c = OpCounters::new();
        c.set_phase(Phase::Phase1);
        build_whole_heap(&mut data, &mut c);
        summary.construction(n, c.promotions(Phase::Phase1));
        c.set_phase(Phase::Phase2);
        let mut view = DualHeapView::new(&mut data, ns);
        view.build_small_heap(&mut c);
        let after_small = c.promotions(Phase::Phase2);
        summary.construction(ns, after_small);
        view.build_large_heap(&mut c);
        summary.construction(k, c.promotions(Phase::Phase2) - after_small);
        c.set_phase(Phase::Phase3);
        view.exchange_phase(default_treeswap_cap(n), &mut c)
            .expect("exchange phase converges");
        if data[ns] != expected {
            fail(
                format!("composed phases: got {}, oracle says {expected}", data[ns]),
                &mut summary.failures,
            );
        }

        // the phase-1-skipping variant constructs straight from raw input
        let mut data = input.clone();
        let mut c = OpCounters::new();
        c.set_phase(Phase::Phase2);
        let mut view = DualHeapView::new(&mut data, ns);
        view.build_small_heap(&mut c);
        let after_small = c.promotions(Phase::Phase2);
        summary.construction(ns, after_small);
        view.build_large_heap(&mut c);
        summary.construction(k, c.promotions(Phase::Phase2) - after_small);
    }
    summary
}
