//! Parallel execution of the two heap-construction phases.
//!
//! Both phases decompose into predefined subtasks that depend only on the
//! sizes (n, ns, nl), never on the values being partitioned. Construction
//! proceeds level-synchronously from the deepest internal level to the root:
//! within a level the downheap calls touch disjoint subtrees and run
//! concurrently, and a barrier (scope join) separates levels, so the result
//! and the merged per-worker counters are bit-identical to a sequential run
//! for every worker count. The exchange phase is not parallelized.

use std::ops::Range;
use std::thread;
use std::time::Instant;

use crate::counters::{OpCounters, Phase};
use crate::heap::{downheap_large_at, downheap_small_at, floor_lg, DualHeapView, Element, Elems};

/// Unchecked view of the shared element array. Tasks within one level write
/// only the slots of their own nodes' subtrees, which are disjoint between
/// same-level nodes, and the scope join between levels orders all writes of
/// a level before any read of the next, so concurrent access never races.
#[derive(Clone, Copy)]
struct RawElems {
    ptr: *mut Element,
    len: usize,
}

unsafe impl Send for RawElems {}
unsafe impl Sync for RawElems {}

impl RawElems {
    fn new(data: &mut [Element]) -> RawElems {
        RawElems {
            ptr: data.as_mut_ptr(),
            len: data.len(),
        }
    }
}

impl Elems for RawElems {
    #[inline]
    fn get(&self, i: usize) -> Element {
        debug_assert!(i < self.len);
        unsafe { *self.ptr.add(i) }
    }

    #[inline]
    fn set(&mut self, i: usize, v: Element) {
        debug_assert!(i < self.len);
        unsafe { *self.ptr.add(i) = v }
    }
}

/// Which heap a schedule drives.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Side {
    /// Whole-array min-heap, node k <-> data[k-1].
    Whole {
        n: usize,
    },
    Small {
        ns: usize,
    },
    Large {
        ns: usize,
        nl: usize,
    },
}

impl Side {
    fn downheap(self, e: &mut RawElems, k: usize, c: &mut OpCounters) {
        match self {
            Side::Whole { n } => downheap_large_at(e, 0, n, k, c),
            Side::Small { ns } => downheap_small_at(e, ns, k, c),
            Side::Large { ns, nl } => downheap_large_at(e, ns, nl, k, c),
        }
    }
}

/// One tree level of a schedule: disjoint 1-based node ranges covering the
/// level's internal nodes, at most one range per worker.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LevelPlan {
    pub level: u32,
    pub ranges: Vec<Range<usize>>,
}

/// Worker granularity floor: a level with fewer nodes than this many per
/// worker runs on one worker, since barrier overhead dominates tiny levels.
const MIN_NODES_PER_WORKER: usize = 4;

fn levels_for_heap(m: usize, workers: usize) -> Vec<LevelPlan> {
    let internal = m / 2;
    if internal == 0 {
        return Vec::new();
    }
    let deepest = floor_lg(internal);
    let mut levels = Vec::with_capacity(deepest as usize + 1);
    for level in (0..=deepest).rev() {
        let start = 1usize << level;
        let end = ((1usize << (level + 1)) - 1).min(internal) + 1;
        let count = end - start;
        let mut ranges = Vec::new();
        if workers <= 1 || count < MIN_NODES_PER_WORKER * workers {
            ranges.push(start..end);
        } else {
            let base = count / workers;
            let extra = count % workers;
            let mut at = start;
            for w in 0..workers {
                let len = base + usize::from(w < extra);
                ranges.push(at..at + len);
                at += len;
            }
            debug_assert_eq!(at, end);
        }
        levels.push(LevelPlan { level, ranges });
    }
    levels
}

/// Level-synchronous schedule for the construction phases, derived only from
/// the sizes (n, ns, nl) and the worker count.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParallelPlan {
    pub workers: usize,
    whole: Vec<LevelPlan>,
    small: Vec<LevelPlan>,
    large: Vec<LevelPlan>,
    workers_small: usize,
    workers_large: usize,
}

impl ParallelPlan {
    pub fn new(n: usize, ns: usize, nl: usize, workers: usize) -> ParallelPlan {
        assert!(workers >= 1);
        assert_eq!(ns + nl, n);
        let internal_small = ns / 2;
        let internal_large = nl / 2;
        // split the worker budget between the two independent phase-2 builds
        let (workers_small, workers_large) = if workers <= 1 {
            (1, 1)
        } else if internal_small == 0 {
            (1, workers)
        } else if internal_large == 0 {
            (workers, 1)
        } else {
            let ws = (workers * internal_small / (internal_small + internal_large))
                .clamp(1, workers - 1);
            (ws, workers - ws)
        };
        ParallelPlan {
            workers,
            whole: levels_for_heap(n, workers),
            small: levels_for_heap(ns, workers_small),
            large: levels_for_heap(nl, workers_large),
            workers_small,
            workers_large,
        }
    }

    pub fn whole_levels(&self) -> &[LevelPlan] {
        &self.whole
    }

    pub fn small_levels(&self) -> &[LevelPlan] {
        &self.small
    }

    pub fn large_levels(&self) -> &[LevelPlan] {
        &self.large
    }
}

/// Per-worker busy time of one parallel build, for load-balance reporting.
#[derive(Clone, Debug, Default)]
pub struct ParallelStats {
    pub worker_busy_ns: Vec<u64>,
}

impl ParallelStats {
    /// Max/min busy-time ratio across workers that did any work.
    pub fn balance_ratio(&self) -> Option<f64> {
        let busy: Vec<u64> = self
            .worker_busy_ns
            .iter()
            .copied()
            .filter(|&b| b > 0)
            .collect();
        let max = *busy.iter().max()?;
        let min = *busy.iter().min()?;
        Some(max as f64 / min as f64)
    }
}

fn run_range(mut e: RawElems, side: Side, range: Range<usize>, phase: Phase) -> (OpCounters, u64) {
    let mut c = OpCounters::new();
    c.set_phase(phase);
    let started = Instant::now();
    // descending matches the sequential decrement order; within a level the
    // order is immaterial since the subtrees are disjoint
    for k in range.rev() {
        side.downheap(&mut e, k, &mut c);
    }
    (c, started.elapsed().as_nanos() as u64)
}

/// Run every level of `levels`, deepest first, merging worker counters in
/// range order after each level's join.
fn run_side(
    levels: &[LevelPlan],
    e: RawElems,
    side: Side,
    phase: Phase,
    busy: &mut [u64],
) -> OpCounters {
    let mut merged = OpCounters::new();
    merged.set_phase(phase);
    for level in levels {
        if level.ranges.len() == 1 {
            let (c, ns_busy) = run_range(e, side, level.ranges[0].clone(), phase);
            merged.absorb(&c);
            busy[0] += ns_busy;
        } else {
            let results: Vec<(OpCounters, u64)> = thread::scope(|s| {
                let handles: Vec<_> = level
                    .ranges
                    .iter()
                    .map(|r| {
                        let range = r.clone();
                        s.spawn(move || run_range(e, side, range, phase))
                    })
                    .collect();
                handles.into_iter().map(|h| h.join().unwrap()).collect()
            });
            for (w, (c, ns_busy)) in results.into_iter().enumerate() {
                merged.absorb(&c);
                busy[w] += ns_busy;
            }
        }
    }
    merged
}

/// Phase 1 on `plan.workers` workers. The resulting sequence and the merged
/// counters are identical to [`crate::heap::build_whole_heap`].
pub fn build_whole_heap_parallel(
    data: &mut [Element],
    counters: &mut OpCounters,
    plan: &ParallelPlan,
) -> ParallelStats {
    let phase = counters.phase();
    if plan.workers <= 1 {
        crate::heap::build_whole_heap(data, counters);
        return ParallelStats::default();
    }
    let n = data.len();
    let e = RawElems::new(data);
    let mut busy = vec![0u64; plan.workers];
    let merged = run_side(&plan.whole, e, Side::Whole { n }, phase, &mut busy);
    counters.absorb(&merged);
    ParallelStats {
        worker_busy_ns: busy,
    }
}

/// Phase 2 on `plan.workers` workers: the two heap constructions run as
/// independent tasks (one per worker group), each level-parallel inside.
/// Output contract as for [`build_whole_heap_parallel`].
pub fn build_split_heaps_parallel(
    view: &mut DualHeapView<'_>,
    counters: &mut OpCounters,
    plan: &ParallelPlan,
) -> ParallelStats {
    let phase = counters.phase();
    if plan.workers <= 1 {
        view.build_split_heaps(counters);
        return ParallelStats::default();
    }
    let (data, ns, nl) = view.parts();
    let e = RawElems::new(data);
    let mut busy_large = vec![0u64; plan.workers_large];
    let ((merged_small, mut busy_small), merged_large) = thread::scope(|s| {
        let small = s.spawn(|| {
            let mut busy = vec![0u64; plan.workers_small];
            let c = run_side(&plan.small, e, Side::Small { ns }, phase, &mut busy);
            (c, busy)
        });
        let large = run_side(
            &plan.large,
            e,
            Side::Large { ns, nl },
            phase,
            &mut busy_large,
        );
        (small.join().unwrap(), large)
    });
    // sequential order: small heap first, then large
    counters.absorb(&merged_small);
    counters.absorb(&merged_large);
    busy_small.extend_from_slice(&busy_large);
    ParallelStats {
        worker_busy_ns: busy_small,
    }
}
