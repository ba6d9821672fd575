//! The dualheap layout and the three-phase selection algorithm.
//!
//! One contiguous array holds two heaps with their roots adjacent at the
//! partition boundary: a max-heap of the `ns = n - k` smaller values,
//! stored mirrored so that its node `j` lives at `data[ns - j]`, and a
//! min-heap of the `nl = k` larger values with node `j` at `data[ns - 1 + j]`.
//! Both roots sit next to each other (`data[ns - 1]` and `data[ns]`), values
//! and indices increase in the same direction, and in each heap node `j` is
//! the parent of nodes `2j` and `2j + 1`.
//!
//! Selection runs three phases: a bottom-up min-heap construction over the
//! whole array (optional prearrangement), two bottom-up constructions that
//! split the array into the two heaps, and an exchange phase that swaps
//! subtrees between the heaps until the small root no longer exceeds the
//! large root. At that point `data[ns]` is the k-th largest element.

use crate::counters::{Counter, OpCounters, OpKind, Phase};
use crate::parallel::{build_split_heaps_parallel, build_whole_heap_parallel, ParallelPlan};

/// Totally ordered 64-bit signed key; the unit of comparison and movement.
pub type Element = i64;

pub(crate) fn floor_lg(n: usize) -> u32 {
    debug_assert!(n >= 1);
    usize::BITS - 1 - n.leading_zeros()
}

pub(crate) fn ceil_lg(n: usize) -> u32 {
    debug_assert!(n >= 1);
    if n == 1 {
        0
    } else {
        floor_lg(n - 1) + 1
    }
}

/// Default phase-3 cap: far above observed top-level exchange counts, so a
/// latent non-termination bug surfaces as a diagnosable error instead of a
/// hang.
pub fn default_treeswap_cap(n: usize) -> u64 {
    64 * u64::from(ceil_lg(n.max(1))) + 64
}

/// Element storage. Algorithms are generic over this so the parallel
/// executor can run them on raw disjoint views of one shared array.
pub(crate) trait Elems {
    fn get(&self, i: usize) -> Element;
    fn set(&mut self, i: usize, v: Element);
}

impl Elems for [Element] {
    #[inline]
    fn get(&self, i: usize) -> Element {
        self[i]
    }

    #[inline]
    fn set(&mut self, i: usize, v: Element) {
        self[i] = v;
    }
}

/// Array slot of small-heap node `k` (1-based): the small heap is mirrored.
#[inline]
pub(crate) fn small_slot(ns: usize, k: usize) -> usize {
    ns - k
}

/// Array slot of large-heap node `k` (1-based): one slot past the small heap.
#[inline]
pub(crate) fn large_slot(ns: usize, k: usize) -> usize {
    ns + k - 1
}

/// Sift the value at small-heap node `start` down its greedy path (toward the
/// larger child) until it is >= both children. Children's subtrees must
/// already satisfy the max-heap condition.
pub(crate) fn downheap_small_at<E, C>(e: &mut E, ns: usize, start: usize, c: &mut C)
where
    E: Elems + ?Sized,
    C: Counter,
{
    debug_assert!(
        start >= 1 && start <= ns,
        "node {start} out of range 1..={ns}"
    );
    let half = ns / 2;
    if start > half {
        return; // no children
    }
    let v = e.get(small_slot(ns, start));
    let mut k = start;
    loop {
        let mut j = 2 * k;
        // a lone child (j == ns) is its own greedy choice
        if j < ns && c.lt(e.get(small_slot(ns, j)), e.get(small_slot(ns, j + 1))) {
            j += 1;
        }
        if !c.lt(v, e.get(small_slot(ns, j))) {
            break;
        }
        e.set(small_slot(ns, k), e.get(small_slot(ns, j)));
        c.record(OpKind::Move);
        c.record(OpKind::Promotion);
        k = j;
        if j > half {
            break; // promoted into a leaf
        }
    }
    if k != start {
        e.set(small_slot(ns, k), v);
        c.record(OpKind::Move);
    }
}

/// Mirror of `downheap_small_at` for the min-heap of larger values: the
/// greedy path steps to the smaller child.
pub(crate) fn downheap_large_at<E, C>(e: &mut E, ns: usize, nl: usize, start: usize, c: &mut C)
where
    E: Elems + ?Sized,
    C: Counter,
{
    debug_assert!(
        start >= 1 && start <= nl,
        "node {start} out of range 1..={nl}"
    );
    let half = nl / 2;
    if start > half {
        return;
    }
    let v = e.get(large_slot(ns, start));
    let mut k = start;
    loop {
        let mut j = 2 * k;
        if j < nl && c.lt(e.get(large_slot(ns, j + 1)), e.get(large_slot(ns, j))) {
            j += 1;
        }
        if !c.lt(e.get(large_slot(ns, j)), v) {
            break;
        }
        e.set(large_slot(ns, k), e.get(large_slot(ns, j)));
        c.record(OpKind::Move);
        c.record(OpKind::Promotion);
        k = j;
        if j > half {
            break;
        }
    }
    if k != start {
        e.set(large_slot(ns, k), v);
        c.record(OpKind::Move);
    }
}

/// Post-order subtree exchange between the heaps: visit the greedy child
/// pair, then the sibling pair, then swap the values at `(ks, kl)` and
/// re-establish both heap conditions. Depth 1 marks a top-level call.
fn tree_swap_at<E, C>(e: &mut E, ns: usize, nl: usize, ks: usize, kl: usize, depth: u32, c: &mut C)
where
    E: Elems + ?Sized,
    C: Counter,
{
    debug_assert!(
        e.get(small_slot(ns, ks)) > e.get(large_slot(ns, kl)),
        "tree_swap called on a non-overlapping node pair"
    );
    debug_assert!(
        depth <= 2 * ceil_lg(ns + nl) + 2,
        "tree_swap depth {depth} exceeds bound for n = {}",
        ns + nl
    );
    c.record(OpKind::TreeSwapEnter {
        top_level: depth == 1,
    });

    let js = 2 * ks;
    let jl = 2 * kl;
    if js <= ns && jl <= nl {
        let mut js = js;
        let mut jl = jl;
        if js < ns && c.lt(e.get(small_slot(ns, js)), e.get(small_slot(ns, js + 1))) {
            js += 1; // larger small-child
        }
        if jl < nl && c.lt(e.get(large_slot(ns, jl + 1)), e.get(large_slot(ns, jl))) {
            jl += 1; // smaller large-child
        }
        if c.lt(e.get(large_slot(ns, jl)), e.get(small_slot(ns, js))) {
            tree_swap_at(e, ns, nl, js, jl, depth + 1, c);
            let ss = js ^ 1;
            let sl = jl ^ 1;
            // a missing sibling fails the sibling-recursion test
            if ss <= ns && sl <= nl && c.lt(e.get(large_slot(ns, sl)), e.get(small_slot(ns, ss))) {
                tree_swap_at(e, ns, nl, ss, sl, depth + 1, c);
            }
        }
    }

    let a = e.get(small_slot(ns, ks));
    let b = e.get(large_slot(ns, kl));
    e.set(small_slot(ns, ks), b);
    c.record(OpKind::Move);
    c.record(OpKind::Transfer);
    e.set(large_slot(ns, kl), a);
    c.record(OpKind::Move);
    c.record(OpKind::Transfer);

    downheap_small_at(e, ns, ks, c);
    downheap_large_at(e, ns, nl, kl, c);

    c.record(OpKind::TreeSwapExit);
}

/// Options for [`dualheap_select`].
#[derive(Clone, Debug)]
pub struct SelectOptions {
    /// Run phase 2 directly on the raw input.
    pub skip_phase1: bool,
    /// Maximum top-level exchange iterations before aborting; defaults to
    /// [`default_treeswap_cap`] of the input length.
    pub treeswap_cap: Option<u64>,
    /// Worker count for the heap-construction phases; 1 is strictly
    /// sequential.
    pub parallel_workers: usize,
}

impl Default for SelectOptions {
    fn default() -> Self {
        SelectOptions {
            skip_phase1: false,
            treeswap_cap: None,
            parallel_workers: 1,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum SelectError {
    #[error("k out of range: k={k}, n={n} (need 1 <= k <= n)")]
    InvalidK { k: usize, n: usize },
    #[error("exchange phase exceeded {cap} top-level tree swaps; suspected implementation bug")]
    CapExceeded { cap: u64 },
}

/// Result of a selection run; the input slice is partitioned in place.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Selection {
    pub kth: Element,
    pub counters: OpCounters,
}

/// One element sequence interpreted as two root-adjacent heaps.
///
/// Small-heap node `j` (1-based, `1 <= j <= ns`) lives at `data[ns - j]`,
/// large-heap node `j` (`1 <= j <= nl`) at `data[ns - 1 + j]`. The large
/// heap is never empty.
pub struct DualHeapView<'a> {
    data: &'a mut [Element],
    ns: usize,
    nl: usize,
}

impl<'a> DualHeapView<'a> {
    pub fn new(data: &'a mut [Element], ns: usize) -> Self {
        let n = data.len();
        assert!(
            ns < n,
            "need ns < n so the large heap has at least one node"
        );
        DualHeapView {
            data,
            ns,
            nl: n - ns,
        }
    }

    pub fn ns(&self) -> usize {
        self.ns
    }

    pub fn nl(&self) -> usize {
        self.nl
    }

    pub fn len(&self) -> usize {
        self.data.len()
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    pub fn data(&self) -> &[Element] {
        self.data
    }

    /// Value at small-heap node `k` (1-based).
    pub fn small(&self, k: usize) -> Element {
        assert!(k >= 1 && k <= self.ns);
        self.data[small_slot(self.ns, k)]
    }

    /// Value at large-heap node `k` (1-based).
    pub fn large(&self, k: usize) -> Element {
        assert!(k >= 1 && k <= self.nl);
        self.data[large_slot(self.ns, k)]
    }

    pub(crate) fn parts(&mut self) -> (&mut [Element], usize, usize) {
        (self.data, self.ns, self.nl)
    }

    pub fn downheap_small<C: Counter>(&mut self, k: usize, c: &mut C) {
        assert!(
            k >= 1 && k <= self.ns,
            "node {k} out of range 1..={}",
            self.ns
        );
        downheap_small_at(self.data, self.ns, k, c);
    }

    pub fn downheap_large<C: Counter>(&mut self, k: usize, c: &mut C) {
        assert!(
            k >= 1 && k <= self.nl,
            "node {k} out of range 1..={}",
            self.nl
        );
        downheap_large_at(self.data, self.ns, self.nl, k, c);
    }

    /// Bottom-up construction of the small heap (nodes `ns/2` down to 1).
    pub fn build_small_heap<C: Counter>(&mut self, c: &mut C) {
        for k in (1..=self.ns / 2).rev() {
            downheap_small_at(self.data, self.ns, k, c);
        }
    }

    /// Bottom-up construction of the large heap (nodes `nl/2` down to 1).
    pub fn build_large_heap<C: Counter>(&mut self, c: &mut C) {
        for k in (1..=self.nl / 2).rev() {
            downheap_large_at(self.data, self.ns, self.nl, k, c);
        }
    }

    /// Phase 2: both bottom-up constructions, small heap then large heap.
    pub fn build_split_heaps<C: Counter>(&mut self, c: &mut C) {
        self.build_small_heap(c);
        self.build_large_heap(c);
    }

    /// One top-level subtree exchange rooted at `(ks, kl)`. The value at
    /// small node `ks` must exceed the value at large node `kl`.
    pub fn tree_swap<C: Counter>(&mut self, ks: usize, kl: usize, c: &mut C) {
        assert!(ks >= 1 && ks <= self.ns);
        assert!(kl >= 1 && kl <= self.nl);
        tree_swap_at(self.data, self.ns, self.nl, ks, kl, 1, c);
    }

    /// Phase 3: exchange subtrees until the small root no longer exceeds the
    /// large root. Returns the number of top-level exchanges, or
    /// `CapExceeded` after `cap` of them.
    pub fn exchange_phase<C: Counter>(&mut self, cap: u64, c: &mut C) -> Result<u64, SelectError> {
        assert!(cap >= 1);
        if self.ns == 0 {
            return Ok(0); // no small heap, nothing can overlap
        }
        let mut iterations = 0u64;
        while c.lt(
            self.data[large_slot(self.ns, 1)],
            self.data[small_slot(self.ns, 1)],
        ) {
            if iterations == cap {
                return Err(SelectError::CapExceeded { cap });
            }
            tree_swap_at(self.data, self.ns, self.nl, 1, 1, 1, c);
            iterations += 1;
        }
        Ok(iterations)
    }
}

/// Phase 1: bottom-up min-heap construction over the whole array under the
/// mapping node `k` <-> `data[k - 1]`, so smaller values drift toward the
/// future small-heap side. Identical to building a large heap with an empty
/// small side.
pub fn build_whole_heap<C: Counter>(data: &mut [Element], c: &mut C) {
    let n = data.len();
    for k in (1..=n / 2).rev() {
        downheap_large_at(data, 0, n, k, c);
    }
}

/// Select the k-th largest of `data`, partitioning it in place: afterwards
/// every element left of `data[n - k]` is <= the answer and every element
/// from `data[n - k]` on is >= it.
pub fn dualheap_select(
    data: &mut [Element],
    k: usize,
    opts: &SelectOptions,
) -> Result<Selection, SelectError> {
    let n = data.len();
    if k < 1 || k > n {
        return Err(SelectError::InvalidK { k, n });
    }
    assert!(opts.parallel_workers >= 1);
    let cap = opts.treeswap_cap.unwrap_or_else(|| default_treeswap_cap(n));
    assert!(cap >= 1);
    let ns = n - k;

    let mut counters = OpCounters::new();
    let plan = if opts.parallel_workers > 1 {
        Some(ParallelPlan::new(n, ns, k, opts.parallel_workers))
    } else {
        None
    };

    counters.set_phase(Phase::Phase1);
    if !opts.skip_phase1 {
        match &plan {
            Some(plan) => {
                build_whole_heap_parallel(data, &mut counters, plan);
            }
            None => build_whole_heap(data, &mut counters),
        }
    }

    counters.set_phase(Phase::Phase2);
    let mut view = DualHeapView::new(data, ns);
    match &plan {
        Some(plan) => {
            build_split_heaps_parallel(&mut view, &mut counters, plan);
        }
        None => view.build_split_heaps(&mut counters),
    }

    counters.set_phase(Phase::Phase3);
    view.exchange_phase(cap, &mut counters)?;

    Ok(Selection {
        kth: data[ns],
        counters,
    })
}

/// Outcome of [`verify_partition`]; `first_violation` is the first offending
/// index when the check fails.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PartitionReport {
    pub ok: bool,
    pub first_violation: Option<usize>,
}

/// Check that `data` is partitioned at `ns` around `expected_kth`: every
/// index below `ns` holds a value <= `data[ns]`, every index from `ns` on
/// holds a value >= `data[ns]`, and `data[ns]` equals `expected_kth`.
pub fn verify_partition(data: &[Element], ns: usize, expected_kth: Element) -> PartitionReport {
    let fail = |i| PartitionReport {
        ok: false,
        first_violation: Some(i),
    };
    if ns >= data.len() {
        return fail(ns);
    }
    let pivot = data[ns];
    for (i, &v) in data.iter().enumerate().take(ns) {
        if v > pivot {
            return fail(i);
        }
    }
    for (i, &v) in data.iter().enumerate().skip(ns) {
        if v < pivot {
            return fail(i);
        }
    }
    if pivot != expected_kth {
        return fail(ns);
    }
    PartitionReport {
        ok: true,
        first_violation: None,
    }
}
