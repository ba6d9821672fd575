//! Dualheap selection: find the k-th largest of n elements by building two
//! root-adjacent heaps over one contiguous array (a max-heap of the n-k
//! smaller values and a min-heap of the k larger values) and exchanging
//! subtrees until the two value ranges separate.
//!
//! The crate also ships instrumented quickselect baselines, uniform
//! operation accounting, a parallel mode for the heap-construction phases,
//! and a deterministic benchmark harness behind the `dualheap` binary.

pub mod baselines;
pub mod counters;
pub mod harness;
pub mod heap;
pub mod parallel;

pub use baselines::{kth_by_sort, quickselect, PivotRule};
pub use counters::{Counter, NoCount, OpCounters, OpKind, Phase};
pub use heap::{
    build_whole_heap, dualheap_select, verify_partition, DualHeapView, Element, PartitionReport,
    SelectError, SelectOptions, Selection,
};
pub use parallel::{build_split_heaps_parallel, build_whole_heap_parallel, ParallelPlan};
