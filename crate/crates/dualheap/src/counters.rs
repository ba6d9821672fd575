//! Uniform operation accounting shared by every algorithm in the crate.
//!
//! All algorithms observe elements only through [`Counter::lt`], and report
//! slot writes, promotions, tree swaps and boundary transfers through
//! [`Counter::record`]. Keeping the accounting behind one trait means the
//! dualheap and the quickselect baselines are measured under the same rules:
//! one comparison per comparator invocation, one move per element written
//! into a sequence slot (held-value copies are free, a swap is two moves).

use crate::heap::Element;

/// Phase tag for a tallied operation.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Phase {
    Phase1,
    Phase2,
    Phase3,
    Baseline,
}

impl Phase {
    const COUNT: usize = 4;

    fn index(self) -> usize {
        match self {
            Phase::Phase1 => 0,
            Phase::Phase2 => 1,
            Phase::Phase3 => 2,
            Phase::Baseline => 3,
        }
    }
}

/// One recordable event.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OpKind {
    Comparison,
    Move,
    Promotion,
    TreeSwapEnter { top_level: bool },
    TreeSwapExit,
    Transfer,
}

/// Accounting sink. `NoCount` disables counting without touching algorithm
/// code; results must be bit-identical either way.
pub trait Counter {
    fn record(&mut self, kind: OpKind);

    /// Counted comparison; the single comparator primitive everything else
    /// derives from (`a <= b` is `!lt(b, a)` and still one invocation).
    #[inline]
    fn lt(&mut self, a: Element, b: Element) -> bool {
        self.record(OpKind::Comparison);
        a < b
    }
}

/// Counting disabled.
pub struct NoCount;

impl Counter for NoCount {
    #[inline]
    fn record(&mut self, _kind: OpKind) {}
}

/// Per-phase operation tallies for one run.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OpCounters {
    comparisons: [u64; Phase::COUNT],
    moves: [u64; Phase::COUNT],
    promotions: [u64; Phase::COUNT],
    pub treeswaps_toplevel: u64,
    pub treeswaps_recursive: u64,
    pub max_treeswap_depth: u32,
    pub transfers: u64,
    cur_depth: u32,
    phase: Phase,
}

impl Default for OpCounters {
    fn default() -> Self {
        OpCounters {
            comparisons: [0; Phase::COUNT],
            moves: [0; Phase::COUNT],
            promotions: [0; Phase::COUNT],
            treeswaps_toplevel: 0,
            treeswaps_recursive: 0,
            max_treeswap_depth: 0,
            transfers: 0,
            cur_depth: 0,
            phase: Phase::Baseline,
        }
    }
}

impl OpCounters {
    pub fn new() -> Self {
        Self::default()
    }

    /// Set the phase tag applied to subsequent records.
    pub fn set_phase(&mut self, phase: Phase) {
        self.phase = phase;
    }

    pub fn phase(&self) -> Phase {
        self.phase
    }

    /// Tally `kind` against an explicit phase tag.
    pub fn record_in(&mut self, kind: OpKind, phase: Phase) {
        let p = phase.index();
        match kind {
            OpKind::Comparison => self.comparisons[p] += 1,
            OpKind::Move => self.moves[p] += 1,
            OpKind::Promotion => self.promotions[p] += 1,
            OpKind::TreeSwapEnter { top_level } => {
                self.treeswaps_recursive += 1;
                if top_level {
                    self.treeswaps_toplevel += 1;
                }
                self.cur_depth += 1;
                self.max_treeswap_depth = self.max_treeswap_depth.max(self.cur_depth);
            }
            OpKind::TreeSwapExit => {
                assert!(self.cur_depth > 0, "treeswap exit without matching enter");
                self.cur_depth -= 1;
            }
            OpKind::Transfer => self.transfers += 1,
        }
    }

    pub fn comparisons(&self, phase: Phase) -> u64 {
        self.comparisons[phase.index()]
    }

    pub fn moves(&self, phase: Phase) -> u64 {
        self.moves[phase.index()]
    }

    pub fn promotions(&self, phase: Phase) -> u64 {
        self.promotions[phase.index()]
    }

    pub fn total_comparisons(&self) -> u64 {
        self.comparisons.iter().sum()
    }

    pub fn total_moves(&self) -> u64 {
        self.moves.iter().sum()
    }

    pub fn total_promotions(&self) -> u64 {
        self.promotions.iter().sum()
    }

    /// Comparisons plus moves, the headline cost figure.
    pub fn total_ops(&self) -> u64 {
        self.total_comparisons() + self.total_moves()
    }

    /// Componentwise sum of two tallies; depth fields take the maximum.
    /// Identity is `OpCounters::default()`, and the counting fields are
    /// associative and commutative, so per-worker tallies merge in any order.
    pub fn merge(a: &OpCounters, b: &OpCounters) -> OpCounters {
        let mut out = a.clone();
        out.absorb(b);
        out
    }

    /// In-place `merge`.
    pub fn absorb(&mut self, other: &OpCounters) {
        for p in 0..Phase::COUNT {
            self.comparisons[p] += other.comparisons[p];
            self.moves[p] += other.moves[p];
            self.promotions[p] += other.promotions[p];
        }
        self.treeswaps_toplevel += other.treeswaps_toplevel;
        self.treeswaps_recursive += other.treeswaps_recursive;
        self.max_treeswap_depth = self.max_treeswap_depth.max(other.max_treeswap_depth);
        self.transfers += other.transfers;
        self.cur_depth += other.cur_depth;
    }
}

impl Counter for OpCounters {
    #[inline]
    fn record(&mut self, kind: OpKind) {
        self.record_in(kind, self.phase);
    }
}
