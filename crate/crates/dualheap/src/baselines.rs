//! Instrumented quickselect variants and the sort oracle every selection
//! algorithm in the crate is checked against. Both use the same accounting
//! rules as the dualheap: one comparison per comparator invocation, one move
//! per slot write.

use crate::counters::{Counter, OpKind};
use crate::heap::{Element, SelectError};

/// Pivot choice per partition range.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PivotRule {
    /// Last element of the range; the classic choice with the notorious
    /// quadratic worst case on sorted input.
    LastElement,
    /// Median of the range's first, middle and last elements.
    MedianOfThree,
}

/// Index of the median value among three positions; two or three counted
/// comparisons.
fn median_of_three<C: Counter>(data: &[Element], a: usize, b: usize, z: usize, c: &mut C) -> usize {
    let (x, y, w) = (data[a], data[b], data[z]);
    if c.lt(x, y) {
        if c.lt(y, w) {
            b
        } else if c.lt(x, w) {
            z
        } else {
            a
        }
    } else if c.lt(w, y) {
        b
    } else if c.lt(w, x) {
        z
    } else {
        a
    }
}

fn counted_swap<C: Counter>(data: &mut [Element], i: usize, j: usize, c: &mut C) {
    data.swap(i, j);
    c.record(OpKind::Move);
    c.record(OpKind::Move);
}

/// Hoare two-pointer partition of `data[lo..=hi]`. The pivot is chosen per
/// `rule`, exchanged to the range's low boundary, and the scans return `j`
/// with `lo <= j < hi` such that `data[lo..=j] <= data[j+1..=hi]`
/// elementwise.
fn partition<C: Counter>(
    data: &mut [Element],
    lo: usize,
    hi: usize,
    rule: PivotRule,
    c: &mut C,
) -> usize {
    debug_assert!(lo < hi);
    match rule {
        PivotRule::LastElement => counted_swap(data, lo, hi, c),
        PivotRule::MedianOfThree => {
            let m = median_of_three(data, lo, lo + (hi - lo) / 2, hi, c);
            if m != lo {
                counted_swap(data, lo, m, c);
            }
        }
    }
    let pivot = data[lo];
    let mut i = lo as isize - 1;
    let mut j = hi as isize + 1;
    loop {
        loop {
            j -= 1;
            // until data[j] <= pivot
            if !c.lt(pivot, data[j as usize]) {
                break;
            }
        }
        loop {
            i += 1;
            // until data[i] >= pivot
            if !c.lt(data[i as usize], pivot) {
                break;
            }
        }
        if i < j {
            counted_swap(data, i as usize, j as usize, c);
        } else {
            return j as usize;
        }
    }
}

/// Select the k-th largest of `data` by iterated partitioning of the
/// surviving side; the slice ends up partitioned around the answer's final
/// position.
pub fn quickselect<C: Counter>(
    data: &mut [Element],
    k: usize,
    rule: PivotRule,
    c: &mut C,
) -> Result<Element, SelectError> {
    let n = data.len();
    if k < 1 || k > n {
        return Err(SelectError::InvalidK { k, n });
    }
    // k-th largest sits at ascending rank n - k
    let target = n - k;
    let mut lo = 0;
    let mut hi = n - 1;
    while lo < hi {
        let j = partition(data, lo, hi, rule, c);
        if target <= j {
            hi = j;
        } else {
            lo = j + 1;
        }
    }
    Ok(data[target])
}

/// The oracle: position k-1 of a descending-sorted copy. The input is left
/// untouched and nothing is counted.
pub fn kth_by_sort(data: &[Element], k: usize) -> Result<Element, SelectError> {
    let n = data.len();
    if k < 1 || k > n {
        return Err(SelectError::InvalidK { k, n });
    }
    let mut sorted = data.to_vec();
    sorted.sort_unstable_by(|a, b| b.cmp(a));
    Ok(sorted[k - 1])
}
