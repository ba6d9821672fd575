//! Oracle batteries for the selection pipeline: textbook sift-down
//! equivalence, bit-exact agreement with a direct transliteration of the
//! exchange recursion, sort-oracle agreement, and the permutation /
//! partition / determinism invariants.

mod common;

use common::*;
use dualheap::harness::{generate_case, RngState, DEFAULT_VALUE_BOUND};
use dualheap::{
    build_whole_heap, dualheap_select, kth_by_sort, quickselect, verify_partition, Counter,
    DualHeapView, NoCount, OpCounters, OpKind, PivotRule, SelectError, SelectOptions,
};
use proptest::prelude::*;

#[test]
fn downheap_small_matches_textbook_sift_down() {
    let mut rng = RngState::new(101);
    for _ in 0..1000 {
        let m = 1 + (rng.next_value() % 64) as usize;
        let mut nodes: Vec<E> = (0..m).map(|_| (rng.next_value() % 200) as i64).collect();
        // make every subtree valid, then corrupt one node
        for i in (0..m / 2).rev() {
            textbook_sift_down_max(&mut nodes, i);
        }
        let k = 1 + (rng.next_value() % m as u64) as usize;
        nodes[k - 1] = (rng.next_value() % 200) as i64;

        let mut expected = nodes.clone();
        textbook_sift_down_max(&mut expected, k - 1);

        let mut data = vec![0; m + 1];
        write_small_nodes(&mut data, m, &nodes);
        data[m] = i64::MAX; // dummy large-heap slot
        let mut view = DualHeapView::new(&mut data, m);
        let mut c = OpCounters::new();
        view.downheap_small(k, &mut c);

        assert_eq!(small_nodes(&data, m), expected, "m={m} k={k}");
        assert!(is_max_heap(&small_nodes(&data, m)) || k > 1);
    }
}

#[test]
fn downheap_large_matches_textbook_sift_down() {
    let mut rng = RngState::new(103);
    for _ in 0..1000 {
        let m = 1 + (rng.next_value() % 64) as usize;
        let mut nodes: Vec<E> = (0..m).map(|_| (rng.next_value() % 200) as i64).collect();
        for i in (0..m / 2).rev() {
            textbook_sift_down_min(&mut nodes, i);
        }
        let k = 1 + (rng.next_value() % m as u64) as usize;
        nodes[k - 1] = (rng.next_value() % 200) as i64;

        let mut expected = nodes.clone();
        textbook_sift_down_min(&mut expected, k - 1);

        let ns = 3;
        let mut data = vec![i64::MIN; ns + m];
        write_large_nodes(&mut data, ns, &nodes);
        let mut view = DualHeapView::new(&mut data, ns);
        let mut c = OpCounters::new();
        view.downheap_large(k, &mut c);

        assert_eq!(large_nodes(&data, ns, m), expected, "m={m} k={k}");
    }
}

#[test]
fn pipeline_is_bit_identical_to_the_transliterated_listing() {
    let mut rng = RngState::new(107);
    for _ in 0..500 {
        let n = 1 + (rng.next_value() % 500) as usize;
        let k = 1 + (rng.next_value() % n as u64) as usize;
        let input = generate_case(rng.next_value(), n, 1 << 20);

        for skip_phase1 in [false, true] {
            let mut expected = input.clone();
            let ref_kth = ref_select(&mut expected, k, skip_phase1);

            let mut got = input.clone();
            let opts = SelectOptions {
                skip_phase1,
                ..SelectOptions::default()
            };
            let sel = dualheap_select(&mut got, k, &opts).unwrap();

            assert_eq!(sel.kth, ref_kth, "n={n} k={k} skip={skip_phase1}");
            assert_eq!(got, expected, "layout n={n} k={k} skip={skip_phase1}");
        }
    }
}

#[test]
fn select_agrees_with_sort_oracle_across_all_k() {
    let mut rng = RngState::new(109);
    for trial in 0..1000 {
        let n = 1 + (rng.next_value() % 2000) as usize;
        let k = 1 + (rng.next_value() % n as u64) as usize;
        let input = generate_case(rng.next_value(), n, DEFAULT_VALUE_BOUND);
        let expected = kth_by_sort(&input, k).unwrap();

        let mut data = input.clone();
        let sel = dualheap_select(&mut data, k, &SelectOptions::default()).unwrap();
        assert_eq!(sel.kth, expected, "trial={trial} n={n} k={k}");

        let ns = n - k;
        let report = verify_partition(&data, ns, expected);
        assert!(
            report.ok,
            "trial={trial} violation {:?}",
            report.first_violation
        );
        assert_eq!(sorted_copy(&data), sorted_copy(&input), "multiset changed");
        assert!(sel.counters.treeswaps_recursive >= sel.counters.treeswaps_toplevel);
    }
}

#[test]
fn quickselect_agrees_with_sort_oracle() {
    let mut rng = RngState::new(113);
    for rule in [PivotRule::LastElement, PivotRule::MedianOfThree] {
        for _ in 0..1000 {
            let n = 1 + (rng.next_value() % 1500) as usize;
            let k = 1 + (rng.next_value() % n as u64) as usize;
            let input = generate_case(rng.next_value(), n, DEFAULT_VALUE_BOUND);
            let expected = kth_by_sort(&input, k).unwrap();
            let mut data = input.clone();
            let mut c = OpCounters::new();
            assert_eq!(quickselect(&mut data, k, rule, &mut c).unwrap(), expected);
            assert_eq!(sorted_copy(&data), sorted_copy(&input));
        }
    }
}

/// Comparator with an inverted order: the verification path must notice.
struct InvertedComparator;

impl Counter for InvertedComparator {
    fn record(&mut self, _kind: OpKind) {}

    fn lt(&mut self, a: i64, b: i64) -> bool {
        a > b
    }
}

#[test]
fn corrupted_comparator_is_detected() {
    let mut rng = RngState::new(127);
    let mut detections = 0;
    for _ in 0..50 {
        let n = 2 + (rng.next_value() % 200) as usize;
        let k = 1 + (rng.next_value() % n as u64) as usize;
        let input = generate_case(rng.next_value(), n, 1 << 16);
        let expected = kth_by_sort(&input, k).unwrap();
        let ns = n - k;

        // a contract assertion firing counts as a detection too
        let outcome = std::panic::catch_unwind(move || {
            let mut data = input;
            let mut bad = InvertedComparator;
            build_whole_heap(&mut data, &mut bad);
            let mut view = DualHeapView::new(&mut data, ns);
            view.build_split_heaps(&mut bad);
            match view.exchange_phase(256, &mut bad) {
                Err(SelectError::CapExceeded { .. }) => true,
                Err(_) => true,
                Ok(_) => data[ns] != expected || !verify_partition(&data, ns, expected).ok,
            }
        });
        if outcome.unwrap_or(true) {
            detections += 1;
        }
    }
    assert!(detections > 0, "an inverted comparator went unnoticed");
}

#[test]
fn counting_disabled_pipeline_matches_counted_select() {
    let mut rng = RngState::new(131);
    for _ in 0..200 {
        let n = 1 + (rng.next_value() % 400) as usize;
        let k = 1 + (rng.next_value() % n as u64) as usize;
        let input = generate_case(rng.next_value(), n, DEFAULT_VALUE_BOUND);

        let mut counted = input.clone();
        let sel = dualheap_select(&mut counted, k, &SelectOptions::default()).unwrap();

        let mut plain = input.clone();
        let mut nc = NoCount;
        build_whole_heap(&mut plain, &mut nc);
        let ns = n - k;
        let mut view = DualHeapView::new(&mut plain, ns);
        view.build_split_heaps(&mut nc);
        view.exchange_phase(u64::MAX >> 1, &mut nc).unwrap();

        assert_eq!(counted, plain);
        assert_eq!(sel.kth, plain[ns]);
    }
}

fn case_strategy() -> impl Strategy<Value = (Vec<i64>, usize)> {
    prop::collection::vec(-1000i64..1000, 1..300).prop_flat_map(|v| {
        let len = v.len();
        (Just(v), 1..=len)
    })
}

proptest! {
    #[test]
    fn prop_select_matches_oracle((data, k) in case_strategy()) {
        let expected = kth_by_sort(&data, k).unwrap();
        let mut work = data.clone();
        let sel = dualheap_select(&mut work, k, &SelectOptions::default()).unwrap();
        prop_assert_eq!(sel.kth, expected);
        prop_assert!(verify_partition(&work, data.len() - k, expected).ok);
        prop_assert_eq!(sorted_copy(&work), sorted_copy(&data));
    }

    #[test]
    fn prop_select_is_deterministic((data, k) in case_strategy()) {
        let mut a = data.clone();
        let mut b = data.clone();
        let sa = dualheap_select(&mut a, k, &SelectOptions::default()).unwrap();
        let sb = dualheap_select(&mut b, k, &SelectOptions::default()).unwrap();
        prop_assert_eq!(sa, sb);
        prop_assert_eq!(a, b);
    }

    #[test]
    fn prop_quickselect_matches_oracle((data, k) in case_strategy()) {
        let expected = kth_by_sort(&data, k).unwrap();
        for rule in [PivotRule::LastElement, PivotRule::MedianOfThree] {
            let mut work = data.clone();
            let mut c = OpCounters::new();
            prop_assert_eq!(quickselect(&mut work, k, rule, &mut c).unwrap(), expected);
        }
    }
}
