//! Shared oracles for the integration suites. Everything here is written
//! from first principles (plain textbook sift-downs, a direct index
//! transliteration of the exchange recursion) and stays independent of the
//! library implementation it checks.

#![allow(dead_code)]

pub type E = i64;

/// Textbook 0-based max-heap sift-down by repeated swaps.
pub fn textbook_sift_down_max(a: &mut [E], start: usize) {
    let n = a.len();
    let mut i = start;
    loop {
        let l = 2 * i + 1;
        if l >= n {
            break;
        }
        let mut c = l;
        if l + 1 < n && a[l + 1] > a[l] {
            c = l + 1;
        }
        if a[c] > a[i] {
            a.swap(i, c);
            i = c;
        } else {
            break;
        }
    }
}

/// Textbook 0-based min-heap sift-down.
pub fn textbook_sift_down_min(a: &mut [E], start: usize) {
    let n = a.len();
    let mut i = start;
    loop {
        let l = 2 * i + 1;
        if l >= n {
            break;
        }
        let mut c = l;
        if l + 1 < n && a[l + 1] < a[l] {
            c = l + 1;
        }
        if a[c] < a[i] {
            a.swap(i, c);
            i = c;
        } else {
            break;
        }
    }
}

/// Small-heap nodes 1..=ns in node order (node j lives at data[ns - j]).
pub fn small_nodes(data: &[E], ns: usize) -> Vec<E> {
    (1..=ns).map(|j| data[ns - j]).collect()
}

/// Large-heap nodes 1..=nl in node order (node j lives at data[ns + j - 1]).
pub fn large_nodes(data: &[E], ns: usize, nl: usize) -> Vec<E> {
    (1..=nl).map(|j| data[ns + j - 1]).collect()
}

pub fn write_small_nodes(data: &mut [E], ns: usize, nodes: &[E]) {
    for (j, &v) in nodes.iter().enumerate() {
        data[ns - (j + 1)] = v;
    }
}

pub fn write_large_nodes(data: &mut [E], ns: usize, nodes: &[E]) {
    for (j, &v) in nodes.iter().enumerate() {
        data[ns + j] = v;
    }
}

pub fn is_max_heap(nodes: &[E]) -> bool {
    (0..nodes.len()).all(|i| {
        let l = 2 * i + 1;
        let r = 2 * i + 2;
        (l >= nodes.len() || nodes[i] >= nodes[l]) && (r >= nodes.len() || nodes[i] >= nodes[r])
    })
}

pub fn is_min_heap(nodes: &[E]) -> bool {
    (0..nodes.len()).all(|i| {
        let l = 2 * i + 1;
        let r = 2 * i + 2;
        (l >= nodes.len() || nodes[i] <= nodes[l]) && (r >= nodes.len() || nodes[i] <= nodes[r])
    })
}

pub fn sorted_copy(data: &[E]) -> Vec<E> {
    let mut s = data.to_vec();
    s.sort_unstable();
    s
}

// ---------------------------------------------------------------------------
// Direct transliteration of the selection listings with single-child
// guards, used to pin the library's exact visit order and final layout.
// ---------------------------------------------------------------------------

pub fn ref_downheap_small(d: &mut [E], ns: usize, start: usize) {
    let mut k = start;
    if k <= ns / 2 {
        let v = d[ns - k];
        let mut j = 2 * k;
        if j < ns && d[ns - j - 1] > d[ns - j] {
            j += 1;
        }
        while d[ns - j] > v {
            d[ns - k] = d[ns - j];
            if j > ns / 2 {
                k = j;
                break;
            }
            k = j;
            j = 2 * k;
            if j < ns && d[ns - j - 1] > d[ns - j] {
                j += 1;
            }
        }
        d[ns - k] = v;
    }
}

pub fn ref_downheap_large(d: &mut [E], ns: usize, nl: usize, start: usize) {
    let mut k = start;
    if k <= nl / 2 {
        let v = d[ns + k - 1];
        let mut j = 2 * k;
        if j < nl && d[ns + j] < d[ns + j - 1] {
            j += 1;
        }
        while d[ns + j - 1] < v {
            d[ns + k - 1] = d[ns + j - 1];
            if j > nl / 2 {
                k = j;
                break;
            }
            k = j;
            j = 2 * k;
            if j < nl && d[ns + j] < d[ns + j - 1] {
                j += 1;
            }
        }
        d[ns + k - 1] = v;
    }
}

pub fn ref_tree_swap(d: &mut [E], ns: usize, nl: usize, ks: usize, kl: usize) {
    let mut js = 2 * ks;
    let mut jl = 2 * kl;
    if js <= ns && jl <= nl {
        if js < ns && d[ns - js - 1] > d[ns - js] {
            js += 1;
        }
        if jl < nl && d[ns + jl] < d[ns + jl - 1] {
            jl += 1;
        }
        if d[ns - js] > d[ns + jl - 1] {
            ref_tree_swap(d, ns, nl, js, jl);
            let ss = js ^ 1;
            let sl = jl ^ 1;
            if ss <= ns && sl <= nl && d[ns - ss] > d[ns + sl - 1] {
                ref_tree_swap(d, ns, nl, ss, sl);
            }
        }
    }
    d.swap(ns - ks, ns + kl - 1);
    ref_downheap_small(d, ns, ks);
    ref_downheap_large(d, ns, nl, kl);
}

/// Whole pipeline: phase 1 (whole-array min-heap, node k at d[k-1]), phase 2
/// (small then large build), phase 3 (exchange until the roots separate).
pub fn ref_select(d: &mut [E], k: usize, skip_phase1: bool) -> E {
    let n = d.len();
    assert!(k >= 1 && k <= n);
    let ns = n - k;
    let nl = k;
    if !skip_phase1 {
        for i in (1..=n / 2).rev() {
            ref_downheap_large(d, 0, n, i);
        }
    }
    for i in (1..=ns / 2).rev() {
        ref_downheap_small(d, ns, i);
    }
    for i in (1..=nl / 2).rev() {
        ref_downheap_large(d, ns, nl, i);
    }
    if ns > 0 {
        while d[ns - 1] > d[ns] {
            ref_tree_swap(d, ns, nl, 1, 1);
        }
    }
    d[ns]
}
