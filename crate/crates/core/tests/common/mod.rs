//! Independent reference implementations used across the integration tests.
//! Nothing here calls into the library except to convert inputs.

#![allow(dead_code)]

use std::collections::{BTreeMap, HashSet};

use debruijn_indep::PrefixSet;

/// All words of length `k` over `[q]`, in lexicographic order.
pub fn all_words(k: usize, q: u8) -> Vec<Vec<u8>> {
    let mut out = vec![vec![]];
    for _ in 0..k {
        out = out
            .into_iter()
            .flat_map(|w| {
                (0..q).map(move |d| {
                    let mut v = w.clone();
                    v.push(d);
                    v
                })
            })
            .collect();
    }
    out
}

/// Shift adjacency of the underlying simple graph.
pub fn adjacent(x: &[u8], y: &[u8]) -> bool {
    let k = x.len();
    x != y && (x[1..] == y[..k - 1] || y[1..] == x[..k - 1])
}

pub fn has_loop(x: &[u8]) -> bool {
    x.iter().all(|&d| d == x[0])
}

/// Maximum independent set size by plain recursion on bitmasks; fine up to
/// about 40 vertices.
pub fn mis_size(k: usize, q: u8, loops: bool) -> usize {
    let words: Vec<Vec<u8>> = all_words(k, q)
        .into_iter()
        .filter(|w| !(loops && has_loop(w)))
        .collect();
    let n = words.len();
    assert!(n <= 64);
    let adj: Vec<u64> = (0..n)
        .map(|i| {
            (0..n)
                .filter(|&j| adjacent(&words[i], &words[j]))
                .fold(0u64, |m, j| m | 1 << j)
        })
        .collect();
    fn go(avail: u64, adj: &[u64]) -> usize {
        if avail == 0 {
            return 0;
        }
        // branch on a vertex of maximum degree; isolated ones are free
        let mut best_v = avail.trailing_zeros() as usize;
        let mut best_d = 0;
        let mut m = avail;
        while m != 0 {
            let v = m.trailing_zeros() as usize;
            m &= m - 1;
            let d = (adj[v] & avail).count_ones();
            if d > best_d {
                best_d = d;
                best_v = v;
            }
        }
        if best_d == 0 {
            return avail.count_ones() as usize;
        }
        let v = best_v;
        let without = go(avail & !(1 << v), adj);
        let with = 1 + go(avail & !(1 << v) & !adj[v], adj);
        without.max(with)
    }
    go(if n == 64 { u64::MAX } else { (1u64 << n) - 1 }, &adj)
}

/// `N(S)` by scanning every word.
pub fn count_n_direct(k: usize, q: u8, members: &HashSet<Vec<u8>>) -> u64 {
    all_words(k, q)
        .iter()
        .filter(|w| members.contains(&w[..k - 1]) && !members.contains(&w[1..]))
        .count() as u64
}

pub fn member_digits(s: &PrefixSet) -> HashSet<Vec<u8>> {
    s.members()
        .into_iter()
        .map(|w| w.digits().to_vec())
        .collect()
}

/// Orbit sizes of the rotation action, grouped by least rotation.
pub fn orbit_size_histogram(k: usize, q: u32) -> BTreeMap<usize, u64> {
    let size = (q as u64).pow(k as u32);
    let mut hist = BTreeMap::new();
    let mut digits = vec![0u32; k];
    for r in 0..size {
        let mut x = r;
        for d in digits.iter_mut().rev() {
            *d = (x % q as u64) as u32;
            x /= q as u64;
        }
        // canonical iff no rotation is smaller
        let mut canonical = true;
        let mut period = k;
        for s in 1..k {
            let rotated = (0..k).map(|i| digits[(i + s) % k]);
            match rotated.cmp(digits.iter().copied()) {
                std::cmp::Ordering::Less => {
                    canonical = false;
                    break;
                }
                std::cmp::Ordering::Equal if period == k => period = s,
                _ => {}
            }
        }
        if canonical {
            *hist.entry(period).or_insert(0) += 1;
        }
    }
    hist
}

pub fn rng(seed: u64) -> rand_chacha::ChaCha8Rng {
    rand::SeedableRng::seed_from_u64(seed)
}
