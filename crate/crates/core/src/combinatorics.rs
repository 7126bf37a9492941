//! Counting helpers and canonical tuple indexing.

use rand::Rng;

/// Binomial coefficient, saturating at `u128::MAX`.
pub fn binomial(n: u64, k: u64) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        // acc * (n - i) / (i + 1) stays integral at every step
        acc = match acc.checked_mul((n - i) as u128) {
            Some(v) => v / (i as u128 + 1),
            None => return u128::MAX,
        };
    }
    acc
}

pub fn factorial(n: u64) -> u128 {
    (1..=n as u128).product()
}

/// Multinomial coefficient n! / prod(c_k!) with n = sum(c_k).
pub fn multinomial(counts: &[usize]) -> u128 {
    let mut total = 0u64;
    let mut acc: u128 = 1;
    for &c in counts {
        total += c as u64;
        acc = acc.saturating_mul(binomial(total, c as u64));
    }
    acc
}

/// Natural log of the multinomial coefficient.
pub fn ln_multinomial(counts: &[usize]) -> f64 {
    let n: usize = counts.iter().sum();
    ln_factorial(n) - counts.iter().map(|&c| ln_factorial(c)).sum::<f64>()
}

pub fn ln_factorial(n: usize) -> f64 {
    (2..=n).map(|k| (k as f64).ln()).sum()
}

/// Falling factorial c (c-1) ... (c-k+1).
pub fn falling(c: usize, k: usize) -> f64 {
    if k > c {
        return 0.0;
    }
    (0..k).map(|i| (c - i) as f64).product()
}

/// Rank of a strictly increasing tuple in colexicographic order.
pub fn rank_sorted(tuple: &[u32]) -> usize {
    tuple
        .iter()
        .enumerate()
        .map(|(k, &i)| binomial(i as u64, k as u64 + 1) as usize)
        .sum()
}

/// Rank of a non-decreasing tuple (multiset) among all multisets of its size.
pub fn rank_multiset(tuple: &[u32]) -> usize {
    let shifted: Vec<u32> = tuple.iter().enumerate().map(|(k, &i)| i + k as u32).collect();
    rank_sorted(&shifted)
}

/// Number of p-multisets over n symbols.
pub fn multiset_count(n: usize, p: usize) -> usize {
    binomial((n + p - 1) as u64, p as u64) as usize
}

/// Visits every strictly increasing p-tuple over `0..n` in lexicographic order.
pub fn for_each_subset(n: usize, p: usize, mut f: impl FnMut(&[u32])) {
    if p > n {
        return;
    }
    let mut idx: Vec<u32> = (0..p as u32).collect();
    loop {
        f(&idx);
        let mut k = p;
        while k > 0 && idx[k - 1] as usize == n - p + k - 1 {
            k -= 1;
        }
        if k == 0 {
            return;
        }
        k -= 1;
        idx[k] += 1;
        for j in k + 1..p {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

/// Visits every non-decreasing p-tuple over `0..n` in lexicographic order.
pub fn for_each_multiset(n: usize, p: usize, mut f: impl FnMut(&[u32])) {
    for_each_subset(n + p - 1, p, |s| {
        let m: Vec<u32> = s.iter().enumerate().map(|(k, &i)| i - k as u32).collect();
        f(&m);
    });
}

/// Uniform random p-subset of `0..n`, sorted ascending.
pub fn random_subset<R: Rng + ?Sized>(n: usize, p: usize, rng: &mut R) -> Vec<u32> {
    debug_assert!(p <= n);
    // Floyd's algorithm
    let mut chosen: Vec<u32> = Vec::with_capacity(p);
    for j in (n - p)..n {
        let t = rng.random_range(0..=j) as u32;
        if chosen.contains(&t) {
            chosen.push(j as u32);
        } else {
            chosen.push(t);
        }
    }
    chosen.sort_unstable();
    chosen
}

/// Number of distinct orderings of a sorted tuple: p! / prod(mult!).
pub fn orderings(sorted: &[u32]) -> u128 {
    let mut acc = factorial(sorted.len() as u64);
    let mut run = 1u64;
    for w in sorted.windows(2) {
        if w[0] == w[1] {
            run += 1;
        } else {
            acc /= factorial(run);
            run = 1;
        }
    }
    acc / factorial(run)
}

/// Whether a sorted tuple has a repeated entry.
pub fn has_repeat(sorted: &[u32]) -> bool {
    sorted.windows(2).any(|w| w[0] == w[1])
}
