//! Jordan's 2-totient and the sizes of configurations built from points of type 3k.

use crate::error::{Error, Result};

/// Number of elements of order exactly `k` in `(Z/kZ)^2`,
/// `k^2 * prod_{p | k} (1 - 1/p^2)`, in exact integer arithmetic.
pub fn jordan_totient_2(k: u64) -> Result<u64> {
    if k == 0 {
        return Err(Error::InvalidArgument("J2 is defined for k >= 1".into()));
    }
    let mut result = k * k;
    let mut rest = k;
    let mut p = 2;
    while p * p <= rest {
        if rest % p == 0 {
            result = result / (p * p) * (p * p - 1);
            while rest % p == 0 {
                rest /= p;
            }
        }
        p += 1;
    }
    if rest > 1 {
        result = result / (rest * rest) * (rest * rest - 1);
    }
    Ok(result)
}

/// The pairs `(k, J2(k))` with `J2(k) <= limit`, ascending in `k`.
fn totients_up_to(limit: u64) -> Vec<(u64, u64)> {
    // J2(k) > 6/pi^2 * k^2 > k^2 / 2, so k <= sqrt(2 limit) suffices.
    let kmax = ((2 * limit) as f64).sqrt() as u64 + 2;
    (1..=kmax)
        .map(|k| (k, jordan_totient_2(k).expect("k >= 1")))
        .filter(|&(_, j)| j <= limit)
        .collect()
}

/// `reach[i][s]`: whether `s` is a sum of distinct values from `items[i..]`.
fn reachability(items: &[(u64, u64)], target: u64) -> Vec<Vec<bool>> {
    let t = target as usize;
    let mut reach = vec![vec![false; t + 1]; items.len() + 1];
    reach[items.len()][0] = true;
    for i in (0..items.len()).rev() {
        let v = items[i].1 as usize;
        for s in 0..=t {
            reach[i][s] = reach[i + 1][s] || (s >= v && reach[i + 1][s - v]);
        }
    }
    reach
}

/// All `n <= bound` of the form `9 * sum_{k in S} J2(k)` over nonempty finite
/// sets `S` of distinct positive integers, ascending.
pub fn constructible_sizes(bound: u64) -> Vec<u64> {
    let limit = bound / 9;
    if limit == 0 {
        return Vec::new();
    }
    let items = totients_up_to(limit);
    let reach = reachability(&items, limit);
    (1..=limit).filter(|&s| reach[0][s as usize]).map(|s| 9 * s).collect()
}

/// A set of distinct `k` with `sum J2(k) = target`, preferring small `k`
/// (the lexicographically first inclusion pattern in ascending `k`).
pub fn totient_subset_witness(target: u64) -> Option<Vec<u64>> {
    if target == 0 {
        return None;
    }
    let items = totients_up_to(target);
    let reach = reachability(&items, target);
    if !reach[0][target as usize] {
        return None;
    }
    let mut s = target as usize;
    let mut chosen = Vec::new();
    for (i, &(k, v)) in items.iter().enumerate() {
        let v = v as usize;
        if s >= v && reach[i + 1][s - v] {
            chosen.push(k);
            s -= v;
        }
        if s == 0 {
            break;
        }
    }
    Some(chosen)
}
