//! Brute force for small instances. Slow on purpose and short enough to
//! check by eye; everything else is tested against it.

use crate::apcore::{enumerate_kaps, Structure};
use crate::error::{Error, Result};

pub const DEFAULT_AW_LIMIT: usize = 14;
pub const SZ_LIMIT: usize = 30;

/// Restricted-growth strings of length `n`: `a[0] = 0` and
/// `a[i] <= 1 + max(a[..i])`. Each set partition of `n` positions appears
/// exactly once, with `a[i]` the block of position `i`.
pub fn restricted_growth_strings(n: usize) -> RgsIter {
    RgsIter { a: vec![0; n], max: vec![0; n], started: false, done: false }
}

pub struct RgsIter {
    a: Vec<u8>,
    // max[i] = max(a[..=i])
    max: Vec<u8>,
    started: bool,
    done: bool,
}

impl Iterator for RgsIter {
    type Item = Vec<u8>;

    fn next(&mut self) -> Option<Vec<u8>> {
        if self.done {
            return None;
        }
        if !self.started {
            self.started = true;
            if self.a.is_empty() {
                self.done = true;
            }
            return Some(self.a.clone());
        }
        let n = self.a.len();
        // Rightmost position that can still grow.
        let mut i = n;
        while i > 1 {
            i -= 1;
            if self.a[i] <= self.max[i - 1] {
                self.a[i] += 1;
                self.max[i] = self.max[i - 1].max(self.a[i]);
                for j in i + 1..n {
                    self.a[j] = 0;
                    self.max[j] = self.max[i];
                }
                return Some(self.a.clone());
            }
        }
        self.done = true;
        None
    }
}

/// Bell number `B(n)`, by the Bell triangle.
pub fn bell(n: usize) -> u128 {
    let mut row = vec![1u128];
    for _ in 0..n {
        let mut next = vec![*row.last().unwrap()];
        for &x in &row {
            let v = *next.last().unwrap() + x;
            next.push(v);
        }
        row = next;
    }
    row[0]
}

/// `aw(s, k)` by trying every set partition, up to [`DEFAULT_AW_LIMIT`] positions.
pub fn brute_force_aw(s: Structure, k: usize) -> Result<usize> {
    brute_force_aw_limit(s, k, DEFAULT_AW_LIMIT)
}

pub fn brute_force_aw_limit(s: Structure, k: usize, limit: usize) -> Result<usize> {
    if s.n > limit {
        return Err(Error::LimitExceeded { n: s.n, limit });
    }
    if k < 2 {
        return Err(Error::InvalidArgument(format!("k={k} < 2")));
    }
    if s.n < k {
        return Ok(s.n + 1);
    }
    let aps: Vec<Vec<usize>> = enumerate_kaps(s, k).into_iter().map(|p| p.sorted().iter().map(|&x| s.index(x)).collect()).collect();
    let mut best = 0;
    for rgs in restricted_growth_strings(s.n) {
        let blocks = *rgs.iter().max().unwrap() as usize + 1;
        if blocks <= best {
            continue;
        }
        let rainbow = aps.iter().any(|ap| {
            let mut seen = 0u64;
            ap.iter().all(|&i| {
                let b = 1u64 << rgs[i];
                let fresh = seen & b == 0;
                seen |= b;
                fresh
            })
        });
        if !rainbow {
            best = blocks;
        }
    }
    Ok(best + 1)
}

/// `sz(n, k)` by checking every subset of `[n]`, `n <= 30`.
pub fn brute_force_sz(n: usize, k: usize) -> Result<usize> {
    if n > SZ_LIMIT {
        return Err(Error::LimitExceeded { n, limit: SZ_LIMIT });
    }
    if k < 1 {
        return Err(Error::InvalidArgument("k must be positive".into()));
    }
    let masks: Vec<u32> = if k == 1 {
        (0..n).map(|i| 1u32 << i).collect()
    } else {
        enumerate_kaps(Structure::interval(n), k)
            .into_iter()
            .map(|p| p.elems.iter().fold(0u32, |m, &x| m | 1 << (x - 1)))
            .collect()
    };
    let mut best = 0;
    for set in 0u32..(1u64 << n) as u32 {
        let size = set.count_ones() as usize;
        if size > best && masks.iter().all(|&m| set & m != m) {
            best = size;
        }
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rgs_counts_are_bell_numbers() {
        assert_eq!((0..=10).map(bell).collect::<Vec<_>>(), vec![1, 1, 2, 5, 15, 52, 203, 877, 4140, 21147, 115975]);
        for n in 1..=10 {
            assert_eq!(restricted_growth_strings(n).count() as u128, bell(n), "n={n}");
        }
        let all: Vec<_> = restricted_growth_strings(3).collect();
        assert_eq!(all, vec![vec![0, 0, 0], vec![0, 0, 1], vec![0, 1, 0], vec![0, 1, 1], vec![0, 1, 2]]);
    }

    #[test]
    fn aw_examples() {
        assert_eq!(brute_force_aw(Structure::interval(9), 3).unwrap(), 4);
        assert_eq!(brute_force_aw(Structure::cyclic(5), 3).unwrap(), 3);
        assert_eq!(brute_force_aw(Structure::interval(5), 4).unwrap(), 5);
        assert_eq!(brute_force_aw(Structure::interval(2), 3).unwrap(), 3);
        assert!(matches!(brute_force_aw(Structure::interval(15), 3), Err(Error::LimitExceeded { .. })));
    }

    #[test]
    fn sz_examples() {
        assert_eq!(brute_force_sz(9, 3).unwrap(), 5);
        assert_eq!(brute_force_sz(3, 3).unwrap(), 2);
        assert_eq!(brute_force_sz(8, 4).unwrap(), 6);
        assert_eq!(brute_force_sz(5, 2).unwrap(), 1);
        assert_eq!(brute_force_sz(5, 1).unwrap(), 0);
        assert!(brute_force_sz(31, 3).is_err());
    }
}
