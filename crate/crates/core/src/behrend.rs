//! Behrend sets: integers whose base-`(2d-1)` digits are all below `d` and
//! whose digit vector has a fixed squared norm.
//!
//! Digits below `d` never carry when two members are added, so a 3-AP among
//! the integers is a 3-AP among digit vectors, which a sphere cannot hold.
//! Three terms of a 4-AP can still occur, so the best subset is checked.

use std::collections::HashSet;

use rayon::prelude::*;

use crate::arith::Word;
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct BehrendParams<T> {
    pub m: u32,
    pub d: T,
    pub ell: T,
}

impl<T: Word> BehrendParams<T> {
    /// Validates `m >= 1`, `d >= 2`, `ell <= m(d-1)^2`, and that `(2d-1)^m` fits `T`.
    pub fn new(m: u32, d: T, ell: T) -> Result<Self> {
        let p = BehrendParams { m, d, ell };
        if m == 0 || d < T::one() + T::one() {
            return Err(Error::InvalidArgument(format!("need m >= 1 and d >= 2, got m={m} d={d}")));
        }
        let dm1 = d - T::one();
        let max_norm = dm1
            .checked_mul(&dm1)
            .and_then(|x| x.checked_mul(&T::from(m)?))
            .ok_or(Error::Overflow)?;
        if ell > max_norm {
            return Err(Error::InvalidArgument(format!("ell={ell} exceeds m(d-1)^2={max_norm}")));
        }
        p.span()?;
        Ok(p)
    }

    pub fn base(&self) -> T {
        self.d + self.d - T::one()
    }

    /// `(2d-1)^m`, the size of the digit range.
    pub fn span(&self) -> Result<T> {
        checked_pow(self.base(), self.m).ok_or(Error::Overflow)
    }
}

fn checked_pow<T: Word>(b: T, e: u32) -> Option<T> {
    let mut acc = T::one();
    for _ in 0..e {
        acc = acc.checked_mul(&b)?;
    }
    Some(acc)
}

/// A Behrend set, stored with an additive offset (0 for the raw set,
/// 1 once moved into `[n] = {1..n}`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BehrendSet<T> {
    pub params: BehrendParams<T>,
    pub offset: T,
    values: Vec<T>,
}

impl<T: Word> BehrendSet<T> {
    /// Members, offset applied, ascending.
    pub fn values(&self) -> Vec<T> {
        self.values.iter().map(|&v| v + self.offset).collect()
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn with_offset(mut self, offset: T) -> Self {
        self.offset = offset;
        self
    }
}

// Walks every digit vector in {0..d-1}^m, calling `f(value, norm)`.
fn for_each_vector<T: Word>(m: u32, d: T, base: T, f: &mut impl FnMut(T, T)) {
    fn go<T: Word>(left: u32, d: T, base: T, place: T, value: T, norm: T, f: &mut impl FnMut(T, T)) {
        if left == 0 {
            f(value, norm);
            return;
        }
        let mut x = T::zero();
        while x < d {
            go(left - 1, d, base, place * base, value + x * place, norm + x * x, f);
            x = x + T::one();
        }
    }
    go(m, d, base, T::one(), T::zero(), T::zero(), f);
}

pub fn behrend_set<T: Word>(p: BehrendParams<T>) -> Result<BehrendSet<T>> {
    let _ = p.span()?;
    let mut values = Vec::new();
    for_each_vector(p.m, p.d, p.base(), &mut |v, norm| {
        if norm == p.ell {
            values.push(v);
        }
    });
    values.sort_unstable();
    Ok(BehrendSet { params: p, offset: T::zero(), values })
}

// Level-set sizes for one (m, d), indexed by ell.
fn level_sizes<T: Word>(m: u32, d: T) -> Vec<usize> {
    let dm1 = (d - T::one()).wide();
    let levels = (m as u128 * dm1 * dm1) as usize + 1;
    let mut counts = vec![0usize; levels];
    for_each_vector(m, d, d + d - T::one(), &mut |_, norm| counts[norm.wide() as usize] += 1);
    counts
}

/// The largest `S_ell(m, d)` fitting in `n` integers that has no punctured
/// 4-AP, shifted into `[n]`.
///
/// Sweeps every `(m, d)` with `(2d-1)^m <= n` and every `ell`; ties go to the
/// smallest `m`, then `d`, then `ell`. Some level sets do hold a punctured
/// 4-AP (`m = 4, d = 2, ell = 2` has 4, 12, 28), so candidates are checked
/// in order of size. For `n < 3` no pair exists and `{1}` is returned.
pub fn best_behrend_subset<T: Word>(n: T) -> BehrendSet<T> {
    let three = T::from(3u8).unwrap();
    let mut pairs: Vec<(u32, T)> = Vec::new();
    let mut m = 1u32;
    while checked_pow(three, m).is_some_and(|x| x <= n) {
        // With one digit every level holds at most one vector.
        if m == 1 {
            pairs.push((1, T::one() + T::one()));
        } else {
            let mut d = T::one() + T::one();
            while checked_pow(d + d - T::one(), m).is_some_and(|x| x <= n) {
                pairs.push((m, d));
                d = d + T::one();
            }
        }
        m += 1;
    }
    let mut cands: Vec<(usize, u32, T, T)> = pairs
        .par_iter()
        .flat_map_iter(|&(m, d)| {
            level_sizes(m, d)
                .into_iter()
                .enumerate()
                .filter(|&(_, c)| c > 0)
                .map(move |(ell, c)| (c, m, d, T::narrow(ell as u128)))
        })
        .collect();
    cands.sort_by(|a, b| b.0.cmp(&a.0).then(a.1.cmp(&b.1)).then(a.2.cmp(&b.2)).then(a.3.cmp(&b.3)));
    for (_, m, d, ell) in cands {
        let set = behrend_set(BehrendParams { m, d, ell }).expect("swept parameters fit");
        if !has_punctured_4ap(&set.values) {
            return set.with_offset(T::one());
        }
    }
    BehrendSet { params: BehrendParams { m: 1, d: T::one(), ell: T::zero() }, offset: T::one(), values: vec![T::zero()] }
}

/// Whether `s` contains three members in arithmetic progression.
pub fn has_3ap<T: Word>(s: &[T]) -> bool {
    let mut v = s.to_vec();
    v.sort_unstable();
    v.dedup();
    let set: HashSet<T> = v.iter().copied().collect();
    for (i, &x) in v.iter().enumerate() {
        for &y in &v[i + 1..] {
            if (y - x).checked_add(&y).is_some_and(|z| set.contains(&z)) {
                return true;
            }
        }
    }
    false
}

/// Whether `s` contains three members of some 4-AP.
///
/// For `x < y < z` these are 3-APs, `z - y = 2(y - x)`, and `y - x = 2(z - y)`.
pub fn has_punctured_4ap<T: Word>(s: &[T]) -> bool {
    let mut v = s.to_vec();
    v.sort_unstable();
    v.dedup();
    let set: HashSet<T> = v.iter().copied().collect();
    let two = T::one() + T::one();
    let hit = |z: Option<T>| z.is_some_and(|z| set.contains(&z));
    for (i, &x) in v.iter().enumerate() {
        for &y in &v[i + 1..] {
            let g = y - x;
            if hit(y.checked_add(&g)) || hit(g.checked_mul(&two).and_then(|g2| y.checked_add(&g2))) {
                return true;
            }
            if g % two == T::zero() && hit(y.checked_add(&(g / two))) {
                return true;
            }
        }
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;

    // Scan every (a, d) over the range of `s`.
    fn brute_3ap(s: &[u64]) -> bool {
        let set: HashSet<u64> = s.iter().copied().collect();
        let hi = s.iter().copied().max().unwrap_or(0);
        (0..=hi).any(|a| (1..=hi).any(|d| (0..3).all(|i| set.contains(&(a + i * d)))))
    }

    fn brute_punctured(s: &[u64]) -> bool {
        let set: HashSet<u64> = s.iter().copied().collect();
        let hi = s.iter().copied().max().unwrap_or(0);
        (0..=hi).any(|a| {
            (1..=hi).any(|d| (0..4).map(|i| set.contains(&(a + i * d))).filter(|&b| b).count() >= 3)
        })
    }

    #[test]
    fn small_sets() {
        let v = |p: BehrendParams<u64>| behrend_set(p).unwrap().values();
        assert_eq!(v(BehrendParams::new(2, 2, 1).unwrap()), vec![1, 3]);
        assert_eq!(v(BehrendParams::new(1, 4, 4).unwrap()), vec![2]);
        assert_eq!(v(BehrendParams::new(2, 3, 4).unwrap()), vec![2, 10]);
    }

    #[test]
    fn params_validated() {
        assert!(BehrendParams::<u64>::new(0, 2, 0).is_err());
        assert!(BehrendParams::<u64>::new(2, 1, 0).is_err());
        assert!(BehrendParams::<u64>::new(2, 2, 3).is_err());
        assert!(matches!(BehrendParams::<u8>::new(6, 2, 1), Err(Error::Overflow)));
        assert!(matches!(BehrendParams::<u64>::new(41, 2, 1), Err(Error::Overflow)));
        assert!(BehrendParams::<u8>::new(5, 2, 1).is_ok());
    }

    #[test]
    fn detectors_match_brute_force() {
        assert!(has_punctured_4ap(&[1u64, 2, 4]));
        assert!(has_3ap(&[1u64, 2, 3]));
        assert!(!has_3ap(&[1u64, 2, 4]));
        assert!(!has_punctured_4ap(&[1u64, 2, 9]));
        // every subset of {0..9}
        for mask in 0u32..1 << 10 {
            let s: Vec<u64> = (0..10).filter(|i| mask >> i & 1 == 1).collect();
            assert_eq!(has_3ap(&s), brute_3ap(&s), "{s:?}");
            assert_eq!(has_punctured_4ap(&s), brute_punctured(&s), "{s:?}");
        }
    }

    #[test]
    fn generic_widths_agree() {
        let a = behrend_set(BehrendParams::<u16>::new(3, 3, 4).unwrap()).unwrap().values();
        let b = behrend_set(BehrendParams::<u64>::new(3, 3, 4).unwrap()).unwrap().values();
        assert_eq!(a.iter().map(|&x| x as u64).collect::<Vec<_>>(), b);
    }

    #[test]
    fn best_subset_small_n() {
        assert_eq!(best_behrend_subset(1u64).values(), vec![1]);
        assert_eq!(best_behrend_subset(3u64).len(), 1);
        let s = best_behrend_subset(9u64);
        assert!(s.len() >= 2);
        assert!(s.values().iter().all(|&x| (1..=9).contains(&x)));
        let big = best_behrend_subset(2000u64);
        let v = big.values();
        assert!(*v.last().unwrap() <= 2000 && v[0] >= 1);
        assert!(!has_punctured_4ap(&v));
        assert!(v.len() >= 12);
    }

    #[test]
    fn some_level_sets_hold_punctured_4aps() {
        let s = behrend_set(BehrendParams::<u64>::new(4, 2, 2).unwrap()).unwrap().values();
        assert!(!has_3ap(&s));
        assert!(has_punctured_4ap(&s));
        assert!(s.contains(&4) && s.contains(&12) && s.contains(&28));
    }
}
