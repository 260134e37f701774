//! `aw(Z_n, 3)` from the factorization of `n`, and singleton extremal
//! colorings of `Z_n` built from the prime factors.

use std::collections::HashMap;
use std::fmt;
use std::sync::{OnceLock, RwLock};

use crate::apcore::{Coloring, Structure};
use crate::arith::{factorize, is_prime, mult_order};
use crate::error::{Error, Result};
use crate::{Color, Factorization64};

/// Why an odd prime is (or is not) of the `aw = 3` kind.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Reason {
    /// 2 generates the units mod `p`.
    Generator,
    /// `(p-1)/2` is odd and is the order of 2.
    HalfOrderOdd,
    Neither,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct PrimeClass {
    pub p: u64,
    /// `aw(Z_p, 3)`, either 3 or 4.
    pub aw: u8,
    pub reason: Reason,
}

/// Multiplicities of the prime-factor kinds of `n`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub struct FCounts {
    /// 1 when `n` is even.
    pub f2: u32,
    /// Odd prime factors with `aw(Z_p, 3) = 3`.
    pub f3: u32,
    /// Odd prime factors with `aw(Z_p, 3) = 4`.
    pub f4: u32,
}

impl FCounts {
    pub fn aw(&self) -> u64 {
        2 + self.f2 as u64 + self.f3 as u64 + 2 * self.f4 as u64
    }
}

impl fmt::Display for FCounts {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "f2={} f3={} f4={}", self.f2, self.f3, self.f4)
    }
}

fn class_memo() -> &'static RwLock<HashMap<u64, PrimeClass>> {
    static MEMO: OnceLock<RwLock<HashMap<u64, PrimeClass>>> = OnceLock::new();
    MEMO.get_or_init(Default::default)
}

/// Classifies an odd prime by the multiplicative order of 2.
///
/// # Panics
/// If `p` is not an odd prime.
pub fn classify_odd_prime(p: u64) -> PrimeClass {
    assert!(p > 2 && is_prime(p), "{p} is not an odd prime");
    if let Some(c) = class_memo().read().unwrap().get(&p) {
        return *c;
    }
    let ord = mult_order(2, p).expect("2 is a unit mod an odd prime");
    let half = (p - 1) / 2;
    let reason = if ord == p - 1 {
        Reason::Generator
    } else if half % 2 == 1 && ord == half {
        Reason::HalfOrderOdd
    } else {
        Reason::Neither
    };
    let class = PrimeClass { p, aw: if reason == Reason::Neither { 4 } else { 3 }, reason };
    class_memo().write().unwrap().insert(p, class);
    class
}

/// # Panics
/// If `n < 1`.
pub fn f_counts(n: u64) -> FCounts {
    let fac: Factorization64 = factorize(n);
    let mut out = FCounts::default();
    for &(p, e) in fac.pairs() {
        if p == 2 {
            out.f2 = 1;
        } else if classify_odd_prime(p).aw == 3 {
            out.f3 += e;
        } else {
            out.f4 += e;
        }
    }
    out
}

/// `aw(Z_n, 3)`; `n = 1` gives 2.
pub fn aw_zn3(n: u64) -> u64 {
    if n <= 1 {
        return 2;
    }
    f_counts(n).aw()
}

// Singleton extremal coloring of Z_p for an odd prime p, the singleton at 0.
//
// The units split into H = <2, -1> and the rest. A 3-AP through 0 is
// {0, d, 2d} or {-d, 0, d}, both inside one coset of H, so coloring 0, H
// and the complement separately leaves no rainbow 3-AP. H is proper exactly
// when aw(Z_p, 3) = 4.
fn prime_base(p: u64) -> Vec<Color> {
    let n = p as usize;
    let mut in_h = vec![false; n];
    let mut stack = vec![1usize];
    in_h[1] = true;
    while let Some(x) = stack.pop() {
        for y in [2 * x % n, n - x] {
            if !in_h[y] {
                in_h[y] = true;
                stack.push(y);
            }
        }
    }
    (0..n).map(|x| if x == 0 { 1 } else if in_h[x] { 2 } else { 3 }).collect()
}

// Colors in 1..=q with a singleton color at position 0.
fn singleton_colors(n: u64) -> Result<Vec<Color>> {
    if n == 1 {
        return Ok(vec![1]);
    }
    if n.is_power_of_two() {
        let mut v = vec![2; n as usize];
        v[0] = 1;
        return Ok(v);
    }
    let s = factorize(n).primes().filter(|&p| p != 2).max().expect("n has an odd prime factor");
    if s == n {
        return Ok(prime_base(s));
    }
    let t = n / s;
    let cs = prime_base(s);
    let ct = singleton_colors(t)?;
    let qs = *cs.iter().max().unwrap();
    let (s, n) = (s as usize, n as usize);
    let mut out = vec![0 as Color; n];
    for (l, slot) in out.iter_mut().enumerate() {
        *slot = if l % s == 0 { ct[l / s] + qs } else { cs[l % s] };
    }
    // Color cs[0] is now unused; close the gap.
    let dropped = cs[0];
    for c in out.iter_mut() {
        if *c > dropped {
            *c -= 1;
        }
    }
    Ok(out)
}

/// An exact `(aw(Z_n,3) - 1)`-coloring of `Z_n` with no rainbow 3-AP in
/// which the color of 0 is used nowhere else.
///
/// The largest odd prime `s` is peeled off: residues `i != 0 (mod s)` take the
/// color of `i` in a singleton coloring of `Z_s`, and multiples `js` take the
/// color of `j` in the coloring of `Z_{n/s}`, on fresh colors.
pub fn singleton_extremal_coloring(n: u64) -> Result<Coloring> {
    if n < 2 {
        return Err(Error::InvalidArgument(format!("n={n} < 2")));
    }
    if n > u32::MAX as u64 {
        return Err(Error::LimitExceeded { n: n as usize, limit: u32::MAX as usize });
    }
    Coloring::new(Structure::cyclic(n as usize), singleton_colors(n)?)
}
