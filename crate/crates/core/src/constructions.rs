//! Explicit colorings that certify lower bounds on `aw`.
//!
//! Every function re-verifies its output by a full scan before returning it.

use num_traits::Zero;

use crate::apcore::{self, Coloring, Structure};
use crate::arith::factorize;
use crate::behrend::{best_behrend_subset, has_punctured_4ap};
use crate::error::{Error, Result};
use crate::{Color, Pos, Ratio64};

/// Default prefix divisor for [`cyclic_witness_from_set`].
pub fn default_cdiv() -> Ratio64 {
    Ratio64::new(16, 5)
}

fn checked(c: Coloring, k: usize) -> Result<Coloring> {
    if let Some(p) = apcore::find_rainbow_kap(&c, k) {
        return Err(Error::BoundViolation(format!("construction produced rainbow {k}-AP {p}")));
    }
    Ok(c)
}

// `set` gets colors 2, 3, ... in position order and everything else color 1.
fn zero_plus_distinct(s: Structure, set: &[Pos]) -> Result<Coloring> {
    let mut assign = vec![1 as Color; s.n];
    let mut sorted = set.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    for (i, &x) in sorted.iter().enumerate() {
        if !s.contains(x) {
            return Err(Error::InvalidArgument(format!("{x} is not in {s}")));
        }
        assign[s.index(x)] = i as Color + 2;
    }
    if sorted.len() == s.n {
        return Err(Error::PreconditionFailed(format!("the set fills {s}, leaving no zero color")));
    }
    Coloring::new(s, assign)
}

/// `S` colored injectively and the rest of `[n]` with one extra color.
/// With no punctured 4-AP in `S` there is no rainbow `k`-AP for `k >= 4`.
pub fn interval_witness_from_set(n: usize, set: &[Pos]) -> Result<Coloring> {
    let as_u64: Vec<u64> = set.iter().map(|&x| x as u64).collect();
    if has_punctured_4ap(&as_u64) {
        return Err(Error::PreconditionFailed("set contains a punctured 4-AP".into()));
    }
    checked(zero_plus_distinct(Structure::interval(n), set)?, 4)
}

/// Behrend set inside the first `floor(n / cdiv)` residues of `Z_n`.
pub fn cyclic_behrend_set(n: usize, cdiv: Ratio64) -> Result<Vec<Pos>> {
    if cdiv <= Ratio64::from_integer(3) {
        return Err(Error::InvalidArgument(format!("cdiv={cdiv} must exceed 3")));
    }
    let len = (Ratio64::from_integer(n as u64) / cdiv).to_integer();
    if len.is_zero() {
        return Ok(Vec::new());
    }
    Ok(best_behrend_subset(len).with_offset(0).values().into_iter().map(|v| v as Pos).collect())
}

/// Cyclic analogue of [`interval_witness_from_set`], with `S` drawn from
/// [`cyclic_behrend_set`].
pub fn cyclic_witness_from_set(n: usize, cdiv: Ratio64) -> Result<Coloring> {
    let set = cyclic_behrend_set(n, cdiv)?;
    checked(zero_plus_distinct(Structure::cyclic(n), &set)?, 4)
}

/// `c(x) = m + 1 - v_3(x)` on `[3^m]`.
pub fn ternary_coloring(m: u32) -> Result<Coloring> {
    let n = 3usize.checked_pow(m).ok_or(Error::Overflow)?;
    let assign = (1..=n)
        .map(|mut x| {
            let mut v = 0;
            while x % 3 == 0 {
                x /= 3;
                v += 1;
            }
            (m + 1 - v) as Color
        })
        .collect();
    checked(Coloring::new(Structure::interval(n), assign)?, 3)
}

/// Lifts a rainbow-3-AP-free coloring of `[n]` to `[3n - s]` with one more
/// color: `i` takes `c((i + s) / 3)` when `3 | i + s` and the new color
/// otherwise. For `s < 0` the `s = 0` rule is used on the longer interval.
pub fn triple_expansion(c: &Coloring, s: i32) -> Result<Coloring> {
    if c.structure().kind != crate::Kind::Interval {
        return Err(Error::InvalidArgument("triple expansion works on [n]".into()));
    }
    if !(-2..=2).contains(&s) {
        return Err(Error::InvalidArgument(format!("s={s} not in -2..=2")));
    }
    let n = c.structure().n as i64;
    if n < s as i64 {
        return Err(Error::PreconditionFailed(format!("n={n} < s={s}")));
    }
    let len = (3 * n - s as i64) as usize;
    let shift = s.max(0) as usize;
    let fresh = c.r() as Color + 1;
    let assign = (1..=len)
        .map(|i| if (i + shift).is_multiple_of(3) { c.color_at((i + shift) / 3) } else { fresh })
        .collect();
    checked(Coloring::new(Structure::interval(len), assign)?, 3)
}

/// Exact `(n-1)`-coloring of `[n]` pairing `ceil(n/2)` with its successor.
/// For `k >= ceil(n/2) + 1` every `k`-AP contains both.
pub fn near_identity_witness(n: usize, k: usize) -> Result<Coloring> {
    let h = n.div_ceil(2);
    if n < 2 || k <= h || k > n {
        return Err(Error::PreconditionFailed(format!("need ceil(n/2) < k <= n, got n={n} k={k}")));
    }
    let assign = (1..=n).map(|i| if i <= h { i } else { i - 1 } as Color).collect();
    checked(Coloring::new(Structure::interval(n), assign)?, k)
}

/// Exact `(n-2)`-coloring of `Z_n`, `n >= 5` composite, with `{0, p, 2p}`
/// one color for the least prime factor `p`.
pub fn zn_nminus2_witness(n: usize) -> Result<Coloring> {
    if n < 5 {
        return Err(Error::PreconditionFailed(format!("n={n} < 5")));
    }
    let p = factorize(n as u64).primes().next().unwrap() as usize;
    if p == n {
        return Err(Error::PreconditionFailed(format!("{n} is prime")));
    }
    let mut assign = vec![0 as Color; n];
    let mut next = 2;
    for (x, slot) in assign.iter_mut().enumerate() {
        if x == 0 || x == p || x == 2 * p {
            *slot = 1;
        } else {
            *slot = next;
            next += 1;
        }
    }
    checked(Coloring::new(Structure::cyclic(n), assign)?, n - 2)
}

/// Whether first-occurrence positions of a coloring of `[n]` at least double
/// from each color to the next, as any rainbow-3-AP-free coloring must.
pub fn b_sequence_doubles(c: &Coloring) -> bool {
    c.first_occurrences().windows(2).all(|w| w[1] >= 2 * w[0])
}
