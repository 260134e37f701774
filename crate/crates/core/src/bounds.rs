//! Analytic and cache-driven bounds on `aw`.
//!
//! [`bounds_for`] gathers every rule that applies to an instance into a
//! [`BoundReport`]; the solver starts its ascent at the lower end and treats
//! a result outside the report as an error. All logarithms are integer
//! power comparisons.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Mutex, OnceLock};

use crate::apcore::{Kind, Structure};
use crate::arith::is_prime;
use crate::behrend::best_behrend_subset;
use crate::closedform::aw_zn3;
use crate::constructions::{cyclic_behrend_set, default_cdiv};
use crate::solver::sz_table;
use crate::store::{AwLookup, Store};

/// Smallest `e` with `base^e >= n`.
pub fn ceil_log(base: u64, n: u64) -> u32 {
    let mut e = 0;
    let mut p = 1u128;
    while p < n as u128 {
        p *= base as u128;
        e += 1;
    }
    e
}

/// `aw([n], 3) >= ceil(log3 n) + 2`.
pub fn lower_n3(n: usize) -> usize {
    ceil_log(3, n as u64) as usize + 2
}

/// `aw([n], 3) <= ceil(log2 n) + 1`, for `n >= 9`.
pub fn upper_n3(n: usize) -> Option<usize> {
    (n >= 9).then(|| ceil_log(2, n as u64) as usize + 1)
}

/// `aw` values that need no computation: `|S| < k`, `k = 2`, `k = |S|`.
pub fn known_aw(cache: &dyn AwLookup, kind: Kind, n: usize, k: usize) -> Option<usize> {
    if n < k {
        Some(n + 1)
    } else if k == 2 {
        Some(2)
    } else if k == n {
        Some(n)
    } else {
        cache.lookup(kind, n, k)
    }
}

fn interval(cache: &dyn AwLookup, n: usize, k: usize) -> Option<usize> {
    known_aw(cache, Kind::Interval, n, k)
}

/// Best `aw([m],3) + l` over cached `m < n < 2^l (m+1)`, with the `(m, l)` used.
pub fn recursive_upper_n3(n: usize, cache: &dyn AwLookup) -> Option<(usize, usize, usize)> {
    let mut best: Option<(usize, usize, usize)> = None;
    for m in 1..n {
        let Some(a) = interval(cache, m, 3) else { continue };
        let mut l = 1;
        while (m + 1) << l <= n {
            l += 1;
        }
        if best.is_none_or(|b| a + l < b.0) {
            best = Some((a + l, m, l));
        }
    }
    best
}

/// `1 + max aw([m],3)` over `m <= n/2`; `None` unless all are known.
pub fn halving_upper_n3(n: usize, cache: &dyn AwLookup) -> Option<usize> {
    if n < 2 {
        return None;
    }
    let mut top = 0;
    for m in 1..=n / 2 {
        top = top.max(interval(cache, m, 3)?);
    }
    Some(top + 1)
}

/// Best `aw([n1],k) + aw([n2],k) - 1` over `n1 + n2 = n`, `k <= n1 <= n2`;
/// `n + 1` when no split has both values known.
pub fn sum_upper(n: usize, k: usize, cache: &dyn AwLookup) -> usize {
    split_bound(n, k, |m| interval(cache, m, k)).map_or(n + 1, |(v, _)| v)
}

fn split_bound(n: usize, k: usize, aw: impl Fn(usize) -> Option<usize>) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize)> = None;
    for n1 in k..=n / 2 {
        if let (Some(a), Some(b)) = (aw(n1), aw(n - n1)) {
            if best.is_none_or(|x| a + b - 1 < x.0) {
                best = Some((a + b - 1, n1));
            }
        }
    }
    best
}

pub const SZ_SANDWICH_LIMIT: usize = 48;

fn sz_memo(n: usize, k: usize) -> Option<usize> {
    match k {
        0 | 1 => return Some(0),
        2 => return Some(n.min(1)),
        _ => {}
    }
    static MEMO: OnceLock<Mutex<HashMap<usize, Vec<usize>>>> = OnceLock::new();
    let memo = MEMO.get_or_init(Default::default);
    if let Some(t) = memo.lock().unwrap().get(&k).filter(|t| t.len() > n) {
        return Some(t[n]);
    }
    let t = sz_table(n, k).ok()?;
    let v = t[n];
    let mut guard = memo.lock().unwrap();
    let e = guard.entry(k).or_default();
    if e.len() < t.len() {
        *e = t;
    }
    Some(v)
}

/// `(sz(n, k/2) + 2, sz(n, k) + 1)` for `n > k >= 3`; `None` when
/// inapplicable or `n` is above [`SZ_SANDWICH_LIMIT`].
pub fn sz_sandwich(n: usize, k: usize) -> Option<(usize, usize)> {
    if k < 3 || n <= k || n > SZ_SANDWICH_LIMIT {
        return None;
    }
    Some((sz_memo(n, k / 2)? + 2, sz_memo(n, k)? + 1))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    Lower,
    Upper,
    Exact,
}

/// One applied rule.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Provenance {
    pub rule: &'static str,
    pub side: Side,
    pub value: usize,
    pub detail: String,
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let op = match self.side {
            Side::Lower => ">=",
            Side::Upper => "<=",
            Side::Exact => "=",
        };
        write!(f, "{} {op} {} ({})", self.rule, self.value, self.detail)
    }
}

#[derive(Clone, Debug)]
pub struct BoundReport {
    pub structure: Structure,
    pub k: usize,
    pub lower: usize,
    pub upper: usize,
    pub provenance: Vec<Provenance>,
}

impl BoundReport {
    fn new(structure: Structure, k: usize) -> Self {
        BoundReport { structure, k, lower: 1, upper: structure.n + 1, provenance: Vec::new() }
    }

    fn add(&mut self, rule: &'static str, side: Side, value: usize, detail: impl Into<String>) {
        if matches!(side, Side::Lower | Side::Exact) {
            self.lower = self.lower.max(value);
        }
        if matches!(side, Side::Upper | Side::Exact) {
            self.upper = self.upper.min(value);
        }
        self.provenance.push(Provenance { rule, side, value, detail: detail.into() });
    }

    pub fn is_exact(&self) -> bool {
        self.lower == self.upper
    }

    /// Rules that `value` would break.
    pub fn violated_by(&self, value: usize) -> Vec<&Provenance> {
        self.provenance
            .iter()
            .filter(|p| match p.side {
                Side::Lower => value < p.value,
                Side::Upper => value > p.value,
                Side::Exact => value != p.value,
            })
            .collect()
    }

    /// The rules that set the final lower and upper ends.
    pub fn provenance_summary(&self) -> String {
        let lo = self.provenance.iter().filter(|p| p.side != Side::Upper && p.value == self.lower).map(|p| p.rule);
        let hi = self.provenance.iter().filter(|p| p.side != Side::Lower && p.value == self.upper).map(|p| p.rule);
        format!(
            "lower {} from {}; upper {} from {}",
            self.lower,
            lo.collect::<Vec<_>>().join(", "),
            self.upper,
            hi.collect::<Vec<_>>().join(", ")
        )
    }
}

impl fmt::Display for BoundReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{} k={}: {} <= aw <= {}", self.structure, self.k, self.lower, self.upper)?;
        for p in &self.provenance {
            writeln!(f, "  {p}")?;
        }
        Ok(())
    }
}

/// Every applicable bound on `aw(s, k)` from analytic rules and `cache`.
pub fn bounds_for(s: Structure, k: usize, cache: &dyn AwLookup) -> BoundReport {
    let n = s.n;
    let mut r = BoundReport::new(s, k);
    if n < k {
        r.add("no-progression", Side::Exact, n + 1, format!("{n} < k"));
        return r;
    }
    if k <= 2 {
        r.add("two-term", Side::Exact, 2, "every pair of colors is a rainbow 2-AP");
        return r;
    }
    r.add("too-few-colors", Side::Lower, k, "k-1 colors cannot make a k-AP rainbow");
    r.add("injective", Side::Upper, n, "an n-coloring makes every k-AP rainbow");
    if let Some(v) = cache.lookup(s.kind, n, k) {
        r.add("cached", Side::Exact, v, "store record");
    }
    if let Some(v) = cache.lookup(s.kind, n, k + 1) {
        r.add("k-monotone", Side::Upper, v, format!("aw(k+1)={v}"));
    }
    if k > 3 {
        if let Some(v) = cache.lookup(s.kind, n, k - 1) {
            r.add("k-monotone", Side::Lower, v, format!("aw(k-1)={v}"));
        }
    }
    match s.kind {
        Kind::Interval => interval_rules(&mut r, n, k, cache),
        Kind::Cyclic => cyclic_rules(&mut r, n, k, cache),
    }
    r
}

fn interval_rules(r: &mut BoundReport, n: usize, k: usize, cache: &dyn AwLookup) {
    if let Some(v) = interval(cache, n - 1, k) {
        r.add("drop-one", Side::Upper, v + 1, format!("aw([{}])={v}", n - 1));
    }
    if let Some(v) = interval(cache, n + 1, k) {
        r.add("drop-one", Side::Lower, v.saturating_sub(1), format!("aw([{}])={v}", n + 1));
    }
    if k > n.div_ceil(2) {
        r.add("near-identity", Side::Exact, n, format!("k > ceil({n}/2)"));
    } else {
        r.add("near-identity", Side::Upper, n - 1, format!("k <= ceil({n}/2)"));
    }
    if k == 3 {
        r.add("log3", Side::Lower, lower_n3(n), format!("ceil(log3 {n}) + 2"));
        if let Some(u) = upper_n3(n) {
            r.add("log2", Side::Upper, u, format!("ceil(log2 {n}) + 1"));
        }
        if let Some((v, m, l)) = recursive_upper_n3(n, cache) {
            r.add("doubling", Side::Upper, v, format!("m={m} l={l}"));
        }
        if let Some(v) = halving_upper_n3(n, cache) {
            r.add("halving", Side::Upper, v, format!("max over m <= {}", n / 2));
        }
        for sh in -2i64..=2 {
            let t = n as i64 + sh;
            if t % 3 != 0 {
                continue;
            }
            let m = (t / 3) as usize;
            if m >= 1 && (m as i64) >= sh && m < n {
                if let Some(v) = interval(cache, m, 3) {
                    r.add("tripling", Side::Lower, v + 1, format!("n = 3*{m} - ({sh}), aw([{m}])={v}"));
                }
            }
        }
    }
    if let Some((v, n1)) = split_bound(n, k, |m| interval(cache, m, k)) {
        r.add("split-sum", Side::Upper, v, format!("{n1} + {}", n - n1));
    }
    if k >= 6 {
        if let Some((lo, hi)) = sz_sandwich(n, k) {
            r.add("sz-sandwich", Side::Lower, lo, format!("sz({n},{}) + 2", k / 2));
            r.add("sz-sandwich", Side::Upper, hi, format!("sz({n},{k}) + 1"));
        }
    }
    if k >= 4 {
        let set = best_behrend_subset(n as u64);
        if set.len() < n {
            r.add(
                "punctured-free-set",
                Side::Lower,
                set.len() + 2,
                format!("Behrend set of size {} (m={} d={})", set.len(), set.params.m, set.params.d),
            );
        }
    }
}

fn cyclic_rules(r: &mut BoundReport, n: usize, k: usize, cache: &dyn AwLookup) {
    if k == 3 {
        r.add("closed-form", Side::Exact, aw_zn3(n as u64) as usize, "prime factor counts");
    }
    if let Some(v) = interval(cache, n, k) {
        r.add("below-interval", Side::Upper, v, format!("aw([{n}])={v}"));
    }
    if k == n {
        r.add("full-length", Side::Exact, n, "k = n");
    } else {
        r.add("full-length", Side::Upper, n - 1, "k < n");
    }
    if k + 1 == n {
        r.add("n-minus-1", Side::Exact, n - 1, "k = n-1");
    }
    if n >= 5 && k + 2 == n {
        if is_prime(n as u64) {
            r.add("n-minus-2", Side::Exact, n - 2, "k = n-2, n prime");
        } else {
            r.add("n-minus-2", Side::Exact, n - 1, "k = n-2, n composite");
        }
    }
    if k >= 4 {
        if let Ok(set) = cyclic_behrend_set(n, default_cdiv()) {
            if !set.is_empty() {
                r.add("punctured-free-set", Side::Lower, set.len() + 2, format!("size {} in the first n/cdiv residues", set.len()));
            }
        }
    }
}

// The store minus one key, so a record can be audited against the others.
struct Without<'a> {
    inner: &'a dyn AwLookup,
    key: (Kind, usize, usize),
}

impl AwLookup for Without<'_> {
    fn lookup(&self, kind: Kind, n: usize, k: usize) -> Option<usize> {
        if (kind, n, k) == self.key {
            None
        } else {
            self.inner.lookup(kind, n, k)
        }
    }
}

/// A record breaking a bound rule.
#[derive(Clone, Debug)]
pub struct Violation {
    pub structure: Structure,
    pub k: usize,
    pub aw: usize,
    pub rule: &'static str,
    pub bound: usize,
    pub detail: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} k={}: aw={} breaks {} bound {} ({})", self.structure, self.k, self.aw, self.rule, self.bound, self.detail)
    }
}

/// Checks every record against the bounds derived from all other records.
/// An empty result means the store is consistent.
pub fn audit(store: &Store) -> Vec<Violation> {
    let mut out = Vec::new();
    for rec in store.records() {
        let s = rec.structure();
        let rest = Without { inner: store, key: rec.key() };
        let rep = bounds_for(s, rec.k, &rest);
        for p in rep.violated_by(rec.aw) {
            out.push(Violation { structure: s, k: rec.k, aw: rec.aw, rule: p.rule, bound: p.value, detail: p.detail.clone() });
        }
    }
    out
}

/// Interval-only rules applied to cyclic records, reporting where they fail:
/// `aw(Z_n,k) <= aw(Z_{n-1},k) + 1` and the split sum over `Z_{n1}`, `Z_{n2}`.
pub fn cyclic_interval_rule_failures(store: &Store) -> Vec<Violation> {
    let mut out = Vec::new();
    let cyc = |n: usize, k: usize| known_aw(store, Kind::Cyclic, n, k);
    for rec in store.records().filter(|r| r.structure == Kind::Cyclic) {
        let (n, k) = (rec.n, rec.k);
        if n < 2 || k < 3 {
            continue;
        }
        let s = rec.structure();
        if let Some(v) = cyc(n - 1, k) {
            if rec.aw > v + 1 {
                out.push(Violation { structure: s, k, aw: rec.aw, rule: "drop-one", bound: v + 1, detail: format!("aw(Z_{})={v}", n - 1) });
            }
        }
        for n1 in k..=n / 2 {
            if let (Some(a), Some(b)) = (cyc(n1, k), cyc(n - n1, k)) {
                if rec.aw > a + b - 1 {
                    out.push(Violation {
                        structure: s,
                        k,
                        aw: rec.aw,
                        rule: "split-sum",
                        bound: a + b - 1,
                        detail: format!("aw(Z_{n1})={a} + aw(Z_{})={b} - 1", n - n1),
                    });
                }
            }
        }
    }
    out
}
