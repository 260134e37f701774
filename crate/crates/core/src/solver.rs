//! Backtracking search for exact `r`-colorings without a rainbow `k`-AP.
//!
//! Positions are filled left to right. Each uncolored position `t` carries a
//! domain `D(t)` of colors that do not immediately complete a rainbow
//! progression: when the second-largest member of a progression is colored
//! and the other `k-1` colored members are pairwise distinct, the largest
//! member must repeat one of them, so its domain is intersected with those
//! colors. Domains only ever shrink during a descent and are restored from a
//! trail on backtrack.
//!
//! Pruning rules, each of which can be switched off without changing answers:
//!
//! * lexicographic minimality: color `a` may only be introduced after
//!   colors `1..a` have appeared, so position `i` tries `D(i) ∩ [maxUsed+1]`;
//! * domain union: the used colors together with every open domain must
//!   still cover `[r]`, and there must be enough open positions left;
//! * suffix capacity: positions `j..n` are a copy of `[n-j]`
//!   and so show at most `aw([n-j], k) - 1` colors. With positions `..i`
//!   colored, every `1 <= j < i` needs the colors seen before `j` but not in
//!   `j..i`, plus that capacity, to reach `r`. When the first `i` positions
//!   are all color 1 this is the rule `aw([n-i+1], k) > r`;
//! * symmetry (with lexicographic minimality): on `Z_n` a rotation puts a
//!   member of a smallest color class at 0, so no color may end up rarer
//!   than color 1. Among such colorings only those that no affine map
//!   `x -> u*x + t` (or, on `[n]`, the reflection) turns into a
//!   lexicographically smaller one are kept.
//!
//! An emptied domain cuts the branch immediately.

use std::sync::atomic::{AtomicBool, AtomicU64, Ordering};
use std::time::{Duration, Instant};

use rayon::prelude::*;

use crate::apcore::{self, enumerate_kaps, Coloring, Kind, Structure};
use crate::bounds;
use crate::error::{Error, Result};
use crate::store::{AwLookup, AwRecord, Method, Store};
use crate::Color;

mod symmetry;

use symmetry::LexLeader;

/// Largest color count the bitmask domains can hold.
pub const MAX_COLORS: usize = 64;

#[derive(Clone, Debug)]
pub struct SearchOptions {
    pub lex_min: bool,
    pub domain_union: bool,
    /// Suffix capacity rule. Required on `[n]`; on `Z_n` it applies when
    /// the cache has the interval values.
    pub prefix: bool,
    /// Symmetry rule; needs `lex_min` and is ignored with seeded domains.
    pub symmetry: bool,
    pub max_nodes: Option<u64>,
    pub timeout: Option<Duration>,
    /// Worker threads; 1 searches sequentially and returns the lexicographically least witness.
    pub jobs: usize,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions { lex_min: true, domain_union: true, prefix: true, symmetry: true, max_nodes: None, timeout: None, jobs: 1 }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SearchOutcome {
    Witness(Coloring),
    Exhausted,
    /// Node budget or timeout hit before the search finished.
    Inconclusive,
}

#[derive(Clone, Debug)]
pub struct SearchResult {
    pub outcome: SearchOutcome,
    pub nodes: u64,
}

impl SearchResult {
    pub fn witness(&self) -> Option<&Coloring> {
        match &self.outcome {
            SearchOutcome::Witness(c) => Some(c),
            _ => None,
        }
    }
}

#[inline]
fn bit(c: u8) -> u64 {
    1u64 << (c - 1)
}

#[inline]
fn low_mask(r: usize) -> u64 {
    if r >= 64 {
        u64::MAX
    } else {
        (1u64 << r) - 1
    }
}

/// Precomputed instance: constraint lists and prefix thresholds.
struct Problem {
    s: Structure,
    n: usize,
    k: usize,
    r: usize,
    full: u64,
    /// `cons[start[j]..start[j+1]]` holds, per progression whose second-largest
    /// member is index `j`, its largest member followed by the other `k-1` members.
    start: Vec<usize>,
    cons: Vec<u32>,
    /// `suffix_aw[j]` = `aw([n-j], k)` for `1 <= j < n`.
    suffix_aw: Option<Vec<usize>>,
    initial: Vec<u64>,
    symmetry: bool,
    opts: SearchOptions,
}

impl Problem {
    fn new(s: Structure, k: usize, r: usize, cache: &dyn AwLookup, opts: &SearchOptions, initial: Option<Vec<u64>>) -> Result<Self> {
        if r == 0 || r > MAX_COLORS {
            return Err(if r == 0 { Error::InvalidArgument("r must be positive".into()) } else { Error::TooManyColors(r) });
        }
        if k < 2 {
            return Err(Error::InvalidArgument(format!("k={k} < 2")));
        }
        let n = s.n;
        let mut by_second: Vec<Vec<u32>> = vec![Vec::new(); n];
        for p in enumerate_kaps(s, k) {
            let idx: Vec<u32> = p.sorted().iter().map(|&x| s.index(x) as u32).collect();
            let second = idx[k - 2] as usize;
            let list = &mut by_second[second];
            list.push(idx[k - 1]);
            list.extend_from_slice(&idx[..k - 1]);
        }
        let mut start = Vec::with_capacity(n + 1);
        let mut cons = Vec::new();
        for list in by_second {
            start.push(cons.len());
            cons.extend(list);
        }
        start.push(cons.len());

        let suffix_aw = if opts.prefix {
            let caps: Option<Vec<usize>> = (1..n).map(|j| bounds::known_aw(cache, Kind::Interval, n - j, k)).collect();
            match caps {
                Some(c) => Some([usize::MAX].into_iter().chain(c).collect()),
                None if s.kind == Kind::Interval => {
                    let m = (1..n).find(|&m| bounds::known_aw(cache, Kind::Interval, m, k).is_none()).unwrap();
                    return Err(Error::CacheMiss { m, k });
                }
                None => None,
            }
        } else {
            None
        };

        let full = low_mask(r);
        let symmetry = opts.symmetry && opts.lex_min && initial.is_none();
        let initial = match initial {
            Some(d) => {
                assert_eq!(d.len(), n);
                d.into_iter().map(|x| x & full).collect()
            }
            None => vec![full; n],
        };
        Ok(Problem { s, n, k, r, full, start, cons, suffix_aw, initial, symmetry, opts: opts.clone() })
    }
}

struct Shared {
    nodes: AtomicU64,
    abort: AtomicBool,
    found: AtomicBool,
    deadline: Option<Instant>,
    max_nodes: Option<u64>,
}

#[derive(Clone)]
struct Snapshot {
    i: usize,
    used: u64,
    max_used: u8,
    assign: Vec<u8>,
    dom: Vec<u64>,
}

#[derive(PartialEq, Eq)]
enum Flow {
    Continue,
    Found,
    Abort,
}

struct Worker<'a> {
    p: &'a Problem,
    shared: &'a Shared,
    assign: Vec<u8>,
    /// `used_at[j]`: colors on positions `..j` along the current branch.
    used_at: Vec<u64>,
    sym: Option<LexLeader>,
    /// Positions so far per color, indexed by color.
    count: [u32; MAX_COLORS + 1],
    dom: Vec<u64>,
    trail: Vec<(u32, u64)>,
    pending: u64,
    witness: Option<Vec<u8>>,
    /// When set, nodes at this depth are recorded instead of expanded.
    frontier_depth: Option<usize>,
    frontier: Vec<Snapshot>,
    /// Parallel workers stop as soon as any worker has a witness.
    stop_on_found: bool,
}

impl<'a> Worker<'a> {
    fn new(p: &'a Problem, shared: &'a Shared) -> Self {
        Worker {
            p,
            shared,
            assign: vec![0; p.n],
            used_at: vec![0; p.n + 1],
            sym: p.symmetry.then(|| LexLeader::new(p.s, p.r, p.s.kind == Kind::Cyclic)),
            count: [0; MAX_COLORS + 1],
            dom: p.initial.clone(),
            trail: Vec::with_capacity(p.n * 8),
            pending: 0,
            witness: None,
            frontier_depth: None,
            frontier: Vec::new(),
            stop_on_found: false,
        }
    }

    fn flush(&mut self) -> bool {
        let total = self.shared.nodes.fetch_add(self.pending, Ordering::Relaxed) + self.pending;
        self.pending = 0;
        if self.shared.max_nodes.is_some_and(|m| total > m) || self.shared.deadline.is_some_and(|d| Instant::now() > d) {
            self.shared.abort.store(true, Ordering::Relaxed);
        }
        self.shared.abort.load(Ordering::Relaxed) || (self.stop_on_found && self.shared.found.load(Ordering::Relaxed))
    }

    fn dfs(&mut self, i: usize, used: u64, max_used: u8) -> Flow {
        self.pending += 1;
        if self.pending >= 1024 && self.flush() {
            return Flow::Abort;
        }
        let p = self.p;
        if i == p.n {
            if used == p.full {
                self.witness = Some(self.assign.clone());
                self.shared.found.store(true, Ordering::Relaxed);
                return Flow::Found;
            }
            return Flow::Continue;
        }
        if p.opts.domain_union {
            let mut union = used;
            for &d in &self.dom[i..] {
                union |= d;
            }
            if union != p.full || ((p.full & !used).count_ones() as usize) > p.n - i {
                return Flow::Continue;
            }
        }
        if p.symmetry && p.s.kind == Kind::Cyclic && self.count[1] > 1 {
            let ones = self.count[1] as usize;
            let deficit: usize = self.count[2..=p.r].iter().map(|&c| ones.saturating_sub(c as usize)).sum();
            if deficit > p.n - i {
                return Flow::Continue;
            }
            let mut reach = self.count;
            for &d in &self.dom[i..] {
                let mut d = d;
                while d != 0 {
                    reach[d.trailing_zeros() as usize + 1] += 1;
                    d &= d - 1;
                }
            }
            if reach[2..=p.r].iter().any(|&c| (c as usize) < ones) {
                return Flow::Continue;
            }
        }
        self.used_at[i] = used;
        if let Some(cap) = &p.suffix_aw {
            let mut seg = 0u64;
            for j in (1..i).rev() {
                seg |= bit(self.assign[j]);
                let before = (self.used_at[j] & !seg).count_ones() as usize;
                if before + cap[j] - 1 < p.r {
                    return Flow::Continue;
                }
            }
        }
        if self.frontier_depth == Some(i) {
            self.frontier.push(Snapshot { i, used, max_used, assign: self.assign.clone(), dom: self.dom.clone() });
            return Flow::Continue;
        }
        let Some(sym) = self.sym.as_mut() else {
            return self.branch(i, used, max_used);
        };
        let mark = sym.mark();
        let flow = if sym.check(i, &self.assign) { self.branch(i, used, max_used) } else { Flow::Continue };
        if let Some(sym) = self.sym.as_mut() {
            sym.undo_to(mark);
        }
        flow
    }

    fn branch(&mut self, i: usize, used: u64, max_used: u8) -> Flow {
        let p = self.p;
        let mut cand = self.dom[i];
        if p.opts.lex_min {
            cand &= low_mask(max_used as usize + 1);
        }
        let saved = self.dom[i];
        let (lo, hi) = (p.start[i], p.start[i + 1]);
        let k = p.k;
        while cand != 0 {
            let a = cand.trailing_zeros() as u8 + 1;
            cand &= cand - 1;
            self.assign[i] = a;
            self.dom[i] = bit(a);
            let mark = self.trail.len();
            let mut wiped = false;
            let mut off = lo;
            while off < hi {
                let t = p.cons[off] as usize;
                let mut colors = 0u64;
                for &o in &p.cons[off + 1..off + k] {
                    colors |= bit(self.assign[o as usize]);
                }
                off += k;
                if colors.count_ones() as usize == k - 1 {
                    let old = self.dom[t];
                    let new = old & colors;
                    if new != old {
                        self.trail.push((t as u32, old));
                        self.dom[t] = new;
                        if new == 0 {
                            wiped = true;
                            break;
                        }
                    }
                }
            }
            let flow = if wiped {
                Flow::Continue
            } else {
                self.count[a as usize] += 1;
                let f = self.dfs(i + 1, used | bit(a), max_used.max(a));
                self.count[a as usize] -= 1;
                f
            };
            while self.trail.len() > mark {
                let (t, old) = self.trail.pop().unwrap();
                self.dom[t as usize] = old;
            }
            self.dom[i] = saved;
            self.assign[i] = 0;
            if flow != Flow::Continue {
                return flow;
            }
        }
        Flow::Continue
    }

    fn resume(&mut self, snap: &Snapshot) -> Flow {
        self.assign.clone_from(&snap.assign);
        self.dom.clone_from(&snap.dom);
        self.trail.clear();
        let mut used = 0;
        self.count = [0; MAX_COLORS + 1];
        for j in 0..snap.i {
            self.used_at[j] = used;
            used |= bit(self.assign[j]);
            self.count[self.assign[j] as usize] += 1;
        }
        if let Some(sym) = self.sym.as_mut() {
            for j in 0..snap.i {
                sym.check(j, &self.assign);
            }
        }
        let flow = self.dfs(snap.i, snap.used, snap.max_used);
        self.flush();
        flow
    }
}

fn run(p: &Problem) -> Result<(Option<Vec<u8>>, u64, bool)> {
    let shared = Shared {
        nodes: AtomicU64::new(0),
        abort: AtomicBool::new(false),
        found: AtomicBool::new(false),
        deadline: p.opts.timeout.map(|t| Instant::now() + t),
        max_nodes: p.opts.max_nodes,
    };
    let jobs = p.opts.jobs.max(1);
    if jobs == 1 || p.n < 8 {
        let mut w = Worker::new(p, &shared);
        let flow = w.dfs(0, 0, 0);
        w.flush();
        let nodes = shared.nodes.load(Ordering::Relaxed);
        return Ok((w.witness, nodes, flow == Flow::Abort));
    }

    // Split at the shallowest depth that yields enough independent subtrees.
    let mut frontier = Vec::new();
    let mut depth = 1;
    while depth < p.n - 2 {
        let mut w = Worker::new(p, &shared);
        w.frontier_depth = Some(depth);
        let flow = w.dfs(0, 0, 0);
        w.flush();
        if flow == Flow::Found {
            return Ok((w.witness, shared.nodes.load(Ordering::Relaxed), false));
        }
        if flow == Flow::Abort {
            return Ok((None, shared.nodes.load(Ordering::Relaxed), true));
        }
        frontier = w.frontier;
        if frontier.len() >= jobs * 16 {
            break;
        }
        depth += 1;
    }

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| Error::InvalidArgument(e.to_string()))?;
    let witness = pool.install(|| {
        frontier.par_iter().find_map_first(|snap| {
            if shared.found.load(Ordering::Relaxed) || shared.abort.load(Ordering::Relaxed) {
                return None;
            }
            let mut w = Worker::new(p, &shared);
            w.stop_on_found = true;
            match w.resume(snap) {
                Flow::Found => w.witness,
                _ => None,
            }
        })
    });
    let aborted = witness.is_none() && shared.abort.load(Ordering::Relaxed);
    Ok((witness, shared.nodes.load(Ordering::Relaxed), aborted))
}

fn finish(s: Structure, k: usize, r: usize, found: (Option<Vec<u8>>, u64, bool)) -> Result<SearchResult> {
    let (witness, nodes, aborted) = found;
    let outcome = match witness {
        Some(assign) => {
            let c = Coloring::new(s, assign.into_iter().map(Color::from).collect())?;
            apcore::verify_witness(&c, k, r).map_err(|e| Error::BoundViolation(format!("solver produced a bad witness: {e}")))?;
            SearchOutcome::Witness(c)
        }
        None if aborted => SearchOutcome::Inconclusive,
        None => SearchOutcome::Exhausted,
    };
    Ok(SearchResult { outcome, nodes })
}

/// Looks for an exact `r`-coloring of `s` with no rainbow `k`-AP.
///
/// `Exhausted` is a proof that none exists. On `[n]` with prefix pruning on,
/// `cache` must know `aw([m], k)` for every `k <= m < n`.
pub fn find_rainbow_free(s: Structure, k: usize, r: usize, cache: &dyn AwLookup, opts: &SearchOptions) -> Result<SearchResult> {
    let p = Problem::new(s, k, r, cache, opts, None)?;
    if r < k {
        // Too few colors for any rainbow progression.
        if r > s.n {
            return Ok(SearchResult { outcome: SearchOutcome::Exhausted, nodes: 0 });
        }
        let assign = (0..s.n).map(|i| (i + r + 1).saturating_sub(s.n).max(1) as u8).collect();
        return finish(s, k, r, (Some(assign), 0, false));
    }
    finish(s, k, r, run(&p)?)
}

/// As [`find_rainbow_free`], starting from caller-supplied domains
/// (`domains[i]` is a bitmask over colors `1..=r`, bit `c-1` for color `c`).
/// Restricting domains only removes colorings, so an `Exhausted` answer here
/// says nothing about the unrestricted problem.
pub fn find_with_domains(
    s: Structure,
    k: usize,
    r: usize,
    domains: Vec<u64>,
    cache: &dyn AwLookup,
    opts: &SearchOptions,
) -> Result<SearchResult> {
    if domains.len() != s.n {
        return Err(Error::InvalidArgument("one domain per position".into()));
    }
    let p = Problem::new(s, k, r, cache, opts, Some(domains))?;
    finish(s, k, r, run(&p)?)
}

/// Result of an `aw` computation.
#[derive(Clone, Debug)]
pub struct AwComputation {
    pub structure: Structure,
    pub k: usize,
    pub aw: usize,
    /// Exact `(aw-1)`-coloring with no rainbow `k`-AP.
    pub witness: Coloring,
    pub nodes: u64,
    pub seconds: f64,
}

impl AwComputation {
    pub fn record(&self, method: Method) -> AwRecord {
        AwRecord::new(self.structure, self.k, self.aw, Some(self.witness.clone()), method, Some(self.nodes), Some(self.seconds))
    }
}

/// `aw(s, k)` for the cases that need no search: `|S| < k` and `k = 2`.
pub fn trivial_aw(s: Structure, k: usize) -> Option<AwComputation> {
    let n = s.n;
    let (aw, assign): (usize, Vec<Color>) = if n < k {
        (n + 1, (1..=n as Color).collect())
    } else if k == 2 {
        (2, vec![1; n])
    } else {
        return None;
    };
    let witness = Coloring::new(s, assign).expect("trivial witness is exact");
    Some(AwComputation { structure: s, k, aw, witness, nodes: 0, seconds: 0.0 })
}

/// Exact `aw(s, k)`: ascend `r` from the best proven lower bound until the
/// search is exhausted or a witness meets an upper bound. The last witness
/// found certifies `aw - 1`. The closed form for `Z_n, k = 3` only seeds the
/// starting `r`; its upper side is always confirmed by search.
///
/// Missing values `aw([m], k)` for `m < n` (and `m = n` on `Z_n` with
/// `k >= 4`) are computed first and inserted into `cache`.
pub fn compute_aw(s: Structure, k: usize, cache: &mut Store, opts: &SearchOptions) -> Result<AwComputation> {
    if k < 2 {
        return Err(Error::InvalidArgument(format!("k={k} < 2")));
    }
    if let Some(t) = trivial_aw(s, k) {
        return Ok(t);
    }
    if opts.prefix && (s.kind == Kind::Interval || k >= 4) {
        let top = if s.kind == Kind::Interval { s.n - 1 } else { s.n };
        for m in k..=top {
            ensure_aw(Structure::interval(m), k, cache, opts)?;
        }
    }
    let started = Instant::now();
    let report = bounds::bounds_for(s, k, cache);
    let stop = report.provenance.iter().filter(|p| p.side != bounds::Side::Lower && p.rule != "closed-form").map(|p| p.value).min();
    let mut r = report.lower.saturating_sub(1).max(1);
    let first = r;
    let mut best: Option<Coloring> = None;
    let mut nodes = 0;
    loop {
        let res = find_rainbow_free(s, k, r, cache, opts)?;
        nodes += res.nodes;
        match res.outcome {
            SearchOutcome::Witness(c) => {
                best = Some(c);
                r += 1;
                if Some(r) == stop {
                    break;
                }
            }
            SearchOutcome::Exhausted => break,
            SearchOutcome::Inconclusive => return Err(Error::Inconclusive { nodes }),
        }
    }
    let witness = match best {
        Some(w) => w,
        None => {
            return Err(Error::BoundViolation(format!(
                "{s} k={k}: no exact {first}-coloring without a rainbow {k}-AP, but the lower bound {} needs one ({})",
                report.lower,
                report.provenance_summary()
            )))
        }
    };
    if r > report.upper {
        return Err(Error::BoundViolation(format!("{s} k={k}: search found aw={r} above upper bound {}", report.upper)));
    }
    Ok(AwComputation { structure: s, k, aw: r, witness, nodes, seconds: started.elapsed().as_secs_f64() })
}

/// Computes (or reuses) `aw(s, k)` and stores the result.
pub fn ensure_aw(s: Structure, k: usize, cache: &mut Store, opts: &SearchOptions) -> Result<usize> {
    if let Some(v) = cache.lookup(s.kind, s.n, k) {
        return Ok(v);
    }
    let c = compute_aw(s, k, cache, opts)?;
    cache.put(c.record(Method::Search))?;
    Ok(c.aw)
}

/// Size of the largest subset of `[n]` containing no `k`-AP.
///
/// Branch and bound over include/exclude decisions from the left, bounding
/// the unvisited suffix `{i+1..n}` by `sz(n-i, k)` (it is a copy of `[n-i]`),
/// with those smaller values computed first.
pub fn compute_sz(n: usize, k: usize) -> Result<usize> {
    Ok(sz_table(n, k)?[n])
}

/// `sz(m, k)` for every `m <= n`.
pub fn sz_table(n: usize, k: usize) -> Result<Vec<usize>> {
    const LIMIT: usize = 128;
    if n > LIMIT {
        return Err(Error::LimitExceeded { n, limit: LIMIT });
    }
    if k < 3 {
        return Err(Error::InvalidArgument(format!("sz needs k >= 3, got {k}")));
    }
    let mut table = vec![0usize; n + 1];
    for m in 1..=n {
        table[m] = if k > m { m } else { sz_bnb(m, k, &table) };
    }
    Ok(table)
}

fn sz_bnb(n: usize, k: usize, smaller: &[usize]) -> usize {
    // Progressions ending at index x, as masks of their other members.
    let mut ending: Vec<Vec<u128>> = vec![Vec::new(); n];
    for p in enumerate_kaps(Structure::interval(n), k) {
        let idx = p.sorted();
        let last = idx[k - 1] - 1;
        let mask = idx[..k - 1].iter().fold(0u128, |m, &x| m | 1u128 << (x - 1));
        ending[last].push(mask);
    }
    struct Bnb<'a> {
        n: usize,
        ending: &'a [Vec<u128>],
        smaller: &'a [usize],
        best: usize,
    }
    impl Bnb<'_> {
        fn go(&mut self, i: usize, set: u128, size: usize) {
            if size > self.best {
                self.best = size;
            }
            // The unscanned suffix is a copy of [n - i]; at i = 0 that is [n] itself.
            let rest = if i == 0 { self.n } else { self.smaller[self.n - i] };
            if i == self.n || size + rest <= self.best {
                return;
            }
            if self.ending[i].iter().all(|&m| set & m != m) {
                self.go(i + 1, set | 1u128 << i, size + 1);
            }
            self.go(i + 1, set, size);
        }
    }
    let mut b = Bnb { n, ending: &ending, smaller, best: smaller[n - 1] };
    b.go(0, 0, 0);
    b.best
}
