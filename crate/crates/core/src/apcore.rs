//! Ambient structures, arithmetic progressions, colorings and rainbow checks.
//!
//! Everything else in the crate trusts these routines, so they are kept as
//! plain full scans. The only precomputation is [`ApIndex`], which the solver
//! uses to find the progressions touching a position without rescanning.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::{Color, Pos};

/// Which ambient set a [`Structure`] denotes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Kind {
    Interval,
    Cyclic,
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Kind::Interval => "interval",
            Kind::Cyclic => "cyclic",
        })
    }
}

impl FromStr for Kind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "interval" => Ok(Kind::Interval),
            "cyclic" => Ok(Kind::Cyclic),
            other => Err(Error::InvalidArgument(format!("unknown structure `{other}`"))),
        }
    }
}

/// `[n] = {1, .., n}` or `Z_n = {0, .., n-1}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Structure {
    pub kind: Kind,
    pub n: usize,
}

impl Structure {
    pub fn new(kind: Kind, n: usize) -> Self {
        assert!(n >= 1, "structures are nonempty");
        Structure { kind, n }
    }

    pub fn interval(n: usize) -> Self {
        Self::new(Kind::Interval, n)
    }

    pub fn cyclic(n: usize) -> Self {
        Self::new(Kind::Cyclic, n)
    }

    /// Smallest position: 1 for `[n]`, 0 for `Z_n`.
    pub fn first(&self) -> Pos {
        match self.kind {
            Kind::Interval => 1,
            Kind::Cyclic => 0,
        }
    }

    pub fn positions(&self) -> std::ops::Range<Pos> {
        self.first()..self.first() + self.n
    }

    pub fn contains(&self, p: Pos) -> bool {
        self.positions().contains(&p)
    }

    /// Index of a position in `0..n`.
    #[inline]
    pub fn index(&self, p: Pos) -> usize {
        p - self.first()
    }

    #[inline]
    pub fn position(&self, idx: usize) -> Pos {
        idx + self.first()
    }
}

impl fmt::Display for Structure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            Kind::Interval => write!(f, "[{}]", self.n),
            Kind::Cyclic => write!(f, "Z_{}", self.n),
        }
    }
}

/// A `k`-term arithmetic progression with its members in progression order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Progression {
    pub start: Pos,
    pub step: usize,
    pub elems: Vec<Pos>,
}

impl Progression {
    pub fn len(&self) -> usize {
        self.elems.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elems.is_empty()
    }

    /// Members sorted ascending; two progressions with equal sorted sets are the same k-AP.
    pub fn sorted(&self) -> Vec<Pos> {
        let mut v = self.elems.clone();
        v.sort_unstable();
        v
    }
}

impl fmt::Display for Progression {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.elems.iter().map(|p| p.to_string()).collect();
        write!(f, "{{{}}}", parts.join(","))
    }
}

/// The `k` members `a, a+d, .., a+(k-1)d` of a progression in `s`.
pub fn elements(a: Pos, d: usize, k: usize, s: Structure) -> Result<Vec<Pos>> {
    if d == 0 || k < 2 {
        return Err(Error::InvalidArgument(format!("need d >= 1 and k >= 2, got d={d} k={k}")));
    }
    if !s.contains(a) {
        return Err(Error::InvalidArgument(format!("start {a} is not a position of {s}")));
    }
    let n = s.n;
    match s.kind {
        Kind::Interval => {
            if a + (k - 1) * d > n {
                return Err(Error::OutOfRange { a, d, k, n });
            }
            Ok((0..k).map(|i| a + i * d).collect())
        }
        Kind::Cyclic => {
            if n / d.gcd(&n) < k {
                return Err(Error::NonDistinct { a, d, k, n });
            }
            let d = d % n;
            Ok((0..k).map(|i| (a + i * d) % n).collect())
        }
    }
}

/// Every `k`-AP of `s`, once per member set, ordered by the sorted member list.
pub fn enumerate_kaps(s: Structure, k: usize) -> Vec<Progression> {
    assert!(k >= 2, "k-APs need k >= 2");
    let n = s.n;
    let mut out = Vec::new();
    match s.kind {
        Kind::Interval => {
            if k > n {
                return out;
            }
            for d in 1..=(n - 1) / (k - 1) {
                for a in 1..=n - (k - 1) * d {
                    out.push(Progression { start: a, step: d, elems: (0..k).map(|i| a + i * d).collect() });
                }
            }
        }
        Kind::Cyclic => {
            let mut seen = BTreeSet::new();
            for d in 1..n {
                if n / d.gcd(&n) < k {
                    continue;
                }
                for a in 0..n {
                    let elems: Vec<Pos> = (0..k).map(|i| (a + i * d) % n).collect();
                    let mut key = elems.clone();
                    key.sort_unstable();
                    if seen.insert(key) {
                        out.push(Progression { start: a, step: d, elems });
                    }
                }
            }
        }
    }
    out.sort_by_cached_key(|p| p.sorted());
    out
}

/// Total assignment of colors `1..=r` to the positions of a structure.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Coloring {
    structure: Structure,
    assign: Vec<Color>,
    r: usize,
}

impl Coloring {
    /// Builds an exact coloring; `assign[i]` colors position `structure.position(i)`.
    pub fn new(structure: Structure, assign: Vec<Color>) -> Result<Self> {
        if assign.len() != structure.n {
            return Err(Error::InvalidArgument(format!(
                "{} colors for a structure of size {}",
                assign.len(),
                structure.n
            )));
        }
        if assign.contains(&0) {
            return Err(Error::InvalidArgument("color ids start at 1".into()));
        }
        let r = assign.iter().copied().max().unwrap_or(0) as usize;
        let mut used = vec![false; r + 1];
        for &c in &assign {
            used[c as usize] = true;
        }
        if let Some(missing) = (1..=r).find(|&c| !used[c]) {
            return Err(Error::NotExact { missing, r });
        }
        Ok(Coloring { structure, assign, r })
    }

    pub fn structure(&self) -> Structure {
        self.structure
    }

    /// Number of colors.
    pub fn r(&self) -> usize {
        self.r
    }

    pub fn colors(&self) -> &[Color] {
        &self.assign
    }

    pub fn color_at(&self, p: Pos) -> Color {
        self.assign[self.structure.index(p)]
    }

    /// Size of each color class, indexed by color id (index 0 unused).
    pub fn class_sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0; self.r + 1];
        for &c in &self.assign {
            sizes[c as usize] += 1;
        }
        sizes
    }

    /// Whether some color is used exactly once.
    pub fn is_singleton(&self) -> bool {
        self.class_sizes().iter().skip(1).any(|&s| s == 1)
    }

    /// Relabels colors by order of first appearance.
    pub fn canonical(&self) -> Coloring {
        let mut map = vec![0 as Color; self.r + 1];
        let mut next = 0;
        let assign = self
            .assign
            .iter()
            .map(|&c| {
                if map[c as usize] == 0 {
                    next += 1;
                    map[c as usize] = next;
                }
                map[c as usize]
            })
            .collect();
        Coloring { structure: self.structure, assign, r: self.r }
    }

    /// Merges the two highest colors, giving an exact `(r-1)`-coloring.
    /// A merge never creates a rainbow progression.
    pub fn merge_top_colors(&self) -> Option<Coloring> {
        if self.r < 2 {
            return None;
        }
        let top = self.r as Color;
        let assign = self.assign.iter().map(|&c| if c == top { top - 1 } else { c }).collect();
        Some(Coloring { structure: self.structure, assign, r: self.r - 1 })
    }

    /// Color permutation: color `c` becomes `perm[c - 1]`.
    pub fn permuted(&self, perm: &[Color]) -> Result<Coloring> {
        Coloring::new(self.structure, self.assign.iter().map(|&c| perm[c as usize - 1]).collect())
    }

    /// `b_i`: the least prefix length showing `i` distinct colors, for `i = 1..=r`.
    /// Only meaningful on `[n]`.
    pub fn first_occurrences(&self) -> Vec<usize> {
        let mut seen = vec![false; self.r + 1];
        let mut out = Vec::with_capacity(self.r);
        for (i, &c) in self.assign.iter().enumerate() {
            if !seen[c as usize] {
                seen[c as usize] = true;
                out.push(i + 1);
            }
        }
        out
    }

    /// Header line of the text format.
    pub fn header(&self) -> String {
        format!("structure={} n={} r={}", self.structure.kind, self.structure.n, self.r)
    }

    /// The color ids separated by single spaces.
    pub fn body(&self) -> String {
        let parts: Vec<String> = self.assign.iter().map(|c| c.to_string()).collect();
        parts.join(" ")
    }

    /// Header plus one body line.
    pub fn to_text(&self) -> String {
        format!("{}\n{}\n", self.header(), self.body())
    }
}

impl fmt::Display for Coloring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.body())
    }
}

/// Parses the coloring text format: a header
/// `structure=<interval|cyclic> n=<n> r=<r>` followed by one coloring per line.
pub fn parse_colorings(text: &str) -> Result<Vec<Coloring>> {
    let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
    let (hline, header) = lines.next().ok_or(Error::Parse { line: 1, msg: "empty input".into() })?;
    let perr = |line: usize, msg: String| Error::Parse { line: line + 1, msg };
    let mut kind = None;
    let mut n = None;
    let mut r = None;
    for field in header.split_whitespace() {
        let (key, value) = field.split_once('=').ok_or_else(|| perr(hline, format!("bad header field `{field}`")))?;
        match key {
            "structure" => kind = Some(value.parse::<Kind>().map_err(|e| perr(hline, e.to_string()))?),
            "n" => n = Some(value.parse::<usize>().map_err(|e| perr(hline, e.to_string()))?),
            "r" => r = Some(value.parse::<usize>().map_err(|e| perr(hline, e.to_string()))?),
            _ => return Err(perr(hline, format!("unknown header key `{key}`"))),
        }
    }
    let (kind, n, r) = match (kind, n, r) {
        (Some(kind), Some(n), Some(r)) if n >= 1 => (kind, n, r),
        _ => return Err(perr(hline, "header needs structure, n >= 1 and r".into())),
    };
    let s = Structure::new(kind, n);
    let mut out = Vec::new();
    for (line, body) in lines {
        let assign = body
            .split_whitespace()
            .map(|t| t.parse::<Color>().map_err(|e| perr(line, format!("`{t}`: {e}"))))
            .collect::<Result<Vec<_>>>()?;
        if assign.len() != n {
            return Err(perr(line, format!("expected {n} colors, found {}", assign.len())));
        }
        let c = Coloring::new(s, assign).map_err(|e| perr(line, e.to_string()))?;
        if c.r() != r {
            return Err(perr(line, format!("header says r={r} but the coloring uses {}", c.r())));
        }
        out.push(c);
    }
    if out.is_empty() {
        return Err(perr(hline, "no coloring after the header".into()));
    }
    Ok(out)
}

/// Whether the colors on `p` are pairwise distinct.
pub fn is_rainbow(c: &Coloring, p: &Progression) -> bool {
    let mut seen = BTreeSet::new();
    p.elems.iter().all(|&x| seen.insert(c.color_at(x)))
}

/// First rainbow `k`-AP in enumeration order, if any.
pub fn find_rainbow_kap(c: &Coloring, k: usize) -> Option<Progression> {
    enumerate_kaps(c.structure(), k).into_iter().find(|p| is_rainbow(c, p))
}

/// Full scan for a rainbow `k`-AP.
pub fn has_rainbow_kap(c: &Coloring, k: usize) -> bool {
    find_rainbow_kap(c, k).is_some()
}

/// Full re-verification used before any witness is reported: exact with
/// `colors` colors and free of rainbow `k`-APs.
pub fn verify_witness(c: &Coloring, k: usize, colors: usize) -> Result<()> {
    if c.r() != colors {
        return Err(Error::PreconditionFailed(format!("witness uses {} colors, expected {colors}", c.r())));
    }
    if let Some(p) = find_rainbow_kap(c, k) {
        return Err(Error::PreconditionFailed(format!("witness has rainbow {k}-AP {p}")));
    }
    Ok(())
}

/// Progressions of one `(structure, k)` as position indices, with per-index incidence lists.
#[derive(Clone, Debug)]
pub struct ApIndex {
    pub structure: Structure,
    pub k: usize,
    /// Member indices of each progression, sorted ascending, `k` per progression.
    members: Vec<u32>,
    /// `incidence[i]`: progressions containing index `i`.
    incidence: Vec<Vec<u32>>,
}

impl ApIndex {
    pub fn new(s: Structure, k: usize) -> Self {
        let aps = enumerate_kaps(s, k);
        let mut members = Vec::with_capacity(aps.len() * k);
        let mut incidence = vec![Vec::new(); s.n];
        for (id, p) in aps.iter().enumerate() {
            for x in p.sorted() {
                let i = s.index(x);
                members.push(i as u32);
                incidence[i].push(id as u32);
            }
        }
        ApIndex { structure: s, k, members, incidence }
    }

    pub fn len(&self) -> usize {
        self.members.len() / self.k.max(1)
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// Sorted member indices of progression `id`.
    #[inline]
    pub fn members(&self, id: usize) -> &[u32] {
        &self.members[id * self.k..(id + 1) * self.k]
    }

    pub fn containing(&self, idx: usize) -> impl Iterator<Item = &[u32]> + '_ {
        self.incidence[idx].iter().map(move |&id| self.members(id as usize))
    }

    pub fn iter(&self) -> impl Iterator<Item = &[u32]> + '_ {
        self.members.chunks_exact(self.k)
    }
}
